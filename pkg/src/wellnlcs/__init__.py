"""Nonlinear coherent states of an exciton confined in a spherical quantum dot.

The chain runs from spherical Bessel zeros (:mod:`.specfun`) through the
well's f-deformed ladder algebra (:mod:`.algebra`) to the drive-selected
nonlinear coherent state (:mod:`.nlcs`), its squeezing diagnostics
(:mod:`.observables`) and the dark-state check of the sideband
Hamiltonian (:mod:`.dynamics`).
"""

__version__ = "0.1.0"

from .algebra import Undeformed, WellDeformation  # noqa: E402
from .errors import (  # noqa: E402
    BracketingError,
    NLCSError,
    NoConvergenceError,
    SingularDeformationError,
    TableExhaustedError,
    TruncationError,
)
from .nlcs import DriveDeformation, DriveParams, FockState, build_state  # noqa: E402
from .specfun import BesselZeroTable, bessel_zeros, spherical_bessel_j  # noqa: E402

__all__ = [
    "BesselZeroTable",
    "BracketingError",
    "DriveDeformation",
    "DriveParams",
    "FockState",
    "NLCSError",
    "NoConvergenceError",
    "SingularDeformationError",
    "TableExhaustedError",
    "TruncationError",
    "Undeformed",
    "WellDeformation",
    "bessel_zeros",
    "build_state",
    "spherical_bessel_j",
]
