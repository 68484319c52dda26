"""Two-level exciton coupled to the confined center-of-mass motion.

Basis ordering is ``[|g,0>..|g,N>, |e,0>..|e,N>]``.  The simplified
interaction Hamiltonian is

    H = Omega1 S12 [F0(n, k) Omega0/Omega1 + i k F1(n, k) a] + h.c.,

with ``S12 = |g><e|`` and ``a`` the bare boson lowering operator; every
trace of the well deformation is carried by F0 and F1.
"""

from dataclasses import dataclass
import math

import numpy as np

from .nlcs import DriveDeformation, FockState

__all__ = [
    "CompositeState",
    "build_interaction_hamiltonian",
    "dark_state_residual",
]


@dataclass(frozen=True)
class CompositeState:
    """Product state (g|g> + e|e>) (x) |motional>."""

    motional: FockState
    g: complex = 0.0
    e: complex = 1.0

    @classmethod
    def excited(cls, motional):
        return cls(motional=motional, g=0.0, e=1.0)

    @classmethod
    def ground(cls, motional):
        return cls(motional=motional, g=1.0, e=0.0)

    def vector(self):
        c = self.motional.coeffs
        v = np.concatenate([self.g * c, self.e * c])
        return v / np.linalg.norm(v)


def build_interaction_hamiltonian(wd, drive, N, omega1=1.0, structure=None):
    """Dense 2(N+1) x 2(N+1) Hermitian matrix of the sideband Hamiltonian.

    ``structure`` may pass an existing :class:`DriveDeformation` so its
    memoized F values are reused.
    """
    if N < 1:
        raise ValueError(f"truncation must be >= 1, got {N!r}")
    s = structure if structure is not None else DriveDeformation(wd, drive.kappa)
    dim = N + 1
    H = np.zeros((2 * dim, 2 * dim), dtype=complex)
    for n in range(dim):
        H[n, dim + n] = omega1 * drive.omega_ratio * float(s.F(0, n))
        if n + 1 < dim:
            H[n, dim + n + 1] = omega1 * 1j * drive.kappa * float(s.F(1, n)) * math.sqrt(n + 1)
    H += H.conj().T
    return H


def dark_state_residual(H, state, omega1=1.0):
    """||H |state>|| / (Omega1 ||state||)."""
    v = state.vector() if isinstance(state, CompositeState) else np.asarray(state)
    if H.shape[0] != v.shape[0]:
        raise ValueError(f"dimension mismatch: H is {H.shape[0]}, state is {v.shape[0]}")
    return float(np.linalg.norm(H @ v) / (omega1 * np.linalg.norm(v)))
