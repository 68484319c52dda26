"""Exception hierarchy shared by all modules."""


class NLCSError(Exception):
    """Base class for every error raised by this package."""


class BracketingError(NLCSError):
    """A sign change of j_l could not be located while scanning for zeros."""


class TableExhaustedError(NLCSError):
    """A quantum number beyond the cached Bessel-zero table was requested."""


class SingularDeformationError(NLCSError):
    """The carrier structure function vanishes, so f(n) = F1/F0 is undefined."""

    def __init__(self, n, value):
        self.n = n
        self.value = value
        super().__init__(
            f"singular deformation at n={n}: carrier sum F0({n - 1}) = {value:.3e}"
        )


class NoConvergenceError(NLCSError):
    """The Fock expansion did not decay below the tail tolerance by n_max."""


class TruncationError(NLCSError):
    """The state carries too much weight at the edge of its truncated basis."""
