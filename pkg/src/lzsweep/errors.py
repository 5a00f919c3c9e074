"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`LZError`;
the CLI maps the three families below onto its exit codes.
"""


class LZError(Exception):
    """Base class for library errors."""

    exit_code = 1


class InputError(LZError, ValueError):
    """Bad argument, malformed file, or violated precondition (exit code 1)."""

    exit_code = 1


class ContractError(InputError):
    """An object does not satisfy a documented invariant."""


class ResolutionError(InputError):
    """Too few samples to estimate the requested derivatives."""


class DegenerateError(InputError):
    """Geometric degeneracy: zero speed, zero curvature, planar binormal, ..."""


class DomainError(InputError):
    """A value left the region where a construction is defined."""


class VerificationError(LZError):
    """A computed property failed its check (exit code 2)."""

    exit_code = 2


class SolverError(LZError, RuntimeError):
    """An iterative solver did not converge (exit code 3).

    Attributes
    ----------
    best : object
        Best iterate found, when meaningful.
    residual : float
        Objective value at ``best``.
    """

    exit_code = 3

    def __init__(self, message, best=None, residual=float("nan")):
        super().__init__(message)
        self.best = best
        self.residual = residual


class StiffnessError(SolverError):
    """The propagator could not resolve the waveform."""
