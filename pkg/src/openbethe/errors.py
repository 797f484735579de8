"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes: validation problems exit
with 1, numerical failures (convergence, degeneracies, singular phase
evaluations) with 2, and capacity overruns with 3.
"""


class OpenBetheError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(OpenBetheError):
    """Malformed input: bad quantum numbers, inconsistent sizes, bad flags."""


class CapacityError(OpenBetheError):
    """Requested register or matrix exceeds the supported size."""


class SingularPhaseError(OpenBetheError):
    """Scattering-phase quotient hit 0/0 (degenerate momentum pair)."""


class ConvergenceError(OpenBetheError):
    """Root iteration failed to converge; carries the last iterate."""

    def __init__(self, message, last_roots=None, iterations=None):
        super().__init__(message)
        self.last_roots = tuple(last_roots) if last_roots is not None else None
        self.iterations = iterations


class DegenerateSolutionError(OpenBetheError):
    """Solved momenta collided with each other or with the domain boundary."""


class NullStateError(OpenBetheError):
    """All configuration amplitudes vanished; no state to normalize."""


class ImpossibleOutcomeError(OpenBetheError):
    """Projection onto a subregister outcome has (numerically) zero weight."""
