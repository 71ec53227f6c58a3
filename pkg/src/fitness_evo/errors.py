"""Exception hierarchy shared by all fitness_evo modules."""


class FitnessEvoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FitnessEvoError, ValueError):
    """An argument is outside the documented domain (e.g. fitness not in [0,1])."""


class ConstructionError(FitnessEvoError, ValueError):
    """Inputs violate a construction invariant (bad masses, overflow, ...)."""


class SequencingError(FitnessEvoError, RuntimeError):
    """A birth/death step was called at the wrong time parity."""


class EmptyPopulationError(FitnessEvoError, RuntimeError):
    """An operation that needs live species was called on an empty population."""


class RegimeError(FitnessEvoError, ValueError):
    """The requested quantity is undefined in this parameter regime.

    Raised instead of silently returning 0 so that callers (in particular the
    CLI) must surface the undefined state explicitly.
    """


class ConvergenceError(FitnessEvoError, RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class ConfigError(FitnessEvoError, ValueError):
    """A configuration file or dictionary could not be interpreted."""
