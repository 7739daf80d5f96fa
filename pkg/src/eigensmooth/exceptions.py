"""Exception hierarchy. The CLI maps ConfigError to exit code 2."""


class EigensmoothError(Exception):
    """Base class for all package errors."""


class ConfigError(EigensmoothError):
    """Bad descriptor, unknown name, or invalid configuration value."""


class ResolutionError(EigensmoothError):
    """A quadrature or synthesis grid is too coarse for the requested bandwidth."""


class UnsupportedSeminormError(EigensmoothError):
    """Seminorm not available on this manifold (e.g. sup-derivatives on the sphere)."""


class UndefinedPlateauError(EigensmoothError):
    """Operation requires a symbol with a plateau radius."""


class GridLevelError(EigensmoothError):
    """Staged-symbol index would overflow; level and epsilon grid are mismatched."""


class ScheduleError(EigensmoothError):
    """Plateau-radius schedule decays too fast to be usable."""


class DataError(EigensmoothError):
    """Rate fitting received unusable data (non-positive or too few samples)."""


class MisuseError(EigensmoothError):
    """Operation called with arguments outside its contract (e.g. probe inside support)."""
