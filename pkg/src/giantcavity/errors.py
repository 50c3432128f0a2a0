"""Exception types shared across the package."""


class GiantCavityError(ValueError):
    pass


class ConfigError(GiantCavityError):
    """Inconsistent run configuration: grids, delays, records, files."""


class ModelError(GiantCavityError):
    """A state-space model or parameter set violates a structural requirement."""
