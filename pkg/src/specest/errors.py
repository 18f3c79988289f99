"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2,
ResourceLimitError -> 3, NumericError (and other failures) -> 4.
"""


class SpecEstError(Exception):
    """Base class for package-specific failures."""


class ConfigError(SpecEstError, ValueError):
    """Invalid or inconsistent experiment configuration."""


class ResourceLimitError(SpecEstError, RuntimeError):
    """A configured size/budget cap would be exceeded (dense dimension, path-expansion nodes)."""


class NumericError(SpecEstError, RuntimeError):
    """A numerical routine failed to converge or returned unusable output."""


class StoquasticityError(SpecEstError, ValueError):
    """An operator required to be stoquastic / elementwise nonnegative is not."""


class UnitarityError(SpecEstError, ValueError):
    """A matrix required to be unitary is not, beyond tolerance."""


class ScalingError(SpecEstError, ValueError):
    """Singular values or eigenvalues fall outside the required interval."""


class RankError(SpecEstError, ValueError):
    """Requested model order is incompatible with the data size."""


class EmptyModelError(SpecEstError, ValueError):
    """Singular-value filtering retained no components."""
