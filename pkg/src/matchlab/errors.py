"""Exception types shared across the package."""


class MatchlabError(Exception):
    """Base class for package-specific failures."""


class OverlapError(MatchlabError, ValueError):
    """Avoid-set and meet-set passed to a filter intersect."""


class SizeError(MatchlabError, ValueError):
    """A member set is larger than allowed (e.g. a generator member exceeds k)."""


class CapacityError(MatchlabError, ValueError):
    """The edge universe is too large to index with 63-bit ranks."""


class RangeError(MatchlabError, ValueError):
    """A numeric argument lies outside the documented domain."""


class NotResilientError(MatchlabError, ValueError):
    """A construction requiring vertex-deletion resilience was given a family without it."""


class ClassificationError(MatchlabError, RuntimeError):
    """An internal structural guarantee failed; indicates a solver bug."""


class ExplosionError(MatchlabError, RuntimeError):
    """An enumeration exceeded its configured cap."""


class InvalidPartitionError(MatchlabError, ValueError):
    """A vertex partition does not satisfy the structural side conditions."""


class ScaleError(MatchlabError, RuntimeError):
    """An exact search was asked to run beyond its documented size limits."""


class ConfigError(MatchlabError, ValueError):
    """A campaign configuration file is malformed or inconsistent."""
