"""Exception taxonomy shared by all modules.

Every exception derives from :class:`CarlemanLabError` so callers can catch
library failures in one clause; the subclasses mirror the distinct failure
modes of the contracts (resolution limits, geometry degeneracy, routing of
relocation curves, linear-solver breakdown, configuration problems).
"""

from __future__ import annotations


class CarlemanLabError(Exception):
    """Base class for all library errors."""


class ConfigError(CarlemanLabError):
    """Invalid or inconsistent experiment configuration."""


class PreconditionError(CarlemanLabError, ValueError):
    """An operation contract was violated by the caller (bad parameter,
    mismatched shapes, unsupported request)."""


class GridAlignmentError(CarlemanLabError):
    """Interface cannot be aligned to the requested resolution."""


class ResolutionError(CarlemanLabError):
    """Grid or time resolution too coarse for the requested construction."""


class NeighborhoodTooThinError(ResolutionError):
    """A certified interface neighborhood came out thinner than two cells."""


class TensorDataError(CarlemanLabError):
    """Coefficient tensor contains non-finite entries."""


class SingularTimeError(CarlemanLabError, ValueError):
    """Weight-family evaluation requested at a singular time endpoint."""


class DegenerateNormalError(CarlemanLabError):
    """Normal derivative of a weight vanishes at the interface, so the
    interface scaling factor is undefined."""


class RoutingError(CarlemanLabError):
    """Relocation curves cannot be made pairwise disjoint."""


class FlowIntegrationError(CarlemanLabError):
    """A relocation flow left the subdomain during integration."""


class SolverError(CarlemanLabError):
    """Iterative linear solver failed to converge."""


class AssemblyError(CarlemanLabError):
    """Assembled system is not positive definite (coefficient violation)."""


class GeometryNotSupportedError(CarlemanLabError):
    """Operation not available for this geometry kind."""
