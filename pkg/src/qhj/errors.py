"""Exception types shared across the package."""


class QhjError(Exception):
    """Base class for all package-specific errors."""


class UnknownModelError(QhjError):
    """Requested catalog id does not exist."""


class ParameterError(QhjError):
    """Model parameter missing, of the wrong type, or out of range."""


class SingularPointError(QhjError):
    """Potential (or wavefunction prefactor) evaluated at one of its poles."""


class UnsupportedExpansionError(QhjError):
    """Large-argument expansion outside the supported pattern (G0=0, G1!=0)."""


class EnergyRequiredError(QhjError):
    """An energy-dependent quantity was requested without an energy."""


class NoAdmissibleAssignmentError(QhjError):
    """Every residue assignment was rejected; parameters lie outside all phases."""


class NonlinearEnergyError(QhjError):
    """Pencil construction requires the identity to be at most linear in energy."""


class GridTooCoarseError(QhjError):
    """Grid-refinement disagreement exceeded the requested tolerance."""


class InvalidStateError(QhjError):
    """Requested state index does not exist in the computed spectrum."""
