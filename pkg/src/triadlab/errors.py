"""Exception types shared across the package."""


class TriadLabError(Exception):
    """Base class for all package-specific errors."""


class EllipticDomainError(TriadLabError, ValueError):
    """Input outside the domain of an elliptic-function operation."""


class EllipticDivergenceError(TriadLabError, ValueError):
    """Quarter period requested at (or within rounding of) modulus 1."""


class ResonanceError(TriadLabError, ValueError):
    """Coupling coefficients do not sum to zero within tolerance."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class SignConventionError(TriadLabError, ValueError):
    """Coupling coefficients violate the gamma1 < 0 < gamma2, gamma3 layout."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class UnsupportedInitialCondition(TriadLabError, ValueError):
    """Initial data outside the family the closed form is derived for."""


class AmplitudeOrderingError(TriadLabError, ValueError):
    """Initial magnitudes violate |psi03| < |psi02| or |psi02| > 0."""


class ModulusError(TriadLabError, ValueError):
    """Derived elliptic modulus falls outside [0, 1)."""


class EnvelopeConsistencyError(TriadLabError, ValueError):
    """Spatial envelope coefficients violate a product relation."""

    def __init__(self, message, relation):
        super().__init__(message)
        self.relation = relation


class StiffnessError(TriadLabError, RuntimeError):
    """Adaptive step size underflowed; the inputs are out of range."""


class InsufficientSpanError(TriadLabError, ValueError):
    """Trajectory too short to measure a period."""


class BlowupError(TriadLabError, RuntimeError):
    """Field value overflowed during time stepping."""

    def __init__(self, message, grid_index, time):
        super().__init__(message)
        self.grid_index = grid_index
        self.time = time


class GridCompatibilityError(TriadLabError, ValueError):
    """Domain length incompatible with the carrier wavenumbers."""


class ConfigError(TriadLabError, ValueError):
    """Malformed or invalid run configuration."""
