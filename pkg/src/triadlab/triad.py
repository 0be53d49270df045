"""Domain model of the resonant triad and its closed-form solution.

The amplitude magnitudes evolve as |f_j|^2(t) = |psi0_j|^2 + 2*gamma_j*Z(t)
with Z a negative multiple of sn^2.  Two sets of closed-form constants are
carried side by side:

``AsPrinted``
    The original published constants: pole shifts |psi0_j|^2 / gamma_j and
    argument rate sqrt(2*|gamma1|*gamma3) * |psi02|.
``OracleConsistent``
    The energy-consistent constants derived from the magnitude identities:
    pole shifts |psi0_j|^2 / (2*gamma_j) and rate sqrt(|gamma1|*gamma3) *
    |psi02|.  The ODE oracle (``triadlab.oracle``) adjudicates between the
    two; the test suite pins the outcome.

Both variants share the modulus k = (|psi03|/|psi02|) * sqrt(gamma2/gamma3).
Negative intensities produced by the AsPrinted constants are tagged
``nonphysical`` and never clamped: they are diagnostic evidence.
"""

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import EllipticModulus, complete_elliptic_k, sn_squared, sn_squared_array
from .errors import (
    AmplitudeOrderingError,
    EnvelopeConsistencyError,
    ModulusError,
    ResonanceError,
    SignConventionError,
    UnsupportedInitialCondition,
)

__all__ = [
    "RESONANCE_RTOL",
    "TriadParameters",
    "InitialAmplitudes",
    "FormulaVariant",
    "ClosedFormSolution",
    "SpatialEnvelope",
    "AmplitudeSquares",
    "IntensitySample",
    "HelmholtzReport",
    "build_parameters",
    "build_closed_form",
    "predicted_period",
    "z_of_t",
    "amplitude_squared",
    "amplitude_squared_array",
    "product_envelope",
    "envelope_eval",
    "envelope_profile",
    "verify_helmholtz",
    "field_intensity",
    "as_printed_intensity",
]

# Couplings are user-specified exact-intent reals; looser physical
# tolerances belong in the application layer.
RESONANCE_RTOL = 1e-12

_ENVELOPE_RTOL = 1e-12


class FormulaVariant(enum.Enum):
    """Closed-form constant set; see the module docstring."""

    AS_PRINTED = "as-printed"
    ORACLE_CONSISTENT = "oracle-consistent"


@dataclass(frozen=True)
class TriadParameters:
    """Coefficient set (alpha_j, delta_j, gamma_j) of the coupled system.

    Invariants enforced at construction: delta2 = delta3 = delta1/2,
    sum(gamma) = 0 to within ``RESONANCE_RTOL``, and the sign layout
    gamma1 < 0 < gamma2, gamma3.
    """

    alpha: tuple
    delta: tuple
    gamma: tuple

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        delta = tuple(float(d) for d in self.delta)
        gamma = tuple(float(g) for g in self.gamma)
        if len(alpha) != 3 or len(delta) != 3 or len(gamma) != 3:
            raise ValueError("alpha, delta, gamma must each have three entries")
        for name, values in (("alpha", alpha), ("delta", delta), ("gamma", gamma)):
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"{name} contains a non-finite entry: {values}")
        if delta[0] <= 0.0:
            raise ValueError(f"delta1 must be positive, got {delta[0]}")
        if delta[1] != delta[0] / 2.0 or delta[2] != delta[0] / 2.0:
            raise ValueError(
                "carrier wavenumbers must satisfy delta2 = delta3 = delta1/2"
            )
        residual = gamma[0] + gamma[1] + gamma[2]
        scale = max(abs(g) for g in gamma)
        if scale > 0.0 and abs(residual) > RESONANCE_RTOL * scale:
            raise ResonanceError(
                f"couplings must sum to zero for a resonant triad; "
                f"residual {residual!r} exceeds {RESONANCE_RTOL} * {scale!r}",
                residual,
            )
        if gamma[0] >= 0.0 or gamma[1] <= 0.0 or gamma[2] <= 0.0:
            if gamma[0] >= 0.0:
                offending = 1
            elif gamma[1] <= 0.0:
                offending = 2
            else:
                offending = 3
            negatives = [i for i, g in enumerate(gamma) if g < 0.0]
            hint = ""
            if len(negatives) == 1 and negatives[0] != 0:
                order = _suggest_permutation(gamma)
                hint = f"; reorder the waves as {order} to put the negative coupling first"
            raise SignConventionError(
                f"gamma{offending} has the wrong sign: gamma1 must be the single "
                f"negative coupling, with gamma2, gamma3 > 0; got gamma = {gamma}{hint}",
                offending,
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "gamma", gamma)


def _suggest_permutation(gamma):
    neg = min(range(3), key=lambda i: gamma[i])
    rest = [i for i in range(3) if i != neg]
    return tuple(i + 1 for i in (neg, *rest))


def build_parameters(alpha, delta1, gamma) -> TriadParameters:
    """Validated TriadParameters from dispersion, carrier and couplings.

    ``delta1`` is the first carrier wavenumber; the other two are set to
    delta1/2 as the product coupling relations require.
    """
    delta1 = float(delta1)
    if not math.isfinite(delta1) or delta1 <= 0.0:
        raise ValueError(f"delta1 must be a positive finite real, got {delta1!r}")
    return TriadParameters(
        alpha=tuple(alpha), delta=(delta1, delta1 / 2.0, delta1 / 2.0), gamma=tuple(gamma)
    )


@dataclass(frozen=True)
class InitialAmplitudes:
    """Complex amplitude seeds (psi01, psi02, psi03).

    The closed form is derived for psi01 = 0 with |psi03| < |psi02|;
    construction enforces both.
    """

    psi0: tuple

    def __post_init__(self):
        psi0 = tuple(complex(p) for p in self.psi0)
        if len(psi0) != 3:
            raise ValueError("psi0 must have three entries")
        if any(not cmath.isfinite(p) for p in psi0):
            raise ValueError(f"psi0 contains a non-finite entry: {psi0}")
        if psi0[0] != 0:
            raise UnsupportedInitialCondition(
                f"the closed form requires psi01 = 0, got {psi0[0]!r}"
            )
        if abs(psi0[1]) <= 0.0:
            raise AmplitudeOrderingError("|psi02| must be positive")
        if abs(psi0[2]) >= abs(psi0[1]):
            raise AmplitudeOrderingError(
                f"|psi03| must be smaller than |psi02|; got "
                f"|psi03| = {abs(psi0[2])!r}, |psi02| = {abs(psi0[1])!r}"
            )
        object.__setattr__(self, "psi0", psi0)


@dataclass(frozen=True)
class ClosedFormSolution:
    """Precomputed constants enabling O(1) evaluation of |f_j|^2(t).

    ``pole_shift3`` is the variant-resolved wave-3 pole shift entering
    Z(t) = -pole_shift3 * sn^2(u_rate * t, k).
    """

    params: TriadParameters
    init: InitialAmplitudes
    variant: FormulaVariant
    modulus: EllipticModulus
    u_rate: float
    quarter_period: float
    pole_shift3: float = field(init=False)
    psi0_sq: tuple = field(init=False)

    def __post_init__(self):
        g3 = self.params.gamma[2]
        p3_sq = abs(self.init.psi0[2]) ** 2
        if self.variant is FormulaVariant.AS_PRINTED:
            shift = p3_sq / g3
        else:
            shift = p3_sq / (2.0 * g3)
        object.__setattr__(self, "pole_shift3", shift)
        object.__setattr__(
            self, "psi0_sq", tuple(abs(p) ** 2 for p in self.init.psi0)
        )

    @property
    def k(self) -> float:
        return self.modulus.k

    @property
    def period(self) -> float:
        """Temporal period of all |f_j|^2: 2K(k) / u_rate."""
        return 2.0 * self.quarter_period / self.u_rate


def build_closed_form(
    params: TriadParameters, init, variant: FormulaVariant
) -> ClosedFormSolution:
    """Assemble the closed-form constants for one variant.

    Raises ModulusError when (|psi03|/|psi02|) * sqrt(gamma2/gamma3) >= 1
    (the sn-based form has no periodic solution there).
    """
    if not isinstance(init, InitialAmplitudes):
        init = InitialAmplitudes(tuple(init))
    if not isinstance(variant, FormulaVariant):
        variant = FormulaVariant(variant)
    g1, g2, g3 = params.gamma
    p2 = abs(init.psi0[1])
    p3 = abs(init.psi0[2])
    k = (p3 / p2) * math.sqrt(g2 / g3)
    if k >= 1.0:
        raise ModulusError(
            f"elliptic modulus k = {k!r} >= 1; need |psi03|/|psi02| * "
            f"sqrt(gamma2/gamma3) < 1"
        )
    modulus = EllipticModulus(k)
    if variant is FormulaVariant.AS_PRINTED:
        u_rate = math.sqrt(2.0 * abs(g1) * g3) * p2
    else:
        u_rate = math.sqrt(abs(g1) * g3) * p2
    return ClosedFormSolution(
        params=params,
        init=init,
        variant=variant,
        modulus=modulus,
        u_rate=u_rate,
        quarter_period=complete_elliptic_k(modulus),
    )


def predicted_period(params: TriadParameters, init, variant: FormulaVariant) -> float:
    """2K(k)/u_rate for the given variant without keeping the solution."""
    return build_closed_form(params, init, variant).period


def z_of_t(sol: ClosedFormSolution, t: float) -> float:
    """Z(t) = -pole_shift3 * sn^2(u_rate * t, k); Z(0) = 0, Z <= 0."""
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    return -sol.pole_shift3 * sn_squared(sol.u_rate * t, sol.modulus)


class AmplitudeSquares(tuple):
    """|f_j|^2 triple with per-wave nonphysical flags."""

    __slots__ = ()

    def __new__(cls, values, nonphysical):
        self = super().__new__(cls, (tuple(values), tuple(nonphysical)))
        return self

    @property
    def values(self):
        return self[0]

    @property
    def nonphysical(self):
        return self[1]


def amplitude_squared(sol: ClosedFormSolution, t: float) -> AmplitudeSquares:
    """|f_j|^2(t) = |psi0_j|^2 + 2*gamma_j*Z(t) for the solution's variant.

    Negative values (the AsPrinted wave-3 factor passes through
    1 - 2 sn^2) are returned as-is and flagged nonphysical.
    """
    z = z_of_t(sol, t)
    values = tuple(
        p_sq + 2.0 * g * z for p_sq, g in zip(sol.psi0_sq, sol.params.gamma)
    )
    return AmplitudeSquares(values, tuple(v < 0.0 for v in values))


def amplitude_squared_array(sol: ClosedFormSolution, t):
    """Vectorized |f_j|^2 over an array of times.

    Returns (values, nonphysical) with shapes (3, n) and (3, n).
    """
    t = np.asarray(t, dtype=float)
    sn_sq = sn_squared_array(sol.u_rate * t, sol.modulus)
    z = -sol.pole_shift3 * sn_sq
    gamma = np.asarray(sol.params.gamma)[:, None]
    p_sq = np.asarray(sol.psi0_sq)[:, None]
    values = p_sq + 2.0 * gamma * z
    return values, values < 0.0


# ---------------------------------------------------------------------------
# Spatial envelopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpatialEnvelope:
    """Coefficients of g_j(x) = a_j exp(i delta_j x) + b_j exp(-i delta_j x).

    Construction enforces the product-consistency relations that make
    g1 = g2 * g3 hold identically when delta2 = delta3 = delta1/2:
    a1 = a2*a3, b1 = b2*b3, and a2*b3 + a3*b2 = 0.
    """

    coeff_plus: tuple
    coeff_minus: tuple

    def __post_init__(self):
        a = tuple(complex(v) for v in self.coeff_plus)
        b = tuple(complex(v) for v in self.coeff_minus)
        if len(a) != 3 or len(b) != 3:
            raise ValueError("coefficient triples must have three entries")
        if any(not cmath.isfinite(v) for v in (*a, *b)):
            raise ValueError("envelope coefficients must be finite")
        scale = max(
            1e-300,
            max(abs(v) for v in (a[1], b[1])) * max(abs(v) for v in (a[2], b[2])),
        )
        checks = (
            ("a1 = a2*a3", a[0] - a[1] * a[2]),
            ("b1 = b2*b3", b[0] - b[1] * b[2]),
            ("a2*b3 + a3*b2 = 0", a[1] * b[2] + a[2] * b[1]),
        )
        for relation, residual in checks:
            if abs(residual) > _ENVELOPE_RTOL * scale:
                raise EnvelopeConsistencyError(
                    f"envelope violates {relation} (residual {abs(residual):.3e}, "
                    f"scale {scale:.3e})",
                    relation,
                )
        object.__setattr__(self, "coeff_plus", a)
        object.__setattr__(self, "coeff_minus", b)


def product_envelope(a2, b2, a3, b3) -> SpatialEnvelope:
    """Envelope with wave-1 coefficients derived from the wave-2/3 ones."""
    a2, b2, a3, b3 = complex(a2), complex(b2), complex(a3), complex(b3)
    return SpatialEnvelope(
        coeff_plus=(a2 * a3, a2, a3), coeff_minus=(b2 * b3, b2, b3)
    )


def envelope_eval(env: SpatialEnvelope, params: TriadParameters, x: float):
    """(g1, g2, g3) at position x."""
    return tuple(
        a * cmath.exp(1j * d * x) + b * cmath.exp(-1j * d * x)
        for a, b, d in zip(env.coeff_plus, env.coeff_minus, params.delta)
    )


def envelope_profile(env: SpatialEnvelope, params: TriadParameters, x) -> np.ndarray:
    """(3, n) complex array of g_j over an array of positions."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(env.coeff_plus)[:, None]
    b = np.asarray(env.coeff_minus)[:, None]
    d = np.asarray(params.delta)[:, None]
    return a * np.exp(1j * d * x[None, :]) + b * np.exp(-1j * d * x[None, :])


@dataclass(frozen=True)
class HelmholtzReport:
    """Max |g_j'' + delta_j^2 g_j| per wave from exact differentiation."""

    residuals: tuple
    max_residual: float
    scale: float


def verify_helmholtz(
    env: SpatialEnvelope, params: TriadParameters, x_samples=None
) -> HelmholtzReport:
    """Residual of the spatial eigenvalue equation, term-by-term exact.

    Each exponential is differentiated analytically ((i delta)^2 factor),
    so the residual is pure floating-point cancellation -- zero to
    round-off for any coefficients.
    """
    if x_samples is None:
        x_samples = np.linspace(-10.0, 10.0, 64)
    x = np.asarray(x_samples, dtype=float)
    residuals = []
    scale = 0.0
    for a, b, d in zip(env.coeff_plus, env.coeff_minus, params.delta):
        plus = a * np.exp(1j * d * x)
        minus = b * np.exp(-1j * d * x)
        second = (1j * d) ** 2 * plus + (-1j * d) ** 2 * minus
        residual = second + d * d * (plus + minus)
        residuals.append(float(np.max(np.abs(residual))))
        scale = max(scale, d * d * float(np.max(np.abs(plus + minus))))
    return HelmholtzReport(tuple(residuals), max(residuals), scale)


class IntensitySample(tuple):
    """|Psi_j|^2 triple with per-wave nonphysical flags."""

    __slots__ = ()

    def __new__(cls, values, nonphysical):
        return super().__new__(cls, (tuple(values), tuple(nonphysical)))

    @property
    def values(self):
        return self[0]

    @property
    def nonphysical(self):
        return self[1]


def field_intensity(
    sol: ClosedFormSolution, env: SpatialEnvelope, x: float, t: float
) -> IntensitySample:
    """Separable intensity |Psi_j(x,t)|^2 = |g_j(x)|^2 * |f_j|^2(t)."""
    g = envelope_eval(env, sol.params, x)
    amps = amplitude_squared(sol, t)
    values = tuple(abs(gj) ** 2 * fj for gj, fj in zip(g, amps.values))
    return IntensitySample(values, tuple(v < 0.0 for v in values))


def as_printed_intensity(sol: ClosedFormSolution, x: float, t: float) -> IntensitySample:
    """Intensity with the originally published spatial brackets.

    Multiplies |f_j|^2(t) by 2*cos(m_j * delta * x) with m = (2, 1, 1):
    the doubled carrier for wave 1 and the bare carrier for waves 2-3,
    exactly as published.  The product can be negative; such values are
    flagged nonphysical, never clamped.
    """
    delta = sol.params.delta[0]
    amps = amplitude_squared(sol, t)
    brackets = (
        2.0 * math.cos(2.0 * delta * x),
        2.0 * math.cos(delta * x),
        2.0 * math.cos(delta * x),
    )
    values = tuple(br * fj for br, fj in zip(brackets, amps.values))
    return IntensitySample(values, tuple(v < 0.0 for v in values))
