"""Acoustic gravity-wave application layer.

Maps physical ocean parameters (sound speed c, gravity-wave frequency
omega, depth h, gravitational acceleration g) onto the triad coefficient
set:

    wave 1 (acoustic):  alpha1 = -c^2*delta1/(2*omega*h), delta1 = 2*omega/c,
                        gamma1 = -2*omega/(h*c)
    waves 2-3 (gravity): alpha = 0, delta = omega/c,
                        gamma2 = gamma3 = 2*omega^3/(g*c)

The resonance condition gamma1 + gamma2 + gamma3 = 0 picks out
omega = sqrt(g/(2h)) independently of c.  Physical inputs are accepted
within a configurable relative tolerance (default 1e-6) and the small
residual is distributed equally over the couplings before the strict
mathematical core sees them; the adjustment is reported, never hidden.
"""

import math
from dataclasses import dataclass

from .errors import AmplitudeOrderingError, ResonanceError
from .triad import (
    ClosedFormSolution,
    FormulaVariant,
    InitialAmplitudes,
    TriadParameters,
    build_closed_form,
    build_parameters,
)

__all__ = [
    "OceanParameters",
    "TriadMapping",
    "ApplicationSolution",
    "map_to_triad",
    "resonant_frequency",
    "application_solution",
    "acoustic_prefactor_report",
]

DEFAULT_SOUND_SPEED = 1500.0
DEFAULT_GRAVITY = 9.81
DEFAULT_RESONANCE_RTOL = 1e-6


@dataclass(frozen=True)
class OceanParameters:
    """Physical inputs: all positive; c defaults to 1500 m/s, g to 9.81."""

    omega: float
    h: float
    c: float = DEFAULT_SOUND_SPEED
    g: float = DEFAULT_GRAVITY

    def __post_init__(self):
        for name in ("omega", "h", "c", "g"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


def resonant_frequency(h: float, g: float = DEFAULT_GRAVITY) -> float:
    """Frequency zeroing the coupling sum: omega = sqrt(g/(2h)).

    The sound speed cancels out of the resonance condition, so it does
    not appear here.
    """
    if not (h > 0.0 and g > 0.0):
        raise ValueError("h and g must be positive")
    return math.sqrt(g / (2.0 * h))


def _raw_coefficients(ocean: OceanParameters):
    c, omega, h, g = ocean.c, ocean.omega, ocean.h, ocean.g
    delta1 = 2.0 * omega / c
    alpha1 = -(c * c) * delta1 / (2.0 * omega * h)
    gamma1 = -2.0 * omega / (h * c)
    gamma23 = 2.0 * omega**3 / (g * c)
    return delta1, (alpha1, 0.0, 0.0), (gamma1, gamma23, gamma23)


@dataclass(frozen=True)
class TriadMapping:
    """Result of the physical-to-triad mapping.

    ``gamma_raw`` are the couplings read off the evolution equations;
    ``params.gamma`` carries the equal-share resonance adjustment
    (``adjustment`` = residual / 3 subtracted from each).
    """

    params: TriadParameters
    ocean: OceanParameters
    gamma_raw: tuple
    residual: float
    adjustment: float


def map_to_triad(ocean: OceanParameters,
                 rtol: float = DEFAULT_RESONANCE_RTOL) -> TriadMapping:
    """Triad coefficients from ocean parameters, resonance enforced.

    Raises ResonanceError (with the resonant frequency suggestion) when
    the coupling sum exceeds ``rtol`` relative to the largest coupling.
    """
    delta1, alpha, gamma = _raw_coefficients(ocean)
    residual = gamma[0] + gamma[1] + gamma[2]
    scale = max(abs(g) for g in gamma)
    if abs(residual) > rtol * scale:
        suggestion = resonant_frequency(ocean.h, ocean.g)
        raise ResonanceError(
            f"omega = {ocean.omega!r} is off resonance: coupling sum "
            f"{residual!r} exceeds {rtol} * {scale!r}; the resonant "
            f"frequency for h = {ocean.h!r}, g = {ocean.g!r} is "
            f"omega = {suggestion!r}",
            residual,
        )
    adjustment = residual / 3.0
    gamma_adj = tuple(g - adjustment for g in gamma)
    params = build_parameters(alpha=alpha, delta1=delta1, gamma=gamma_adj)
    return TriadMapping(
        params=params,
        ocean=ocean,
        gamma_raw=gamma,
        residual=residual,
        adjustment=adjustment,
    )


def initial_amplitudes(phi0_g1, phi0_g2) -> InitialAmplitudes:
    """Seed triple with the acoustic wave starting from rest.

    Wave 2 is the first gravity wave (the larger seed), wave 3 the second.
    """
    return InitialAmplitudes((0.0, complex(phi0_g1), complex(phi0_g2)))


@dataclass(frozen=True)
class ApplicationSolution:
    """Closed form in ocean variables plus the published rate check.

    ``published_rate_coefficient`` is the application form's argument
    prefactor 2*sqrt(2/(g*h))*omega^2/c; with the AsPrinted constants the
    constructed u_rate equals it times |phi0_g1| exactly (the published
    expression omits the amplitude factor and the time variable).
    """

    solution: ClosedFormSolution
    mapping: TriadMapping
    published_rate_coefficient: float
    constructed_rate_coefficient: float


def application_solution(ocean: OceanParameters, phi0_g1, phi0_g2,
                         variant: FormulaVariant,
                         rtol: float = DEFAULT_RESONANCE_RTOL) -> ApplicationSolution:
    """Compose the mapping with the closed-form constructor."""
    if abs(complex(phi0_g2)) >= abs(complex(phi0_g1)):
        raise AmplitudeOrderingError(
            "|phi0_g2| must be smaller than |phi0_g1| for the closed form"
        )
    mapping = map_to_triad(ocean, rtol=rtol)
    init = initial_amplitudes(phi0_g1, phi0_g2)
    solution = build_closed_form(mapping.params, init, variant)
    published = (
        2.0 * math.sqrt(2.0 / (ocean.g * ocean.h)) * ocean.omega**2 / ocean.c
    )
    constructed = solution.u_rate / abs(complex(phi0_g1))
    return ApplicationSolution(
        solution=solution,
        mapping=mapping,
        published_rate_coefficient=published,
        constructed_rate_coefficient=constructed,
    )


def acoustic_prefactor_report(mapping: TriadMapping, phi0_g2) -> dict:
    """Compare the published acoustic intensity prefactor with the general form.

    The general closed form gives -2*gamma1/gamma3 * |phi0_g2|^2 =
    (2g/(omega^2 h)) * |phi0_g2|^2 for the acoustic wave's sn^2
    coefficient; the published application form carries 2g/(omega*h),
    i.e. an extra factor omega.  Both are returned so the discrepancy is
    measured rather than resolved.
    """
    ocean = mapping.ocean
    g1, _, g3 = mapping.params.gamma
    amp_sq = abs(complex(phi0_g2)) ** 2
    general = -2.0 * g1 / g3 * amp_sq
    published = 2.0 * ocean.g * amp_sq / (ocean.omega * ocean.h)
    return {
        "general_prefactor": general,
        "published_prefactor": published,
        "ratio_published_to_general": published / general if general else float("nan"),
    }
