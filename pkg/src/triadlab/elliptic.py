"""Jacobi elliptic functions sn, cn, dn and the complete integral K(k).

The production path computes K by the arithmetic-geometric mean and the
Jacobi triple by a descending Landen recursion with backward phase
recovery (``triadlab._kernels``).  The module also carries independent
golden oracles -- adaptive quadrature of the defining integral for K,
and quadrature plus root finding for sn -- used by the test suite to
cross-check the production path.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from . import _kernels
from .errors import EllipticDivergenceError, EllipticDomainError

__all__ = [
    "EllipticModulus",
    "JacobiTriple",
    "complete_elliptic_k",
    "jacobi_sn_cn_dn",
    "sn_squared",
    "sn_squared_array",
    "quarter_period_by_quadrature",
    "jacobi_by_inversion",
    "write_golden_table",
]

# Moduli this close to 1 make K numerically meaningless; the hyperbolic
# limit takes over for the Jacobi functions themselves.
_UNIT_MODULUS_GAP = 1e-16


@dataclass(frozen=True)
class EllipticModulus:
    """Validated modulus k with its squared complement stored separately.

    ``k_complement_sq`` is computed as (1 - k)(1 + k) to avoid the
    cancellation of 1 - k**2 near k = 1.
    """

    k: float
    k_complement_sq: float = field(init=False)

    def __post_init__(self):
        k = self.k
        if not isinstance(k, (int, float)) or not math.isfinite(k):
            raise EllipticDomainError(f"modulus must be a finite real, got {k!r}")
        if k < 0.0 or k > 1.0:
            raise EllipticDomainError(f"modulus must lie in [0, 1], got {k!r}")
        object.__setattr__(self, "k", float(k))
        object.__setattr__(self, "k_complement_sq", (1.0 - k) * (1.0 + k))


class JacobiTriple(tuple):
    """(sn, cn, dn) value triple with named access."""

    __slots__ = ()

    def __new__(cls, sn, cn, dn):
        return super().__new__(cls, (sn, cn, dn))

    @property
    def sn(self):
        return self[0]

    @property
    def cn(self):
        return self[1]

    @property
    def dn(self):
        return self[2]


def complete_elliptic_k(m: EllipticModulus) -> float:
    """Quarter period K(k) by the arithmetic-geometric mean.

    Raises
    ------
    EllipticDivergenceError
        If k = 1 to within rounding (K diverges logarithmically there).
    """
    if m.k >= 1.0 - _UNIT_MODULUS_GAP:
        raise EllipticDivergenceError(
            f"K(k) diverges as k -> 1; got k = {m.k!r}"
        )
    return _kernels.quarter_period(m.k_complement_sq)


def _reduce_argument(u, m: EllipticModulus):
    """Reduce u modulo the full period 4K to preserve accuracy for large |u|."""
    period = 4.0 * _kernels.quarter_period(m.k_complement_sq)
    return u - period * np.round(u / period)


def jacobi_sn_cn_dn(u: float, m: EllipticModulus) -> JacobiTriple:
    """sn, cn, dn at argument ``u`` and modulus ``m.k``.

    Accuracy is about 1e-14 absolute for k <= 0.999.  Arguments are
    reduced modulo 4K before the Landen recursion, so large |u| (long
    simulated times) lose no precision.  Moduli within rounding of 1 use
    the exact hyperbolic limit tanh/sech.
    """
    if not math.isfinite(u):
        raise EllipticDomainError(f"argument must be finite, got {u!r}")
    if m.k_complement_sq < _UNIT_MODULUS_GAP:
        sech = 1.0 / math.cosh(u)
        return JacobiTriple(math.tanh(u), sech, sech)
    ur = float(_reduce_argument(u, m))
    sn, cn, dn = _kernels.jacobi_triple(ur, m.k, m.k_complement_sq)
    return JacobiTriple(sn, cn, dn)


def sn_squared(u: float, m: EllipticModulus) -> float:
    """sn(u, k)**2, in [0, 1], period 2K."""
    sn = jacobi_sn_cn_dn(u, m).sn
    return sn * sn


def sn_squared_array(u, m: EllipticModulus) -> np.ndarray:
    """Vectorized sn**2 over an array of arguments (single modulus)."""
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise EllipticDomainError("arguments must be finite")
    if m.k_complement_sq < _UNIT_MODULUS_GAP:
        return np.tanh(u) ** 2
    ur = _reduce_argument(u, m)
    sn, _, _ = _kernels.jacobi_arrays(ur, m.k, m.k_complement_sq)
    return sn * sn


# ---------------------------------------------------------------------------
# Golden oracles: deliberately independent of the AGM/Landen path above.
# They integrate dtheta / sqrt(1 - k^2 sin^2 theta), which defines both the
# quarter period (theta up to pi/2) and, after inversion, the amplitude
# whose sine is sn.
# ---------------------------------------------------------------------------


def _integrand(theta, k_sq):
    return 1.0 / math.sqrt(1.0 - k_sq * math.sin(theta) ** 2)


def quarter_period_by_quadrature(m: EllipticModulus) -> float:
    """K(k) by adaptive quadrature of the defining integral."""
    if m.k >= 1.0 - _UNIT_MODULUS_GAP:
        raise EllipticDivergenceError(
            f"K(k) diverges as k -> 1; got k = {m.k!r}"
        )
    k_sq = m.k * m.k
    value, _ = integrate.quad(
        _integrand, 0.0, math.pi / 2.0, args=(k_sq,), epsabs=0.0, epsrel=1e-13
    )
    return value


def _incomplete_f(phi, k_sq):
    value, _ = integrate.quad(
        _integrand, 0.0, phi, args=(k_sq,), epsabs=1e-14, epsrel=1e-12
    )
    return value


def jacobi_by_inversion(u: float, m: EllipticModulus) -> JacobiTriple:
    """Golden sn, cn, dn: invert the amplitude integral by root finding.

    Reduces ``u`` into [0, K] by the quarter-period symmetries, then
    solves F(phi) = u for the amplitude phi with Brent's method, where F
    is the adaptive quadrature above.  Never calls the AGM/Landen path.
    """
    if not math.isfinite(u):
        raise EllipticDomainError(f"argument must be finite, got {u!r}")
    k = m.k
    k_sq = k * k
    big_k = quarter_period_by_quadrature(m)

    # Fold into [0, 4K), then into [0, K] tracking sn/cn signs.
    v = math.fmod(u, 4.0 * big_k)
    if v < 0.0:
        v += 4.0 * big_k
    sign_sn = 1.0
    sign_cn = 1.0
    if v >= 2.0 * big_k:
        v -= 2.0 * big_k
        sign_sn = -sign_sn
        sign_cn = -sign_cn
    if v > big_k:
        v = 2.0 * big_k - v
        sign_cn = -sign_cn

    if v <= 0.0:
        phi = 0.0
    elif v >= big_k:
        phi = math.pi / 2.0
    else:
        phi = optimize.brentq(
            lambda p: _incomplete_f(p, k_sq) - v,
            0.0,
            math.pi / 2.0,
            xtol=1e-15,
            rtol=8.9e-16,
        )
    s = math.sin(phi)
    c = math.cos(phi)
    d = math.sqrt(1.0 - k_sq * s * s)
    return JacobiTriple(sign_sn * s, sign_cn * c, d)


def write_golden_table(path, u_values, k_values) -> None:
    """Regenerate the golden table CSV (columns u,k,sn,cn,dn, 17 digits)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["u", "k", "sn", "cn", "dn"])
        for k in k_values:
            m = EllipticModulus(float(k))
            for u in u_values:
                triple = jacobi_by_inversion(float(u), m)
                writer.writerow(
                    [format(float(x), ".17g") for x in (u, k, *triple)]
                )
