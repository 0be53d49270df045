"""NumPy fallback for the hot numerical kernels.

The compiled extension ``triadlab._kernels._corecy`` implements the same
functions; this module is the import-time fallback and the reference the
extension is benchmarked against (see ``benchmarks/bench_backends.py``).

Kernels
-------
agm_mean, quarter_period
    Arithmetic-geometric mean and the quarter period K of the Jacobi
    elliptic functions, computed from the squared complementary modulus.
jacobi_triple, jacobi_arrays
    sn, cn, dn by the descending Landen (Gauss) transformation with
    backward recursion, Bulirsch style.  The argument must already be
    reduced to one period by the caller.
triad_rk4_step
    One classical RK4 step of the pointwise three-wave coupling, applied
    to whole grids at once.
"""

import numpy as np

# AGM pair agreement for the quarter period; quadratic convergence makes
# the final error ~ machine epsilon.
_AGM_RTOL = 1e-15

# Landen chain cutoff; the neglected terms are O(_CHAIN_TOL**2).
_CHAIN_TOL = 1e-10
_MAX_LEVELS = 24


def agm_mean(kc_sq):
    """Arithmetic-geometric mean M(1, k') for squared complement k'^2 > 0."""
    a = 1.0
    b = np.sqrt(kc_sq)
    while abs(a - b) > _AGM_RTOL * a:
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def quarter_period(kc_sq):
    """Quarter period K(k) from k'^2 = 1 - k^2 (caller guards k'^2 = 0)."""
    return np.pi / (2.0 * agm_mean(kc_sq))


def _landen_chain(kc_sq):
    """Descending Landen chain for modulus k with k'^2 = kc_sq.

    Returns the level arrays (em, en) and the final scale c, which is the
    AGM of (1, k') and multiplies the reduced argument before the phase
    recursion.
    """
    emc = kc_sq
    a = 1.0
    em = []
    en = []
    c = 1.0
    for _ in range(_MAX_LEVELS):
        em.append(a)
        emc = np.sqrt(emc)
        en.append(emc)
        c = 0.5 * (a + emc)
        if abs(a - emc) <= _CHAIN_TOL * a:
            break
        emc = a * emc
        a = c
    return np.array(em), np.array(en), c


def jacobi_arrays(u, k, kc_sq):
    """sn, cn, dn at reduced arguments ``u`` (|u| <= 2K) for one modulus.

    Parameters
    ----------
    u : ndarray
        Already period-reduced arguments.
    k : float
        Modulus in [0, 1].
    kc_sq : float
        Squared complementary modulus 1 - k**2.

    Returns
    -------
    sn, cn, dn : ndarray
        Elementwise Jacobi function values.
    """
    u = np.asarray(u, dtype=float)
    if kc_sq <= 0.0:
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech
    if k == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)

    em, en, c = _landen_chain(kc_sq)
    phase = c * u
    sn = np.sin(phase)
    cn = np.cos(phase)
    dn = np.ones_like(sn)

    nonzero = sn != 0.0
    safe_sn = np.where(nonzero, sn, 1.0)
    a = cn / safe_sn
    cc = c * a
    for em_i, en_i in zip(em[::-1], en[::-1]):
        a = cc * a
        cc = cc * dn
        dn = (en_i + a) / (em_i + a)
        a = cc / em_i
    amp = 1.0 / np.sqrt(cc * cc + 1.0)
    sn_out = np.where(nonzero, np.where(sn >= 0.0, amp, -amp), sn)
    cn_out = np.where(nonzero, cc * sn_out, cn)
    dn_out = np.where(nonzero, dn, 1.0)
    return sn_out, cn_out, dn_out


def jacobi_triple(u, k, kc_sq):
    """Scalar sn, cn, dn at a reduced argument."""
    sn, cn, dn = jacobi_arrays(np.array([u]), k, kc_sq)
    return float(sn[0]), float(cn[0]), float(dn[0])


def triad_rk4_step(psi, g1, g2, g3, dt):
    """One classical RK4 step of the pointwise three-wave coupling.

    ``psi`` is a (3, n) complex array; returns a new (3, n) array advanced
    by ``dt`` under d(psi1)/dt = g1*psi2*psi3, d(psi2)/dt = g2*psi1*conj(psi3),
    d(psi3)/dt = g3*psi1*conj(psi2) at every grid point independently.
    """
    gamma = (g1, g2, g3)

    def rhs(p):
        return np.stack(
            (
                gamma[0] * p[1] * p[2],
                gamma[1] * p[0] * np.conj(p[2]),
                gamma[2] * p[0] * np.conj(p[1]),
            )
        )

    k1 = rhs(psi)
    k2 = rhs(psi + 0.5 * dt * k1)
    k3 = rhs(psi + 0.5 * dt * k2)
    k4 = rhs(psi + dt * k3)
    return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
