# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of ``triadlab._kernels._pure``.

Same functions, same semantics; see the pure module for documentation.
The scalar inner loops here avoid the array temporaries of the NumPy
fallback, which matters when the Jacobi kernel is evaluated point by
point or the nonlinear sub-step runs many thousands of times.
"""

from libc.math cimport sqrt, sin, cos, tanh, cosh, fabs, M_PI

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double _AGM_RTOL = 1e-15
cdef double _CHAIN_TOL = 1e-10
cdef int _MAX_LEVELS = 24


cpdef double agm_mean(double kc_sq):
    """Arithmetic-geometric mean M(1, k') for squared complement k'^2 > 0."""
    cdef double a = 1.0
    cdef double b = sqrt(kc_sq)
    cdef double an
    while fabs(a - b) > _AGM_RTOL * a:
        an = 0.5 * (a + b)
        b = sqrt(a * b)
        a = an
    return 0.5 * (a + b)


cpdef double quarter_period(double kc_sq):
    """Quarter period K(k) from k'^2 = 1 - k^2 (caller guards k'^2 = 0)."""
    return M_PI / (2.0 * agm_mean(kc_sq))


cdef int _landen_chain(double kc_sq, double* em, double* en, double* c_out) noexcept nogil:
    cdef double emc = kc_sq
    cdef double a = 1.0
    cdef double c = 1.0
    cdef int i
    cdef int levels = 0
    for i in range(_MAX_LEVELS):
        em[i] = a
        emc = sqrt(emc)
        en[i] = emc
        c = 0.5 * (a + emc)
        levels = i + 1
        if fabs(a - emc) <= _CHAIN_TOL * a:
            break
        emc = a * emc
        a = c
    c_out[0] = c
    return levels


cdef void _jacobi_one(double u, int levels, double* em, double* en, double c0,
                      double* sn, double* cn, double* dn) noexcept nogil:
    cdef double phase = c0 * u
    cdef double s = sin(phase)
    cdef double co = cos(phase)
    cdef double d = 1.0
    cdef double a, cc, amp
    cdef int ii
    if s == 0.0:
        sn[0] = s
        cn[0] = co
        dn[0] = 1.0
        return
    a = co / s
    cc = c0 * a
    for ii in range(levels - 1, -1, -1):
        a = cc * a
        cc = cc * d
        d = (en[ii] + a) / (em[ii] + a)
        a = cc / em[ii]
    amp = 1.0 / sqrt(cc * cc + 1.0)
    if s < 0.0:
        amp = -amp
    sn[0] = amp
    cn[0] = cc * amp
    dn[0] = d


def jacobi_triple(double u, double k, double kc_sq):
    """Scalar sn, cn, dn at a reduced argument."""
    cdef double em[24]
    cdef double en[24]
    cdef double c0 = 0.0
    cdef double sn, cn, dn
    cdef int levels
    if kc_sq <= 0.0:
        sn = tanh(u)
        cn = 1.0 / cosh(u)
        return sn, cn, cn
    if k == 0.0:
        return sin(u), cos(u), 1.0
    levels = _landen_chain(kc_sq, em, en, &c0)
    _jacobi_one(u, levels, em, en, c0, &sn, &cn, &dn)
    return sn, cn, dn


def jacobi_arrays(u, double k, double kc_sq):
    """sn, cn, dn at reduced arguments ``u`` (|u| <= 2K) for one modulus."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef Py_ssize_t n = uu.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sn = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cn = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dn = np.empty(n, dtype=np.float64)
    cdef double em[24]
    cdef double en[24]
    cdef double c0 = 0.0
    cdef double s, c, d, sech
    cdef int levels
    cdef Py_ssize_t i
    if kc_sq <= 0.0:
        for i in range(n):
            sech = 1.0 / cosh(uu[i])
            sn[i] = tanh(uu[i])
            cn[i] = sech
            dn[i] = sech
        shape = np.shape(u)
        return sn.reshape(shape), cn.reshape(shape), dn.reshape(shape)
    if k == 0.0:
        for i in range(n):
            sn[i] = sin(uu[i])
            cn[i] = cos(uu[i])
            dn[i] = 1.0
        shape = np.shape(u)
        return sn.reshape(shape), cn.reshape(shape), dn.reshape(shape)
    levels = _landen_chain(kc_sq, em, en, &c0)
    with nogil:
        for i in range(n):
            _jacobi_one(uu[i], levels, em, en, c0, &sn[i], &cn[i], &dn[i])
    shape = np.shape(u)
    return sn.reshape(shape), cn.reshape(shape), dn.reshape(shape)


def triad_rk4_step(psi, double g1, double g2, double g3, double dt):
    """One classical RK4 step of the pointwise three-wave coupling."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] p = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty_like(p)
    cdef Py_ssize_t n = p.shape[1]
    cdef Py_ssize_t i
    cdef double complex a, b, c
    cdef double complex k11, k12, k13, k21, k22, k23, k31, k32, k33, k41, k42, k43
    cdef double complex y1, y2, y3
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    if p.shape[0] != 3:
        raise ValueError("expected a (3, n) field array")
    with nogil:
        for i in range(n):
            a = p[0, i]
            b = p[1, i]
            c = p[2, i]

            k11 = g1 * b * c
            k12 = g2 * a * _conj(c)
            k13 = g3 * a * _conj(b)

            y1 = a + half * k11
            y2 = b + half * k12
            y3 = c + half * k13
            k21 = g1 * y2 * y3
            k22 = g2 * y1 * _conj(y3)
            k23 = g3 * y1 * _conj(y2)

            y1 = a + half * k21
            y2 = b + half * k22
            y3 = c + half * k23
            k31 = g1 * y2 * y3
            k32 = g2 * y1 * _conj(y3)
            k33 = g3 * y1 * _conj(y2)

            y1 = a + dt * k31
            y2 = b + dt * k32
            y3 = c + dt * k33
            k41 = g1 * y2 * y3
            k42 = g2 * y1 * _conj(y3)
            k43 = g3 * y1 * _conj(y2)

            out[0, i] = a + sixth * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
            out[1, i] = b + sixth * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
            out[2, i] = c + sixth * (k13 + 2.0 * k23 + 2.0 * k33 + k43)
    return out


cdef inline double complex _conj(double complex z) noexcept nogil:
    return z.real - z.imag * 1j
