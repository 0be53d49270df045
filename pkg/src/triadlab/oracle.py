"""Independent truth source for the three-wave amplitude system.

High-accuracy adaptive integration of

    f1' = gamma1 * f2 * f3
    f2' = gamma2 * f1 * conj(f3)
    f3' = gamma3 * f1 * conj(f2)

with conservation monitoring (Im{f1* f2 f3} and the pairwise quadratic
invariants) and period measurement.  This module is what adjudicates
between the two closed-form constant sets in ``triadlab.triad``; it must
therefore never call the closed form itself.

The complex system is integrated as six coupled real equations by an
embedded Dormand-Prince 5(4) pair with PI step-size control.  A fixed
step classical RK4 mode doubles as the reference for convergence tests
and as the single code path reused by the PDE simulator's nonlinear
sub-step.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSpanError, StiffnessError
from .triad import InitialAmplitudes

__all__ = [
    "AmplitudeState",
    "AmplitudeTrajectory",
    "MRDriftReport",
    "PeriodEstimate",
    "rhs",
    "hamiltonian_functionals",
    "integrate",
    "integrate_fixed",
    "manley_rowe_invariants",
    "measure_period",
    "rk4_step",
]

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class AmplitudeState:
    """Complex amplitude triple at one instant."""

    f: tuple
    t: float


def _as_triple(init):
    if isinstance(init, AmplitudeState):
        return np.asarray(init.f, dtype=complex)
    if isinstance(init, InitialAmplitudes):
        return np.asarray(init.psi0, dtype=complex)
    arr = np.asarray(tuple(init), dtype=complex)
    if arr.shape != (3,):
        raise ValueError("initial amplitudes must be a triple")
    return arr


def rhs(state, gamma):
    """Right-hand side (gamma1 f2 f3, gamma2 f1 f3*, gamma3 f1 f2*).

    ``state`` may be an AmplitudeState, a complex triple, or a (3, ...)
    array; the coupling acts elementwise over trailing axes.
    """
    f = state.f if isinstance(state, AmplitudeState) else state
    f = np.asarray(f, dtype=complex)
    g1, g2, g3 = gamma
    return np.stack(
        (
            g1 * f[1] * f[2],
            g2 * f[0] * np.conj(f[2]),
            g3 * f[0] * np.conj(f[1]),
        )
    )


def hamiltonian_functionals(state):
    """(Re, Im) of f1* f2 f3."""
    f = state.f if isinstance(state, AmplitudeState) else state
    product = np.conj(f[0]) * f[1] * f[2]
    return float(np.real(product)), float(np.imag(product))


def rk4_step(f, t, y, h):
    """One classical RK4 step for dy/dt = f(t, y); works on any ndarray y."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) with PI step control
# ---------------------------------------------------------------------------

_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_DP_ERR = _DP_B5 - _DP_B4

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_PI_ALPHA = 0.7 / 5.0
_PI_BETA = 0.4 / 5.0
_MAX_STEPS = 10_000_000


def _dp54(f, y0, t0, t_out, rtol, atol):
    """Integrate dy/dt = f(t, y) landing exactly on each time in t_out.

    Embedded 5(4) pair; the fifth-order solution propagates.  Steps are
    clipped to the next requested output time so every sample is a true
    integration point (no interpolation error on top of the local error
    control).
    """
    t = float(t0)
    y = np.array(y0, dtype=float)
    out = np.empty((len(t_out), y.size))
    direction = 1.0 if (len(t_out) == 0 or t_out[-1] >= t0) else -1.0

    k1 = f(t, y)
    scale0 = atol + rtol * np.abs(y)
    d0 = math.sqrt(float(np.mean((y / scale0) ** 2)))
    d1 = math.sqrt(float(np.mean((k1 / scale0) ** 2)))
    h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
    if len(t_out):
        h = min(h, abs(t_out[-1] - t0) / 10.0) or 1e-6
    h *= direction

    err_prev = 1.0
    idx = 0
    n_out = len(t_out)
    while idx < n_out and abs(t_out[idx] - t) <= 1e-15 * max(1.0, abs(t)):
        out[idx] = y
        idx += 1

    steps = 0
    while idx < n_out:
        steps += 1
        if steps > _MAX_STEPS:
            raise StiffnessError("step budget exhausted; inputs out of range")
        target = t_out[idx]
        if direction * (t + h) > direction * target:
            h_try = target - t
            hits_target = True
        else:
            h_try = h
            hits_target = False
        if abs(h_try) < 16.0 * np.finfo(float).eps * max(1.0, abs(t)):
            raise StiffnessError(
                f"step size underflow at t = {t!r}; the system looks stiff "
                f"or the inputs are bad"
            )

        ks = [k1]
        for i in range(1, 7):
            yi = y + h_try * sum(a * k for a, k in zip(_DP_A[i], ks))
            ks.append(f(t + _DP_C[i] * h_try, yi))
        y5 = y + h_try * sum(b * k for b, k in zip(_DP_B5, ks) if b != 0.0)
        err_vec = h_try * sum(e * k for e, k in zip(_DP_ERR, ks) if e != 0.0)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = math.sqrt(float(np.mean((err_vec / scale) ** 2)))
        if not math.isfinite(err):
            # Overflow inside the stages: retry with a much smaller step
            # until the underflow guard above gives up.
            h = h_try * _MIN_FACTOR
            continue

        if err <= 1.0:
            t = target if hits_target else t + h_try
            y = y5
            k1 = ks[6]  # FSAL
            if hits_target:
                out[idx] = y
                idx += 1
            err = max(err, 1e-10)
            factor = _SAFETY * err ** (-_PI_ALPHA) * err_prev ** _PI_BETA
            err_prev = err
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            h = h_try * factor
        else:
            factor = max(_MIN_FACTOR, _SAFETY * err ** (-0.2))
            h = h_try * factor
    return out


def _real_rhs(gamma):
    g1, g2, g3 = gamma

    def f(_t, y):
        f1 = y[0] + 1j * y[1]
        f2 = y[2] + 1j * y[3]
        f3 = y[4] + 1j * y[5]
        d1 = g1 * f2 * f3
        d2 = g2 * f1 * np.conj(f3)
        d3 = g3 * f1 * np.conj(f2)
        return np.array([d1.real, d1.imag, d2.real, d2.imag, d3.real, d3.imag])

    return f


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Time-sampled amplitudes with conservation diagnostics.

    ``amplitudes`` has shape (n, 3); ``hamiltonian_re/_im`` are the
    per-sample functionals Re/Im of f1* f2 f3; ``manley_rowe`` holds the
    per-sample pairwise invariants (n, 3) in the order
    (g2|f1|^2 - g1|f2|^2, g3|f2|^2 - g2|f3|^2, g3|f1|^2 - g1|f3|^2).
    """

    times: np.ndarray
    amplitudes: np.ndarray
    gamma: tuple
    tol: float
    hamiltonian_re: np.ndarray
    hamiltonian_im: np.ndarray
    manley_rowe: np.ndarray

    def __post_init__(self):
        if len(self.times) and np.any(np.diff(self.times) <= 0.0):
            raise ValueError("sample times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    def state(self, i) -> AmplitudeState:
        return AmplitudeState(tuple(self.amplitudes[i]), float(self.times[i]))

    @property
    def magnitudes_sq(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def hamiltonian_im_drift(self) -> float:
        return float(np.max(np.abs(self.hamiltonian_im - self.hamiltonian_im[0])))


def _manley_rowe_samples(mag_sq, gamma):
    g1, g2, g3 = gamma
    return np.stack(
        (
            g2 * mag_sq[:, 0] - g1 * mag_sq[:, 1],
            g3 * mag_sq[:, 1] - g2 * mag_sq[:, 2],
            g3 * mag_sq[:, 0] - g1 * mag_sq[:, 2],
        ),
        axis=1,
    )


def _build_trajectory(times, amps, gamma, tol):
    product = np.conj(amps[:, 0]) * amps[:, 1] * amps[:, 2]
    mag_sq = np.abs(amps) ** 2
    return AmplitudeTrajectory(
        times=times,
        amplitudes=amps,
        gamma=tuple(gamma),
        tol=tol,
        hamiltonian_re=product.real.copy(),
        hamiltonian_im=product.imag.copy(),
        manley_rowe=_manley_rowe_samples(mag_sq, gamma),
    )


def integrate(init, gamma, t_end, tol=DEFAULT_TOL, samples=1024) -> AmplitudeTrajectory:
    """Adaptive integration over [0, t_end] sampled at ``samples`` times.

    ``samples`` may be an integer (uniform grid including both ends) or an
    explicit increasing array of times starting at 0.  ``tol`` is applied
    as both the relative and absolute per-step error control.
    """
    if not (t_end > 0.0 and math.isfinite(t_end)):
        raise ValueError(f"t_end must be positive and finite, got {t_end!r}")
    if not 1e-13 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-13, 1e-6], got {tol!r}")
    f0 = _as_triple(init)
    if np.isscalar(samples):
        t_out = np.linspace(0.0, t_end, int(samples))
    else:
        t_out = np.asarray(samples, dtype=float)
    y0 = np.array(
        [f0[0].real, f0[0].imag, f0[1].real, f0[1].imag, f0[2].real, f0[2].imag]
    )
    rows = _dp54(_real_rhs(gamma), y0, 0.0, t_out, rtol=tol, atol=tol)
    amps = rows[:, 0::2] + 1j * rows[:, 1::2]
    return _build_trajectory(t_out, amps, gamma, tol)


def integrate_fixed(init, gamma, t_end, n_steps) -> AmplitudeTrajectory:
    """Non-adaptive classical RK4 reference mode (convergence studies)."""
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    f0 = _as_triple(init)
    h = t_end / n_steps

    def f(_t, y):
        return rhs(y, gamma)

    times = np.linspace(0.0, t_end, n_steps + 1)
    amps = np.empty((n_steps + 1, 3), dtype=complex)
    amps[0] = f0
    y = f0
    for i in range(n_steps):
        y = rk4_step(f, times[i], y, h)
        amps[i + 1] = y
    return _build_trajectory(times, amps, gamma, tol=float("nan"))


@dataclass(frozen=True)
class MRDriftReport:
    """Max drift of each pairwise invariant from its initial value."""

    drifts: tuple
    scale: float

    @property
    def max_drift(self) -> float:
        return max(self.drifts)


def manley_rowe_invariants(traj: AmplitudeTrajectory, gamma=None) -> MRDriftReport:
    """Drift report for the three pairwise quadratic invariants."""
    if len(traj) == 0:
        raise ValueError("trajectory is empty")
    gamma = traj.gamma if gamma is None else tuple(gamma)
    combos = _manley_rowe_samples(traj.magnitudes_sq, gamma)
    drifts = np.max(np.abs(combos - combos[0]), axis=0)
    scale = max(
        1e-300, float(np.max(np.abs(traj.magnitudes_sq))) * max(abs(g) for g in gamma)
    )
    return MRDriftReport(tuple(float(d) for d in drifts), scale)


@dataclass(frozen=True)
class PeriodEstimate:
    """Mean spacing of refined |f1|^2 minima with a relative uncertainty."""

    period: float
    relative_uncertainty: float
    minima_times: tuple


def measure_period(traj: AmplitudeTrajectory) -> PeriodEstimate:
    """Period of |f1|^2 from successive interior minima.

    Each bracketed minimum is refined by the vertex of the parabola
    through the three samples around it.  Needs at least two interior
    minima, i.e. a trajectory spanning two full oscillations.
    """
    s = traj.magnitudes_sq[:, 0]
    t = traj.times
    minima = []
    for i in range(1, len(s) - 1):
        if s[i] <= s[i - 1] and s[i] < s[i + 1]:
            h_left = t[i] - t[i - 1]
            h_right = t[i + 1] - t[i]
            # Parabolic vertex through the three bracketing samples
            # (general non-uniform stencil).
            curv = (
                h_left * s[i + 1]
                + h_right * s[i - 1]
                - (h_left + h_right) * s[i]
            )
            if curv <= 0.0:
                continue
            vertex = (
                t[i]
                + 0.5 * h_right
                - (s[i + 1] - s[i]) * h_left * (h_left + h_right) / (2.0 * curv)
            )
            minima.append(vertex)
    if len(minima) < 2:
        raise InsufficientSpanError(
            f"found {len(minima)} interior minima of |f1|^2; need at least 2 "
            f"(trajectory must span two full oscillations)"
        )
    spacings = np.diff(minima)
    period = float(np.mean(spacings))
    if len(spacings) > 1:
        uncertainty = float(np.std(spacings) / math.sqrt(len(spacings))) / period
    else:
        uncertainty = float("nan")
    return PeriodEstimate(period, uncertainty, tuple(minima))
