"""
Gaussian-ansatz reduction of the equation.

A Gaussian u = b(t) e^{-a(t) x^2 / 2} stays Gaussian, with
a = 1/tau^2 - i tau_dot/tau and

    tau'' = 2 lam / tau + 1 / tau^3 + w2 tau = P(1/tau^2) tau,
    P(X) = X^2 + 2 lam X + w2,

where w2 = omega^2 for the repulsive potential, -omega^2 for the confining
one and 0 without potential. The quantity

    C = tau_dot^2 - 4 lam ln tau + 1/tau^2 - w2 tau^2

is conserved and doubles as the error gauge of the fixed-step integrator.
The amplitude follows |b| = |b0| sqrt(tau0 / tau) and the phase obeys
theta' = -1/(2 tau^2) - lam ln|b|^2.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from gaussons.core.errors import (
    InconclusiveClassification,
    StepRejected,
    WidthCollapse,
)
from gaussons.models.data_models import (
    FixedPoint,
    FixedPointKind,
    GaussianAnsatz,
    Grid,
    PhasePortrait,
    PhysParams,
    TauState,
    TauTrajectory,
    TrajectoryClass,
    TrajectoryKind,
    WaveField,
)

logger = logging.getLogger(__name__)

DEFAULT_TAU_DT = 5e-4
DRIFT_GATE = 1e-6
ESCAPE_FACTOR = 100.0
RETURN_TOL = 1e-6
STATIONARY_TOL = 1e-10


def signed_omega2(params: PhysParams) -> float:
    """w2 in tau'' = ... + w2 tau: omega^2 repulsive, -omega^2 confining."""
    return -2.0 * params.potential_factor


def _accel(tau: float, lam: float, w2: float) -> float:
    return 2.0 * lam / tau + 1.0 / tau**3 + w2 * tau


def _first_integral(tau: float, tau_dot: float, lam: float, w2: float) -> float:
    return tau_dot * tau_dot - 4.0 * lam * math.log(tau) + 1.0 / tau**2 - w2 * tau * tau


def _require_positive(tau: float) -> None:
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")


def tau_rhs(s: TauState, params: PhysParams) -> float:
    """
    Acceleration 2 lam / tau + 1 / tau^3 + omega^2 tau.

    >>> tau_rhs(TauState(tau=1.0), PhysParams(lam=-2.0, omega=1.0))
    -2.0
    """
    _require_positive(s.tau)
    return _accel(s.tau, params.lam, signed_omega2(params))


def tau_rhs_factored(s: TauState, params: PhysParams) -> float:
    """Same acceleration written as P(1/tau^2) tau."""
    _require_positive(s.tau)
    x = 1.0 / s.tau**2
    return (x * x + 2.0 * params.lam * x + signed_omega2(params)) * s.tau


def first_integral(s: TauState, params: PhysParams) -> float:
    """C = tau_dot^2 - 4 lam ln tau + 1/tau^2 - omega^2 tau^2."""
    _require_positive(s.tau)
    return _first_integral(s.tau, s.tau_dot, params.lam, signed_omega2(params))


def _drift_scale(tau: float, tau_dot: float, lam: float, w2: float, c: float) -> float:
    return max(
        1.0,
        abs(c),
        tau_dot * tau_dot,
        abs(w2) * tau * tau,
        1.0 / tau**2,
        abs(4.0 * lam * math.log(tau)),
    )


def _rk4_step(
    tau: float, v: float, h: float, lam: float, w2: float, t: float
) -> Tuple[float, float]:
    k1x, k1v = v, _accel(tau, lam, w2)
    x2 = tau + 0.5 * h * k1x
    if x2 <= 0:
        raise WidthCollapse(f"[integrate_tau] tau <= 0 predicted at t={t:.6g}", t)
    k2x, k2v = v + 0.5 * h * k1v, _accel(x2, lam, w2)
    x3 = tau + 0.5 * h * k2x
    if x3 <= 0:
        raise WidthCollapse(f"[integrate_tau] tau <= 0 predicted at t={t:.6g}", t)
    k3x, k3v = v + 0.5 * h * k2v, _accel(x3, lam, w2)
    x4 = tau + h * k3x
    if x4 <= 0:
        raise WidthCollapse(f"[integrate_tau] tau <= 0 predicted at t={t:.6g}", t)
    k4x, k4v = v + h * k3v, _accel(x4, lam, w2)
    new_tau = tau + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    new_v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    if new_tau <= 0:
        raise WidthCollapse(f"[integrate_tau] tau <= 0 predicted at t={t:.6g}", t)
    return new_tau, new_v


def _step_count(t_end: float, dt: float) -> Tuple[int, float]:
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise ValueError(f"t_end must be non-negative, got {t_end}")
    n = max(1, math.ceil(t_end / dt - 1e-9))
    return n, t_end / n


def integrate_tau(
    init: TauState,
    params: PhysParams,
    t_end: float,
    dt: float = DEFAULT_TAU_DT,
    *,
    record_every: int = 1,
    tau_max: Optional[float] = None,
    drift_gate: float = DRIFT_GATE,
) -> TauTrajectory:
    """
    Fixed-step RK4 integration of the tau ODE with a first-integral monitor.

    The step is shrunk to t_end / ceil(t_end / dt) so the run ends exactly at
    t_end. The first-integral change of every step is compared with the size
    of the terms that make it up; a relative change above drift_gate means
    the step is too coarse.

    Args:
        init: Initial (tau, tau_dot)
        params: Equation parameters
        t_end: Final time
        dt: Largest step
        record_every: Keep one sample every this many steps (the last step
            is always kept)
        tau_max: Stop after the first step that takes tau above this value

    Returns:
        TauTrajectory: Samples of t, tau, tau_dot and C

    Raises:
        StepRejected: A step moved C by more than drift_gate relative
        WidthCollapse: A stage predicted tau <= 0
    """
    _require_positive(init.tau)
    if record_every < 1:
        raise ValueError("record_every must be at least 1")
    n, h = _step_count(t_end, dt)
    lam, w2 = params.lam, signed_omega2(params)
    tau, v = init.tau, init.tau_dot
    c0 = c_prev = _first_integral(tau, v, lam, w2)
    ts, taus, vs, cs = [0.0], [tau], [v], [c0]
    max_drift = 0.0
    for i in range(1, n + 1):
        t = i * h
        tau, v = _rk4_step(tau, v, h, lam, w2, t)
        c = _first_integral(tau, v, lam, w2)
        jump = abs(c - c_prev) / _drift_scale(tau, v, lam, w2, c)
        if jump > drift_gate:
            raise StepRejected(
                f"[integrate_tau] first-integral jump {jump:.3e} at t={t:.6g} "
                f"exceeds {drift_gate:.1e}; reduce dt={h:.3e}",
                time=t,
                drift=jump,
            )
        c_prev = c
        max_drift = max(max_drift, abs(c - c0))
        escaped = tau_max is not None and tau > tau_max
        if i % record_every == 0 or i == n or escaped:
            ts.append(t)
            taus.append(tau)
            vs.append(v)
            cs.append(c)
        if escaped:
            logger.debug(f"[integrate_tau] tau={tau:.4g} passed tau_max at t={t:.4g}")
            break
    return TauTrajectory(
        t=np.array(ts),
        tau=np.array(taus),
        tau_dot=np.array(vs),
        first_integral=np.array(cs),
        max_drift=max_drift,
    )


def _positive_roots(params: PhysParams) -> List[float]:
    """Positive roots X of P(X) = X^2 + 2 lam X + w2, ascending."""
    lam, w2 = params.lam, signed_omega2(params)
    disc = lam * lam - w2
    if disc < -1e-12 * max(1.0, lam * lam):
        return []
    if abs(disc) <= 1e-12 * max(1.0, lam * lam):
        return [-lam] if lam < 0 else []
    root = math.sqrt(disc)
    big = -lam + root if lam <= 0 else -lam - root
    if big == 0.0:
        return []
    small = w2 / big
    return sorted(x for x in {big, small} if x > 0)


def stationary_taus(params: PhysParams) -> List[float]:
    """
    Stationary widths 1/sqrt(k), ascending.

    >>> [round(t, 5) for t in stationary_taus(PhysParams(lam=-2.0, omega=1.0))]
    [0.51764, 1.93185]
    >>> stationary_taus(PhysParams(lam=-1.0, omega=2.0))
    []
    """
    return sorted(1.0 / math.sqrt(x) for x in _positive_roots(params))


def linearized_rate(k: float, params: PhysParams) -> float:
    """
    Omega_eff = -4 k (k + lam) of the tau ODE linearized at tau = 1/sqrt(k).

    Positive values are saddles, negative values centers.

    >>> round(linearized_rate(2 - math.sqrt(3), PhysParams(lam=-2.0, omega=1.0)), 5)
    1.85641
    """
    return -4.0 * k * (k + params.lam)


def fixed_points(params: PhysParams) -> List[FixedPoint]:
    """Stationary points with their linear type."""
    points = []
    for tau in stationary_taus(params):
        k = 1.0 / tau**2
        rate = linearized_rate(k, params)
        if abs(rate) <= 1e-9 * max(1.0, k * k):
            kind = FixedPointKind.DEGENERATE
        elif rate > 0:
            kind = FixedPointKind.SADDLE
        else:
            kind = FixedPointKind.CENTER
        points.append(FixedPoint(tau=tau, omega_eff=rate, kind=kind))
    return points


def classification_horizon(params: PhysParams) -> float:
    """
    Ten periods of the slowest linear mode, or 50/omega without one.

    >>> round(classification_horizon(PhysParams(lam=-2.0, omega=2.0)), 6)
    25.0
    """
    rates = [
        abs(p.omega_eff)
        for p in fixed_points(params)
        if p.kind != FixedPointKind.DEGENERATE
    ]
    if rates:
        return 10.0 * 2.0 * math.pi / math.sqrt(min(rates))
    return 50.0 / params.omega if params.omega > 0 else 50.0


def classify_trajectory(
    init: TauState,
    params: PhysParams,
    *,
    horizon: Optional[float] = None,
    rtol: float = 1e-11,
    atol: float = 1e-12,
) -> TrajectoryClass:
    """
    Decide whether a trajectory is stationary, periodic or unbounded.

    The orbit is integrated with an adaptive high-order method in chunks.
    Periodicity is a return to within 1e-6 of the initial point on a
    Poincare section through it, crossed in the initial direction, after at
    least one sign change of tau_dot. Unboundedness is tau passing 100 times
    the largest of the initial and stationary widths while increasing and
    convex; the growth rate is the log-slope of tau just before that.

    Raises:
        InconclusiveClassification: Horizon exhausted without a verdict
    """
    _require_positive(init.tau)
    lam, w2 = params.lam, signed_omega2(params)
    taus = stationary_taus(params)
    for ts in taus:
        if abs(init.tau - ts) <= STATIONARY_TOL and abs(init.tau_dot) <= STATIONARY_TOL:
            return TrajectoryClass(kind=TrajectoryKind.STATIONARY)

    horizon = horizon if horizon is not None else classification_horizon(params)
    escape = ESCAPE_FACTOR * max([init.tau, *taus])
    tau0, v0 = init.tau, init.tau_dot

    def rhs(t, y):
        return [y[1], _accel(y[0], lam, w2)]

    def escaped(t, y):
        return y[0] - escape

    escaped.terminal = True
    escaped.direction = 1

    # Section through the initial point, crossed in the initial direction.
    if v0 != 0.0:

        def section(y):
            return y[0] - tau0

        direction = math.copysign(1.0, v0)
    else:

        def section(y):
            return y[1]

        direction = math.copysign(1.0, _accel(tau0, lam, w2))

    y = np.array([tau0, v0])
    t0 = 0.0
    chunk = horizon / 10.0
    turned = False
    while t0 < horizon:
        t1 = min(t0 + chunk, horizon)
        sol = solve_ivp(
            rhs,
            (t0, t1),
            y,
            method="DOP853",
            rtol=rtol,
            atol=atol,
            dense_output=True,
            events=escaped,
        )
        if sol.status == -1:
            raise InconclusiveClassification(
                f"[classify_trajectory] integration failed: {sol.message}", horizon
            )
        times, states = sol.t, sol.y
        for i in range(len(times) - 1):
            sa, sb = section(states[:, i]), section(states[:, i + 1])
            if turned and sa * sb < 0 and (sb - sa) * direction > 0:
                t_r = brentq(
                    lambda t: section(sol.sol(t)), times[i], times[i + 1], xtol=1e-14
                )
                y_r = sol.sol(t_r)
                if math.hypot(y_r[0] - tau0, y_r[1] - v0) <= RETURN_TOL:
                    return TrajectoryClass(kind=TrajectoryKind.PERIODIC, period=t_r)
            if states[1, i] * states[1, i + 1] < 0:
                turned = True
        if sol.status == 1:
            t_e = float(sol.t_events[0][0])
            tau_e, v_e = sol.y_events[0][0]
            if v_e > 0 and _accel(tau_e, lam, w2) > 0:
                rate = _log_slope(sol, times[0], t_e)
                return TrajectoryClass(kind=TrajectoryKind.UNBOUNDED, growth_rate=rate)
            raise InconclusiveClassification(
                f"[classify_trajectory] tau passed {escape:.4g} without convex growth",
                horizon,
            )
        y = states[:, -1]
        t0 = float(times[-1])
    raise InconclusiveClassification(
        f"[classify_trajectory] no verdict for {init} within horizon {horizon:.4g}",
        horizon,
    )


def _log_slope(sol, t_start: float, t_end: float, window: float = 1.0) -> float:
    """Least-squares slope of ln tau over the last `window` time units."""
    t_a = max(t_start, t_end - window)
    if t_end - t_a < 1e-9:
        tau, v = sol.sol(t_end)
        return float(v / tau)
    t = np.linspace(t_a, t_end, 64)
    return float(np.polyfit(t, np.log(sol.sol(t)[0]), 1)[0])


def _classify_one(
    state: Tuple[float, float], params: PhysParams
) -> Tuple[float, float, Optional[TrajectoryClass]]:
    try:
        verdict = classify_trajectory(
            TauState(tau=state[0], tau_dot=state[1]), params
        )
    except InconclusiveClassification:
        verdict = None
    return state[0], state[1], verdict


def classify_many(
    states: Iterable[Tuple[float, float]], params: PhysParams, workers: int = 1
) -> List[Tuple[float, float, Optional[TrajectoryClass]]]:
    """
    Classify many initial conditions.

    Inconclusive verdicts are returned as None so callers can count them.
    """
    job = partial(_classify_one, params=params)
    states = list(states)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, states))
    return [job(s) for s in states]


def _reversed(traj: TauTrajectory) -> TauTrajectory:
    """Time-reverse a trajectory integrated from (tau, -tau_dot)."""
    return TauTrajectory(
        t=-traj.t,
        tau=traj.tau,
        tau_dot=-traj.tau_dot,
        first_integral=traj.first_integral,
        max_drift=traj.max_drift,
    )


def portrait_seeds(
    tau_range: Sequence[float], taudot_range: Sequence[float], n_orbits: int
) -> List[TauState]:
    """Seeds on the tau axis and on the vertical line through mid-range tau."""
    n_axis = max(1, n_orbits // 2)
    n_vertical = max(1, n_orbits - n_axis)
    seeds = [TauState(tau=float(t)) for t in np.linspace(*tau_range, n_axis)]
    mid = 0.5 * (tau_range[0] + tau_range[1])
    for v in np.linspace(taudot_range[0], taudot_range[1], n_vertical + 1):
        if v != 0.0:
            seeds.append(TauState(tau=mid, tau_dot=float(v)))
    return seeds[:n_orbits]


def phase_portrait(
    params: PhysParams,
    tau_range: Sequence[float] = (0.3, 3.0),
    taudot_range: Sequence[float] = (-2.0, 2.0),
    n_orbits: int = 12,
    *,
    dt: float = DEFAULT_TAU_DT,
    t_end: float = 20.0,
    record_every: int = 20,
) -> PhasePortrait:
    """
    Orbits of the tau ODE sampling the level sets of its first integral.

    Each seed is integrated forward and, when it is off the tau axis,
    backward too (through the reversibility tau_dot -> -tau_dot). Orbits
    stop once tau leaves twice the plotting range.
    """
    if tau_range[0] <= 0:
        raise ValueError("phase portraits need a positive tau range")
    tau_max = 2.0 * tau_range[1]
    orbits = []
    for seed in portrait_seeds(tau_range, taudot_range, n_orbits):
        forward = integrate_tau(
            seed, params, t_end, dt, record_every=record_every, tau_max=tau_max
        )
        orbits.append(forward)
        if seed.tau_dot != 0.0:
            mirror = TauState(tau=seed.tau, tau_dot=-seed.tau_dot)
            backward = integrate_tau(
                mirror, params, t_end, dt, record_every=record_every, tau_max=tau_max
            )
            orbits.append(_reversed(backward))
    points = fixed_points(params)
    logger.info(
        f"[phase_portrait] {len(orbits)} orbits, fixed points "
        f"{[(round(p.tau, 5), p.kind.value) for p in points]}"
    )
    return PhasePortrait(params=params, orbits=orbits, fixed_points=points)


def evolve_ansatz(
    g: GaussianAnsatz,
    params: PhysParams,
    t_end: float,
    dt: float = DEFAULT_TAU_DT,
    *,
    record_every: int = 1,
) -> List[Tuple[float, GaussianAnsatz]]:
    """
    Integrate (tau, tau_dot, theta) jointly with RK4.

    The amplitude is not integrated: it is read off the modulus law.
    """
    if params.dim != 1:
        raise ValueError("the Gaussian ansatz is integrated in one dimension")
    n, h = _step_count(t_end, dt)
    lam, w2 = params.lam, signed_omega2(params)
    log_b0 = math.log(g.b0_mod**2 * g.tau0)

    def theta_rate(tau: float) -> float:
        return -0.5 / tau**2 - lam * (log_b0 - math.log(tau))

    tau, v, theta = g.state.tau, g.state.tau_dot, g.theta
    out = [(0.0, g)]
    for i in range(1, n + 1):
        # theta' depends on tau only, so its RK4 stages reuse the tau stages.
        k1x, k1v, k1p = v, _accel(tau, lam, w2), theta_rate(tau)
        x2 = tau + 0.5 * h * k1x
        k2x, k2v, k2p = v + 0.5 * h * k1v, _accel(x2, lam, w2), theta_rate(x2)
        x3 = tau + 0.5 * h * k2x
        k3x, k3v, k3p = v + 0.5 * h * k2v, _accel(x3, lam, w2), theta_rate(x3)
        x4 = tau + h * k3x
        k4x, k4v, k4p = v + h * k3v, _accel(x4, lam, w2), theta_rate(x4)
        tau += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        theta += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if tau <= 0:
            raise WidthCollapse(f"[evolve_ansatz] tau <= 0 at t={i * h:.6g}", i * h)
        if i % record_every == 0 or i == n:
            out.append(
                (
                    i * h,
                    GaussianAnsatz(
                        state=TauState(tau=tau, tau_dot=v),
                        theta=theta,
                        b0_mod=g.b0_mod,
                        tau0=g.tau0,
                    ),
                )
            )
    return out


def ansatz_to_field(g: GaussianAnsatz, grid: Grid) -> WaveField:
    """Sample |b| e^{i theta} e^{-a x^2 / 2} on a one-dimensional grid."""
    if grid.dim != 1:
        raise ValueError("ansatz_to_field samples one-dimensional grids")
    x = grid.axis()
    values = g.amplitude * np.exp(1j * g.theta) * np.exp(-g.a * x * x / 2.0)
    return WaveField(grid=grid, values=values)
