"""Oscillatory extremum-seeking simulation with deceptive players.

Every player probes its cost with a sinusoidal perturbation and follows
the demodulated gradient estimate; deceptive players additionally inject
their targets' probe signals, scaled by an amplitude delta that evolves
under a configurable policy (fixed, integral, phase-lead or
price-reference).  Quadratic games run through a compiled fixed-step
RK4 kernel; other games use a plain Python integrator with identical
semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .deception import DeceptionError, DeceptionStructure
from .games import (AggregativeGame, Game, GameError, QuadraticGame, cost,
                    cost_gradient)

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

_TWO_PI = 2.0 * math.pi
BLOWUP = 1e6

# policy kind codes shared with the compiled kernel
_OBLIVIOUS, _FIXED, _INTEGRAL, _PHASE_LEAD, _PRICE_REF = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class ProbeConfig:
    """Sinusoidal probe parameters.

    The probe of player i is a*sin(omega*omega_bar[i]*t + phases[i]).
    Frequency ratios are stored as exact rationals so the common probe
    period is computed without floating-point drift.
    ``phase_estimates[(i, j)]`` is deceiver i's estimate of target j's
    phase; it defaults to the true phase.
    """

    a: float
    k: float
    omega: float
    omega_bar: tuple[Fraction, ...]
    phases: tuple[float, ...] = ()
    phase_estimates: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.a <= 0 or self.k <= 0 or self.omega <= 0:
            raise GameError("a, k and omega must be positive")
        ob = tuple(Fraction(w) for w in self.omega_bar)
        if any(w <= 0 for w in ob):
            raise GameError("frequency ratios must be positive")
        if len(set(ob)) != len(ob):
            raise GameError("frequency ratios must be pairwise distinct")
        phases = tuple(float(p) for p in self.phases) or (0.0,) * len(ob)
        if len(phases) != len(ob):
            raise GameError("one phase per player required")
        object.__setattr__(self, "omega_bar", ob)
        object.__setattr__(self, "phases", phases)

    @property
    def N(self) -> int:
        return len(self.omega_bar)

    def omega_i(self, i: int) -> float:
        return self.omega * float(self.omega_bar[i])

    def common_period(self) -> float:
        """Smallest T > 0 with omega_i * T a multiple of 2 pi for all i."""
        dens = [w.denominator for w in self.omega_bar]
        L = math.lcm(*dens)
        nums = [w.numerator * (L // w.denominator) for w in self.omega_bar]
        G = math.gcd(*nums)
        return _TWO_PI * L / (G * self.omega)

    def estimate(self, deceiver: int, target: int) -> float:
        return float(self.phase_estimates.get((deceiver, target),
                                              self.phases[target]))


@dataclass(frozen=True)
class Oblivious:
    """Nominal extremum seeking, no deception."""


@dataclass(frozen=True)
class FixedDelta:
    """Constant deception amplitude."""

    delta: float


@dataclass(frozen=True)
class IntegralDelta:
    """d(delta)/dt = rate * (J_i(x) - jref); rate is the signed product
    of the small integral gain and the per-player sign factor."""

    rate: float
    jref: float


@dataclass(frozen=True)
class PhaseLead:
    """Second-order delta dynamics adding approximate proportional action.

    States (phi, rho): d(phi)/dt = (-phi + rho)/g1,
    d(rho)/dt = rate*(J_i(x) - jref),
    delta = (g2/g1) rho - (g2/g1 - 1) phi.  Requires g2 >= g1 > 0;
    g1 = g2 reduces exactly to the integral policy.
    """

    rate: float
    jref: float
    g1: float
    g2: float

    def __post_init__(self):
        if not 0 < self.g1 <= self.g2:
            raise GameError("phase-lead gains must satisfy 0 < g1 <= g2")


@dataclass(frozen=True)
class PriceRef:
    """d(delta)/dt = rate * (u_i - uref): drives the deceiver's own
    averaged action to a reference instead of its cost."""

    rate: float
    uref: float


Policy = Oblivious | FixedDelta | IntegralDelta | PhaseLead | PriceRef

_STATE_SIZE = {_OBLIVIOUS: 0, _FIXED: 0, _INTEGRAL: 1, _PHASE_LEAD: 2,
               _PRICE_REF: 1}


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled simulation output."""

    t: np.ndarray
    x: np.ndarray
    u: np.ndarray
    delta: np.ndarray
    J: np.ndarray
    deceivers: tuple[int, ...]
    unstable: bool
    h: float
    stride: int
    period: float

    @property
    def N(self) -> int:
        return self.x.shape[1]

    def header(self) -> list[str]:
        n = self.N
        cols = ["t"]
        cols += [f"x{i + 1}" for i in range(n)]
        cols += [f"u{i + 1}" for i in range(n)]
        cols += [f"delta{d + 1}" for d in self.deceivers]
        cols += [f"J{i + 1}" for i in range(n)]
        return cols

    def to_csv(self, path) -> None:
        rows = np.column_stack([self.t, self.x, self.u, self.delta, self.J])
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(self.header()) + "\n")
            for row in rows:
                fh.write(",".join(format(v, ".17g") for v in row) + "\n")


class _Encoding:
    """Flat per-player arrays consumed by both integrator backends."""

    def __init__(self, game: Game, probe: ProbeConfig,
                 ds: DeceptionStructure | None, policies: dict | None):
        N = game.N
        if probe.N != N:
            raise GameError("probe config must cover every player")
        policies = dict(policies or {})
        deceivers = ds.deceivers if ds is not None else ()
        for i in policies:
            if i not in deceivers:
                raise DeceptionError(
                    f"player {i} has a policy but is not a deceiver")
        kind = np.zeros(N, dtype=np.int64)
        off = np.full(N, -1, dtype=np.int64)
        p_delta = np.zeros(N)
        rate = np.zeros(N)
        jref = np.zeros(N)
        g1 = np.ones(N)
        g2 = np.ones(N)
        uref = np.zeros(N)
        mask = np.zeros((N, N))
        phase_est = np.zeros((N, N))
        pos = N
        for i in deceivers:
            pol = policies.get(i)
            if pol is None or isinstance(pol, Oblivious):
                raise DeceptionError(f"deceiver {i} needs a delta policy")
            if isinstance(pol, FixedDelta):
                kind[i], p_delta[i] = _FIXED, pol.delta
            elif isinstance(pol, IntegralDelta):
                kind[i], rate[i], jref[i] = _INTEGRAL, pol.rate, pol.jref
            elif isinstance(pol, PhaseLead):
                kind[i] = _PHASE_LEAD
                rate[i], jref[i] = pol.rate, pol.jref
                g1[i], g2[i] = pol.g1, pol.g2
            elif isinstance(pol, PriceRef):
                kind[i], rate[i], uref[i] = _PRICE_REF, pol.rate, pol.uref
            else:
                raise DeceptionError(f"unknown policy {pol!r}")
            size = _STATE_SIZE[kind[i]]
            if size:
                off[i] = pos
                pos += size
        if ds is not None:
            for i, ts in zip(ds.deceivers, ds.targets):
                for tgt in ts:
                    mask[i, tgt] = 1.0
                    phase_est[i, tgt] = probe.estimate(i, tgt)
        self.state_size = pos
        self.kind, self.off = kind, off
        self.p_delta, self.rate, self.jref = p_delta, rate, jref
        self.g1, self.g2, self.uref = g1, g2, uref
        self.mask, self.phase_est = mask, phase_est
        self.omega_i = np.array([probe.omega_i(i) for i in range(N)])
        self.phases = np.array(probe.phases)
        self.deceivers = tuple(deceivers)

    def initial_state(self, u0, delta0=None) -> np.ndarray:
        u0 = np.asarray(u0, dtype=float).reshape(-1)
        y = np.zeros(self.state_size)
        y[:len(u0)] = u0
        if delta0 is not None:
            for i, d0 in zip(self.deceivers, np.atleast_1d(delta0)):
                if self.kind[i] == _INTEGRAL or self.kind[i] == _PRICE_REF:
                    y[self.off[i]] = d0
                elif self.kind[i] == _PHASE_LEAD:
                    y[self.off[i]] = y[self.off[i] + 1] = d0
        return y

    def delta_of(self, y: np.ndarray, i: int) -> float:
        k = self.kind[i]
        if k == _FIXED:
            return self.p_delta[i]
        if k in (_INTEGRAL, _PRICE_REF):
            return y[self.off[i]]
        if k == _PHASE_LEAD:
            r = self.g2[i] / self.g1[i]
            return r * y[self.off[i] + 1] - (r - 1.0) * y[self.off[i]]
        return 0.0


def action(game: Game, probe: ProbeConfig, ds: DeceptionStructure | None,
           policies: dict | None, y, t: float) -> np.ndarray:
    """Instantaneous action vector at state y and time t."""
    enc = _Encoding(game, probe, ds, policies)
    return _action_py(enc, probe.a, np.asarray(y, dtype=float), t)


def _action_py(enc: _Encoding, a: float, y: np.ndarray, t: float):
    N = len(enc.kind)
    x = np.empty(N)
    for i in range(N):
        x[i] = y[i] + a * math.sin(enc.omega_i[i] * t + enc.phases[i])
        if enc.kind[i] != _OBLIVIOUS:
            d = enc.delta_of(y, i)
            inj = 0.0
            for j in range(N):
                if enc.mask[i, j]:
                    inj += math.sin(enc.omega_i[j] * t + enc.phase_est[i, j])
            x[i] += a * d * inj
    return x


def rhs(game: Game, probe: ProbeConfig, ds: DeceptionStructure | None,
        policies: dict | None, y, t: float) -> np.ndarray:
    """Time derivative of the full oscillatory state."""
    enc = _Encoding(game, probe, ds, policies)
    return _rhs_py(game, enc, probe.a, probe.k, np.asarray(y, float), t)


def _rhs_py(game: Game, enc: _Encoding, a: float, k: float,
            y: np.ndarray, t: float) -> np.ndarray:
    N = game.N
    x = _action_py(enc, a, y, t)
    J = np.array([cost(game, i, x) for i in range(N)])
    if not np.all(np.isfinite(J)):
        raise GameError("non-finite cost during integration")
    dy = np.zeros_like(y)
    for i in range(N):
        s = math.sin(enc.omega_i[i] * t + enc.phases[i])
        dy[i] = -(2.0 * k / a) * J[i] * s
        kd = enc.kind[i]
        if kd == _INTEGRAL:
            dy[enc.off[i]] = enc.rate[i] * (J[i] - enc.jref[i])
        elif kd == _PHASE_LEAD:
            o = enc.off[i]
            dy[o] = (-y[o] + y[o + 1]) / enc.g1[i]
            dy[o + 1] = enc.rate[i] * (J[i] - enc.jref[i])
        elif kd == _PRICE_REF:
            dy[enc.off[i]] = enc.rate[i] * (y[i] - enc.uref[i])
    return dy


def _kernel_source():
    """Compiled RK4 loop specialized to quadratic costs."""

    def kernel(Qall, ball, pall, a, k, omega_i, phases, mask, phase_est,
               kind, off, p_delta, rate, jref, g1, g2, uref,
               y0, h, nsteps, stride, nrec, dec_idx):
        N = ball.shape[0]
        ns = y0.shape[0]
        nd = dec_idx.shape[0]
        t_out = np.empty(nrec)
        u_out = np.empty((nrec, N))
        x_out = np.empty((nrec, N))
        d_out = np.empty((nrec, nd))
        J_out = np.empty((nrec, N))
        y = y0.copy()
        dy = np.empty(ns)
        k1 = np.empty(ns)
        k2 = np.empty(ns)
        k3 = np.empty(ns)
        k4 = np.empty(ns)
        yt = np.empty(ns)
        x = np.empty(N)
        J = np.empty(N)
        rec = 0
        unstable = False

        for step in range(nsteps + 1):
            t = step * h
            # evaluate outputs at the current state
            for i in range(N):
                x[i] = y[i] + a * np.sin(omega_i[i] * t + phases[i])
                if kind[i] != 0:
                    if kind[i] == 1:
                        d = p_delta[i]
                    elif kind[i] == 3:
                        r = g2[i] / g1[i]
                        d = r * y[off[i] + 1] - (r - 1.0) * y[off[i]]
                    else:
                        d = y[off[i]]
                    inj = 0.0
                    for j in range(N):
                        if mask[i, j] != 0.0:
                            inj += np.sin(omega_i[j] * t + phase_est[i, j])
                    x[i] += a * d * inj
            for i in range(N):
                acc = pall[i]
                for j in range(N):
                    acc += ball[i, j] * x[j]
                    row = 0.0
                    for m in range(N):
                        row += Qall[i, j, m] * x[m]
                    acc += 0.5 * x[j] * row
                J[i] = acc

            if step % stride == 0 and rec < nrec:
                t_out[rec] = t
                for i in range(N):
                    u_out[rec, i] = y[i]
                    x_out[rec, i] = x[i]
                    J_out[rec, i] = J[i]
                for q in range(nd):
                    i = dec_idx[q]
                    if kind[i] == 1:
                        d_out[rec, q] = p_delta[i]
                    elif kind[i] == 3:
                        r = g2[i] / g1[i]
                        d_out[rec, q] = (r * y[off[i] + 1]
                                         - (r - 1.0) * y[off[i]])
                    else:
                        d_out[rec, q] = y[off[i]]
                rec += 1

            for i in range(N):
                if not np.isfinite(y[i]) or abs(y[i]) > BLOWUP:
                    unstable = True
            if unstable or step == nsteps:
                break

            # RK4 step
            for stage in range(4):
                if stage == 0:
                    ts = t
                    for m in range(ns):
                        yt[m] = y[m]
                elif stage == 1:
                    ts = t + 0.5 * h
                    for m in range(ns):
                        yt[m] = y[m] + 0.5 * h * k1[m]
                elif stage == 2:
                    ts = t + 0.5 * h
                    for m in range(ns):
                        yt[m] = y[m] + 0.5 * h * k2[m]
                else:
                    ts = t + h
                    for m in range(ns):
                        yt[m] = y[m] + h * k3[m]

                for i in range(N):
                    x[i] = yt[i] + a * np.sin(omega_i[i] * ts + phases[i])
                    if kind[i] != 0:
                        if kind[i] == 1:
                            d = p_delta[i]
                        elif kind[i] == 3:
                            r = g2[i] / g1[i]
                            d = (r * yt[off[i] + 1]
                                 - (r - 1.0) * yt[off[i]])
                        else:
                            d = yt[off[i]]
                        inj = 0.0
                        for j in range(N):
                            if mask[i, j] != 0.0:
                                inj += np.sin(omega_i[j] * ts
                                              + phase_est[i, j])
                        x[i] += a * d * inj
                for i in range(N):
                    acc = pall[i]
                    for j in range(N):
                        acc += ball[i, j] * x[j]
                        row = 0.0
                        for m in range(N):
                            row += Qall[i, j, m] * x[m]
                        acc += 0.5 * x[j] * row
                    J[i] = acc
                for m in range(ns):
                    dy[m] = 0.0
                for i in range(N):
                    s = np.sin(omega_i[i] * ts + phases[i])
                    dy[i] = -(2.0 * k / a) * J[i] * s
                    kd = kind[i]
                    if kd == 2:
                        dy[off[i]] = rate[i] * (J[i] - jref[i])
                    elif kd == 3:
                        o = off[i]
                        dy[o] = (-yt[o] + yt[o + 1]) / g1[i]
                        dy[o + 1] = rate[i] * (J[i] - jref[i])
                    elif kd == 4:
                        dy[off[i]] = rate[i] * (yt[i] - uref[i])

                if stage == 0:
                    for m in range(ns):
                        k1[m] = dy[m]
                elif stage == 1:
                    for m in range(ns):
                        k2[m] = dy[m]
                elif stage == 2:
                    for m in range(ns):
                        k3[m] = dy[m]
                else:
                    for m in range(ns):
                        k4[m] = dy[m]
            for m in range(ns):
                y[m] += (h / 6.0) * (k1[m] + 2.0 * k2[m]
                                     + 2.0 * k3[m] + k4[m])
        return t_out, u_out, x_out, d_out, J_out, rec, unstable

    return kernel


_py_kernel = _kernel_source()
_nb_kernel = njit(cache=True, nogil=True)(_kernel_source()) \
    if njit is not None else _py_kernel


def _ball_matrix(game: QuadraticGame):
    N = game.N
    Qall = np.stack(game.Q)
    ball = np.stack(game.b)
    pall = np.array(game.p)
    return Qall, ball, pall


def simulate(game: Game, probe: ProbeConfig,
             ds: DeceptionStructure | None = None,
             policies: dict | None = None, u0=None, delta0=None,
             T: float = 10.0, samples_per_period: int = 40,
             stride: int | None = None, max_records: int = 4000,
             records_per_period: int | None = None) -> Trajectory:
    """Fixed-step RK4 integration of the oscillatory dynamics over [0, T].

    The step divides the exact common probe period, so period averages
    computed on the output grid are alias-free.  Integration stops early
    with ``unstable=True`` when any averaged action exceeds the blow-up
    threshold.
    """
    enc = _Encoding(game, probe, ds, policies)
    period = probe.common_period()
    h_max = _TWO_PI / (np.max(enc.omega_i) * samples_per_period)
    per_period = max(1, math.ceil(period / h_max))
    if stride is None:
        if records_per_period is not None:
            stride = max(1, round(per_period / records_per_period))
        else:
            est_steps = math.ceil(T * per_period / period)
            stride = max(1, est_steps // max_records)
    # keep the record grid commensurate with the probe period so that
    # trailing period averages use an exact integer window; a stride
    # above one record per period would force the step itself smaller
    stride = min(stride, per_period)
    per_period = stride * math.ceil(per_period / stride)
    h = period / per_period
    nsteps = math.ceil(T / h)
    nrec = nsteps // stride + 1
    y0 = enc.initial_state(np.zeros(game.N) if u0 is None else u0, delta0)
    dec_idx = np.array(enc.deceivers, dtype=np.int64)

    if isinstance(game, QuadraticGame):
        Qall, ball, pall = _ball_matrix(game)
        out = _nb_kernel(Qall, ball, pall, probe.a, probe.k, enc.omega_i,
                         enc.phases, enc.mask, enc.phase_est, enc.kind,
                         enc.off, enc.p_delta, enc.rate, enc.jref, enc.g1,
                         enc.g2, enc.uref, y0, h, nsteps, stride, nrec,
                         dec_idx)
        t_out, u_out, x_out, d_out, J_out, rec, unstable = out
    else:
        t_out, u_out, x_out, d_out, J_out, rec, unstable = _simulate_py(
            game, enc, probe, y0, h, nsteps, stride, nrec, dec_idx)

    sl = slice(0, rec)
    return Trajectory(t=t_out[sl].copy(), x=x_out[sl].copy(),
                      u=u_out[sl].copy(), delta=d_out[sl].copy(),
                      J=J_out[sl].copy(), deceivers=enc.deceivers,
                      unstable=bool(unstable), h=h, stride=stride,
                      period=period)


def _simulate_py(game, enc, probe, y0, h, nsteps, stride, nrec, dec_idx):
    N = game.N
    nd = len(dec_idx)
    t_out = np.empty(nrec)
    u_out = np.empty((nrec, N))
    x_out = np.empty((nrec, N))
    d_out = np.empty((nrec, nd))
    J_out = np.empty((nrec, N))
    y = y0.copy()
    rec = 0
    unstable = False
    a, k = probe.a, probe.k
    for step in range(nsteps + 1):
        t = step * h
        if step % stride == 0 and rec < nrec:
            x = _action_py(enc, a, y, t)
            t_out[rec] = t
            u_out[rec] = y[:N]
            x_out[rec] = x
            d_out[rec] = [enc.delta_of(y, i) for i in dec_idx]
            J_out[rec] = [cost(game, i, x) for i in range(N)]
            rec += 1
        if np.any(~np.isfinite(y[:N])) or np.max(np.abs(y[:N])) > BLOWUP:
            unstable = True
        if unstable or step == nsteps:
            break
        k1 = _rhs_py(game, enc, a, k, y, t)
        k2 = _rhs_py(game, enc, a, k, y + 0.5 * h * k1, t + 0.5 * h)
        k3 = _rhs_py(game, enc, a, k, y + 0.5 * h * k2, t + 0.5 * h)
        k4 = _rhs_py(game, enc, a, k, y + h * k3, t + h)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return t_out, u_out, x_out, d_out, J_out, rec, unstable


def average_rhs(game: Game, ds: DeceptionStructure | None, u, delta,
                k: float, probe: ProbeConfig | None = None) -> np.ndarray:
    """Averaged flow of the mean actions at fixed deception amplitudes.

    du_i/dt = -k (grad_i J_i(u) + sum over deceivers j of player i of
    delta_j cos(phase error) grad_j J_i(u)); the cosine factor is 1 when
    the deceiver's phase estimates are exact.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    out = np.empty(game.N)
    for i in range(game.N):
        grad = cost_gradient(game, i, u)
        val = grad[i]
        if ds is not None:
            delta_arr = np.atleast_1d(np.asarray(delta, dtype=float))
            for pos, (j, ts) in enumerate(zip(ds.deceivers, ds.targets)):
                if i in ts:
                    c = 1.0
                    if probe is not None:
                        c = math.cos(probe.estimate(j, i) - probe.phases[i])
                    val += delta_arr[pos] * c * grad[j]
        out[i] = -k * val
    return out


def simulate_averaged(game: Game, ds: DeceptionStructure | None,
                      policies: dict | None, u0, T: float, k: float,
                      h: float = 1e-3,
                      probe: ProbeConfig | None = None,
                      max_records: int = 4000):
    """RK4 integration of the averaged dynamics (no probes).

    Returns (t, u, delta) sampled on the same kind of uniform grid as
    :func:`simulate`; delta policies evolve against J_i(u).
    """
    deceivers = ds.deceivers if ds is not None else ()
    policies = dict(policies or {})

    def dstate_split(y):
        return y[:game.N], y[game.N:]

    offs = {}
    pos = 0
    for i in deceivers:
        pol = policies[i]
        size = 2 if isinstance(pol, PhaseLead) else \
            0 if isinstance(pol, FixedDelta) else 1
        offs[i] = (pos, size)
        pos += size

    def delta_vec(z):
        out = []
        for i in deceivers:
            pol = policies[i]
            if isinstance(pol, FixedDelta):
                out.append(pol.delta)
            elif isinstance(pol, PhaseLead):
                o, _ = offs[i]
                r = pol.g2 / pol.g1
                out.append(r * z[o + 1] - (r - 1.0) * z[o])
            else:
                out.append(z[offs[i][0]])
        return np.array(out)

    def f(y):
        u, z = dstate_split(y)
        dvec = delta_vec(z)
        du = average_rhs(game, ds, u, dvec, k, probe=probe)
        dz = np.zeros_like(z)
        for i in deceivers:
            pol = policies[i]
            o, size = offs[i]
            if isinstance(pol, IntegralDelta):
                dz[o] = pol.rate * (cost(game, i, u) - pol.jref)
            elif isinstance(pol, PhaseLead):
                dz[o] = (-z[o] + z[o + 1]) / pol.g1
                dz[o + 1] = pol.rate * (cost(game, i, u) - pol.jref)
            elif isinstance(pol, PriceRef):
                dz[o] = pol.rate * (u[i] - pol.uref)
        return np.concatenate([du, dz])

    nsteps = math.ceil(T / h)
    stride = max(1, nsteps // max_records)
    y = np.concatenate([np.asarray(u0, dtype=float).reshape(-1),
                        np.zeros(pos)])
    ts, us, dvs = [], [], []
    for step in range(nsteps + 1):
        if step % stride == 0:
            ts.append(step * h)
            us.append(y[:game.N].copy())
            dvs.append(delta_vec(y[game.N:]))
        if step == nsteps:
            break
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return np.array(ts), np.array(us), np.array(dvs)


def moving_average(traj: Trajectory, signal: np.ndarray) -> tuple:
    """Trailing average of a recorded signal over one common probe period.

    The integration step divides the period exactly, so the window is an
    integer number of records; trapezoidal weights cancel every probe
    harmonic.  Returns (t_mid, averaged) with times at the window
    centers.
    """
    w = round(traj.period / (traj.h * traj.stride))
    if w < 1 or abs(w * traj.h * traj.stride - traj.period) > 1e-9 * traj.period:
        raise GameError("record grid does not divide the probe period")
    if len(traj.t) <= w:
        raise GameError("trajectory shorter than one probe period")
    sig = np.asarray(signal, dtype=float)
    csum = np.cumsum(sig, axis=0)
    total = csum[w:] - csum[:-w]
    # trapezoid: half-weight the window endpoints
    avg = (total - 0.5 * sig[w:] + 0.5 * sig[:-w]) / w
    return traj.t[w:] - 0.5 * traj.period, avg


def period_average(traj: Trajectory, signal: np.ndarray) -> np.ndarray:
    """Average of a recorded signal over the last full probe period."""
    t_tail, avg = moving_average(traj, signal)
    return avg[-1]


def averaging_gap(game: Game, probe: ProbeConfig,
                  ds: DeceptionStructure | None, policies: dict | None,
                  u0, T: float, omega_multipliers=(1.0, 10.0, 100.0),
                  samples_per_period: int = 40,
                  avg_h: float = 1e-3) -> list[float]:
    """Sup-norm distance between the probe-averaged and averaged flows.

    For each frequency multiplier, simulates the full dynamics with the
    base frequency scaled up, takes the trailing period average of u,
    and compares with the averaged-system trajectory at the same times.
    """
    t_av, u_av, _ = simulate_averaged(game, ds, policies, u0, T, probe.k,
                                      h=avg_h, probe=probe,
                                      max_records=10 ** 9)
    gaps = []
    for mult in omega_multipliers:
        pr = ProbeConfig(a=probe.a, k=probe.k, omega=probe.omega * mult,
                         omega_bar=probe.omega_bar, phases=probe.phases,
                         phase_estimates=probe.phase_estimates)
        traj = simulate(game, pr, ds, policies, u0=u0, T=T,
                        samples_per_period=samples_per_period,
                        records_per_period=64, max_records=10 ** 9)
        if traj.unstable:
            gaps.append(math.inf)
            continue
        t_ma, u_ma = moving_average(traj, traj.u)
        u_ref = np.empty_like(u_ma)
        for j in range(game.N):
            u_ref[:, j] = np.interp(t_ma, t_av, u_av[:, j])
        gaps.append(float(np.max(np.abs(u_ma - u_ref))))
    return gaps
