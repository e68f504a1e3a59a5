"""Deception analysis for quadratic games.

Covers the deceptive pseudogradient matrices, the stability set of
deception amplitudes, the deceptive-equilibrium map g(delta), the
single-deceiver single-oblivious (SDSO) payoff algebra, attainable and
benevolent reference windows, immunity tests, reaction-curve
classification, and mutual deception between two players.

Throughout, J is a *cost* (the duopoly's profit is -J).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .games import (GameError, QuadraticGame, cost, cost_gradient,
                    is_hurwitz, nash_equilibrium)
from .intervals import IntervalSet

_INF = math.inf


class DeceptionError(ValueError):
    """Invalid deception structure or out-of-domain request."""


@dataclass(frozen=True)
class DeceptionStructure:
    """Who deceives whom, with per-deceiver integral-policy data.

    ``deceivers[i]`` injects the probes of every player in ``targets[i]``
    into its own action with a common amplitude delta_i.  ``eps[i]`` is
    the signed integral-gain factor and ``jref[i]`` the cost reference
    of deceiver i (used by the attainability and simulation layers).
    """

    deceivers: tuple[int, ...]
    targets: tuple[tuple[int, ...], ...]
    eps: tuple[float, ...] = ()
    jref: tuple[float, ...] = ()

    def __post_init__(self):
        deceivers = tuple(int(i) for i in self.deceivers)
        targets = tuple(tuple(int(t) for t in ts) for ts in self.targets)
        if len(targets) != len(deceivers):
            raise DeceptionError("one target list per deceiver required")
        for i, ts in zip(deceivers, targets):
            if not ts:
                raise DeceptionError(f"deceiver {i} has an empty target list")
            if i in ts:
                raise DeceptionError(f"player {i} cannot deceive itself")
            if len(set(ts)) != len(ts):
                raise DeceptionError(f"deceiver {i} lists a target twice")
        eps = tuple(float(e) for e in self.eps) or (1.0,) * len(deceivers)
        jref = tuple(float(j) for j in self.jref) or (0.0,) * len(deceivers)
        if len(eps) != len(deceivers) or len(jref) != len(deceivers):
            raise DeceptionError("eps and jref must match the deceiver list")
        if any(e == 0.0 for e in eps):
            raise DeceptionError("eps entries must be nonzero")
        object.__setattr__(self, "deceivers", deceivers)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "jref", jref)

    @classmethod
    def single(cls, deceiver: int, target: int, eps: float = 1.0,
               jref: float = 0.0) -> "DeceptionStructure":
        return cls((deceiver,), ((target,),), (eps,), (jref,))

    @property
    def n(self) -> int:
        return len(self.deceivers)

    def deceivers_of(self, i: int) -> tuple[int, ...]:
        """The set of players currently deceiving player i."""
        return tuple(d for d, ts in zip(self.deceivers, self.targets)
                     if i in ts)

    def validate_for(self, game: QuadraticGame) -> None:
        for i, ts in zip(self.deceivers, self.targets):
            for idx in (i, *ts):
                if not 0 <= idx < game.N:
                    raise DeceptionError(f"player index {idx} out of range")


@dataclass(frozen=True)
class DeceptiveMatrices:
    """Per (deceiver, target) one-row perturbations of (Qcal, Bcal)."""

    Qbar: dict[tuple[int, int], np.ndarray]
    Bbar: dict[tuple[int, int], np.ndarray]


def build_deceptive_matrices(game: QuadraticGame,
                             ds: DeceptionStructure) -> DeceptiveMatrices:
    """One-nonzero-row matrices: row d of Qbar(i,j) is (Q_d) row of the
    deceiver, where d = targets[i][j]."""
    ds.validate_for(game)
    Qbar, Bbar = {}, {}
    for ipos, (dec, ts) in enumerate(zip(ds.deceivers, ds.targets)):
        for jpos, d in enumerate(ts):
            Qb = np.zeros((game.N, game.N))
            Bb = np.zeros(game.N)
            Qb[d, :] = game.Q[d][dec, :]
            Bb[d] = game.b[d][dec]
            Qbar[(ipos, jpos)] = Qb
            Bbar[(ipos, jpos)] = Bb
    return DeceptiveMatrices(Qbar=Qbar, Bbar=Bbar)


def q_delta(game: QuadraticGame, ds: DeceptionStructure,
            delta) -> tuple[np.ndarray, np.ndarray]:
    """Deceptive pseudogradient pair (Q_delta, B_delta)."""
    delta = np.asarray(delta, dtype=float).reshape(-1)
    if delta.shape != (ds.n,):
        raise DeceptionError(f"delta must have length {ds.n}")
    pm = game.pseudogradient_matrices()
    dm = build_deceptive_matrices(game, ds)
    Qd = pm.Qcal.copy()
    Bd = pm.Bcal.copy()
    for ipos in range(ds.n):
        for jpos in range(len(ds.targets[ipos])):
            Qd += delta[ipos] * dm.Qbar[(ipos, jpos)]
            Bd += delta[ipos] * dm.Bbar[(ipos, jpos)]
    return Qd, Bd


def in_delta_set(game: QuadraticGame, ds: DeceptionStructure, delta,
                 tol: float = 1e-9) -> bool:
    """True iff -Q_delta is Hurwitz, i.e. delta lies in the stability set."""
    Qd, _ = q_delta(game, ds, delta)
    return is_hurwitz(-Qd, tol=tol)


def dne(game: QuadraticGame, ds: DeceptionStructure, delta,
        check: bool = True) -> np.ndarray:
    """Deceptive Nash equilibrium g(delta) = -Q_delta^{-1} B_delta."""
    Qd, Bd = q_delta(game, ds, delta)
    if check and not is_hurwitz(-Qd):
        raise DeceptionError(f"delta={delta} outside the stability set")
    return np.linalg.solve(Qd, -Bd)


def delta_interval(game: QuadraticGame, ds: DeceptionStructure,
                   axis: int = 0, fixed=None,
                   box: tuple[float, float] = (-100.0, 100.0),
                   grid: float = 0.1, tol: float = 1e-6) -> IntervalSet:
    """Numeric slice of the stability set along one delta axis.

    Scans ``box`` with step ``grid`` holding the other axes at ``fixed``
    (default 0), then bisects every stability sign change to ``tol``.
    A stable box edge is reported as an infinite endpoint.
    """
    lo, hi = box
    if not lo < hi:
        raise DeceptionError("empty scan box")
    base = np.zeros(ds.n) if fixed is None else np.asarray(fixed, float).copy()

    def stable(v: float) -> bool:
        d = base.copy()
        d[axis] = v
        Qd, _ = q_delta(game, ds, d)
        return bool(np.max(np.linalg.eigvals(-Qd).real) < 0.0)

    xs = np.arange(lo, hi + grid / 2, grid)
    flags = [stable(v) for v in xs]

    def bisect(a: float, b: float) -> float:
        # a stable, b unstable; returns the stable end of the final
        # bracket (an inner estimate of the boundary)
        while abs(b - a) > tol:
            m = 0.5 * (a + b)
            if stable(m):
                a = m
            else:
                b = m
        return a

    pieces = []
    start = None
    for idx, fl in enumerate(flags):
        if fl and start is None:
            start = idx
        if (not fl or idx == len(xs) - 1) and start is not None:
            end = idx if not fl else idx
            left = -_INF if start == 0 else bisect(xs[start], xs[start - 1])
            if flags[end]:
                right = _INF
            else:
                right = bisect(xs[end - 1], xs[end])
            pieces.append((left, right))
            start = None
    return IntervalSet(tuple(pieces))


@dataclass(frozen=True)
class SdsoAnalysis:
    """Single-deceiver single-oblivious payoff algebra.

    The equilibrium displacement is g(delta) - x* = f(delta) * Phi with
    f(delta) = q1 delta / (q2 delta + q3), and every player's cost at
    the deceptive equilibrium is the quadratic
    Jcal_i(e) = r2[i] e^2 + r1[i] e + Jstar[i] in e = f(delta).
    """

    game: QuadraticGame
    deceiver: int
    d: int
    pivot: int
    Phi: np.ndarray
    q1: float
    q2: float
    q3: float
    r1: np.ndarray
    r2: np.ndarray
    Jstar: np.ndarray
    xstar: np.ndarray
    ds: DeceptionStructure = field(repr=False, default=None)

    def f(self, delta: float) -> float:
        den = self.q2 * delta + self.q3
        if den == 0.0:
            raise DeceptionError("delta at the pole of f")
        return self.q1 * delta / den

    def f_inverse(self, e: float) -> float:
        den = self.q1 - self.q2 * e
        if den == 0.0:
            raise DeceptionError("e at the asymptotic value of f")
        return self.q3 * e / den

    def jcal(self, i: int, e: float) -> float:
        return float(self.r2[i] * e * e + self.r1[i] * e + self.Jstar[i])


def sdso_analyze(game: QuadraticGame, deceiver: int, oblivious: int,
                 pivot: int = 0, cond_limit: float = 1e12) -> SdsoAnalysis:
    """Compute the SDSO bundle for one deceiver and one oblivious player.

    ``pivot`` is the preferred coordinate of the displacement direction;
    it is advanced automatically when the corresponding minor of the
    pseudogradient matrix is ill-conditioned.
    """
    if deceiver == oblivious:
        raise DeceptionError("deceiver and oblivious player must differ")
    pm = game.pseudogradient_matrices()
    Qcal = pm.Qcal
    N = game.N
    xstar = nash_equilibrium(game)
    rows = [r for r in range(N) if r != oblivious]
    M = Qcal[rows, :]  # (N-1) x N, rows of Qcal without the oblivious row

    chosen = None
    for cand in [pivot] + [i for i in range(N) if i != pivot]:
        cols = [c for c in range(N) if c != cand]
        minor = M[:, cols]
        if N == 1 or np.linalg.cond(minor) < cond_limit:
            chosen = cand
            break
    if chosen is None:  # cannot happen when Qcal is invertible
        raise DeceptionError("all pivot minors singular despite invertible "
                             "pseudogradient matrix")
    cols = [c for c in range(N) if c != chosen]
    rest = np.linalg.solve(M[:, cols], -M[:, chosen])
    Phi = np.empty(N)
    Phi[chosen] = 1.0
    Phi[cols] = rest

    Qd = game.Q[oblivious]
    bd = game.b[oblivious]
    q1 = float(-(bd[deceiver] + Qd[deceiver, :] @ xstar))
    q2 = float(Qd[deceiver, :] @ Phi)
    q3 = float(Qd[oblivious, :] @ Phi)
    if q1 == q2 == q3 == 0.0:
        raise DeceptionError("degenerate SDSO game: q1 = q2 = q3 = 0")

    r2 = np.array([0.5 * Phi @ game.Q[i] @ Phi for i in range(N)])
    r1 = np.array([(game.Q[i] @ xstar + game.b[i]) @ Phi for i in range(N)])
    Jstar = np.array([cost(game, i, xstar) for i in range(N)])
    ds = DeceptionStructure.single(deceiver, oblivious)
    return SdsoAnalysis(game=game, deceiver=deceiver, d=oblivious,
                        pivot=chosen, Phi=Phi, q1=q1, q2=q2, q3=q3,
                        r1=r1, r2=r2, Jstar=Jstar, xstar=xstar, ds=ds)


def _f_image(sdso: SdsoAnalysis, delta_set: IntervalSet) -> IntervalSet:
    """Image of a delta interval set under the Moebius map f."""
    q1, q2, q3 = sdso.q1, sdso.q2, sdso.q3
    if q2 == 0.0:
        if q3 == 0.0:
            raise DeceptionError("f undefined: q2 = q3 = 0")
        slope = q1 / q3
        if slope == 0.0:
            return IntervalSet.empty()
        out = [tuple(sorted((slope * lo, slope * hi)))
               for lo, hi in delta_set]
        return IntervalSet(tuple(out))

    pole = -q3 / q2
    asym = q1 / q2  # value of f at +-inf

    def fval(v: float, side: int) -> float:
        # side -1: pole approached from below; +1: from above
        if math.isinf(v):
            return asym
        if v == pole:
            s = q1 * q3  # f -> sign(q1 q3) * inf as delta -> pole^-
            if s == 0.0:
                return 0.0
            return math.copysign(_INF, s) if side < 0 else \
                math.copysign(_INF, -s)
        return sdso.f(v)

    snap = 1e-5 * max(1.0, abs(pole))
    pieces = []
    for lo, hi in delta_set:
        # stability boundaries found numerically may sit a bisection
        # tolerance away from the pole (where det Q_delta = 0); snap them
        if abs(lo - pole) <= snap:
            lo = pole
        if abs(hi - pole) <= snap:
            hi = pole
        if not lo < hi:
            continue
        subs = [(lo, hi)]
        if lo < pole < hi:
            subs = [(lo, pole), (pole, hi)]
        for slo, shi in subs:
            a = fval(slo, side=+1 if slo == pole else 0)
            b = fval(shi, side=-1 if shi == pole else 0)
            lo_e, hi_e = min(a, b), max(a, b)
            if lo_e < hi_e:
                pieces.append((lo_e, hi_e))
    return IntervalSet(tuple(pieces))


def _jcal_image(sdso: SdsoAnalysis, i: int, eset: IntervalSet) -> IntervalSet:
    """Image of an e-interval set under Jcal_i, assumed vertex-free."""
    r2, r1 = sdso.r2[i], sdso.r1[i]

    def val(e: float) -> float:
        if math.isinf(e):
            if r2 != 0.0:
                return math.copysign(_INF, r2)
            return math.copysign(_INF, r1 * e)
        return sdso.jcal(i, e)

    pieces = []
    for lo, hi in eset:
        a, b = val(lo), val(hi)
        lo_j, hi_j = min(a, b), max(a, b)
        if lo_j < hi_j:
            pieces.append((lo_j, hi_j))
    return IntervalSet(tuple(pieces))


def omega_set(sdso: SdsoAnalysis, eps1: float,
              delta_set: IntervalSet) -> IntervalSet:
    """Attainable deceiver cost references under the integral policy.

    ``delta_set`` is the (slice of the) stability set, e.g. from
    :func:`delta_interval`.
    """
    dec = sdso.deceiver
    r2d, r1d = sdso.r2[dec], sdso.r1[dec]
    if r2d == 0.0:
        raise DeceptionError("degenerate: deceiver's payoff curve is linear")
    sign = eps1 * r2d * sdso.q1 * sdso.q3
    if sign == 0.0:
        raise DeceptionError("eps1 * r2 * q1 * q3 = 0: attainability "
                             "dichotomy does not apply")
    vertex = -r1d / (2.0 * r2d)
    half = IntervalSet.open(-_INF, vertex) if sign > 0 else \
        IntervalSet.open(vertex, _INF)
    eset = half.intersect(_f_image(sdso, delta_set))
    return _jcal_image(sdso, dec, eset)


def stable_e_branch(sdso: SdsoAnalysis, eps1: float,
                    delta_set: IntervalSet) -> IntervalSet:
    """e-values with d(eps1 * Jcal(f))/d(delta) < 0 inside the stability set."""
    dec = sdso.deceiver
    r2d, r1d = sdso.r2[dec], sdso.r1[dec]
    sign = eps1 * r2d * sdso.q1 * sdso.q3
    vertex = -r1d / (2.0 * r2d)
    half = IntervalSet.open(-_INF, vertex) if sign > 0 else \
        IntervalSet.open(vertex, _INF)
    return half.intersect(_f_image(sdso, delta_set))


def solve_delta_for_ref(sdso: SdsoAnalysis, jref: float, eps1: float = 1.0,
                        tol: float = 1e-9) -> float:
    """Deception amplitude whose equilibrium gives the deceiver cost jref.

    Of the (at most two) candidate roots, keeps those on the stable
    integral-policy branch that map into the stability set, preferring
    the smallest |delta|.
    """
    dec = sdso.deceiver
    r2d, r1d = sdso.r2[dec], sdso.r1[dec]
    c = sdso.Jstar[dec] - jref
    if r2d == 0.0:
        if r1d == 0.0:
            raise DeceptionError("deceiver's payoff curve is constant")
        roots = [-c / r1d]
    else:
        disc = r1d * r1d - 4.0 * r2d * c
        if disc < 0.0:
            raise DeceptionError(f"reference {jref} not attainable "
                                 "(no real root)")
        sq = math.sqrt(disc)
        roots = [(-r1d + sq) / (2.0 * r2d), (-r1d - sq) / (2.0 * r2d)]

    sign = eps1 * r2d * sdso.q1 * sdso.q3
    vertex = -r1d / (2.0 * r2d) if r2d != 0.0 else None
    candidates = []
    for e in roots:
        if vertex is not None:
            # stable branch: sign * (e - vertex) < 0, allowing the root e=0
            v = sign * (e - vertex)
            if v > 0.0 and abs(e) > 1e-12:
                continue
        try:
            d = sdso.f_inverse(e)
        except DeceptionError:
            continue
        if not in_delta_set(sdso.game, sdso.ds, [d]):
            continue
        candidates.append(d)
    if not candidates:
        raise DeceptionError(f"reference {jref} not attainable on a "
                             "stable branch")
    dstar = min(candidates, key=abs)
    achieved = sdso.jcal(dec, sdso.f(dstar))
    if abs(achieved - jref) > tol * max(1.0, abs(jref)):
        raise DeceptionError("root refinement failed")
    return dstar


def benevolence(sdso: SdsoAnalysis, eps1: float, members,
                delta_set: IntervalSet) -> tuple[bool, IntervalSet]:
    """Benevolent-deception window for the deceiver and a member set.

    Returns (exists, window of deceiver cost references on which every
    member and the deceiver strictly improve while the integral policy
    remains stable).
    """
    dec = sdso.deceiver
    members = tuple(int(i) for i in members)
    group = (*members, dec)
    r1d = sdso.r1[dec]
    if r1d == 0.0 or any(np.sign(sdso.r1[i]) != np.sign(r1d)
                         for i in members):
        return False, IntervalSet.empty()
    if not eps1 * r1d * sdso.q1 * sdso.q3 < 0.0:
        return False, IntervalSet.empty()

    # largest interval adjacent to e=0 on which every member's cost drops
    side = -1.0 if r1d > 0.0 else 1.0
    limit = _INF
    for i in group:
        r2i, r1i = sdso.r2[i], sdso.r1[i]
        if r2i == 0.0:
            continue
        root = -r1i / r2i  # nonzero root of F_i(e) = r2 e^2 + r1 e
        if root * side > 0.0:
            limit = min(limit, abs(root))
    e1 = IntervalSet.open(-limit, 0.0) if side < 0 else \
        IntervalSet.open(0.0, limit)
    eset = e1.intersect(stable_e_branch(sdso, eps1, delta_set))
    if eset.is_empty:
        return False, IntervalSet.empty()
    return True, _jcal_image(sdso, dec, eset)


def immunity_check(game: QuadraticGame, i: int, deceivers,
                   rtol: float = 1e-9) -> bool:
    """True iff player i's reaction curve is unchanged by its deceivers.

    Tests (Q_i) row i == ((b_i)_i / (b_i)_k) (Q_i) row k for every
    deceiver k.  A zero (b_i)_k leaves the condition undefined and the
    player is reported not immune by this test.
    """
    Qi, bi = game.Q[i], game.b[i]
    own = Qi[i, :]
    scale = max(1.0, float(np.max(np.abs(own))), abs(bi[i]))
    for k in deceivers:
        if k == i:
            raise DeceptionError("self-deception is excluded")
        if bi[k] == 0.0:
            return False
        ratio = bi[i] / bi[k]
        if np.max(np.abs(own - ratio * Qi[k, :])) > rtol * scale:
            return False
    return True


@dataclass(frozen=True)
class RcClassification:
    kind: str  # "rotation" | "translation" | "unchanged"
    center: np.ndarray | None = None


def rc_classify(game: QuadraticGame, oblivious: int,
                deceiver: int, tol: float = 1e-9) -> RcClassification:
    """Classify the deception-induced change of a reaction curve.

    The oblivious player's perceived reaction hyperplane either rotates
    about the intersection with the deceiver's externality hyperplane,
    translates (parallel distinct hyperplanes), or is unchanged.
    """
    Qk, bk = game.Q[oblivious], game.b[oblivious]
    v1, c1 = Qk[oblivious, :], bk[oblivious]
    v2, c2 = Qk[deceiver, :], bk[deceiver]
    if np.max(np.abs(v1)) <= tol or np.max(np.abs(v2)) <= tol:
        raise DeceptionError("zero gradient row; reaction curve undefined")

    aug = np.vstack([np.append(v1, c1), np.append(v2, c2)])
    if np.linalg.matrix_rank(aug, tol=tol * max(1.0, np.max(np.abs(aug)))) == 1:
        return RcClassification("unchanged")

    A = np.vstack([v1, v2])
    rhs = -np.array([c1, c2])
    sol, res, rank, _ = np.linalg.lstsq(A, rhs, rcond=None)
    if np.max(np.abs(A @ sol - rhs)) <= tol * max(1.0, np.max(np.abs(rhs))):
        center = sol
        if game.N == 2:
            try:
                center = np.linalg.solve(Qk, -bk)
            except np.linalg.LinAlgError:
                pass
        return RcClassification("rotation", center=center)
    return RcClassification("translation")


@dataclass(frozen=True)
class MutualReport:
    """Evaluation of the three mutual-deception attainability conditions."""

    delta_star: np.ndarray
    stable: bool                       # (a) -k Q_delta Hurwitz
    dne: np.ndarray | None
    costs: np.ndarray | None
    refs_match: bool                   # (b) J_i(g(delta*)) = J_i^ref
    xi_jacobian: np.ndarray | None     # implicit-function Jacobian
    xi_jacobian_fd: np.ndarray | None  # central-difference cross-check
    jacobian_stable: bool              # (c) Jacobian Hurwitz

    @property
    def attainable(self) -> bool:
        return self.stable and self.refs_match and self.jacobian_stable


def xi_jacobian(game: QuadraticGame, ds: DeceptionStructure,
                delta) -> np.ndarray:
    """d/d delta of xi_i = eps_i J_i(g(delta)), via the implicit map."""
    delta = np.asarray(delta, dtype=float).reshape(-1)
    Qd, Bd = q_delta(game, ds, delta)
    g = np.linalg.solve(Qd, -Bd)
    dm = build_deceptive_matrices(game, ds)
    jac = np.empty((ds.n, ds.n))
    for m in range(ds.n):
        Qm = sum(dm.Qbar[(m, j)] for j in range(len(ds.targets[m])))
        Bm = sum(dm.Bbar[(m, j)] for j in range(len(ds.targets[m])))
        dg = -np.linalg.solve(Qd, Qm @ g + Bm)
        for ipos, dec in enumerate(ds.deceivers):
            grad = cost_gradient(game, dec, g)
            jac[ipos, m] = ds.eps[ipos] * grad @ dg
    return jac


def mutual_attainability(game: QuadraticGame, ds: DeceptionStructure,
                         jref, delta_star, rtol: float = 1e-2,
                         fd_step: float = 1e-6) -> MutualReport:
    """Check the attainability conditions at a candidate delta*.

    Applies to two deceivers mutually targeting each other; the
    xi-Jacobian is computed by central differences and cross-checked
    against the implicit-function formula.
    """
    if ds.n != 2 or not (ds.deceivers[0] in ds.targets[1]
                         and ds.deceivers[1] in ds.targets[0]):
        raise DeceptionError("mutual analysis requires two deceivers "
                             "targeting each other")
    delta_star = np.asarray(delta_star, dtype=float).reshape(-1)
    jref = np.asarray(jref, dtype=float).reshape(-1)
    Qd, Bd = q_delta(game, ds, delta_star)
    stable = is_hurwitz(-Qd)
    if not stable:
        return MutualReport(delta_star=delta_star, stable=False, dne=None,
                            costs=None, refs_match=False, xi_jacobian=None,
                            xi_jacobian_fd=None, jacobian_stable=False)

    g = np.linalg.solve(Qd, -Bd)
    costs = np.array([cost(game, dec, g) for dec in ds.deceivers])
    refs_match = bool(np.all(np.abs(costs - jref)
                             <= rtol * np.maximum(1.0, np.abs(jref))))

    jac = xi_jacobian(game, ds, delta_star)
    fd = np.empty_like(jac)
    for m in range(ds.n):
        dp, dm_ = delta_star.copy(), delta_star.copy()
        dp[m] += fd_step
        dm_[m] -= fd_step
        gp = dne(game, ds, dp, check=False)
        gm = dne(game, ds, dm_, check=False)
        for ipos, dec in enumerate(ds.deceivers):
            fd[ipos, m] = ds.eps[ipos] * (cost(game, dec, gp)
                                          - cost(game, dec, gm)) / (2 * fd_step)
    return MutualReport(delta_star=delta_star, stable=True, dne=g,
                        costs=costs, refs_match=refs_match,
                        xi_jacobian=jac, xi_jacobian_fd=fd,
                        jacobian_stable=is_hurwitz(jac, tol=0.0))


def perceived_cost(game, ds: DeceptionStructure, i: int, x, delta) -> float:
    """Cost perceived by an oblivious player under active deception.

    The arbitrary offset sigma_i is fixed to zero; it never affects
    pseudogradients.  For a non-oblivious player this is just J_i.
    """
    delta = np.asarray(delta, dtype=float).reshape(-1)
    if delta.shape != (ds.n,):
        raise DeceptionError(f"delta must have length {ds.n}")
    x = np.asarray(x, dtype=float).reshape(-1)
    base = cost(game, i, x)
    total = base
    for ipos, (dec, ts) in enumerate(zip(ds.deceivers, ds.targets)):
        if i not in ts:
            continue
        dk = delta[ipos]
        if isinstance(game, QuadraticGame):
            Qi, bi = game.Q[i], game.b[i]
            lin = Qi[dec, :] @ x - Qi[dec, i] * x[i] + bi[dec]
            integral = 0.5 * Qi[dec, i] * x[i] ** 2 + lin * x[i]
        else:
            integral = 0.5 * game.alpha[i, dec] * x[i] ** 2
        total += dk * integral
    return float(total)
