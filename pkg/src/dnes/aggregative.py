"""Deception analysis for strongly monotone aggregative games.

A single deceiver d injects the probes of its targets; the oblivious
players then follow the perturbed pseudogradient
gamma(x, delta) = G(x) + delta * Lambda x, where Lambda is diagonal
with entries alpha_{i,d} at the target indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deception import DeceptionError
from .games import AggregativeGame, GameError, cost, monotonicity_margins
from .intervals import IntervalSet

_INF = math.inf


@dataclass(frozen=True)
class AggDeception:
    """Single deceiver with a target set in an aggregative game."""

    deceiver: int
    targets: tuple[int, ...]

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        if not targets:
            raise DeceptionError("target set must be non-empty")
        if self.deceiver in targets:
            raise DeceptionError("self-deception is excluded")
        if len(set(targets)) != len(targets):
            raise DeceptionError("duplicate target")
        object.__setattr__(self, "targets", targets)

    def lam(self, game: AggregativeGame) -> np.ndarray:
        """Diagonal injection matrix Lambda."""
        if not 0 <= self.deceiver < game.N:
            raise DeceptionError("deceiver index out of range")
        L = np.zeros((game.N, game.N))
        for t in self.targets:
            if not 0 <= t < game.N:
                raise DeceptionError(f"target index {t} out of range")
            L[t, t] = game.alpha[t, self.deceiver]
        return L


def xi_matrix(game: AggregativeGame, x) -> np.ndarray:
    """Pseudogradient Jacobian: diagonal c_i''(x_i), off-diagonal alpha."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (game.N,):
        raise GameError(f"action vector must have length {game.N}")
    Xi = game.alpha.copy()
    for i in range(game.N):
        _, _, d2 = game.c[i]
        Xi[i, i] = d2(x[i])
    return Xi


def gamma(game: AggregativeGame, dec: AggDeception, x, delta: float):
    """Perturbed pseudogradient gamma(x, delta) = G(x) + delta Lambda x."""
    x = np.asarray(x, dtype=float).reshape(-1)
    out = np.empty(game.N)
    for i in range(game.N):
        _, d1, _ = game.c[i]
        out[i] = d1(x[i]) + game.alpha[i] @ x
    L = dec.lam(game)
    return out + delta * (L @ x)


def delta_bounds(game: AggregativeGame, dec: AggDeception) -> IntervalSet:
    """Conservative open delta interval preserving strong monotonicity.

    Requires K_i + delta * alpha_{i,d} > 0 for every target i, where K_i
    are the strong-monotonicity margins.  Targets with alpha_{i,d} = 0
    impose no constraint.
    """
    K = monotonicity_margins(game)
    if np.any(K <= 0.0):
        raise DeceptionError("game is not certified strongly monotone")
    lo, hi = -_INF, _INF
    for t in dec.targets:
        a = game.alpha[t, dec.deceiver]
        if a == 0.0:
            continue
        bound = -K[t] / a
        if a > 0.0:
            lo = max(lo, bound)
        else:
            hi = min(hi, bound)
    return IntervalSet.open(lo, hi)


def dne_agg(game: AggregativeGame, dec: AggDeception, delta: float,
            x0=None, tol: float = 1e-12, max_iter: int = 100) -> np.ndarray:
    """Deceptive equilibrium: the root of gamma(., delta) by damped Newton.

    Falls back to a 20-step homotopy in delta from 0 when the cold start
    does not converge.
    """
    x0 = np.zeros(game.N) if x0 is None else \
        np.asarray(x0, dtype=float).reshape(-1).copy()
    L = dec.lam(game)

    def solve_from(x: np.ndarray, d: float) -> np.ndarray | None:
        x = x.copy()
        r = gamma(game, dec, x, d)
        rn = np.linalg.norm(r)
        for _ in range(max_iter):
            if rn <= tol:
                return x
            J = xi_matrix(game, x) + d * L
            try:
                step = np.linalg.solve(J, -r)
            except np.linalg.LinAlgError:
                return None
            lam = 1.0
            for _ in range(30):
                xn = x + lam * step
                r2 = gamma(game, dec, xn, d)
                rn2 = np.linalg.norm(r2)
                if rn2 < rn or rn2 <= tol:
                    break
                lam *= 0.5
            else:
                return None
            x, r, rn = xn, r2, rn2
        return x if rn <= tol else None

    x = solve_from(x0, delta)
    if x is None:
        x = np.zeros(game.N)
        for d in np.linspace(0.0, delta, 21)[1:] if delta != 0.0 \
                else [0.0]:
            x = solve_from(x, d)
            if x is None:
                raise DeceptionError(
                    f"equilibrium continuation failed at delta={d}")
        if delta == 0.0:
            x = solve_from(np.zeros(game.N), 0.0)
            if x is None:
                raise DeceptionError("Newton failed at delta=0")
    return x


def g_prime(game: AggregativeGame, dec: AggDeception, delta: float,
            x_delta) -> np.ndarray:
    """Equilibrium sensitivity g'(delta) = -[Xi(x)+delta Lambda]^{-1} Lambda x."""
    x = np.asarray(x_delta, dtype=float).reshape(-1)
    L = dec.lam(game)
    J = xi_matrix(game, x) + delta * L
    try:
        return np.linalg.solve(J, -(L @ x))
    except np.linalg.LinAlgError as exc:
        raise DeceptionError("singular equilibrium Jacobian") from exc


def benefit_condition(game: AggregativeGame, dec: AggDeception,
                      eps_d: float) -> tuple[bool, float]:
    """Whether a small deception strictly benefits the deceiver.

    Returns (condition holds, beneficial delta direction sign).  The
    condition is eps_d * ((Xi*)^{-1} Lambda x*)_d * x_d* > 0 at the
    unperturbed equilibrium; the direction is the sign of delta for
    which the deceiver's cost initially decreases (0 when none).
    """
    d = dec.deceiver
    xstar = dne_agg(game, dec, 0.0)
    Xi = xi_matrix(game, xstar)
    L = dec.lam(game)
    try:
        v = np.linalg.solve(Xi, L @ xstar)
    except np.linalg.LinAlgError as exc:
        raise DeceptionError("singular Xi at the equilibrium") from exc
    value = eps_d * v[d] * xstar[d]
    if value <= 0.0:
        return False, 0.0
    # dJ_d/d(delta) at 0 has the sign of -g_d'(0) x_d* (cost decreases
    # when the deceiver's action moves away from its perceived optimum)
    gp = g_prime(game, dec, 0.0, xstar)
    slope = _cost_slope(game, dec, 0.0, xstar, gp)
    return True, -math.copysign(1.0, slope) if slope != 0.0 else 0.0


def _cost_slope(game: AggregativeGame, dec: AggDeception, delta: float,
                x, gp) -> float:
    """d/d(delta) of the deceiver's cost along the equilibrium path."""
    d = dec.deceiver
    _, d1, _ = game.c[d]
    grad = game.alpha[d] * x[d]
    grad[d] = d1(x[d]) + game.alpha[d] @ x
    return float(grad @ gp)


def monotone_tuning_hint(game: AggregativeGame, dec: AggDeception,
                         h: float = 1e-3) -> str:
    """Direction in which the deceiver's cost improves near delta = 0.

    Two-player games only.  Returns "increase", "decrease" or "none".
    """
    if game.N != 2:
        raise DeceptionError("tuning hint is defined for 2-player games")
    xstar = dne_agg(game, dec, 0.0)
    target = dec.targets[0]
    if abs(xstar[target]) <= 1e-12:
        return "none"
    j0 = cost(game, dec.deceiver, xstar)
    jp = cost(game, dec.deceiver, dne_agg(game, dec, h, x0=xstar))
    jm = cost(game, dec.deceiver, dne_agg(game, dec, -h, x0=xstar))
    if jp < j0 and jp <= jm:
        return "increase"
    if jm < j0:
        return "decrease"
    return "none"
