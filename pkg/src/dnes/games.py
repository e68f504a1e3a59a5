"""N-player games with scalar actions: costs, pseudogradients, equilibria.

Two cost families are supported: quadratic costs
``J_i(x) = 0.5 x'Q_i x + b_i'x + p_i`` and aggregative costs
``J_i(x) = c_i(x_i) + sum_k alpha_ik x_k x_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

_SYM_TOL = 1e-12


class GameError(ValueError):
    """Invalid game data or operation preconditions."""


@dataclass(frozen=True)
class QuadraticGame:
    """Quadratic game defined by per-player (Q_i, b_i, p_i)."""

    Q: tuple[np.ndarray, ...]
    b: tuple[np.ndarray, ...]
    p: tuple[float, ...]

    def __post_init__(self):
        Q = tuple(np.asarray(Qi, dtype=float) for Qi in self.Q)
        b = tuple(np.asarray(bi, dtype=float).reshape(-1) for bi in self.b)
        p = tuple(float(pi) for pi in self.p)
        N = len(Q)
        if not (len(b) == len(p) == N):
            raise GameError("Q, b, p must have one entry per player")
        for i, (Qi, bi) in enumerate(zip(Q, b)):
            if Qi.shape != (N, N) or bi.shape != (N,):
                raise GameError(f"player {i}: dimensions must equal N={N}")
            if not np.all(np.isfinite(Qi)) or not np.all(np.isfinite(bi)):
                raise GameError(f"player {i}: non-finite cost data")
            if np.max(np.abs(Qi - Qi.T)) > _SYM_TOL * max(1.0, np.max(np.abs(Qi))):
                raise GameError(f"player {i}: Q_{i} is not symmetric")
        for arr in (*Q, *b):
            arr.setflags(write=False)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "p", p)

    @property
    def N(self) -> int:
        return len(self.Q)

    def pseudogradient_matrices(self) -> "PseudogradientMatrices":
        Qcal = np.array([self.Q[i][i, :] for i in range(self.N)])
        Bcal = np.array([self.b[i][i] for i in range(self.N)])
        return PseudogradientMatrices(Qcal=Qcal, Bcal=Bcal)


# Value, first and second derivative of one c_i.
CostTriple = tuple[Callable[[float], float], Callable[[float], float],
                   Callable[[float], float]]


@dataclass(frozen=True)
class AggregativeGame:
    """Aggregative game: J_i(x) = c_i(x_i) + (sum_k alpha_ik x_k) x_i.

    Each ``c[i]`` is a (value, first, second derivative) callable triple.
    ``kappa[i]`` is the strong-convexity constant of c_i; the bound
    c_i'' >= kappa_i is spot-checked on a coarse grid at construction.
    """

    c: tuple[CostTriple, ...]
    kappa: tuple[float, ...]
    alpha: np.ndarray
    check_grid: Sequence[float] = field(default=(-3.0, -1.0, 0.0, 1.0, 3.0))

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        N = len(self.c)
        if alpha.shape != (N, N):
            raise GameError("alpha must be N x N")
        if np.any(np.diag(alpha) != 0.0):
            raise GameError("alpha diagonal must be exactly zero")
        kappa = tuple(float(k) for k in self.kappa)
        if len(kappa) != N:
            raise GameError("kappa must have one entry per player")
        if any(k <= 0 for k in kappa):
            raise GameError("strong-convexity constants must be positive")
        for i, (triple, ki) in enumerate(zip(self.c, kappa)):
            _, _, d2 = triple
            for xg in self.check_grid:
                if d2(xg) < ki - 1e-9:
                    raise GameError(
                        f"player {i}: c''({xg}) = {d2(xg)} below kappa={ki}")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "c", tuple(self.c))

    @property
    def N(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class PseudogradientMatrices:
    """G(x) = Qcal x + Bcal for a quadratic game."""

    Qcal: np.ndarray
    Bcal: np.ndarray


Game = QuadraticGame | AggregativeGame


def _check_x(game: Game, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (game.N,):
        raise GameError(f"action vector must have length {game.N}")
    return x


def pseudogradient(game: Game, x) -> np.ndarray:
    """Stacked own-action gradients [d J_i / d x_i]_i at x."""
    x = _check_x(game, x)
    if isinstance(game, QuadraticGame):
        pm = game.pseudogradient_matrices()
        return pm.Qcal @ x + pm.Bcal
    out = np.empty(game.N)
    for i in range(game.N):
        _, d1, _ = game.c[i]
        out[i] = d1(x[i]) + game.alpha[i] @ x
    return out


def cost(game: Game, i: int, x) -> float:
    """Cost J_i(x) of player i."""
    x = _check_x(game, x)
    if not 0 <= i < game.N:
        raise GameError(f"player index {i} out of range")
    if isinstance(game, QuadraticGame):
        return float(0.5 * x @ game.Q[i] @ x + game.b[i] @ x + game.p[i])
    val, _, _ = game.c[i]
    return float(val(x[i]) + (game.alpha[i] @ x) * x[i])


def cost_gradient(game: Game, i: int, x) -> np.ndarray:
    """Full gradient of J_i with respect to all actions."""
    x = _check_x(game, x)
    if isinstance(game, QuadraticGame):
        return game.Q[i] @ x + game.b[i]
    _, d1, _ = game.c[i]
    grad = game.alpha[i] * x[i]
    grad[i] = d1(x[i]) + game.alpha[i] @ x
    return grad


def nash_equilibrium(game: QuadraticGame) -> np.ndarray:
    """Unique linear NE x* = -Qcal^{-1} Bcal of a quadratic game."""
    pm = game.pseudogradient_matrices()
    try:
        xstar = np.linalg.solve(pm.Qcal, -pm.Bcal)
    except np.linalg.LinAlgError as exc:
        raise GameError("pseudogradient matrix is singular; "
                        "no unique linear NE") from exc
    if not np.all(np.isfinite(xstar)):
        raise GameError("pseudogradient matrix is singular; "
                        "no unique linear NE")
    return xstar


def monotonicity_margins(game: AggregativeGame) -> np.ndarray:
    """Strong-monotonicity margins K_j = kappa_j - sum |a_jk + a_kj|/2.

    The pseudogradient is strongly monotone when all margins are positive.
    """
    A = game.alpha
    K = np.array(game.kappa, dtype=float)
    sym = np.abs(A + A.T) / 2.0
    np.fill_diagonal(sym, 0.0)
    return K - sym.sum(axis=1)


def is_hurwitz(M, tol: float = 1e-9) -> bool:
    """True iff every eigenvalue of M has real part < -tol."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise GameError("matrix must be square")
    if not np.all(np.isfinite(M)):
        raise GameError("matrix has non-finite entries")
    return bool(np.max(np.linalg.eigvals(M).real) < -tol)
