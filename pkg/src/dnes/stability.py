"""One-time-scale linear stability analysis of deceptive duopolies.

Analyzes the 3-state interconnection of the averaged two-player flow
with a single integral deception policy: the Jacobian A(x*, delta*),
its characteristic polynomial P_A(s) = s P_Q(s) + eps p(s), the cubic
Routh-Hurwitz test, an eps* gain bound, and the equal-marginal-cost
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deception import (DeceptionError, DeceptionStructure,
                        build_deceptive_matrices, dne, q_delta)
from .games import QuadraticGame, is_hurwitz


def charpoly(M) -> np.ndarray:
    """Monic characteristic polynomial of M via Faddeev-LeVerrier.

    Returns coefficients [1, c_{n-1}, ..., c_0] of det(sI - M); the
    recurrence is exact in rational arithmetic and stable for the small
    dense matrices used here.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.ndim != 2 or M.shape != (n, n):
        raise DeceptionError("matrix must be square")
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    B = np.zeros_like(M)
    for k in range(1, n + 1):
        B = M @ B + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(M @ B) / k
    return coeffs


@dataclass(frozen=True)
class InterconnectionJacobian:
    """A(x*, delta*) with its polynomial decomposition P_A = sP_Q + eps p."""

    A: np.ndarray
    eps: float
    charpoly: np.ndarray          # [1, c2, c1, c0]
    pq: tuple[float, float]       # (a1, a0) of P_Q(s) = s^2 + a1 s + a0
    pstar: tuple[float, float]    # (a1*, a0*) of p(s) = a1* s + a0*

    @property
    def hurwitz(self) -> bool:
        return is_hurwitz(self.A, tol=0.0)


def _assemble(game: QuadraticGame, ds: DeceptionStructure, delta_star: float,
              eps: float, bottom: np.ndarray) -> InterconnectionJacobian:
    Qd, _ = q_delta(game, ds, [delta_star])
    dm = build_deceptive_matrices(game, ds)
    xstar = dne(game, ds, [delta_star])
    Qb = dm.Qbar[(0, 0)]
    Bb = dm.Bbar[(0, 0)]
    A = np.zeros((3, 3))
    A[:2, :2] = -Qd
    A[:2, 2] = -(Qb @ xstar + Bb)[:2]
    A[2, :2] = bottom
    pa = charpoly(A)
    pq = charpoly(-Qd)
    a1, a0 = float(pq[1]), float(pq[2])

    # extract p(s) by sampling P_A at two eps values and solving the
    # linear dependence P_A = s P_Q + eps p
    def pa_at(e: float) -> np.ndarray:
        A2 = A.copy()
        A2[2, :2] = bottom * (e / eps) if eps != 0.0 else 0.0
        return charpoly(A2)

    if eps == 0.0:
        a1s = a0s = 0.0
    else:
        e1, e2 = eps, 0.5 * eps
        d = (pa_at(e1) - pa_at(e2)) / (e1 - e2)
        a1s, a0s = float(d[2]), float(d[3])
        # cross-check the structural identity coefficient-wise
        recon = np.array([1.0, a1, a0 + eps * a1s, eps * a0s])
        scale = max(1.0, float(np.max(np.abs(pa))))
        if np.max(np.abs(recon - pa)) > 1e-9 * scale:
            raise DeceptionError("polynomial decomposition failed")
    return InterconnectionJacobian(A=A, eps=eps, charpoly=pa,
                                   pq=(a1, a0), pstar=(a1s, a0s))


def build_jacobian(game: QuadraticGame, ds: DeceptionStructure,
                   delta_star: float, eps: float,
                   variant: str = "payoff") -> InterconnectionJacobian:
    """Jacobian of the averaged flow coupled with one integral policy.

    ``variant`` selects the integral target: "payoff" drives the
    deceiver's cost to a reference (bottom row eps * grad J_dec(x*)),
    "price" drives the deceiver's own action to a reference (bottom row
    with a single eps entry at the deceiver's column).
    """
    if game.N != 2 or ds.n != 1:
        raise DeceptionError("analysis covers two players and one deceiver")
    dec = ds.deceivers[0]
    Qd, _ = q_delta(game, ds, [delta_star])
    if not is_hurwitz(-Qd):
        raise DeceptionError(f"delta*={delta_star} outside the stability set")
    xstar = dne(game, ds, [delta_star])
    if variant == "payoff":
        bottom = eps * (game.Q[dec] @ xstar + game.b[dec])
    elif variant == "price":
        bottom = np.zeros(2)
        bottom[dec] = eps
    else:
        raise DeceptionError(f"unknown variant {variant!r}")
    return _assemble(game, ds, delta_star, eps, bottom)


def routh_hurwitz_3(c2: float, c1: float, c0: float) -> bool:
    """Stability of the monic cubic s^3 + c2 s^2 + c1 s + c0."""
    return c2 > 0.0 and c0 > 0.0 and c2 * c1 > c0


def epsilon_star(a1: float, a0: float, a1s: float,
                 a0s: float) -> float:
    """Integral-gain bound: A is Hurwitz for 0 < |eps| < eps*.

    Requires a1, a0 > 0 (the averaged flow is stable at delta*); the
    sign of eps must make eps * a0s > 0.  Returns +inf when neither
    term constrains the gain.
    """
    if not (a1 > 0.0 and a0 > 0.0):
        raise DeceptionError("averaged flow must be stable at delta*")
    t1 = math.inf if a1s == 0.0 else a0 / abs(a1s)
    den = a1 * a1s - a0s
    t2 = math.inf if den == 0.0 else a1 * a0 / abs(den)
    return min(t1, t2)


def equal_marginal_matrix(S_d: float, p: float, j2ref: float,
                          eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form interconnection for the equal-marginal-cost duopoly.

    ``j2ref`` is the deceiver's target profit (> 0).  Returns the 3x3
    matrix and its characteristic polynomial coefficients; the matrix
    is Hurwitz for every eps > 0.
    """
    if j2ref <= 0.0:
        raise DeceptionError("target profit must be positive")
    if p <= 0.0 or S_d <= 0.0:
        raise DeceptionError("demand parameters must be positive")
    root_jp = math.sqrt(j2ref * p)
    root_jop = math.sqrt(j2ref / p)
    A = np.array([
        [-1.0 / (2 * p) - S_d / (2 * root_jp), 1.0 / p, 2 * root_jop],
        [1.0 / p, -2.0 / p, 0.0],
        [-eps * root_jop, 0.0, 0.0],
    ])
    poly = np.array([
        1.0,
        5.0 / (2 * p) + S_d / (2 * root_jp),
        2 * eps * j2ref / p + S_d / (p * root_jp),
        4 * eps * j2ref / p ** 2,
    ])
    return A, poly
