"""End-to-end acceptance checks.

Each test exercises one headline capability and prints a single
PASS/FAIL line so the suite doubles as a quick conformance report
(run with ``pytest -s tests/test_acceptance.py``).
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from dnes import (AggDeception, DeceptionStructure, FixedDelta, IntegralDelta,
                  PhaseLead, ProbeConfig, benefit_condition, benevolence,
                  build_jacobian, charpoly, cost, delta_bounds, delta_interval,
                  dne, dne_agg, epsilon_star, equal_marginal_matrix, g_prime,
                  immunity_check, in_delta_set, is_hurwitz, load_bundled,
                  monotone_tuning_hint, moving_average, mutual_attainability,
                  nash_equilibrium, omega_set, period_average, rc_classify,
                  sdso_analyze, simulate, solve_delta_for_ref)
from dnes.simulator import averaging_gap

DSTAR = (3 - math.sqrt(2)) / 2


def _report(name: str, ok: bool) -> None:
    print(f"\n{name}: {'PASS' if ok else 'FAIL'}")
    assert ok


def _ds(deceiver, target, eps=1.0, jref=0.0):
    return DeceptionStructure.single(deceiver, target, eps, jref)


def test_a1_closed_form_equilibria_and_reference_solve(duopoly):
    ok = True
    ds = _ds(1, 0)
    for d, expect in ((0.0, [130 / 3, 110 / 3]), (0.5, [50.0, 40.0]),
                      (0.7, [55.0, 42.5])):
        ok &= np.allclose(dne(duopoly, ds, [d]), expect, atol=1e-9)
    sdso = sdso_analyze(duopoly, 1, 0)
    t0 = time.perf_counter()
    for _ in range(200):
        dstar = solve_delta_for_ref(sdso, -1000.0)
    per_call = (time.perf_counter() - t0) / 200
    ok &= per_call < 1e-3
    ok &= abs(dstar - DSTAR) < 1e-5
    g = dne(duopoly, ds, [dstar])
    ok &= abs(cost(duopoly, 1, g) + 1000.0) < 1e-9
    ok &= np.allclose(g, [58.284271, 44.142136], atol=1e-5)
    _report("A1 closed-form equilibria and reference amplitude solve", ok)


def test_a2_stability_sets(duopoly, quad2, quad3, agg2):
    t0 = time.perf_counter()
    ok = True
    (lo, hi), = delta_interval(duopoly, _ds(1, 0)).intervals
    ok &= math.isinf(lo) and abs(hi - 1.5) < 1e-3
    (lo, hi), = delta_interval(quad2, _ds(1, 0)).intervals
    ok &= abs(lo + 7.0) < 1e-3 and abs(hi - 5.0 / 3.0) < 1e-3
    (lo, hi), = delta_interval(quad3, _ds(0, 2)).intervals
    ok &= abs(lo + 3.31515) < 1e-3 and math.isinf(hi)
    (lo, hi), = delta_bounds(agg2, AggDeception(1, (0,))).intervals
    ok &= abs(lo + 0.225) < 1e-9 and math.isinf(hi)
    ok &= time.perf_counter() - t0 < 1.0
    _report("A2 admissible deception parameter sets", ok)


def test_a3_displacement_and_attainable_references(quad2, quad3):
    ok = True
    sdso = sdso_analyze(quad2, 1, 0)
    ok &= np.allclose(sdso.Phi, [1.0, -0.5], atol=1e-12)
    scale = sdso.q1 / 4.0
    ok &= abs(sdso.q2 / scale + 1.5) < 1e-9
    ok &= abs(sdso.q3 / scale - 2.5) < 1e-9
    evert = -sdso.r1[1] / (2 * sdso.r2[1])
    ok &= abs(sdso.f_inverse(evert) - 5.0 / 9.0) < 1e-9
    ok &= abs(sdso.jcal(1, evert) - (0.5 - 16.0 / 3.0)) < 1e-9
    om = omega_set(sdso, 1.0, delta_interval(quad2, _ds(1, 0)))
    (lo, hi), = om.intervals
    ok &= abs(lo + 4.8333) < 1e-3 and abs(hi - 31.6479) < 5e-2
    om3 = omega_set(sdso_analyze(quad3, 0, 2), 1.0,
                    delta_interval(quad3, _ds(0, 2)))
    (lo, hi), = om3.intervals
    ok &= abs(lo - 1.04) < 5e-3 and math.isinf(hi)
    _report("A3 displacement algebra and attainable reference sets", ok)


def test_a4_benevolent_references(duopoly, quad3):
    ok = True
    sdso = sdso_analyze(duopoly, 1, 0)
    good, window = benevolence(sdso, 1.0, (0,),
                               delta_interval(duopoly, _ds(1, 0)))
    (lo, hi), = window.intervals
    ok &= good
    ok &= abs(lo + 8000.0 / 9.0) < 1.0 and abs(hi + 2000.0 / 9.0) < 1.0
    sdso3 = sdso_analyze(quad3, 0, 2)
    good, window = benevolence(sdso3, 1.0, (1, 2),
                               delta_interval(quad3, _ds(0, 2)))
    (lo, hi), = window.intervals
    ok &= good and abs(lo - 1.04118) < 1e-3 and abs(hi - 22.5206) < 1e-3
    ok &= abs(sdso3.Jstar[0] - 22.5206) < 1e-3
    dstar = solve_delta_for_ref(sdso3, 5.0)
    g = dne(quad3, _ds(0, 2), [dstar])
    for i in range(3):
        ok &= cost(quad3, i, g) < sdso3.Jstar[i]
    _report("A4 benevolent reference windows improve every player", ok)


def test_a5_immunity_and_reaction_curves(duopoly, quad2, quad2_immune,
                                         quad2_translation):
    ok = immunity_check(quad2_immune, 0, (1,))
    ds = _ds(1, 0)
    xstar = nash_equilibrium(quad2_immune)
    rng = np.random.default_rng(5)
    count = 0
    while count < 50:
        d = rng.uniform(-2.9, 5.0)
        if not in_delta_set(quad2_immune, ds, [d]):
            continue
        ok &= bool(np.allclose(dne(quad2_immune, ds, [d]), xstar, atol=1e-9))
        count += 1
    ok &= rc_classify(quad2_immune, 0, 1).kind == "unchanged"
    ok &= not immunity_check(quad2_translation, 0, (1,))
    ok &= rc_classify(quad2_translation, 0, 1).kind == "translation"
    rc = rc_classify(duopoly, 0, 1)
    ok &= rc.kind == "rotation" and np.allclose(rc.center, [30.0, 10.0])
    rc = rc_classify(quad2, 0, 1)
    ok &= rc.kind == "rotation"
    ok &= np.allclose(rc.center, [-9.0 / 7.0, -1.0 / 7.0], atol=1e-9)
    _report("A5 immunity certificates and reaction curve geometry", ok)


def test_a6_mutual_deception(duopoly):
    ds = DeceptionStructure((0, 1), ((1,), (0,)), eps=(1.0, 0.5),
                            jref=(-1200.0, -1800.0))
    rep = mutual_attainability(duopoly, ds, ds.jref, (0.459, 0.848))
    ok = rep.attainable and rep.stable and rep.jacobian_stable
    ok &= bool(np.allclose(rep.costs, [-1200.0, -1800.0], rtol=1e-2))
    printed = np.array([[-2007.3, 3129.3], [-1011.0, -3577.2]])
    ok &= bool(np.all(np.abs(rep.xi_jacobian - printed)
                      <= 0.01 * np.abs(printed)))
    _report("A6 mutual deception equilibrium attainability", ok)


def test_a7_full_oscillatory_run(duopoly):
    sc = load_bundled("duopoly")
    t0 = time.perf_counter()
    traj = simulate(sc.game, sc.probe, sc.ds, sc.policies, u0=sc.u0,
                    T=sc.t_final, samples_per_period=sc.samples_per_period)
    wall = time.perf_counter() - t0
    ok = not traj.unstable and wall < 60.0
    ubar = period_average(traj, traj.u)
    target = dne(sc.game, sc.ds, [DSTAR])
    ok &= bool(np.all(np.abs(ubar - target) < 0.5))
    jbar = period_average(traj, traj.J)
    ok &= abs(jbar[1] + 1000.0) < 20.0
    _report("A7 oscillatory seeking reaches the steered equilibrium", ok)


def test_a8_averaging_consistency(duopoly):
    ds = _ds(1, 0)
    probe = ProbeConfig(a=0.1, k=0.05, omega=400.0,
                        omega_bar=(Fraction(3), Fraction(2)))
    gaps = averaging_gap(duopoly, probe, ds, {1: FixedDelta(0.5)},
                         u0=[48.0, 38.0], T=15.0, samples_per_period=24)
    ok = gaps[0] > gaps[1] > gaps[2]
    # equilibrium offset shrinks linearly with the probe amplitude
    target = dne(duopoly, ds, [1.0])
    biases = []
    for a in (0.4, 0.2, 0.1):
        pr = ProbeConfig(a=a, k=0.03, omega=20000.0,
                         omega_bar=(Fraction(2), Fraction(1)),
                         phases=(0.0, 0.9))
        traj = simulate(duopoly, pr, ds, {1: FixedDelta(1.0)},
                        u0=target, T=40.0, samples_per_period=24)
        biases.append(np.linalg.norm(period_average(traj, traj.u) - target))
    for big, small in zip(biases, biases[1:]):
        ok &= 1.6 < big / small < 2.4
    _report("A8 averaging gap and amplitude scaling", ok)


def test_a9_phase_lead_reduces_overshoot(duopoly):
    sc = load_bundled("duopoly")
    runs = {}
    for label, pol in (("integral", IntegralDelta(0.001, -1000.0)),
                       ("lead", PhaseLead(0.001, -1000.0, 0.5, 3.9))):
        traj = simulate(sc.game, sc.probe, sc.ds, {1: pol}, u0=[40.0, 35.0],
                        T=200.0, samples_per_period=sc.samples_per_period)
        _, jma = moving_average(traj, traj.J)
        runs[label] = (period_average(traj, traj.u),
                       np.max(np.abs(jma[:, 1] + 1000.0)))
    ui, pi = runs["integral"]
    ul, pl = runs["lead"]
    ok = bool(np.all(np.abs(ui - ul) <= 0.01 * np.abs(ui)))
    ok &= pl < pi
    _report("A9 phase-lead tuning cuts the reference overshoot", ok)


def test_a10_aggregative_deception(agg2):
    dec = AggDeception(1, (0,))
    ok = True
    x0 = dne_agg(agg2, dec, 0.0)
    ok &= bool(np.allclose(x0, [0.3933499, -0.5150714], atol=1e-6))
    ok &= abs(cost(agg2, 1, dne_agg(agg2, dec, -0.22)) - 0.604837) < 1e-3
    good, direction = benefit_condition(agg2, dec, eps_d=1.0)
    ok &= good and direction == -1.0
    good, direction = benefit_condition(agg2, dec, eps_d=-1.0)
    ok &= (not good) and direction == 0.0
    ok &= monotone_tuning_hint(agg2, dec) == "decrease"
    h = 1e-6
    for d in (-0.2, 0.0, 0.3):
        x = dne_agg(agg2, dec, d)
        fd = (dne_agg(agg2, dec, d + h, x0=x)
              - dne_agg(agg2, dec, d - h, x0=x)) / (2 * h)
        ok &= bool(np.allclose(g_prime(agg2, dec, d, x), fd, rtol=1e-5,
                               atol=1e-8))
    x1 = [dne_agg(agg2, dec, d)[0]
          for d in np.linspace(-0.2249, 0.5, 100)]
    diffs = np.diff(x1)
    ok &= bool(np.all(diffs > 0) or np.all(diffs < 0))
    _report("A10 aggregative-game deception analysis", ok)


def test_a11_linearized_loop_certificates(duopoly):
    ok = True
    for S_d in (50.0, 100.0, 200.0):
        for p in (0.1, 0.2, 0.5):
            for jref in (100.0, 1000.0):
                for eps in (1e-4, 1e-3, 1e-2):
                    A, poly = equal_marginal_matrix(S_d, p, jref, eps)
                    scale = np.max(np.abs(poly))
                    ok &= bool(np.max(np.abs(charpoly(A) - poly))
                               <= 1e-10 * scale)
                    ok &= is_hurwitz(A, tol=0.0)
    jac = build_jacobian(duopoly, _ds(1, 0), DSTAR, eps=0.001)
    estar = epsilon_star(*jac.pq, *jac.pstar)
    ok &= abs(estar - 0.003535533906) < 1e-9
    for frac in (0.1, 0.5, 0.9):
        inner = build_jacobian(duopoly, _ds(1, 0), DSTAR, eps=frac * estar)
        ok &= inner.hurwitz
        ok &= bool(np.max(np.linalg.eigvals(inner.A).real) < 0)
    # the wrong integral sign destabilizes the loop
    ok &= not build_jacobian(duopoly, _ds(1, 0), DSTAR, eps=-0.001).hurwitz
    _report("A11 linearized closed-loop stability certificates", ok)


def test_a12_phase_error_defeats_injection(duopoly):
    ds = _ds(1, 0)
    sc = load_bundled("duopoly")
    pr = sc.probe
    # a quarter-period phase estimate error zeroes the averaged injection
    probe = ProbeConfig(a=pr.a, k=pr.k, omega=pr.omega,
                        omega_bar=pr.omega_bar, phases=pr.phases,
                        phase_estimates={(1, 0): math.pi / 2})
    traj = simulate(duopoly, probe, ds, {1: FixedDelta(DSTAR)},
                    u0=[40.0, 35.0], T=60.0,
                    samples_per_period=sc.samples_per_period)
    ubar = period_average(traj, traj.u)
    d_ne = np.linalg.norm(ubar - nash_equilibrium(duopoly))
    d_dne = np.linalg.norm(ubar - dne(duopoly, ds, [DSTAR]))
    ok = (not traj.unstable) and d_ne < d_dne / 5 and d_ne < 0.1
    _report("A12 probe phase error neutralizes the deception", ok)
