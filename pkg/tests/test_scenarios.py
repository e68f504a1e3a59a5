import numpy as np
import pytest

from dnes import (AggregativeGame, FixedDelta, IntegralDelta, QuadraticGame,
                  ScenarioError, bundled_names, load_bundled, parse_scenario,
                  serialize_scenario)
from dnes.cli import main

MINIMAL = """\
[game]
type = quadratic
n = 2
q1 = 10 -5; -5 0
b1 = -250 150
p1 = 3000
q2 = 0 -5; -5 10
b2 = 150 -150
"""

WITH_DECEPTION = MINIMAL + """\
[deception]
deceivers = 2
targets2 = 1
eps = 1
jref = -1000
"""


def test_bundled_catalog_complete():
    names = bundled_names()
    for expect in ("duopoly", "duopoly-mutual", "duopoly-phase-lead",
                   "duopoly-price-ref", "quad2", "quad2-immune", "quad3",
                   "agg2"):
        assert expect in names


@pytest.mark.parametrize("name", ["duopoly", "duopoly-mutual",
                                  "duopoly-phase-lead", "duopoly-price-ref",
                                  "quad2", "quad2-immune", "quad3", "agg2"])
def test_bundled_parses_and_round_trips(name):
    sc = load_bundled(name)
    assert sc.name == name
    text = serialize_scenario(sc)
    again = serialize_scenario(parse_scenario(text))
    assert text == again


def test_minimal_scenario():
    sc = parse_scenario(MINIMAL)
    assert isinstance(sc.game, QuadraticGame)
    assert sc.game.N == 2
    assert sc.ds is None and sc.probe is None
    # defaults
    assert sc.t_final == 10.0
    assert sc.samples_per_period == 40
    assert sc.analysis["delta_slice"] is True


def test_deception_section_is_one_based():
    sc = parse_scenario(WITH_DECEPTION)
    assert sc.ds.deceivers == (1,)
    assert sc.ds.targets == ((0,),)
    assert sc.ds.jref == (-1000.0,)


def test_empty_file_names_required_section():
    with pytest.raises(ScenarioError, match=r"\[game\]"):
        parse_scenario("")


def test_unknown_section_rejected():
    with pytest.raises(ScenarioError, match="unknown section"):
        parse_scenario(MINIMAL + "[bogus]\nx = 1\n")


def test_unknown_key_rejected():
    with pytest.raises(ScenarioError, match="unknown key"):
        parse_scenario(MINIMAL + "[sim]\nwrong = 1\n")


def test_duplicate_key_rejected():
    bad = MINIMAL.replace("p1 = 3000", "p1 = 3000\np1 = 4000")
    with pytest.raises(ScenarioError, match="duplicate key"):
        parse_scenario(bad)


def test_key_outside_section_rejected():
    with pytest.raises(ScenarioError, match="outside any section"):
        parse_scenario("name = foo\n" + MINIMAL)


def test_policy_for_non_deceiver_rejected():
    bad = WITH_DECEPTION + "[policy]\nplayer1 = fixed delta=0.5\n"
    with pytest.raises(ScenarioError, match="not a deceiver"):
        parse_scenario(bad)


def test_deceiver_needs_policy_when_probed():
    bad = WITH_DECEPTION + """\
[probe]
a = 0.05
k = 0.03
omega = 1
omega_bar = 31511/4 14873/2
"""
    with pytest.raises(ScenarioError, match="needs a delta policy"):
        parse_scenario(bad)
    sc = parse_scenario(bad + "[policy]\nplayer2 = fixed delta=0.5\n")
    assert isinstance(sc.policies[1], FixedDelta)
    assert sc.probe.common_period() == pytest.approx(8 * np.pi)


def test_bad_rational_ratio_rejected():
    bad = WITH_DECEPTION + """\
[probe]
a = 0.05
k = 0.03
omega = 1
omega_bar = 3/0 2
[policy]
player2 = fixed delta=0.5
"""
    with pytest.raises(ScenarioError, match="bad rational"):
        parse_scenario(bad)


def test_u0_length_checked():
    with pytest.raises(ScenarioError, match="one entry per player"):
        parse_scenario(MINIMAL + "[sim]\nu0 = 1 2 3\n")


def test_policy_parameter_validation():
    with pytest.raises(ScenarioError, match="unknown policy"):
        parse_scenario(WITH_DECEPTION + "[policy]\nplayer2 = magic\n")
    with pytest.raises(ScenarioError, match="needs"):
        parse_scenario(WITH_DECEPTION + "[policy]\nplayer2 = fixed\n")
    with pytest.raises(ScenarioError, match="needs"):
        parse_scenario(WITH_DECEPTION
                       + "[policy]\nplayer2 = integral rate=0.1\n")
    sc = parse_scenario(WITH_DECEPTION
                        + "[policy]\nplayer2 = integral rate=0.1 jref=-5\n")
    pol = sc.policies[1]
    assert isinstance(pol, IntegralDelta)
    assert pol.rate == 0.1 and pol.jref == -5.0


def test_aggregative_catalog():
    sc = load_bundled("agg2")
    game = sc.game
    assert isinstance(game, AggregativeGame)
    # poly 0 0 1 0 1 is x^2 + x^4; expsquare is exp(x) + x^2
    assert game.c[0][0](2.0) == pytest.approx(2.0 ** 2 + 2.0 ** 4)
    assert game.c[1][0](0.0) == pytest.approx(1.0)
    assert game.c[1][1](0.0) == pytest.approx(1.0)


def test_unknown_cost_catalog_entry_rejected():
    bad = """\
[game]
type = aggregative
n = 2
c1 = mystery
kappa1 = 1
c2 = expsquare
kappa2 = 1
alpha = 0 1; 1 0
"""
    with pytest.raises(ScenarioError, match="unknown cost"):
        parse_scenario(bad)


def test_sweep_validation():
    with pytest.raises(ScenarioError, match="missing"):
        parse_scenario(WITH_DECEPTION + "[sweep]\nparameter = delta\n")
    with pytest.raises(ScenarioError, match="only 'delta'"):
        parse_scenario(WITH_DECEPTION
                       + "[sweep]\nparameter = k\nstart = 0\nstop = 1\n"
                         "step = 0.5\n")
    sc = parse_scenario(WITH_DECEPTION
                        + "[sweep]\nparameter = delta\nstart = 0\n"
                          "stop = 1\nstep = 0.5\n")
    assert sc.sweep["mode"] == "dne"


def test_cli_analyze_bundled(tmp_path, capsys):
    code = main(["analyze", "duopoly", "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "delta_set_2 = (-inf, 1.5)" in out
    assert (tmp_path / "duopoly-report.txt").read_text() == out


def test_cli_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text(MINIMAL + "[sim]\nwrong = 1\n")
    assert main(["analyze", str(bad), "--out", str(tmp_path)]) == 2


def test_cli_missing_probe_exit_code(tmp_path):
    f = tmp_path / "noprobe.scn"
    f.write_text(WITH_DECEPTION)
    assert main(["simulate", str(f), "--out", str(tmp_path)]) == 3


def test_cli_instability_exit_code(tmp_path, capsys):
    unstable = WITH_DECEPTION + """\
[probe]
a = 0.5
k = 1
omega = 50
omega_bar = 3 2
[policy]
player2 = fixed delta=5
[sim]
t_final = 30
u0 = 40 35
"""
    f = tmp_path / "unstable.scn"
    f.write_text(unstable)
    code = main(["simulate", str(f), "--out", str(tmp_path)])
    assert code == 4
    assert "unstable = true" in capsys.readouterr().out


def test_cli_set_overrides(tmp_path, capsys):
    code = main(["analyze", "duopoly", "--out", str(tmp_path),
                 "--set", "analysis.solve_ref=-500"])
    assert code == 0
    out = capsys.readouterr().out
    assert "delta_star" in out
    # new key inserted into a section that lacked it
    code = main(["analyze", "quad2", "--out", str(tmp_path),
                 "--set", "analysis.benevolence=2"])
    assert code == 0
    assert "benevolent" in capsys.readouterr().out
