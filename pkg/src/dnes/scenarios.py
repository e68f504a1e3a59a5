"""Scenario files: line-oriented ``key = value`` sections.

A scenario bundles a game, an optional deception structure, probe and
policy settings, simulation horizon and analysis requests.  Player
indices in scenario files are 1-based; unknown keys are rejected so
typos fail loudly instead of being silently ignored.

Aggregative marginal-cost functions come from a small named catalog:
``poly c0 c1 c2 ...`` is a polynomial in the player's own action and
``expsquare`` is exp(x) + x^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from .aggregative import AggDeception
from .deception import DeceptionStructure
from .games import AggregativeGame, Game, GameError, QuadraticGame
from .simulator import (FixedDelta, IntegralDelta, Oblivious, PhaseLead,
                        PriceRef, Policy, ProbeConfig)


class ScenarioError(ValueError):
    """Malformed scenario text or inconsistent configuration."""


_SECTIONS = ("meta", "game", "deception", "probe", "policy", "sim",
             "analysis", "sweep")

_FIXED_KEYS = {
    "meta": {"name"},
    "probe": {"a", "k", "omega", "omega_bar", "phases"},
    "sim": {"t_final", "u0", "delta0", "samples_per_period"},
    "analysis": {"delta_slice", "delta_box", "omega_set", "eps1",
                 "benevolence", "immunity", "rc", "mutual_delta",
                 "linearization_eps", "linearization_variant",
                 "solve_ref"},
    "sweep": {"parameter", "start", "stop", "step", "mode"},
}


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split()]


def _matrix(text: str) -> np.ndarray:
    return np.array([_floats(row) for row in text.split(";")])


def _bool(text: str) -> bool:
    if text.lower() in ("true", "1", "yes"):
        return True
    if text.lower() in ("false", "0", "no"):
        return False
    raise ScenarioError(f"expected a boolean, got {text!r}")


_CATALOG = {}


def _poly_triple(coeffs):
    c = np.array(coeffs, dtype=float)
    d1 = np.polynomial.polynomial.polyder(c)
    d2 = np.polynomial.polynomial.polyder(c, 2)
    pv = np.polynomial.polynomial.polyval
    return (lambda x: float(pv(x, c)),
            lambda x: float(pv(x, d1)),
            lambda x: float(pv(x, d2)))


def _cost_from_catalog(spec: str):
    parts = spec.split()
    kind = parts[0]
    if kind == "poly":
        if len(parts) < 2:
            raise ScenarioError("poly needs at least one coefficient")
        return _poly_triple([float(v) for v in parts[1:]])
    if kind == "expsquare":
        if len(parts) != 1:
            raise ScenarioError("expsquare takes no parameters")
        return (lambda x: math.exp(x) + x * x,
                lambda x: math.exp(x) + 2 * x,
                lambda x: math.exp(x) + 2.0)
    raise ScenarioError(f"unknown cost function {kind!r}")


def _policy_from_text(text: str) -> Policy:
    parts = text.split()
    kind = parts[0]
    kv = {}
    for chunk in parts[1:]:
        if "=" not in chunk:
            raise ScenarioError(f"bad policy parameter {chunk!r}")
        k, _, v = chunk.partition("=")
        kv[k] = float(v)

    def take(*names):
        missing = [n for n in names if n not in kv]
        extra = [n for n in kv if n not in names]
        if missing or extra:
            raise ScenarioError(
                f"policy {kind!r}: needs {names}, got {sorted(kv)}")
        return [kv[n] for n in names]

    if kind == "oblivious":
        take()
        return Oblivious()
    if kind == "fixed":
        return FixedDelta(*take("delta"))
    if kind == "integral":
        return IntegralDelta(*take("rate", "jref"))
    if kind == "phaselead":
        return PhaseLead(*take("rate", "jref", "g1", "g2"))
    if kind == "priceref":
        return PriceRef(*take("rate", "uref"))
    raise ScenarioError(f"unknown policy kind {kind!r}")


def _policy_to_text(pol: Policy) -> str:
    if isinstance(pol, Oblivious):
        return "oblivious"
    if isinstance(pol, FixedDelta):
        return f"fixed delta={pol.delta:.10g}"
    if isinstance(pol, IntegralDelta):
        return f"integral rate={pol.rate:.10g} jref={pol.jref:.10g}"
    if isinstance(pol, PhaseLead):
        return (f"phaselead rate={pol.rate:.10g} jref={pol.jref:.10g} "
                f"g1={pol.g1:.10g} g2={pol.g2:.10g}")
    if isinstance(pol, PriceRef):
        return f"priceref rate={pol.rate:.10g} uref={pol.uref:.10g}"
    raise ScenarioError(f"unknown policy {pol!r}")


@dataclass
class Scenario:
    """Validated scenario: game + deception + probe + policies + requests."""

    name: str
    game: Game
    ds: DeceptionStructure | None = None
    agg_dec: AggDeception | None = None
    probe: ProbeConfig | None = None
    policies: dict[int, Policy] = field(default_factory=dict)
    t_final: float = 10.0
    u0: np.ndarray | None = None
    delta0: np.ndarray | None = None
    samples_per_period: int = 40
    analysis: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)


def _split_sections(text: str) -> dict[str, dict[str, str]]:
    sections: dict[str, dict[str, str]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in _SECTIONS:
                raise ScenarioError(f"line {lineno}: unknown section "
                                    f"[{current}]")
            sections.setdefault(current, {})
            continue
        if current is None:
            raise ScenarioError(f"line {lineno}: key outside any section")
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in sections[current]:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        sections[current][key] = value
    return sections


def _check_keys(section: str, data: dict[str, str], allowed) -> None:
    for key in data:
        if key not in allowed:
            raise ScenarioError(f"[{section}]: unknown key {key!r}")


def _parse_game(data: dict[str, str]) -> Game:
    gtype = data.get("type")
    if gtype is None:
        raise ScenarioError("[game]: missing 'type'")
    if "n" not in data:
        raise ScenarioError("[game]: missing 'n'")
    n = int(data["n"])
    if gtype == "quadratic":
        allowed = {"type", "n"}
        allowed |= {f"q{i}" for i in range(1, n + 1)}
        allowed |= {f"b{i}" for i in range(1, n + 1)}
        allowed |= {f"p{i}" for i in range(1, n + 1)}
        _check_keys("game", data, allowed)
        Q, b, p = [], [], []
        for i in range(1, n + 1):
            if f"q{i}" not in data or f"b{i}" not in data:
                raise ScenarioError(f"[game]: missing q{i} or b{i}")
            Q.append(_matrix(data[f"q{i}"]))
            b.append(np.array(_floats(data[f"b{i}"])))
            p.append(float(data.get(f"p{i}", "0")))
        try:
            return QuadraticGame(tuple(Q), tuple(b), tuple(p))
        except GameError as exc:
            raise ScenarioError(f"[game]: {exc}") from exc
    if gtype == "aggregative":
        allowed = {"type", "n", "alpha"}
        allowed |= {f"c{i}" for i in range(1, n + 1)}
        allowed |= {f"kappa{i}" for i in range(1, n + 1)}
        _check_keys("game", data, allowed)
        if "alpha" not in data:
            raise ScenarioError("[game]: missing 'alpha'")
        c, kappa = [], []
        specs = []
        for i in range(1, n + 1):
            if f"c{i}" not in data or f"kappa{i}" not in data:
                raise ScenarioError(f"[game]: missing c{i} or kappa{i}")
            specs.append(data[f"c{i}"])
            c.append(_cost_from_catalog(data[f"c{i}"]))
            kappa.append(float(data[f"kappa{i}"]))
        try:
            game = AggregativeGame(tuple(c), tuple(kappa),
                                   _matrix(data["alpha"]))
        except GameError as exc:
            raise ScenarioError(f"[game]: {exc}") from exc
        game.__dict__["_catalog_specs"] = tuple(specs)
        return game
    raise ScenarioError(f"[game]: unknown type {gtype!r}")


def _parse_deception(data: dict[str, str], game: Game):
    deceivers = [int(v) for v in data.get("deceivers", "").split()]
    if not deceivers:
        raise ScenarioError("[deception]: missing 'deceivers'")
    allowed = {"deceivers"}
    allowed |= {f"targets{i}" for i in deceivers}
    allowed |= {"eps", "jref"}
    _check_keys("deception", data, allowed)
    targets = []
    for i in deceivers:
        key = f"targets{i}"
        if key not in data:
            raise ScenarioError(f"[deception]: missing {key}")
        targets.append(tuple(int(v) - 1 for v in data[key].split()))
    eps = tuple(_floats(data["eps"])) if "eps" in data else ()
    jref = tuple(_floats(data["jref"])) if "jref" in data else ()
    ds = DeceptionStructure(tuple(i - 1 for i in deceivers),
                            tuple(targets), eps, jref)
    agg = None
    if isinstance(game, AggregativeGame):
        if ds.n != 1:
            raise ScenarioError("[deception]: aggregative games support "
                                "a single deceiver")
        agg = AggDeception(ds.deceivers[0], ds.targets[0])
    else:
        ds.validate_for(game)
    return ds, agg


def _parse_probe(data: dict[str, str], ds, n: int) -> ProbeConfig:
    allowed = set(_FIXED_KEYS["probe"])
    if ds is not None:
        for i, ts in zip(ds.deceivers, ds.targets):
            for t in ts:
                allowed.add(f"phase_est{i + 1}_{t + 1}")
    _check_keys("probe", data, allowed)
    for key in ("a", "k", "omega", "omega_bar"):
        if key not in data:
            raise ScenarioError(f"[probe]: missing {key!r}")
    try:
        omega_bar = tuple(Fraction(v) for v in data["omega_bar"].split())
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"[probe]: bad rational ratio: {exc}") from exc
    phases = tuple(_floats(data["phases"])) if "phases" in data else ()
    estimates = {}
    for key, value in data.items():
        if key.startswith("phase_est"):
            i_s, j_s = key[len("phase_est"):].split("_")
            estimates[(int(i_s) - 1, int(j_s) - 1)] = float(value)
    try:
        probe = ProbeConfig(a=float(data["a"]), k=float(data["k"]),
                            omega=float(data["omega"]),
                            omega_bar=omega_bar, phases=phases,
                            phase_estimates=estimates)
    except GameError as exc:
        raise ScenarioError(f"[probe]: {exc}") from exc
    if probe.N != n:
        raise ScenarioError("[probe]: omega_bar must list one ratio "
                            "per player")
    return probe


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario text."""
    sections = _split_sections(text)
    if "game" not in sections:
        raise ScenarioError("missing required section [game] "
                            f"(required sections: [game]; optional: "
                            f"{', '.join(s for s in _SECTIONS if s != 'game')})")
    game = _parse_game(sections["game"])
    n = game.N

    meta = sections.get("meta", {})
    _check_keys("meta", meta, _FIXED_KEYS["meta"])
    name = meta.get("name", "scenario")

    ds = agg = None
    if "deception" in sections:
        ds, agg = _parse_deception(sections["deception"], game)

    probe = None
    if "probe" in sections:
        probe = _parse_probe(sections["probe"], ds, n)

    policies: dict[int, Policy] = {}
    if "policy" in sections:
        allowed = {f"player{i}" for i in range(1, n + 1)}
        _check_keys("policy", sections["policy"], allowed)
        for key, value in sections["policy"].items():
            idx = int(key[len("player"):]) - 1
            pol = _policy_from_text(value)
            if not isinstance(pol, Oblivious):
                if ds is None or idx not in ds.deceivers:
                    raise ScenarioError(f"[policy]: player {idx + 1} has a "
                                        "delta policy but is not a deceiver")
            policies[idx] = pol

    if ds is not None:
        for i in ds.deceivers:
            pol = policies.get(i)
            if probe is not None and (pol is None
                                      or isinstance(pol, Oblivious)):
                raise ScenarioError(f"[policy]: deceiver {i + 1} needs a "
                                    "delta policy to simulate")

    sc = Scenario(name=name, game=game, ds=ds, agg_dec=agg, probe=probe,
                  policies=policies)

    sim = sections.get("sim", {})
    _check_keys("sim", sim, _FIXED_KEYS["sim"])
    sc.t_final = float(sim.get("t_final", "10"))
    if "u0" in sim:
        sc.u0 = np.array(_floats(sim["u0"]))
        if sc.u0.shape != (n,):
            raise ScenarioError("[sim]: u0 must have one entry per player")
    if "delta0" in sim:
        sc.delta0 = np.array(_floats(sim["delta0"]))
    sc.samples_per_period = int(sim.get("samples_per_period", "40"))

    ana = sections.get("analysis", {})
    _check_keys("analysis", ana, _FIXED_KEYS["analysis"])
    sc.analysis = {
        "delta_slice": _bool(ana["delta_slice"])
        if "delta_slice" in ana else True,
        "delta_box": tuple(_floats(ana["delta_box"]))
        if "delta_box" in ana else (-100.0, 100.0),
        "omega_set": _bool(ana["omega_set"])
        if "omega_set" in ana else False,
        "eps1": float(ana.get("eps1", "1")),
        "benevolence": tuple(int(v) - 1 for v in ana["benevolence"].split())
        if "benevolence" in ana else None,
        "immunity": _bool(ana["immunity"]) if "immunity" in ana else False,
        "rc": _bool(ana["rc"]) if "rc" in ana else False,
        "mutual_delta": tuple(_floats(ana["mutual_delta"]))
        if "mutual_delta" in ana else None,
        "linearization_eps": float(ana["linearization_eps"])
        if "linearization_eps" in ana else None,
        "linearization_variant": ana.get("linearization_variant", "payoff"),
        "solve_ref": float(ana["solve_ref"])
        if "solve_ref" in ana else None,
    }

    sw = sections.get("sweep", {})
    _check_keys("sweep", sw, _FIXED_KEYS["sweep"])
    if sw:
        for key in ("parameter", "start", "stop", "step"):
            if key not in sw:
                raise ScenarioError(f"[sweep]: missing {key!r}")
        if sw["parameter"] != "delta":
            raise ScenarioError("[sweep]: only 'delta' sweeps are supported")
        mode = sw.get("mode", "dne")
        if mode not in ("dne", "simulate"):
            raise ScenarioError(f"[sweep]: unknown mode {mode!r}")
        sc.sweep = {"parameter": sw["parameter"], "start": float(sw["start"]),
                    "stop": float(sw["stop"]), "step": float(sw["step"]),
                    "mode": mode}
    return sc


def serialize_scenario(sc: Scenario) -> str:
    """Canonical text form; parse(serialize(parse(t))) == parse(t)."""
    out = [f"[meta]", f"name = {sc.name}", "", "[game]"]
    g = sc.game
    if isinstance(g, QuadraticGame):
        out.append("type = quadratic")
        out.append(f"n = {g.N}")
        for i in range(g.N):
            rows = "; ".join(" ".join(format(v, ".17g") for v in row)
                             for row in g.Q[i])
            out.append(f"q{i + 1} = {rows}")
            out.append(f"b{i + 1} = "
                       + " ".join(format(v, ".17g") for v in g.b[i]))
            out.append(f"p{i + 1} = {format(g.p[i], '.17g')}")
    else:
        specs = g.__dict__.get("_catalog_specs")
        if specs is None:
            raise ScenarioError("aggregative game lacks catalog names; "
                                "cannot serialize")
        out.append("type = aggregative")
        out.append(f"n = {g.N}")
        for i in range(g.N):
            out.append(f"c{i + 1} = {specs[i]}")
            out.append(f"kappa{i + 1} = {format(g.kappa[i], '.17g')}")
        rows = "; ".join(" ".join(format(v, ".17g") for v in row)
                         for row in g.alpha)
        out.append(f"alpha = {rows}")
    if sc.ds is not None:
        out += ["", "[deception]"]
        out.append("deceivers = "
                   + " ".join(str(i + 1) for i in sc.ds.deceivers))
        for i, ts in zip(sc.ds.deceivers, sc.ds.targets):
            out.append(f"targets{i + 1} = "
                       + " ".join(str(t + 1) for t in ts))
        out.append("eps = " + " ".join(format(v, ".17g") for v in sc.ds.eps))
        out.append("jref = "
                   + " ".join(format(v, ".17g") for v in sc.ds.jref))
    if sc.probe is not None:
        pr = sc.probe
        out += ["", "[probe]"]
        out.append(f"a = {format(pr.a, '.17g')}")
        out.append(f"k = {format(pr.k, '.17g')}")
        out.append(f"omega = {format(pr.omega, '.17g')}")
        out.append("omega_bar = " + " ".join(str(w) for w in pr.omega_bar))
        out.append("phases = "
                   + " ".join(format(v, ".17g") for v in pr.phases))
        for (i, j), v in sorted(pr.phase_estimates.items()):
            out.append(f"phase_est{i + 1}_{j + 1} = {format(v, '.17g')}")
    if sc.policies:
        out += ["", "[policy]"]
        for idx in sorted(sc.policies):
            out.append(f"player{idx + 1} = "
                       + _policy_to_text(sc.policies[idx]))
    out += ["", "[sim]", f"t_final = {format(sc.t_final, '.17g')}"]
    if sc.u0 is not None:
        out.append("u0 = " + " ".join(format(v, ".17g") for v in sc.u0))
    if sc.delta0 is not None:
        out.append("delta0 = "
                   + " ".join(format(v, ".17g") for v in sc.delta0))
    out.append(f"samples_per_period = {sc.samples_per_period}")
    ana = sc.analysis
    if ana:
        out += ["", "[analysis]"]
        out.append(f"delta_slice = {'true' if ana['delta_slice'] else 'false'}")
        out.append("delta_box = "
                   + " ".join(format(v, ".17g") for v in ana["delta_box"]))
        out.append(f"omega_set = {'true' if ana['omega_set'] else 'false'}")
        out.append(f"eps1 = {format(ana['eps1'], '.17g')}")
        if ana.get("benevolence") is not None:
            out.append("benevolence = "
                       + " ".join(str(i + 1) for i in ana["benevolence"]))
        out.append(f"immunity = {'true' if ana['immunity'] else 'false'}")
        out.append(f"rc = {'true' if ana['rc'] else 'false'}")
        if ana.get("mutual_delta") is not None:
            out.append("mutual_delta = "
                       + " ".join(format(v, ".17g")
                                  for v in ana["mutual_delta"]))
        if ana.get("linearization_eps") is not None:
            out.append("linearization_eps = "
                       + format(ana["linearization_eps"], ".17g"))
            out.append(f"linearization_variant = "
                       f"{ana['linearization_variant']}")
        if ana.get("solve_ref") is not None:
            out.append(f"solve_ref = {format(ana['solve_ref'], '.17g')}")
    if sc.sweep:
        sw = sc.sweep
        out += ["", "[sweep]", f"parameter = {sw['parameter']}"]
        out.append(f"start = {format(sw['start'], '.17g')}")
        out.append(f"stop = {format(sw['stop'], '.17g')}")
        out.append(f"step = {format(sw['step'], '.17g')}")
        out.append(f"mode = {sw['mode']}")
    return "\n".join(out) + "\n"


def bundled_names() -> list[str]:
    files = resources.files("dnes").joinpath("data")
    return sorted(p.name[:-4] for p in files.iterdir()
                  if p.name.endswith(".scn"))


def load_bundled(name: str) -> Scenario:
    """Load a scenario shipped with the package by name."""
    if name.endswith(".scn"):
        name = name[:-4]
    path = resources.files("dnes").joinpath("data", f"{name}.scn")
    if not path.is_file():
        raise ScenarioError(f"no bundled scenario {name!r}; available: "
                            + ", ".join(bundled_names()))
    return parse_scenario(path.read_text(encoding="utf-8"))
