"""Scenario files: a single JSON document describing one experiment.

A scenario gives either a physical network (gain matrix, powers, noise,
SINR threshold) from which both attack-cost categories are derived, or an
injected cost vector for solver-only studies.  It adds the game
parameters (per-category hiding cost, one continuation probability for
the whole scenario), an optional jammer, and an optional sweep block.

Top-level shape (schema_version 1):

    {
      "schema_version": 1,
      "description": "...",                 # optional free text
      "network": {
        "h": [[...], ...],                  # or "h_random": {...}
        "powers": [...],                    # or full matrix "P"
        "sigma2": 1.0,
        "omega": 1.0,
        "positions": [[x, y], ...]          # optional
      },
      "costs": {"lambda_bar": [...], "category": "connectivity"},
      "jammer": {"position": [x, y], "J": 5.0, "g": [...]},
      "game": {"C_h": 1.0, "gamma": 0.5},   # or "alpha" + "delta"
      "include_interference": false,
      "throughput_on_links_only": false,
      "sweep": {"kind": "grid", "parameters": {"omega": [...], ...}}
    }

Exactly one of "network" / "costs" is required, as is exactly one of
"gamma" / "alpha"+"delta" and (in a network) exactly one of "h" /
"h_random" and "powers" / "P".  "C_h" may be a single number or a
per-category object.  Sweep kinds: "grid" (cartesian product over the
parameters, in the order their names appear) and "trace" (fixed-point
iterate trace; cost-injection scenarios only, optional "tol").
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .costs import CATEGORIES, CONNECTIVITY, THROUGHPUT, CostVector
from .game import GameParameters
from .network import JammerModel, NetworkModel

SCHEMA_VERSION = 1
SWEEP_GRID = "grid"
SWEEP_TRACE = "trace"
TRACE_DEFAULT_TOL = 1e-12
_DISTRIBUTIONS = ("uniform", "rayleigh")


class ScenarioError(ValueError):
    """Invalid scenario document; the message names the offending field."""


def _fail(fieldname: str, problem: str):
    raise ScenarioError(f"field '{fieldname}': {problem}")


def _number(fieldname: str, value, *, minimum=None, below_one=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(fieldname, f"expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        _fail(fieldname, "must be finite")
    if minimum is not None and v < minimum:
        _fail(fieldname, f"must be >= {minimum}, got {v}")
    if below_one and v >= 1.0:
        _fail(fieldname, f"must be < 1, got {v}")
    return v


def _vector(fieldname: str, value, length: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        _fail(fieldname, "expected an array of numbers")
    if arr.ndim != 1 or arr.size == 0:
        _fail(fieldname, f"expected a non-empty 1-D array, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        _fail(fieldname, "entries must be finite")
    if length is not None and arr.size != length:
        _fail(fieldname, f"expected {length} entries, got {arr.size}")
    return arr


def _matrix(fieldname: str, value, n: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        _fail(fieldname, "expected a matrix (array of arrays)")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        _fail(fieldname, f"expected a square matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        _fail(fieldname, "entries must be finite")
    if n is not None and arr.shape[0] != n:
        _fail(fieldname, f"is {arr.shape[0]}x{arr.shape[1]} but the scenario "
                         f"has {n} nodes")
    return arr


def _generate_gains(spec: dict) -> tuple[np.ndarray, dict]:
    if not isinstance(spec, dict):
        _fail("network.h_random", "expected an object")
    unknown = set(spec) - {"seed", "n", "distribution", "low", "high", "scale"}
    if unknown:
        _fail("network.h_random", f"unknown keys {sorted(unknown)}")
    if "seed" not in spec or "n" not in spec:
        _fail("network.h_random", "needs 'seed' and 'n'")
    seed = spec["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        _fail("network.h_random.seed", "must be an integer in [0, 2^64)")
    n = spec["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        _fail("network.h_random.n", "must be an integer >= 2")
    dist = spec.get("distribution", "uniform")
    if dist not in _DISTRIBUTIONS:
        _fail("network.h_random.distribution",
              f"unknown {dist!r}; choose from {_DISTRIBUTIONS}")
    rng = np.random.default_rng(seed)
    normalized = {"seed": seed, "n": n, "distribution": dist}
    if dist == "uniform":
        low = _number("network.h_random.low", spec.get("low", 0.0), minimum=0.0)
        high = _number("network.h_random.high", spec.get("high", 2.0))
        if high <= low:
            _fail("network.h_random.high", f"must exceed low={low}")
        h = rng.uniform(low, high, size=(n, n))
        normalized.update(low=low, high=high)
    else:
        scale = _number("network.h_random.scale", spec.get("scale", 1.0), minimum=0.0)
        h = rng.rayleigh(scale, size=(n, n))
        normalized.update(scale=scale)
    np.fill_diagonal(h, 0.0)
    return h, normalized


@dataclass(frozen=True)
class SweepSpec:
    """Ordered sweep description: grid parameters or a trace request."""

    kind: str
    parameters: tuple[tuple[str, tuple[float, ...]], ...] = ()
    tol: float = TRACE_DEFAULT_TOL

    @property
    def grid_size(self) -> int:
        size = 1
        for _, values in self.parameters:
            size *= len(values)
        return size


@dataclass(frozen=True)
class Scenario:
    """Validated, normalized scenario; all defaults applied."""

    schema_version: int
    description: str
    # network mode (None in cost-injection mode)
    h: np.ndarray | None
    h_random: dict | None
    node_powers: np.ndarray | None
    power_matrix: np.ndarray | None
    sigma2: float | None
    omega: float | None
    positions: np.ndarray | None
    include_interference: bool
    throughput_on_links_only: bool
    # cost-injection mode
    lambda_bar: np.ndarray | None
    injected_category: str | None
    # optional jammer
    jammer_position: np.ndarray | None
    jammer_budget: float | None
    jammer_gains: np.ndarray | None
    # game parameters
    hiding_cost: dict[str, float]
    gamma: float
    alpha: float | None
    delta: float | None
    # optional sweep
    sweep: SweepSpec | None = field(default=None)

    @property
    def mode(self) -> str:
        return "network" if self.h is not None else "costs"

    @property
    def n(self) -> int:
        return self.h.shape[0] if self.h is not None else self.lambda_bar.size

    def network_model(self, omega: float | None = None,
                      power_overrides: dict[int, float] | None = None) -> NetworkModel:
        """Instantiate the physics model, optionally overriding the SINR
        threshold or single-node power levels (1-based node keys)."""
        if self.h is None:
            raise ScenarioError("scenario injects costs directly; no network model")
        w = self.omega if omega is None else float(omega)
        if self.node_powers is not None:
            levels = self.node_powers.copy()
            for node, value in (power_overrides or {}).items():
                levels[node - 1] = value
            return NetworkModel.from_node_powers(
                gains=self.h, node_powers=levels, noise=self.sigma2,
                sinr_threshold=w, positions=self.positions,
                include_interference=self.include_interference)
        p = self.power_matrix.copy()
        for node, value in (power_overrides or {}).items():
            p[node - 1, :] = value
            p[node - 1, node - 1] = 0.0
        return NetworkModel(gains=self.h, power=p, noise=self.sigma2,
                            sinr_threshold=w, positions=self.positions,
                            include_interference=self.include_interference)

    def jammer_model(self) -> JammerModel | None:
        if self.jammer_position is None:
            return None
        return JammerModel(position=self.jammer_position,
                           power_budget=self.jammer_budget,
                           gains=self.jammer_gains)

    def injected_costs(self) -> CostVector:
        if self.lambda_bar is None:
            raise ScenarioError("scenario has no injected cost vector")
        return CostVector(values=self.lambda_bar.copy(),
                          category=self.injected_category)

    def game_parameters(self, category: str,
                        gamma: float | None = None,
                        hiding_cost: float | None = None) -> GameParameters:
        """Parameters for one category, with optional sweep overrides.

        A gamma override detaches alpha/delta (they describe the base
        value, not the override)."""
        ch = self.hiding_cost[category] if hiding_cost is None else float(hiding_cost)
        if gamma is None:
            return GameParameters(hiding_cost=ch, gamma=self.gamma,
                                  alpha=self.alpha, delta=self.delta)
        return GameParameters(hiding_cost=ch, gamma=float(gamma))

    def to_dict(self) -> dict:
        """Normalized echo; reloading it reproduces this scenario."""
        doc: dict = {"schema_version": self.schema_version}
        if self.description:
            doc["description"] = self.description
        if self.mode == "network":
            net: dict = {}
            if self.h_random is not None:
                net["h_random"] = dict(self.h_random)
            else:
                net["h"] = self.h.tolist()
            if self.node_powers is not None:
                net["powers"] = self.node_powers.tolist()
            else:
                net["P"] = self.power_matrix.tolist()
            net["sigma2"] = self.sigma2
            net["omega"] = self.omega
            if self.positions is not None:
                net["positions"] = self.positions.tolist()
            doc["network"] = net
        else:
            doc["costs"] = {"lambda_bar": self.lambda_bar.tolist(),
                            "category": self.injected_category}
        if self.jammer_position is not None:
            doc["jammer"] = {"position": self.jammer_position.tolist(),
                             "J": self.jammer_budget,
                             "g": self.jammer_gains.tolist()}
        game: dict = {"C_h": dict(self.hiding_cost)}
        if self.alpha is not None:
            game["alpha"] = self.alpha
            game["delta"] = self.delta
        else:
            game["gamma"] = self.gamma
        doc["game"] = game
        doc["include_interference"] = self.include_interference
        doc["throughput_on_links_only"] = self.throughput_on_links_only
        if self.sweep is not None:
            sw: dict = {"kind": self.sweep.kind}
            if self.sweep.kind == SWEEP_GRID:
                sw["parameters"] = {name: list(values)
                                    for name, values in self.sweep.parameters}
            else:
                sw["tol"] = self.sweep.tol
            doc["sweep"] = sw
        return doc


def _parse_game(doc: dict, categories: tuple[str, ...]) -> tuple[dict, float, float | None, float | None]:
    game = doc.get("game")
    if not isinstance(game, dict):
        _fail("game", "required object is missing")
    unknown = set(game) - {"C_h", "gamma", "alpha", "delta"}
    if unknown:
        _fail("game", f"unknown keys {sorted(unknown)}")
    if "C_h" not in game:
        _fail("game.C_h", "required")
    raw_ch = game["C_h"]
    hiding: dict[str, float] = {}
    if isinstance(raw_ch, dict):
        unknown = set(raw_ch) - set(categories)
        if unknown:
            _fail("game.C_h", f"unknown categories {sorted(unknown)}; "
                              f"this scenario uses {list(categories)}")
        for cat in categories:
            if cat not in raw_ch:
                _fail("game.C_h", f"missing category '{cat}'")
            hiding[cat] = _number(f"game.C_h.{cat}", raw_ch[cat], minimum=0.0)
    else:
        value = _number("game.C_h", raw_ch, minimum=0.0)
        hiding = {cat: value for cat in categories}

    has_gamma = "gamma" in game
    has_ad = "alpha" in game or "delta" in game
    if has_gamma == has_ad:
        _fail("game", "exactly one of 'gamma' or 'alpha'+'delta' is required")
    if has_gamma:
        gamma = _number("game.gamma", game["gamma"], minimum=0.0, below_one=True)
        return hiding, gamma, None, None
    if "alpha" not in game or "delta" not in game:
        _fail("game", "'alpha' and 'delta' must be supplied together")
    alpha = _number("game.alpha", game["alpha"], minimum=0.0)
    delta = _number("game.delta", game["delta"], minimum=0.0)
    if alpha > 1.0:
        _fail("game.alpha", f"must be <= 1, got {alpha}")
    if delta > 1.0:
        _fail("game.delta", f"must be <= 1, got {delta}")
    gamma = (1.0 - alpha) * delta
    if gamma >= 1.0:
        _fail("game", f"(1-alpha)*delta = {gamma} must be < 1")
    return hiding, gamma, alpha, delta


_SWEEPABLE_NETWORK = ("omega", "gamma", "C_h")
_SWEEPABLE_COSTS = ("gamma", "C_h")


def _parse_sweep(doc: dict, mode: str, n: int) -> SweepSpec | None:
    sw = doc.get("sweep")
    if sw is None:
        return None
    if not isinstance(sw, dict):
        _fail("sweep", "expected an object")
    kind = sw.get("kind")
    if kind not in (SWEEP_GRID, SWEEP_TRACE):
        _fail("sweep.kind", f"expected 'grid' or 'trace', got {kind!r}")
    if kind == SWEEP_TRACE:
        unknown = set(sw) - {"kind", "tol"}
        if unknown:
            _fail("sweep", f"unknown keys {sorted(unknown)} for a trace sweep")
        if mode != "costs":
            _fail("sweep.kind", "'trace' requires a cost-injection scenario "
                                "(single cost vector)")
        tol = _number("sweep.tol", sw.get("tol", TRACE_DEFAULT_TOL), minimum=0.0)
        return SweepSpec(kind=SWEEP_TRACE, tol=tol)
    unknown = set(sw) - {"kind", "parameters"}
    if unknown:
        _fail("sweep", f"unknown keys {sorted(unknown)} for a grid sweep")
    params = sw.get("parameters")
    if not isinstance(params, dict) or not params:
        _fail("sweep.parameters", "expected a non-empty object")
    allowed = _SWEEPABLE_NETWORK if mode == "network" else _SWEEPABLE_COSTS
    parsed: list[tuple[str, tuple[float, ...]]] = []
    for name, values in params.items():
        base_ok = name in allowed
        power_ok = (mode == "network" and name.startswith("P")
                    and name[1:].isdigit() and name[1] != "0")
        if not (base_ok or power_ok):
            _fail(f"sweep.parameters.{name}",
                  f"unknown parameter; allowed: {list(allowed)} and P<k>"
                  if mode == "network" else
                  f"unknown parameter; allowed: {list(allowed)}")
        if power_ok and int(name[1:]) > n:
            _fail(f"sweep.parameters.{name}",
                  f"node {name[1:]} out of range for {n} nodes")
        arr = _vector(f"sweep.parameters.{name}", values)
        if name == "omega" and arr.min() <= 0.0:
            _fail(f"sweep.parameters.{name}", "omega values must be > 0")
        if name == "gamma" and (arr.min() < 0.0 or arr.max() >= 1.0):
            _fail(f"sweep.parameters.{name}", "gamma values must lie in [0, 1)")
        if name == "C_h" and arr.min() < 0.0:
            _fail(f"sweep.parameters.{name}", "C_h values must be >= 0")
        if name.startswith("P") and name not in allowed and arr.min() < 0.0:
            _fail(f"sweep.parameters.{name}", "power values must be >= 0")
        parsed.append((name, tuple(float(v) for v in arr)))
    return SweepSpec(kind=SWEEP_GRID, parameters=tuple(parsed))


def parse_scenario(doc: dict) -> Scenario:
    """Validate a decoded scenario document and apply defaults."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    unknown = set(doc) - {"schema_version", "description", "network", "costs",
                          "jammer", "game", "include_interference",
                          "throughput_on_links_only", "sweep"}
    if unknown:
        _fail("scenario", f"unknown top-level keys {sorted(unknown)}")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        _fail("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    description = doc.get("description", "")
    if not isinstance(description, str):
        _fail("description", "expected a string")

    has_network = "network" in doc
    has_costs = "costs" in doc
    if has_network == has_costs:
        _fail("scenario", "exactly one of 'network' or 'costs' is required")

    h = h_random = node_powers = power_matrix = positions = None
    sigma2 = omega = None
    lambda_bar = injected_category = None
    include_interference = doc.get("include_interference", False)
    links_only = doc.get("throughput_on_links_only", False)
    if not isinstance(include_interference, bool):
        _fail("include_interference", "expected true or false")
    if not isinstance(links_only, bool):
        _fail("throughput_on_links_only", "expected true or false")

    if has_network:
        net = doc["network"]
        if not isinstance(net, dict):
            _fail("network", "expected an object")
        unknown = set(net) - {"h", "h_random", "powers", "P", "sigma2",
                              "omega", "positions"}
        if unknown:
            _fail("network", f"unknown keys {sorted(unknown)}")
        if ("h" in net) == ("h_random" in net):
            _fail("network", "exactly one of 'h' or 'h_random' is required")
        if "h" in net:
            h = _matrix("h", net["h"])
        else:
            h, h_random = _generate_gains(net["h_random"])
        n = h.shape[0]
        if n < 2:
            _fail("h", f"needs at least 2 nodes, got {n}")
        if h.min() < 0.0:
            _fail("h", "gains must be >= 0")
        if np.diagonal(h).any():
            _fail("h", "diagonal must be zero (no self-links)")
        if ("powers" in net) == ("P" in net):
            _fail("network", "exactly one of 'powers' or 'P' is required")
        if "powers" in net:
            node_powers = _vector("powers", net["powers"], length=n)
            if node_powers.min() < 0.0:
                _fail("powers", "must be >= 0")
        else:
            power_matrix = _matrix("P", net["P"], n=n)
            if power_matrix.min() < 0.0:
                _fail("P", "must be >= 0")
        if "sigma2" not in net:
            _fail("network.sigma2", "required")
        sigma2 = _number("network.sigma2", net["sigma2"])
        if sigma2 <= 0.0:
            _fail("network.sigma2", f"must be > 0, got {sigma2}")
        if "omega" not in net:
            _fail("network.omega", "required")
        omega = _number("network.omega", net["omega"])
        if omega <= 0.0:
            _fail("network.omega", f"must be > 0, got {omega}")
        if "positions" in net:
            try:
                positions = np.asarray(net["positions"], dtype=float)
            except (TypeError, ValueError):
                _fail("positions", "expected an array of [x, y] pairs")
            if positions.shape != (n, 2) or not np.isfinite(positions).all():
                _fail("positions", f"expected shape ({n}, 2) finite, got "
                                   f"{positions.shape}")
        categories: tuple[str, ...] = CATEGORIES
    else:
        costs = doc["costs"]
        if not isinstance(costs, dict):
            _fail("costs", "expected an object")
        unknown = set(costs) - {"lambda_bar", "category"}
        if unknown:
            _fail("costs", f"unknown keys {sorted(unknown)}")
        if "lambda_bar" not in costs:
            _fail("costs.lambda_bar", "required")
        lambda_bar = _vector("costs.lambda_bar", costs["lambda_bar"])
        if lambda_bar.min() < 0.0:
            _fail("costs.lambda_bar", "costs must be >= 0")
        injected_category = costs.get("category", CONNECTIVITY)
        if injected_category not in CATEGORIES:
            _fail("costs.category",
                  f"expected one of {CATEGORIES}, got {injected_category!r}")
        categories = (injected_category,)
        n = lambda_bar.size

    jammer_position = jammer_budget = jammer_gains = None
    if "jammer" in doc:
        if has_costs:
            _fail("jammer", "a jammer needs a network scenario (it acts on "
                            "geometry, not on injected costs)")
        jam = doc["jammer"]
        if not isinstance(jam, dict):
            _fail("jammer", "expected an object")
        unknown = set(jam) - {"position", "J", "g"}
        if unknown:
            _fail("jammer", f"unknown keys {sorted(unknown)}")
        for key in ("position", "J", "g"):
            if key not in jam:
                _fail(f"jammer.{key}", "required")
        if positions is None:
            _fail("positions", "required when a jammer is present "
                               "(distances enter the jamming power)")
        jammer_position = _vector("jammer.position", jam["position"], length=2)
        jammer_budget = _number("jammer.J", jam["J"], minimum=0.0)
        jammer_gains = _vector("jammer.g", jam["g"], length=n)
        if jammer_gains.min() < 0.0:
            _fail("jammer.g", "gains must be >= 0")

    hiding, gamma, alpha, delta = _parse_game(doc, categories)
    sweep = _parse_sweep(doc, "network" if has_network else "costs", n)

    return Scenario(schema_version=SCHEMA_VERSION, description=description,
                    h=h, h_random=h_random, node_powers=node_powers,
                    power_matrix=power_matrix, sigma2=sigma2, omega=omega,
                    positions=positions,
                    include_interference=include_interference,
                    throughput_on_links_only=links_only,
                    lambda_bar=lambda_bar, injected_category=injected_category,
                    jammer_position=jammer_position,
                    jammer_budget=jammer_budget, jammer_gains=jammer_gains,
                    hiding_cost=hiding, gamma=gamma, alpha=alpha, delta=delta,
                    sweep=sweep)


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file; errors carry file context."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{path}: not valid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc
    try:
        return parse_scenario(doc)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
