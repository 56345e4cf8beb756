"""Experiment and game configuration files (JSON).

An experiment file has the sections ``game``, ``network``, ``solver``,
``tasks`` and optionally ``lab`` and ``output``.  See README.md for the
schema.  Every error names the offending field and, where it can be
located, the line in the file.
"""

from __future__ import annotations

import hashlib
import importlib
import json
import os
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ppnash.example_games import make_example_game
from ppnash.game_model import Box, Game, GameError, Halfspaces, WholeSpace, quadratic_game
from ppnash.network import (Network, NetworkError, complete_graph, cycle_graph, from_weight_matrix,
                            metropolis_weights, path_graph, random_connected_graph, read_edge_list,
                            star_graph)

TASKS = ("taxonomy", "solve", "baseline", "resolvent-check")
TOPOLOGIES = {"complete": complete_graph, "path": path_graph, "cycle": cycle_graph, "star": star_graph}
SOLVER_KEYS = {"alpha", "alpha_grid", "max_outer_iterations", "stop_tolerance", "consensus_tolerance",
               "init", "seed", "init_box", "inner_tolerance", "inner_budget", "baseline_step",
               "baseline_iterations", "skip_precheck", "diagnostic_cadence"}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` is a dotted path, ``line`` 1-based or ``None``."""

    def __init__(self, message, field=None, line=None, source=None):
        self.field, self.line, self.source = field, line, source
        where = []
        if source:
            where.append(str(source))
        if line:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{': '.join([', '.join(where), message]) if where else message}")

    def record(self):
        return {"error": "config", "message": str(self), "field": self.field, "line": self.line}


@dataclass
class ExperimentConfig:
    game: Game
    network: Network
    solver: dict
    tasks: list
    lab: dict = field(default_factory=dict)
    output: Optional[str] = None
    raw: dict = field(default_factory=dict)
    digest: str = ""
    source: Optional[str] = None

    @property
    def seed(self):
        return int(self.solver.get("seed", 0) or 0)


def _line_of(text, key):
    if text is None:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _as_float(val, fld, text, source):
    try:
        out = float(val)
    except (TypeError, ValueError):
        raise ConfigError(f"expected a number, got {val!r}", fld, _line_of(text, fld.split('.')[-1]),
                          source) from None
    return out


def _array(val, fld, ndim, text=None, source=None):
    try:
        arr = np.asarray(val, dtype=float)
    except (TypeError, ValueError):
        arr = None
    if arr is None or arr.ndim != ndim:
        raise ConfigError(f"expected a {ndim}-D numeric array", fld, _line_of(text, fld.split('.')[-1]),
                          source)
    return arr


def _resolve(path, base):
    path = os.path.expanduser(str(path))
    return path if os.path.isabs(path) or base is None else os.path.join(base, path)


def load_json(path):
    """Read ``path`` and return ``(data, text)``; JSON syntax errors carry the line."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read file: {exc.strerror}", source=path) from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, line=exc.lineno, source=path) from None


def parse_feasible_set(spec, dim, fld, text=None, source=None):
    if spec is None:
        return WholeSpace(dim)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("feasible set needs a 'kind'", fld, _line_of(text, "feasible_sets"), source)
    kind = spec["kind"]
    try:
        if kind == "whole-space":
            return WholeSpace(dim)
        if kind == "box":
            lo = _array(spec.get("lower"), f"{fld}.lower", 1, text, source)
            hi = _array(spec.get("upper"), f"{fld}.upper", 1, text, source)
            if lo.size != dim or hi.size != dim:
                raise ConfigError(f"box bounds must have length {dim}", fld, _line_of(text, "lower"), source)
            return Box(lo, hi)
        if kind == "halfspaces":
            A = _array(spec.get("A"), f"{fld}.A", 2, text, source)
            b = _array(spec.get("b"), f"{fld}.b", 1, text, source)
            if A.shape[1] != dim:
                raise ConfigError(f"halfspace rows must have length {dim}", fld, _line_of(text, "A"), source)
            return Halfspaces(A, b)
    except GameError as exc:
        raise ConfigError(str(exc), fld, _line_of(text, "feasible_sets"), source) from None
    raise ConfigError(f"unknown feasible set kind {kind!r}", f"{fld}.kind", _line_of(text, "kind"), source)


def parse_game_spec(spec, base=None, text=None, source=None) -> Game:
    """Build a game from ``{"builtin": id}``, ``{"kind": "quadratic", ...}``,
    ``{"plugin": "module:function", "args": {...}}`` or ``{"file": path}``."""
    if not isinstance(spec, dict):
        raise ConfigError("game spec must be an object", "game", _line_of(text, "game"), source)
    if "file" in spec:
        path = _resolve(spec["file"], base)
        data, sub_text = load_json(path)
        return parse_game_spec(data.get("game", data), os.path.dirname(path), sub_text, path)
    if "builtin" in spec:
        try:
            return make_example_game(spec["builtin"])
        except GameError as exc:
            raise ConfigError(str(exc), "game.builtin", _line_of(text, "builtin"), source) from None
    if "plugin" in spec:
        target = str(spec["plugin"])
        mod, _, name = target.partition(":")
        try:
            factory = getattr(importlib.import_module(mod), name)
        except (ImportError, AttributeError, ValueError):
            raise ConfigError(f"cannot load plugin {target!r}", "game.plugin", _line_of(text, "plugin"),
                              source) from None
        game = factory(**spec.get("args", {}))
        if not isinstance(game, Game):
            raise ConfigError("plugin did not return a Game", "game.plugin", _line_of(text, "plugin"), source)
        return game
    if spec.get("kind") == "quadratic":
        Q = _array(spec.get("Q"), "game.Q", 2, text, source)
        c = _array(spec.get("c"), "game.c", 1, text, source)
        dims = spec.get("dims") or [1] * c.size
        sets = spec.get("feasible_sets") or [None] * len(dims)
        if len(sets) != len(dims):
            raise ConfigError("one feasible set per agent is required", "game.feasible_sets",
                              _line_of(text, "feasible_sets"), source)
        fsets = [parse_feasible_set(s, int(d), f"game.feasible_sets[{i}]", text, source)
                 for i, (s, d) in enumerate(zip(sets, dims))]
        try:
            return quadratic_game(Q, c, dims, fsets, name=spec.get("name", "quadratic"))
        except GameError as exc:
            raise ConfigError(str(exc), "game", _line_of(text, "Q"), source) from None
    raise ConfigError("game spec needs one of 'builtin', 'kind', 'plugin' or 'file'", "game",
                      _line_of(text, "game"), source)


def parse_network_spec(spec, base=None, text=None, source=None) -> Network:
    """``{"topology": name, "N": k}``, ``{"edges": [[1, 2], ...], "N": k}``,
    ``{"edge_file": path}``, ``{"W": [[...]]}`` or ``{"weights_file": csv}``.

    Edges are 1-indexed; weights default to the Metropolis rule.
    """
    if not isinstance(spec, dict):
        raise ConfigError("network spec must be an object", "network", _line_of(text, "network"), source)
    try:
        if "topology" in spec:
            topo = spec["topology"]
            N = int(spec.get("N", 0))
            if N < 1:
                raise ConfigError("network.N must be a positive integer", "network.N", _line_of(text, "N"), source)
            if topo == "random":
                return random_connected_graph(N, float(spec.get("p", 0.5)), spec.get("seed"))
            if topo not in TOPOLOGIES:
                raise ConfigError(f"unknown topology {topo!r}", "network.topology",
                                  _line_of(text, "topology"), source)
            return TOPOLOGIES[topo](N)
        if "edges" in spec or "edge_file" in spec:
            if "edge_file" in spec:
                edges, N = read_edge_list(_resolve(spec["edge_file"], base))
            else:
                edges = [(int(i) - 1, int(j) - 1) for i, j in spec["edges"]]
                N = max([max(e) + 1 for e in edges] + [0])
            N = int(spec.get("N", N))
            return metropolis_weights(edges, N)
        if "W" in spec or "weights_file" in spec:
            if "weights_file" in spec:
                W = np.loadtxt(_resolve(spec["weights_file"], base), delimiter=",", ndmin=2)
            else:
                W = _array(spec["W"], "network.W", 2, text, source)
            return from_weight_matrix(W)
    except NetworkError as exc:
        raise ConfigError(f"assumption violated: {exc}", "network", _line_of(text, "network"), source) from None
    except OSError as exc:
        raise ConfigError(f"cannot read file: {exc}", "network", _line_of(text, "network"), source) from None
    raise ConfigError("network spec needs 'topology', 'edges', 'edge_file', 'W' or 'weights_file'",
                      "network", _line_of(text, "network"), source)


def config_digest(raw):
    """SHA-256 of the canonical JSON form of ``raw``."""
    return hashlib.sha256(json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def parse_experiment(raw, base=None, text=None, source=None) -> ExperimentConfig:
    for section in ("game", "network", "tasks"):
        if section not in raw:
            raise ConfigError(f"missing required section '{section}'", section, None, source)
    tasks = raw["tasks"]
    if isinstance(tasks, str):
        tasks = [tasks]
    if not tasks:
        raise ConfigError("at least one task is required", "tasks", _line_of(text, "tasks"), source)
    for t in tasks:
        if t not in TASKS:
            raise ConfigError(f"unknown task {t!r}; expected one of {', '.join(TASKS)}", "tasks",
                              _line_of(text, "tasks"), source)
    solver = dict(raw.get("solver", {}))
    unknown = set(solver) - SOLVER_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown solver option {key!r}", f"solver.{key}", _line_of(text, key), source)
    if "alpha" in solver and "alpha_grid" in solver:
        raise ConfigError("give either 'alpha' or 'alpha_grid', not both", "solver",
                          _line_of(text, "alpha_grid"), source)
    if "alpha" in solver:
        a = _as_float(solver["alpha"], "solver.alpha", text, source)
        if not a > 0:
            raise ConfigError("alpha must be positive", "solver.alpha", _line_of(text, "alpha"), source)
        solver["alpha"] = a
    if "alpha_grid" in solver:
        grid = [_as_float(a, "solver.alpha_grid", text, source) for a in solver["alpha_grid"]]
        if not grid or min(grid) <= 0:
            raise ConfigError("alpha_grid must be a non-empty list of positive numbers",
                              "solver.alpha_grid", _line_of(text, "alpha_grid"), source)
        solver["alpha_grid"] = grid
    game = parse_game_spec(raw["game"], base, text, source)
    net = parse_network_spec(raw["network"], base, text, source)
    if net.N != game.N:
        raise ConfigError(f"network has {net.N} nodes but the game has {game.N} agents", "network",
                          _line_of(text, "network"), source)
    return ExperimentConfig(game, net, solver, list(tasks), dict(raw.get("lab", {})), raw.get("output"),
                            raw, config_digest(raw), source)


def load_experiment(path) -> ExperimentConfig:
    raw, text = load_json(path)
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object", source=path)
    return parse_experiment(raw, os.path.dirname(os.path.abspath(path)), text, path)
