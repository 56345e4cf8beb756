"""Sampling laboratory for the monotonicity and smoothness conditions C1-C10.

Sampling can only refute a condition.  A report therefore says
``"violated"`` (with a reproducible witness) or ``"no-violation-found"``,
never "proved".  Maximality in C1/C3 has no finite-sample certificate and
is not tested: both are checked as plain monotonicity.

Conditions, with ``RtF = R^T F_ext`` and ``F_alpha = alpha RtF + (I - W)``:

====  ==============================================================
C1    RtF monotone
C2    RtF restricted monotone w.r.t. zer(A_alpha)
C3    F_alpha monotone for some alpha in the grid
C4    F_alpha restricted monotone w.r.t. zer(A_alpha), some alpha
C5    F restricted strongly monotone w.r.t. the NE, and Lipschitz
C6    F strongly monotone and Lipschitz
C7    F hypomonotone (nu), Lipschitz, inverse Lipschitz (R), R nu < 1
C8    F strictly monotone and Lipschitz
C9    F cocoercive
C10   F monotone and Lipschitz
====  ==============================================================
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ppnash import kernels
from ppnash.game_model import Game, brute_force_ne
from ppnash.network import Network
from ppnash.operators import (OperatorHandle, augmented_F, consensus_vector, game_mapping,
                              lifted_extended_mapping)

CONDITIONS = tuple(f"C{k}" for k in range(1, 11))
VERDICTS = ("no-violation-found", "violated", "inapplicable")

#: violation threshold: inner < -(ABS_TOL + REL_TOL |du| |dx|)
ABS_TOL = 1e-12
REL_TOL = 1e-9
#: a fitted log-log slope of ell_hat(r) above this flags growth without bound
GROWTH_SLOPE = 0.5
#: ell_hat jumping by this factor between successive local step sizes flags a discontinuity
JUMP_FACTOR = 3.0
PRODUCT_EDGES = (
    ("C1", "C2"), ("C3", "C4"), ("C6", "C5"), ("C5", "C6"), ("C6", "C8"), ("C8", "C10"),
    ("C1", "C3"), ("C2", "C4"), ("C6", "C7"), ("C6", "C9"), ("C9", "C10"),
)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sampler:
    """Pair sampler on the box ``[-box, box]^dim``.

    A fraction of the first points is drawn within ``anchor_radius`` of the
    anchors and a fraction of pairs are local (``|x - y| <= local_radius``).
    """

    box: float = 5.0
    samples: int = 100_000
    seed: int = 0
    anchor_fraction: float = 0.1
    anchor_radius: float = 0.1
    local_fraction: float = 0.1
    local_radius: float = 1e-2
    polish_rounds: int = 40

    def rng(self, salt=0):
        return np.random.default_rng([self.seed, salt])

    def _near(self, rng, anchors, m, dim):
        idx = rng.integers(len(anchors), size=m)
        return np.asarray(anchors, float)[idx] + _ball(rng, m, dim, self.anchor_radius)

    def points(self, dim, anchors=None, salt=0, size=None):
        rng = self.rng(salt)
        M = self.samples if size is None else size
        X = rng.uniform(-self.box, self.box, size=(M, dim))
        if anchors is not None and len(anchors):
            m = int(self.anchor_fraction * M)
            X[:m] = self._near(rng, anchors, m, dim)
        return X

    def pairs(self, dim, anchors=None, salt=0, size=None):
        rng = self.rng(salt)
        M = self.samples if size is None else size
        X = rng.uniform(-self.box, self.box, size=(M, dim))
        Y = rng.uniform(-self.box, self.box, size=(M, dim))
        m_anchor = int(self.anchor_fraction * M) if anchors is not None and len(anchors) else 0
        m_local = int(self.local_fraction * M)
        if m_anchor:
            X[:m_anchor] = self._near(rng, anchors, m_anchor, dim)
        if m_local:
            sl = slice(m_anchor, m_anchor + m_local)
            Y[sl] = X[sl] + _ball(rng, m_local, dim, self.local_radius)
        return X, Y


def _ball(rng, m, dim, radius):
    u = rng.normal(size=(m, dim))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return u * (radius * rng.random((m, 1)) ** (1.0 / dim))


def _polish(score, X, Y, rng, rounds, box=None, move_y=True, batch=64):
    """Random local search lowering ``score(x, y)`` from the pair ``(X, Y)``.

    ``score`` maps two ``(M, d)`` arrays to ``M`` values.  Used to sharpen
    extremal statistics; every accepted point is a genuine sample.
    """
    x, y = X.copy(), Y.copy()
    best = float(score(x[None], y[None])[0])
    step = 0.1 * max(np.linalg.norm(x - y), 1e-6)
    for _ in range(rounds):
        cx = x + step * rng.normal(size=(batch, x.size))
        cy = y + step * rng.normal(size=(batch, y.size)) if move_y else np.broadcast_to(y, cx.shape)
        if box is not None:
            cx = np.clip(cx, -box, box)
            if move_y:
                cy = np.clip(cy, -box, box)
        with np.errstate(all="ignore"):
            vals = score(cx, cy)
        vals = np.where(np.isfinite(vals), vals, np.inf)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best, x, y = float(vals[k]), cx[k].copy(), np.array(cy[k])
            step *= 1.3
        else:
            step *= 0.6
    return x, y, best


def _anchor_values(op, anchors, cap=16):
    """Anchor points paired with every enumerated element of ``op`` there."""
    out = []
    for a in anchors:
        a = np.asarray(a, dtype=float)
        lo, hi = op.value_bounds(a)
        axes = [(l,) if l == h else (l, h) for l, h in zip(lo, hi)]
        for corner in itertools.islice(itertools.product(*axes), cap):
            out.append((a, np.array(corner)))
    return out


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class ConditionReport:
    condition: str
    verdict: str
    samples: int
    constants: dict = field(default_factory=dict)
    witness: Optional[dict] = None
    notes: str = ""
    operator: Optional[OperatorHandle] = field(default=None, repr=False, compare=False)

    @property
    def holds_empirically(self):
        return self.verdict == "no-violation-found"

    def reproduce(self):
        """Re-evaluate the witness; ``True`` if it still shows the violation."""
        if self.witness is None:
            return False
        return reproduce_witness(self.operator, self.witness)[0]

    def to_dict(self):
        return {"condition": self.condition, "verdict": self.verdict, "samples": self.samples,
                "constants": _jsonable(self.constants), "witness": _jsonable(self.witness),
                "notes": self.notes}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _threshold(du2, dx2):
    return ABS_TOL + REL_TOL * np.sqrt(du2 * dx2)


def reproduce_witness(op, witness):
    """Recompute a witness; returns ``(still_violated, recomputed_value)``."""
    kind = witness["kind"]
    if kind in ("monotonicity", "restricted"):
        x, y = np.asarray(witness["x"]), np.asarray(witness["y"])
        u_y = np.asarray(witness["u_y"]) if "u_y" in witness else op(y[None])[0]
        du, dx = op(x[None])[0] - u_y, x - y
        inner = float(du @ dx)
        margin = inner - witness.get("modulus", 0.0) * float(dx @ dx)
        if witness.get("strict"):
            return margin <= _threshold(du @ du, dx @ dx), inner
        return margin < -_threshold(du @ du, dx @ dx), inner
    if kind == "lipschitz-growth":
        ratios = [_ratio(op, np.asarray(p["x"]), np.asarray(p["y"])) for p in witness["pairs"]]
        return _growth_flag(witness["scales"], ratios, witness["criterion"]), ratios
    if kind == "inverse-product":
        return float(witness["R_hat"]) * float(witness["nu_hat"]) >= 1.0, witness["R_hat"] * witness["nu_hat"]
    if kind == "cocoercivity":
        x, y = np.asarray(witness["x"]), np.asarray(witness["y"])
        du, dx = op(x[None])[0] - op(y[None])[0], x - y
        inner = float(du @ dx)
        return inner <= _threshold(du @ du, dx @ dx), inner
    raise ValueError(f"unknown witness kind {kind!r}")


def _ratio(op, x, y):
    du = op(x[None])[0] - op(y[None])[0]
    return float(np.linalg.norm(du) / np.linalg.norm(x - y))


def _growth_flag(scales, ratios, criterion):
    if criterion == "slope":
        if ratios[0] <= 0:
            return ratios[-1] > 0
        return math.log(ratios[-1] / ratios[0]) / math.log(scales[-1] / scales[0]) > GROWTH_SLOPE
    return ratios[-1] > JUMP_FACTOR * ratios[0]


# ---------------------------------------------------------------------------
# Checkers
# ---------------------------------------------------------------------------

def _modulus_for(cls, mu, nu):
    return {"monotone": 0.0, "strict": 0.0, "strong": mu, "hypo": -nu}[cls]


def check_monotonicity_class(op: OperatorHandle, cls="monotone", sampler=Sampler(), mu=0.0, nu=0.0,
                             anchors=None, condition="") -> ConditionReport:
    """Test ``<op(x) - op(y), x - y> >= c |x - y|^2`` on sampled pairs.

    ``cls`` is ``monotone`` (c = 0), ``strong`` (c = mu), ``hypo``
    (c = -nu) or ``strict`` (> 0).  ``constants["modulus"]`` is the empirical
    minimum of ``<du, dx> / |dx|^2``.
    """
    c = _modulus_for(cls, mu, nu)
    X, Y = sampler.pairs(op.dim, anchors, salt=11)
    with np.errstate(all="ignore"):
        U, V = op(X), op(Y)
    inner, du2, dx2 = kernels.pair_products(U - V, X - Y)
    ok = dx2 > 0
    ratio = np.where(ok, inner / np.where(ok, dx2, 1.0), np.inf)

    def score(a, b):
        pi, _, pd = kernels.pair_products(op(a) - op(b), a - b)
        return pi / pd

    k = int(np.argmin(ratio))
    px, py, pr = _polish(score, X[k], Y[k], sampler.rng(12), sampler.polish_rounds, sampler.box)
    modulus = min(float(ratio[k]), pr)
    margins = inner - c * dx2
    thr = _threshold(du2, dx2)
    bad = (margins <= thr) if cls == "strict" else (margins < -thr)
    bad &= ok
    witness = None
    if bad.any():
        j = int(np.argmin(np.where(bad, margins / np.where(ok, dx2, 1.0), np.inf)))
        wx, wy = X[j], Y[j]
    else:
        du = op(px[None])[0] - op(py[None])[0]
        dxp = px - py
        m = float(du @ dxp) - c * float(dxp @ dxp)
        t = _threshold(du @ du, dxp @ dxp)
        wx = wy = None
        if (m <= t) if cls == "strict" else (m < -t):
            wx, wy = px, py
    if wx is not None:
        du = op(wx[None])[0] - op(wy[None])[0]
        witness = {"kind": "monotonicity", "x": wx, "y": wy, "inner": float(du @ (wx - wy)),
                   "modulus": c, "strict": cls == "strict"}
    rep = ConditionReport(condition or f"{cls}-monotone", "violated" if witness else "no-violation-found",
                          sampler.samples, {"modulus": modulus}, witness, operator=op)
    return rep


def check_restricted_monotone(op: OperatorHandle, anchors, sampler=Sampler(), mu=0.0,
                              condition="") -> ConditionReport:
    """Test ``<op(x) - u*, x - x*> >= mu |x - x*|^2`` for anchors ``x*``.

    Every enumerated element ``u*`` of a set-valued ``op(x*)`` is tested.
    """
    if anchors is None or len(anchors) == 0:
        return ConditionReport(condition or "restricted-monotone", "inapplicable", 0,
                               notes="empty anchor set", operator=op)
    X = sampler.points(op.dim, anchors, salt=21)
    with np.errstate(all="ignore"):
        U = op(X)
    worst = None
    min_ratio = math.inf
    for a, ua in _anchor_values(op, anchors):
        DX = X - a
        inner, du2, dx2 = kernels.pair_products(U - ua, DX)
        ok = dx2 > 0
        ratio = np.where(ok, inner / np.where(ok, dx2, 1.0), np.inf)
        k = int(np.argmin(ratio))

        def score(p, q, ua=ua, a=a):
            pi, _, pd = kernels.pair_products(op(p) - ua, p - a)
            return pi / pd

        px, _, pr = _polish(score, X[k], a, sampler.rng(22), sampler.polish_rounds, sampler.box,
                            move_y=False)
        min_ratio = min(min_ratio, float(ratio[k]), pr)
        margins = inner - mu * dx2
        bad = ok & (margins < -_threshold(du2, dx2))
        cand = None
        if bad.any():
            j = int(np.argmin(np.where(bad, margins / np.where(ok, dx2, 1.0), np.inf)))
            cand = (X[j], float(margins[j] / dx2[j]))
        else:
            du = op(px[None])[0] - ua
            d = px - a
            m = float(du @ d) - mu * float(d @ d)
            if m < -_threshold(du @ du, d @ d):
                cand = (px, m / float(d @ d))
        if cand is not None and (worst is None or cand[1] < worst[0]):
            x = cand[0]
            worst = (cand[1], {"kind": "restricted", "x": x, "y": a, "u_y": ua,
                               "inner": float((op(x[None])[0] - ua) @ (x - a)), "modulus": mu})
    witness = None if worst is None else worst[1]
    return ConditionReport(condition or "restricted-monotone",
                           "violated" if witness else "no-violation-found", sampler.samples,
                           {"modulus": min_ratio}, witness, operator=op)


def estimate_lipschitz(op: OperatorHandle, sampler=Sampler(), radii=(1, 2, 4, 8, 16),
                       local_steps=(1e-1, 1e-2, 1e-3), local_samples=20_000):
    """Sampled Lipschitz moduli over a radius ladder, plus a local jump probe.

    ``ell_hat[r]`` is the largest ``|du| / |dx|`` for pairs in ``[-r, r]^d``.
    Globally non-Lipschitz behavior is flagged when ``ell_hat`` grows with
    ``r`` (log-log slope above ``GROWTH_SLOPE``); discontinuities when the
    local ratio jumps by ``JUMP_FACTOR`` as the pair separation shrinks.
    """
    radii = tuple(float(r) for r in radii)
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radius ladder must be strictly increasing")

    def score(a, b):
        _, du2, dx2 = kernels.pair_products(op(a) - op(b), a - b)
        return -np.sqrt(du2 / dx2)

    ell, pairs = [], []
    for s, r in enumerate(radii):
        sub = Sampler(box=r, samples=sampler.samples // len(radii), seed=sampler.seed,
                      anchor_fraction=0.0, local_fraction=sampler.local_fraction,
                      local_radius=sampler.local_radius * r)
        X, Y = sub.pairs(op.dim, salt=31 + s)
        with np.errstate(all="ignore"):
            _, du2, dx2 = kernels.pair_products(op(X) - op(Y), X - Y)
        rat = np.sqrt(du2 / np.where(dx2 > 0, dx2, np.inf))
        k = int(np.argmax(rat))
        px, py, pv = _polish(score, X[k], Y[k], sampler.rng(40 + s), sampler.polish_rounds, r)
        if -pv > rat[k]:
            ell.append(-pv)
            pairs.append({"x": px, "y": py})
        else:
            ell.append(float(rat[k]))
            pairs.append({"x": X[k], "y": Y[k]})
    growth = _growth_flag(radii, [ell[0], ell[-1]], "slope") if ell[-1] > 0 else False
    slope = (math.log(ell[-1] / ell[0]) / math.log(radii[-1] / radii[0])) if ell[0] > 0 and ell[-1] > 0 else 0.0

    rng = sampler.rng(50)
    local, lpairs = [], []
    base = rng.uniform(-sampler.box, sampler.box, size=(local_samples, op.dim))
    dirs = rng.normal(size=(local_samples, op.dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    for h in local_steps:
        Y = base + h * dirs
        with np.errstate(all="ignore"):
            _, du2, dx2 = kernels.pair_products(op(base) - op(Y), base - Y)
        rat = np.sqrt(du2 / dx2)
        k = int(np.argmax(rat))
        local.append(float(rat[k]))
        lpairs.append({"x": base[k], "y": Y[k]})
    jumps = [j for j in range(len(local) - 1)
             if local[j + 1] > JUMP_FACTOR * max(local[j], 1e-300)]
    out = {"radii": list(radii), "ell_hat": ell, "slope": slope, "non_lipschitz": bool(growth),
           "local_steps": list(local_steps), "local_ell": local, "discontinuous": bool(jumps),
           "ell": max(ell)}
    if growth:
        out["witness"] = {"kind": "lipschitz-growth", "criterion": "slope",
                          "scales": [radii[0], radii[-1]], "pairs": [pairs[0], pairs[-1]],
                          "ratios": [ell[0], ell[-1]]}
    elif jumps:
        j = jumps[0]
        out["witness"] = {"kind": "lipschitz-growth", "criterion": "jump",
                          "scales": [local_steps[j], local_steps[j + 1]],
                          "pairs": [lpairs[j], lpairs[j + 1]], "ratios": [local[j], local[j + 1]]}
    return out


def estimate_cocoercivity_inverse_lipschitz(op: OperatorHandle, sampler=Sampler()):
    """``beta_hat = min <dx, du>/|du|^2``, ``R_hat = max |dx|/|du|`` and
    ``nu_hat = max(0, -min <du, dx>/|dx|^2)`` over sampled pairs.

    Pairs with ``|du| < 1e-14`` are skipped in the ratios over ``|du|``.
    """
    X, Y = sampler.pairs(op.dim, salt=61)
    with np.errstate(all="ignore"):
        DU = op(X) - op(Y)
    inner, du2, dx2 = kernels.pair_products(DU, X - Y)
    valid = du2 > 1e-28
    if not valid.any():
        return {"beta_hat": math.inf, "R_hat": math.inf, "nu_hat": 0.0, "skipped": int(X.shape[0])}
    beta = np.where(valid, inner / np.where(valid, du2, 1.0), np.inf)
    rinv = np.where(valid, np.sqrt(dx2 / np.where(valid, du2, 1.0)), -np.inf)
    hypo = np.where(dx2 > 0, inner / np.where(dx2 > 0, dx2, 1.0), np.inf)
    rng = sampler.rng(62)

    def f_beta(a, b):
        pi, pu, _ = kernels.pair_products(op(a) - op(b), a - b)
        return np.where(pu > 1e-28, pi / pu, np.inf)

    def f_r(a, b):
        _, pu, pd = kernels.pair_products(op(a) - op(b), a - b)
        return np.where(pu > 1e-28, -np.sqrt(pd / pu), np.inf)

    def f_hypo(a, b):
        pi, _, pd = kernels.pair_products(op(a) - op(b), a - b)
        return pi / pd

    kb, kr, kh = int(np.argmin(beta)), int(np.argmax(rinv)), int(np.argmin(hypo))
    bx, by, bv = _polish(f_beta, X[kb], Y[kb], rng, sampler.polish_rounds, sampler.box)
    _, _, rv = _polish(f_r, X[kr], Y[kr], rng, sampler.polish_rounds, sampler.box)
    _, _, hv = _polish(f_hypo, X[kh], Y[kh], rng, sampler.polish_rounds, sampler.box)
    beta_hat = min(float(beta[kb]), bv)
    if beta_hat == bv:
        wx, wy = bx, by
    else:
        wx, wy = X[kb], Y[kb]
    return {"beta_hat": beta_hat, "R_hat": max(float(rinv[kr]), -rv),
            "nu_hat": max(0.0, -min(float(hypo[kh]), hv)), "skipped": int((~valid).sum()),
            "beta_pair": {"x": wx, "y": wy}}


# ---------------------------------------------------------------------------
# Implication graph and triviality witnesses
# ---------------------------------------------------------------------------

class ImplicationGraph:
    """Implications among C1-C10 and their transitive closure."""

    edges = PRODUCT_EDGES

    def __init__(self, edges=PRODUCT_EDGES):
        self.edges = tuple(edges)
        reach = {c: set() for c in CONDITIONS}
        for a, b in self.edges:
            reach[a].add(b)
        changed = True
        while changed:
            changed = False
            for a in CONDITIONS:
                new = set().union(*(reach[b] for b in reach[a])) - reach[a]
                if new:
                    reach[a] |= new
                    changed = True
        self.closure = {a: frozenset(b for b in reach[a] if b != a) for a in CONDITIONS}

    def implies(self, a, b):
        return b in self.closure[a]

    def inconsistencies(self, verdicts):
        """Pairs ``(a, b)`` with ``a`` holding empirically while its consequence ``b`` is violated."""
        return [(a, b) for a in CONDITIONS for b in sorted(self.closure[a], key=CONDITIONS.index)
                if verdicts.get(a) == "no-violation-found" and verdicts.get(b) == "violated"]


def triviality_witness_C1(game: Game, sampler=Sampler(), tol=1e-8):
    """Find ``(i, x_i, x_{-i}, x'_{-i})`` where ``d_{x_i} f_i`` changes with ``x_{-i}``.

    Such a witness means C1 cannot hold for a continuous single-valued ``F``.
    """
    rng = sampler.rng(71)
    M = min(sampler.samples, 10_000)
    for i, (d, cost) in enumerate(zip(game.dims, game.costs)):
        xi = rng.uniform(-sampler.box, sampler.box, size=(M, d))
        z1 = rng.uniform(-sampler.box, sampler.box, size=(M, game.n - d))
        z2 = rng.uniform(-sampler.box, sampler.box, size=(M, game.n - d))
        diff = np.linalg.norm(cost.partial_subgradient(xi, z1) - cost.partial_subgradient(xi, z2), axis=1)
        k = int(np.argmax(diff))
        if diff[k] > tol:
            return {"agent": i, "x_i": xi[k], "x_minus_i": z1[k], "x_minus_i_alt": z2[k],
                    "difference": float(diff[k])}
    return None


def triviality_witness_C2(game: Game, x_star, sampler=Sampler(), tol=1e-8):
    """Find ``(i, x_{-i})`` with ``d_{x_i} f_i(x*_i, x_{-i}) != d_{x_i} f_i(x*_i, x*_{-i})``.

    A witness means the equilibrium strategies are not dominant, so C2
    fails for a continuous single-valued ``F``.
    """
    rng = sampler.rng(72)
    M = min(sampler.samples, 10_000)
    x_star = np.asarray(x_star, dtype=float)
    for i, (d, cost) in enumerate(zip(game.dims, game.costs)):
        xi, rest = game.split(x_star, i)
        z = rng.uniform(-sampler.box, sampler.box, size=(M, game.n - d))
        ref = cost.partial_subgradient(xi, rest)
        diff = np.linalg.norm(cost.partial_subgradient(np.broadcast_to(xi, (M, d)), z) - ref, axis=1)
        k = int(np.argmax(diff))
        if diff[k] > tol:
            return {"agent": i, "x_minus_i": z[k], "difference": float(diff[k])}
    return None


# ---------------------------------------------------------------------------
# Full taxonomy
# ---------------------------------------------------------------------------

@dataclass
class TaxonomyResult:
    reports: dict
    consistent: bool
    inconsistencies: list
    anchors: list
    lipschitz: dict
    inverse: dict
    trivial_C1: Optional[dict]
    trivial_C2: Optional[dict]
    game: str = ""

    def verdicts(self):
        return {c: r.verdict for c, r in self.reports.items()}

    def to_dict(self):
        return _jsonable({
            "game": self.game,
            "conditions": {c: r.to_dict() for c, r in self.reports.items()},
            "dag_consistent": self.consistent,
            "inconsistencies": self.inconsistencies,
            "anchors": self.anchors,
            "lipschitz": {k: v for k, v in self.lipschitz.items() if k != "witness"},
            "inverse": {k: v for k, v in self.inverse.items() if k != "beta_pair"},
            "triviality_witness_C1": self.trivial_C1,
            "triviality_witness_C2": self.trivial_C2,
        })

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)

    def table(self):
        lines = [f"{'condition':<10} {'verdict':<20} constants", "-" * 60]
        for c, r in self.reports.items():
            consts = ", ".join(f"{k}={_fmt(v)}" for k, v in r.constants.items())
            lines.append(f"{c:<10} {r.verdict:<20} {consts}")
        lines.append(f"DAG consistent: {self.consistent}")
        return "\n".join(lines)


def _fmt(v):
    return f"{v:.4g}" if isinstance(v, (float, int, np.floating)) and v is not None else str(v)


def _lipschitz_violation(cond, lip, op, samples):
    return ConditionReport(cond, "violated", samples, {"ell": lip["ell"]}, lip["witness"],
                           notes="F is empirically not Lipschitz", operator=op)


def taxonomy_report(game: Game, net: Network, alpha_grid=(1.0, 0.5, 0.1, 0.05, 0.01),
                    sampler=Sampler(), anchors=None) -> TaxonomyResult:
    """Run the checkers for C1-C10 and test the verdicts against the implication graph.

    ``anchors`` are Nash equilibria in ``R^n``; by default one is computed
    with :func:`brute_force_ne`.
    """
    if anchors is None:
        anchors = [brute_force_ne(game).x_star]
    anchors = [np.asarray(a, dtype=float) for a in anchors]
    lifted = [consensus_vector(a, game.N) for a in anchors]
    RtF = lifted_extended_mapping(game)
    F = game_mapping(game)
    M = sampler.samples
    reports = {}

    reports["C1"] = check_monotonicity_class(RtF, "monotone", sampler, anchors=lifted, condition="C1")
    reports["C2"] = check_restricted_monotone(RtF, lifted, sampler, condition="C2")

    for cond, check in (("C3", "plain"), ("C4", "restricted")):
        last = None
        for alpha in sorted(alpha_grid, reverse=True):
            op = augmented_F(game, net, alpha)
            if check == "plain":
                rep = check_monotonicity_class(op, "monotone", sampler, anchors=lifted, condition=cond)
            else:
                rep = check_restricted_monotone(op, lifted, sampler, condition=cond)
            rep.constants["alpha_used"] = alpha
            last = rep
            if rep.holds_empirically:
                break
        reports[cond] = last

    lip = estimate_lipschitz(F, sampler)
    lip_ok = not (lip["non_lipschitz"] or lip["discontinuous"])
    inv = estimate_cocoercivity_inverse_lipschitz(F, sampler)
    strong = check_monotonicity_class(F, "monotone", sampler, anchors=anchors, condition="F")
    mu_hat = strong.constants["modulus"]
    ell = lip["ell"]
    mu_floor = 1e-6 * max(ell, 1.0)

    restricted = check_restricted_monotone(F, anchors, sampler, mu=0.0, condition="C5")
    mu_r = restricted.constants["modulus"]
    if not lip_ok:
        reports["C5"] = _lipschitz_violation("C5", lip, F, M)
        reports["C6"] = _lipschitz_violation("C6", lip, F, M)
    else:
        rep5 = check_restricted_monotone(F, anchors, sampler, mu=mu_floor, condition="C5")
        rep5.constants.update({"mu": mu_r, "ell": ell})
        reports["C5"] = rep5
        rep6 = check_monotonicity_class(F, "strong", sampler, mu=mu_floor, anchors=anchors, condition="C6")
        rep6.constants.update({"mu": mu_hat, "ell": ell})
        reports["C6"] = rep6

    nu, R_hat = inv["nu_hat"], inv["R_hat"]
    if not lip_ok:
        reports["C7"] = _lipschitz_violation("C7", lip, F, M)
    elif not (R_hat * nu < 1.0):
        reports["C7"] = ConditionReport("C7", "violated", M, {"nu": nu, "ell": ell, "R_inv": R_hat},
                                        {"kind": "inverse-product", "R_hat": R_hat, "nu_hat": nu},
                                        notes="R nu >= 1", operator=F)
    else:
        reports["C7"] = ConditionReport("C7", "no-violation-found", M,
                                        {"nu": nu, "ell": ell, "R_inv": R_hat}, operator=F)

    if not lip_ok:
        reports["C8"] = _lipschitz_violation("C8", lip, F, M)
    else:
        rep8 = check_monotonicity_class(F, "strict", sampler, anchors=anchors, condition="C8")
        rep8.constants["ell"] = ell
        reports["C8"] = rep8

    beta = inv["beta_hat"]
    if not lip_ok:
        reports["C9"] = _lipschitz_violation("C9", lip, F, M)
    else:
        pair = inv["beta_pair"]
        x, y = np.asarray(pair["x"]), np.asarray(pair["y"])
        du = F(x[None])[0] - F(y[None])[0]
        inner = float(du @ (x - y))
        if inner <= _threshold(du @ du, (x - y) @ (x - y)):
            reports["C9"] = ConditionReport("C9", "violated", M, {"beta": beta},
                                            {"kind": "cocoercivity", "x": x, "y": y, "inner": inner},
                                            operator=F)
        else:
            reports["C9"] = ConditionReport("C9", "no-violation-found", M, {"beta": beta, "ell": ell},
                                            operator=F)

    if not lip_ok:
        reports["C10"] = _lipschitz_violation("C10", lip, F, M)
    else:
        rep10 = check_monotonicity_class(F, "monotone", sampler, anchors=anchors, condition="C10")
        rep10.constants["ell"] = ell
        reports["C10"] = rep10

    graph = ImplicationGraph()
    verdicts = {c: r.verdict for c, r in reports.items()}
    bad = graph.inconsistencies(verdicts)
    inconsistencies = [{"premise": a, "consequence": b,
                        "premise_witness": reports[a].witness, "consequence_witness": reports[b].witness,
                        "diagnosis": "checker bug or insufficient sampling"} for a, b in bad]
    return TaxonomyResult(reports, not bad, inconsistencies, [a.tolist() for a in anchors], lip, inv,
                          triviality_witness_C1(game, sampler), triviality_witness_C2(game, anchors[0], sampler),
                          game=game.name)
