"""Residuals of the (pseudo-)additivity rules and entropic chain rules.

A residual is LHS - RHS of the identity on one input; zero within
tolerance certifies the identity there.  Functions accept either an
:class:`EntropySpec` or any object with ``entropy(p)`` and
``conditional(j, given)`` methods (e.g. a Darotzy transform).
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .conditional import conditional
from .deformed import near_one
from .errors import InvalidParameters, NegativeEntropyForDeltaRule
from .families import EntropySpec, entropy
from .prob import JointTable, ProbVector, marginal, product_join

RULE_KINDS = (
    "additive",
    "tsallis_add",
    "landsberg_add",
    "delta_add",
    "additive_chain",
    "q_extensive_chain",
)
_ADDITIVITY = RULE_KINDS[:4]


@dataclass(frozen=True)
class RuleSpec:
    kind: str
    q: Optional[float] = None
    delta: Optional[float] = None

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise InvalidParameters(f"unknown rule {self.kind!r}")
        if self.kind in ("tsallis_add", "landsberg_add", "q_extensive_chain"):
            if self.q is None or not math.isfinite(self.q):
                raise InvalidParameters(f"{self.kind} needs a finite q")
        if self.kind == "delta_add":
            if self.delta is None or not self.delta > 0:
                raise InvalidParameters("delta_add needs delta > 0")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _H(measure, p) -> float:
    if isinstance(measure, EntropySpec):
        return entropy(measure, p)
    return measure.entropy(p)


def _cond(measure, j, given) -> float:
    if isinstance(measure, EntropySpec):
        return conditional(measure, j, given)
    return measure.conditional(j, given)


def pseudo_add_residual(spec, px: ProbVector, py: ProbVector, rule: RuleSpec) -> float:
    if rule.kind not in _ADDITIVITY:
        raise InvalidParameters(f"{rule.kind} is not an additivity rule")
    hxy = _H(spec, product_join(px, py).flatten())
    hx, hy = _H(spec, px), _H(spec, py)
    if rule.kind == "additive":
        return hxy - hx - hy
    if rule.kind == "tsallis_add":
        return hxy - hx - hy - (1.0 - rule.q) * hx * hy
    if rule.kind == "landsberg_add":
        return hxy - hx - hy - (rule.q - 1.0) * hx * hy
    if min(hxy, hx, hy) < 0:
        raise NegativeEntropyForDeltaRule("delta-additivity needs nonnegative entropies")
    e = 1.0 / rule.delta
    return hxy**e - hx**e - hy**e


def chain_residual(spec, j: JointTable, rule: RuleSpec, given="x") -> float:
    """H(X,Y) - H(G) - H(O|G) [- (1-q) H(G) H(O|G)], G the conditioning variable.

    With the default ``given='x'`` this is the textbook
    H(X,Y) = H(X) + H(Y|X).
    """
    if rule.kind not in ("additive_chain", "q_extensive_chain"):
        raise InvalidParameters(f"{rule.kind} is not a chain rule")
    hxy = _H(spec, j.flatten())
    hg = _H(spec, marginal(j, given))
    hc = _cond(spec, j, given)
    res = hxy - hg - hc
    if rule.kind == "q_extensive_chain":
        res -= (1.0 - rule.q) * hg * hc
    return res


def q_extensive_sum(terms: Sequence[float], q: float) -> float:
    """Compose entropies with x + y + (1-q)xy, via the product form."""
    t = np.asarray(terms, dtype=np.float64)
    if near_one(q):
        return float(t.sum())
    k = 1.0 - q
    return float((np.prod(1.0 + k * t) - 1.0) / k)


def q_extensive_sum_expanded(terms: Sequence[float], q: float) -> float:
    """Same composition written as sum_k (1-q)^(k-1) e_k(terms)."""
    t = [float(v) for v in terms]
    k = 1.0 - q
    total = 0.0
    for size in range(1, len(t) + 1):
        e = sum(math.prod(c) for c in itertools.combinations(t, size))
        total += k ** (size - 1) * e
    return total


def sequential_conditionals(spec, j: JointTable) -> list[float]:
    """H(X_1), H(X_2|X_1), ..., H(X_n|X_{n-1},...,X_1) for axes in order.

    Each history X_1..X_{i-1} is flattened into one conditioning variable,
    so escort weights come from the joint history distribution.
    """
    cells = np.asarray(j.cells)
    n = cells.ndim
    out = [_H(spec, ProbVector(cells.sum(axis=tuple(range(1, n)))))]
    for i in range(1, n):
        m = cells.sum(axis=tuple(range(i + 1, n))) if i + 1 < n else cells
        table = JointTable(m.reshape(-1, cells.shape[i]))
        out.append(_cond(spec, table, "x"))
    return out


def n_chain_residual(spec, j: JointTable, q: float) -> float:
    if j.ndim < 2:
        raise InvalidParameters("n-partite chain rule needs n >= 2")
    return _H(spec, j.flatten()) - q_extensive_sum(sequential_conditionals(spec, j), q)


def phi_factor(h: float, q: float) -> float:
    return 1.0 + (1.0 - q) * h


def bayes_residual(spec, j: JointTable, q: float) -> float:
    """Phi(X) H(Y|X) - H(Y) + H(X) - Phi(Y) H(X|Y), Phi = 1 + (1-q)H."""
    hx = _H(spec, marginal(j, "x"))
    hy = _H(spec, marginal(j, "y"))
    h_y_given_x = _cond(spec, j, "x")
    h_x_given_y = _cond(spec, j, "y")
    return phi_factor(hx, q) * h_y_given_x - hy + hx - phi_factor(hy, q) * h_x_given_y


def mutual_information(spec, j: JointTable) -> float:
    return _H(spec, marginal(j, "x")) + _H(spec, marginal(j, "y")) - _H(spec, j.flatten())


def array_digest(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(np.asarray(a, dtype="<f8"))
        h.update(repr(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]


@dataclass
class ResidualRecord:
    rule: str
    family: str
    parameters: dict
    input_digest: str
    residual: float
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        if not d["extra"]:
            del d["extra"]
        return json.dumps(d, sort_keys=True)


def _measure_info(measure) -> tuple[str, dict]:
    if isinstance(measure, EntropySpec):
        d = measure.to_dict()
        return d.pop("family"), d
    return measure.label(), measure.to_dict()


def chain_sweep(measure, joints: Iterable[JointTable], rule: RuleSpec, given="x") -> list[ResidualRecord]:
    family, params = _measure_info(measure)
    params = {**params, "rule": rule.to_dict(), "given": given}
    return [
        ResidualRecord(rule.kind, family, params, array_digest(j.cells), chain_residual(measure, j, rule, given))
        for j in joints
    ]


def additivity_sweep(measure, pairs, rule: RuleSpec) -> list[ResidualRecord]:
    family, params = _measure_info(measure)
    params = {**params, "rule": rule.to_dict()}
    return [
        ResidualRecord(rule.kind, family, params, array_digest(px.weights, py.weights),
                       pseudo_add_residual(measure, px, py, rule))
        for px, py in pairs
    ]


def write_jsonl(records: Iterable[ResidualRecord], fh) -> int:
    n = 0
    for rec in records:
        fh.write(rec.to_json() + "\n")
        n += 1
    return n


def read_jsonl(fh) -> list[ResidualRecord]:
    return [ResidualRecord(**json.loads(line)) for line in fh if line.strip()]
