"""Sampling-based falsification of Landsberg's S / H / C properties.

S  superadditivity   H(X+Y) >= H(X) + H(Y)    (X+Y read as the independent composite)
H  homogeneity       H(lambda X) = lambda H(X) (lambda-fold independent copies)
C  concavity         H(t p + (1-t) p') >= t H(p) + (1-t) H(p')

A property either survives every sampled trial ("holds on samples") or
is reported with the first counterexample found.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import reduce
from typing import Optional

import numpy as np

from .families import EntropySpec, evaluate
from .prob import _dirichlet

PROPERTIES = ("S", "H", "C")
BAR = "̄"
IMPOSSIBLE = {"SHC̄", "S̄HC"}


@dataclass(frozen=True)
class SamplerConfig:
    trials: int = 1000
    seed: int = 0
    min_dim: int = 2
    max_dim: int = 6
    correlated: bool = False
    tol: float = 1e-9


@dataclass
class PropertyVerdict:
    prop: str
    holds: bool
    samples_used: int
    counterexample: Optional[dict] = None

    @property
    def status(self) -> str:
        return "holds-on-samples" if self.holds else "violated"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status
        return d


@dataclass
class ClassVerdict:
    spec: dict
    superadditive: PropertyVerdict
    homogeneous: PropertyVerdict
    concave: PropertyVerdict
    seed: int
    composition: str
    samples_used: int = 0
    class_label: str = ""
    ascii_label: str = ""
    impossible_class: bool = False
    expected_label: Optional[str] = None
    agrees_with_expected: Optional[bool] = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k not in ("superadditive", "homogeneous", "concave")}
        d["superadditive"] = self.superadditive.to_dict()
        d["homogeneous"] = self.homogeneous.to_dict()
        d["concave"] = self.concave.to_dict()
        return d


def _H(spec: EntropySpec, p) -> float:
    return float(evaluate(spec, np.asarray(p, dtype=np.float64)))


def _trial_rng(cfg: SamplerConfig, prop: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, PROPERTIES.index(prop), trial])


def _dim(rng, cfg):
    return int(rng.integers(cfg.min_dim, cfg.max_dim + 1))


def violation(spec: EntropySpec, prop: str, inputs: dict) -> float:
    """How far ``inputs`` breaks ``prop``; positive means violated.

    Used both inside the probes and to re-check stored counterexamples.
    """
    if prop == "S":
        if "joint" in inputs:
            j = np.asarray(inputs["joint"])
            return _H(spec, j.sum(axis=1)) + _H(spec, j.sum(axis=0)) - _H(spec, j.ravel())
        px, py = np.asarray(inputs["px"]), np.asarray(inputs["py"])
        return _H(spec, px) + _H(spec, py) - _H(spec, np.outer(px, py).ravel())
    if prop == "H":
        p, lam = np.asarray(inputs["p"]), int(inputs["lam"])
        copies = reduce(np.kron, [p] * lam)
        return abs(_H(spec, copies) - lam * _H(spec, p))
    if prop == "C":
        p, p2, t = np.asarray(inputs["p"]), np.asarray(inputs["p2"]), float(inputs["t"])
        return t * _H(spec, p) + (1 - t) * _H(spec, p2) - _H(spec, t * p + (1 - t) * p2)
    raise ValueError(f"unknown property {prop!r}")


def _sample(prop: str, rng: np.random.Generator, cfg: SamplerConfig) -> dict:
    if prop == "S":
        if cfg.correlated:
            a, b = _dim(rng, cfg), _dim(rng, cfg)
            return {"joint": _dirichlet(rng, a * b).reshape(a, b).tolist()}
        return {"px": _dirichlet(rng, _dim(rng, cfg)).tolist(), "py": _dirichlet(rng, _dim(rng, cfg)).tolist()}
    if prop == "H":
        n = _dim(rng, cfg)
        return {"p": _dirichlet(rng, n).tolist(), "lam": int(rng.integers(2, 4))}
    n = _dim(rng, cfg)
    return {"p": _dirichlet(rng, n).tolist(), "p2": _dirichlet(rng, n).tolist(), "t": float(rng.uniform(0.0, 1.0))}


def probe_property(spec: EntropySpec, prop: str, cfg: SamplerConfig = SamplerConfig()) -> PropertyVerdict:
    for trial in range(cfg.trials):
        inputs = _sample(prop, _trial_rng(cfg, prop, trial), cfg)
        v = violation(spec, prop, inputs)
        if v > cfg.tol:
            return PropertyVerdict(prop, False, trial + 1, {"trial": trial, "inputs": inputs, "violation": v})
    return PropertyVerdict(prop, True, cfg.trials)


def _label(s: bool, h: bool, c: bool) -> tuple[str, str]:
    uni = "".join(ch if ok else ch + BAR for ch, ok in zip("SHC", (s, h, c)))
    asc = "".join(ch if ok else "~" + ch for ch, ok in zip("SHC", (s, h, c)))
    return uni, asc


def expected_label(spec: EntropySpec) -> Optional[str]:
    # the only class assignment stated for a named family
    if spec.family == "ja" and spec.q < 1:
        return "SH̄C"
    return None


def classify(spec: EntropySpec, cfg: SamplerConfig = SamplerConfig()) -> ClassVerdict:
    s = probe_property(spec, "S", cfg)
    h = probe_property(spec, "H", cfg)
    c = probe_property(spec, "C", cfg)
    uni, asc = _label(s.holds, h.holds, c.holds)
    verdict = ClassVerdict(
        spec=spec.to_dict(),
        superadditive=s,
        homogeneous=h,
        concave=c,
        seed=cfg.seed,
        composition="correlated" if cfg.correlated else "independent",
        samples_used=s.samples_used + h.samples_used + c.samples_used,
        class_label=uni,
        ascii_label=asc,
        impossible_class=uni in IMPOSSIBLE,
    )
    exp = expected_label(spec)
    if exp is not None:
        verdict.expected_label = exp
        verdict.agrees_with_expected = exp == uni
    if cfg.correlated:
        verdict.notes.append("S probed on arbitrary (correlated) joints; Shannon is subadditive there")
    if cfg.trials == 0:
        verdict.notes.append("no trials run; every facet holds vacuously")
    return verdict
