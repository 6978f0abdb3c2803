"""Deformed logarithm/exponential and Kolmogorov-Nagumo quasi-linear means."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import CutoffViolation, DomainViolation, InvalidParameters, NonPositiveArgument

EPS_LIMIT = 1e-9
LN2 = math.log(2.0)


def near_one(v: float) -> bool:
    return abs(1.0 - v) <= EPS_LIMIT


def _out(a: np.ndarray):
    return float(a) if a.ndim == 0 else a


def q_log(x, q: float):
    """Deformed logarithm (x^(1-q) - 1)/(1-q); natural log at q = 1."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise NonPositiveArgument("q_log needs x > 0")
    if near_one(q):
        return _out(np.log(x))
    k = 1.0 - q
    return _out(np.expm1(k * np.log(x)) / k)


def q_exp(x, q: float):
    """Deformed exponential [1 + (1-q)x]^(1/(1-q)); the inverse of :func:`q_log`."""
    x = np.asarray(x, dtype=np.float64)
    if near_one(q):
        return _out(np.exp(x))
    k = 1.0 - q
    base = 1.0 + k * x
    if np.any(base <= 0):
        raise CutoffViolation(f"1 + (1-q)x must be positive (q={q})")
    return _out(np.exp(np.log1p(k * x) / k))


def _cutoff_domain(k: float) -> tuple[float, float]:
    # open interval where 1 + k x > 0
    if k > 0:
        return (-1.0 / k, math.inf)
    if k < 0:
        return (-math.inf, -1.0 / k)
    return (-math.inf, math.inf)


@dataclass(frozen=True)
class KNFunction:
    """Generator pair (phi, phi^-1) of a quasi-linear mean."""

    tag: str
    phi: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    inverse: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    domain: tuple[float, float] = (-math.inf, math.inf)
    params: dict = field(default_factory=dict)

    def contains(self, values) -> bool:
        v = np.asarray(values, dtype=np.float64)
        lo, hi = self.domain
        return bool(np.all(np.isfinite(v)) and np.all(v > lo) and np.all(v < hi))

    def __call__(self, x):
        return _out(np.asarray(self.phi(np.asarray(x, dtype=np.float64))))


def _linear() -> KNFunction:
    ident = lambda x: np.asarray(x, dtype=np.float64)
    return KNFunction("linear", ident, ident)


def _renyi(q: float) -> KNFunction:
    if near_one(q):
        kn = _linear()
        return KNFunction("renyi", kn.phi, kn.inverse, kn.domain, {"q": q})
    k = 1.0 - q
    return KNFunction(
        "renyi",
        lambda x: np.exp2(k * x),
        lambda y: np.log2(y) / k,
        (-math.inf, math.inf),
        {"q": q},
    )


def _fd(q: float, r: float) -> KNFunction:
    # phi = log_r(e_q^x): maps an FD slice value to the Tsallis-r value of the slice
    return KNFunction(
        "fd",
        lambda x: q_log(q_exp(x, q), r),
        lambda y: q_log(q_exp(y, r), q),
        _cutoff_domain(0.0 if near_one(q) else 1.0 - q),
        {"q": q, "r": r},
    )


def _sm(q: float, r: float) -> KNFunction:
    delta = 2.0 ** (1.0 - q) - 1.0

    def to_power_base(x):
        # t = (1 + delta x)^(1/(1-q)), so that t^(1-r) = (sum p^r) on a slice
        x = np.asarray(x, dtype=np.float64)
        if near_one(q):
            return np.exp2(x)
        return np.exp(np.log1p(delta * x) / (1.0 - q))

    def from_power_base(t):
        t = np.asarray(t, dtype=np.float64)
        if near_one(q):
            return np.log2(t)
        return np.expm1((1.0 - q) * np.log(t)) / delta

    return KNFunction(
        "sm",
        lambda x: q_log(to_power_base(x), r),
        lambda y: from_power_base(q_exp(y, r)),
        _cutoff_domain(0.0 if near_one(q) else delta),
        {"q": q, "r": r, "delta": delta},
    )


def _composed(base: KNFunction, darotzy) -> KNFunction:
    from .darotzy import h_map, h_range

    def phi(y):
        return base.phi(np.asarray(h_map(y, darotzy, "inverse"), dtype=np.float64))

    def inverse(z):
        return np.asarray(h_map(base.inverse(z), darotzy, "forward"), dtype=np.float64)

    lo, hi = base.domain
    with np.errstate(over="ignore", invalid="ignore"):
        ends = [h_map(lo, darotzy, "forward"), h_map(hi, darotzy, "forward")]
    rlo, rhi = h_range(darotzy)
    domain = (max(min(ends), rlo), min(max(ends), rhi))
    return KNFunction(
        "composed",
        phi,
        inverse,
        domain,
        {"base": base.tag, **base.params, "a": darotzy.a, "lam": darotzy.lam, "gamma": darotzy.gamma},
    )


def make_kn(tag: str, q: float | None = None, r: float | None = None, *, base=None, darotzy=None) -> KNFunction:
    """Build one of the generator pairs used by the conditional entropies.

    ``linear``, ``renyi(q)``, ``fd(q, r)``, ``sm(q, r)`` or
    ``composed(base, darotzy)`` (the generator ``base o h^-1``).
    """
    def need(name, v):
        if v is None or not math.isfinite(v):
            raise InvalidParameters(f"KN function {tag!r} needs a finite {name}")
        return float(v)

    if tag == "linear":
        return _linear()
    if tag == "renyi":
        return _renyi(need("q", q))
    if tag == "fd":
        return _fd(need("q", q), need("r", r))
    if tag == "sm":
        return _sm(need("q", q), need("r", r))
    if tag == "composed":
        if base is None or darotzy is None:
            raise InvalidParameters("composed KN function needs base and darotzy")
        return _composed(base, darotzy)
    raise InvalidParameters(f"unknown KN tag {tag!r}")


def kn_mean(values, weights, kn: KNFunction) -> float:
    """Quasi-linear mean phi^-1(sum_i w_i phi(v_i))."""
    v = np.asarray(values, dtype=np.float64).ravel()
    w = np.asarray(weights, dtype=np.float64).ravel()
    if v.shape != w.shape:
        raise InvalidParameters(f"{v.size} values but {w.size} weights")
    if not kn.contains(v):
        raise DomainViolation(f"values outside the {kn.tag} generator domain {kn.domain}")
    return float(kn.inverse(np.dot(w, kn.phi(v))))
