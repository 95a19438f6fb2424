"""Generalized entropies of trace-plus-rescale form S(p) = h(sum_i f(p_i)).

A pair (h, f) fixes an entropy once it is anchored (h(f(1)) = 0, f(0) = 0)
and correctly shaped: concave f with increasing h, or convex f with
decreasing h, so that S is maximized at the uniform distribution.  The
classical families are all of this form:

    shannon            f = -t ln t,                    h = x
    renyi(alpha)       f = t^alpha,                    h = ln(x) / (1 - alpha)
    tsallis(q)         f = (t - t^q) / (q - 1),        h = x
    sharma_mittal(a,b) f = t^a,   h = (x^((1-b)/(1-a)) - 1) / (1 - b)
    kaniadakis(kappa)  f = (t^(1-kappa) - t^(1+kappa)) / (2 kappa),  h = x

Besides evaluation, this module checks the Shannon-Khinchin axioms on seeded
samples (`sk_suite`), and connects entropies to composition laws: if the raw
sums compose through some chi, sum_ij f(p_i q_j) = chi(sum f(p), sum f(q)),
then the entropy itself composes through Phi(x, y) = h(chi(h^-1 x, h^-1 y))
(`phi_from_chi`), and `composability_residual` measures how far a candidate
law is from that identity on concrete product distributions.

Conventions: 0 ln 0 = 0 by explicit branching, never by evaluating at 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AnchorViolation,
    DomainError,
    InversionFailure,
    ParamOutOfRange,
    ShapeMismatch,
)
from .formal_group import BinaryLaw, Interval, additive_law, q_sum
from .probability import ProbDist, product

#: Do not approach the removable singularities closer than this.
PARAM_GUARD = 1e-8

#: |h(f(1))| allowed at pair construction.
ANCHOR_TOL = 1e-12

#: S(p) >= -NONNEG_TOL for valid pairs.
NONNEG_TOL = 1e-12

_ENTROPY_PAIRINGS = {("concave", "increasing"), ("convex", "decreasing")}
_DIVERGENCE_PAIRINGS = {("convex", "increasing"), ("concave", "decreasing")}


def zero_preserving(raw: Callable) -> Callable:
    """Extend a map on positive reals to t = 0 with value exactly 0.

    Needed for integrands like t ln t whose naive evaluation at 0 is nan.
    The wrapper accepts scalars or arrays and never calls `raw` at or below 0.
    """

    def f(t):
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(arr.shape)
        pos = arr > 0.0
        if pos.any():
            out[pos] = raw(arr[pos])
        return float(out[0]) if np.ndim(t) == 0 else out

    return f


@dataclass(frozen=True)
class HFPair:
    """An anchored (h, f) pair with the derivative data geometry needs.

    `f` maps [0, inf) to the reals with f(0) = 0; `h` rescales the sum and
    must carry an explicit inverse (no root-finding happens at evaluation
    time) and its derivative.  df1, d2f1, d3f1 are f', f'', f''' at t = 1;
    built-in families fill them analytically, `custom_pair` by central
    differences.  `trace_form` marks h as the identity, which unlocks
    analytic gradients downstream.
    """

    name: str
    f: Callable
    h: Callable
    h_inverse: Callable
    h_prime: Callable
    df1: float
    d2f1: float
    d3f1: float
    f_shape: str
    h_direction: str
    f_prime: Callable | None = None
    trace_form: bool = False

    def __post_init__(self) -> None:
        if self.f_shape not in ("concave", "convex"):
            raise ShapeMismatch(f"f_shape must be 'concave' or 'convex', got {self.f_shape!r}")
        if self.h_direction not in ("increasing", "decreasing"):
            raise ShapeMismatch(
                f"h_direction must be 'increasing' or 'decreasing', got {self.h_direction!r}"
            )
        if float(self.f(0.0)) != 0.0:
            raise AnchorViolation(f"{self.name}: f(0) must be exactly 0")
        anchor = float(self.h(self.f1))
        if not abs(anchor) <= ANCHOR_TOL:
            raise AnchorViolation(f"{self.name}: h(f(1)) = {anchor:.3e}, must vanish")
        self._check_f_shape()
        self._check_h_direction()
        self._check_h_inverse()

    @property
    def f1(self) -> float:
        """f evaluated at 1 (the argument h must send to 0)."""
        return float(self.f(1.0))

    def _check_f_shape(self) -> None:
        t = np.linspace(0.1, 0.9, 9)
        d = 1e-3
        second = self.f(t + d) - 2.0 * np.asarray(self.f(t)) + self.f(t - d)
        if self.f_shape == "concave" and np.any(second > 1e-10):
            raise ShapeMismatch(f"{self.name}: f is not concave on (0, 1)")
        if self.f_shape == "convex" and np.any(second < -1e-10):
            raise ShapeMismatch(f"{self.name}: f is not convex on (0, 1)")

    def _check_h_direction(self) -> None:
        d = 1e-3
        step = float(self.h(self.f1 + d)) - float(self.h(self.f1 - d))
        if self.h_direction == "increasing" and step <= 0.0:
            raise ShapeMismatch(f"{self.name}: h is not increasing near f(1)")
        if self.h_direction == "decreasing" and step >= 0.0:
            raise ShapeMismatch(f"{self.name}: h is not decreasing near f(1)")

    def _check_h_inverse(self) -> None:
        xs = self.f1 + np.linspace(-0.4, 0.4, 5)
        back = self.h_inverse(self.h(xs))
        worst = float(np.max(np.abs(back - xs)))
        if not (np.all(np.isfinite(back)) and worst <= 1e-10):
            raise InversionFailure(
                f"{self.name}: h_inverse(h(x)) deviates by {worst:.3e} near f(1)"
            )


def require_entropy_shape(pair: HFPair) -> None:
    """Entropy role: concave f with increasing h, or convex f with decreasing h."""
    if (pair.f_shape, pair.h_direction) not in _ENTROPY_PAIRINGS:
        raise ShapeMismatch(
            f"{pair.name}: ({pair.f_shape} f, {pair.h_direction} h) cannot be an entropy"
        )


def require_divergence_shape(pair: HFPair) -> None:
    """Divergence role: the mirror pairing of the entropy one."""
    if (pair.f_shape, pair.h_direction) not in _DIVERGENCE_PAIRINGS:
        raise ShapeMismatch(
            f"{pair.name}: ({pair.f_shape} f, {pair.h_direction} h) cannot be a divergence"
        )


# --- built-in families ------------------------------------------------------


def shannon() -> HFPair:
    return HFPair(
        name="shannon",
        f=zero_preserving(lambda t: -t * np.log(t)),
        h=lambda x: x,
        h_inverse=lambda x: x,
        h_prime=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        df1=-1.0,
        d2f1=-1.0,
        d3f1=1.0,
        f_shape="concave",
        h_direction="increasing",
        f_prime=zero_preserving(lambda t: -np.log(t) - 1.0),
        trace_form=True,
    )


def renyi(alpha: float) -> HFPair:
    alpha = _checked(alpha, "alpha", forbid_one=True)
    a = alpha

    def h(x):
        return np.log(x) / (1.0 - a)

    return HFPair(
        name=f"renyi({alpha:g})",
        f=lambda t: np.power(t, a),
        h=h,
        h_inverse=lambda y: np.exp((1.0 - a) * np.asarray(y, dtype=float)),
        h_prime=lambda x: 1.0 / ((1.0 - a) * np.asarray(x, dtype=float)),
        df1=a,
        d2f1=a * (a - 1.0),
        d3f1=a * (a - 1.0) * (a - 2.0),
        f_shape="concave" if a < 1.0 else "convex",
        h_direction="increasing" if a < 1.0 else "decreasing",
        f_prime=lambda t: a * np.power(t, a - 1.0),
    )


def tsallis(q: float) -> HFPair:
    q = _checked(q, "q", forbid_one=True)

    return HFPair(
        name=f"tsallis({q:g})",
        f=lambda t: (t - np.power(t, q)) / (q - 1.0),
        h=lambda x: x,
        h_inverse=lambda x: x,
        h_prime=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        df1=-1.0,
        d2f1=-q,
        d3f1=-q * (q - 2.0),
        f_shape="concave",
        h_direction="increasing",
        f_prime=lambda t: (1.0 - q * np.power(t, q - 1.0)) / (q - 1.0),
        trace_form=True,
    )


def sharma_mittal(alpha: float, beta: float) -> HFPair:
    """The two-parameter family; beta -> 1 recovers Renyi, beta = alpha Tsallis."""
    alpha = _checked(alpha, "alpha", forbid_one=True)
    beta = _checked(beta, "beta", forbid_one=True, positive=False)
    a, b = alpha, beta
    r = (1.0 - b) / (1.0 - a)

    def h(x):
        # x^r written as expm1(r ln x) to stay exact through r -> 0 and r = 1.
        return np.expm1(r * np.log(x)) / (1.0 - b)

    def h_inverse(y):
        # 1 + (1-b) y <= 0 yields nan, which callers turn into DomainError
        with np.errstate(invalid="ignore"):
            return np.exp(np.log1p((1.0 - b) * np.asarray(y, dtype=float)) / r)

    def h_prime(x):
        return np.exp((r - 1.0) * np.log(x)) / (1.0 - a)

    return HFPair(
        name=f"sharma-mittal({alpha:g},{beta:g})",
        f=lambda t: np.power(t, a),
        h=h,
        h_inverse=h_inverse,
        h_prime=h_prime,
        df1=a,
        d2f1=a * (a - 1.0),
        d3f1=a * (a - 1.0) * (a - 2.0),
        f_shape="concave" if a < 1.0 else "convex",
        h_direction="increasing" if a < 1.0 else "decreasing",
        f_prime=lambda t: a * np.power(t, a - 1.0),
    )


def kaniadakis(kappa: float) -> HFPair:
    kappa = float(kappa)
    if not (math.isfinite(kappa) and PARAM_GUARD <= abs(kappa) < 1.0):
        raise ParamOutOfRange(
            f"kappa must satisfy {PARAM_GUARD:g} <= |kappa| < 1, got {kappa}"
        )
    k = kappa

    return HFPair(
        name=f"kaniadakis({kappa:g})",
        f=lambda t: (np.power(t, 1.0 - k) - np.power(t, 1.0 + k)) / (2.0 * k),
        h=lambda x: x,
        h_inverse=lambda x: x,
        h_prime=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        df1=-1.0,
        d2f1=-1.0,
        d3f1=1.0 - k * k,
        f_shape="concave",
        h_direction="increasing",
        f_prime=zero_preserving(
            lambda t: ((1.0 - k) * np.power(t, -k) - (1.0 + k) * np.power(t, k)) / (2.0 * k)
        ),
        trace_form=True,
    )


def _checked(value: float, label: str, forbid_one: bool, positive: bool = True) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParamOutOfRange(f"{label} must be finite, got {value}")
    if positive and value <= 0.0:
        raise ParamOutOfRange(f"{label} must be positive, got {value}")
    if forbid_one and abs(value - 1.0) < PARAM_GUARD:
        raise ParamOutOfRange(
            f"|{label} - 1| must be at least {PARAM_GUARD:g}; "
            f"got {label} = {value} (use the limiting family instead)"
        )
    return value


_BUILTINS: dict[str, Callable[..., HFPair]] = {
    "shannon": shannon,
    "renyi": renyi,
    "tsallis": tsallis,
    "sharma_mittal": sharma_mittal,
    "kaniadakis": kaniadakis,
}


def make_builtin(family: str, **params: float) -> HFPair:
    """Construct a built-in pair by family name.

    Accepts 'sharma-mittal' as an alias for 'sharma_mittal'.  Unknown names
    and invalid parameters raise ParamOutOfRange.
    """
    key = family.strip().lower().replace("-", "_")
    builder = _BUILTINS.get(key)
    if builder is None:
        raise ParamOutOfRange(
            f"unknown family {family!r}; expected one of {sorted(_BUILTINS)}"
        )
    try:
        return builder(**params)
    except TypeError as exc:
        raise ParamOutOfRange(f"bad parameters for {family!r}: {exc}") from exc


def custom_pair(
    name: str,
    f: Callable,
    h: Callable,
    h_inverse: Callable,
    f_shape: str,
    h_direction: str,
    *,
    h_prime: Callable | None = None,
    f_prime: Callable | None = None,
    derivs: tuple[float, float, float] | None = None,
    trace_form: bool = False,
    fd_step: float = 1e-4,
) -> HFPair:
    """Build a pair from user-supplied maps, filling derivative data by FD.

    When `derivs` is omitted, f', f'', f''' at t = 1 come from 5-point central
    stencils with step `fd_step`, so f must be evaluable on [1 - 2s, 1 + 2s].
    The third-derivative estimate carries rounding noise of order 1e-4 at the
    default step; pass `derivs` explicitly where that matters.
    """
    if derivs is None:
        derivs = _derivs_at_one(f, fd_step)
    if h_prime is None:
        h_prime = _fd_first_derivative(h, fd_step)
    return HFPair(
        name=name,
        f=f,
        h=h,
        h_inverse=h_inverse,
        h_prime=h_prime,
        df1=derivs[0],
        d2f1=derivs[1],
        d3f1=derivs[2],
        f_shape=f_shape,
        h_direction=h_direction,
        f_prime=f_prime,
        trace_form=trace_form,
    )


def _derivs_at_one(f: Callable, s: float) -> tuple[float, float, float]:
    v = [float(f(1.0 + k * s)) for k in (-2, -1, 0, 1, 2)]
    first = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * s)
    second = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * s * s)
    third = (-v[0] + 2.0 * v[1] - 2.0 * v[3] + v[4]) / (2.0 * s**3)
    return first, second, third


def _fd_first_derivative(g: Callable, s: float) -> Callable:
    def prime(x):
        x = np.asarray(x, dtype=float)
        step = s * np.maximum(1.0, np.abs(x))
        return (
            np.asarray(g(x - 2 * step))
            - 8.0 * np.asarray(g(x - step))
            + 8.0 * np.asarray(g(x + step))
            - np.asarray(g(x + 2 * step))
        ) / (12.0 * step)

    return prime


# --- evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class EntropyFunctional:
    """A callable entropy S with an optional composition law attached.

    `fn` maps a weights array (outcomes along the last axis) to values, so
    the same object evaluates a single distribution or a stacked batch.
    `gradient`, when present, maps weights to dS/dp_i (same shape); it is
    only attached where it is analytic.
    """

    fn: Callable
    name: str
    law: BinaryLaw | None = None
    gradient: Callable | None = None

    def eval(self, p: ProbDist) -> float:
        value = float(self.fn(p.weights))
        if not math.isfinite(value):
            raise DomainError(f"{self.name} is not finite at the given distribution")
        return value

    def __call__(self, p: ProbDist) -> float:
        return self.eval(p)

    def eval_batch(self, weights) -> np.ndarray:
        """Evaluate on an (..., W) array of weight rows."""
        return np.asarray(self.fn(np.asarray(weights, dtype=float)), dtype=float)


def hf_sum(pair: HFPair, weights) -> np.ndarray:
    """The raw trace sum_i f(p_i) along the last axis."""
    return np.asarray(pair.f(np.asarray(weights, dtype=float))).sum(axis=-1)


def eval_entropy(pair: HFPair, p: ProbDist) -> float:
    """S(p) = h(sum_i f(p_i)) for an entropy-shaped pair."""
    require_entropy_shape(pair)
    value = float(pair.h(hf_sum(pair, p.weights)))
    if not math.isfinite(value):
        raise DomainError(f"{pair.name} is not finite at the given distribution")
    return value


def entropy_functional(
    pair: HFPair, law: BinaryLaw | None = None, name: str | None = None
) -> EntropyFunctional:
    """Wrap an entropy-shaped pair as a batch-evaluable functional."""
    require_entropy_shape(pair)

    def fn(weights):
        return pair.h(hf_sum(pair, weights))

    gradient = None
    if pair.trace_form and pair.f_prime is not None:
        f_prime = pair.f_prime

        def gradient(weights):  # noqa: F811 - deliberate rebind
            return np.asarray(f_prime(np.asarray(weights, dtype=float)))

    return EntropyFunctional(fn=fn, name=name or pair.name, law=law, gradient=gradient)


_NATURAL_LAWS: dict[str, Callable[..., BinaryLaw | None]] = {
    "shannon": lambda: additive_law(),
    "renyi": lambda alpha: additive_law(),
    "tsallis": lambda q: q_sum(q),
    "sharma_mittal": lambda alpha, beta: q_sum(beta),
    "kaniadakis": lambda kappa: None,  # provably not strictly composable
}


def builtin_functional(family: str, **params: float) -> EntropyFunctional:
    """A built-in entropy with its natural composition law attached (if any)."""
    pair = make_builtin(family, **params)
    key = family.strip().lower().replace("-", "_")
    law = _NATURAL_LAWS[key](**params)
    return entropy_functional(pair, law=law)


# --- Shannon-Khinchin suite ---------------------------------------------------


@dataclass(frozen=True)
class SKReport:
    """Residuals of the Shannon-Khinchin checks over seeded samples."""

    entropy: str
    w_max: int
    samples: int
    tol: float
    maximality_violation: float
    expansibility_residual: float
    min_value: float
    strict_checked: bool
    strict_ok: bool

    @property
    def maximality_ok(self) -> bool:
        return self.maximality_violation <= self.tol

    @property
    def expansibility_ok(self) -> bool:
        return self.expansibility_residual <= self.tol

    @property
    def nonneg_ok(self) -> bool:
        return self.min_value >= -NONNEG_TOL

    @property
    def passed(self) -> bool:
        ok = self.maximality_ok and self.expansibility_ok and self.nonneg_ok
        return ok and (self.strict_ok or not self.strict_checked)

    def as_dict(self) -> dict:
        return {
            "entropy": self.entropy,
            "w_max": self.w_max,
            "samples": self.samples,
            "tol": self.tol,
            "maximality_violation": self.maximality_violation,
            "expansibility_residual": self.expansibility_residual,
            "min_value": self.min_value,
            "maximality_ok": self.maximality_ok,
            "expansibility_ok": self.expansibility_ok,
            "nonneg_ok": self.nonneg_ok,
            "strict_checked": self.strict_checked,
            "strict_ok": self.strict_ok,
            "passed": self.passed,
        }


def sk_suite(
    entropy: EntropyFunctional | HFPair,
    w_max: int = 6,
    samples: int = 1000,
    seed: int = 0,
    tol: float = 1e-10,
    strict: bool = True,
) -> SKReport:
    """Check maximality at uniform, expansibility, and non-negativity.

    For each W in 2..w_max the batch holds `samples` flat-Dirichlet draws plus
    every certainty corner; the uniform distribution is the reference.  With
    `strict=True` the maximum must be attained only at uniform among the
    sampled non-uniform rows (the strictly-shaped case).
    """
    if isinstance(entropy, HFPair):
        entropy = entropy_functional(entropy)
    if w_max < 2:
        raise ValueError("w_max must be at least 2")
    rng = np.random.default_rng(seed)

    maximality = -math.inf
    expansibility = 0.0
    min_value = math.inf
    strict_ok = True
    for w in range(2, w_max + 1):
        batch = np.vstack([rng.dirichlet(np.ones(w), size=samples), np.eye(w)])
        u = np.full(w, 1.0 / w)
        vals = entropy.eval_batch(batch)
        u_val = float(entropy.eval_batch(u))
        maximality = max(maximality, float(vals.max()) - u_val)
        strict_ok = strict_ok and bool(np.all(vals < u_val))

        everything = np.vstack([batch, u[None, :]])
        padded = np.hstack([everything, np.zeros((everything.shape[0], 1))])
        gap = np.abs(entropy.eval_batch(padded) - entropy.eval_batch(everything))
        expansibility = max(expansibility, float(gap.max()))
        min_value = min(min_value, float(vals.min()), u_val)

    return SKReport(
        entropy=entropy.name,
        w_max=w_max,
        samples=samples,
        tol=tol,
        maximality_violation=maximality,
        expansibility_residual=expansibility,
        min_value=min_value,
        strict_checked=strict,
        strict_ok=strict_ok if strict else True,
    )


# --- composability ------------------------------------------------------------


@dataclass(frozen=True)
class ChiLaw:
    """How raw trace sums compose over products: sum f(pq) = chi(sum f(p), sum f(q))."""

    fn: Callable
    name: str

    def __call__(self, x, y):
        return self.fn(x, y)


def product_chi() -> ChiLaw:
    """chi(x, y) = x y, the law of the pure power traces f = t^alpha."""
    return ChiLaw(fn=lambda x, y: np.multiply(x, y), name="product")


def q_sum_chi(q: float) -> ChiLaw:
    """chi equal to the deformed sum itself (the Tsallis trace law)."""
    law = q_sum(q)
    return ChiLaw(fn=law.fn, name=law.name)


def phi_from_chi(pair: HFPair, chi: ChiLaw, domain: Interval | None = None) -> BinaryLaw:
    """The entropy-level law induced by a trace-level one.

    Phi(x, y) = h(chi(h^-1(x), h^-1(y))).  If chi is commutative, associative,
    and has f(1) as neutral element, Phi inherits all three axioms with 0 as
    neutral element, because h(f(1)) = 0.  The default domain is [0, inf),
    where entropy values live; evaluations that fall where h or h^-1 are
    undefined raise DomainError.
    """
    if domain is None:
        domain = Interval(0.0, math.inf)

    def fn(x, y):
        u = pair.h_inverse(np.asarray(x, dtype=float))
        v = pair.h_inverse(np.asarray(y, dtype=float))
        out = np.asarray(pair.h(chi(u, v)))
        if not np.all(np.isfinite(out)):
            raise DomainError(
                f"induced law for {pair.name} left the domain of h or h_inverse"
            )
        return out if out.ndim else float(out)

    return BinaryLaw(fn=fn, domain=domain, name=f"induced[{pair.name};{chi.name}]")


def composability_residual(pair: HFPair, law: BinaryLaw, p: ProbDist, q: ProbDist) -> float:
    """|S(p (x) q) - Phi(S(p), S(q))| for one concrete product distribution."""
    joint = eval_entropy(pair, product(p, q))
    composed = float(law(eval_entropy(pair, p), eval_entropy(pair, q)))
    return abs(joint - composed)
