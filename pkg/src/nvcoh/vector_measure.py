"""Sequential vector dependence statistic and its permutation-invariant forms.

The statistic chains the scalar xi coefficient over the response columns:
each component is scored against the predictors plus the previously handled
response components, and the chained scores are folded into a single
predictability value.  Because xi is asymmetric, a permutation-invariant mean
over response-column orderings and a symmetric max over both directions are
provided as well.

Every xi sub-evaluation is keyed by (direction, response column, set of
predictor columns) and seeded from that key, so identical terms appearing
under several column orderings are computed once and the whole computation is
reproducible term by term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations as iter_permutations

import numpy as np

from .rank_core import derive_seed, xi_n

__all__ = [
    "DegenerateDenominatorError",
    "FeatureMatrixPair",
    "PermutationPlan",
    "make_plan",
    "term_seed",
    "t_n",
    "t_n_bar",
    "t_n_star",
]

DENOM_EPS = 1e-9
DEFAULT_MAX_PERMS = 24


class DegenerateDenominatorError(ArithmeticError):
    """The response-only denominator collapsed below the tolerance."""


@dataclass(frozen=True)
class FeatureMatrixPair:
    """Predictor block ``x`` (n x p) and response block ``y`` (n x q)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.atleast_2d(np.asarray(self.x, dtype=np.float64))
        y = np.atleast_2d(np.asarray(self.y, dtype=np.float64))
        if x.shape[0] == 1 and y.shape[0] > 1:
            x = x.T
        if y.shape[0] == 1 and x.shape[0] > 1:
            y = y.T
        if x.shape[0] != y.shape[0]:
            raise ValueError("x and y must have the same number of rows")
        if x.shape[0] < 2:
            raise ValueError("need at least two rows")
        if x.shape[1] < 1 or y.shape[1] < 1:
            raise ValueError("need at least one column per block")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError("entries must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    @property
    def q(self) -> int:
        return self.y.shape[1]

    def swapped(self) -> "FeatureMatrixPair":
        return FeatureMatrixPair(x=self.y, y=self.x)


@dataclass(frozen=True)
class PermutationPlan:
    """A set of distinct response-column orderings to average over."""

    q: int
    perms: tuple[tuple[int, ...], ...]
    mode: str
    seed: int = 0

    def __post_init__(self):
        perms = tuple(tuple(int(i) for i in p) for p in self.perms)
        if not perms:
            raise ValueError("plan needs at least one permutation")
        base = tuple(range(self.q))
        for p in perms:
            if tuple(sorted(p)) != base:
                raise ValueError(f"{p} is not a permutation of 0..{self.q - 1}")
        if len(set(perms)) != len(perms):
            raise ValueError("permutations must be pairwise distinct")
        expected = "exhaustive" if len(perms) == math.factorial(self.q) else "sampled"
        if self.mode != expected:
            raise ValueError(f"mode must be {expected!r} for Q={len(perms)}, q={self.q}")
        object.__setattr__(self, "perms", perms)

    @property
    def n_perms(self) -> int:
        return len(self.perms)


def make_plan(q: int, n_perms: int | None = None, seed: int = 0) -> PermutationPlan:
    """Exhaustive plan when q! fits the budget, else uniformly sampled orderings.

    Sampling is without replacement; requesting at least q! orderings yields
    the exhaustive plan.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    total = math.factorial(q)
    if n_perms is None:
        n_perms = min(DEFAULT_MAX_PERMS, total)
    if n_perms < 1:
        raise ValueError("n_perms must be >= 1")
    if n_perms >= total:
        return PermutationPlan(q=q, perms=tuple(iter_permutations(range(q))),
                               mode="exhaustive", seed=seed)
    rng = np.random.default_rng(seed)
    seen: set[tuple[int, ...]] = set()
    perms: list[tuple[int, ...]] = []
    while len(perms) < n_perms:
        cand = tuple(int(i) for i in rng.permutation(q))
        if cand not in seen:
            seen.add(cand)
            perms.append(cand)
    return PermutationPlan(q=q, perms=tuple(perms), mode="sampled", seed=seed)


def term_seed(seed: int, direction: str, response: str, predictors) -> int:
    """Seed of one xi sub-evaluation; depends on the term, not the ordering."""
    return derive_seed(seed, direction, response, tuple(sorted(predictors)))


def _columns(pair: FeatureMatrixPair) -> dict[str, np.ndarray]:
    cols = {f"x{i}": pair.x[:, i] for i in range(pair.p)}
    cols.update({f"y{i}": pair.y[:, i] for i in range(pair.q)})
    return cols


def _xi_term(cols, response: str, predictors: tuple[str, ...], seed: int,
             direction: str, cache: dict) -> float:
    key = (response, predictors)
    val = cache.get(key)
    if val is None:
        s = term_seed(seed, direction, response, predictors)
        v = np.column_stack([cols[p] for p in predictors])
        val = xi_n(cols[response], v, seed=s)
        cache[key] = val
    return val


def _t_for_order(cols, x_labels, y_order, seed, direction, cache, eps) -> float:
    q = len(y_order)
    num_sum = 0.0
    den_sum = 0.0
    for ell, resp in enumerate(y_order):
        preds = tuple(sorted(x_labels + y_order[:ell]))
        num_sum += _xi_term(cols, resp, preds, seed, direction, cache)
        if ell >= 1:
            dpreds = tuple(sorted(y_order[:ell]))
            den_sum += _xi_term(cols, resp, dpreds, seed, direction, cache)
    denominator = q - den_sum
    if denominator <= eps:
        raise DegenerateDenominatorError(
            f"response-only denominator {denominator:.3e} <= eps {eps:.0e}")
    # algebraically 1 - (q - num_sum)/denominator; this form collapses to the
    # single xi value exactly when q == 1
    return (num_sum - den_sum) / denominator


def t_n(pair: FeatureMatrixPair, seed: int = 0, eps: float = DENOM_EPS) -> float:
    """Chained dependence of the response block on the predictor block.

    For q = 1 this is exactly ``xi_n(y, x)``.  The denominator guard is
    defensive: with valid rank data each xi term is bounded by 1, so the
    response-only denominator stays at or above 1.
    """
    cols = _columns(pair)
    x_labels = tuple(f"x{i}" for i in range(pair.p))
    y_order = tuple(f"y{i}" for i in range(pair.q))
    return _t_for_order(cols, x_labels, y_order, seed, "y_on_x", {}, eps)


def _t_bar(cols, x_labels, y_labels, plan, seed, direction, eps) -> float:
    cache: dict = {}
    vals = [
        _t_for_order(cols, x_labels, tuple(y_labels[i] for i in perm),
                     seed, direction, cache, eps)
        for perm in plan.perms
    ]
    return float(np.mean(vals))


def t_n_bar(pair: FeatureMatrixPair, plan: PermutationPlan | None = None,
            seed: int = 0, eps: float = DENOM_EPS) -> float:
    """Mean of ``t_n`` over the plan's response-column orderings."""
    if plan is None:
        plan = make_plan(pair.q, seed=derive_seed(seed, "plan", "y"))
    if plan.q != pair.q:
        raise ValueError(f"plan is for q={plan.q}, pair has q={pair.q}")
    cols = _columns(pair)
    x_labels = tuple(f"x{i}" for i in range(pair.p))
    y_labels = tuple(f"y{i}" for i in range(pair.q))
    return _t_bar(cols, x_labels, y_labels, plan, seed, "y_on_x", eps)


def t_n_star(pair: FeatureMatrixPair, plan_x: PermutationPlan | None = None,
             plan_y: PermutationPlan | None = None, seed: int = 0,
             eps: float = DENOM_EPS) -> float:
    """Symmetric variant: max of the permutation-invariant means both ways."""
    if plan_y is None:
        plan_y = make_plan(pair.q, seed=derive_seed(seed, "plan", "y"))
    if plan_x is None:
        plan_x = make_plan(pair.p, seed=derive_seed(seed, "plan", "x"))
    if plan_y.q != pair.q or plan_x.q != pair.p:
        raise ValueError("plan dimensions do not match the pair")
    cols = _columns(pair)
    x_labels = tuple(f"x{i}" for i in range(pair.p))
    y_labels = tuple(f"y{i}" for i in range(pair.q))
    forward = _t_bar(cols, x_labels, y_labels, plan_y, seed, "y_on_x", eps)
    reverse = _t_bar(cols, y_labels, x_labels, plan_x, seed, "x_on_y", eps)
    return max(forward, reverse)
