"""The CHSH quantity Gamma in its two forms, and the per-trial bound.

Two estimators with deliberately different contracts:

* :func:`gamma_pooled` runs over a counterfactual dataset, where one
  trial index j spans all four terms.  Its value is bounded by 2 --
  exactly, not statistically -- because each trial contributes
  a(b+c) + d(b-c) = +/-2 (see :func:`termwise_bound_check`).
* :func:`gamma_subruns` runs over four disjoint experiments, each term
  normalized by its own trial count.  Nothing ties the terms together,
  so the only constraint is |Gamma| <= 4; no Bell bound applies.

:func:`split_random` bridges the two: it samples a feasible experiment
out of a counterfactual dataset by assigning every trial to one setting
pair uniformly and discarding the other two counterfactual outcomes.

All sums are accumulated in integer arithmetic and divided once, so the
+/-2 and <=2 assertions are exact rather than approximate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CounterfactualDataset,
    OutcomeSequence,
    SettingsQuad,
    SubRunDataset,
    SubRunPairs,
)
from .rng import RngSpec
from .sources import CorrelationLaw

__all__ = [
    "GammaResult",
    "BoundReport",
    "gamma_pooled",
    "gamma_subruns",
    "split_random",
    "termwise_bound_check",
    "theory_gamma",
]


@dataclass(frozen=True)
class GammaResult:
    """A Gamma estimate with its four correlation terms.

    ``per_term`` holds the raw correlations (<ab>, <ac>, <db>, <dc>);
    the fixed sign convention puts the minus on the dc term, so
    ``value = per_term[0] + per_term[1] + per_term[2] - per_term[3]``.
    ``n_used`` is the trial count behind each term.
    """

    value: float
    per_term: tuple[float, float, float, float]
    n_used: tuple[int, int, int, int]


@dataclass(frozen=True)
class BoundReport:
    """Per-trial values of the factorized form a(b+c) + d(b-c).

    For two-valued outcomes, b+c is 0 exactly when b-c is not, so every
    per-trial value is +/-2 and their mean (which equals the pooled
    Gamma) can never leave [-2, 2].
    """

    per_trial_values: np.ndarray
    max_abs: float
    gamma: float


def gamma_pooled(data: CounterfactualDataset) -> GammaResult:
    """Gamma over a counterfactual dataset: one shared trial index.

    value = (1/N) * sum_j [a(j)b(j) + a(j)c(j) + d(j)b(j) - d(j)c(j)],
    guaranteed to lie in [-2, 2].
    """
    n = data.n
    if n == 0:
        raise ValueError("empty dataset")
    a, d = data.a_seq.values, data.d_seq.values
    b, c = data.b_seq.values, data.c_seq.values
    s_ab = int(np.sum(a * b, dtype=np.int64))
    s_ac = int(np.sum(a * c, dtype=np.int64))
    s_db = int(np.sum(d * b, dtype=np.int64))
    s_dc = int(np.sum(d * c, dtype=np.int64))
    return GammaResult(
        value=(s_ab + s_ac + s_db - s_dc) / n,
        per_term=(s_ab / n, s_ac / n, s_db / n, s_dc / n),
        n_used=(n, n, n, n),
    )


def gamma_subruns(data: SubRunDataset) -> GammaResult:
    """Gamma over four disjoint sub-runs, each term normalized by its own N.

    The per-term bounds are the only constraint: |value| <= 4, and the
    extremes are attainable (no Bell bound holds for disjoint sub-runs).
    """
    sums: list[int] = []
    counts: list[int] = []
    for label, pairs in data.items():
        if len(pairs) == 0:
            raise ValueError(f"empty sub-run list: {label}")
        sums.append(pairs.product_sum())
        counts.append(len(pairs))
    terms = tuple(s / m for s, m in zip(sums, counts))
    if len(set(counts)) == 1:
        # Shared divisor: divide the signed integer total once, so bound
        # comparisons against 2 and 4 stay exact instead of accruing a
        # rounding ulp per term.
        value = (sums[0] + sums[1] + sums[2] - sums[3]) / counts[0]
    else:
        value = terms[0] + terms[1] + terms[2] - terms[3]
    return GammaResult(value=value, per_term=terms, n_used=tuple(counts))


def split_random(
    data: CounterfactualDataset,
    rng: RngSpec,
    *,
    return_assignment: bool = False,
) -> SubRunDataset | tuple[SubRunDataset, np.ndarray]:
    """Sample a feasible experiment out of a counterfactual dataset.

    Every trial index j is assigned to exactly one of the four setting
    pairs with probability 1/4; the list for pair xy keeps that trial's
    (x-setting, y-setting) outcomes and the two remaining counterfactual
    outcomes are dropped.  Source order is preserved within each list.

    ``return_assignment`` additionally returns the length-n assignment
    array (0=ab, 1=ac, 2=db, 3=dc) -- a diagnostics hook for oracle
    comparisons only; the feasible experiment never retains it.
    """
    n = data.n
    if n < 4:
        raise ValueError(f"need at least 4 trials to split, got {n}")
    assignment = rng.generator().integers(0, 4, size=n)
    column_pairs = (
        (data.a_seq, data.b_seq),
        (data.a_seq, data.c_seq),
        (data.d_seq, data.b_seq),
        (data.d_seq, data.c_seq),
    )
    lists = []
    for code, (arm_a, arm_b) in enumerate(column_pairs):
        mask = assignment == code
        lists.append(
            SubRunPairs(OutcomeSequence(arm_a.values[mask]), OutcomeSequence(arm_b.values[mask]))
        )
    dataset = SubRunDataset(*lists, settings=data.settings)
    if return_assignment:
        return dataset, assignment
    return dataset


def termwise_bound_check(data: CounterfactualDataset) -> BoundReport:
    """Evaluate a(b+c) + d(b-c) per trial and verify every value is +/-2.

    The mean of the per-trial values equals the pooled Gamma exactly
    (same integer sum, same single division).
    """
    n = data.n
    if n == 0:
        raise ValueError("empty dataset")
    a, d = data.a_seq.values, data.d_seq.values
    b, c = data.b_seq.values, data.c_seq.values
    per_trial = a * (b + c) + d * (b - c)
    if not bool(np.all(np.abs(per_trial) == 2)):
        # Unreachable for valid +/-1 data; guards against corrupted arrays.
        raise AssertionError("per-trial factorized value outside {+2, -2}")
    gamma = int(np.sum(per_trial, dtype=np.int64)) / n
    frozen = per_trial.astype(np.int8)
    frozen.setflags(write=False)
    return BoundReport(per_trial_values=frozen, max_abs=2.0, gamma=gamma)


def theory_gamma(settings: SettingsQuad, law: CorrelationLaw) -> float:
    """Closed-form Gamma: E(a,b) + E(a,c) + E(d,b) - E(d,c)."""
    e = law.pair_correlation
    return (
        e(settings.a, settings.b)
        + e(settings.a, settings.c)
        + e(settings.d, settings.b)
        - e(settings.d, settings.c)
    )
