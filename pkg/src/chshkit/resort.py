"""The re-sorting cascade and its closure diagnostics.

Sub-run Gamma only factorizes into the bounded form a(b+c) + d(b-c)
when the shared-setting factor sequences of different terms are
elementwise identical.  Re-sorting tries to manufacture that identity by
permuting whole trials:

1. the ac list is re-sorted so its a-side matches the ab list's a-side,
   dragging its c-side along;
2. that new c ordering is cascaded to the dc list (re-sorted on its
   c-side), dragging its d-side along;
3. the new d ordering is cascaded to the db list (re-sorted on its
   d-side), dragging its b-side along.

The circuit closes only if the dragged-along b-side of step 3 ends up
identical to the ab list's b-side; that closure is necessary for the
factorized grouping -- and hence the |Gamma| <= 2 bound -- to apply.
For independently collected sub-runs it essentially never happens:
two independent uniform re-sortings of an n-element sequence with k
ones coincide with probability 1/C(n, k).

Re-sorting can never change the value of Gamma (each term's sum is
permutation-invariant); what it changes is factorizability.  The
cascade therefore reports the permutations, per-step feasibility
(+1-count matches), the closure verdict with its Hamming distance, and
the factorized Gamma when every step was feasible.

When a step's +1-counts mismatch, exact alignment is impossible; the
cascade still completes with a best-effort maximum-agreement matching
so closure and Hamming distance are always reported, and only the
factorized Gamma is withheld (its grouping identity no longer holds).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    OutcomeSequence,
    SubRunDataset,
    SubRunPairs,
    sequences_identical,
)
from .estimators import gamma_subruns
from .rng import RngSpec

__all__ = [
    "TrialPermutation",
    "ResortPolicy",
    "STABLE",
    "ResortReport",
    "align_permutation",
    "resort_cascade",
    "gamma_resorted",
    "closure_probability",
    "trim_to_shortest",
]


@dataclass(frozen=True, eq=False)
class TrialPermutation:
    """A bijection on {0..N-1}; entry i says which source trial lands at i.

    Applying it to a sub-run list reorders (arm A, arm B) pairs as units;
    a pair is never split.
    """

    indices: np.ndarray

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1:
            raise ValueError("permutation indices must be one-dimensional")
        n = idx.size
        if n:
            if idx.min() < 0 or idx.max() >= n:
                raise ValueError("permutation indices out of range")
            if np.any(np.bincount(idx, minlength=n) != 1):
                raise ValueError("indices do not form a bijection")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @classmethod
    def identity(cls, n: int) -> TrialPermutation:
        return cls(np.arange(n, dtype=np.int64))

    def __len__(self) -> int:
        return int(self.indices.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrialPermutation):
            return NotImplemented
        return np.array_equal(self.indices, other.indices)

    def apply(self, seq: OutcomeSequence) -> OutcomeSequence:
        if len(seq) != len(self):
            raise ValueError(f"length mismatch: permutation {len(self)}, sequence {len(seq)}")
        return OutcomeSequence(seq.values[self.indices])

    def apply_pairs(self, pairs: SubRunPairs) -> SubRunPairs:
        # One index array for both sides: pairs move as units.
        return SubRunPairs(self.apply(pairs.a), self.apply(pairs.b))


@dataclass(frozen=True)
class ResortPolicy:
    """How to choose among the many valid re-sortings.

    ``stable`` preserves source order within each value class and is
    fully deterministic; ``uniform-random`` draws the within-class
    bijection uniformly from ``rng`` (required for that kind).
    """

    kind: str
    rng: RngSpec | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("stable", "uniform-random"):
            raise ValueError(f"unknown resort policy {self.kind!r}")
        if self.kind == "uniform-random" and self.rng is None:
            raise ValueError("uniform-random policy requires an rng")

    @classmethod
    def uniform_random(cls, rng: RngSpec) -> ResortPolicy:
        return cls("uniform-random", rng)


STABLE = ResortPolicy("stable")


def _class_matching(
    target: np.ndarray, source: np.ndarray, g: np.random.Generator | None
) -> np.ndarray:
    """Permutation carrying source onto target, classwise, best effort.

    +1 source positions fill +1 target slots and likewise for -1; when
    class sizes mismatch the leftovers are paired off across classes, so
    agreement is maximal (n - |count deficit|).  With ``g`` given, the
    within-class assignment is drawn uniformly; otherwise both sides are
    taken in ascending position order (the unique stable matching).
    """
    n = target.size
    t_plus = np.flatnonzero(target == 1)
    t_minus = np.flatnonzero(target == -1)
    s_plus = np.flatnonzero(source == 1)
    s_minus = np.flatnonzero(source == -1)
    if g is not None:
        s_plus = g.permutation(s_plus)
        s_minus = g.permutation(s_minus)
    m_plus = min(t_plus.size, s_plus.size)
    m_minus = min(t_minus.size, s_minus.size)
    perm = np.empty(n, dtype=np.int64)
    perm[t_plus[:m_plus]] = s_plus[:m_plus]
    perm[t_minus[:m_minus]] = s_minus[:m_minus]
    leftover_t = np.concatenate([t_plus[m_plus:], t_minus[m_minus:]])
    leftover_s = np.concatenate([s_plus[m_plus:], s_minus[m_minus:]])
    perm[leftover_t] = leftover_s
    return perm


def align_permutation(
    target: OutcomeSequence, source: OutcomeSequence, policy: ResortPolicy = STABLE
) -> TrialPermutation | None:
    """The permutation re-sorting ``source`` into ``target``, if one exists.

    Exists iff the +1-counts agree; a count mismatch returns None
    (infeasible -- an outcome, not an error).  Under the stable policy
    the result is the unique order-preserving class matching; under
    uniform-random it is uniform over all valid bijections.
    """
    if len(target) != len(source):
        raise ValueError(f"length mismatch: {len(target)} != {len(source)}")
    if target.plus_count() != source.plus_count():
        return None
    g = policy.rng.generator() if policy.kind == "uniform-random" else None
    return TrialPermutation(_class_matching(target.values, source.values, g))


@dataclass(frozen=True)
class ResortReport:
    """Everything the cascade found.

    Step order is the cascade order: the re-sorted terms are ac, dc, db
    (terms 2, 4, 3 of the four-term sum), and ``feasible``, ``perms``
    and ``count_deficits`` follow it.  A deficit is the target's
    +1-count minus the source's, so 0 means the step was exactly
    alignable.  ``closure`` compares the ab list's b-side with the
    dragged-along b-side of the final step; ``gamma_resorted`` is the
    factorized evaluation and is None unless every step was feasible.
    """

    feasible: tuple[bool, bool, bool]
    perms: tuple[TrialPermutation, TrialPermutation, TrialPermutation]
    count_deficits: tuple[int, int, int]
    closure: bool
    hamming_b: int
    gamma_subruns: float
    gamma_resorted: float | None

    @property
    def all_feasible(self) -> bool:
        return all(self.feasible)

    def to_json_dict(self) -> dict:
        return {
            "feasible": list(self.feasible),
            "closure": self.closure,
            "hamming_b": self.hamming_b,
            "gamma_subruns": self.gamma_subruns,
            "gamma_resorted": self.gamma_resorted,
            "count_deficits": list(self.count_deficits),
        }


def _step_generator(policy: ResortPolicy, step: int) -> np.random.Generator | None:
    if policy.kind != "uniform-random":
        return None
    assert policy.rng is not None
    return policy.rng.derive(step).generator()


def _factored_gamma(
    a1: OutcomeSequence,
    b1: OutcomeSequence,
    c2: OutcomeSequence,
    d4: OutcomeSequence,
    b3: OutcomeSequence,
) -> float:
    """The factorized grouping <a1*(b1 + c2)> + <d4*(b3 - c2)>."""
    n = len(a1)
    first = int(np.sum(a1.values * (b1.values + c2.values), dtype=np.int64))
    second = int(np.sum(d4.values * (b3.values - c2.values), dtype=np.int64))
    return (first + second) / n


def resort_cascade(data: SubRunDataset, policy: ResortPolicy = STABLE) -> ResortReport:
    """Run the full re-sorting cascade over equal-length sub-runs.

    Raises on unequal lengths (see :func:`trim_to_shortest` for the
    lossy preprocessor) and on empty lists.  Count-infeasible steps are
    recorded, not raised: the cascade completes with maximum-agreement
    matchings so the closure verdict and Hamming distance always exist.
    """
    counts = data.counts
    if len(set(counts)) != 1:
        raise ValueError(f"cascade requires equal sub-run lengths, got {counts}")
    gamma_plain = gamma_subruns(data).value  # also rejects empty lists

    a1, b1 = data.ab.a, data.ab.b

    def step(index: int, target: OutcomeSequence, source_pairs: SubRunPairs, source_side: str):
        source = source_pairs.a if source_side == "a" else source_pairs.b
        g = _step_generator(policy, index)
        perm = TrialPermutation(_class_matching(target.values, source.values, g))
        deficit = target.plus_count() - source.plus_count()
        return perm, deficit == 0, deficit, perm.apply_pairs(source_pairs)

    # Terms re-sorted in cascade order: ac on its a-side, dc on its
    # c-side (to the dragged-along c), db on its d-side (to the
    # dragged-along d).
    perm2, ok2, deficit2, ac_rs = step(0, a1, data.ac, "a")
    perm4, ok4, deficit4, dc_rs = step(1, ac_rs.b, data.dc, "b")
    perm3, ok3, deficit3, db_rs = step(2, dc_rs.a, data.db, "a")

    b3_rs = db_rs.b
    closure = sequences_identical(b1, b3_rs)
    hamming = int(np.count_nonzero(b1.values != b3_rs.values))

    feasible = (ok2, ok4, ok3)
    factored = (
        _factored_gamma(a1, b1, ac_rs.b, dc_rs.a, b3_rs) if all(feasible) else None
    )
    return ResortReport(
        feasible=feasible,
        perms=(perm2, perm4, perm3),
        count_deficits=(deficit2, deficit4, deficit3),
        closure=closure,
        hamming_b=hamming,
        gamma_subruns=gamma_plain,
        gamma_resorted=factored,
    )


def gamma_resorted(data: SubRunDataset, report: ResortReport) -> float:
    """Evaluate the factorized grouping on the re-sorted lists.

    Equals the plain sub-run Gamma whenever the cascade was feasible:
    permutations reorder each term's trials without changing its sum.
    Raises if any step was infeasible.
    """
    if not report.all_feasible:
        raise ValueError("cascade infeasible; factorized gamma undefined")
    perm2, perm4, perm3 = report.perms
    ac_rs = perm2.apply_pairs(data.ac)
    dc_rs = perm4.apply_pairs(data.dc)
    db_rs = perm3.apply_pairs(data.db)
    return _factored_gamma(data.ab.a, data.ab.b, ac_rs.b, dc_rs.a, db_rs.b)


def closure_probability(
    n: int,
    k: int,
    mode: str = "exact",
    *,
    trials: int | None = None,
    rng: RngSpec | None = None,
) -> float:
    """Probability that two independent uniform re-sortings coincide.

    Both sequences have n elements with k ones; each re-sorting is
    uniform over the C(n, k) distinct arrangements, so the exact answer
    is 1 / C(n, k).  Monte-Carlo mode estimates the same quantity by
    simulating both shuffles (``trials`` and ``rng`` required).
    """
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if mode == "exact":
        # int/int true division: correctly rounds (underflows to 0.0 for
        # huge C(n, k)) where float(comb) would overflow and raise.
        return 1 / math.comb(n, k)
    if mode != "monte-carlo":
        raise ValueError(f"unknown mode {mode!r}")
    if trials is None or trials < 1:
        raise ValueError("monte-carlo mode requires trials >= 1")
    if rng is None:
        raise ValueError("monte-carlo mode requires an rng")
    g = rng.generator()
    hits = 0
    done = 0
    chunk = max(1, 1_000_000 // max(n, 1))
    while done < trials:
        m = min(chunk, trials - done)
        # argsort of uniforms = uniform random permutation; a sequence
        # arrangement is determined by which permuted slots hold ones.
        ones_1 = g.random((m, n)).argsort(axis=1) < k
        ones_2 = g.random((m, n)).argsort(axis=1) < k
        hits += int(np.sum(np.all(ones_1 == ones_2, axis=1)))
        done += m
    return hits / trials


def trim_to_shortest(data: SubRunDataset) -> SubRunDataset:
    """Truncate all four lists to the shortest length.  Lossy."""
    m = min(data.counts)

    def cut(pairs: SubRunPairs) -> SubRunPairs:
        return SubRunPairs(
            OutcomeSequence(pairs.a.values[:m]), OutcomeSequence(pairs.b.values[:m])
        )

    return SubRunDataset(
        cut(data.ab), cut(data.ac), cut(data.db), cut(data.dc), settings=data.settings
    )
