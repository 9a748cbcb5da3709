"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

from chshkit import (
    CounterfactualDataset,
    OutcomeSequence,
    RngSpec,
    SubRunDataset,
    SubRunPairs,
)


def seq(*values: int) -> OutcomeSequence:
    return OutcomeSequence(np.array(values, dtype=np.int8))


def pairs(a_side, b_side) -> SubRunPairs:
    return SubRunPairs(
        OutcomeSequence(np.asarray(a_side, dtype=np.int8)),
        OutcomeSequence(np.asarray(b_side, dtype=np.int8)),
    )


def random_signs(g: np.random.Generator, n: int) -> np.ndarray:
    return (g.integers(0, 2, size=n, dtype=np.int8) * 2 - 1).astype(np.int8)


def random_counterfactual(rng: RngSpec, n: int) -> CounterfactualDataset:
    """Arbitrary counterfactual dataset: four independent fair-coin columns."""
    g = rng.generator()
    cols = [random_signs(g, n) for _ in range(4)]
    return CounterfactualDataset(*(OutcomeSequence(c) for c in cols))


def shared_run_dataset(
    data: CounterfactualDataset, rng: RngSpec | None = None
) -> SubRunDataset:
    """All four sub-run lists drawn from ONE counterfactual run.

    Every list has the full n trials; with ``rng`` given each list is
    independently shuffled (pairs kept intact), otherwise all four keep
    the source order.  Every cascade step is count-feasible by
    construction since each shared side is a permutation of the same
    column.
    """
    n = data.n
    g = rng.generator() if rng is not None else None

    def order() -> np.ndarray:
        return g.permutation(n) if g is not None else np.arange(n)

    column_pairs = (
        (data.a_seq, data.b_seq),
        (data.a_seq, data.c_seq),
        (data.d_seq, data.b_seq),
        (data.d_seq, data.c_seq),
    )
    lists = []
    for x, y in column_pairs:
        idx = order()
        lists.append(pairs(x.values[idx], y.values[idx]))
    return SubRunDataset(*lists)


def feasible_dataset(rng: RngSpec, n: int) -> SubRunDataset:
    """Random sub-run dataset that is count-feasible at every cascade step.

    The ac list's a-side is a permutation of the ab list's a-side, the
    dc list's c-side a permutation of the ac list's c-side, and the db
    list's d-side a permutation of the dc list's d-side; all other
    sides are fresh coin flips.
    """
    g = rng.generator()
    a1, b1 = random_signs(g, n), random_signs(g, n)
    a2 = g.permutation(a1)
    c2 = random_signs(g, n)
    c4 = g.permutation(c2)
    d4 = random_signs(g, n)
    d3 = g.permutation(d4)
    b3 = random_signs(g, n)
    return SubRunDataset(ab=pairs(a1, b1), ac=pairs(a2, c2), db=pairs(d3, b3), dc=pairs(d4, c4))


def all_sign_rows(n: int) -> np.ndarray:
    """All 2**n sign vectors of length n as an int8 matrix (rows)."""
    m = np.arange(2**n, dtype=np.int64)
    bits = (m[:, None] >> np.arange(n)) & 1
    return (bits * 2 - 1).astype(np.int8)
