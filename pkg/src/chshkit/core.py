"""Domain types for CHSH trial data.

Outcomes are strictly two-valued (+1/-1, no undetected state), analyzer
angles are polarizer orientations and therefore live on [0, pi), and the
two dataset flavors mirror the two kinds of experiment:

* :class:`CounterfactualDataset` -- every trial carries outcomes for all
  four analyzer settings at once.  Only a hidden-variable model can
  produce such data; no feasible experiment can.
* :class:`SubRunDataset` -- four disjoint experiments, one per setting
  pair (ab, ac, db, dc), each a list of paired (arm A, arm B) outcomes.

Everything here is an immutable value; all operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

__all__ = [
    "Angle",
    "SettingsQuad",
    "OutcomeSequence",
    "SubRunTrial",
    "SubRunPairs",
    "CounterfactualDataset",
    "SubRunDataset",
    "PAIR_LABELS",
    "sequences_identical",
    "switch_pattern",
    "correlation",
]

#: Canonical order of the four setting-pair labels.
PAIR_LABELS = ("ab", "ac", "db", "dc")


def _as_outcome_array(values) -> np.ndarray:
    """Validate and freeze a 1-d array of +1/-1 outcomes (stored as int8)."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError("outcome sequence must be one-dimensional")
    try:
        ok = bool(np.all(np.abs(arr) == 1)) if arr.size else True
    except TypeError:
        raise ValueError("outcomes must be +1 or -1") from None
    if not ok:
        raise ValueError("outcomes must be +1 or -1")
    out = arr.astype(np.int8)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Angle:
    """An analyzer orientation in radians, normalized to [0, pi).

    Polarizer orientations are pi-periodic, so two angles differing by a
    multiple of pi are the same setting and normalize to the same value.
    """

    radians: float

    def __post_init__(self) -> None:
        r = float(self.radians)
        if not math.isfinite(r):
            raise ValueError(f"angle must be finite, got {self.radians!r}")
        object.__setattr__(self, "radians", r % math.pi)

    @classmethod
    def from_degrees(cls, degrees: float) -> Angle:
        return cls(math.radians(degrees))

    @property
    def degrees(self) -> float:
        return math.degrees(self.radians)


@dataclass(frozen=True)
class SettingsQuad:
    """The four analyzer angles: a, d on arm A; b, c on arm B.

    The two settings on each arm must be distinct (after normalization),
    otherwise there are not four distinct experiment combinations.
    """

    a: Angle
    d: Angle
    b: Angle
    c: Angle

    def __post_init__(self) -> None:
        if self.a.radians == self.d.radians:
            raise ValueError("arm A settings must differ: a == d")
        if self.b.radians == self.c.radians:
            raise ValueError("arm B settings must differ: b == c")

    @classmethod
    def from_degrees(cls, a: float, d: float, b: float, c: float) -> SettingsQuad:
        return cls(
            Angle.from_degrees(a),
            Angle.from_degrees(d),
            Angle.from_degrees(b),
            Angle.from_degrees(c),
        )


@dataclass(frozen=True, eq=False)
class OutcomeSequence:
    """An ordered, immutable list of +1/-1 detector outcomes for one arm."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_outcome_array(self.values))

    def __len__(self) -> int:
        return int(self.values.size)

    def __iter__(self) -> Iterator[int]:
        return (int(v) for v in self.values)

    def __getitem__(self, index: int) -> int:
        return int(self.values[index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OutcomeSequence):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        shown = ",".join(f"{v:+d}" for v in self.values[:8])
        tail = ",..." if len(self) > 8 else ""
        return f"OutcomeSequence([{shown}{tail}], n={len(self)})"

    def plus_count(self) -> int:
        """Number of +1 entries."""
        return int(np.count_nonzero(self.values == 1))

    def to_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values)


class SubRunTrial(NamedTuple):
    """One (arm A, arm B) outcome pair from a fixed-setting experiment."""

    outcome_a: int
    outcome_b: int


@dataclass(frozen=True)
class SubRunPairs:
    """Ordered outcome pairs from one fixed-setting sub-run.

    The pairing within a trial is physical and immutable: any reordering
    must move a pair as a unit, which is why permutations are applied to
    both sides with a single index array (see ``resort``).
    """

    a: OutcomeSequence
    b: OutcomeSequence

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b):
            raise ValueError(
                f"paired sequences must have equal length: {len(self.a)} != {len(self.b)}"
            )

    @classmethod
    def from_trials(cls, trials) -> SubRunPairs:
        """Build from an iterable of (outcome_a, outcome_b) pairs."""
        rows = list(trials)
        if not rows:
            return cls(OutcomeSequence(np.empty(0, np.int8)), OutcomeSequence(np.empty(0, np.int8)))
        arr = np.asarray(rows)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("trials must be (outcome_a, outcome_b) pairs")
        return cls(OutcomeSequence(arr[:, 0]), OutcomeSequence(arr[:, 1]))

    def __len__(self) -> int:
        return len(self.a)

    def __getitem__(self, index: int) -> SubRunTrial:
        return SubRunTrial(self.a[index], self.b[index])

    def __iter__(self) -> Iterator[SubRunTrial]:
        return (SubRunTrial(int(x), int(y)) for x, y in zip(self.a.values, self.b.values))

    def product_sum(self) -> int:
        """Exact integer sum of per-trial products a(j)*b(j)."""
        return int(np.sum(self.a.values * self.b.values, dtype=np.int64))


@dataclass(frozen=True)
class CounterfactualDataset:
    """N trials each carrying outcomes for all four settings a, d, b, c.

    A local-hidden-variable construct: the four sequences share a single
    trial index j (one hidden lambda per trial decided every outcome), so
    each trial answers "what would either arm have shown under either
    setting".  Feasible experiments can never record this.
    """

    a_seq: OutcomeSequence
    d_seq: OutcomeSequence
    b_seq: OutcomeSequence
    c_seq: OutcomeSequence
    settings: SettingsQuad | None = None

    def __post_init__(self) -> None:
        n = len(self.a_seq)
        for name in ("d_seq", "b_seq", "c_seq"):
            if len(getattr(self, name)) != n:
                raise ValueError("all four outcome sequences must have equal length")

    @property
    def n(self) -> int:
        return len(self.a_seq)


@dataclass(frozen=True)
class SubRunDataset:
    """Four disjoint fixed-setting experiments: ab, ac, db, dc.

    The lists may have different lengths; estimation requires each to be
    nonempty but construction does not (a random split can legitimately
    leave a list empty).
    """

    ab: SubRunPairs
    ac: SubRunPairs
    db: SubRunPairs
    dc: SubRunPairs
    settings: SettingsQuad | None = None

    def items(self) -> tuple[tuple[str, SubRunPairs], ...]:
        """The four lists with their labels, in canonical order."""
        return tuple(zip(PAIR_LABELS, (self.ab, self.ac, self.db, self.dc)))

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (len(self.ab), len(self.ac), len(self.db), len(self.dc))


def sequences_identical(s: OutcomeSequence, t: OutcomeSequence) -> bool:
    """True iff the sequences agree in length and at every position.

    Elementwise equality is exactly "same quantity of +1's" plus "same
    pattern of switches" (plus equal first element); the equivalence is
    cross-checked exhaustively in the test suite.
    """
    return len(s) == len(t) and bool(np.array_equal(s.values, t.values))


def switch_pattern(s: OutcomeSequence) -> list[int]:
    """Positions i >= 1 where the sequence changes sign relative to i-1."""
    if len(s) == 0:
        raise ValueError("empty sequence")
    v = s.values
    return [int(i) for i in np.flatnonzero(v[1:] != v[:-1]) + 1]


def correlation(s_a: OutcomeSequence, s_b: OutcomeSequence) -> float:
    """Mean per-trial product (1/N) * sum_j sA(j)*sB(j), always in [-1, 1].

    Accumulated in integer arithmetic and divided once, so the bound
    checks downstream stay exact.
    """
    n = len(s_a)
    if n != len(s_b):
        raise ValueError(f"length mismatch: {n} != {len(s_b)}")
    if n == 0:
        raise ValueError("empty sequence")
    total = int(np.sum(s_a.values * s_b.values, dtype=np.int64))
    return total / n
