"""Re-sorting sub-runs: when does the Bell bound come back?

Each sub-run list may be freely reordered without changing its
correlation.  The cascade aligns shared settings across the four lists
(ac onto ab's a-side, then dc onto the dragged c, then db onto the
dragged d) and asks whether the far ends match too: does the b-sequence
of the re-sorted db list equal the b-sequence of ab?  That closure is
exactly what the factorized per-trial grouping, and with it the
|gamma| <= 2 bound, requires.

Three regimes below: sub-runs read off one hidden-variable run in source
order (closure is immediate), the same lists shuffled (a closing
arrangement still exists, but the cascade has no way to find it), and
genuinely independent quantum sub-runs (even the +1-counts refuse to
match).
"""

from chshkit import (
    CorrelationLaw,
    OutcomeSequence,
    PHOTON_OPTIMAL_QUAD,
    ResortPolicy,
    RngSpec,
    SIGN_MALUS,
    SubRunDataset,
    SubRunPairs,
    generate_subruns,
    lhv_generate,
    resort_cascade,
)


def subruns_from_one_run(n: int, seed: int, shuffled: bool) -> SubRunDataset:
    """Slice one counterfactual run into four full-length sub-run lists."""
    cf = lhv_generate(SIGN_MALUS, PHOTON_OPTIMAL_QUAD, n, RngSpec(seed))
    g = RngSpec(seed).derive(1).generator()
    lists = []
    for x, y in ((cf.a_seq, cf.b_seq), (cf.a_seq, cf.c_seq),
                 (cf.d_seq, cf.b_seq), (cf.d_seq, cf.c_seq)):
        order = g.permutation(n) if shuffled else slice(None)
        lists.append(SubRunPairs(OutcomeSequence(x.values[order]), OutcomeSequence(y.values[order])))
    return SubRunDataset(*lists)


def show(title: str, data: SubRunDataset, policy=None) -> None:
    rep = resort_cascade(data) if policy is None else resort_cascade(data, policy)
    after = "n/a (count-infeasible)" if rep.gamma_resorted is None else f"{rep.gamma_resorted:+.4f}"
    print(title)
    print(f"  steps count-feasible : {rep.feasible}")
    print(f"  closure              : {rep.closure}")
    print(f"  hamming_b            : {rep.hamming_b}")
    print(f"  gamma before/after   : {rep.gamma_subruns:+.4f} / {after}")
    print()


n = 2000

show(
    f"one hidden-variable run read off in source order (n = {n}):",
    subruns_from_one_run(n, seed=21, shuffled=False),
)
show(
    "the same four lists, each independently shuffled:",
    subruns_from_one_run(n, seed=21, shuffled=True),
)
show(
    f"four INDEPENDENT quantum sub-runs (n_per = {n}):",
    generate_subruns(PHOTON_OPTIMAL_QUAD, CorrelationLaw.PHOTON_MALUS, n, RngSpec(22)),
    ResortPolicy.uniform_random(RngSpec(23)),
)

print("whenever the cascade closes, gamma_resorted is an average of")
print("per-trial values a(b+c) + d(b-c), each +/-2, so |gamma| <= 2.")
print("shuffling destroys closure even for shared-origin data: among the")
print("C(n,k) ways to align the a-sides the cascade picks one, and the")
print("odds that the far b-ends then coincide are the closure odds of the")
print("next demo.  independent data fails earlier still: the +1-counts")
print("disagree, so no permutation aligns even the shared settings.")
