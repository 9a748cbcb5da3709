"""Command-line front end.

Subcommands::

    simulate   generate trial CSVs (lhv counterfactual or qm sub-run)
    split      counterfactual CSV -> randomly sampled sub-run CSV
    estimate   gamma report (JSON) from either CSV kind
    resort     run the re-sorting cascade, emit the report JSON
    sweep      angle-offset curve: theory vs empirical gamma (CSV)
    audit      one-shot estimate + cascade + closure-odds verdict (JSON)

Conventions: angles are degrees on the command line; every randomized
command takes an explicit --seed (there is no wall-clock seeding);
gamma values are printed with six decimals; findings (a violated bound,
a failed closure) are report content, never process errors.  Exit codes:
0 success, 1 data/runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import SettingsQuad
from .estimators import gamma_pooled, gamma_subruns, termwise_bound_check, theory_gamma
from .resort import ResortPolicy, STABLE, closure_probability, resort_cascade, trim_to_shortest
from .rng import RngSpec
from .sources import (
    CorrelationLaw,
    CsvFormatError,
    PHOTON_OPTIMAL_QUAD,
    SPIN_OPTIMAL_QUAD,
    generate_subruns,
    ingest_counterfactual_csv,
    ingest_csv,
    lhv_generate,
    lhv_model,
    write_counterfactual_csv,
    write_subrun_csv,
)
from .estimators import split_random

__all__ = ["RunConfig", "main"]

RESORTABLE = "re-sortable; Bell bound applies"
NOT_RESORTABLE = "not re-sortable; Bell bound inapplicable"


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation: which command, on what data, with what knobs."""

    command: str
    settings: SettingsQuad | None = None
    n: int | None = None
    n_per: int | None = None
    seed: int | None = None
    mode: str | None = None
    law: CorrelationLaw = CorrelationLaw.PHOTON_MALUS
    model: str = "sign-malus"
    policy: str = "stable"
    trim: bool = False
    steps: int | None = None
    offset_min: float = 0.0
    offset_max: float = 90.0
    in_path: str | None = None
    out_path: str | None = None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _angles(text: str) -> SettingsQuad:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected four comma-separated degrees: a,d,b,c")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle in {text!r}") from None
    try:
        return SettingsQuad.from_degrees(*values)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _law(text: str) -> CorrelationLaw:
    try:
        return CorrelationLaw(text)
    except ValueError:
        choices = ", ".join(law.value for law in CorrelationLaw)
        raise argparse.ArgumentTypeError(f"unknown law {text!r} (choices: {choices})") from None


def _round6(x: float | None) -> float | None:
    return None if x is None else round(float(x), 6)


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _emit_json(obj: dict, out_path: str | None) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out_path)


def _default_quad(law: CorrelationLaw) -> SettingsQuad:
    return PHOTON_OPTIMAL_QUAD if law is CorrelationLaw.PHOTON_MALUS else SPIN_OPTIMAL_QUAD


def _detect_csv_kind(path: str) -> str:
    with open(path, "r", encoding="utf-8", newline="") as stream:
        header = stream.readline()
    fields = {f.strip() for f in header.strip().split(",")}
    if "pair" in fields:
        return "subruns"
    if "j" in fields:
        return "counterfactual"
    raise CsvFormatError(f"unrecognized trial CSV header: {header.strip()!r}")


def cmd_simulate(config: RunConfig) -> int:
    settings = config.settings or _default_quad(config.law)
    rng = RngSpec(config.seed)
    if config.mode == "lhv":
        dataset = lhv_generate(lhv_model(config.model), settings, config.n, rng)
        write_counterfactual_csv(dataset, config.out_path)
    else:
        dataset = generate_subruns(settings, config.law, config.n_per, rng)
        write_subrun_csv(dataset, config.out_path)
    return 0


def cmd_split(config: RunConfig) -> int:
    dataset = ingest_counterfactual_csv(config.in_path)
    subruns = split_random(dataset, RngSpec(config.seed))
    write_subrun_csv(subruns, config.out_path)
    return 0


def _estimate_dict(kind: str, path: str) -> dict:
    if kind == "subruns":
        result = gamma_subruns(ingest_csv(path))
        extra: dict = {}
    else:
        dataset = ingest_counterfactual_csv(path)
        result = gamma_pooled(dataset)
        extra = {"per_trial_max_abs": termwise_bound_check(dataset).max_abs}
    return {
        "kind": kind,
        "gamma": _round6(result.value),
        "per_term": [_round6(t) for t in result.per_term],
        "n_used": list(result.n_used),
        "bound_satisfied": bool(abs(result.value) <= 2.0),
        **extra,
    }


def cmd_estimate(config: RunConfig) -> int:
    kind = _detect_csv_kind(config.in_path)
    _emit_json(_estimate_dict(kind, config.in_path), config.out_path)
    return 0


def _build_policy(config: RunConfig) -> ResortPolicy:
    if config.policy == "uniform-random":
        return ResortPolicy.uniform_random(RngSpec(config.seed))
    return STABLE


def _load_equal_subruns(config: RunConfig):
    dataset = ingest_csv(config.in_path)
    if len(set(dataset.counts)) != 1:
        if not config.trim:
            raise ValueError(
                f"cascade requires equal sub-run lengths, got {dataset.counts} "
                "(pass --trim to truncate all lists to the shortest; lossy)"
            )
        print(
            f"note: trimming sub-run lists {dataset.counts} to {min(dataset.counts)} trials each",
            file=sys.stderr,
        )
        dataset = trim_to_shortest(dataset)
    return dataset


def _report_dict(report) -> dict:
    out = report.to_json_dict()
    out["gamma_subruns"] = _round6(out["gamma_subruns"])
    out["gamma_resorted"] = _round6(out["gamma_resorted"])
    return out


def cmd_resort(config: RunConfig) -> int:
    dataset = _load_equal_subruns(config)
    report = resort_cascade(dataset, _build_policy(config))
    # Closure (or its absence) is a finding, not an error: always exit 0.
    _emit_json(_report_dict(report), config.out_path)
    return 0


def cmd_sweep(config: RunConfig) -> int:
    base = config.settings or _default_quad(config.law)
    rng = RngSpec(config.seed)
    offsets = np.linspace(config.offset_min, config.offset_max, config.steps + 1)
    lines = ["offset_deg,gamma_theory,gamma_empirical"]
    for i, offset in enumerate(offsets):
        # The offset rotates both arm-B analyzers; arm A stays put, so
        # the four pairwise differences (and gamma) actually move.
        quad = SettingsQuad.from_degrees(
            base.a.degrees, base.d.degrees, base.b.degrees + offset, base.c.degrees + offset
        )
        theory = theory_gamma(quad, config.law)
        empirical = gamma_subruns(
            generate_subruns(quad, config.law, config.n_per, rng.derive(i))
        ).value
        lines.append(f"{offset:.2f},{theory:.6f},{empirical:.6f}")
    _emit("\n".join(lines) + "\n", config.out_path)
    return 0


def cmd_audit(config: RunConfig) -> int:
    dataset = _load_equal_subruns(config)
    estimate = _estimate_dict("subruns", config.in_path)
    report = resort_cascade(dataset, _build_policy(config))

    n = len(dataset.ab)
    k_b1 = dataset.ab.b.plus_count()
    k_b3 = dataset.db.b.plus_count()
    counts_match = k_b1 == k_b3
    coincidence = closure_probability(n, k_b1) if counts_match else 0.0
    verdict = RESORTABLE if (report.all_feasible and report.closure) else NOT_RESORTABLE
    _emit_json(
        {
            "estimate": estimate,
            "resort": _report_dict(report),
            "closure_context": {
                "n": n,
                "plus_count_b1": k_b1,
                "plus_count_b3": k_b3,
                "counts_match": counts_match,
                "coincidence_probability": coincidence,
            },
            "verdict": verdict,
        },
        config.out_path,
    )
    return 0


_HANDLERS = {
    "simulate": cmd_simulate,
    "split": cmd_split,
    "estimate": cmd_estimate,
    "resort": cmd_resort,
    "sweep": cmd_sweep,
    "audit": cmd_audit,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chshkit",
        description="Simulate and analyze CHSH trial data: estimators, bounds, re-sorting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a trial CSV")
    sim.add_argument("--mode", choices=("lhv", "qm"), required=True)
    sim.add_argument("--n", type=_positive_int, help="trial count (lhv mode)")
    sim.add_argument("--n-per", type=_positive_int, help="trials per sub-run (qm mode)")
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--angles", type=_angles, metavar="A,D,B,C",
                     help="analyzer angles in degrees (default: optimal quad for the law)")
    sim.add_argument("--law", type=_law, default=CorrelationLaw.PHOTON_MALUS,
                     help="pair-correlation law for qm mode (photon-malus | spin-half)")
    sim.add_argument("--model", default="sign-malus", help="LHV response rule for lhv mode")
    sim.add_argument("--out", required=True, dest="out_path")

    spl = sub.add_parser("split", help="split a counterfactual CSV into random sub-runs")
    spl.add_argument("--in", required=True, dest="in_path")
    spl.add_argument("--seed", type=int, required=True)
    spl.add_argument("--out", required=True, dest="out_path")

    est = sub.add_parser("estimate", help="gamma report from a trial CSV")
    est.add_argument("--in", required=True, dest="in_path")
    est.add_argument("--out", dest="out_path", help="report path (default: stdout)")

    res = sub.add_parser("resort", help="run the re-sorting cascade")
    res.add_argument("--in", required=True, dest="in_path")
    res.add_argument("--trim", action="store_true",
                     help="truncate unequal sub-run lists to the shortest (lossy)")
    res.add_argument("--policy", choices=("stable", "uniform-random"), default="stable")
    res.add_argument("--seed", type=int, help="required with --policy uniform-random")
    res.add_argument("--out", dest="out_path", help="report path (default: stdout)")

    swp = sub.add_parser("sweep", help="angle-offset curve of theory vs empirical gamma")
    swp.add_argument("--steps", type=_positive_int, default=16,
                     help="number of intervals; the CSV gets steps+1 rows")
    swp.add_argument("--offset-min", type=float, default=0.0, dest="offset_min")
    swp.add_argument("--offset-max", type=float, default=90.0, dest="offset_max")
    swp.add_argument("--n-per", type=_positive_int, default=10000)
    swp.add_argument("--seed", type=int, required=True)
    swp.add_argument("--law", type=_law, default=CorrelationLaw.PHOTON_MALUS)
    swp.add_argument("--angles", type=_angles, metavar="A,D,B,C",
                     help="base quad in degrees (default: optimal quad for the law)")
    swp.add_argument("--out", required=True, dest="out_path")

    aud = sub.add_parser("audit", help="estimate + cascade + closure odds, one JSON verdict")
    aud.add_argument("--in", required=True, dest="in_path")
    aud.add_argument("--trim", action="store_true")
    aud.add_argument("--policy", choices=("stable", "uniform-random"), default="stable")
    aud.add_argument("--seed", type=int, help="required with --policy uniform-random")
    aud.add_argument("--out", dest="out_path", help="report path (default: stdout)")

    return parser


def _to_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    if args.command == "simulate":
        if args.mode == "lhv" and args.n is None:
            parser.error("--mode lhv requires --n")
        if args.mode == "qm" and args.n_per is None:
            parser.error("--mode qm requires --n-per")
    if getattr(args, "policy", "stable") == "uniform-random" and args.seed is None:
        parser.error("--seed is required with --policy uniform-random")
    fields = {
        key: value
        for key, value in vars(args).items()
        if key in RunConfig.__dataclass_fields__ and value is not None
    }
    if "angles" in vars(args) and args.angles is not None:
        fields["settings"] = args.angles
    return RunConfig(**fields)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    config = _to_config(args, parser)
    try:
        return _HANDLERS[config.command](config)
    except (CsvFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
