"""Analysis command line: dump, report, fit, compare.

Exit codes: 0 success, 2 parse/usage errors, 3 insufficient data.
"""

import argparse
import json
import sys
from pathlib import Path

from . import analysis, profiling, tracing
from .errors import InsufficientDataError, ParseError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INSUFFICIENT = 3


def _cmd_dump(args) -> int:
    archive = tracing.read_archive(args.archive_dir)
    for line in analysis.dump_trace_lines(archive):
        print(line)
    return EXIT_OK


def _cmd_report(args) -> int:
    profile_path = Path(args.profile)
    doc = profiling.read_profile(profile_path)
    definitions = profile_path.parent / tracing.DEFINITIONS_FILENAME
    regions_by_id = None
    if definitions.exists():
        regions, _ = tracing.read_definitions(profile_path.parent)
        regions_by_id = {r.id: r for r in regions}
    rows = analysis.profile_rows(doc, regions_by_id)
    print(analysis.render_report(rows, args.sort))
    return EXIT_OK


def _model_to_json(model: analysis.OverheadModel) -> dict:
    return {
        "instrumenter": model.instrumenter,
        "case": model.case,
        "alpha_s": model.alpha_s,
        "beta_s": model.beta_s,
        "n_points": model.n_points,
        "formatted": analysis.format_model(model),
    }


def _cmd_fit(args) -> int:
    samples = analysis.read_samples_csv(args.samples)
    if args.group is not None:
        label, _, case = args.group.partition(",")
        if not label or not case:
            raise ParseError(args.samples, f"--group expects 'label,case', got {args.group!r}")
        model = analysis.fit_overhead(samples, (label, case))
        print(json.dumps(_model_to_json(model), indent=2))
    else:
        models = analysis.fit_all(samples)
        if not models:
            raise InsufficientDataError("samples file holds no rows")
        print(json.dumps([_model_to_json(m) for m in models], indent=2))
    return EXIT_OK


def _load_model(path) -> analysis.OverheadModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParseError(path, "fit file not found") from None
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.msg, exc.lineno) from None
    if isinstance(doc, list) and len(doc) == 1:
        doc = doc[0]
    if not isinstance(doc, dict) or "alpha_s" not in doc or "beta_s" not in doc:
        raise ParseError(path, "expected a fit object with alpha_s and beta_s")
    return analysis.OverheadModel(
        alpha_s=float(doc["alpha_s"]),
        beta_s=float(doc["beta_s"]),
        instrumenter=str(doc.get("instrumenter", "")),
        case=str(doc.get("case", "")),
        n_points=int(doc.get("n_points", 0)),
    )


def _cmd_compare(args) -> int:
    model_a = _load_model(args.fit_a)
    model_b = _load_model(args.fit_b)
    delta = analysis.compare_overheads(model_a, model_b)
    print(
        json.dumps(
            {
                "a": _model_to_json(model_a),
                "b": _model_to_json(model_b),
                "delta_alpha_s": delta.dalpha_s,
                "delta_beta_s": delta.dbeta_s,
                "delta_beta_us": delta.dbeta_s * 1e6,
            },
            indent=2,
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracelet-analyze",
        description="Inspect trace archives and profiles; fit and compare overhead models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dump = sub.add_parser("dump", help="chronological per-location event listing")
    p_dump.add_argument("archive_dir")
    p_dump.set_defaults(func=_cmd_dump)

    p_report = sub.add_parser("report", help="flat call-path table from a profile.json")
    p_report.add_argument("profile")
    p_report.add_argument("--sort", choices=analysis.SORT_KEYS, default="inclusive")
    p_report.set_defaults(func=_cmd_report)

    p_fit = sub.add_parser("fit", help="fit t = alpha + beta*N to a samples CSV")
    p_fit.add_argument("samples")
    p_fit.add_argument("--group", help="restrict to one 'instrumenter,case' group")
    p_fit.set_defaults(func=_cmd_fit)

    p_compare = sub.add_parser("compare", help="difference of two fit outputs (a - b)")
    p_compare.add_argument("fit_a")
    p_compare.add_argument("fit_b")
    p_compare.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT


if __name__ == "__main__":
    sys.exit(main())
