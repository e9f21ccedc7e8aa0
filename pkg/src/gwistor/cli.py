"""Command-line front end: classify, hodge, derive, report, verify.

Exit codes: 0 success, 1 failed verification, 2 usage or parse error,
3 unstable coefficients, 4 derivative outside the invariant span.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .calculus import (
    CurvatureModel,
    NotInInvariantSpan,
    d,
    decompose,
    torsion_report,
    word_name,
)
from .exterior import Form, form_to_json, parse_form, render_form
from .g2 import Coeffs, Unstable, hodge_oracle, is_stable, metric_data, require_stable
from .scalars import ParseError, render_scalar
from .scalars.numbers import Surd

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSTABLE, EXIT_SPAN = 0, 1, 2, 3, 4
VALUE_FLAGS = ("--coeffs", "--form", "--curvature")


class UsageError(Exception):
    pass


def _preprocess(argv: Sequence[str]) -> list[str]:
    # "--coeffs -1,0,1,0,1" would otherwise be read as an unknown option
    out: list[str] = []
    it = iter(argv)
    for arg in it:
        if arg in VALUE_FLAGS:
            nxt = next(it, None)
            out.append(arg if nxt is None else f"{arg}={nxt}")
        else:
            out.append(arg)
    return out


def parse_coeffs(text: str, exact: bool = True) -> Coeffs:
    try:
        c = Coeffs.parse(text.replace("−", "-"))
    except (ParseError, ValueError, KeyError, ZeroDivisionError) as exc:
        raise UsageError(f"bad coefficients {text!r}: {exc}") from exc
    if not exact and any(isinstance(v, Surd) and not v.is_rational() for v in c.f):
        raise UsageError("surd coefficients need --exact")
    return c


def parse_model(text: str) -> CurvatureModel:
    try:
        return CurvatureModel.parse(text)
    except (ParseError, ValueError, KeyError) as exc:
        raise UsageError(f"bad curvature {text!r}: {exc}") from exc


def _form_out(a: Form, fmt: str):
    if fmt == "json":
        return form_to_json(a)
    return render_form(a, fmt)


def _invariant_words(a: Form) -> Optional[dict[str, str]]:
    try:
        parts = decompose(a)
    except (NotInInvariantSpan, ValueError):
        return None
    return {word_name(w): render_scalar(s) for w, s in sorted(parts.items(),
                                                                key=lambda kv: word_name(kv[0]))}


def _emit(payload: dict, fmt: str, plain_lines: list[str], out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(plain_lines) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def classify_payload(c: Coeffs) -> dict:
    st = is_stable(c)
    payload: dict = {"coeffs": c.render(), "stable": st.stable, "f4": str(st.f4),
                     "x": str(st.x), "h": str(st.h)}
    if st.stable:
        md = metric_data(c)
        payload.update({
            "y": str(md.y), "z": str(md.z), "m": str(md.m), "t": str(md.t),
            "metric": [[str(e) for e in row] for row in md.G],
        })
    f0, f1, f2, f3, f4 = c.f
    payload["sasaki_compatible"] = bool(f0 * f0 + f1 * f1 == 1 and f2 == -f0
                                        and f3 == -f1 and f4 == 1)
    return payload


def cmd_classify(args, out) -> int:
    c = parse_coeffs(args.coeffs, exact=args.exact)
    payload = classify_payload(c)
    lines = [f"{k}: {payload[k]}" for k in ("coeffs", "stable", "f4", "x", "h")]
    if payload["stable"]:
        lines += [f"{k}: {payload[k]}" for k in ("y", "z", "m", "t")]
        lines.append("metric:")
        lines += ["  " + "  ".join(row) for row in payload["metric"]]
    lines.append(f"sasaki_compatible: {payload['sasaki_compatible']}")
    _emit(payload, args.format, lines, out)
    return EXIT_OK


def cmd_hodge(args, out) -> int:
    if args.symbolic == bool(args.coeffs):
        raise UsageError("give exactly one of --coeffs and --symbolic")
    c = Coeffs.symbolic() if args.symbolic else parse_coeffs(args.coeffs)
    try:
        a = parse_form(args.form)
    except (ParseError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad form {args.form!r}: {exc}") from exc
    require_stable(c)
    star = hodge_oracle(a, c).simplify()
    words = _invariant_words(star) if star.degree > 0 else None
    payload = {"coeffs": c.render(), "input": form_to_json(a), "star": form_to_json(star),
               "invariant": words}
    lines = [render_form(star, args.format)]
    if words:
        lines.append("in invariant words: " + " + ".join(f"({s})*{w}" for w, s in words.items()))
    _emit(payload, args.format, lines, out)
    return EXIT_OK


def _report_lines(rep) -> list[str]:
    keys = ("calibrated", "cocalibrated", "cocalibration_condition", "p1", "p2",
            "w3_scalar", "pure_w3", "nearly_parallel_c")
    return [f"{k}: {getattr(rep, k)}" for k in keys]


def _report_dict(rep) -> dict:
    data = rep.as_dict()
    return {k: data[k] for k in ("stable", "calibrated", "cocalibrated",
                                 "cocalibration_condition", "p1", "p2", "w3_scalar",
                                 "pure_w3", "nearly_parallel_c")}


def cmd_derive(args, out) -> int:
    c = parse_coeffs(args.coeffs)
    model = parse_model(args.curvature)
    require_stable(c)
    rep = torsion_report(c, model)
    from .g2 import build_sigma

    target = hodge_oracle(build_sigma(c), c) if args.star else build_sigma(c)
    res = d(target, model)
    atoms = {k: render_scalar(v) for k, v in sorted(res.curvature.items()) if not v.is_zero()}
    payload = {
        "coeffs": c.render(),
        "curvature": model.label(),
        "star": bool(args.star),
        "derivative": form_to_json(res.form),
        "invariant": _invariant_words(res.invariant_part) or {},
        "atoms": atoms,
        "report": _report_dict(rep),
    }
    label = "d*sigma" if args.star else "d sigma"
    lines = [f"{label} = {render_form(res.form, args.format)}"]
    if atoms:
        lines.append("curvature atoms: " + ", ".join(f"{k}: {v}" for k, v in atoms.items()))
    lines += _report_lines(rep)
    _emit(payload, args.format, lines, out)
    return EXIT_OK


def cmd_report(args, out) -> int:
    c = parse_coeffs(args.coeffs)
    model = parse_model(args.curvature)
    payload = classify_payload(c)
    lines = [f"stable: {payload['stable']}", f"sasaki_compatible: {payload['sasaki_compatible']}"]
    if payload["stable"]:
        rep = torsion_report(c, model)
        payload["curvature"] = model.label()
        payload["report"] = _report_dict(rep)
        lines += _report_lines(rep)
    _emit(payload, args.format, lines, out)
    return EXIT_OK if payload["stable"] else EXIT_UNSTABLE


def cmd_verify(args, out) -> int:
    from .theorems import SUITES, resolve_seed, summary_table, verify_suite

    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    seed = resolve_seed(args.seed)
    verdicts = verify_suite(args.suite, seed)
    passed = all(v.passed for v in verdicts)
    payload = {"suite": args.suite, "seed": seed, "passed": passed,
               "verdicts": [v.as_dict(timing=args.timing) for v in verdicts]}
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "json" and not args.json:
        out.write(text)
    else:
        out.write(summary_table(verdicts) + "\n")
        out.write(f"seed: {seed}\n{'PASS' if passed else 'FAIL'}\n")
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gwistor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, coeffs_required=True):
        p.add_argument("--coeffs", required=coeffs_required,
                       help="f0,f1,f2,f3,f4 as rationals or sqrt literals")
        p.add_argument("--format", choices=("plain", "latex", "json"), default="plain")

    p = sub.add_parser("classify", help="stability and induced metric")
    common(p)
    p.add_argument("--exact", action="store_true", help="allow sqrt literals")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hodge", help="Hodge star of a form")
    common(p, coeffs_required=False)
    p.add_argument("--form", required=True)
    p.add_argument("--symbolic", action="store_true", help="generic symbolic coefficients")
    p.set_defaults(func=cmd_hodge)

    for name, fn, help_ in (("derive", cmd_derive, "exterior derivative and torsion report"),
                            ("report", cmd_report, "classification plus torsion report")):
        p = sub.add_parser(name, help=help_)
        common(p)
        p.add_argument("--curvature", default="generic", help="generic | flat | constant:K")
        if name == "derive":
            p.add_argument("--star", action="store_true", help="differentiate *sigma")
        p.set_defaults(func=fn)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--seed", type=int)
    p.add_argument("--timing", action="store_true", help="include elapsed seconds in JSON")
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_preprocess(argv))
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"gwistor: error: {exc}\n")
        return EXIT_USAGE
    except Unstable as exc:
        sys.stderr.write(f"gwistor: unstable coefficients: {exc}\n")
        return EXIT_UNSTABLE
    except NotInInvariantSpan as exc:
        sys.stderr.write(f"gwistor: derivative outside the invariant span: {exc}\n")
        return EXIT_SPAN


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
