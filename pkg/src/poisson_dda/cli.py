"""Command-line front end.

Exit codes: 0 on success or PASS, 1 on FAIL, 2 on errors (bad input, budgets).
"""

from __future__ import annotations

import argparse
import csv
import io as _stringio
import os
import random
import sys

from . import io
from .dda import DdaError, dda_run, express_T_in_X, verify_affine_bracket
from .ideal import (DEFAULT_SPAIR_BUDGET, BudgetExceeded, IdealPresentation, groebner,
                    poisson_closure)
from .poisson import (EtaError, NilpotenceCapExceeded, PresentationError, bracket_eval_frac,
                      verify_class_p, verify_poisson_axioms)
from .poly import PolynomialSyntaxError, RationalExpression, format_polynomial, parse_polynomial
from .qmatrix import GridSizeError, enumerate_diagrams, generate_matrix_poisson, strata_table
from .report import ERROR, FAIL, PASS, Report
from .spectrum import EmbeddingError, PrimeCandidate, im_phi_membership, phi

SPAIR_ENV = "POISSON_DDA_SPAIR_BUDGET"
NILPOTENCE_ENV = "POISSON_DDA_NILPOTENCE_CAP"

_EXPECTED = (io.DocumentError, PresentationError, EtaError, NilpotenceCapExceeded,
             BudgetExceeded, EmbeddingError, DdaError, GridSizeError,
             PolynomialSyntaxError, OSError, ValueError, IndexError)


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise SystemExit(f"error: {name} must be an integer, got {raw!r}")
    if value < 1:
        raise SystemExit(f"error: {name} must be positive")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_argument_group("output")
    fmt.add_argument("--format", choices=("text", "json", "csv"), default=None)
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    common.add_argument("--spair-budget", type=_positive, default=None,
                        help=f"S-pair cap for Gröbner bases (env {SPAIR_ENV})")
    common.add_argument("--nilpotence-cap", type=_positive, default=None,
                        help=f"override the presentation's nilpotence cap (env {NILPOTENCE_ENV})")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for the random module; outputs do not depend on it")

    parser = argparse.ArgumentParser(prog="poisson-dda", description=(
        "Poisson deleting derivations, canonical embedding of Poisson primes "
        "and stratum dimensions for Poisson matrices."))
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def cmd(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        return p

    p = cmd("verify", "check the Poisson axioms and the class-P hypothesis")
    p.add_argument("presentation")
    p = cmd("run", "run the deleting derivations algorithm")
    p.add_argument("presentation")
    p = cmd("express", "print T_i as a fraction in the original variables")
    p.add_argument("presentation")
    p.add_argument("--index", type=int, required=True)
    p = cmd("bracket", "evaluate the bracket of two (Laurent) polynomials")
    p.add_argument("presentation")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p = cmd("closure", "smallest Poisson ideal containing the given generators")
    p.add_argument("presentation")
    p.add_argument("--ideal", required=True, help='comma-separated generators, e.g. "X4"')
    for name, flag, help_text in (("phi", "--prime", "image of a Poisson prime under the canonical embedding"),
                                  ("stratum", "--prime", "diagram of the stratum containing a Poisson prime"),
                                  ("im-member", "--ideal", "decide membership in the image of the embedding")):
        p = cmd(name, help_text)
        p.add_argument("presentation")
        p.add_argument(flag, dest="ideal", required=True,
                       help="comma-separated generators" + (" in T1..Tn" if name == "im-member" else ""))
        p.add_argument("--assert-prime", action="store_true",
                       help="declare the ideal prime (required; primality is never checked)")
    p = cmd("qmatrix", "Poisson matrices: bracket data, diagrams and strata")
    p.add_argument("--rows", type=_positive, required=True)
    p.add_argument("--cols", type=_positive, required=True)
    what = p.add_mutually_exclusive_group()
    what.add_argument("--lambda", dest="what", action="store_const", const="lambda")
    what.add_argument("--diagrams", dest="what", action="store_const", const="diagrams")
    what.add_argument("--strata", dest="what", action="store_const", const="strata")
    return parser


# -- helpers --------------------------------------------------------------------------

def _load(args):
    pres = io.load_presentation(args.presentation)
    if args.nilpotence_cap is not None:
        pres = pres.replace(nilpotence_cap=args.nilpotence_cap)
    return pres


def _split_generators(text):
    return [part for part in (s.strip() for s in text.split(",")) if part]


def _ideal(text, pres, prefix="X"):
    names = pres.names if prefix == "X" else None
    gens = [parse_polynomial(s, pres.n, pres.field, names, prefix, laurent=False)
            for s in _split_generators(text)]
    return IdealPresentation.of(gens, pres)


def _matrix_strings(lam):
    return [[io.scalar_str(c) for c in row] for row in lam]


def _frac(F, names=None, prefix="X"):
    num, den = F.to_strings(names, prefix)
    return {"num": num, "den": den}


# -- commands -------------------------------------------------------------------------

def cmd_verify(args, budget):
    pres = _load(args)
    axioms = verify_poisson_axioms(pres)
    if not axioms.ok:
        return Report(FAIL, {"axioms": FAIL}, _diag(axioms.diagnostics, pres))
    cls = verify_class_p(pres)
    payload = {"axioms": PASS, "class_p": cls.status}
    payload.update(cls.payload)
    return Report(cls.status, payload, _diag(cls.diagnostics, pres))


def _diag(diag, pres):
    out = {}
    for k, v in diag.items():
        if hasattr(v, "terms"):
            v = format_polynomial(v, pres.display_names)
        elif isinstance(v, RationalExpression):
            v = _frac(v, pres.display_names)
        out[k] = v
    return out


def cmd_run(args, budget):
    pres = _load(args)
    trace = dda_run(pres)
    names = pres.display_names
    steps = []
    for rec in trace.steps:
        entry = {"j": rec.j, "identity": rec.is_identity}
        if not rec.is_identity:
            entry["eta"] = io.scalar_str(rec.eta)
            entry["bound"] = rec.table.bound
            entry["change_of_variables"] = {
                f"V{i}": format_polynomial(rec.change_of_variables[i - 1], None, "U")
                for i in range(1, rec.j)}
        steps.append(entry)
    cert = verify_affine_bracket(trace)
    payload = {"steps": steps, "lambda_bar": _matrix_strings(trace.lam_bar),
               "T": {f"T{i}": _frac(T, names) for i, T in enumerate(trace.expressions, 1)},
               "certificate": cert.status}
    return Report(cert.status, payload, _diag(cert.diagnostics, pres))


def cmd_express(args, budget):
    pres = _load(args)
    trace = dda_run(pres)
    T = express_T_in_X(trace, args.index)
    return Report(PASS, {"index": args.index, "T": _frac(T, pres.display_names)})


def cmd_bracket(args, budget):
    pres = _load(args)
    f = parse_polynomial(args.f, pres.n, pres.field, pres.names)
    g = parse_polynomial(args.g, pres.n, pres.field, pres.names)
    value = bracket_eval_frac(pres, RationalExpression(f), RationalExpression(g))
    return Report(PASS, {"bracket": _frac(value, pres.display_names)})


def cmd_closure(args, budget):
    pres = _load(args)
    closed = poisson_closure(_ideal(args.ideal, pres), budget)
    gb = groebner(closed, spair_budget=budget)
    return Report(PASS, {"generators": gb.format(pres.display_names), "unit": gb.is_unit()})


def _candidate(args, pres, prefix, budget):
    if not args.assert_prime:
        raise EmbeddingError("primality is never verified; pass --assert-prime to assert it")
    return PrimeCandidate.make(_ideal(args.ideal, pres, prefix), True, budget)


def cmd_phi(args, budget):
    pres = _load(args)
    trace = dda_run(pres)
    result = phi(_candidate(args, pres, "X", budget), trace, budget)
    return Report(PASS, result.to_dict())


def cmd_stratum(args, budget):
    pres = _load(args)
    trace = dda_run(pres)
    result = phi(_candidate(args, pres, "X", budget), trace, budget)
    return Report(PASS, {"diagram": list(result.diagram), "conditional_on_primality": True})


def cmd_im_member(args, budget):
    pres = _load(args)
    trace = dda_run(pres)
    Q = _candidate(args, trace.final, "T", budget)
    result = im_phi_membership(Q, trace, budget)
    cert = result.certificate(pres.display_names)
    return Report(PASS if result.member else FAIL, cert,
                  {} if result.member else {"failing_step": result.failing_step})


def cmd_qmatrix(args, budget):
    m, p = args.rows, args.cols
    what = args.what or "strata"
    if what == "lambda":
        pres = generate_matrix_poisson(m, p)
        trace = dda_run(pres, check=False)
        return Report(PASS, {"names": list(pres.display_names),
                             "lambda_bar": _matrix_strings(trace.lam_bar)})
    if what == "diagrams":
        diagrams = enumerate_diagrams(m, p)
        return Report(PASS, {"count": len(diagrams),
                             "diagrams": [d.bitstring for d in diagrams]})
    reports, counts = strata_table(m, p)
    return Report(PASS, {"count": len(reports), "counts_by_s": {str(k): v for k, v in counts.items()},
                         "strata": [r.to_dict() for r in reports]})


COMMANDS = {"verify": cmd_verify, "run": cmd_run, "express": cmd_express,
            "bracket": cmd_bracket, "closure": cmd_closure, "phi": cmd_phi,
            "stratum": cmd_stratum, "im-member": cmd_im_member, "qmatrix": cmd_qmatrix}


# -- rendering ------------------------------------------------------------------------

def _rows_for_csv(command, report):
    pl = report.payload
    if command == "qmatrix" and "strata" in pl:
        return ["diagram", "r", "rank", "s"], [[s["diagram"], s["r"], s["rank"], s["s"]]
                                               for s in pl["strata"]]
    if command == "qmatrix" and "diagrams" in pl:
        return ["diagram"], [[d] for d in pl["diagrams"]]
    if command == "qmatrix" and "lambda_bar" in pl:
        return [""] + pl["names"], [[name] + row for name, row in zip(pl["names"], pl["lambda_bar"])]
    rows = [["status", report.status]]
    _flatten("", pl, rows)
    _flatten("diagnostics", report.diagnostics, rows)
    return ["key", "value"], rows


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, (list, tuple)) and any(isinstance(v, (dict, list, tuple)) for v in obj):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    elif isinstance(obj, (list, tuple)):
        rows.append([prefix, " ".join(str(v) for v in obj)])
    else:
        rows.append([prefix, obj])


def _text(command, report):
    lines = [report.status]
    _text_lines(report.payload, lines, 0)
    if report.diagnostics:
        lines.append("diagnostics:")
        _text_lines(report.diagnostics, lines, 1)
    return "\n".join(lines) + "\n"


def _text_lines(obj, lines, depth):
    pad = "  " * depth
    for k, v in obj.items():
        if isinstance(v, dict) and set(v) == {"num", "den"}:
            lines.append(f"{pad}{k}: ({v['num']}) / ({v['den']})" if v["den"] != "1"
                         else f"{pad}{k}: {v['num']}")
        elif isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            _text_lines(v, lines, depth + 1)
        elif isinstance(v, list) and v and all(isinstance(r, list) for r in v):
            lines.append(f"{pad}{k}:")
            width = max(len(str(c)) for r in v for c in r)
            lines.extend(f"{pad}  " + " ".join(str(c).rjust(width) for c in r) for r in v)
        elif isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
            lines.append(f"{pad}{k}:")
            for r in v:
                lines.append(f"{pad}  -")
                _text_lines(r, lines, depth + 2)
        elif isinstance(v, list):
            lines.append(f"{pad}{k}: " + (", ".join(str(x) for x in v) if v else "(none)"))
        else:
            lines.append(f"{pad}{k}: {v}")


def render(command, report, fmt):
    if fmt == "json":
        return io.to_json({"command": command, **report.to_dict()})
    if fmt == "csv":
        header, rows = _rows_for_csv(command, report)
        buf = _stringio.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    return _text(command, report)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        random.seed(args.seed)
    budget = args.spair_budget or _env_int(SPAIR_ENV, DEFAULT_SPAIR_BUDGET)
    if args.nilpotence_cap is None:
        env_cap = _env_int(NILPOTENCE_ENV, None)
        if env_cap is not None:
            args.nilpotence_cap = env_cap
    fmt = args.format or "text"
    try:
        report = COMMANDS[args.command](args, budget)
    except _EXPECTED as exc:
        report = Report(ERROR, {}, {"error": type(exc).__name__, "message": str(exc)})
    sys.stdout.write(render(args.command, report, fmt))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
