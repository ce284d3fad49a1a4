"""Command-line front end: ``hypsupport <command> --input problem.json ...``.

Exit codes: 0 success, 1 invalid input, 2 suite failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cohomology as co
from . import linalg as la
from . import qci, suites, tate
from .errors import HypSupportError, ParseError
from .fields import format_element
from .io import Problem, load_problem, parse_point

EXIT_OK, EXIT_INVALID, EXIT_SUITE, EXIT_USAGE = 0, 1, 2, 64
SUITES = ("detection", "route_agreement", "rank_variety", "representative_independence")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad window {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypsupport", description="Hypersurface support of modules over quantum complete intersections.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True, metavar="PATH")
        p.add_argument("--format", choices=("json", "text"), default="text")
        return p

    command("validate", "check a problem file")

    p = command("tor", "Tor dimensions over one hypersurface")
    p.add_argument("--module", required=True)
    p.add_argument("--point", help='coordinates "c1,c2,..."')
    p.add_argument("--f", help="name of a hypersurface poly in the problem")
    p.add_argument("--window", type=_window)

    p = command("supp", "support at every rational point")
    p.add_argument("--module", required=True)
    p.add_argument("--ext-degree", type=int)
    p.add_argument("--annihilator", action="store_true", help="also report the degree-1 annihilator")

    for name, help_ in (("resolve", "minimal free resolution"), ("ext", "Ext with its degree-2 operators")):
        p = command(name, help_)
        p.add_argument("--module", required=True)
        p.add_argument("--max-degree", type=int)

    p = command("ann", "annihilator of Ext in low degree")
    p.add_argument("--module", required=True)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--d-max", type=int, default=1)
    p.add_argument("--ext-degree", type=int)

    p = command("suite", "run a verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=0)
    p.add_argument("--ext-degree", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--check-ann", action="store_true", help="require exact annihilator zero loci for file modules")
    return parser


# -- commands ----------------------------------------------------------------


def _cmd_validate(prob: Problem, args) -> dict:
    alg = prob.algebra
    return {
        "algebra": alg.describe(),
        "modules": {
            name: {"dim": M.dim, "generators": qci.top_dimension(M), "free": qci.module_is_free(alg, M)}
            for name, M in prob.modules.items()
        },
        "polys": {name: {"terms": f.to_json(), "point": f.point().to_json()} for name, f in prob.polys.items()},
        "points": [P.to_json() for P in prob.points],
    }


def _cmd_tor(prob: Problem, args) -> dict:
    alg = prob.algebra
    M = prob.module(args.module)
    if (args.point is None) == (args.f is None):
        raise UsageError("tor needs exactly one of --point and --f")
    if args.point is not None:
        c = parse_point(alg, args.point)
        point = c
    else:
        c = prob.poly(args.f)
        point = c.point()
    lo, hi = args.window or (0, alg.n + 4)
    dims = tate.tor_dims(alg, M, c, lo, hi)
    return {
        "module": args.module,
        "point": point.to_json(),
        "window": [lo, hi],
        "tor": {str(k): v for k, v in dims.items()},
        "supported": tate.supported_at(alg, M, c),
    }


def _cmd_supp(prob: Problem, args) -> dict:
    alg = prob.algebra
    M = prob.module(args.module)
    e = args.ext_degree or alg.field.e
    rep = tate.support_enumerate(alg, M, e, args.module)
    if args.annihilator:
        ann = co.annihilator_window(alg, M)
        rep.annihilator = ann.to_json() | {"zero_locus": [P.to_json() for P in co.zero_locus(alg, ann, e)]}
    return rep.to_json()


def _cmd_resolve(prob: Problem, args) -> dict:
    alg = prob.algebra
    D = args.max_degree if args.max_degree is not None else alg.n + co.MIN_EXTRA_DEGREES
    res = co.minimal_resolution(alg, prob.module(args.module), D)
    return {"module": args.module, "max_degree": D, "betti": list(res.betti)}


def _cmd_ext(prob: Problem, args) -> dict:
    alg = prob.algebra
    E = co.ext_module(alg, prob.module(args.module), args.max_degree)
    ranks = {
        f"xi{i + 1}": [_rank(E.field, E.operators.ops[i][s]) for s in range(E.top - 1)] for i in range(alg.n)
    }
    return {"module": args.module, "max_degree": E.top, **E.summary(), "operator_ranks": ranks}


def _rank(F, M) -> int:
    return la.rank(F, M) if M.size else 0


def _cmd_ann(prob: Problem, args) -> dict:
    alg = prob.algebra
    M = prob.module(args.module)
    ann = co.annihilator_window(alg, M, args.max_degree, args.d_max)
    e = args.ext_degree or alg.field.e
    out = {"module": args.module, **ann.to_json()}
    out["zero_locus"] = {"ext_degree": e, "points": [P.to_json() for P in co.zero_locus(alg, ann, e)]}
    return out


def _cmd_suite(prob: Problem, args) -> dict:
    alg = prob.algebra
    corpus = dict(prob.modules)
    if args.count:
        corpus.update(suites.named_corpus(alg, args.seed, args.count))
    if not corpus:
        raise UsageError("empty corpus: give modules in the problem file or --count")
    degrees = (args.ext_degree,) if args.ext_degree else suites.relative_degrees(alg)
    D = args.max_degree
    if args.suite == "detection":
        return suites.suite_detection(alg, corpus, degrees, D).to_json()
    if args.suite == "representative_independence":
        if not (args.f and args.g):
            raise UsageError("representative_independence needs --f and --g")
        return suites.suite_representative_independence(alg, prob.poly(args.f), prob.poly(args.g), corpus, D).to_json()
    if args.suite == "route_agreement":
        exact = set(prob.modules) if args.check_ann else set()
        reports = [suites.suite_route_agreement(alg, corpus, e, D, exact) for e in degrees]
    else:
        reports = [suites.suite_rank_variety(alg, corpus, e) for e in degrees]
    return _merge(reports)


def _merge(reports) -> dict:
    cases = []
    for rep in reports:
        cases += [{"ext_degree": rep.corpus["ext_degree"], **c} for c in rep.cases]
    corpus = dict(reports[0].corpus)
    corpus["ext_degree"] = [r.corpus["ext_degree"] for r in reports]
    merged = suites.SuiteReport(reports[0].name, corpus, cases)
    return merged.to_json()


COMMANDS = {
    "validate": _cmd_validate,
    "tor": _cmd_tor,
    "supp": _cmd_supp,
    "resolve": _cmd_resolve,
    "ext": _cmd_ext,
    "ann": _cmd_ann,
    "suite": _cmd_suite,
}


# -- output ------------------------------------------------------------------


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _coords(c) -> str:
    return "[" + ":".join(format_element(x) for x in c) + "]"


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    return "\n".join("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in cells)


def render_text(command: str, report: dict) -> str:
    if command == "validate":
        alg = report["algebra"]
        lines = [
            f"{alg['regime']} algebra over GF({alg['p']}^{alg['e']}): n={alg['n']} l={alg['l']} q={format_element(alg['q'])}"
        ]
        rows = [[name, m["dim"], m["generators"], "yes" if m["free"] else "no"] for name, m in report["modules"].items()]
        if rows:
            lines.append(_table(rows, ["module", "dim", "generators", "free"]))
        for name, f in report["polys"].items():
            lines.append(f"poly {name}: point {_coords(f['point'])}")
        return "\n".join(lines)
    if command == "tor":
        lines = [f"module {report['module']} at {_coords(report['point'])}, window {report['window']}"]
        lines.append(_table([[k, v] for k, v in report["tor"].items()], ["degree", "dim Tor"]))
        lines.append(f"supported: {'yes' if report['supported'] else 'no'}")
        return "\n".join(lines)
    if command == "supp":
        rows = [
            [_coords(r["point"]), "yes" if r["supported"] else "no", " ".join(map(str, r["tor"].values()))]
            for r in report["points"]
        ]
        lines = [f"module {report['module']} over GF({report['algebra']['p']}^{report['ext_degree']})"]
        lines.append(_table(rows, ["point", "supported", "Tor_{n+1} Tor_{n+2}"]))
        lines.append(f"{len(report['supported'])} of {len(rows)} points supported")
        if "annihilator" in report:
            lines.append("zero locus of annihilator: " + " ".join(_coords(c) for c in report["annihilator"]["zero_locus"]))
        return "\n".join(lines)
    if command in ("resolve", "ext"):
        key = "betti" if command == "resolve" else "dims"
        rows = [[s, b] for s, b in enumerate(report[key])]
        out = _table(rows, ["s", "betti" if command == "resolve" else "dim Ext^s"])
        if command == "ext":
            out += f"\nbounded: {'yes' if report['bounded'] else 'no'}"
        return out
    if command == "ann":
        lines = [f"module {report['module']}, window {report['window']}, d_max {report['d_max']}"]
        for p in report["polynomials"]:
            terms = " + ".join(
                f"{format_element(c)}*" + "*".join(f"xi{i + 1}^{k}" if k > 1 else f"xi{i + 1}" for i, k in enumerate(e) if k)
                for e, c in p["terms"]
            )
            lines.append(f"  deg {p['degree']}: {terms}")
        zl = report["zero_locus"]
        lines.append(f"zero locus over ext degree {zl['ext_degree']}: " + (" ".join(_coords(c) for c in zl["points"]) or "empty"))
        return "\n".join(lines)
    if command == "suite":
        rows = [[c["case"], c.get("ext_degree", ""), "ok" if c["passed"] else "FAIL"] for c in report["cases"]]
        head = f"suite {report['suite']}: {report['n_cases'] - report['n_failed']}/{report['n_cases']} passed"
        return head + "\n" + _table(rows, ["case", "e", "result"])
    return json.dumps(report, indent=2, default=_default)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        prob = load_problem(args.input)
        report = COMMANDS[args.command](prob, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except HypSupportError as exc:
        where = getattr(exc, "where", None)
        print(f"error ({type(exc).__name__}): {where + ': ' if where else ''}{exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "json":
        print(json.dumps(report, indent=2, default=_default))
    else:
        print(render_text(args.command, report))
    if args.command == "suite" and not report["passed"]:
        return EXIT_SUITE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
