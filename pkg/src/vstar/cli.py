"""Command-line driver.

Exit codes: 0 verified (or a listing was produced), 2 refuted, 3 unknown,
1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance
from .cantor import AbstractInjectionPair, chase, degenerate, fiber_pair, literal_names
from .config import Bounds, SuiteConfig
from .errors import NotDomainPreserving, NotInjective, TargetViolation, VStarError
from .formulas import classify, load_definitions
from .formulas.evaluate import eval3
from .interp import (
    PAIRS,
    REFUTED,
    UNKNOWN,
    VERIFIED,
    CheckReport,
    apply,
    aut_obstruction,
    check_biint,
    check_computable,
    check_defeq,
    default_sample,
    get_interp,
)
from .structured import QuasiStructuredSet, validate
from .theories import build_catalog, catalog, catalog_text, enumerate_models

EXIT = {VERIFIED: 0, REFUTED: 2, UNKNOWN: 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-atoms", type=int, help="largest sample domain (default 3)")
    p.add_argument("--aut-cap", type=int, help="largest domain for automorphism search (default 8)")
    p.add_argument("--group-cap", type=int, help="largest group order compared (default 64)")
    p.add_argument("--rank-cap", type=int, help="level cap for uexists written without one (default 4)")
    p.add_argument("--seed", type=int, help="seed for randomized checks (default 0)")
    p.add_argument("--file", help="definition file layered over the built-in catalog")
    p.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vstar", description="finite-scale checks for structured sets and interpretations")
    sub = parser.add_subparsers(dest="verb", metavar="verb", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("check-theory", help="validate a definition file, or test a model against a theory")
    p.add_argument("target", help="definition file, or a theory name together with --model")
    p.add_argument("--model", help="structured set literal '<domain> ; <structure>'")
    p.add_argument("--layered", action="store_true", help="let the file refer to built-in theories")

    p = sub.add_parser("models", help="list the models of a theory on n atoms")
    p.add_argument("theory")
    p.add_argument("--atoms", type=int, help="domain size (default: --max-atoms)")

    p = sub.add_parser("apply", help="apply an interpretation to a model")
    p.add_argument("interp")
    p.add_argument("--model", required=True, help="structured set literal '<domain> ; <structure>'")
    p.add_argument("--native", action="store_true", help="use the native construction")

    for verb, text in (("defeq", "definitional equivalence"), ("biint", "bi-interpretability")):
        p = sub.add_parser(verb, help=f"check {text} of an interpretation pair")
        p.add_argument("pair", help=f"one of {', '.join(PAIRS)}, or 't,s' interpretation names")

    p = sub.add_parser("obstruct", help="automorphism obstruction between two theories")
    p.add_argument("T")
    p.add_argument("S")

    p = sub.add_parser("cb", help="Cantor-Bernstein construction")
    p.add_argument("t", nargs="?", help="interpretation T -> S (interpretation mode)")
    p.add_argument("s", nargs="?", help="interpretation S -> T (interpretation mode)")
    p.add_argument("--atoms", type=int, default=2, help="fiber size in interpretation mode (default 2)")
    p.add_argument("--example", choices=sorted(acceptance.ABSTRACT_CASES), help="built-in abstract case")
    p.add_argument("--pair-file", help="JSON file with keys T, S, t, s (abstract mode)")

    p = sub.add_parser("computable", help="Lévy class of an interpretation's terms")
    p.add_argument("interp")

    sub.add_parser("suite", help="run every acceptance criterion")

    for sp in sub.choices.values():
        _common(sp)
    return parser


# -- helpers -------------------------------------------------------------------------------------


def _bounds(args) -> Bounds:
    return Bounds().with_(
        max_atoms=args.max_atoms, aut_cap=args.aut_cap, group_cap=args.group_cap, rank_cap=args.rank_cap
    )


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _catalog(args):
    if args.file is None and args.rank_cap is None:
        return catalog()
    cap = _bounds(args).rank_cap
    base = load_definitions(catalog_text(), rank_cap=cap)
    if args.file is None:
        return build_catalog(base)
    return build_catalog(load_definitions(_read(args.file), rank_cap=cap, base=base))


def _sample(theory, args):
    return default_sample(theory, _bounds(args).max_atoms, respect_cap=args.max_atoms is None)


def _resolve_pair(name: str, cat):
    if name in PAIRS:
        t, s = PAIRS[name]
    elif "," in name:
        t, s = (x.strip() for x in name.split(",", 1))
    else:
        raise UsageError(f"unknown pair {name!r}; known: {', '.join(PAIRS)} or 't,s'")
    return get_interp(t, cat), get_interp(s, cat)


def _model(text: str) -> QuasiStructuredSet:
    q = QuasiStructuredSet.parse(text)
    validate(q)
    return q


def _emit(args, report: CheckReport) -> int:
    print(report.to_json(indent=2) if args.json else report.describe())
    return EXIT[report.status]


def _print(args, payload, text: str) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2) if args.json else text)


# -- verbs ---------------------------------------------------------------------------------------


def cmd_check_theory(args) -> int:
    cap = _bounds(args).rank_cap
    if args.model is not None:
        theory = _catalog(args).theory(args.target)
        q = _model(args.model)
        status = {True: VERIFIED, False: REFUTED, None: UNKNOWN}[eval3(theory.formula, q)]
        payload = {"check": "satisfies", "theory": theory.name, "model": q.literal(), "status": status}
        _print(args, payload, f"{theory.name} on {q.literal()}: {status}")
        return EXIT[status]
    base = load_definitions(catalog_text(), rank_cap=cap) if args.layered else None
    defs = load_definitions(_read(args.target), rank_cap=cap, base=base)
    known = set(defs.theories)
    own_theories = [n for n in defs.theories if base is None or n not in base.theories]
    own_interps = [n for n in defs.interps if base is None or n not in base.interps]
    rows, lines = [], []
    for name in own_theories:
        td = defs.theories[name]
        rows.append({"theory": name, "class": str(classify(td.formula)), "infinite": td.infinite})
        lines.append(f"  theory {name}: {classify(td.formula)}{' (infinite)' if td.infinite else ''}")
    for name in own_interps:
        idef = defs.interps[name]
        for side in (idef.source, idef.target):
            if side not in known:
                raise UsageError(f"interpretation {name!r} refers to unknown theory {side!r}")
        cls_d, cls_s = classify(idef.tau_d), classify(idef.tau_s)
        rows.append({"interp": name, "source": idef.source, "target": idef.target,
                     "tau_d": str(cls_d), "tau_s": str(cls_s)})
        lines.append(f"  interp {name} : {idef.source} -> {idef.target}  (tau_d {cls_d}, tau_s {cls_s})")
    head = f"{args.target}: {len(own_theories)} theories, {len(own_interps)} interpretations"
    _print(args, {"file": args.target, "definitions": rows}, "\n".join([head] + lines))
    return 0


def cmd_models(args) -> int:
    theory = _catalog(args).theory(args.theory)
    n = args.atoms if args.atoms is not None else _bounds(args).max_atoms
    ms = enumerate_models(theory, n, max_atoms=args.max_atoms)
    payload = {"theory": theory.name, "atoms": n, "count": len(ms), "note": ms.note,
               "models": [m.literal() for m in ms]}
    text = "\n".join([ms.describe()] + [f"  {m.literal()}" for m in ms])
    _print(args, payload, text)
    return 0


def cmd_apply(args) -> int:
    i = get_interp(args.interp, _catalog(args))
    a = _model(args.model)
    if not i.source.satisfies(a):
        raise UsageError(f"the model does not satisfy {i.source.name}")
    try:
        out = apply(i, a, native=args.native)
    except TargetViolation as e:
        payload = {"interp": i.name, "input": a.literal(), "status": REFUTED, "clause": e.clause, "error": str(e)}
        _print(args, payload, f"{i.name}: {a.literal()}\n  refuted: {e}")
        return EXIT[REFUTED]
    payload = {"interp": i.name, "input": a.literal(), "output": out.literal()}
    _print(args, payload, f"{i.name}: {a.literal()}\n  -> {out.literal()}")
    return 0


def _pair_samples(t, s, args):
    return _sample(t.source, args), _sample(s.source, args)


def cmd_defeq(args) -> int:
    t, s = _resolve_pair(args.pair, _catalog(args))
    return _emit(args, check_defeq(t, s, _pair_samples(t, s, args)))


def cmd_biint(args) -> int:
    t, s = _resolve_pair(args.pair, _catalog(args))
    return _emit(args, check_biint(t, s, _pair_samples(t, s, args), cap=_bounds(args).aut_cap))


def cmd_obstruct(args) -> int:
    cat = _catalog(args)
    T, S = cat.theory(args.T), cat.theory(args.S)
    b = _bounds(args)
    return _emit(args, aut_obstruction(T, S, (_sample(T, args), _sample(S, args)), b.aut_cap, b.group_cap))


def cmd_cb(args) -> int:
    if args.example or args.pair_file:
        if args.example:
            pair = acceptance.ABSTRACT_CASES[args.example][0]
        else:
            data = json.loads(_read(args.pair_file))
            pair = AbstractInjectionPair(data["T"], data["S"], data["t"], data.get("s", {}))
        res = chase(pair)
        show = str
        note = ""
    else:
        if not (args.t and args.s):
            raise UsageError("cb needs two interpretations, --example or --pair-file")
        cat = _catalog(args)
        pair = fiber_pair(get_interp(args.t, cat), get_interp(args.s, cat), args.atoms)
        res = chase(pair)
        show = literal_names
        note = f"degenerate (u = t): {degenerate(res, pair)}"
    payload = {
        "bijective": res.bijective,
        "trace": [{"element": show(st.element), "image": show(st.image), "branch": st.branch,
                   "chain": [show(c) for c in st.chain]} for st in res.trace],
    }
    text = res.describe(show) + (f"\n{note}" if note else "")
    _print(args, payload, text)
    return 0


def cmd_computable(args) -> int:
    i = get_interp(args.interp, _catalog(args))
    return _emit(args, check_computable(i, _sample(i.source, args)))


def cmd_suite(args) -> int:
    cfg = SuiteConfig(seed=args.seed or 0, bounds=_bounds(args))
    results = acceptance.run_all(cfg)
    if args.json:
        # timings stay out of the JSON so that reruns print identical output
        print(json.dumps([c.to_dict() for c in results], ensure_ascii=False, indent=2))
    else:
        for c in results:
            print(c.line())
        print(f"{sum(c.passed for c in results)}/{len(results)} criteria passed")
    return 0 if all(c.passed for c in results) else 2


COMMANDS = {
    "check-theory": cmd_check_theory,
    "models": cmd_models,
    "apply": cmd_apply,
    "defeq": cmd_defeq,
    "biint": cmd_biint,
    "obstruct": cmd_obstruct,
    "cb": cmd_cb,
    "computable": cmd_computable,
    "suite": cmd_suite,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.verb](args)
    except (NotDomainPreserving, NotInjective) as e:
        # a refuted precondition of the construction, not a tool error
        print(f"vstar: refuted: {e}", file=sys.stderr)
        return EXIT[REFUTED]
    except UsageError as e:
        print(f"vstar: error: {e}", file=sys.stderr)
        return 1
    except (VStarError, KeyError, OSError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"vstar: error: {msg}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
