"""Command-line entry points: ``ratlogic <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import TextIO

from .formula import Atom, negate, solve, substitute
from .interaction import (
    DEFAULT_TRACE_CAP,
    Environment,
    ErrorAt,
    SessionAbort,
    SessionEnd,
    explore,
    format_trace,
    negate_sequent,
    play_session,
    trace_to_kv,
)
from .proof import DEFAULT_DEPTH, check_derivation
from .syntax import (
    ParseError,
    format_formula,
    format_sequent,
    format_skeleton,
    format_test,
    parse_derivation,
    parse_equation,
    parse_formula,
    parse_rule,
    parse_sequent,
    parse_skeleton,
    parse_test,
)
from .tree import RationalTree, to_dot, to_node_text

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _text_or_file(arg: str) -> str:
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _tree_kv(t: RationalTree) -> dict:
    names = {n: f"n{j}" for j, n in enumerate(t.nodes)}
    return {
        "root": names[t.nodes[0]],
        "nodes": {
            names[n]: {
                "label": str(t.node_label(n)),
                "children": {str(i): names[c] for i, c in t.node_children(n).items()},
            }
            for n in t.nodes
        },
    }


def _emit_tree(t: RationalTree, fmt: str, text: str, out: TextIO) -> None:
    if fmt == "dot":
        print(to_dot(t), file=out)
    elif fmt == "kv":
        print(json.dumps(_tree_kv(t), indent=2, ensure_ascii=False), file=out)
    else:
        print(text, file=out)


def cmd_solve(args, out: TextIO, inp: TextIO) -> int:
    e = parse_equation(_text_or_file(args.equation))
    g = solve(e)
    _emit_tree(g, args.format, to_node_text(g), out)
    return EXIT_OK


def cmd_negate(args, out, inp) -> int:
    f = negate(parse_formula(_text_or_file(args.formula)))
    _emit_tree(f, args.format, format_formula(f), out)
    return EXIT_OK


def cmd_subst(args, out, inp) -> int:
    v = parse_formula(args.var)
    if not isinstance(v.label, Atom) or v.label.negated:
        raise ParseError(f"{args.var!r} is not a positive variable")
    f = substitute(parse_formula(_text_or_file(args.formula)), parse_formula(_text_or_file(args.replacement)), v.label)
    _emit_tree(f, args.format, format_formula(f), out)
    return EXIT_OK


def cmd_check(args, out, inp) -> int:
    d = parse_derivation(_read(args.file))
    verdict = check_derivation(d, args.depth, memo=not args.no_memo)
    print(verdict, file=out)
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_skeleton(args, out, inp) -> int:
    d = parse_derivation(_read(args.file))
    _emit_tree(d.skeleton, args.format, format_skeleton(d.skeleton), out)
    return EXIT_OK


def cmd_interact(args, out, inp) -> int:
    test = parse_test(_read(args.test), parse_rule(args.default_rule))
    seq = parse_sequent(_text_or_file(args.sequent))
    verdict = explore(test, negate_sequent(seq), args.depth, memo=not args.no_memo, trace_cap=args.trace_cap)
    if args.format == "kv":
        print(json.dumps(trace_to_kv(verdict), indent=2, ensure_ascii=False), file=out)
    else:
        print(verdict, file=out)
        if args.trace:
            print(format_trace(verdict), file=out)
    return EXIT_FAIL if isinstance(verdict, ErrorAt) else EXIT_OK


def _show_env(env: Environment) -> str:
    if not len(env):
        return "  (empty environment)"
    return "\n".join(f"  [{k}] {g}" for k, g in enumerate(env))


def cmd_repl(args, out: TextIO, inp: TextIO) -> int:
    seq = parse_sequent(_text_or_file(args.sequent))

    def human(p, env):
        print(f"\nposition {p}; environment:", file=out)
        print(_show_env(env), file=out)
        while True:
            print("rule> ", end="", file=out, flush=True)
            line = inp.readline()
            if not line or line.strip() in ("quit", "exit", ":q"):
                raise SessionAbort()
            if not line.strip():
                continue
            try:
                return parse_rule(line.strip())
            except (ParseError, ValueError) as exc:
                print(f"  not a rule ({exc}); try ax(v0,0,1), or(k,i), and(k)", file=out)

    outcome = None
    for event in play_session(negate_sequent(seq), human, args.max_moves):
        print(event, file=out)
        if isinstance(event, SessionEnd):
            outcome = event.winner
    return EXIT_OK if outcome == "proponent" else EXIT_FAIL


def cmd_export(args, out, inp) -> int:
    text = _read(args.file)
    ext = os.path.splitext(args.file)[1]
    if ext == ".deriv":
        d = parse_derivation(text)
        if args.format == "kv":
            doc = {"sequent": format_sequent(d.root), "skeleton": _tree_kv(d.skeleton)}
            print(json.dumps(doc, indent=2, ensure_ascii=False), file=out)
        else:
            _emit_tree(d.skeleton, args.format, format_skeleton(d.skeleton), out)
    elif ext == ".skel":
        if "*" in text:
            t = parse_test(text)
            print(format_test(t), file=out)
        else:
            sk = parse_skeleton(text)
            _emit_tree(sk, args.format, format_skeleton(sk), out)
    else:
        f = parse_formula(text)
        _emit_tree(f, args.format, format_formula(f), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ratlogic", description="Rational formulas, derivations and interaction.")
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = dict(choices=["text", "dot", "kv"], default="text")

    p = sub.add_parser("solve", help="solve a recursive equation 'v0 := F'")
    p.add_argument("equation")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("negate", help="negate a formula")
    p.add_argument("formula")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_negate)

    p = sub.add_parser("subst", help="substitute G for v (and ~G for ~v) in F")
    p.add_argument("formula")
    p.add_argument("replacement")
    p.add_argument("var")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_subst)

    p = sub.add_parser("check", help="check a .deriv file")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--no-memo", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("skeleton", help="print the skeleton of a .deriv file")
    p.add_argument("file")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("interact", help="run a test (.skel) against the negation of a sequent")
    p.add_argument("test")
    p.add_argument("sequent")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--trace-cap", type=int, default=DEFAULT_TRACE_CAP)
    p.add_argument("--trace", action="store_true", help="print the trace records")
    p.add_argument("--format", choices=["text", "kv"], default="text")
    p.add_argument("--default-rule", default="and(0)", help="rule used outside the skeleton's domain")
    p.add_argument("--no-memo", action="store_true")
    p.set_defaults(func=cmd_interact)

    p = sub.add_parser("repl", help="play Proponent against the negation of a sequent")
    p.add_argument("sequent")
    p.add_argument("--max-moves", type=int, default=None)
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("export", help="export a .frm/.skel/.deriv file")
    p.add_argument("file")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_export)
    return ap


def main(argv: list[str] | None = None, stdout: TextIO | None = None, stdin: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    inp = stdin or sys.stdin
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out, inp)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
