"""Batch command line: build automata, query weights, run the validation
harnesses, generate random expressions.

Exit codes: 0 success (validate: all pass), 1 validation failure, 2 parse
error, 3 unsupported method/weights combination, 4 exploration cap exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import enriched as en
from . import wordexpr as wx
from .algebra import INTEGERS, RankedSymbol, parse_tree
from .automata import explore, to_dot
from .containers import BOOL_EXPR, FINITE_SET, gen_expr, lin_comb
from .treeauto import (
    TopDownContainerTA,
    occurrence_automaton,
    td_explore,
    td_to_dot,
    tree_explore,
    tree_to_dot,
)
from .util import CapExceeded, ExprSyntaxError, UNIT, UnsupportedOperation, render
from .validate import validate_trees, validate_words

EXIT_FAIL, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_CAPS = 1, 2, 3, 4

WORD_CONTAINERS = {
    "bool": lambda: FINITE_SET,
    "int": lambda: lin_comb(INTEGERS),
    "boolexpr": lambda: BOOL_EXPR,
    "genexpr": lambda: gen_expr(INTEGERS),
}


def _parse_word_alphabet(text: str):
    return list(text)


def _parse_tree_alphabet(text: str):
    symbols = []
    for part in text.split(","):
        name, _, arity = part.partition("/")
        symbols.append(RankedSymbol(name.strip(), int(arity)))
    return symbols


def _word_expression(args):
    if args.random is not None:
        seed, size = args.random
        palette = {
            "simple": wx.SIMPLE_OPS,
            "scalar": wx.SCALAR_OPS,
            "boolean": wx.BOOLEAN_OPS,
        }[args.palette]
        return wx.random_expression(seed, size, args.alphabet, palette)
    return wx.parse_expression(args.expression)


def _tree_expression(args, alphabet):
    if args.random is not None:
        seed, size = args.random
        return en.random_tree_expression(seed, size, alphabet)
    return en.parse_tree_expression(args.expression, alphabet)


def _build_word_automaton(e, method: str, weights: str):
    container = WORD_CONTAINERS[weights]()
    if weights == "bool":
        e = wx.coerce_scalars(e, bool)
    if method == "positions":
        auto = wx.position_automaton(e, container)
    elif method == "derivation":
        auto = wx.derivation_automaton(e, container)
    elif method == "inductive":
        auto = wx.inductive_automaton(e, container)
    else:
        raise UnsupportedOperation(f"unknown method {method!r}")
    if auto is None:
        raise UnsupportedOperation(f"{method} does not support this expression")
    return auto


def cmd_build(args) -> int:
    if args.kind == "word":
        e = _word_expression(args)
        auto = _build_word_automaton(e, args.method, args.weights)
        result = explore(auto, args.alphabet, max_states=args.caps)
        if result.truncated:
            raise CapExceeded(f"state cap {args.caps} exceeded", partial=result)
        print(f"expression: {wx.expr_to_text(e)}")
        if args.format == "dot":
            sys.stdout.write(to_dot(result))
        else:
            print(result.dump())
        return 0
    alphabet = args.alphabet
    e = _tree_expression(args, alphabet)
    if args.weights not in ("bool", "int"):
        raise UnsupportedOperation("tree constructions take bool or int weights")
    container = FINITE_SET if args.weights == "bool" else lin_comb(INTEGERS)
    print(f"expression: {en.expression_to_text(e)}")
    if args.method == "positions":
        auto = en.tree_position_automaton(e, container)
    elif args.method == "derivation":
        auto = en.tree_derivation_automaton(e, container)
    elif args.method == "inductive":
        auto = en.tree_inductive_automaton(e, container)
    else:
        raise UnsupportedOperation(f"unknown method {args.method!r}")
    if isinstance(auto, TopDownContainerTA):
        result = td_explore(auto, alphabet, max_states=args.caps)
        if result.truncated:
            raise CapExceeded(f"state cap {args.caps} exceeded", partial=result)
        if args.format == "dot":
            sys.stdout.write(td_to_dot(auto, result))
        else:
            print(result.dump())
    else:
        result = tree_explore(auto, alphabet, max_states=args.caps)
        if result.truncated:
            raise CapExceeded(f"state cap {args.caps} exceeded", partial=result)
        if args.format == "dot":
            sys.stdout.write(tree_to_dot(result))
        else:
            print(result.dump())
    return 0


def cmd_weight(args) -> int:
    if args.kind == "word":
        e = _word_expression(args)
        auto = _build_word_automaton(e, args.method, args.weights)
        print(render(auto.weight(args.input)))
        return 0
    alphabet = args.alphabet
    if args.method == "occurrence":
        subject = parse_tree(args.expression, alphabet)
        auto = occurrence_automaton(subject)
        pattern = parse_tree(args.input, alphabet)
        variables = (UNIT,) * pattern.arity()
        print(render(auto.weight(pattern, variables)))
        return 0
    e = _tree_expression(args, alphabet)
    container = FINITE_SET if args.weights == "bool" else lin_comb(INTEGERS)
    if args.method == "positions":
        auto = en.tree_position_automaton(e, container)
    elif args.method == "derivation":
        auto = en.tree_derivation_automaton(e, container)
    elif args.method == "inductive":
        auto = en.tree_inductive_automaton(e, container)
    else:
        raise UnsupportedOperation(f"unknown method {args.method!r}")
    tree = parse_tree(args.input, alphabet)
    variables = (UNIT,) * tree.arity()
    print(render(auto.weight(tree, variables)))
    return 0


def cmd_validate(args) -> int:
    if args.kind == "word":
        report = validate_words(
            instances=args.instances,
            probes=args.probes,
            seed=args.seed,
            alphabet=args.alphabet,
        )
    else:
        report = validate_trees(
            instances=args.instances,
            probes=args.probes,
            seed=args.seed,
            alphabet=args.alphabet,
        )
    print(report.summary())
    return 0 if report.ok else EXIT_FAIL


def cmd_random(args) -> int:
    if args.kind == "word":
        palette = {
            "simple": wx.SIMPLE_OPS,
            "scalar": wx.SCALAR_OPS,
            "boolean": wx.BOOLEAN_OPS,
        }[args.palette]
        e = wx.random_expression(args.seed, args.size, args.alphabet, palette)
        print(wx.expr_to_text(e))
    else:
        e = en.random_tree_expression(args.seed, args.size, args.alphabet)
        print(en.expression_to_text(e))
    return 0


def _add_common(parser, kind_choices=("word", "tree")):
    parser.add_argument("kind", choices=kind_choices)
    parser.add_argument("--alphabet", default=None, help="word letters or name/arity pairs")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="automonad",
        description="Effect-container automata: build, weigh, validate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct an automaton and print it")
    _add_common(p)
    p.add_argument("expression", nargs="?", help="expression text")
    p.add_argument("--random", nargs=2, type=int, metavar=("SEED", "SIZE"))
    p.add_argument("--method", default="derivation", choices=["positions", "derivation", "inductive"])
    p.add_argument("--weights", default="bool", choices=["bool", "int", "boolexpr", "genexpr"])
    p.add_argument("--palette", default="simple", choices=["simple", "scalar", "boolean"])
    p.add_argument("--caps", type=int, default=100_000)
    p.add_argument("--format", default="dot", choices=["dot", "dump"])
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("weight", help="weight of a word or tree")
    _add_common(p)
    p.add_argument("expression", help="expression text (or subject tree for occurrence)")
    p.add_argument("input", help="word, or tree in name(child,...) form")
    p.add_argument("--random", nargs=2, type=int, metavar=("SEED", "SIZE"))
    p.add_argument(
        "--method",
        default="derivation",
        choices=["positions", "derivation", "inductive", "occurrence"],
    )
    p.add_argument("--weights", default="bool", choices=["bool", "int", "boolexpr", "genexpr"])
    p.set_defaults(fn=cmd_weight)

    p = sub.add_parser("validate", help="cross-method comparison harness")
    _add_common(p)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--probes", type=int, default=100)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("random", help="print a random expression")
    _add_common(p)
    p.add_argument("--size", type=int, default=10)
    p.add_argument("--palette", default="simple", choices=["simple", "scalar", "boolean"])
    p.set_defaults(fn=cmd_random)

    return parser


_FLAG_ARITY = {
    "--alphabet": 1,
    "--seed": 1,
    "--method": 1,
    "--weights": 1,
    "--palette": 1,
    "--caps": 1,
    "--format": 1,
    "--instances": 1,
    "--probes": 1,
    "--size": 1,
    "--random": 2,
}


def _reorder(argv):
    """Allow positionals after flags (`build word --method x "a*"`):
    argparse subparsers cannot intermix them, so sort flags to the back."""
    if not argv:
        return argv
    head, rest = argv[:1], argv[1:]
    positionals, flags = [], []
    i = 0
    while i < len(rest):
        tok = rest[i]
        if tok.startswith("--"):
            take = 1 + _FLAG_ARITY.get(tok.split("=")[0], 0 if "=" in tok else 0)
            if "=" in tok:
                take = 1
            flags.extend(rest[i : i + take])
            i += take
        else:
            positionals.append(tok)
            i += 1
    return head + positionals + flags


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    args = parser.parse_args(_reorder(argv))
    if args.alphabet is None:
        args.alphabet = "abc" if args.kind == "word" else "a/0,b/0,c/0,f/1,h/1,g/2"
    args.alphabet = (
        _parse_word_alphabet(args.alphabet)
        if args.kind == "word"
        else _parse_tree_alphabet(args.alphabet)
    )
    try:
        return args.fn(args)
    except ExprSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedOperation as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPS


if __name__ == "__main__":
    sys.exit(main())
