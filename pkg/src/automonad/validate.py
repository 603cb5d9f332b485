"""Cross-method validation: build every applicable construction from random
expressions and compare weights on random probes.

This is the library's referee: any clause bug in one construction shows up as
a weight disagreement against the others (and, for words, against the
brute-force language oracle).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import enriched as en
from . import wordexpr as wx
from .algebra import BOOLEANS, INTEGERS, Node, RankedSymbol
from .containers import FINITE_SET, lin_comb
from .util import render

INT_LIN = lin_comb(INTEGERS)


@dataclass
class Disagreement:
    instance: int
    expression: str
    probe: str
    left_name: str
    left_weight: Any
    right_name: str
    right_weight: Any

    def __str__(self):
        return (
            f"instance {self.instance} [{self.expression}] on {self.probe or 'ε'}: "
            f"{self.left_name}={render(self.left_weight)} vs "
            f"{self.right_name}={render(self.right_weight)}"
        )


@dataclass
class ValidationReport:
    kind: str
    seed: int
    instances: int
    probes: int
    comparisons: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [
            f"{status} {self.kind} validation: {self.instances} instances x "
            f"{self.probes} probes (seed {self.seed}), "
            f"{self.comparisons} comparisons, {len(self.failures)} disagreements"
        ]
        lines.extend(str(f) for f in self.failures[:10])
        return "\n".join(lines)


def _compare(report, instance, expr_text, probe_text, weights):
    names = list(weights)
    base = names[0]
    for other in names[1:]:
        report.comparisons += 1
        if weights[base] != weights[other]:
            report.failures.append(
                Disagreement(
                    instance,
                    expr_text,
                    probe_text,
                    base,
                    weights[base],
                    other,
                    weights[other],
                )
            )


def sample_word_from(e, rng: random.Random, max_len: int = 10):
    """Draw a word from the expression's language by following random
    derivatives; None when sampling dead-ends."""
    state = e
    out = []
    symbols = sorted(set(wx.symbols_of(e)), key=render)
    for _ in range(max_len):
        if wx.nullable(state, BOOLEANS) and rng.random() < 0.4:
            return tuple(out)
        rng.shuffle(symbols)
        for sym in symbols:
            d = wx.monadic_derive(sym, state, FINITE_SET)
            if d:
                state = wx.aci_normalize(rng.choice(sorted(d, key=render)), BOOLEANS)
                out.append(sym)
                break
        else:
            break
    return tuple(out) if wx.nullable(state, BOOLEANS) else None


def word_probes(e, rng: random.Random, count: int, alphabet, max_len: int = 10):
    """Half uniform random words, half language samples."""
    probes = []
    for _ in range(count // 2):
        probes.append(wx.random_word(rng, alphabet, max_len))
    for _ in range(count - len(probes)):
        w = sample_word_from(e, rng, max_len)
        probes.append(w if w is not None else wx.random_word(rng, alphabet, max_len))
    return probes


def word_constructions(e, include_enriched: bool, mutate: dict | None = None) -> dict:
    """All applicable word constructions, as name -> weight function."""
    eb = wx.coerce_scalars(e, bool)
    builders: dict = {}

    def add(name, auto):
        if auto is None:
            return
        fn = auto.weight
        if mutate and name in mutate:
            fn = mutate[name](fn)
        builders[name] = fn

    add("positions/bool", wx.position_automaton(eb, FINITE_SET))
    add("derivation/bool", wx.derivation_automaton(eb, FINITE_SET))
    add("inductive/bool", wx.inductive_automaton(eb, FINITE_SET))
    add("positions/int", wx.position_automaton(e, INT_LIN))
    add("derivation/int", wx.derivation_automaton(e, INT_LIN))
    add("inductive/int", wx.inductive_automaton(e, INT_LIN))
    if include_enriched:
        ee = en.from_word_expression(e)
        add("positions-rev/bool", en.word_position_automaton(ee, FINITE_SET, "reversed"))
        add("positions-fwd/bool", en.word_position_automaton(ee, FINITE_SET, "forward"))
        add("derivation-right/bool", en.word_derivation_automaton(ee, FINITE_SET, "reversed"))
        add("derivation-left/bool", en.word_derivation_automaton(ee, FINITE_SET, "forward"))
        add("positions-rev/int", en.word_position_automaton(ee, INT_LIN, "reversed"))
        add("positions-fwd/int", en.word_position_automaton(ee, INT_LIN, "forward"))
        add("derivation-right/int", en.word_derivation_automaton(ee, INT_LIN, "reversed"))
        add("derivation-left/int", en.word_derivation_automaton(ee, INT_LIN, "forward"))
        add("inductive-enriched/int", en.word_inductive_automaton(ee, INT_LIN))
    return builders


def validate_words(
    instances: int = 100,
    probes: int = 100,
    seed: int = 0,
    op_count: int = 5,
    alphabet: Sequence = ("a", "b", "c"),
    max_len: int = 10,
    mutate: dict | None = None,
) -> ValidationReport:
    """Cross-method word harness: boolean weights must agree across all
    constructions, integer weights across all weighted ones."""
    report = ValidationReport("word", seed, instances, probes)
    rng = random.Random(seed)
    for i in range(instances):
        simple = i % 2 == 0
        palette = wx.SIMPLE_OPS if simple else wx.SCALAR_OPS
        e = wx.random_expression(0, op_count, alphabet, palette, rng=rng)
        text = wx.expr_to_text(e)
        builders = word_constructions(e, include_enriched=simple, mutate=mutate)
        bool_names = [n for n in builders if n.endswith("/bool")]
        int_names = [n for n in builders if n.endswith("/int")]
        for w in word_probes(e, rng, probes, alphabet, max_len):
            word_text = "".join(str(s) for s in w)
            bool_weights = {n: bool(builders[n](w)) for n in bool_names}
            _compare(report, i, text, word_text, bool_weights)
            int_weights = {n: builders[n](w) for n in int_names}
            _compare(report, i, text, word_text, int_weights)
            # boolean and integer runs must agree on membership
            member = {
                "bool": bool_weights[bool_names[0]],
                "int-nonzero": int_weights[int_names[0]] != 0,
            }
            _compare(report, i, text, word_text, member)
    return report


def random_probe_tree(rng: random.Random, alphabet, max_depth: int = 5):
    nullary = [s for s in alphabet if s.arity == 0]

    def grow(depth):
        if depth >= max_depth or rng.random() < 0.35:
            return Node(rng.choice(nullary))
        sym = rng.choice(list(alphabet))
        return Node(sym, tuple(grow(depth + 1) for _ in range(sym.arity)))

    return grow(0)


def sample_tree_from(e, rng: random.Random, container=FINITE_SET, max_depth: int = 6):
    """Grow a tree accepted by the derivation automaton, top-down."""
    alphabet = sorted(
        {a.symbol for a in en.atoms_of(e)}, key=lambda s: (s.arity, s.name)
    )

    def grow(expr, depth):
        if depth > max_depth:
            return None
        symbols = list(alphabet)
        rng.shuffle(symbols)
        for sym in symbols:
            d = en.enriched_derive(sym, expr, en.TREE_ATOMS, container)
            options = container.support(d)
            if not options:
                continue
            vect = rng.choice(sorted(options, key=render))
            children = []
            for sub in vect:
                child = grow(en.aci_normalize(sub), depth + 1)
                if child is None:
                    break
                children.append(child)
            else:
                return Node(sym, tuple(children))
        return None

    return grow(en.aci_normalize(e), 0)


def tree_probes(e, rng: random.Random, count: int, alphabet, max_depth: int = 5):
    probes = []
    for _ in range(count // 2):
        probes.append(random_probe_tree(rng, alphabet, max_depth))
    for _ in range(count - len(probes)):
        t = sample_tree_from(e, rng)
        probes.append(t if t is not None else random_probe_tree(rng, alphabet, max_depth))
    return probes


def tree_constructions(e, mutate: dict | None = None) -> dict:
    builders: dict = {}

    def add(name, auto):
        fn = auto.weight
        if mutate and name in mutate:
            fn = mutate[name](fn)
        builders[name] = fn

    add("positions/bool", en.tree_position_automaton(e, FINITE_SET))
    add("derivation/bool", en.tree_derivation_automaton(e, FINITE_SET))
    add("inductive/bool", en.tree_inductive_automaton(e, FINITE_SET))
    add("positions/int", en.tree_position_automaton(e, INT_LIN))
    add("derivation/int", en.tree_derivation_automaton(e, INT_LIN))
    add("inductive/int", en.tree_inductive_automaton(e, INT_LIN))
    return builders


def validate_trees(
    instances: int = 100,
    probes: int = 100,
    seed: int = 0,
    size: int = 3,
    alphabet: Sequence[RankedSymbol] = en.DEFAULT_TREE_ALPHABET,
    max_depth: int = 5,
    mutate: dict | None = None,
) -> ValidationReport:
    """Cross-method tree harness: derivation-TD, position-TD and
    inductive-BU must give equal weights."""
    report = ValidationReport("tree", seed, instances, probes)
    rng = random.Random(seed)
    for i in range(instances):
        e = en.random_tree_expression(0, size, alphabet, rng=rng)
        text = en.expression_to_text(e)
        builders = tree_constructions(e, mutate=mutate)
        bool_names = [n for n in builders if n.endswith("/bool")]
        int_names = [n for n in builders if n.endswith("/int")]
        for t in tree_probes(e, rng, probes, alphabet, max_depth):
            tree_text = render(t)
            bool_weights = {n: bool(builders[n](t)) for n in bool_names}
            _compare(report, i, text, tree_text, bool_weights)
            int_weights = {n: builders[n](t) for n in int_names}
            _compare(report, i, text, tree_text, int_weights)
            member = {
                "bool": bool_weights[bool_names[0]],
                "int-nonzero": int_weights[int_names[0]] != 0,
            }
            _compare(report, i, text, tree_text, member)
    return report
