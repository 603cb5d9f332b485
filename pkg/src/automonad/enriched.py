"""Enriched expressions: one expression type for words and trees.

Atoms are tensor pairs of a symbol with variables; substitution (`Sub`) and
iteration (`Star`) are guarded by a variable, and variables mark where runs
start.  Specialized atom operations recover word regular expressions (the
unique variable is the unit) and tree regular expressions (atoms carry one
variable per child).  Three constructions are provided for each
specialization: positions (via predecessors), derivation and induction.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .algebra import RankedSymbol, StarSemiring
from .automata import WordAutomaton
from .containers import EffectContainer
from .treeauto import BottomUpContainerTA, TopDownContainerTA
from .util import ExprSyntaxError, Inl, Inr, UNIT, UnsupportedOperation, render
from .wordexpr import PosSym

# ---------------------------------------------------------------------------
# Expression type and atoms
# ---------------------------------------------------------------------------


class EnrichedExpression:
    __slots__ = ()


@dataclass(frozen=True)
class EEmpty(EnrichedExpression):
    pass


@dataclass(frozen=True)
class EVar(EnrichedExpression):
    var: Any


@dataclass(frozen=True)
class ETensor(EnrichedExpression):
    atom: Any


@dataclass(frozen=True)
class ESum(EnrichedExpression):
    left: EnrichedExpression
    right: EnrichedExpression


@dataclass(frozen=True)
class ESub(EnrichedExpression):
    """`Sub(v, e1, e2)`: runs of e2 whose uses of v continue into e1."""

    var: Any
    left: EnrichedExpression
    right: EnrichedExpression


@dataclass(frozen=True)
class EStar(EnrichedExpression):
    var: Any
    body: EnrichedExpression


E_EMPTY = EEmpty()


def concat_var(v, e1, e2) -> ESub:
    """Substitution in the conventional tree-expression order."""
    return ESub(v, e2, e1)


@dataclass(frozen=True)
class WordAtom:
    """A word symbol tensored with the unit variable."""

    symbol: Any


@dataclass(frozen=True)
class TreeAtom:
    """A ranked symbol tensored with one variable per child slot."""

    symbol: Any  # RankedSymbol, or PosSym over one after linearization
    vars: tuple


@render.register(EEmpty)
def _render_eempty(_e):
    return "0"


@render.register(EVar)
def _render_evar(e):
    return f"${render(e.var)}"


@render.register(ETensor)
def _render_etensor(e):
    return render(e.atom)


@render.register(WordAtom)
def _render_watom(a):
    return render(a.symbol)


@render.register(TreeAtom)
def _render_tatom(a):
    base = a.symbol
    name = render(base)
    if not a.vars:
        return f"@{name}"
    return f"@{name}(" + ",".join(render(v) for v in a.vars) + ")"


@render.register(ESum)
def _render_esum(e):
    return f"({render(e.left)}+{render(e.right)})"


@render.register(ESub)
def _render_esub(e):
    return f"({render(e.left)}.{render(e.var)} {render(e.right)})"


@render.register(EStar)
def _render_estar(e):
    return f"({render(e.body)})*{render(e.var)}"


@render.register(RankedSymbol)
def _render_ranked(s):
    return s.name


# ---------------------------------------------------------------------------
# Atom operations (the per-tensor dispatch)
# ---------------------------------------------------------------------------


class AtomOps:
    """Everything the generic machinery needs to know about one atom kind."""

    def arity(self, atom) -> int:
        raise NotImplementedError

    def symbol(self, atom):
        raise NotImplementedError

    def variables(self, atom) -> tuple:
        raise NotImplementedError

    def linearize(self, atom, index: int):
        """Return (positioned atom, next index); only symbols are indexed."""
        raise NotImplementedError

    def matches(self, atom, symbol) -> bool:
        """Does an input symbol match this (possibly positioned) atom?"""
        raise NotImplementedError


class WordAtomOps(AtomOps):
    def arity(self, atom):
        return 1

    def symbol(self, atom):
        return atom.symbol

    def variables(self, atom):
        return (UNIT,)

    def linearize(self, atom, index):
        return WordAtom(PosSym(index, atom.symbol)), index + 1

    def matches(self, atom, symbol):
        base = atom.symbol.base if isinstance(atom.symbol, PosSym) else atom.symbol
        return base == symbol


class TreeAtomOps(AtomOps):
    def arity(self, atom):
        return len(atom.vars)

    def symbol(self, atom):
        return atom.symbol

    def variables(self, atom):
        return atom.vars

    def linearize(self, atom, index):
        return TreeAtom(PosSym(index, atom.symbol), atom.vars), index + 1

    def matches(self, atom, symbol):
        base = atom.symbol.base if isinstance(atom.symbol, PosSym) else atom.symbol
        return base == symbol


WORD_ATOMS = WordAtomOps()
TREE_ATOMS = TreeAtomOps()


# ---------------------------------------------------------------------------
# Structural analysis
# ---------------------------------------------------------------------------


def nullable_var(v, e: EnrichedExpression, weights: StarSemiring):
    """Weight of the run that reaches variable `v` through `e`."""
    if isinstance(e, (ETensor, EEmpty)):
        return weights.zero
    if isinstance(e, EVar):
        return weights.one if e.var == v else weights.zero
    if isinstance(e, ESum):
        return weights.plus(
            nullable_var(v, e.left, weights), nullable_var(v, e.right, weights)
        )
    if isinstance(e, ESub):
        n1 = nullable_var(v, e.left, weights)
        n2 = nullable_var(v, e.right, weights)
        if v == e.var:
            return weights.times(n1, n2)
        return weights.plus(
            n2, weights.times(n1, nullable_var(e.var, e.right, weights))
        )
    if isinstance(e, EStar):
        n = nullable_var(v, e.body, weights)
        if v == e.var:
            return weights.star(n)
        return weights.times(n, weights.star(n))
    raise TypeError(f"not an enriched expression: {e!r}")


def variables_of(e: EnrichedExpression, container: EffectContainer):
    """Container of the variables reachable at the start of runs."""
    w = container.weights
    if isinstance(e, (EEmpty, ETensor)):
        return container.neutral
    if isinstance(e, EVar):
        return container.unit(e.var)
    if isinstance(e, ESum):
        return container.combine(
            variables_of(e.left, container), variables_of(e.right, container)
        )
    if isinstance(e, ESub):
        vs2 = variables_of(e.right, container)
        vs1 = variables_of(e.left, container)
        return container.bind(
            vs2, lambda u: vs1 if u == e.var else container.unit(u)
        )
    if isinstance(e, EStar):
        inner = container.combine(container.unit(e.var), variables_of(e.body, container))
        return container.act_right(inner, w.star(nullable_var(e.var, e.body, w)))
    raise TypeError(f"not an enriched expression: {e!r}")


def final_symbols(e: EnrichedExpression, atoms: AtomOps, container: EffectContainer):
    """Container of the (possibly positioned) symbols ending runs of `e`."""
    w = container.weights
    if isinstance(e, (EEmpty, EVar)):
        return container.neutral
    if isinstance(e, ETensor):
        return container.unit(atoms.symbol(e.atom))
    if isinstance(e, ESum):
        return container.combine(
            final_symbols(e.left, atoms, container),
            final_symbols(e.right, atoms, container),
        )
    if isinstance(e, ESub):
        f1 = container.act_right(
            final_symbols(e.left, atoms, container),
            nullable_var(e.var, e.right, w),
        )
        return container.combine(f1, final_symbols(e.right, atoms, container))
    if isinstance(e, EStar):
        return container.act_right(
            final_symbols(e.body, atoms, container),
            w.star(nullable_var(e.var, e.body, w)),
        )
    raise TypeError(f"not an enriched expression: {e!r}")


def final_weight(symbol, e: EnrichedExpression, atoms: AtomOps, weights: StarSemiring):
    """Final weight of one symbol in `e`."""
    if isinstance(e, (EEmpty, EVar)):
        return weights.zero
    if isinstance(e, ETensor):
        return weights.one if atoms.symbol(e.atom) == symbol else weights.zero
    if isinstance(e, ESum):
        return weights.plus(
            final_weight(symbol, e.left, atoms, weights),
            final_weight(symbol, e.right, atoms, weights),
        )
    if isinstance(e, ESub):
        return weights.plus(
            weights.times(
                final_weight(symbol, e.left, atoms, weights),
                nullable_var(e.var, e.right, weights),
            ),
            final_weight(symbol, e.right, atoms, weights),
        )
    if isinstance(e, EStar):
        return weights.times(
            final_weight(symbol, e.body, atoms, weights),
            weights.star(nullable_var(e.var, e.body, weights)),
        )
    raise TypeError(f"not an enriched expression: {e!r}")


def occurs(v, e: EnrichedExpression) -> bool:
    """Does variable `v` occur (as an atom slot, a `Var` or a binder use)?"""
    if isinstance(e, EEmpty):
        return False
    if isinstance(e, EVar):
        return e.var == v
    if isinstance(e, ETensor):
        vars_ = e.atom.vars if isinstance(e.atom, TreeAtom) else (UNIT,)
        return v in vars_
    if isinstance(e, ESum):
        return occurs(v, e.left) or occurs(v, e.right)
    if isinstance(e, ESub):
        return occurs(v, e.left) or occurs(v, e.right)
    if isinstance(e, EStar):
        return occurs(v, e.body)
    raise TypeError(f"not an enriched expression: {e!r}")


def reverse_expression(e: EnrichedExpression) -> EnrichedExpression:
    """Flip the substitution orientation (word atoms are symmetric)."""
    if isinstance(e, (EEmpty, EVar, ETensor)):
        return e
    if isinstance(e, ESum):
        return ESum(reverse_expression(e.left), reverse_expression(e.right))
    if isinstance(e, ESub):
        return ESub(e.var, reverse_expression(e.right), reverse_expression(e.left))
    if isinstance(e, EStar):
        return EStar(e.var, reverse_expression(e.body))
    raise TypeError(f"not an enriched expression: {e!r}")


def aci_normalize(
    e: EnrichedExpression,
    simplify_sub_var: bool = True,
    idempotent: bool = True,
) -> EnrichedExpression:
    """Flatten and sort sums, dropping empty terms; duplicates are removed
    only when addition is idempotent (dedup changes weights over the
    integers).  Optionally rewrites `Sub(v, e, Var v) -> e` when `v` does not
    occur in `e` (tree-state simplification)."""
    if isinstance(e, (EEmpty, EVar, ETensor)):
        return e
    if isinstance(e, ESum):
        terms: list = []

        def collect(node):
            if isinstance(node, ESum):
                collect(node.left)
                collect(node.right)
            else:
                norm = aci_normalize(node, simplify_sub_var, idempotent)
                if not isinstance(norm, EEmpty):
                    terms.append(norm)

        collect(e)
        if idempotent:
            terms = sorted(set(terms), key=render)
        else:
            terms = sorted(terms, key=render)
        if not terms:
            return E_EMPTY
        out = terms[0]
        for t in terms[1:]:
            out = ESum(out, t)
        return out
    if isinstance(e, ESub):
        left = aci_normalize(e.left, simplify_sub_var, idempotent)
        right = aci_normalize(e.right, simplify_sub_var, idempotent)
        if simplify_sub_var and right == EVar(e.var) and not occurs(e.var, left):
            return left
        return ESub(e.var, left, right)
    if isinstance(e, EStar):
        return EStar(e.var, aci_normalize(e.body, simplify_sub_var, idempotent))
    raise TypeError(f"not an enriched expression: {e!r}")


def weighted_sum_decomposition(e: EnrichedExpression, weights: StarSemiring) -> list:
    """Split a top-level sum into (term, multiplicity) pairs; duplicated
    summands accumulate multiplicity in the given semiring."""
    terms: list = []

    def collect(node):
        if isinstance(node, ESum):
            collect(node.left)
            collect(node.right)
        elif not isinstance(node, EEmpty):
            terms.append(node)

    collect(e)
    counted: dict = {}
    for t in terms:
        counted[t] = weights.plus(counted.get(t, weights.zero), weights.one)
    return sorted(counted.items(), key=lambda kv: render(kv[0]))


def linearize(e: EnrichedExpression, atoms: AtomOps, start: int = 1) -> EnrichedExpression:
    """Index the symbol side of every atom; variables stay untouched."""
    counter = start

    def go(node):
        nonlocal counter
        if isinstance(node, ETensor):
            atom, counter2 = atoms.linearize(node.atom, counter)
            counter = counter2
            return ETensor(atom)
        if isinstance(node, ESum):
            return ESum(go(node.left), go(node.right))
        if isinstance(node, ESub):
            return ESub(node.var, go(node.left), go(node.right))
        if isinstance(node, EStar):
            return EStar(node.var, go(node.body))
        return node

    return go(e)


def delinearize(e: EnrichedExpression) -> EnrichedExpression:
    def strip_atom(atom):
        if isinstance(atom, WordAtom) and isinstance(atom.symbol, PosSym):
            return WordAtom(atom.symbol.base)
        if isinstance(atom, TreeAtom) and isinstance(atom.symbol, PosSym):
            return TreeAtom(atom.symbol.base, atom.vars)
        return atom

    if isinstance(e, ETensor):
        return ETensor(strip_atom(e.atom))
    if isinstance(e, ESum):
        return ESum(delinearize(e.left), delinearize(e.right))
    if isinstance(e, ESub):
        return ESub(e.var, delinearize(e.left), delinearize(e.right))
    if isinstance(e, EStar):
        return EStar(e.var, delinearize(e.body))
    return e


def atoms_of(e: EnrichedExpression) -> list:
    out = []

    def walk(node):
        if isinstance(node, ETensor):
            out.append(node.atom)
        elif isinstance(node, ESum):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, ESub):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, EStar):
            walk(node.body)

    walk(e)
    return out


# ---------------------------------------------------------------------------
# Predecessors (position functions)
# ---------------------------------------------------------------------------


def _substitute(container, v, to_add, c):
    """Replace `Inl(v)` atoms inside a container of atom vectors."""

    def subst_one(x):
        if isinstance(x, Inl) and x.value == v:
            return to_add
        return container.unit(x)

    return container.bind(
        c, lambda vect: container.sequence([subst_one(x) for x in vect])
    )


def _finals_and_vars(e, atoms, container):
    return container.combine(
        container.map(Inr, final_symbols(e, atoms, container)),
        container.map(Inl, variables_of(e, container)),
    )


def predecessors(p, e: EnrichedExpression, atoms: AtomOps, container: EffectContainer):
    """Container of the predecessor vectors of a positioned symbol `p`.

    Each vector has one `Inl(var)`/`Inr(symbol)` entry per child slot of `p`
    (a single entry for word symbols)."""
    w = container.weights
    if isinstance(e, (EEmpty, EVar)):
        return container.neutral
    if isinstance(e, ETensor):
        if atoms.symbol(e.atom) == p:
            vect = tuple(Inl(v) for v in atoms.variables(e.atom))
            return container.unit(vect)
        return container.neutral
    if isinstance(e, ESum):
        return container.combine(
            predecessors(p, e.left, atoms, container),
            predecessors(p, e.right, atoms, container),
        )
    if isinstance(e, ESub):
        to_add = _finals_and_vars(e.left, atoms, container)
        return container.combine(
            predecessors(p, e.left, atoms, container),
            _substitute(container, e.var, to_add, predecessors(p, e.right, atoms, container)),
        )
    if isinstance(e, EStar):
        inner = container.combine(
            container.map(Inr, final_symbols(e.body, atoms, container)),
            container.map(
                Inl,
                container.combine(container.unit(e.var), variables_of(e.body, container)),
            ),
        )
        to_add = container.act_right(inner, w.star(nullable_var(e.var, e.body, w)))
        return _substitute(container, e.var, to_add, predecessors(p, e.body, atoms, container))
    raise TypeError(f"not an enriched expression: {e!r}")


# ---------------------------------------------------------------------------
# Position automata
# ---------------------------------------------------------------------------


def word_position_automaton(
    e: EnrichedExpression, container: EffectContainer, variant: str = "reversed"
) -> WordAutomaton:
    """Position automaton of a word-shaped enriched expression.

    `reversed` linearizes the reversed expression and walks predecessor
    links; `forward` keeps the expression and inverts the links.  Both give
    the same weights."""
    w = container.weights
    if variant == "reversed":
        lin = linearize(reverse_expression(e), WORD_ATOMS)

        def delta(x, state):
            if isinstance(state, Inr) and state.value.base == x:
                preds = predecessors(state.value, lin, WORD_ATOMS, container)
                return container.map(lambda vect: vect[0], preds)
            return container.neutral

        def final(state):
            return w.one if isinstance(state, Inl) else w.zero

        return WordAutomaton(container, _finals_and_vars(lin, WORD_ATOMS, container), delta, final)
    if variant != "forward":
        raise ValueError("variant must be 'reversed' or 'forward'")
    lin = linearize(e, WORD_ATOMS)
    positions = [a.symbol for a in atoms_of(lin)]
    pred_list = [
        (q, container.map(lambda vect: vect[0], predecessors(q, lin, WORD_ATOMS, container)))
        for q in positions
    ]

    def succs_of(atom_state):
        out = container.neutral
        for q, preds in pred_list:
            hits = container.bind(
                preds,
                lambda x, q=q: container.unit(Inr(q)) if x == atom_state else container.neutral,
            )
            out = container.combine(out, hits)
        return out

    def delta(x, state):
        if isinstance(state, Inr) and state.value.base == x:
            exit_w = final_weight(state.value, lin, WORD_ATOMS, w)
            return container.combine(
                container.act_left(exit_w, container.unit(Inl(UNIT))),
                succs_of(state),
            )
        return container.neutral

    def final(state):
        return w.one if isinstance(state, Inl) else w.zero

    initial = container.combine(
        succs_of(Inl(UNIT)),
        container.act_left(nullable_var(UNIT, lin, w), container.unit(Inl(UNIT))),
    )
    return WordAutomaton(container, initial, delta, final)


def tree_position_automaton(e: EnrichedExpression, container: EffectContainer) -> TopDownContainerTA:
    """Top-down position automaton: states are variables and positioned
    symbols; transitions follow predecessor vectors."""
    lin = linearize(e, TREE_ATOMS)

    def delta(symbol, state):
        if isinstance(state, Inr):
            pos = state.value
            if pos.base == symbol:
                return predecessors(pos, lin, TREE_ATOMS, container)
        return container.neutral

    def var_weight(state):
        if isinstance(state, Inl):
            return container.unit(state.value)
        return container.neutral

    return TopDownContainerTA(
        container, _finals_and_vars(lin, TREE_ATOMS, container), delta, var_weight
    )


# ---------------------------------------------------------------------------
# Derivation
# ---------------------------------------------------------------------------


def enriched_derive(symbol, e: EnrichedExpression, atoms: AtomOps, container: EffectContainer):
    """Derivative by one (ranked) symbol: a container of vectors of
    continuation expressions, one per child slot."""
    w = container.weights
    if isinstance(e, (EEmpty, EVar)):
        return container.neutral
    if isinstance(e, ETensor):
        if atoms.matches(e.atom, symbol):
            return container.unit(tuple(EVar(v) for v in atoms.variables(e.atom)))
        return container.neutral
    if isinstance(e, ESum):
        return container.combine(
            enriched_derive(symbol, e.left, atoms, container),
            enriched_derive(symbol, e.right, atoms, container),
        )
    if isinstance(e, ESub):
        left = container.act_left(
            nullable_var(e.var, e.right, w),
            enriched_derive(symbol, e.left, atoms, container),
        )
        right = container.map(
            lambda vect: tuple(ESub(e.var, e.left, d) for d in vect),
            enriched_derive(symbol, e.right, atoms, container),
        )
        return container.combine(left, right)
    if isinstance(e, EStar):
        inner = container.map(
            lambda vect: tuple(ESub(e.var, e, d) for d in vect),
            enriched_derive(symbol, e.body, atoms, container),
        )
        return container.act_left(w.star(nullable_var(e.var, e.body, w)), inner)
    raise TypeError(f"not an enriched expression: {e!r}")


def enriched_derive_left(symbol, e: EnrichedExpression, container: EffectContainer):
    """Mirror-image word derivation, consuming the first symbol instead of
    the last; word-shaped expressions only."""
    w = container.weights
    if isinstance(e, (EEmpty, EVar)):
        return container.neutral
    if isinstance(e, ETensor):
        if WORD_ATOMS.matches(e.atom, symbol):
            return container.unit(EVar(UNIT))
        return container.neutral
    if isinstance(e, ESum):
        return container.combine(
            enriched_derive_left(symbol, e.left, container),
            enriched_derive_left(symbol, e.right, container),
        )
    if isinstance(e, ESub):
        left = container.map(
            lambda d: ESub(e.var, d, e.right),
            enriched_derive_left(symbol, e.left, container),
        )
        right = container.act_left(
            nullable_var(e.var, e.left, w),
            enriched_derive_left(symbol, e.right, container),
        )
        return container.combine(left, right)
    if isinstance(e, EStar):
        inner = container.map(
            lambda d: ESub(e.var, d, e),
            enriched_derive_left(symbol, e.body, container),
        )
        return container.act_left(w.star(nullable_var(e.var, e.body, w)), inner)
    raise TypeError(f"not an enriched expression: {e!r}")


def _normalize_states(container, c, simplify_sub_var: bool):
    """ACI-normalize every expression in a derivation step's vectors, folding
    duplicate summands into container coefficients so that normalization
    preserves weights over any semiring."""

    w = container.weights
    idem = w.plus(w.one, w.one) == w.one

    def norm_vector(vect):
        parts = []
        for d in vect:
            normed = aci_normalize(d, simplify_sub_var, idem)
            parts.append(weighted_sum_decomposition(normed, container.weights))
        out = container.neutral
        for combo in itertools.product(*parts):
            weight = container.weights.one
            exprs = []
            for term, k in combo:
                weight = container.weights.times(weight, k)
                exprs.append(term)
            piece = container.act_left(weight, container.unit(tuple(exprs)))
            out = container.combine(out, piece)
        return out

    return container.bind(c, norm_vector)


def word_derivation_automaton(
    e: EnrichedExpression,
    container: EffectContainer,
    orientation: str = "reversed",
    simplify_sub_var: bool = False,
) -> WordAutomaton:
    """Derivation automaton of a word-shaped enriched expression.

    `reversed` derives the reversed expression by the last-read symbol (the
    construction that generalizes to trees); `forward` uses the mirrored
    clause set directly."""
    w = container.weights
    idem = w.plus(w.one, w.one) == w.one
    norm = lambda d: aci_normalize(d, simplify_sub_var, idem)
    if orientation == "reversed":
        start = norm(reverse_expression(e))

        def delta(x, state):
            d = enriched_derive(x, state, WORD_ATOMS, container)
            narrowed = _normalize_states(container, d, simplify_sub_var)
            return container.map(lambda vect: vect[0], narrowed)

    elif orientation == "forward":
        start = norm(e)

        def delta(x, state):
            d = container.map(lambda expr: (expr,), enriched_derive_left(x, state, container))
            narrowed = _normalize_states(container, d, simplify_sub_var)
            return container.map(lambda vect: vect[0], narrowed)

    else:
        raise ValueError("orientation must be 'reversed' or 'forward'")

    return WordAutomaton(
        container,
        container.unit(start),
        delta,
        lambda state: nullable_var(UNIT, state, w),
    )


def tree_derivation_automaton(
    e: EnrichedExpression, container: EffectContainer, simplify_sub_var: bool = True
) -> TopDownContainerTA:
    """Top-down derivation automaton with expression states."""

    w = container.weights
    idem = w.plus(w.one, w.one) == w.one

    def delta(symbol, state):
        d = enriched_derive(symbol, state, TREE_ATOMS, container)
        return _normalize_states(container, d, simplify_sub_var)

    def var_weight(state):
        return variables_of(state, container)

    return TopDownContainerTA(
        container,
        container.unit(aci_normalize(e, simplify_sub_var, idem)),
        delta,
        var_weight,
    )


# ---------------------------------------------------------------------------
# Induction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Pieces:
    """An automaton under construction: a per-variable initial morphism plus
    transition and finality maps."""

    init: Callable[[Any], Any]
    delta: Callable  # word: (symbol, state); tree: (symbol, state tuple)
    final: Callable[[Any], Any]


def _var_pieces(v, container) -> _Pieces:
    w = container.weights
    return _Pieces(
        init=lambda u: container.unit(u),
        delta=lambda *_args: container.neutral,
        final=lambda u: w.one if u == v else w.zero,
    )


def _empty_pieces(container) -> _Pieces:
    return _Pieces(
        init=lambda _u: container.neutral,
        delta=lambda *_args: container.neutral,
        final=lambda _s: container.weights.zero,
    )


def _var_weight_of(p: _Pieces, container, var):
    return container.finality_step(p.init(var), p.final)


def _sum_pieces(p1: _Pieces, p2: _Pieces, container, tree: bool) -> _Pieces:
    def init(u):
        return container.combine(
            container.map(Inl, p1.init(u)), container.map(Inr, p2.init(u))
        )

    def final(s):
        return p1.final(s.value) if isinstance(s, Inl) else p2.final(s.value)

    if tree:

        def delta(symbol, states):
            out = container.neutral
            if all(isinstance(s, Inl) for s in states):
                out = container.combine(
                    out,
                    container.map(
                        Inl, p1.delta(symbol, tuple(s.value for s in states))
                    ),
                )
            if all(isinstance(s, Inr) for s in states):
                out = container.combine(
                    out,
                    container.map(
                        Inr, p2.delta(symbol, tuple(s.value for s in states))
                    ),
                )
            return out

    else:

        def delta(symbol, state):
            if isinstance(state, Inl):
                return container.map(Inl, p1.delta(symbol, state.value))
            return container.map(Inr, p2.delta(symbol, state.value))

    return _Pieces(init, delta, final)


def _sub_pieces(v, p1: _Pieces, p2: _Pieces, container, tree: bool) -> _Pieces:
    """Substitution: runs of p1 hop into p2's configuration for `v` at their
    final states; only p2's states are final."""
    w = container.weights
    base = _sum_pieces(p1, p2, container, tree)

    def hop(state):
        if isinstance(state, Inl):
            return container.combine(
                container.unit(state),
                container.act_left(
                    p1.final(state.value), container.map(Inr, p2.init(v))
                ),
            )
        return container.unit(state)

    if tree:

        def delta(symbol, states):
            return container.bind(base.delta(symbol, states), hop)

    else:

        def delta(symbol, state):
            return container.bind(base.delta(symbol, state), hop)

    def init(u):
        # a zero-length p1 run from u continues straight into p2's v entry;
        # the hop in delta only covers runs that took at least one step
        entry = container.combine(
            container.map(Inl, p1.init(u)),
            container.act_left(
                _var_weight_of(p1, container, u), container.map(Inr, p2.init(v))
            ),
        )
        if u == v:
            return entry
        return container.combine(entry, container.map(Inr, p2.init(u)))

    def final(s):
        return p2.final(s.value) if isinstance(s, Inr) else w.zero

    return _Pieces(init, delta, final)


def _positive_star_pieces(v, p: _Pieces, container, tree: bool) -> _Pieces:
    w = container.weights
    eps = _var_weight_of(p, container, v)
    star_eps = w.star(eps)

    def hop(state):
        return container.combine(
            container.unit(state),
            container.act_left(p.final(state), p.init(v)),
        )

    if tree:

        def delta(symbol, states):
            return container.bind(p.delta(symbol, states), hop)

    else:

        def delta(symbol, state):
            return container.bind(p.delta(symbol, state), hop)

    def init(u):
        if u == v:
            return container.act_left(star_eps, p.init(v))
        return p.init(u)

    def final(s):
        return w.times(p.final(s), star_eps)

    return _Pieces(init, delta, final)


def _tensor_pieces_word(atom: WordAtom, container) -> _Pieces:
    w = container.weights

    def init(u):
        return container.unit(Inl(u))

    def delta(symbol, state):
        if state == Inl(UNIT) and WORD_ATOMS.matches(atom, symbol):
            return container.unit(Inr(atom.symbol))
        return container.neutral

    def final(s):
        return w.one if isinstance(s, Inr) else w.zero

    return _Pieces(init, delta, final)


def _tensor_pieces_tree(atom: TreeAtom, container) -> _Pieces:
    w = container.weights
    expected = tuple(Inl(v) for v in atom.vars)

    def init(u):
        return container.unit(Inl(u))

    def delta(symbol, states):
        if symbol == atom.symbol and states == expected:
            return container.unit(Inr(atom.symbol))
        return container.neutral

    def final(s):
        return w.one if isinstance(s, Inr) else w.zero

    return _Pieces(init, delta, final)


def _inductive_pieces(e: EnrichedExpression, container, tree: bool) -> _Pieces:
    if isinstance(e, EEmpty):
        return _empty_pieces(container)
    if isinstance(e, EVar):
        return _var_pieces(e.var, container)
    if isinstance(e, ETensor):
        if tree:
            return _tensor_pieces_tree(e.atom, container)
        return _tensor_pieces_word(e.atom, container)
    if isinstance(e, ESum):
        return _sum_pieces(
            _inductive_pieces(e.left, container, tree),
            _inductive_pieces(e.right, container, tree),
            container,
            tree,
        )
    if isinstance(e, ESub):
        return _sub_pieces(
            e.var,
            _inductive_pieces(e.left, container, tree),
            _inductive_pieces(e.right, container, tree),
            container,
            tree,
        )
    if isinstance(e, EStar):
        inner = _positive_star_pieces(
            e.var, _inductive_pieces(e.body, container, tree), container, tree
        )
        return _sum_pieces(inner, _var_pieces(e.var, container), container, tree)
    raise TypeError(f"not an enriched expression: {e!r}")


def word_inductive_automaton(e: EnrichedExpression, container: EffectContainer) -> WordAutomaton:
    """Structural construction of a word automaton; the initial configuration
    is the unit variable's."""
    p = _inductive_pieces(e, container, tree=False)
    return WordAutomaton(container, p.init(UNIT), p.delta, p.final)


def tree_inductive_automaton(
    e: EnrichedExpression, container: EffectContainer
) -> BottomUpContainerTA:
    """Structural construction of a bottom-up tree automaton; holes draw
    their configurations from the per-variable initial morphism."""
    p = _inductive_pieces(e, container, tree=True)
    return BottomUpContainerTA(container, p.init, p.delta, p.final)


# ---------------------------------------------------------------------------
# Word expression translation
# ---------------------------------------------------------------------------


def from_word_expression(e) -> EnrichedExpression:
    """Translate a simple word expression (sum/concat/star only) into the
    enriched form over the unit variable."""
    from . import wordexpr as wx

    if isinstance(e, wx.Epsilon):
        return EVar(UNIT)
    if isinstance(e, wx.Empty):
        return E_EMPTY
    if isinstance(e, wx.Sym):
        return ETensor(WordAtom(e.symbol))
    if isinstance(e, wx.Op):
        op = e.operator
        if isinstance(op, wx.Plus):
            return ESum(
                from_word_expression(e.operands[0]), from_word_expression(e.operands[1])
            )
        if isinstance(op, wx.Concat):
            return ESub(
                UNIT,
                from_word_expression(e.operands[0]),
                from_word_expression(e.operands[1]),
            )
        if isinstance(op, wx.Star):
            return EStar(UNIT, from_word_expression(e.operands[0]))
    raise UnsupportedOperation(f"no enriched form for {e!r}")


# ---------------------------------------------------------------------------
# Text format and random generation
# ---------------------------------------------------------------------------

DEFAULT_TREE_ALPHABET = (
    RankedSymbol("a", 0),
    RankedSymbol("b", 0),
    RankedSymbol("c", 0),
    RankedSymbol("f", 1),
    RankedSymbol("h", 1),
    RankedSymbol("g", 2),
)


def expression_to_text(e: EnrichedExpression) -> str:
    if isinstance(e, EEmpty):
        return "0"
    if isinstance(e, EVar):
        return f"${_var_text(e.var)}"
    if isinstance(e, ETensor):
        atom = e.atom
        if isinstance(atom, TreeAtom):
            name = atom.symbol.name if isinstance(atom.symbol, RankedSymbol) else render(atom.symbol)
            if not atom.vars:
                return f"@{name}"
            return f"@{name}(" + ",".join(_var_text(v) for v in atom.vars) + ")"
        return f"@{atom.symbol}"
    if isinstance(e, ESum):
        return f"({expression_to_text(e.left)} + {expression_to_text(e.right)})"
    if isinstance(e, ESub):
        return (
            f"({expression_to_text(e.left)} .{_var_text(e.var)} "
            f"{expression_to_text(e.right)})"
        )
    if isinstance(e, EStar):
        return f"({expression_to_text(e.body)})*{_var_text(e.var)}"
    raise TypeError(f"not an enriched expression: {e!r}")


def _var_text(v) -> str:
    return "()" if v is UNIT else str(v)


class _TreeExprParser:
    """Parser for the enriched tree expression format."""

    def __init__(self, text: str, alphabet: Sequence[RankedSymbol]):
        self.text = text
        self.pos = 0
        self.by_name = {s.name: s for s in alphabet}

    def error(self, message):
        raise ExprSyntaxError(message, self.pos)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def name(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if self.pos == start:
            self.error("expected a name")
        return self.text[start : self.pos]

    def varref(self):
        if self.peek() == "(":
            self.eat("(")
            self.eat(")")
            return UNIT
        return self.name()

    def parse(self):
        e = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek() == "+":
            self.eat("+")
            e = ESum(e, self.term())
        return e

    def term(self):
        e = self.postfix()
        while self.peek() == ".":
            self.eat(".")
            v = self.varref()
            e = ESub(v, e, self.postfix())
        return e

    def postfix(self):
        e = self.atom()
        while self.peek() == "*":
            self.eat("*")
            e = EStar(self.varref(), e)
        return e

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.eat("(")
            e = self.expr()
            self.eat(")")
            return e
        if ch == "0":
            self.pos += 1
            return E_EMPTY
        if ch == "$":
            self.eat("$")
            return EVar(self.varref())
        if ch == "@":
            self.eat("@")
            name = self.name()
            if name not in self.by_name:
                self.error(f"unknown symbol {name!r}")
            symbol = self.by_name[name]
            vars_: list = []
            if self.peek() == "(" and symbol.arity > 0:
                self.eat("(")
                while True:
                    vars_.append(self.varref())
                    if self.peek() == ",":
                        self.eat(",")
                        continue
                    break
                self.eat(")")
            if len(vars_) != symbol.arity:
                self.error(f"symbol {name!r} expects {symbol.arity} variables")
            return ETensor(TreeAtom(symbol, tuple(vars_)))
        self.error("expected an atom")


def parse_tree_expression(
    text: str, alphabet: Sequence[RankedSymbol] = DEFAULT_TREE_ALPHABET
) -> EnrichedExpression:
    """`e1 .v e2`: substitution of the runs of e1 for `v` inside e2; note the
    operand order follows the enriched orientation."""
    return _TreeExprParser(text, alphabet).parse()


def random_tree_expression(
    seed: int,
    size: int,
    alphabet: Sequence[RankedSymbol] = DEFAULT_TREE_ALPHABET,
    variables: Sequence = (UNIT,),
    rng: random.Random | None = None,
) -> EnrichedExpression:
    """Seed-deterministic closed tree expression with about `size` operator
    nodes; Star/Sub binders always find their variable in scope."""
    r = rng if rng is not None else random.Random(seed)
    alphabet = list(alphabet)
    variables = list(variables)
    nullary = [s for s in alphabet if s.arity == 0]

    def atom():
        symbol = r.choice(alphabet)
        return ETensor(TreeAtom(symbol, tuple(r.choice(variables) for _ in range(symbol.arity))))

    def leaf_base():
        return ETensor(TreeAtom(r.choice(nullary), ()))

    def gen(n, star_ok=True):
        if n <= 0:
            return atom() if r.random() < 0.75 else EVar(r.choice(variables))
        kind = r.choice(["sum", "sub", "star"] if star_ok else ["sum", "sub"])
        if kind == "sum":
            left = r.randint(0, n - 1)
            return ESum(gen(left), gen(n - 1 - left))
        if kind == "star":
            v = r.choice(variables)
            body = gen(n - 1, star_ok=False)
            if not occurs(v, body):
                body = ESum(body, atom_with(v))
            # the body must not reach any variable on an empty run, or the
            # star weights in the analysis clauses are undefined over the
            # integers
            from .algebra import BOOLEANS

            if any(nullable_var(u, body, BOOLEANS) for u in variables):
                body = atom_with(v)
            return EStar(v, body)
        v = r.choice(variables)
        left = r.randint(0, n - 1)
        e1 = gen(left)
        e2 = gen(n - 1 - left)
        if not occurs(v, e2):
            e2 = ESum(e2, atom_with(v))
        return ESub(v, e1, e2)

    def atom_with(v):
        usable = [s for s in alphabet if s.arity > 0]
        symbol = r.choice(usable) if usable else nullary[0]
        vars_ = [r.choice(variables) for _ in range(symbol.arity)]
        if symbol.arity:
            vars_[r.randrange(symbol.arity)] = v
        return ETensor(TreeAtom(symbol, tuple(vars_)))

    core = gen(size)
    # close the expression so it denotes nullary trees: substitute every
    # variable's runs by a nullary leaf
    closed = core
    for v in variables:
        if occurs(v, closed):
            closed = ESub(v, leaf_base(), closed)
    return closed
