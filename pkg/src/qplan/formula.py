"""Propositional formula trees.

Atoms are arbitrary hashable labels: fact names (str) at the domain level,
solver variable ids (int) at the encoding level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping


class FormulaError(Exception):
    pass


class Formula:
    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return conj([self, other])

    def __or__(self, other: "Formula") -> "Formula":
        return disj([self, other])

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True)
class Atom(Formula):
    label: Hashable


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple


@dataclass(frozen=True)
class Or(Formula):
    children: tuple


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


def conj(children: Iterable[Formula]) -> Formula:
    cs = tuple(children)
    if len(cs) == 1:
        return cs[0]
    return And(cs)


def disj(children: Iterable[Formula]) -> Formula:
    cs = tuple(children)
    if len(cs) == 1:
        return cs[0]
    return Or(cs)


def atoms(f: Formula) -> set:
    """Labels of all atoms occurring in f."""
    out: set = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.label)
        elif isinstance(g, Not):
            stack.append(g.child)
        elif isinstance(g, (And, Or)):
            stack.extend(g.children)
        elif isinstance(g, (Imp, Iff)):
            stack.append(g.left)
            stack.append(g.right)
    return out


def eval_formula(f: Formula, valuation: Mapping[Any, bool]) -> bool:
    """Standard truth-table semantics; empty conjunction is true, empty
    disjunction false.  Raises FormulaError on an unvalued atom."""
    if isinstance(f, Atom):
        try:
            return bool(valuation[f.label])
        except KeyError:
            raise FormulaError("unvalued atom: %r" % (f.label,)) from None
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not eval_formula(f.child, valuation)
    if isinstance(f, And):
        return all(eval_formula(c, valuation) for c in f.children)
    if isinstance(f, Or):
        return any(eval_formula(c, valuation) for c in f.children)
    if isinstance(f, Imp):
        return (not eval_formula(f.left, valuation)) or eval_formula(f.right, valuation)
    if isinstance(f, Iff):
        return eval_formula(f.left, valuation) == eval_formula(f.right, valuation)
    raise FormulaError("not a formula: %r" % (f,))


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild f with every atom label passed through fn."""
    if isinstance(f, Atom):
        return Atom(fn(f.label))
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(map_atoms(f.child, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(c, fn) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(c, fn) for c in f.children))
    if isinstance(f, Imp):
        return Imp(map_atoms(f.left, fn), map_atoms(f.right, fn))
    if isinstance(f, Iff):
        return Iff(map_atoms(f.left, fn), map_atoms(f.right, fn))
    raise FormulaError("not a formula: %r" % (f,))


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form over And/Or/Atom/Not(Atom)/Const.

    Imp and Iff are expanded; Iff duplicates its operands once per polarity.
    """
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Const):
        return Const(f.value == positive)
    if isinstance(f, Not):
        return nnf(f.child, not positive)
    if isinstance(f, And):
        cs = tuple(nnf(c, positive) for c in f.children)
        return And(cs) if positive else Or(cs)
    if isinstance(f, Or):
        cs = tuple(nnf(c, positive) for c in f.children)
        return Or(cs) if positive else And(cs)
    if isinstance(f, Imp):
        if positive:
            return Or((nnf(f.left, False), nnf(f.right, True)))
        return And((nnf(f.left, True), nnf(f.right, False)))
    if isinstance(f, Iff):
        if positive:
            return And((Or((nnf(f.left, False), nnf(f.right, True))),
                        Or((nnf(f.left, True), nnf(f.right, False)))))
        return Or((And((nnf(f.left, True), nnf(f.right, False))),
                   And((nnf(f.left, False), nnf(f.right, True)))))
    raise FormulaError("not a formula: %r" % (f,))


class DnfBlowup(FormulaError):
    """Term count would exceed the configured cap."""


DNF_CAP = 4096


def to_padded_dnf(f: Formula, cap: int = DNF_CAP):
    """Equivalent disjunctive normal form in which every term mentions
    exactly the atoms occurring in f.

    Returns a list of terms, each a tuple of (label, positive) pairs sorted
    by label; the list is ordered lexicographically with positive literals
    first, contradictory terms dropped and duplicates merged.
    """
    labels = sorted(atoms(f), key=repr)
    terms = _dnf_terms(nnf(f), cap)
    padded: set = set()
    for term in terms:
        missing = [a for a in labels if a not in term]
        expansions = [term]
        for a in missing:
            expansions = [dict(t, **{a: s}) for t in expansions for s in (True, False)]
            if len(expansions) + len(padded) > cap:
                raise DnfBlowup("padded DNF exceeds %d terms" % cap)
        for t in expansions:
            padded.add(tuple(sorted(t.items(), key=lambda kv: repr(kv[0]))))
            if len(padded) > cap:
                raise DnfBlowup("padded DNF exceeds %d terms" % cap)
    return sorted(padded, key=lambda term: [not s for _, s in term])


def _dnf_terms(g: Formula, cap: int):
    """Syntactic DNF of an NNF formula as consistent {label: sign} dicts."""
    if isinstance(g, Atom):
        return [{g.label: True}]
    if isinstance(g, Not):
        return [{g.child.label: False}]
    if isinstance(g, Const):
        return [{}] if g.value else []
    if isinstance(g, Or):
        out = []
        for c in g.children:
            out.extend(_dnf_terms(c, cap))
            if len(out) > cap:
                raise DnfBlowup("DNF exceeds %d terms" % cap)
        return out
    if isinstance(g, And):
        out = [{}]
        for c in g.children:
            branch = _dnf_terms(c, cap)
            nxt = []
            for t in out:
                for b in branch:
                    if any(t.get(k) == (not v) for k, v in b.items()):
                        continue  # complementary pair, term is contradictory
                    m = dict(t)
                    m.update(b)
                    nxt.append(m)
                    if len(nxt) > cap:
                        raise DnfBlowup("DNF exceeds %d terms" % cap)
            out = nxt
        return out
    raise FormulaError("not in NNF: %r" % (g,))
