"""Planning-domain data model and the textual domain format.

A problem instance is a set of ground facts (some observable, some defined
by a formula over base facts), deterministic or nondeterministic operators,
nondeterministic environment rules, an initial-state formula and a goal
formula.  Everything is immutable after parsing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .formula import (And, Atom, Const, FALSE, Formula, Iff, Imp, Not, Or,
                      TRUE, atoms, conj, eval_formula)


class DomainError(Exception):
    pass


class ParseError(DomainError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__("%d:%d: %s" % (line, col, msg))
        self.line = line
        self.col = col


class CapExceeded(DomainError):
    def __init__(self, msg: str, count: int):
        super().__init__(msg)
        self.count = count


@dataclass(frozen=True)
class Fact:
    name: str
    index: int
    observable: bool = False
    definition: Optional[Formula] = None

    @property
    def defined(self) -> bool:
        return self.definition is not None


@dataclass(frozen=True, order=True)
class Lit:
    """Literal over a fact index."""
    fact: int
    positive: bool

    def complement(self) -> "Lit":
        return Lit(self.fact, not self.positive)


@dataclass(frozen=True)
class Operator:
    name: str
    index: int
    precondition: frozenset
    effects: tuple  # one frozenset of Lit per alternative, at least one

    @property
    def deterministic(self) -> bool:
        return len(self.effects) == 1


@dataclass(frozen=True)
class NondetRule:
    name: str
    index: int
    precondition: frozenset
    alternatives: tuple  # at least two frozensets of Lit


@dataclass(frozen=True)
class ProblemInstance:
    facts: tuple
    operators: tuple
    rules: tuple
    init: Formula
    goal: Formula
    fact_by_name: dict = field(compare=False, repr=False, default_factory=dict)

    def fact(self, name: str) -> Fact:
        return self.fact_by_name[name]

    @property
    def base_facts(self) -> tuple:
        return tuple(f for f in self.facts if not f.defined)

    @property
    def defined_facts(self) -> tuple:
        return tuple(f for f in self.facts if f.defined)

    @property
    def observables(self) -> tuple:
        return tuple(f for f in self.facts if f.observable)

    def sizeof_operators(self) -> int:
        return sum(len(o.precondition) + sum(len(e) for e in o.effects)
                   for o in self.operators)


class FactValuation:
    """Truth values for the base facts, with defined facts derived."""

    def __init__(self, instance: ProblemInstance, base: dict):
        self.instance = instance
        self.base = dict(base)
        full = dict(self.base)
        for f in instance.defined_facts:
            full[f.name] = eval_formula(f.definition, full)
        self.values = full

    def __getitem__(self, name: str) -> bool:
        return self.values[name]

    def lit_true(self, lit: Lit) -> bool:
        return self.values[self.instance.facts[lit.fact].name] == lit.positive

    def lits_true(self, lits: Iterable[Lit]) -> bool:
        return all(self.lit_true(l) for l in lits)

    def with_effects(self, lits: Iterable[Lit]) -> "FactValuation":
        base = dict(self.base)
        for l in lits:
            base[self.instance.facts[l.fact].name] = l.positive
        return FactValuation(self.instance, base)

    def key(self) -> tuple:
        return tuple(self.base[f.name] for f in self.instance.base_facts)

    def __eq__(self, other):
        return isinstance(other, FactValuation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        on = [n for n, v in sorted(self.base.items()) if v]
        return "FactValuation(%s)" % " ".join(on)


def dependent(a: Operator, b: Operator) -> bool:
    """Two operators may not execute simultaneously when dependent: an
    effect variable of one occurs in the precondition of the other, or some
    variable occurs with opposite polarity in their effects."""
    eff_a = {l for alt in a.effects for l in alt}
    eff_b = {l for alt in b.effects for l in alt}
    va = {l.fact for l in eff_a}
    vb = {l.fact for l in eff_b}
    if va & {l.fact for l in b.precondition}:
        return True
    if vb & {l.fact for l in a.precondition}:
        return True
    return any(l.complement() in eff_b for l in eff_a)


def enumerate_initial_states(instance: ProblemInstance, cap: int):
    """All valuations of the base facts satisfying the initial-state
    formula, in lexicographic fact-index order (false before true).

    Raises CapExceeded when more than cap states satisfy the formula.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    base = instance.base_facts
    out = []
    count = 0
    for vals in _sat_assignments(instance.init, instance, [f.name for f in base]):
        count += 1
        if count > cap:
            raise CapExceeded("more than %d initial states" % cap, count)
        out.append(FactValuation(instance, vals))
    return out


def _sat_assignments(f: Formula, instance: ProblemInstance, names: list) -> Iterator[dict]:
    """Assignments over `names` satisfying f, with early pruning.

    Defined facts mentioned by f are evaluated from their definitions once
    all base facts are fixed; pruning uses partial evaluation over the base
    facts only.
    """
    mentioned = atoms(f)
    defined = {d.name: d.definition for d in instance.defined_facts
               if d.name in mentioned}

    def full_eval(partial: dict) -> bool:
        vals = dict(partial)
        for n, d in defined.items():
            vals[n] = eval_formula(d, vals)
        return eval_formula(f, vals)

    def rec(i: int, partial: dict) -> Iterator[dict]:
        if i == len(names):
            if full_eval(partial):
                yield dict(partial)
            return
        g = _partial_simplify(f, partial, defined)
        if g is FALSE:
            return
        if g is TRUE and not defined:
            # every completion satisfies f; enumerate tails in lex order
            rest = names[i:]
            for bits in itertools.product((False, True), repeat=len(rest)):
                total = dict(partial)
                total.update(zip(rest, bits))
                yield total
            return
        for v in (False, True):
            partial[names[i]] = v
            yield from rec(i + 1, partial)
            del partial[names[i]]

    yield from rec(0, {})


def _partial_simplify(f: Formula, partial: dict, defined: dict) -> Formula:
    """Three-valued check: TRUE/FALSE when f is decided by partial, f
    otherwise.  Atoms over defined facts stay undecided."""
    if isinstance(f, Atom):
        if f.label in defined:
            return f
        if f.label in partial:
            return TRUE if partial[f.label] else FALSE
        return f
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        c = _partial_simplify(f.child, partial, defined)
        if isinstance(c, Const):
            return FALSE if c.value else TRUE
        return f
    if isinstance(f, And):
        undecided = False
        for c in f.children:
            g = _partial_simplify(c, partial, defined)
            if g is FALSE:
                return FALSE
            if not (isinstance(g, Const) and g.value):
                undecided = True
        return f if undecided else TRUE
    if isinstance(f, Or):
        undecided = False
        for c in f.children:
            g = _partial_simplify(c, partial, defined)
            if g is TRUE:
                return TRUE
            if not (isinstance(g, Const) and not g.value):
                undecided = True
        return f if undecided else FALSE
    if isinstance(f, Imp):
        return _partial_simplify(Or((Not(f.left), f.right)), partial, defined)
    if isinstance(f, Iff):
        l = _partial_simplify(f.left, partial, defined)
        r = _partial_simplify(f.right, partial, defined)
        if isinstance(l, Const) and isinstance(r, Const):
            return TRUE if l.value == r.value else FALSE
        return f
    return f


# ---------------------------------------------------------------------------
# Textual domain format

RESERVED = {
    "fact", "observable", "defined", "operator", "rule", "init", "goal",
    "pre", "post", "eff", "and", "or", "not", "imp", "iff", "true", "false",
}

_DIRECTIVES = ("fact", "observable", "defined", "operator", "rule", "init", "goal")


class _Token:
    __slots__ = ("text", "line", "col")

    def __init__(self, text, line, col):
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str):
    toks = []
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        col = 0
        i = 0
        while i < len(body):
            ch = body[i]
            if ch.isspace():
                i += 1
                continue
            if ch in "()":
                toks.append(_Token(ch, ln, i + 1))
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace() and body[j] not in "()":
                j += 1
            toks.append(_Token(body[i:j], ln, i + 1))
            i = j
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def err(self, msg: str, tok: Optional[_Token] = None):
        if tok is None:
            tok = self.toks[self.pos] if self.pos < len(self.toks) else None
        if tok is None:
            last = self.toks[-1] if self.toks else None
            raise ParseError(msg, last.line if last else 1, last.col if last else 1)
        raise ParseError(msg, tok.line, tok.col)

    def peek(self) -> Optional[str]:
        return self.toks[self.pos].text if self.pos < len(self.toks) else None

    def next(self) -> _Token:
        if self.pos >= len(self.toks):
            self.err("unexpected end of input")
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def parse(self) -> ProblemInstance:
        fact_names: list = []
        fact_set: dict = {}
        observable: set = set()
        definitions: dict = {}
        operators: list = []
        rules: list = []
        init = None
        goal = None
        op_names: set = set()

        def declare(tok: _Token):
            if tok.text in RESERVED:
                self.err("reserved word used as fact name", tok)
            if tok.text in fact_set:
                self.err("duplicate fact %r" % tok.text, tok)
            fact_set[tok.text] = len(fact_names)
            fact_names.append(tok.text)

        def known_fact(tok: _Token) -> str:
            if tok.text not in fact_set:
                self.err("undeclared fact %r" % tok.text, tok)
            return tok.text

        while self.peek() is not None:
            tok = self.next()
            kw = tok.text
            if kw == "fact":
                if self.peek() is None or self.peek() in _DIRECTIVES:
                    self.err("fact declaration needs at least one name", tok)
                while self.peek() is not None and self.peek() not in _DIRECTIVES:
                    declare(self.next())
            elif kw == "observable":
                while self.peek() is not None and self.peek() not in _DIRECTIVES:
                    observable.add(known_fact(self.next()))
            elif kw == "defined":
                name_tok = self.next()
                if name_tok.text in RESERVED:
                    self.err("reserved word used as fact name", name_tok)
                if name_tok.text in fact_set:
                    self.err("duplicate fact %r" % name_tok.text, name_tok)
                fact_set[name_tok.text] = len(fact_names)
                fact_names.append(name_tok.text)
                definitions[name_tok.text] = self.parse_formula(fact_set)
            elif kw == "operator":
                name_tok = self.next()
                if name_tok.text in op_names:
                    self.err("duplicate operator %r" % name_tok.text, name_tok)
                op_names.add(name_tok.text)
                pre, alts = self.parse_pre_effects(fact_set, allow_post=True, tok=tok)
                if not alts:
                    self.err("operator %r has no effects" % name_tok.text, name_tok)
                operators.append(Operator(name_tok.text, len(operators),
                                          frozenset(pre), tuple(alts)))
            elif kw == "rule":
                name_tok = self.next()
                pre, alts = self.parse_pre_effects(fact_set, allow_post=False, tok=tok)
                if len(alts) < 2:
                    self.err("rule %r needs at least two alternatives" % name_tok.text,
                             name_tok)
                rules.append(NondetRule(name_tok.text, len(rules),
                                        frozenset(pre), tuple(alts)))
            elif kw == "init":
                if init is not None:
                    self.err("duplicate init", tok)
                init = self.parse_formula(fact_set)
            elif kw == "goal":
                if goal is not None:
                    self.err("duplicate goal", tok)
                goal = self.parse_formula(fact_set)
            else:
                self.err("expected a directive, got %r" % kw, tok)

        if init is None:
            raise ParseError("missing init", 1, 1)
        if goal is None:
            raise ParseError("missing goal", 1, 1)

        facts = []
        for i, name in enumerate(fact_names):
            facts.append(Fact(name, i, name in observable, definitions.get(name)))
        for f in facts:
            if f.defined:
                for a in atoms(f.definition):
                    if facts[fact_set[a]].defined:
                        raise ParseError(
                            "definition of %r mentions defined fact %r" % (f.name, a),
                            1, 1)
        inst = ProblemInstance(tuple(facts), tuple(operators), tuple(rules),
                               init, goal,
                               fact_by_name={f.name: f for f in facts})
        return inst

    def parse_lits(self, fact_set: dict, stop: set) -> frozenset:
        lits = []
        while True:
            nxt = self.peek()
            if nxt is None or nxt in stop or nxt in _DIRECTIVES:
                break
            tok = self.next()
            text = tok.text
            positive = True
            if text.startswith("-"):
                positive = False
                text = text[1:]
            if text not in fact_set:
                self.err("undeclared fact %r" % text, tok)
            lits.append(Lit(fact_set[text], positive))
        return frozenset(lits)

    def parse_pre_effects(self, fact_set: dict, allow_post: bool, tok: _Token):
        if self.peek() != "pre":
            self.err("expected 'pre'")
        self.next()
        pre = self.parse_lits(fact_set, {"post", "eff"})
        alts = []
        if allow_post and self.peek() == "post":
            self.next()
            eff = self.parse_lits(fact_set, set())
            self._check_consistent(eff, tok)
            alts.append(eff)
            return pre, alts
        while self.peek() == "eff":
            self.next()
            eff = self.parse_lits(fact_set, {"eff"})
            self._check_consistent(eff, tok)
            alts.append(eff)
        return pre, alts

    def _check_consistent(self, lits: frozenset, tok: _Token):
        for l in lits:
            if l.complement() in lits:
                self.err("effect contains a literal and its complement", tok)

    def parse_formula(self, fact_set: dict) -> Formula:
        tok = self.next()
        if tok.text == "(":
            head = self.next()
            op = head.text
            if op == "true":
                self.expect_close()
                return TRUE
            if op == "false":
                self.expect_close()
                return FALSE
            args = []
            while self.peek() != ")":
                if self.peek() is None:
                    self.err("unterminated formula", head)
                args.append(self.parse_formula(fact_set))
            self.next()  # )
            if op == "and":
                return And(tuple(args))
            if op == "or":
                return Or(tuple(args))
            if op == "not":
                if len(args) != 1:
                    self.err("not takes one argument", head)
                return Not(args[0])
            if op == "imp":
                if len(args) != 2:
                    self.err("imp takes two arguments", head)
                return Imp(args[0], args[1])
            if op == "iff":
                if len(args) != 2:
                    self.err("iff takes two arguments", head)
                return Iff(args[0], args[1])
            self.err("unknown connective %r" % op, head)
        if tok.text in _DIRECTIVES or tok.text in (")",):
            self.err("expected a formula", tok)
        if tok.text not in fact_set:
            self.err("undeclared fact %r" % tok.text, tok)
        return Atom(tok.text)

    def expect_close(self):
        tok = self.next()
        if tok.text != ")":
            self.err("expected ')'", tok)


def parse_domain(text: str) -> ProblemInstance:
    """Parse the textual domain format into a validated instance."""
    return _Parser(text).parse()


def format_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return str(f.label)
    if isinstance(f, Const):
        return "(true)" if f.value else "(false)"
    if isinstance(f, Not):
        return "(not %s)" % format_formula(f.child)
    if isinstance(f, And):
        return "(and%s)" % "".join(" " + format_formula(c) for c in f.children)
    if isinstance(f, Or):
        return "(or%s)" % "".join(" " + format_formula(c) for c in f.children)
    if isinstance(f, Imp):
        return "(imp %s %s)" % (format_formula(f.left), format_formula(f.right))
    if isinstance(f, Iff):
        return "(iff %s %s)" % (format_formula(f.left), format_formula(f.right))
    raise DomainError("not a formula: %r" % (f,))


def print_domain(instance: ProblemInstance) -> str:
    """Canonical text for an instance; parse(print(i)) is structurally i."""
    lines = []
    base = [f.name for f in instance.facts if not f.defined]
    if base:
        lines.append("fact " + " ".join(base))
    for f in instance.facts:
        if f.defined:
            lines.append("defined %s %s" % (f.name, format_formula(f.definition)))
    obs = [f.name for f in instance.observables]
    if obs:
        lines.append("observable " + " ".join(obs))

    def lit_str(l: Lit) -> str:
        name = instance.facts[l.fact].name
        return name if l.positive else "-" + name

    def lits_str(ls) -> str:
        return " ".join(lit_str(l) for l in sorted(ls))

    for o in instance.operators:
        if o.deterministic:
            lines.append("operator %s pre %s post %s"
                         % (o.name, lits_str(o.precondition), lits_str(o.effects[0])))
        else:
            effs = " ".join("eff " + lits_str(e) for e in o.effects)
            lines.append("operator %s pre %s %s"
                         % (o.name, lits_str(o.precondition), effs))
    for r in instance.rules:
        effs = " ".join("eff " + lits_str(e) for e in r.alternatives)
        lines.append("rule %s pre %s %s" % (r.name, lits_str(r.precondition), effs))
    lines.append("init " + format_formula(instance.init))
    lines.append("goal " + format_formula(instance.goal))
    return "\n".join(lines) + "\n"
