"""Clause matrices, quantified problems, and polarity-aware clausification.

Clauses are canonical tuples of signed variable ids, sorted by variable;
tautologies are dropped at construction.  The clausifier is a one-sided
(Plaisted-Greenbaum style) definitional transformation: formulae already in
clause shape pass through with zero auxiliaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .atlas import VariableAtlas
from .formula import And, Atom, Const, Formula, Not, Or, nnf

Clause = tuple


def make_clause(lits: Iterable[int]) -> Optional[Clause]:
    """Canonical clause, or None for a tautology."""
    seen = {}
    for l in lits:
        v = abs(l)
        prev = seen.get(v)
        if prev is None:
            seen[v] = l
        elif prev != l:
            return None
    return tuple(sorted(seen.values(), key=lambda l: (abs(l), -l)))


class QbfError(Exception):
    pass


@dataclass
class QbfProblem:
    """Prenex CNF problem: alternating quantifier blocks over a matrix."""

    prefix: list  # [(is_existential, (var, ...)), ...] outermost first
    matrix: list  # [Clause, ...]
    atlas: Optional[VariableAtlas] = None
    comments: list = field(default_factory=list)

    def __post_init__(self):
        merged = []
        for q, vs in self.prefix:
            vs = tuple(vs)
            if not vs:
                continue
            if merged and merged[-1][0] == q:
                merged[-1] = (q, merged[-1][1] + vs)
            else:
                merged.append((q, vs))
        self.prefix = merged
        seen: dict = {}
        for bi, (_, vs) in enumerate(self.prefix):
            for v in vs:
                if v in seen:
                    raise QbfError("variable %d in two blocks" % v)
                seen[v] = bi
        for cl in self.matrix:
            for l in cl:
                if abs(l) not in seen:
                    raise QbfError("matrix variable %d not quantified" % abs(l))
        self._block_of = seen

    def block_of(self, var: int) -> int:
        return self._block_of[var]

    def is_existential(self, var: int) -> bool:
        return self.prefix[self._block_of[var]][0]

    @property
    def num_vars(self) -> int:
        return max((v for _, vs in self.prefix for v in vs), default=0)

    def block1_vars(self) -> tuple:
        return self.prefix[0][1] if self.prefix else ()

    def var_occurrence_count(self) -> int:
        return sum(len(c) for c in self.matrix)


def universal_reduce(clause: Clause, problem: QbfProblem) -> Clause:
    """Drop every universal literal quantified inside all existential
    literals of the clause.  Preserves the QBF truth value."""
    exist_blocks = [problem.block_of(abs(l)) for l in clause
                    if problem.is_existential(abs(l))]
    deepest = max(exist_blocks, default=-1)
    return tuple(l for l in clause
                 if problem.is_existential(abs(l))
                 or problem.block_of(abs(l)) < deepest)


def partition(matrix: list) -> list:
    """Connected components of the clause/variable incidence graph.

    Returns a list of clause lists; their union is the input and no two
    share a variable.  Clause order within a component follows the input.
    """
    parent: dict = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for cl in matrix:
        vs = [abs(l) for l in cl]
        for v in vs:
            parent.setdefault(v, v)
        for v in vs[1:]:
            union(vs[0], v)

    groups: dict = {}
    empties = []
    for cl in matrix:
        if not cl:
            empties.append(cl)
            continue
        groups.setdefault(find(abs(cl[0])), []).append(cl)
    out = [grp for _, grp in sorted(groups.items())]
    if empties:
        out.append(empties)
    return out


class Clausifier:
    """Accumulates clauses for formulae over registered variable ids.

    Fresh Tseitin variables are recorded with their defining subformula so
    that a satisfying assignment of the original atoms extends to them by
    evaluation.
    """

    def __init__(self, atlas: VariableAtlas):
        self.atlas = atlas
        self.clauses: list = []
        self.aux_vars: list = []
        self.definitions: dict = {}

    def add(self, f: Formula) -> None:
        g = nnf(f)
        self._assert(g)

    def _emit(self, lits) -> None:
        cl = make_clause(lits)
        if cl is not None:
            self.clauses.append(cl)

    def _assert(self, g: Formula) -> None:
        if isinstance(g, Const):
            if not g.value:
                self.clauses.append(())
            return
        if isinstance(g, And):
            for c in g.children:
                self._assert(c)
            return
        lits = self._disjuncts(g)
        if lits is not None:
            self._emit(lits)

    def _disjuncts(self, g: Formula) -> list:
        """Literals of g seen as a clause, proxying non-literal disjuncts."""
        if isinstance(g, Atom):
            return [g.label]
        if isinstance(g, Not):
            return [-g.child.label]
        if isinstance(g, Const):
            return None if g.value else []
        if isinstance(g, Or):
            lits: list = []
            for c in g.children:
                if isinstance(c, Atom):
                    lits.append(c.label)
                elif isinstance(c, Not):
                    lits.append(-c.child.label)
                elif isinstance(c, Const):
                    if c.value:
                        return None  # clause is trivially true
                elif isinstance(c, Or):
                    sub = self._disjuncts(c)
                    if sub is None:
                        return None
                    lits.extend(sub)
                else:
                    lits.append(self._proxy(c))
            return lits
        # a lone conjunction in clause position
        return [self._proxy(g)]

    def _proxy(self, g: Formula) -> int:
        """Fresh variable t with t -> g asserted (positive polarity only)."""
        t = self.atlas.fresh_tseitin()
        self.aux_vars.append(t)
        self.definitions[t] = g
        if isinstance(g, And):
            for c in g.children:
                if isinstance(c, Const):
                    if not c.value:
                        self._emit([-t])
                    continue
                sub = self._disjuncts(c)
                if sub is None:
                    continue
                self._emit([-t] + sub)
        elif isinstance(g, Or):
            sub = self._disjuncts(g)
            if sub is not None:
                self._emit([-t] + sub)
        else:
            raise QbfError("proxy of non-connective: %r" % (g,))
        return t


def clausify(f: Formula, atlas: VariableAtlas):
    """Clauses plus fresh auxiliary variables for a single formula.

    The formula's atoms must be registered variable ids.  Returns
    (clauses, aux_vars, definitions).
    """
    c = Clausifier(atlas)
    c.add(f)
    return c.clauses, c.aux_vars, c.definitions
