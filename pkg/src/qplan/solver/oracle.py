"""Naive expansion oracle for QBF truth.

Recursive substitution over the prefix, no propagation, no pruning: the
ground truth the search engine is tested against.  Guarded to 24 variables.
"""

from __future__ import annotations

ORACLE_VAR_GUARD = 24


class OracleGuardError(Exception):
    pass


def expand_eval(problem) -> bool:
    """Truth value by the textbook substitution semantics."""
    order = []
    quant = {}
    for is_e, vs in problem.prefix:
        for v in vs:
            order.append(v)
            quant[v] = is_e
    if len(order) > ORACLE_VAR_GUARD:
        raise OracleGuardError("expansion oracle limited to %d variables"
                               % ORACLE_VAR_GUARD)
    return _expand(order, 0, quant, [tuple(c) for c in problem.matrix])


def _expand(order, i, quant, clauses) -> bool:
    if any(len(c) == 0 for c in clauses):
        return False
    if not clauses:
        return True
    if i == len(order):
        # no quantified variables left; remaining clauses mention none
        return not clauses
    v = order[i]
    results = []
    for value in (True, False):
        reduced = []
        for c in clauses:
            lits = []
            satisfied = False
            for l in c:
                if abs(l) == v:
                    if (l > 0) == value:
                        satisfied = True
                        break
                else:
                    lits.append(l)
            if not satisfied:
                reduced.append(tuple(lits))
        results.append(_expand(order, i + 1, quant, reduced))
    if quant[v]:
        return results[0] or results[1]
    return results[0] and results[1]
