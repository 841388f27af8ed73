"""QDIMACS serialization.

Writer output is canonical: `c var` comment lines carrying atlas identities
(sorted by id), the problem line, alternating quantifier lines outermost
first, then clauses.  read(write(p)) reproduces prefix, matrix and atlas
identities exactly.
"""

from __future__ import annotations

from .atlas import VariableAtlas, identity_label, parse_identity
from .cnf import QbfProblem


class QdimacsError(Exception):
    def __init__(self, msg: str, line: int = 0):
        super().__init__("line %d: %s" % (line, msg) if line else msg)
        self.line = line


def qdimacs_write(problem: QbfProblem) -> str:
    lines = []
    if problem.atlas is not None:
        for vid, identity in problem.atlas.items():
            lines.append("c var %d %s" % (vid, identity_label(identity)))
    lines.append("p cnf %d %d" % (problem.num_vars, len(problem.matrix)))
    for is_e, vs in problem.prefix:
        lines.append("%s %s 0" % ("e" if is_e else "a", " ".join(str(v) for v in vs)))
    for cl in problem.matrix:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


def qdimacs_read(text: str) -> QbfProblem:
    atlas = VariableAtlas()
    have_atlas = False
    prefix = []
    clauses = []
    num_vars = None
    pending_atlas = {}

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 4 and parts[1] == "var":
                try:
                    vid = int(parts[2])
                except ValueError:
                    raise QdimacsError("bad var comment", ln)
                pending_atlas[vid] = parse_identity(parts[3])
                have_atlas = True
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise QdimacsError("malformed problem line", ln)
            try:
                num_vars = int(parts[2])
                int(parts[3])
            except ValueError:
                raise QdimacsError("malformed problem line", ln)
            continue
        if line[0] in "ea":
            if num_vars is None:
                raise QdimacsError("quantifier line before problem line", ln)
            parts = line.split()
            if parts[-1] != "0":
                raise QdimacsError("quantifier line not 0-terminated", ln)
            try:
                vs = [int(x) for x in parts[1:-1]]
            except ValueError:
                raise QdimacsError("bad quantifier line", ln)
            if any(v <= 0 or v > num_vars for v in vs):
                raise QdimacsError("quantified variable out of range", ln)
            prefix.append((line[0] == "e", tuple(vs)))
            continue
        if num_vars is None:
            raise QdimacsError("clause before problem line", ln)
        parts = line.split()
        if parts[-1] != "0":
            raise QdimacsError("clause not 0-terminated", ln)
        try:
            lits = [int(x) for x in parts[:-1]]
        except ValueError:
            raise QdimacsError("bad clause line", ln)
        if any(l == 0 or abs(l) > num_vars for l in lits):
            raise QdimacsError("clause literal out of range", ln)
        clauses.append(tuple(lits))

    if num_vars is None:
        raise QdimacsError("missing problem line")

    bound = {v for _, vs in prefix for v in vs}
    free = sorted({abs(l) for cl in clauses for l in cl} - bound)
    if free:
        # QDIMACS semantics: free variables are outermost existentials
        prefix.insert(0, (True, tuple(free)))

    if have_atlas:
        for vid in sorted(pending_atlas):
            got = atlas.add(pending_atlas[vid])
            if got != vid:
                raise QdimacsError("atlas comments must cover ids 1..n densely")
    problem = QbfProblem(prefix, clauses, atlas if have_atlas else None)
    return problem
