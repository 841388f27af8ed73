"""Pure-Python QDPLL search engine.

Counter-based clause states support cheap assign/undo, which makes probing
(failed literals, universal probes) proportional to the implied assignments
rather than to the matrix size.  The compiled extension `_engine` implements
the same algorithm over C arrays; both backends must produce identical
results and statistics for identical inputs.

Propagation rules (the unit() of the search):
  * a satisfied clause is inactive; zero active clauses decides the branch true;
  * an empty clause is a conflict;
  * a clause whose live literals are all universal is a conflict;
  * a clause with one live existential literal whose live universals are all
    quantified inside it forces that literal (universal reduction).

Soundness notes for the technique passes:
  * a failed literal's complement is asserted for (a) variables of the
    outermost active existential block on any conflict, (b) inner
    existential variables only when the conflict derivation used no
    universal-reduction step; a conflict on a universal variable decides
    the current branch false outright;
  * single-variable universal probes assert complement-pair agreements over
    existential variables; full-pattern sweeps of the outermost universal
    block assert forced literals over the active existential block only,
    where a single probe already pins the value.
"""

from __future__ import annotations

import sys
import time

BACKEND = "python"

PATTERN_MAX = 7          # sweep the outermost universal block up to 2^7 probes
INNER_FL_CAP = 32        # inner variables probed per failed-literal pass
TECHNIQUE_ROUNDS = 3     # per-node iterations of the technique passes
ROOT_FL_ROUNDS = 3       # rounds of failed literals under patterns at the root

_NO_CHANGE = 0
_CHANGED = 1
_BRANCH_FALSE = 2


class Abort(Exception):
    """Node or time cap exceeded."""


class Engine:
    """Single-use solver for one prenex-CNF problem."""

    def __init__(self, prefix, clauses, cfg, stats=None):
        self.cfg = cfg
        self.prefix = [(bool(q), list(vs)) for q, vs in prefix if vs]
        self.stats = stats if stats is not None else {"nodes": 0, "props": 0}
        nv = 0
        for _, vs in self.prefix:
            for v in vs:
                if v > nv:
                    nv = v
        self.nv = nv
        self.val = [0] * (nv + 1)
        self.blk = [-1] * (nv + 1)
        self.is_exist = [False] * (nv + 1)
        self.block_exist = []
        for bi, (q, vs) in enumerate(self.prefix):
            self.block_exist.append(q)
            for v in vs:
                self.blk[v] = bi
                self.is_exist[v] = q

        self.clauses = [tuple(c) for c in clauses]
        n = len(self.clauses)
        self.nsat = [0] * n
        self.nue = [0] * n
        self.nuu = [0] * n
        self.occ_pos = [[] for _ in range(nv + 1)]
        self.occ_neg = [[] for _ in range(nv + 1)]
        self.has_empty = False
        for ci, cl in enumerate(self.clauses):
            if not cl:
                self.has_empty = True
            for l in cl:
                v = abs(l)
                (self.occ_pos[v] if l > 0 else self.occ_neg[v]).append(ci)
                if self.is_exist[v]:
                    self.nue[ci] += 1
                else:
                    self.nuu[ci] += 1
        self.live = n
        self.trail = []
        self.witness = {}
        self.deadline = None
        if cfg.time_cap_ms is not None:
            self.deadline = time.monotonic() + cfg.time_cap_ms / 1000.0

    # ------------------------------------------------------------------
    # assignment bookkeeping

    def _assign(self, v, value, touched):
        self.val[v] = value
        self.trail.append(v)
        self.stats["props"] += 1
        sat_occ = self.occ_pos[v] if value > 0 else self.occ_neg[v]
        fal_occ = self.occ_neg[v] if value > 0 else self.occ_pos[v]
        nsat = self.nsat
        for ci in sat_occ:
            if nsat[ci] == 0:
                self.live -= 1
            nsat[ci] += 1
        if self.is_exist[v]:
            nue = self.nue
            for ci in fal_occ:
                nue[ci] -= 1
                if nsat[ci] == 0:
                    touched.append(ci)
        else:
            nuu = self.nuu
            for ci in fal_occ:
                nuu[ci] -= 1
                if nsat[ci] == 0:
                    touched.append(ci)

    def _undo_to(self, mark):
        nsat = self.nsat
        while len(self.trail) > mark:
            v = self.trail.pop()
            value = self.val[v]
            self.val[v] = 0
            sat_occ = self.occ_pos[v] if value > 0 else self.occ_neg[v]
            fal_occ = self.occ_neg[v] if value > 0 else self.occ_pos[v]
            for ci in sat_occ:
                nsat[ci] -= 1
                if nsat[ci] == 0:
                    self.live += 1
            if self.is_exist[v]:
                nue = self.nue
                for ci in fal_occ:
                    nue[ci] += 1
            else:
                nuu = self.nuu
                for ci in fal_occ:
                    nuu[ci] += 1

    def propagate(self, seeds, check_all=False):
        """Assign seeds and run unit() to fixpoint.

        Returns (conflict, impure); impure marks a derivation that used a
        universal-reduction step or a universal-only clause, i.e. one that
        is not a plain propositional consequence.
        """
        impure = False
        queue = list(seeds)
        touched = list(range(len(self.clauses))) if check_all else []
        val = self.val
        is_exist = self.is_exist
        blk = self.blk
        while queue or touched:
            while queue:
                v, value = queue.pop()
                cur = val[v]
                if cur != 0:
                    if cur != value:
                        return True, impure
                    continue
                self._assign(v, value, touched)
            check, touched = touched, []
            for ci in check:
                if self.nsat[ci] > 0:
                    continue
                e = self.nue[ci]
                if e >= 2:
                    continue
                u = self.nuu[ci]
                if e == 0:
                    if u > 0:
                        impure = True
                    return True, impure
                lit = 0
                eblk = -1
                for l in self.clauses[ci]:
                    v2 = abs(l)
                    if val[v2] == 0 and is_exist[v2]:
                        lit = l
                        eblk = blk[v2]
                        break
                if lit == 0 or val[abs(lit)] != 0:
                    continue
                if u > 0:
                    blocked = False
                    for l in self.clauses[ci]:
                        v2 = abs(l)
                        if val[v2] == 0 and not is_exist[v2] and blk[v2] < eblk:
                            blocked = True
                            break
                    if blocked:
                        continue
                    impure = True
                queue.append((abs(lit), 1 if lit > 0 else -1))
        return False, impure

    # ------------------------------------------------------------------
    # node helpers

    def _occurrence_counts(self):
        counts = [0] * (self.nv + 1)
        val = self.val
        for ci, cl in enumerate(self.clauses):
            if self.nsat[ci] > 0:
                continue
            for l in cl:
                v = abs(l)
                if val[v] == 0:
                    counts[v] += 1
        return counts

    def _active_block(self, counts):
        """Outermost block with an unassigned variable occurring in the
        live matrix; unconstrained variables are treated as eliminated."""
        for bi, (_, vs) in enumerate(self.prefix):
            for v in vs:
                if self.val[v] == 0 and counts[v] > 0:
                    return bi
        return -1

    def _check_caps(self):
        if self.cfg.node_cap is not None and self.stats["nodes"] > self.cfg.node_cap:
            raise Abort("node cap")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise Abort("time cap")

    def _snapshot(self):
        if not self.prefix:
            return
        for v in self.prefix[0][1]:
            if self.val[v] != 0:
                self.witness[v] = self.val[v] > 0

    # ------------------------------------------------------------------
    # technique passes

    def _failed_literal_pass(self, counts, active):
        changed = _NO_CHANGE
        cands = [v for v in self.prefix[active][1]
                 if self.val[v] == 0 and counts[v] > 0]
        inner = []
        if INNER_FL_CAP > 0:
            seen = set()
            for ci, cl in enumerate(self.clauses):
                if self.nsat[ci] > 0:
                    continue
                live = [l for l in cl if self.val[abs(l)] == 0]
                if len(live) == 2:
                    for l in live:
                        v = abs(l)
                        if self.blk[v] != active and v not in seen:
                            seen.add(v)
            inner = sorted(seen)[:INNER_FL_CAP]
        for v in cands + inner:
            if self.val[v] != 0:
                continue
            for value in (-1, 1):
                if self.val[v] != 0:
                    break
                mark = len(self.trail)
                conflict, impure = self.propagate([(v, value)])
                self._undo_to(mark)
                if not conflict:
                    continue
                if not self.is_exist[v]:
                    return _BRANCH_FALSE
                if self.blk[v] == active or not impure:
                    c2, _ = self.propagate([(v, -value)])
                    if c2:
                        return _BRANCH_FALSE
                    changed = _CHANGED
        return changed

    def _first_universal_block(self):
        for bi, (q, vs) in enumerate(self.prefix):
            if not q and any(self.val[v] == 0 for v in vs):
                return bi
        return -1

    def _probe_pass(self, counts, active, depth):
        if not self.block_exist[active]:
            return _NO_CHANGE
        ub = self._first_universal_block()
        if ub < 0:
            return _NO_CHANGE
        changed = _NO_CHANGE

        unassigned = [v for v in self.prefix[ub][1] if self.val[v] == 0]
        budget = self.cfg.probe_budget
        sel = sorted(unassigned, key=lambda v: (-counts[v], v))[:budget]
        for u in sel:
            if self.val[u] != 0:
                continue
            forced = []
            failed = False
            for value in (1, -1):
                mark = len(self.trail)
                conflict, _ = self.propagate([(u, value)])
                if conflict:
                    self._undo_to(mark)
                    return _BRANCH_FALSE
                forced.append({w: self.val[w] for w in self.trail[mark + 1:]
                               if self.is_exist[w]})
                self._undo_to(mark)
            agree = [(w, fv) for w, fv in forced[0].items()
                     if forced[1].get(w) == fv]
            if agree:
                conflict, _ = self.propagate(agree)
                if conflict:
                    return _BRANCH_FALSE
                changed = _CHANGED

        unassigned = [v for v in self.prefix[ub][1] if self.val[v] == 0]
        k = len(unassigned)
        if 0 < k <= PATTERN_MAX:
            r = self._pattern_sweep(unassigned, active, depth)
            if r == _BRANCH_FALSE:
                return _BRANCH_FALSE
            if r == _CHANGED:
                changed = _CHANGED
        return changed

    def _pattern_sweep(self, uvars, active, depth):
        changed = _NO_CHANGE
        forced_union = {}
        for pat in range(1 << len(uvars)):
            seeds = [(v, 1 if (pat >> i) & 1 else -1)
                     for i, v in enumerate(uvars)]
            mark = len(self.trail)
            conflict, _ = self.propagate(seeds)
            if conflict:
                self._undo_to(mark)
                return _BRANCH_FALSE
            for w in self.trail[mark:]:
                if self.blk[w] == active and self.is_exist[w]:
                    fv = self.val[w]
                    if forced_union.get(w, fv) != fv:
                        self._undo_to(mark)
                        return _BRANCH_FALSE
                    forced_union[w] = fv
            self._undo_to(mark)
        if forced_union:
            conflict, _ = self.propagate(sorted(forced_union.items()))
            if conflict:
                return _BRANCH_FALSE
            changed = _CHANGED

        if depth == 0 and self.cfg.enable_failed_literal:
            for _ in range(ROOT_FL_ROUNDS):
                banned = self._pattern_failed_literals(uvars, active)
                if banned == _BRANCH_FALSE:
                    return _BRANCH_FALSE
                if not banned:
                    break
                conflict, _ = self.propagate(banned)
                if conflict:
                    return _BRANCH_FALSE
                changed = _CHANGED
        return changed

    def _pattern_failed_literals(self, uvars, active):
        """Literal assertions learned by failing active-block literals under
        every full pattern of the probed universal block."""
        banned = {}
        avars = [v for v in self.prefix[active][1] if self.val[v] == 0]
        for pat in range(1 << len(uvars)):
            seeds = [(v, 1 if (pat >> i) & 1 else -1)
                     for i, v in enumerate(uvars)
                     if self.val[v] == 0]
            mark = len(self.trail)
            conflict, _ = self.propagate(seeds)
            if conflict:
                self._undo_to(mark)
                return _BRANCH_FALSE
            for v in avars:
                if self.val[v] != 0:
                    continue
                for value in (-1, 1):
                    if banned.get(v) == -value:
                        continue
                    m2 = len(self.trail)
                    c2, _ = self.propagate([(v, value)])
                    self._undo_to(m2)
                    if c2:
                        if banned.get(v) == value:
                            self._undo_to(mark)
                            return _BRANCH_FALSE
                        banned[v] = -value
            self._undo_to(mark)
        return [(v, value) for v, value in sorted(banned.items())]

    # ------------------------------------------------------------------
    # partitioning

    def _components(self):
        parent = {}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        live_clauses = []
        val = self.val
        for ci, cl in enumerate(self.clauses):
            if self.nsat[ci] > 0:
                continue
            live = [l for l in cl if val[abs(l)] == 0]
            live_clauses.append(live)
            vs = [abs(l) for l in live]
            for v in vs:
                parent.setdefault(v, v)
            for v in vs[1:]:
                ra, rb = find(vs[0]), find(v)
                if ra != rb:
                    parent[rb] = ra
        groups = {}
        for live in live_clauses:
            groups.setdefault(find(abs(live[0])), []).append(live)
        comps = []
        for root, cls in groups.items():
            vs = {abs(l) for cl in cls for l in cl}
            comps.append((min(vs), vs, cls))
        comps.sort(key=lambda c: c[0])
        return comps

    def _solve_components(self, comps):
        harvested = {}
        for _, vs, cls in comps:
            sub_prefix = [(q, [v for v in bvars if v in vs])
                          for q, bvars in self.prefix]
            sub = Engine(sub_prefix, cls, self.cfg, self.stats)
            sub.deadline = self.deadline
            ok = sub.solve()
            if not ok:
                return False
            for v, value in sub.witness.items():
                if self.blk[v] == 0:
                    harvested[v] = value
        self.witness.update(harvested)
        self._snapshot()
        return True

    # ------------------------------------------------------------------
    # search

    def _pick_branch(self, counts, active):
        best = -1
        best_count = -1
        seed = self.cfg.seed
        best_key = None
        for v in self.prefix[active][1]:
            if self.val[v] != 0 or counts[v] == 0:
                continue
            c = counts[v]
            if seed == 0:
                if c > best_count or (c == best_count and v < best):
                    best, best_count = v, c
            else:
                key = ((v * 2654435761 + seed) & 0xFFFFFFFF, v)
                if c > best_count or (c == best_count and key < best_key):
                    best, best_count, best_key = v, c, key
        return best

    def _node(self, depth):
        if self.live == 0:
            self._snapshot()
            return True
        self._check_caps()

        counts = None
        for _ in range(TECHNIQUE_ROUNDS):
            changed = False
            counts = self._occurrence_counts()
            active = self._active_block(counts)
            if active < 0:
                break
            if self.cfg.enable_failed_literal:
                r = self._failed_literal_pass(counts, active)
                if r == _BRANCH_FALSE:
                    return False
                if r == _CHANGED:
                    changed = True
                    if self.live == 0:
                        self._snapshot()
                        return True
                    counts = self._occurrence_counts()
                    active = self._active_block(counts)
                    if active < 0:
                        break
            if self.cfg.enable_universal_probing:
                r = self._probe_pass(counts, active, depth)
                if r == _BRANCH_FALSE:
                    return False
                if r == _CHANGED:
                    changed = True
                    if self.live == 0:
                        self._snapshot()
                        return True
            if not changed:
                break

        if self.live == 0:
            self._snapshot()
            return True

        if self.cfg.enable_partitioning:
            comps = self._components()
            if len(comps) > 1:
                return self._solve_components(comps)

        counts = self._occurrence_counts()
        active = self._active_block(counts)
        if active < 0:
            # live clauses but no branchable variable cannot happen: every
            # live clause has live literals
            self._snapshot()
            return True
        v = self._pick_branch(counts, active)
        self.stats["nodes"] += 1
        exist = self.is_exist[v]
        mark = len(self.trail)
        for value in (-1, 1):
            conflict, _ = self.propagate([(v, value)])
            ok = (not conflict) and self._node(depth + 1)
            self._undo_to(mark)
            if exist and ok:
                return True
            if not exist and not ok:
                return False
        return not exist

    def solve(self):
        if self.has_empty:
            return False
        limit = self.nv * 4 + 10000
        if sys.getrecursionlimit() < limit:
            sys.setrecursionlimit(limit)
        conflict, _ = self.propagate([], check_all=True)
        if conflict:
            return False
        return self._node(0)
