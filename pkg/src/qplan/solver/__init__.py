"""QBF decision procedure: QDPLL search with unit propagation, universal
reduction, failed-literal detection, universal probing and clause-set
partitioning, plus the naive expansion oracle.

The search core exists twice: a compiled Cython extension (`_engine`) and a
pure-Python fallback (`engine_py`) with identical behaviour.  The compiled
core is used when available; set QPLAN_ENGINE=py to force the fallback.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Optional

from ..cnf import QbfProblem, partition, universal_reduce
from . import engine_py
from .oracle import ORACLE_VAR_GUARD, OracleGuardError, expand_eval

if os.environ.get("QPLAN_ENGINE", "").lower() in ("py", "python"):
    _engine_mod = engine_py
else:
    try:
        from . import _engine as _engine_mod  # type: ignore[attr-defined]
    except ImportError:
        _engine_mod = engine_py

BACKEND = _engine_mod.BACKEND


@dataclass
class SolverConfig:
    enable_failed_literal: bool = True
    enable_universal_probing: bool = True
    enable_partitioning: bool = True
    probe_budget: int = 2
    seed: int = 0
    node_cap: Optional[int] = None
    time_cap_ms: Optional[float] = None


@dataclass
class SolverResult:
    value: Optional[bool]  # None = unknown (a resource cap was hit)
    witness: Optional[dict]
    nodes: int
    props: int
    ms: float

    @property
    def unknown(self) -> bool:
        return self.value is None

    def stats_line(self) -> str:
        v = "unknown" if self.value is None else ("true" if self.value else "false")
        return "result=%s nodes=%d props=%d ms=%d" % (v, self.nodes, self.props,
                                                      round(self.ms))

    def witness_line(self, block1_order) -> str:
        lits = []
        for v in block1_order:
            lits.append(str(v if self.witness.get(v, False) else -v))
        return "v %s 0" % " ".join(lits) if lits else "v 0"


def solve(problem: QbfProblem, cfg: Optional[SolverConfig] = None,
          backend=None) -> SolverResult:
    """Decide the problem; on true with an existential first block, report a
    total assignment to its variables (unconstrained variables false)."""
    if cfg is None:
        cfg = SolverConfig()
    mod = _engine_mod if backend is None else backend
    start = time.perf_counter()
    engine = mod.Engine(problem.prefix, problem.matrix, cfg)
    try:
        value = bool(engine.solve())
    except _abort_types(mod):
        ms = (time.perf_counter() - start) * 1000.0
        return SolverResult(None, None, engine.stats["nodes"],
                            engine.stats["props"], ms)
    ms = (time.perf_counter() - start) * 1000.0
    witness = None
    if value and problem.prefix and problem.prefix[0][0]:
        witness = {v: bool(engine.witness.get(v, False))
                   for v in problem.prefix[0][1]}
    return SolverResult(value, witness, engine.stats["nodes"],
                        engine.stats["props"], ms)


def _abort_types(mod):
    return getattr(mod, "Abort", engine_py.Abort)


__all__ = [
    "BACKEND", "ORACLE_VAR_GUARD", "OracleGuardError", "QbfProblem",
    "SolverConfig", "SolverResult", "expand_eval", "partition", "solve",
    "universal_reduce",
]
