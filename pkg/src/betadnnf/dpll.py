"""Exhaustive DPLL model counting with component splitting and caching.

The plain scheme only: split into variable-disjoint parts when possible,
otherwise branch on the next variable of the chosen order. No unit
propagation, no pure-literal elimination. The recursion can optionally
record its trace, which is a decision-DNNF of the input formula.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass

from .circuit import CircuitBuilder, NnfCircuit
from .cnf import Assignment, Clause, CnfFormula
from .errors import BudgetExceededError, NotBetaAcyclicError
from .hypergraph import NotBetaAcyclic, beta_elimination_order
from . import cnf as cnf_mod


@dataclass(frozen=True)
class OrderStrategy:
    """Branch-variable policy: a fixed priority list over the variables."""

    kind: str
    sequence: tuple[int, ...] = ()

    @classmethod
    def reverse_beta_elimination(cls) -> "OrderStrategy":
        """Branch on elimination-order variables from last to first; valid
        only for beta-acyclic inputs."""
        return cls("reverse-beta")

    @classmethod
    def fixed(cls, sequence) -> "OrderStrategy":
        return cls("fixed", tuple(sequence))

    @classmethod
    def lexicographic(cls) -> "OrderStrategy":
        return cls("lex")

    def priority(self, formula: CnfFormula) -> tuple[int, ...]:
        if self.kind == "lex":
            return tuple(sorted(formula.variables))
        if self.kind == "fixed":
            missing = formula.variables - set(self.sequence)
            if missing:
                raise ValueError(f"fixed order misses variables {sorted(missing)}")
            return self.sequence
        if self.kind == "reverse-beta":
            found = beta_elimination_order(cnf_mod.hypergraph_of(formula))
            if isinstance(found, NotBetaAcyclic):
                raise NotBetaAcyclicError(
                    "reverse elimination order requires a beta-acyclic formula",
                    found.stuck_vertices,
                )
            return tuple(reversed(found.sequence))
        raise ValueError(f"unknown strategy {self.kind!r}")


@dataclass
class DpllStats:
    decisions: int = 0
    component_splits: int = 0
    cache_hits: int = 0
    cache_misses: int = 0
    cache_entries: int = 0
    peak_residuals: int = 0

    def to_dict(self) -> dict:
        return {
            "decisions": self.decisions,
            "component_splits": self.component_splits,
            "cache_hits": self.cache_hits,
            "cache_misses": self.cache_misses,
            "cache_entries": self.cache_entries,
            "peak_residuals": self.peak_residuals,
        }


def _canonical(formula: CnfFormula) -> tuple[tuple[int, ...], ...]:
    """Order-independent exact key: sorted clauses of sorted literals."""
    return tuple(sorted(c.sorted_literals() for c in formula.clauses))


def _split_components(formula: CnfFormula) -> list[CnfFormula]:
    """Partition the clauses into variable-disjoint groups (union-find)."""
    parent: dict[int, int] = {}

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for clause in formula.clauses:
        vs = sorted(clause.variables)
        for v in vs:
            parent.setdefault(v, v)
        for a, b in zip(vs, vs[1:]):
            parent[find(a)] = find(b)
    groups: dict[int, list[Clause]] = {}
    for clause in formula.clauses:
        root = find(next(iter(clause.variables)))
        groups.setdefault(root, []).append(clause)
    return [CnfFormula(cs) for _, cs in sorted(groups.items())]


class _Engine:
    def __init__(self, strategy: OrderStrategy, formula: CnfFormula,
                 budget: int | None, trace: bool):
        if formula.has_empty_clause() or not formula.clauses:
            self.priority: tuple[int, ...] = ()
        else:
            self.priority = strategy.priority(formula)
        self.budget = budget
        self.steps = 0
        self.stats = DpllStats()
        self.cache: dict[tuple, tuple[int, int | None]] = {}
        self.builder = CircuitBuilder() if trace else None
        self.depth = 0

    def count(self, formula: CnfFormula) -> tuple[int, int | None]:
        """(model count over var(formula), trace gate or None)."""
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceededError(f"exceeded {self.budget} steps", self.budget)
        self.depth += 1
        self.stats.peak_residuals = max(self.stats.peak_residuals, self.depth)
        try:
            if formula.has_empty_clause():
                return 0, self.builder.false() if self.builder is not None else None
            if not formula.clauses:
                return 1, self.builder.true() if self.builder is not None else None
            key = _canonical(formula)
            cached = self.cache.get(key)
            if cached is not None:
                self.stats.cache_hits += 1
                return cached
            self.stats.cache_misses += 1
            parts = _split_components(formula)
            if len(parts) > 1:
                self.stats.component_splits += 1
                total = 1
                gates = []
                for part in parts:
                    n, g = self.count(part)
                    total *= n
                    if self.builder is not None:
                        gates.append(g)
                result = (total, self.builder.and_(gates) if self.builder is not None else None)
            else:
                result = self._branch(formula)
            self.cache[key] = result
            self.stats.cache_entries = len(self.cache)
            return result
        finally:
            self.depth -= 1

    def _branch(self, formula: CnfFormula) -> tuple[int, int | None]:
        present = formula.variables
        x = next(v for v in self.priority if v in present)
        self.stats.decisions += 1
        counts = {}
        gates = {}
        for b in (1, 0):
            residual = formula.restrict(Assignment({x: b}))
            n, g = self.count(residual)
            # variables satisfied away still range freely
            counts[b] = n << (len(present) - 1 - len(residual.variables))
            gates[b] = g
        total = counts[1] + counts[0]
        if self.builder is None:
            return total, None
        return total, self.builder.decision(x, gates[1], gates[0])


def count_dpll(
    formula: CnfFormula,
    strategy: OrderStrategy | None = None,
    budget: int | None = None,
) -> tuple[int, DpllStats]:
    """Exact model count of the formula over var(formula)."""
    strategy = strategy or OrderStrategy.lexicographic()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
    engine = _Engine(strategy, formula, budget, trace=False)
    n, _ = engine.count(formula)
    return n, engine.stats


def trace_to_circuit(
    formula: CnfFormula,
    strategy: OrderStrategy | None = None,
    budget: int | None = None,
) -> NnfCircuit:
    """The recursion tree as a circuit: decisions become decision gates,
    component splits decomposable conjunctions, cache hits shared gates."""
    strategy = strategy or OrderStrategy.lexicographic()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
    engine = _Engine(strategy, formula, budget, trace=True)
    _, gate = engine.count(formula)
    return engine.builder.build(gate)
