import random

import pytest

from betadnnf import (
    Clause,
    CnfFormula,
    brute_force_count,
    check_decision,
    check_decomposable,
    count_dpll,
    count_models,
    trace_to_circuit,
)
from betadnnf.circuit import AndGate, DecisionGate, FalseGate
from betadnnf.dpll import OrderStrategy
from betadnnf.errors import BudgetExceededError, NotBetaAcyclicError
from betadnnf.generators import chain_cnf, random_beta_acyclic_cnf

STRATEGIES = [OrderStrategy.reverse_beta_elimination(), OrderStrategy.lexicographic()]


class TestCount:
    @pytest.mark.parametrize("strategy", STRATEGIES, ids=lambda s: s.kind)
    def test_worked_example(self, fstar, strategy):
        count, stats = count_dpll(fstar, strategy)
        assert count == 13
        assert stats.cache_hits + stats.cache_misses >= stats.cache_entries

    def test_single_clause_any_strategy(self):
        formula = CnfFormula.from_ints([[1, 2]])
        for strategy in STRATEGIES:
            assert count_dpll(formula, strategy)[0] == 3

    def test_empty_clause(self):
        assert count_dpll(CnfFormula([Clause([])]))[0] == 0

    def test_empty_formula(self):
        assert count_dpll(CnfFormula([]))[0] == 1

    def test_matches_brute_force_on_random_instances(self):
        rng = random.Random(77)
        for _ in range(40):
            formula = random_beta_acyclic_cnf(rng, max_vars=10, max_clauses=12)
            expected = brute_force_count(formula, formula.variables)
            for strategy in STRATEGIES:
                assert count_dpll(formula, strategy)[0] == expected

    def test_fixed_strategy(self, fstar):
        count, _ = count_dpll(fstar, OrderStrategy.fixed((5, 4, 3, 2, 1)))
        assert count == 13
        with pytest.raises(ValueError, match="misses"):
            count_dpll(fstar, OrderStrategy.fixed((1, 2)))

    def test_reverse_beta_requires_acyclicity(self):
        triangle = CnfFormula.from_ints([[1, 2], [2, 3], [1, 3]])
        with pytest.raises(NotBetaAcyclicError):
            count_dpll(triangle, OrderStrategy.reverse_beta_elimination())

    def test_budget_abort(self, fstar):
        with pytest.raises(BudgetExceededError):
            count_dpll(fstar, OrderStrategy.lexicographic(), budget=3)


class TestTrace:
    @pytest.mark.parametrize("strategy", STRATEGIES, ids=lambda s: s.kind)
    def test_trace_counts_like_the_run(self, fstar, strategy):
        circuit = trace_to_circuit(fstar, strategy)
        assert check_decomposable(circuit)[0]
        assert check_decision(circuit)[0]
        assert count_models(circuit, fstar.variables) == 13

    def test_unit_clause_trace_shape(self):
        circuit = trace_to_circuit(CnfFormula.from_ints([[1]]))
        out = circuit.gates[circuit.output]
        assert isinstance(out, DecisionGate)
        assert isinstance(circuit.gates[out.lo], FalseGate)

    def test_component_split_becomes_conjunction(self):
        formula = CnfFormula.from_ints([[1, 2], [3, 4]])
        circuit = trace_to_circuit(formula)
        assert isinstance(circuit.gates[circuit.output], AndGate)
        assert count_models(circuit, {1, 2, 3, 4}) == 9

    def test_random_traces_agree_with_counts(self):
        rng = random.Random(31)
        for _ in range(25):
            formula = random_beta_acyclic_cnf(rng, max_vars=9, max_clauses=10)
            for strategy in STRATEGIES:
                count, _ = count_dpll(formula, strategy)
                circuit = trace_to_circuit(formula, strategy)
                over = formula.variables or {1}
                assert count_models(circuit, over) == count << (len(over) - len(formula.variables))


class TestScaling:
    def test_chain_cache_growth_is_linear_ish(self):
        entries = []
        sizes = (20, 40, 80)
        for n in sizes:
            _, stats = count_dpll(chain_cnf(n), OrderStrategy.reverse_beta_elimination())
            entries.append(stats.cache_entries)
        # growth clearly per-variable: doubling n must not quadruple entries
        assert entries[2] <= 3 * entries[1]
        assert entries[1] <= 3 * entries[0]
