import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betadnnf import (
    Assignment,
    Clause,
    CnfFormula,
    brute_force_count,
    falsifying_assignment,
    hypergraph_of,
    parse_dimacs,
    write_dimacs,
)
from betadnnf.cnf import evaluate, restrict
from betadnnf.errors import CapExceededError, DimacsParseError
from betadnnf.hypergraph import EliminationOrder

from conftest import FSTAR_DIMACS, FSTAR_EDGES


def clause_set(formula):
    return {c.sorted_literals() for c in formula.clauses}


class TestParse:
    def test_single_clause(self):
        f = parse_dimacs("p cnf 2 1\n1 -2 0")
        assert clause_set(f) == {(1, -2)}

    def test_tautology_dropped_with_warning(self):
        with pytest.warns(UserWarning):
            f = parse_dimacs("p cnf 1 1\n1 -1 0")
        assert len(f.clauses) == 0

    def test_tautology_strict_mode(self):
        with pytest.raises(DimacsParseError):
            parse_dimacs("p cnf 1 1\n1 -1 0", strict=True)

    def test_worked_example(self, fstar):
        assert len(fstar.clauses) == 5
        assert fstar.size == 11
        assert fstar.variables == frozenset(range(1, 6))

    def test_duplicate_clauses_and_literals_collapse(self):
        f = parse_dimacs("p cnf 2 3\n1 2 0\n2 1 0\n1 1 2 0\n")
        assert len(f.clauses) == 1

    def test_clause_spanning_lines(self):
        f = parse_dimacs("p cnf 3 1\n1 2\n3 0\n")
        assert clause_set(f) == {(1, 2, 3)}

    @pytest.mark.parametrize(
        "text,line",
        [
            ("p dnf 2 1\n1 0\n", 1),
            ("p cnf x 1\n1 0\n", 1),
            ("p cnf 2 1\n3 0\n", 2),
            ("p cnf 2 1\n1 2\n", 2),
            ("1 0\n", 1),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(DimacsParseError) as err:
            parse_dimacs(text)
        assert err.value.line == line

    def test_roundtrip_is_identity(self, fstar):
        assert parse_dimacs(write_dimacs(fstar)) == fstar
        assert write_dimacs(fstar) == FSTAR_DIMACS


class TestRestrict:
    def test_worked_example(self, fstar):
        got = restrict(fstar, Assignment({5: 0}))
        assert clause_set(got) == {(1, 2), (3, 4), (2,), (4,), (2, 4)}

    def test_empty_assignment_is_identity(self, fstar):
        assert restrict(fstar, Assignment()) == fstar

    def test_falsified_clause_becomes_empty(self):
        f = CnfFormula.from_ints([[1, 2]])
        got = restrict(f, Assignment({1: 0, 2: 0}))
        assert got.has_empty_clause()

    def test_size_never_grows(self, fstar):
        for bits in itertools.product((0, 1), repeat=3):
            tau = Assignment(dict(zip((1, 3, 5), bits)))
            assert restrict(fstar, tau).size <= fstar.size


class TestFalsifyingAssignment:
    def test_plain(self):
        tau = falsifying_assignment(Clause([1, -3]))
        assert dict(tau.items()) == {1: 0, 3: 1}

    def test_cutoff(self):
        order = EliminationOrder((1, 2, 3, 4, 5))
        k5 = Clause([2, 4, 5])
        assert dict(falsifying_assignment(k5, order, 4).items()) == {5: 0}
        assert len(falsifying_assignment(k5, order, 5)) == 0

    def test_never_satisfies_and_binds_exactly_clause_vars(self):
        for lits in ([1, 2], [-1, 3], [-2], [1, -4, 5]):
            c = Clause(lits)
            tau = falsifying_assignment(c)
            assert tau.domain() == c.variables
            assert not c.satisfied_by(tau)


class TestHypergraphOf:
    def test_worked_example(self, fstar):
        assert hypergraph_of(fstar).edges == frozenset(FSTAR_EDGES.values())

    def test_equal_variable_sets_merge(self):
        f = CnfFormula.from_ints([[1, 2], [-1, -2]])
        assert hypergraph_of(f).edges == frozenset({frozenset({1, 2})})

    def test_empty_formula(self):
        assert len(hypergraph_of(CnfFormula([]))) == 0

    def test_empty_clause_rejected(self):
        with pytest.raises(ValueError):
            hypergraph_of(CnfFormula([Clause([])]))


class TestBruteForce:
    def test_single_clause(self):
        assert brute_force_count(CnfFormula.from_ints([[1, 2]]), {1, 2}) == 3

    def test_worked_example(self, fstar):
        assert brute_force_count(fstar, range(1, 6)) == 13

    def test_empty_formula_over_empty_set(self):
        assert brute_force_count(CnfFormula([]), set()) == 1

    def test_free_variables_double(self):
        assert brute_force_count(CnfFormula.from_ints([[1]]), {1, 2, 3}) == 4

    def test_cap_refusal(self):
        f = CnfFormula.from_ints([[1]])
        with pytest.raises(CapExceededError) as err:
            brute_force_count(f, range(1, 30), cap=24)
        assert "24" in str(err.value)

    def test_requires_covering_variable_set(self):
        f = CnfFormula.from_ints([[1, 2]])
        with pytest.raises(ValueError, match="2"):
            brute_force_count(f, {1})

    def test_matches_naive_enumeration(self, fstar):
        variables = sorted(fstar.variables)
        naive = sum(
            evaluate(fstar, Assignment(dict(zip(variables, bits))))
            for bits in itertools.product((0, 1), repeat=len(variables))
        )
        assert brute_force_count(fstar, variables) == naive == 13


class TestEvaluate:
    def test_all_ones(self, fstar):
        assert evaluate(fstar, Assignment({v: 1 for v in range(1, 6)})) == 1

    def test_all_zeros(self, fstar):
        assert evaluate(fstar, Assignment({v: 0 for v in range(1, 6)})) == 0

    def test_mixed(self, fstar):
        assert evaluate(fstar, Assignment({1: 0, 2: 1, 3: 1, 4: 1, 5: 0})) == 1

    def test_unbound_variable_named(self, fstar):
        with pytest.raises(ValueError, match="3"):
            evaluate(fstar, Assignment({1: 1, 2: 1, 4: 1, 5: 1}))


class TestAssignment:
    def test_restrict_keeps_exactly_requested(self):
        tau = Assignment({1: 0, 2: 1, 3: 0})
        assert tau.restrict({2, 3, 9}).domain() == {2, 3}

    def test_union_requires_agreement(self):
        a, b = Assignment({1: 0, 2: 1}), Assignment({2: 1, 3: 0})
        assert a.agrees_with(b)
        assert dict(a.union(b).items()) == {1: 0, 2: 1, 3: 0}
        with pytest.raises(ValueError):
            a.union(Assignment({1: 1}))

    def test_rejects_bad_variable_ids(self):
        with pytest.raises(ValueError):
            Assignment({0: 1})


@st.composite
def small_formulas(draw, max_vars=5, max_clauses=6):
    n = draw(st.integers(min_value=1, max_value=max_vars))
    lit = st.builds(lambda v, s: v if s else -v,
                    st.integers(min_value=1, max_value=n), st.booleans())

    def dedupe(lits):
        by_var = {}
        for l in lits:
            by_var.setdefault(abs(l), l)
        return list(by_var.values())

    clause = st.lists(lit, min_size=1, max_size=4).map(dedupe)
    clause_lists = draw(st.lists(clause, min_size=0, max_size=max_clauses))
    return n, CnfFormula.from_ints(clause_lists)


@given(small_formulas(), st.integers(min_value=0))
@settings(max_examples=120, deadline=None)
def test_restriction_soundness(data, salt):
    """Evaluating the residual equals evaluating the original on the union."""
    n, formula = data
    variables = list(range(1, n + 1))
    bound = [v for v in variables if (salt >> v) & 1]
    tau = Assignment({v: (salt >> (v + 8)) & 1 for v in bound})
    residual = restrict(formula, tau)
    free = [v for v in variables if v not in bound]
    for bits in itertools.product((0, 1), repeat=len(free)):
        sigma = Assignment(dict(zip(free, bits)))
        assert evaluate(residual, sigma.union(tau).restrict(residual.variables)) == evaluate(
            formula, tau.union(sigma)
        )
    assert residual.size <= formula.size


@given(small_formulas())
@settings(max_examples=80, deadline=None)
def test_parse_serialize_roundtrip(data):
    _, formula = data
    assert parse_dimacs(write_dimacs(formula)) == formula
