"""NNF circuits: a topologically indexed gate DAG with the structural
property checkers (decomposability, decision gates, determinism,
vtree structuredness), evaluation, conditioning, linear-time model
counting on decision-DNNF, and a plain text file format.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from . import cnf as cnf_mod
from .errors import CapExceededError, CircuitPropertyError, NnfParseError


@dataclass(frozen=True)
class LiteralGate:
    literal: int


@dataclass(frozen=True)
class TrueGate:
    pass


@dataclass(frozen=True)
class FalseGate:
    pass


@dataclass(frozen=True)
class AndGate:
    children: tuple[int, ...]


@dataclass(frozen=True)
class OrGate:
    children: tuple[int, ...]


@dataclass(frozen=True)
class DecisionGate:
    """Or-gate of the shape (x and hi) or (not-x and lo), guards implicit."""

    variable: int
    hi: int
    lo: int


Gate = Union[LiteralGate, TrueGate, FalseGate, AndGate, OrGate, DecisionGate]


def gate_children(gate: Gate) -> tuple[int, ...]:
    if isinstance(gate, (AndGate, OrGate)):
        return gate.children
    if isinstance(gate, DecisionGate):
        return (gate.hi, gate.lo)
    return ()


@dataclass(frozen=True)
class Violation:
    """Locates the first gate breaking a structural property."""

    gate: int
    reason: str


class NnfCircuit:
    """Immutable gate list in topological order; the designated output gate
    determines the computed function. Variable sets are cached per gate."""

    __slots__ = ("gates", "output", "varsets")

    def __init__(self, gates: Iterable[Gate], output: int):
        self.gates = tuple(gates)
        self.output = output
        if not (0 <= output < len(self.gates)):
            raise ValueError(f"output index {output} out of range")
        varsets: list[frozenset[int]] = []
        for i, gate in enumerate(self.gates):
            for c in gate_children(gate):
                if not (0 <= c < i):
                    raise ValueError(f"gate {i} references child {c}, not strictly below it")
            if isinstance(gate, LiteralGate):
                if gate.literal == 0:
                    raise ValueError("0 is not a literal")
                varsets.append(frozenset((abs(gate.literal),)))
            elif isinstance(gate, DecisionGate):
                if gate.variable < 1:
                    raise ValueError("decision variable ids must be >= 1")
                varsets.append(
                    frozenset((gate.variable,)) | varsets[gate.hi] | varsets[gate.lo]
                )
            else:
                acc: frozenset[int] = frozenset()
                for c in gate_children(gate):
                    acc |= varsets[c]
                varsets.append(acc)
        self.varsets = tuple(varsets)

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def variables(self) -> frozenset[int]:
        """All variables labelling inputs anywhere in the circuit."""
        out: set[int] = set()
        for gate in self.gates:
            if isinstance(gate, LiteralGate):
                out.add(abs(gate.literal))
            elif isinstance(gate, DecisionGate):
                out.add(gate.variable)
        return frozenset(out)

    @property
    def output_variables(self) -> frozenset[int]:
        return self.varsets[self.output]

    def root_at(self, gate_index: int) -> "NnfCircuit":
        """Same gate list viewed with a different output gate."""
        return NnfCircuit(self.gates, gate_index)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NnfCircuit)
            and self.gates == other.gates
            and self.output == other.output
        )

    def __hash__(self) -> int:
        return hash((self.gates, self.output))

    def __repr__(self) -> str:
        return f"NnfCircuit({len(self.gates)} gates, output {self.output})"


class CircuitBuilder:
    """Hash-consing constructor: structurally equal gates are emitted once."""

    def __init__(self):
        self._gates: list[Gate] = []
        self._index: dict[Gate, int] = {}

    def _add(self, gate: Gate) -> int:
        found = self._index.get(gate)
        if found is not None:
            return found
        self._gates.append(gate)
        self._index[gate] = len(self._gates) - 1
        return len(self._gates) - 1

    def literal(self, lit: int) -> int:
        return self._add(LiteralGate(lit))

    def true(self) -> int:
        return self._add(TrueGate())

    def false(self) -> int:
        return self._add(FalseGate())

    def and_(self, children: Iterable[int]) -> int:
        kids = tuple(dict.fromkeys(children))
        if not kids:
            return self.true()
        if len(kids) == 1:
            return kids[0]
        return self._add(AndGate(kids))

    def or_(self, children: Iterable[int]) -> int:
        kids = tuple(dict.fromkeys(children))
        if not kids:
            return self.false()
        if len(kids) == 1:
            return kids[0]
        return self._add(OrGate(kids))

    def decision(self, variable: int, hi: int, lo: int) -> int:
        return self._add(DecisionGate(variable, hi, lo))

    def gate(self, index: int) -> Gate:
        return self._gates[index]

    def __len__(self) -> int:
        return len(self._gates)

    def build(self, output: int) -> NnfCircuit:
        return NnfCircuit(self._gates, output)


def check_decomposable(circuit: NnfCircuit) -> tuple[bool, Violation | None]:
    """Every conjunction must have pairwise variable-disjoint inputs.

    Decision gates are checked through their implicit guard conjunctions:
    the decision variable may not reappear in either branch.
    """
    for i, gate in enumerate(circuit.gates):
        if isinstance(gate, AndGate):
            union: set[int] = set()
            for c in dict.fromkeys(gate.children):
                overlap = union & circuit.varsets[c]
                if overlap:
                    v = min(overlap)
                    return False, Violation(i, f"and-gate children share variable {v}")
                union |= circuit.varsets[c]
        elif isinstance(gate, DecisionGate):
            for branch in (gate.hi, gate.lo):
                if gate.variable in circuit.varsets[branch]:
                    return False, Violation(
                        i, f"decision variable {gate.variable} reappears in a branch"
                    )
    return True, None


def decision_parts(circuit: NnfCircuit, gate_index: int) -> tuple[int, int, int] | None:
    """(variable, hi, lo) if the or-gate has decision shape, else None.

    A plain or-gate qualifies when it is binary and each input is a binary
    conjunction guarded by one literal, the two guards being x and not-x.
    """
    gate = circuit.gates[gate_index]
    if isinstance(gate, DecisionGate):
        return gate.variable, gate.hi, gate.lo
    if not isinstance(gate, OrGate) or len(gate.children) != 2:
        return None

    def guard_options(child: int) -> list[tuple[int, int]]:
        g = circuit.gates[child]
        if not isinstance(g, AndGate) or len(g.children) != 2:
            return []
        options = []
        for k in range(2):
            guard = circuit.gates[g.children[k]]
            if isinstance(guard, LiteralGate):
                options.append((guard.literal, g.children[1 - k]))
        return options

    for lit_a, body_a in guard_options(gate.children[0]):
        for lit_b, body_b in guard_options(gate.children[1]):
            if lit_a == -lit_b:
                if lit_a > 0:
                    return lit_a, body_a, body_b
                return -lit_a, body_b, body_a
    return None


def check_decision(circuit: NnfCircuit) -> tuple[bool, Violation | None]:
    """Every or-gate must be a decision gate."""
    for i, gate in enumerate(circuit.gates):
        if isinstance(gate, OrGate) and decision_parts(circuit, i) is None:
            return False, Violation(i, "or-gate is not a decision gate")
    return True, None


def truth_tables(circuit: NnfCircuit, variables: Iterable[int]) -> list[int]:
    """Bitmask satisfying set of every gate over the given variable list."""
    ordered = sorted(set(variables))
    missing = circuit.variables - set(ordered)
    if missing:
        raise ValueError(f"circuit variables {sorted(missing)} not in the enumeration set")
    masks = cnf_mod.variable_masks(ordered)
    full = (1 << (1 << len(ordered))) - 1
    tables: list[int] = []
    for gate in circuit.gates:
        if isinstance(gate, LiteralGate):
            m = masks[abs(gate.literal)]
            tables.append(m if gate.literal > 0 else full & ~m)
        elif isinstance(gate, TrueGate):
            tables.append(full)
        elif isinstance(gate, FalseGate):
            tables.append(0)
        elif isinstance(gate, AndGate):
            acc = full
            for c in gate.children:
                acc &= tables[c]
            tables.append(acc)
        elif isinstance(gate, OrGate):
            acc = 0
            for c in gate.children:
                acc |= tables[c]
            tables.append(acc)
        else:
            m = masks[gate.variable]
            tables.append((m & tables[gate.hi]) | ((full & ~m) & tables[gate.lo]))
    return tables


def check_deterministic(circuit: NnfCircuit, cap: int = 20) -> bool:
    """True iff the inputs of every or-gate are pairwise contradictory.

    Semantic, by enumeration; decision gates are disjoint by construction
    and are skipped.
    """
    n = len(circuit.variables)
    if n > cap:
        raise CapExceededError(f"{n} variables exceed the determinism cap of {cap}", cap)
    or_gates = [g for g in circuit.gates if isinstance(g, OrGate)]
    if not or_gates:
        return True
    tables = truth_tables(circuit, circuit.variables)
    for gate in or_gates:
        kids = gate.children
        for a in range(len(kids)):
            for b in range(a + 1, len(kids)):
                if kids[a] != kids[b] and tables[kids[a]] & tables[kids[b]]:
                    return False
    return True


def evaluate(circuit: NnfCircuit, tau: cnf_mod.Assignment) -> int:
    """Bottom-up evaluation under a total assignment of the circuit variables."""
    for v in circuit.variables:
        if v not in tau:
            raise ValueError(f"variable {v} is unbound")
    values: list[int] = []
    for gate in circuit.gates:
        if isinstance(gate, LiteralGate):
            values.append(int(tau.satisfies_literal(gate.literal)))
        elif isinstance(gate, TrueGate):
            values.append(1)
        elif isinstance(gate, FalseGate):
            values.append(0)
        elif isinstance(gate, AndGate):
            values.append(int(all(values[c] for c in gate.children)))
        elif isinstance(gate, OrGate):
            values.append(int(any(values[c] for c in gate.children)))
        else:
            values.append(values[gate.hi] if tau[gate.variable] else values[gate.lo])
    return values[circuit.output]


def condition(circuit: NnfCircuit, tau: cnf_mod.Assignment) -> NnfCircuit:
    """Plug in the bound literals; never increases the gate count."""
    builder = CircuitBuilder()
    remap: list[int] = []
    for gate in circuit.gates:
        if isinstance(gate, LiteralGate):
            if tau.satisfies_literal(gate.literal):
                remap.append(builder.true())
            elif tau.falsifies_literal(gate.literal):
                remap.append(builder.false())
            else:
                remap.append(builder.literal(gate.literal))
        elif isinstance(gate, TrueGate):
            remap.append(builder.true())
        elif isinstance(gate, FalseGate):
            remap.append(builder.false())
        elif isinstance(gate, AndGate):
            kids = [remap[c] for c in gate.children]
            if any(isinstance(builder.gate(k), FalseGate) for k in kids):
                remap.append(builder.false())
                continue
            kids = [k for k in kids if not isinstance(builder.gate(k), TrueGate)]
            remap.append(builder.true() if not kids else builder.and_(kids))
        elif isinstance(gate, OrGate):
            kids = [remap[c] for c in gate.children]
            if any(isinstance(builder.gate(k), TrueGate) for k in kids):
                remap.append(builder.true())
                continue
            kids = [k for k in kids if not isinstance(builder.gate(k), FalseGate)]
            remap.append(builder.false() if not kids else builder.or_(kids))
        else:
            val = tau.get(gate.variable)
            if val is None:
                remap.append(builder.decision(gate.variable, remap[gate.hi], remap[gate.lo]))
            else:
                remap.append(remap[gate.hi] if val else remap[gate.lo])
    return prune_unreachable(builder.build(remap[circuit.output]))


def prune_unreachable(circuit: NnfCircuit) -> NnfCircuit:
    needed = set()
    stack = [circuit.output]
    while stack:
        i = stack.pop()
        if i in needed:
            continue
        needed.add(i)
        stack.extend(gate_children(circuit.gates[i]))
    keep = sorted(needed)
    new_index = {old: new for new, old in enumerate(keep)}
    gates: list[Gate] = []
    for old in keep:
        gate = circuit.gates[old]
        if isinstance(gate, AndGate):
            gates.append(AndGate(tuple(new_index[c] for c in gate.children)))
        elif isinstance(gate, OrGate):
            gates.append(OrGate(tuple(new_index[c] for c in gate.children)))
        elif isinstance(gate, DecisionGate):
            gates.append(DecisionGate(gate.variable, new_index[gate.hi], new_index[gate.lo]))
        else:
            gates.append(gate)
    return NnfCircuit(gates, new_index[circuit.output])


def count_models(circuit: NnfCircuit, variables: Iterable[int]) -> int:
    """Exact model count over the variable set; requires a decomposable
    circuit whose every or-gate is a decision gate.

    A conjunction multiplies child counts; a decision on x adds the two
    branch counts, each padded by a power of two for the branch variables
    it does not mention; a final padding covers variables outside the
    circuit output.
    """
    target = frozenset(variables)
    if not circuit.variables <= target:
        extra = sorted(circuit.variables - target)
        raise ValueError(f"circuit variables {extra} outside the counting set")
    ok, violation = check_decomposable(circuit)
    if not ok:
        raise CircuitPropertyError(f"not decomposable: gate {violation.gate}, {violation.reason}")
    ok, violation = check_decision(circuit)
    if not ok:
        raise CircuitPropertyError(f"not a decision circuit: gate {violation.gate}, {violation.reason}")
    counts: list[int] = []
    for i, gate in enumerate(circuit.gates):
        if isinstance(gate, LiteralGate):
            counts.append(1)
        elif isinstance(gate, TrueGate):
            counts.append(1)
        elif isinstance(gate, FalseGate):
            counts.append(0)
        elif isinstance(gate, AndGate):
            n = 1
            for c in dict.fromkeys(gate.children):
                n *= counts[c]
            counts.append(n)
        else:
            if isinstance(gate, DecisionGate):
                x, hi, lo = gate.variable, gate.hi, gate.lo
            else:
                x, hi, lo = decision_parts(circuit, i)
            here = len(circuit.varsets[i])
            gap_hi = here - 1 - len(circuit.varsets[hi])
            gap_lo = here - 1 - len(circuit.varsets[lo])
            counts.append(counts[hi] * (1 << gap_hi) + counts[lo] * (1 << gap_lo))
    outside = len(target - circuit.varsets[circuit.output])
    return counts[circuit.output] << outside


def is_satisfiable(circuit: NnfCircuit) -> tuple[bool, cnf_mod.Assignment | None]:
    """Satisfiability plus a witness; linear in the circuit size.

    Requires decomposability: a conjunction is then satisfiable exactly
    when all of its inputs are.
    """
    ok, violation = check_decomposable(circuit)
    if not ok:
        raise CircuitPropertyError(f"not decomposable: gate {violation.gate}, {violation.reason}")
    sat: list[bool] = []
    for gate in circuit.gates:
        if isinstance(gate, (LiteralGate, TrueGate)):
            sat.append(True)
        elif isinstance(gate, FalseGate):
            sat.append(False)
        elif isinstance(gate, AndGate):
            sat.append(all(sat[c] for c in gate.children))
        elif isinstance(gate, OrGate):
            sat.append(any(sat[c] for c in gate.children))
        else:
            sat.append(sat[gate.hi] or sat[gate.lo])
    if not sat[circuit.output]:
        return False, None
    bindings: dict[int, int] = {}
    stack = [circuit.output]
    while stack:
        i = stack.pop()
        gate = circuit.gates[i]
        if isinstance(gate, LiteralGate):
            bindings.setdefault(abs(gate.literal), 1 if gate.literal > 0 else 0)
        elif isinstance(gate, AndGate):
            stack.extend(gate.children)
        elif isinstance(gate, OrGate):
            stack.append(next(c for c in gate.children if sat[c]))
        elif isinstance(gate, DecisionGate):
            if sat[gate.hi]:
                bindings.setdefault(gate.variable, 1)
                stack.append(gate.hi)
            else:
                bindings.setdefault(gate.variable, 0)
                stack.append(gate.lo)
    for v in circuit.output_variables:
        bindings.setdefault(v, 0)
    return True, cnf_mod.Assignment(bindings)


class Vtree:
    """Rooted binary tree whose leaves are labelled bijectively by variables."""

    __slots__ = ("variable", "left", "right", "leaf_set")

    def __init__(self, variable=None, left=None, right=None):
        self.variable = variable
        self.left = left
        self.right = right
        if variable is not None:
            self.leaf_set = frozenset((variable,))
        else:
            if left is None or right is None:
                raise ValueError("an internal vtree node needs two children")
            if left.leaf_set & right.leaf_set:
                raise ValueError("vtree leaves must be distinct")
            self.leaf_set = left.leaf_set | right.leaf_set

    @classmethod
    def leaf(cls, variable: int) -> "Vtree":
        return cls(variable=variable)

    @classmethod
    def node(cls, left: "Vtree", right: "Vtree") -> "Vtree":
        return cls(left=left, right=right)

    def is_leaf(self) -> bool:
        return self.variable is not None

    def internal_nodes(self):
        if self.is_leaf():
            return
        yield self
        yield from self.left.internal_nodes()
        yield from self.right.internal_nodes()


def respects_vtree(circuit: NnfCircuit, vtree: Vtree) -> tuple[bool, Violation | None]:
    """Every conjunction (explicit or a decision guard) must be binary and
    split its input variables along some vtree node."""
    if not circuit.variables <= vtree.leaf_set:
        missing = sorted(circuit.variables - vtree.leaf_set)
        raise ValueError(f"circuit variables {missing} missing from the vtree")
    splits = [(t.left.leaf_set, t.right.leaf_set) for t in vtree.internal_nodes()]

    def splittable(a: frozenset[int], b: frozenset[int]) -> bool:
        return any(
            (a <= l and b <= r) or (a <= r and b <= l) for l, r in splits
        )

    for i, gate in enumerate(circuit.gates):
        if isinstance(gate, AndGate):
            if len(gate.children) != 2:
                return False, Violation(i, f"and-gate has fanin {len(gate.children)}, not 2")
            a, b = (circuit.varsets[c] for c in gate.children)
            if not splittable(a, b):
                return False, Violation(i, "no vtree node splits this and-gate")
        elif isinstance(gate, DecisionGate):
            guard = frozenset((gate.variable,))
            for branch in (gate.hi, gate.lo):
                if not splittable(guard, circuit.varsets[branch]):
                    return False, Violation(i, "no vtree node splits a decision guard")
    return True, None


def equivalent_to_formula(
    circuit: NnfCircuit, formula: cnf_mod.CnfFormula, cap: int = 20
) -> bool:
    """Truth-table comparison over the union of the two variable sets."""
    joint = sorted(circuit.variables | formula.variables)
    if len(joint) > cap:
        raise CapExceededError(
            f"{len(joint)} variables exceed the equivalence cap of {cap}", cap
        )
    circuit_table = truth_tables(circuit, joint)[circuit.output]
    return circuit_table == cnf_mod.truth_table_of_formula(formula, joint)


def write_nnf(circuit: NnfCircuit) -> str:
    """Serialize: header `nnf <gates> <child edges> <max variable>`, then one
    gate per line (L/T/F/A/O/D); the last gate is the output."""
    pruned = prune_unreachable(circuit)
    edges = sum(len(gate_children(g)) for g in pruned.gates)
    max_var = max(pruned.variables, default=0)
    lines = [f"nnf {pruned.size} {edges} {max_var}"]
    for gate in pruned.gates:
        if isinstance(gate, LiteralGate):
            lines.append(f"L {gate.literal}")
        elif isinstance(gate, TrueGate):
            lines.append("T")
        elif isinstance(gate, FalseGate):
            lines.append("F")
        elif isinstance(gate, AndGate):
            lines.append("A " + " ".join(str(c) for c in (len(gate.children),) + gate.children))
        elif isinstance(gate, OrGate):
            lines.append("O " + " ".join(str(c) for c in (len(gate.children),) + gate.children))
        else:
            lines.append(f"D {gate.variable} {gate.hi} {gate.lo}")
    return "\n".join(lines) + "\n"


def read_nnf(text: str | bytes) -> NnfCircuit:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = [l for l in text.splitlines()]
    header: list[str] = []
    body_start = 0
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        header = stripped.split()
        body_start = lineno
        break
    if len(header) != 4 or header[0] != "nnf":
        raise NnfParseError("expected header 'nnf <gates> <edges> <vars>'", body_start or 1)
    try:
        n_gates, n_edges, n_vars = (int(t) for t in header[1:])
    except ValueError:
        raise NnfParseError("non-integer header field", body_start) from None
    gates: list[Gate] = []
    seen_edges = 0
    lineno = body_start
    for raw in lines[body_start:]:
        lineno += 1
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        fields = stripped.split()
        kind = fields[0]
        index = len(gates)

        def child(token: str) -> int:
            try:
                c = int(token)
            except ValueError:
                raise NnfParseError(f"non-integer child {token!r}", lineno) from None
            if not (0 <= c < index):
                raise NnfParseError(f"child {c} must reference an earlier gate", lineno)
            return c

        if kind == "L" and len(fields) == 2:
            lit = int(fields[1])
            if lit == 0 or abs(lit) > n_vars:
                raise NnfParseError(f"literal {lit} out of range 1..{n_vars}", lineno)
            gates.append(LiteralGate(lit))
        elif kind == "T" and len(fields) == 1:
            gates.append(TrueGate())
        elif kind == "F" and len(fields) == 1:
            gates.append(FalseGate())
        elif kind in ("A", "O") and len(fields) >= 2:
            count = int(fields[1])
            if count != len(fields) - 2:
                raise NnfParseError(f"{kind}-gate declares {count} children, lists {len(fields) - 2}", lineno)
            kids = tuple(child(t) for t in fields[2:])
            seen_edges += len(kids)
            gates.append(AndGate(kids) if kind == "A" else OrGate(kids))
        elif kind == "D" and len(fields) == 4:
            x = int(fields[1])
            if not (1 <= x <= n_vars):
                raise NnfParseError(f"decision variable {x} out of range 1..{n_vars}", lineno)
            hi, lo = child(fields[2]), child(fields[3])
            seen_edges += 2
            gates.append(DecisionGate(x, hi, lo))
        else:
            raise NnfParseError(f"unrecognized gate line {stripped!r}", lineno)
    if len(gates) != n_gates:
        raise NnfParseError(f"header declares {n_gates} gates, found {len(gates)}", lineno)
    if seen_edges != n_edges:
        raise NnfParseError(f"header declares {n_edges} child edges, found {seen_edges}", lineno)
    if not gates:
        raise NnfParseError("a circuit needs at least one gate", lineno)
    return NnfCircuit(gates, len(gates) - 1)


def read_nnf_file(path) -> NnfCircuit:
    with open(path, "r", encoding="ascii") as handle:
        return read_nnf(handle.read())


def write_nnf_file(circuit: NnfCircuit, path) -> None:
    with open(path, "w", encoding="ascii") as handle:
        handle.write(write_nnf(circuit))
