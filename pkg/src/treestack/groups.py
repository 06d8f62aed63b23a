"""Finite group tables, subgroup data, and the basic word-problem automata.

The word problem of a group, over a fixed generating alphabet, is the set of
words that evaluate to the identity.  This module provides the two leaf
automata everything else is built from: a trivial-storage automaton walking a
Cayley table, and the tree-stack automaton for ℤ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .automata import (EPSILON, TREE_STACK, TRIVIAL, Instruction, Predicate,
                       StorageAutomaton, Transition)
from .trees import ROOT_LABEL


class GroupDataError(Exception):
    """Invalid group or subgroup data; ``code`` names the failed check."""

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(code if not detail else f"{code}: {detail}")


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as an explicit multiplication table."""

    elements: tuple
    identity: Any
    table: Mapping  # (g, h) -> g·h

    def __post_init__(self):
        elems = set(self.elements)
        if self.identity not in elems:
            raise GroupDataError("not-a-group", "identity not an element")
        for g in self.elements:
            for h in self.elements:
                if self.table.get((g, h)) not in elems:
                    raise GroupDataError("not-a-group",
                                         f"table not closed at ({g!r},{h!r})")
            if (self.table[(g, self.identity)] != g
                    or self.table[(self.identity, g)] != g):
                raise GroupDataError("not-a-group", f"identity fails at {g!r}")
        for g in self.elements:
            if not any(self.table[(g, h)] == self.identity
                       for h in self.elements):
                raise GroupDataError("not-a-group", f"no inverse for {g!r}")
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if (self.table[(self.table[(a, b)], c)]
                            != self.table[(a, self.table[(b, c)])]):
                        raise GroupDataError(
                            "not-a-group",
                            f"associativity fails at ({a!r},{b!r},{c!r})")

    def mul(self, g, h):
        return self.table[(g, h)]

    def inv(self, g):
        for h in self.elements:
            if self.table[(g, h)] == self.identity:
                return h
        raise GroupDataError("not-a-group", f"no inverse for {g!r}")

    def eval_word(self, word, gens: Mapping):
        value = self.identity
        for letter in word:
            value = self.mul(value, gens[letter])
        return value

    @staticmethod
    def cyclic(order: int) -> "FiniteGroup":
        elements = tuple(range(order))
        table = {(g, h): (g + h) % order for g in elements for h in elements}
        return FiniteGroup(elements, 0, table)


def check_generators(group: FiniteGroup, gens: Mapping) -> None:
    """Letters must generate the group and name inverses of each other."""
    for letter, element in gens.items():
        if element not in set(group.elements):
            raise GroupDataError("not-a-group",
                                 f"generator {letter!r} maps outside the group")
        inverse = group.inv(element)
        if not any(e == inverse for e in gens.values()):
            raise GroupDataError(
                "not-a-group",
                f"no letter names the inverse of {letter!r}")
    generated = {group.identity}
    frontier = [group.identity]
    while frontier:
        g = frontier.pop()
        for element in gens.values():
            h = group.mul(g, element)
            if h not in generated:
                generated.add(h)
                frontier.append(h)
    if generated != set(group.elements):
        raise GroupDataError("not-a-group", "letters do not generate the group")


def finite_group_automaton(group: FiniteGroup, gens: Mapping) -> StorageAutomaton:
    """Trivial-storage automaton: states are elements, identity is initial
    and final, and each letter multiplies by its generator."""
    check_generators(group, gens)
    letters = tuple(gens.keys())
    transitions = tuple(
        Transition(g, letter, Predicate.any(), Instruction.id(),
                   group.mul(g, gens[letter]))
        for g in group.elements for letter in letters
    )
    return StorageAutomaton(
        states=group.elements,
        input_alphabet=letters,
        storage_kind=TRIVIAL,
        storage_alphabet=(),
        initial_state=group.identity,
        final_states=frozenset({group.identity}),
        transitions=transitions,
    )


def spine_lift(m: StorageAutomaton) -> StorageAutomaton:
    """Re-realize an ε-free trivial-storage automaton over tree storage.

    Every letter step pushes a fresh cell on branch 0 of the pointer, so runs
    descend a spine and never revisit a branch; the result is cycle-free and
    up-free, ready for root normalization and the composite constructions.
    Only automata whose transitions are all letter-reading id steps qualify.
    """
    if m.storage_kind != TRIVIAL:
        raise GroupDataError("not-liftable", "storage is not trivial")
    labels = []
    transitions = []
    for t in m.transitions:
        if t.read is EPSILON or t.instruction.kind != "id":
            raise GroupDataError("not-liftable",
                                 "only ε-free id transitions can be lifted")
        cell = ("cell", t.read)
        if cell not in labels:
            labels.append(cell)
        transitions.append(Transition(
            t.source, t.read, t.predicate, Instruction.push(0, cell),
            t.target))
    return StorageAutomaton(
        states=m.states,
        input_alphabet=m.input_alphabet,
        storage_kind=TREE_STACK,
        storage_alphabet=tuple(labels),
        initial_state=m.initial_state,
        final_states=m.final_states,
        transitions=tuple(transitions),
    )


def z_word_problem_automaton(plus: str = "t", minus: str = "T") -> StorageAutomaton:
    """Tree-stack automaton for the word problem of ℤ = ⟨plus⟩.

    The pointer descends a spine of two-level segments: a blank spacer vertex
    on branch 0, then the letter vertex on branch 1.  Reading the opposite
    letter at a letter vertex cancels it by stepping down onto its spacer;
    the cancelled vertex is left behind off the live path.  Blank spacers can
    be stepped through by ε, and the word is accepted at the root, which is
    reachable exactly when every letter on the live path has been cancelled —
    that is, when the exponent sum is zero.
    """
    blank = ("blank", plus)
    S, q_plus, q_minus, q_f = "S", "q_plus", "q_minus", "q_f"
    transitions = (
        Transition(S, plus, Predicate.notequals(minus), Instruction.push(0, blank), q_plus),
        Transition(q_plus, EPSILON, Predicate.any(), Instruction.push(1, plus), S),
        Transition(S, minus, Predicate.notequals(plus), Instruction.push(0, blank), q_minus),
        Transition(q_minus, EPSILON, Predicate.any(), Instruction.push(1, minus), S),
        Transition(S, plus, Predicate.equals(minus), Instruction.down(), S),
        Transition(S, minus, Predicate.equals(plus), Instruction.down(), S),
        Transition(S, EPSILON, Predicate.equals(blank), Instruction.down(), S),
        Transition(S, EPSILON, Predicate.equals(ROOT_LABEL), Instruction.id(), q_f),
    )
    return StorageAutomaton(
        states=(S, q_plus, q_minus, q_f),
        input_alphabet=(plus, minus),
        storage_kind=TREE_STACK,
        storage_alphabet=(plus, minus, blank),
        initial_state=S,
        final_states=frozenset({q_f}),
        transitions=transitions,
    )


@dataclass(frozen=True)
class FiniteSubgroupData:
    """A finite subgroup shared between two sides of a construction.

    Elements are abstract indices with one multiplication table.  Each
    element carries a representative word on each side: ``left_reps[h]`` over
    the first (host) alphabet, ``right_reps[h]`` over the second.  ``phi`` is
    the identifying isomorphism as a bijection on the element indices, so the
    amalgam identifies left_reps[h] with right_reps[phi(h)]; omitted, it
    defaults to the identity pairing.  For an HNN side the object describes
    one subgroup and both rep maps coincide.
    """

    group: FiniteGroup
    left_reps: Mapping  # element -> word (tuple of letters)
    right_reps: Mapping
    phi: Mapping | None = None

    def __post_init__(self):
        if self.phi is not None:
            check_phi_table(self.group, self.phi)
        for reps, side in ((self.left_reps, "left"), (self.right_reps, "right")):
            for h in self.group.elements:
                if h not in reps:
                    raise GroupDataError("bad-subgroup-data",
                                         f"{side} rep missing for {h!r}")
                if h != self.group.identity and len(reps[h]) == 0:
                    raise GroupDataError(
                        "bad-subgroup-data",
                        f"{side} rep for non-identity {h!r} is empty")

    @property
    def elements(self) -> tuple:
        return self.group.elements

    @property
    def identity(self):
        return self.group.identity

    def inv(self, h):
        return self.group.inv(h)

    def phi_of(self, h):
        return h if self.phi is None else self.phi[h]

    def phi_inverse_of(self, h):
        if self.phi is None:
            return h
        for g, image in self.phi.items():
            if image == h:
                return g
        raise GroupDataError("bad-subgroup-data", f"{h!r} not in phi's image")

    @staticmethod
    def trivial() -> "FiniteSubgroupData":
        group = FiniteGroup((0,), 0, {(0, 0): 0})
        return FiniteSubgroupData(group, {0: ()}, {0: ()})


def check_phi(h1: FiniteSubgroupData, h2: FiniteSubgroupData,
              phi: Mapping) -> None:
    """phi must be a bijective homomorphism between the two tables."""
    source = set(h1.elements)
    image = [phi.get(g) for g in h1.elements]
    if set(phi.keys()) != source or set(image) != set(h2.elements) \
            or len(set(image)) != len(image):
        raise GroupDataError("bad-subgroup-data", "phi is not a bijection")
    for g in h1.elements:
        for h in h1.elements:
            if phi[h1.group.mul(g, h)] != h2.group.mul(phi[g], phi[h]):
                raise GroupDataError(
                    "bad-subgroup-data",
                    f"phi not a homomorphism at ({g!r},{h!r})")


def check_phi_table(group: FiniteGroup, phi: Mapping) -> None:
    """phi must be a bijective automorphism-style pairing on one table."""
    elems = set(group.elements)
    image = [phi.get(g) for g in group.elements]
    if set(phi.keys()) != elems or set(image) != elems \
            or len(set(image)) != len(image):
        raise GroupDataError("bad-subgroup-data", "phi is not a bijection")
    for g in group.elements:
        for h in group.elements:
            if phi[group.mul(g, h)] != group.mul(phi[g], phi[h]):
                raise GroupDataError(
                    "bad-subgroup-data",
                    f"phi not a homomorphism at ({g!r},{h!r})")


def check_rep_words(data: FiniteSubgroupData, side: str,
                    is_identity_word) -> None:
    """Validate one side's rep words against a word-problem decision oracle.

    ``is_identity_word(word)`` must decide the host group's word problem.
    The reps must form an injective homomorphic section of the table:
    rep(g)·rep(h)·rep((g·h)⁻¹) is trivial for all g, h, and rep(g)·rep(h⁻¹)
    is nontrivial for g ≠ h.
    """
    reps = data.left_reps if side == "left" else data.right_reps
    group = data.group
    for g in group.elements:
        for h in group.elements:
            word = tuple(reps[g]) + tuple(reps[h]) \
                + tuple(reps[group.inv(group.mul(g, h))])
            if not is_identity_word(word):
                raise GroupDataError(
                    "bad-subgroup-data",
                    f"{side} reps do not respect the table at ({g!r},{h!r})")
    for g in group.elements:
        for h in group.elements:
            if g == h:
                continue
            word = tuple(reps[g]) + tuple(reps[group.inv(h)])
            if is_identity_word(word):
                raise GroupDataError(
                    "bad-subgroup-data",
                    f"{side} reps of {g!r} and {h!r} coincide in the group")
