"""Automata with storage: states plus predicate/instruction-guarded transitions.

Three storage kinds are supported:

* ``trivial`` — no storage; only the ``id`` instruction.
* ``pushdown`` — a word over a stack alphabet; ``pd_push``/``pd_pop``/``id``.
* ``tree_stack`` — a :class:`treestack.trees.TreeStack`; ``push``/``up``/
  ``down``/``set``/``id``.

Predicates test the symbol currently in view: the pointer label for tree
storage, the top of stack for pushdown storage (with ◇ standing for the empty
stack, mirroring the root label of tree storage).  ``notequals`` over a set
holds when the symbol is not a member of the set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .trees import ROOT_LABEL, TreeOpError, TreeStack

EPSILON = None  # transition "read" value for ε-moves

TRIVIAL = "trivial"
PUSHDOWN = "pushdown"
TREE_STACK = "tree_stack"


class AutomatonError(Exception):
    """Invalid automaton structure; ``code`` names the violated rule."""

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(code if not detail else f"{code}: {detail}")


@dataclass(frozen=True)
class Predicate:
    """``any``, ``equals(ω)``, or ``notequals(F)`` over storage symbols."""

    kind: str
    labels: tuple = ()

    @staticmethod
    def any() -> "Predicate":
        return Predicate("any")

    @staticmethod
    def equals(label: Any) -> "Predicate":
        return Predicate("equals", (label,))

    @staticmethod
    def notequals(*labels: Any) -> "Predicate":
        if not labels:
            raise ValueError("notequals needs a nonempty label set")
        return Predicate("notequals", tuple(sorted(labels, key=repr)))

    def holds(self, symbol: Any) -> bool:
        if self.kind == "any":
            return True
        if self.kind == "equals":
            return symbol == self.labels[0]
        return symbol not in self.labels

    def __str__(self) -> str:
        if self.kind == "any":
            return "any"
        if self.kind == "equals":
            return f"equals({_fmt(self.labels[0])})"
        return "notequals({%s})" % ",".join(_fmt(l) for l in self.labels)


@dataclass(frozen=True)
class Instruction:
    """A partial storage operation; ``kind`` fixes which fields are used."""

    kind: str
    branch: int | None = None
    label: Any = None

    @staticmethod
    def id() -> "Instruction":
        return Instruction("id")

    @staticmethod
    def push(branch: int, label: Any) -> "Instruction":
        return Instruction("push", branch, label)

    @staticmethod
    def up(branch: int) -> "Instruction":
        return Instruction("up", branch)

    @staticmethod
    def down() -> "Instruction":
        return Instruction("down")

    @staticmethod
    def set(label: Any) -> "Instruction":
        return Instruction("set", None, label)

    @staticmethod
    def pd_push(label: Any) -> "Instruction":
        return Instruction("pd_push", None, label)

    @staticmethod
    def pd_pop(label: Any) -> "Instruction":
        return Instruction("pd_pop", None, label)

    def __str__(self) -> str:
        if self.kind == "push":
            return f"push_{self.branch}({_fmt(self.label)})"
        if self.kind == "up":
            return f"up_{self.branch}"
        if self.kind in ("set", "pd_push", "pd_pop"):
            return f"{self.kind}({_fmt(self.label)})"
        return self.kind


def _fmt(label: Any) -> str:
    if isinstance(label, tuple):
        return "(%s)" % ",".join(_fmt(x) for x in label)
    return str(label)


@dataclass(frozen=True)
class Transition:
    source: Any
    read: Any  # input letter, or EPSILON
    predicate: Predicate
    instruction: Instruction
    target: Any

    def __str__(self) -> str:
        read = "ε" if self.read is EPSILON else str(self.read)
        return (f"({_fmt(self.source)}, {read}, {self.predicate}, "
                f"{self.instruction}, {_fmt(self.target)})")


@dataclass(frozen=True)
class SearchHints:
    """Optional pruning hints attached by constructions (see search module).

    Entries and exits are tuples of index groups, aligned by position: group
    i of each describes one construction layer of a composite automaton.
    ``suppress_chained_entries``: ε-transitions after which further hinted
    transitions of the same group are blocked until a real letter is
    consumed.
    ``suppress_empty_exits``: ε-transitions blocked while no real letter has
    been consumed since the last entry of the same group; unlike entries
    they do not re-arm the block themselves.
    ``symmetric_families``: groups of transition indices that differ only in
    the push branch number; the search fires the first applicable member.
    """

    suppress_chained_entries: tuple = ()  # of index tuples, one per group
    suppress_empty_exits: tuple = ()  # of index tuples, aligned with entries
    symmetric_families: tuple = ()


_TREE_KINDS = {"id", "push", "up", "down", "set"}
_PD_KINDS = {"id", "pd_push", "pd_pop"}


@dataclass(frozen=True)
class StorageAutomaton:
    states: tuple
    input_alphabet: tuple
    storage_kind: str  # TRIVIAL | PUSHDOWN | TREE_STACK
    storage_alphabet: tuple  # Ω; empty for trivial storage
    initial_state: Any
    final_states: frozenset
    transitions: tuple
    search_hints: SearchHints | None = field(default=None, compare=False)

    def initial_storage(self) -> Any:
        if self.storage_kind == TREE_STACK:
            return TreeStack.empty()
        # pushdown stack and trivial storage are both tuples; trivial stays
        # empty forever.  None is reserved for "instruction undefined".
        return ()

    def initial_configuration(self) -> "Configuration":
        return Configuration(self.initial_state, self.initial_storage())

    def validate(self) -> list:
        """Structural violations as human-readable strings (empty = valid)."""
        problems = []
        states = set(self.states)
        if self.initial_state not in states:
            problems.append(f"initial state {self.initial_state!r} not declared")
        for q in self.final_states:
            if q not in states:
                problems.append(f"final state {q!r} not declared")
        allowed = _TREE_KINDS if self.storage_kind == TREE_STACK else (
            _PD_KINDS if self.storage_kind == PUSHDOWN else {"id"})
        symbols = set(self.storage_alphabet) | {ROOT_LABEL}
        alphabet = set(self.input_alphabet)
        for i, t in enumerate(self.transitions):
            where = f"transitions[{i}]"
            if t.source not in states:
                problems.append(f"{where}: unknown source {t.source!r}")
            if t.target not in states:
                problems.append(f"{where}: unknown target {t.target!r}")
            if t.read is not EPSILON and t.read not in alphabet:
                problems.append(f"{where}: letter {t.read!r} not in alphabet")
            if t.instruction.kind not in allowed:
                problems.append(
                    f"{where}: instruction {t.instruction.kind} not allowed "
                    f"for {self.storage_kind} storage")
            for lab in t.predicate.labels:
                if lab not in symbols:
                    problems.append(f"{where}: predicate symbol {lab!r} "
                                    "not in storage alphabet")
            if t.instruction.kind in ("push", "set", "pd_push", "pd_pop"):
                if t.instruction.label not in set(self.storage_alphabet):
                    problems.append(f"{where}: instruction symbol "
                                    f"{t.instruction.label!r} not in storage alphabet")
        return problems

    def has_up_instructions(self) -> bool:
        return any(t.instruction.kind == "up" for t in self.transitions)


@dataclass(frozen=True)
class Configuration:
    """A vertex of the graph realisation: state plus storage value."""

    state: Any
    storage: Any

    def view_symbol(self, storage_kind: str) -> Any:
        return view_symbol(self.storage, storage_kind)


def view_symbol(storage: Any, storage_kind: str) -> Any:
    """The symbol predicates inspect (pointer label / stack top / none)."""
    if storage_kind == TREE_STACK:
        return storage.label
    if storage_kind == PUSHDOWN:
        return storage[-1] if storage else ROOT_LABEL
    return None


def apply_instruction(instr: Instruction, storage: Any, storage_kind: str):
    """Apply ``instr``; return the new storage, or None where undefined."""
    kind = instr.kind
    if kind == "id":
        return storage
    if storage_kind == TREE_STACK:
        try:
            if kind == "push":
                return storage.push(instr.branch, instr.label)
            if kind == "up":
                return storage.up(instr.branch)
            if kind == "down":
                return storage.down()
            if kind == "set":
                return storage.set(instr.label)
        except TreeOpError:
            return None
        raise AutomatonError("bad-instruction", kind)
    if storage_kind == PUSHDOWN:
        if kind == "pd_push":
            return storage + (instr.label,)
        if kind == "pd_pop":
            if storage and storage[-1] == instr.label:
                return storage[:-1]
            return None
        raise AutomatonError("bad-instruction", kind)
    raise AutomatonError("bad-instruction", f"{kind} on trivial storage")
