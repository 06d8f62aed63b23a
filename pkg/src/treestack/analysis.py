"""Run/automaton checkers and normalizers for tree-stack storage.

Covers: k-restriction of runs (entries from below), the static cycle-freeness
check on the id/set-only state subgraph, the uniform visit bound derived from
it, root-acceptance normalization, and the embedding of pushdown automata into
tree-stack automata.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import (EPSILON, PUSHDOWN, TREE_STACK, Instruction, Predicate,
                       StorageAutomaton, Transition)
from .search import Run
from .trees import ROOT_LABEL


class AnalysisError(Exception):
    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(code if not detail else f"{code}: {detail}")


@dataclass(frozen=True)
class KRestrictionReport:
    ok: bool
    k: int
    counts: dict  # address -> number of entries from below (push/up steps)


def check_k_restricted(run: Run, k: int) -> KRestrictionReport:
    """Count, per tree vertex, how often the run enters it from below.

    Entering from below means a push or up step moving the pointer from a
    vertex to one of its children.  Down steps are not entries.
    """
    counts: dict = {}
    for step in run.steps:
        if step.transition.instruction.kind in ("push", "up"):
            address = step.after.storage.pointer
            counts[address] = counts.get(address, 0) + 1
    ok = all(c <= k for c in counts.values())
    return KRestrictionReport(ok, k, counts)


def count_vertex_visits(run: Run) -> dict:
    """Pointer arrivals per vertex address (the initial position counts)."""
    visits: dict = {}
    if run.steps:
        first = run.steps[0].before.storage.pointer
        visits[first] = 1
        for step in run.steps:
            if step.transition.instruction.kind in ("push", "up", "down"):
                address = step.after.storage.pointer
                visits[address] = visits.get(address, 0) + 1
    return visits


@dataclass(frozen=True)
class CycleFreeReport:
    ok: bool
    witness: tuple  # transitions forming a loop in the id/set-only subgraph


def _idset_edges(m: StorageAutomaton):
    for t in m.transitions:
        if t.instruction.kind in ("id", "set"):
            yield t


def check_cycle_free(m: StorageAutomaton) -> CycleFreeReport:
    """Static check: the subgraph of id/set transitions must be acyclic.

    Any loop of the full graph realisation that moves the tree contains a
    push, up, or down, so acyclicity of this subgraph is sufficient.
    """
    edges: dict = {}
    for t in _idset_edges(m):
        edges.setdefault(t.source, []).append(t)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {q: WHITE for q in m.states}
    stack_edges: list = []

    def visit(q) -> tuple | None:
        color[q] = GREY
        for t in edges.get(q, ()):
            c = color.get(t.target, WHITE)
            if c == GREY:
                # unwind the loop from the stack
                loop = [t]
                for prior in reversed(stack_edges):
                    loop.append(prior)
                    if prior.source == t.target:
                        break
                return tuple(reversed(loop))
            if c == WHITE:
                stack_edges.append(t)
                found = visit(t.target)
                stack_edges.pop()
                if found:
                    return found
        color[q] = BLACK
        return None

    for q in m.states:
        if color.get(q, WHITE) == WHITE:
            witness = visit(q)
            if witness:
                return CycleFreeReport(False, witness)
    return CycleFreeReport(True, ())


def uniform_visit_bound(m: StorageAutomaton, k: int) -> int:
    """Upper bound on pointer visits to any single tree vertex in a run.

    Computed as k × (number of push transitions) × (1 + L), where L is the
    longest simple path, in edges, of the id/set-only state subgraph.  The
    automaton must be cycle-free, else the path length is unbounded.
    """
    report = check_cycle_free(m)
    if not report.ok:
        raise AnalysisError("not-cycle-free",
                            " -> ".join(str(t) for t in report.witness))
    pushes = sum(1 for t in m.transitions if t.instruction.kind == "push")
    out: dict = {}
    for t in _idset_edges(m):
        out.setdefault(t.source, []).append(t.target)
    longest: dict = {}

    def depth(q) -> int:
        if q in longest:
            return longest[q]
        best = 0
        for nxt in out.get(q, ()):
            best = max(best, 1 + depth(nxt))
        longest[q] = best
        return best

    longest_path = max((depth(q) for q in m.states), default=0)
    return k * pushes * (1 + longest_path)


def normalize_root_acceptance(m: StorageAutomaton) -> StorageAutomaton:
    """Route acceptance through a single final state reached at the root.

    Appends a drift state that walks the pointer back to the root after any
    original final state, then a lone final state entered exactly at ◇.  The
    drift step is guarded by notequals(◇) so it cannot leave the root; the
    guard also keeps the rule confined to its own fragment when the automaton
    is later embedded in a composite with substituted root labels.
    """
    if m.storage_kind != TREE_STACK:
        raise AnalysisError("not-tree-stack")
    down_state, accept_state = "q_fin_down", "q_fin_accept"
    taken = set(m.states)
    while down_state in taken:
        down_state += "_"
    while accept_state in taken:
        accept_state += "_"
    added = [
        Transition(q, EPSILON, Predicate.any(), Instruction.id(), down_state)
        for q in m.states if q in m.final_states
    ]
    added.append(Transition(down_state, EPSILON, Predicate.notequals(ROOT_LABEL),
                            Instruction.down(), down_state))
    added.append(Transition(down_state, EPSILON, Predicate.equals(ROOT_LABEL),
                            Instruction.id(), accept_state))
    return StorageAutomaton(
        states=m.states + (down_state, accept_state),
        input_alphabet=m.input_alphabet,
        storage_kind=m.storage_kind,
        storage_alphabet=m.storage_alphabet,
        initial_state=m.initial_state,
        final_states=frozenset({accept_state}),
        transitions=m.transitions + tuple(added),
        search_hints=m.search_hints,
    )


STAR_LABEL = "★"


def pda_to_tree_stack(m: StorageAutomaton) -> StorageAutomaton:
    """Embed a pushdown automaton into an up-free tree-stack automaton.

    Each stack push becomes a two-step descent through a fresh ★ spacer
    vertex; pops move the pointer down one level, leaving the popped vertex
    behind in an abandoned subtree; ε-skip rules step down through ★ spacers.
    The live stack content is exactly the sequence of non-★ labels on the
    root-to-pointer path, so the empty-stack test ◇ maps to the root label
    unchanged.
    """
    if m.storage_kind != PUSHDOWN:
        raise AnalysisError("not-pushdown")
    transitions: list = []
    helpers: list = []
    seen_helpers = set()
    for t in m.transitions:
        instr = t.instruction
        if instr.kind == "pd_push":
            helper = ("pd", instr.label, t.target)
            transitions.append(Transition(
                t.source, t.read, t.predicate,
                Instruction.push(0, STAR_LABEL), helper))
            if helper not in seen_helpers:
                seen_helpers.add(helper)
                helpers.append(helper)
        elif instr.kind == "pd_pop":
            merged = _intersect_with_top(t.predicate, instr.label)
            if merged is None:
                continue  # predicate contradicts the popped symbol
            transitions.append(Transition(
                t.source, t.read, merged, Instruction.down(), t.target))
        else:
            transitions.append(Transition(
                t.source, t.read, t.predicate, Instruction.id(), t.target))
    for helper in helpers:
        _, label, target = helper
        transitions.append(Transition(
            helper, EPSILON, Predicate.any(), Instruction.push(1, label),
            target))
    for q in m.states:
        transitions.append(Transition(
            q, EPSILON, Predicate.equals(STAR_LABEL), Instruction.down(), q))
    return StorageAutomaton(
        states=m.states + tuple(helpers),
        input_alphabet=m.input_alphabet,
        storage_kind=TREE_STACK,
        storage_alphabet=m.storage_alphabet + (STAR_LABEL,),
        initial_state=m.initial_state,
        final_states=m.final_states,
        transitions=tuple(transitions),
    )


def _intersect_with_top(pred: Predicate, top) -> Predicate | None:
    """Conjoin a predicate with "the symbol in view equals ``top``"."""
    if pred.kind == "any":
        return Predicate.equals(top)
    if pred.kind == "equals":
        return Predicate.equals(top) if pred.labels[0] == top else None
    return None if top in pred.labels else Predicate.equals(top)
