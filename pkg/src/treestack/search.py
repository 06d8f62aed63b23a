"""Acceptance search over the graph realisation of a storage automaton.

The reachable configuration graph is infinite in general, so the search is a
breadth-first sweep layered by the number of input letters consumed, with
per-layer ε-closure, full deduplication of configurations, and an explicit
budget.  Verdicts are three-valued: ``accepted``, ``rejected`` (the whole
reachable space for the word was exhausted), and ``budget-exhausted`` (never
conflated with rejection).

Two exact state-space quotients keep per-word spaces finite for the group
constructions in this package:

* Tombstone collapsing (up-free tree automata only): once the pointer leaves a
  subtree it can never re-enter it, so any subtree not containing the pointer
  is collapsed to a single ``†`` node, preserving only branch occupancy.
* Hint-guided pruning, when the automaton carries :class:`SearchHints`:
  transitions in a symmetric family (identical but for the push branch) fire
  only through the first applicable member; hinted ε-entry transitions are
  blocked until at least one real letter separates them; and hinted ε-exit
  transitions are blocked while no letter has followed the last entry, which
  removes letter-free entry/exit round trips.  Entries and exits come in
  aligned groups, one per construction layer of a composite automaton;
  freshness is tracked per group, so an entry of one layer never blocks the
  bootstrap of a nested layer.

Runs are reconstructed by replaying the found transition sequence against the
real (uncollapsed) storage, so returned witnesses are exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .automata import (EPSILON, PUSHDOWN, TREE_STACK, Configuration,
                       StorageAutomaton, view_symbol)
from .trees import ROOT_LABEL, TOMB_LABEL, TreeNode, TreeStack

ACCEPTED = "accepted"
REJECTED = "rejected"
BUDGET_EXHAUSTED = "budget-exhausted"

_TOMB_LEAF = TreeNode(TOMB_LABEL)


@dataclass(frozen=True)
class SearchBudget:
    max_configurations: int = 10**6
    max_eps_moves_between_letters: int = 10**4

    def __post_init__(self):
        if self.max_configurations <= 0 or self.max_eps_moves_between_letters <= 0:
            raise ValueError("budget components must be positive")


class SearchBudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class RunStep:
    before: Configuration
    transition: Any
    after: Configuration


@dataclass(frozen=True)
class Run:
    steps: tuple

    @property
    def word_read(self) -> tuple:
        return tuple(s.transition.read for s in self.steps
                     if s.transition.read is not EPSILON)

    @property
    def word_str(self) -> str:
        return "".join(self.word_read)

    def configurations(self) -> Iterable[Configuration]:
        if self.steps:
            yield self.steps[0].before
            for s in self.steps:
                yield s.after


@dataclass(frozen=True)
class SearchResult:
    verdict: str
    run: Run | None = None


def successors(automaton: StorageAutomaton, config: Configuration, read: Any):
    """Edges of the graph realisation out of ``config`` labelled ``read``.

    This is the plain step relation; no pruning or collapsing is applied.
    """
    from .automata import apply_instruction

    out = []
    symbol = view_symbol(config.storage, automaton.storage_kind)
    for t in automaton.transitions:
        if t.source != config.state or t.read != read:
            continue
        if not t.predicate.holds(symbol):
            continue
        storage = apply_instruction(t.instruction, config.storage,
                                    automaton.storage_kind)
        if storage is None:
            continue
        out.append((t, Configuration(t.target, storage)))
    return tuple(out)


# --- compiled transition index -------------------------------------------


class _Compiled:
    """Per-automaton lookup tables for the hot search loop."""

    __slots__ = ("transitions", "eps_by_state", "letter_by_state",
                 "entry_group", "exit_group", "storage_kind", "finals",
                 "canonical")

    def __init__(self, m: StorageAutomaton):
        self.transitions = m.transitions
        self.storage_kind = m.storage_kind
        self.finals = m.final_states
        self.canonical = (m.storage_kind == TREE_STACK
                          and not m.has_up_instructions())
        hints = m.search_hints
        self.entry_group: dict = {}
        self.exit_group: dict = {}
        if hints:
            for gid, members in enumerate(hints.suppress_chained_entries):
                for ti in members:
                    self.entry_group[ti] = gid
            for gid, members in enumerate(hints.suppress_empty_exits):
                for ti in members:
                    self.exit_group[ti] = gid
        in_family = {}
        families = []
        if hints:
            for members in hints.symmetric_families:
                fam = tuple(members)
                families.append(fam)
                for ti in fam:
                    in_family[ti] = len(families) - 1
        # entry lists: ("t", ti) for plain transitions, ("f", member tuple)
        # for families, in declaration order of the first member.
        self.eps_by_state: dict = {}
        self.letter_by_state: dict = {}
        seen_family = set()
        for ti, t in enumerate(m.transitions):
            fam_id = in_family.get(ti)
            if fam_id is not None:
                if fam_id in seen_family:
                    continue
                seen_family.add(fam_id)
                entry = ("f", tuple(families[fam_id]))
            else:
                entry = ("t", ti)
            key = t.source if t.read is EPSILON else (t.source, t.read)
            table = self.eps_by_state if t.read is EPSILON else self.letter_by_state
            table.setdefault(key, []).append(entry)


def _compiled(m: StorageAutomaton) -> _Compiled:
    cached = getattr(m, "_compiled_index", None)
    if cached is None:
        cached = _Compiled(m)
        object.__setattr__(m, "_compiled_index", cached)
    return cached


def _canonical_down(ts: TreeStack) -> TreeStack:
    """``down`` that entombs the subtree just left (up-free automata only)."""
    step = ts.path
    merged = tuple(sorted(step.siblings + ((step.branch, _TOMB_LEAF),)))
    return TreeStack(TreeNode(step.parent_label, merged), step.tail)


def _apply(instr, storage, storage_kind: str, canonical: bool):
    kind = instr.kind
    if kind == "id":
        return storage
    if storage_kind == TREE_STACK:
        if kind == "push":
            if storage.focus.child(instr.branch) is not None:
                return None
            return storage.push(instr.branch, instr.label)
        if kind == "down":
            if storage.path is None:
                return None
            return _canonical_down(storage) if canonical else storage.down()
        if kind == "set":
            if storage.path is None:
                return None
            return storage.set(instr.label)
        if kind == "up":
            if storage.focus.child(instr.branch) is None:
                return None
            return storage.up(instr.branch)
        return None
    if storage_kind == PUSHDOWN:
        if kind == "pd_push":
            return storage + (instr.label,)
        if kind == "pd_pop":
            if storage and storage[-1] == instr.label:
                return storage[:-1]
            return None
    return None


# --- layered search -------------------------------------------------------


class _Accounting:
    """Mutable budget counters carried along one search path."""

    __slots__ = ("explored", "max_configurations", "max_eps")

    def __init__(self, budget: SearchBudget):
        self.explored = 0
        self.max_configurations = budget.max_configurations
        self.max_eps = budget.max_eps_moves_between_letters

    def clone(self) -> "_Accounting":
        other = object.__new__(_Accounting)
        other.explored = self.explored
        other.max_configurations = self.max_configurations
        other.max_eps = self.max_eps
        return other


def _expand(comp: _Compiled, entries, symbol, storage, fresh: frozenset):
    """Yield (transition index, new storage, entered group) per entry list."""
    transitions = comp.transitions
    entry_group = comp.entry_group
    exit_group = comp.exit_group
    kind = comp.storage_kind
    canonical = comp.canonical
    for tag, payload in entries:
        if tag == "t":
            candidates = (payload,)
        else:
            candidates = payload
        head = candidates[0]
        gid = entry_group.get(head)
        if fresh:
            if gid is not None and gid in fresh:
                continue
            xid = exit_group.get(head)
            if xid is not None and xid in fresh:
                continue
        for ti in candidates:
            t = transitions[ti]
            p = t.predicate
            pk = p.kind
            if pk == "equals":
                if symbol != p.labels[0]:
                    continue
            elif pk == "notequals":
                if symbol in p.labels:
                    continue
            new_storage = _apply(t.instruction, storage, kind, canonical)
            if new_storage is None:
                continue
            yield ti, new_storage, gid
            break  # families fire only their first applicable member
        # plain entries also reach here after their single candidate


def _close_layer(comp: _Compiled, layer: dict, queue: deque,
                 acct: _Accounting) -> str | None:
    """ε-close ``layer`` in place; returns a verdict on budget exhaustion."""
    eps_moves = 0
    eps_by_state = comp.eps_by_state
    while queue:
        key = queue.popleft()
        config, fresh = key
        entries = eps_by_state.get(config.state)
        if not entries:
            continue
        symbol = view_symbol(config.storage, comp.storage_kind)
        storage = config.storage
        for ti, new_storage, entered in _expand(comp, entries, symbol,
                                                storage, fresh):
            eps_moves += 1
            if eps_moves > acct.max_eps:
                return BUDGET_EXHAUSTED
            t = comp.transitions[ti]
            new_key = (Configuration(t.target, new_storage),
                       fresh if entered is None else fresh | {entered})
            if new_key not in layer:
                acct.explored += 1
                if acct.explored > acct.max_configurations:
                    return BUDGET_EXHAUSTED
                layer[new_key] = (key, ti, False)
                queue.append(new_key)
    return None


_NOT_FRESH: frozenset = frozenset()


def _initial_layer(m: StorageAutomaton, comp: _Compiled, acct: _Accounting):
    key = (m.initial_configuration(), _NOT_FRESH)
    layer = {key: None}
    acct.explored += 1
    if acct.explored > acct.max_configurations:
        return layer, BUDGET_EXHAUSTED
    status = _close_layer(comp, layer, deque([key]), acct)
    return layer, status


def _next_layer(comp: _Compiled, layer: dict, letter, acct: _Accounting):
    new_layer: dict = {}
    queue: deque = deque()
    letter_by_state = comp.letter_by_state
    for key in layer:
        config, fresh = key
        entries = letter_by_state.get((config.state, letter))
        if not entries:
            continue
        symbol = view_symbol(config.storage, comp.storage_kind)
        for ti, new_storage, _ in _expand(comp, entries, symbol,
                                          config.storage, fresh):
            t = comp.transitions[ti]
            new_key = (Configuration(t.target, new_storage), _NOT_FRESH)
            if new_key not in new_layer:
                acct.explored += 1
                if acct.explored > acct.max_configurations:
                    return new_layer, BUDGET_EXHAUSTED
                new_layer[new_key] = (key, ti, True)
                queue.append(new_key)
    status = _close_layer(comp, new_layer, queue, acct)
    return new_layer, status


def _accepting_key(comp: _Compiled, layer: dict):
    for key in layer:
        if key[0].state in comp.finals:
            return key
    return None


def _transition_path(layers: Sequence[dict], key) -> list:
    """Recover the transition-index sequence leading to ``key``."""
    indices: list = []
    depth = len(layers) - 1
    while True:
        record = layers[depth].get(key)
        if record is None:
            break
        key, ti, from_prev = record
        indices.append(ti)
        if from_prev:
            depth -= 1
    indices.reverse()
    return indices


def replay(m: StorageAutomaton, transitions: Sequence) -> Run:
    """Execute a transition sequence from the initial configuration.

    Raises if any step is inapplicable, so a returned Run is a verified
    witness.
    """
    from .automata import apply_instruction

    config = m.initial_configuration()
    steps = []
    for t in transitions:
        if t.source != config.state:
            raise ValueError(f"replay desync at {t}")
        symbol = view_symbol(config.storage, m.storage_kind)
        if not t.predicate.holds(symbol):
            raise ValueError(f"predicate fails in replay at {t}")
        storage = apply_instruction(t.instruction, config.storage,
                                    m.storage_kind)
        if storage is None:
            raise ValueError(f"instruction undefined in replay at {t}")
        after = Configuration(t.target, storage)
        steps.append(RunStep(config, t, after))
        config = after
    return Run(tuple(steps))


def revalidate(m: StorageAutomaton, run: Run) -> bool:
    """Check a run step-by-step against the plain ``successors`` relation."""
    if not run.steps:
        return True
    if run.steps[0].before != m.initial_configuration():
        return False
    for step in run.steps:
        options = successors(m, step.before, step.transition.read)
        if (step.transition, step.after) not in options:
            return False
    return True


def search_word(m: StorageAutomaton, word: Sequence, budget: SearchBudget | None = None,
                want_run: bool = False) -> SearchResult:
    """Decide one word; optionally return a witness run when accepted."""
    budget = budget or SearchBudget()
    comp = _compiled(m)
    acct = _Accounting(budget)
    layers = []
    layer, status = _initial_layer(m, comp, acct)
    layers.append(layer)
    if status is not None:
        return SearchResult(status)
    for letter in word:
        layer, status = _next_layer(comp, layers[-1], letter, acct)
        layers.append(layer)
        if status is not None:
            return SearchResult(status)
        if not layer:
            return SearchResult(REJECTED)
    key = _accepting_key(comp, layers[-1])
    if key is None:
        return SearchResult(REJECTED)
    if not want_run:
        return SearchResult(ACCEPTED)
    path = _transition_path(layers, key)
    run = replay(m, [m.transitions[ti] for ti in path])
    return SearchResult(ACCEPTED, run)


def accepts(m: StorageAutomaton, word: Sequence,
            budget: SearchBudget | None = None) -> str:
    """Three-valued acceptance verdict for ``word``."""
    return search_word(m, word, budget).verdict


def find_accepting_run(m: StorageAutomaton, word: Sequence,
                       budget: SearchBudget | None = None) -> Run | None:
    """Witness run for an accepted word; None when rejected.

    Budget exhaustion raises, so None always means a definite rejection.
    """
    result = search_word(m, word, budget, want_run=True)
    if result.verdict == BUDGET_EXHAUSTED:
        raise SearchBudgetExceeded(str(word))
    return result.run


def sweep(m: StorageAutomaton, alphabet: Sequence, max_len: int,
          budget: SearchBudget | None = None, want_runs: bool = False,
          on_result: Callable | None = None) -> dict | None:
    """Decide every word over ``alphabet`` of length ≤ ``max_len``.

    Layers are shared along common prefixes, so the whole corpus costs one
    closure per distinct prefix.  Budget accounting follows each root-to-word
    path separately and therefore agrees exactly with per-word calls of
    :func:`accepts`.  Results stream to ``on_result(word, verdict, run)`` when
    given, else collect into a dict keyed by letter tuples.
    """
    budget = budget or SearchBudget()
    comp = _compiled(m)
    collected: dict | None = None if on_result else {}

    def emit(word: tuple, verdict: str, layers_for_run, key) -> None:
        run = None
        if verdict == ACCEPTED and want_runs and layers_for_run is not None:
            path = _transition_path(layers_for_run, key)
            run = replay(m, [m.transitions[ti] for ti in path])
        if on_result:
            on_result(word, verdict, run)
        else:
            collected[word] = (verdict, run) if want_runs else verdict

    def verdict_of(layers, status):
        if status is not None:
            return status, None
        key = _accepting_key(comp, layers[-1])
        return (ACCEPTED, key) if key is not None else (REJECTED, None)

    def mark_subtree(word: tuple, depth_left: int, verdict: str) -> None:
        emit(word, verdict, None, None)
        if depth_left:
            for a in alphabet:
                mark_subtree(word + (a,), depth_left - 1, verdict)

    def descend(word: tuple, layers: list, acct: _Accounting,
                depth_left: int) -> None:
        if not depth_left:
            return
        for a in alphabet:
            child_word = word + (a,)
            child_acct = acct.clone()
            layer, status = _next_layer(comp, layers[-1], a, child_acct)
            layers.append(layer)
            verdict, key = verdict_of(layers, status)
            emit(child_word, verdict, layers, key)
            if status is not None or not layer:
                # budget tripped or dead prefix: every extension shares fate
                if depth_left > 1:
                    tail = status if status is not None else REJECTED
                    for b in alphabet:
                        mark_subtree(child_word + (b,), depth_left - 2, tail)
            else:
                descend(child_word, layers, child_acct, depth_left - 1)
            layers.pop()

    acct = _Accounting(budget)
    layers_root, status = _initial_layer(m, comp, acct)
    layers = [layers_root]
    verdict, key = verdict_of(layers, status)
    emit((), verdict, layers, key)
    if status is None:
        descend((), layers, acct, max_len)
    else:
        for a in alphabet:
            mark_subtree((a,), max_len - 1, status)
    return collected
