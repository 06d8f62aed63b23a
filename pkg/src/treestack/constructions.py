"""Closure constructions for word-problem automata over tree-stack storage.

Given automata for the word problems of component groups, these operations
build automata for free products, amalgamated products over a finite
subgroup, HNN extensions over finite associated subgroups, and fundamental
groups of finite graphs of groups.

All constructions share one embedding discipline.  A component automaton is
re-rooted onto marker vertices: the composite pushes a marker, runs the
component in the subtree above it as if the marker were the root, and pops
back through the marker when the component accepts.  Concretely, every
component predicate mentioning the root label ◇ is rewritten over the set of
marker labels that can root that component, and down/set rules are guarded so
they never act on a marker (mirroring their undefinedness at the real root).

Interruptions are handled with negative push branches: a component may be
paused at any vertex, a marker for the other component pushed on a branch
from -1 to -n, and resumed when the inner run pops back.  n is the uniform
visit bound of the component automata, so a fresh branch is always available.

Constructed automata carry search hints: the n branch variants of one entry
rule form a symmetric family, and ε-entries are flagged so the search does
not chain them without consuming input.  Both prunings are exact for the
language (any accepted word has a run of the pruned shape).
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, Mapping, Sequence

from .analysis import uniform_visit_bound
from .automata import (EPSILON, TREE_STACK, Instruction, Predicate,
                       SearchHints, StorageAutomaton, Transition)
from .groups import FiniteSubgroupData, check_phi, check_rep_words
from .oracle import (AmalgamSpec, FiniteGroupSpec, FreeProductSpec,
                     GraphOfGroupsSpec, HnnSpec, IntegersSpec, OracleError)
from .search import ACCEPTED, accepts
from .trees import ROOT_LABEL


class ConstructionError(Exception):
    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(code if not detail else f"{code}: {detail}")


# --- shared helpers -------------------------------------------------------


def _require_tree(m: StorageAutomaton) -> None:
    if m.storage_kind != TREE_STACK:
        raise ConstructionError("not-tree-stack")


def _single_final(m: StorageAutomaton):
    if len(m.final_states) != 1:
        raise ConstructionError(
            "not-normalized",
            "component automata must have a single root-accepting final state")
    return next(iter(m.final_states))


def _check_disjoint(m1: StorageAutomaton, m2: StorageAutomaton) -> None:
    if set(m1.input_alphabet) & set(m2.input_alphabet):
        raise ConstructionError("alphabet-overlap",
                                "component input alphabets intersect")
    if set(m1.storage_alphabet) & set(m2.storage_alphabet):
        raise ConstructionError("alphabet-overlap",
                                "component storage alphabets intersect")


def _check_fresh_labels(markers: Iterable, *alphabets) -> None:
    used = set()
    for alphabet in alphabets:
        used.update(alphabet)
    used.add(ROOT_LABEL)
    for label in markers:
        if label in used:
            raise ConstructionError("label-collision", repr(label))


def _embed_one(t: Transition, roots: tuple | None) -> list:
    """Re-root one component rule: marker labels play the part of ◇.

    equals(◇) rules are duplicated over the markers; notequals sets keep ◇
    and gain the markers.  down/set rules are undefined at the real root, so
    their predicates are strengthened to exclude ◇ and the markers, which
    leaves standalone behaviour unchanged and stops the component from
    stepping off (or relabelling) its local root inside a composite.
    ``roots=None`` means no re-rooting at all.
    """
    if roots is None:
        return [t]
    p = t.predicate
    if t.instruction.kind in ("down", "set"):
        if p.kind == "equals":
            if p.labels[0] == ROOT_LABEL:
                return []  # undefined at the root: dead standalone
            return [t]
        keep_out = set(p.labels) | {ROOT_LABEL} | set(roots)
        return [Transition(t.source, t.read, Predicate.notequals(*keep_out),
                           t.instruction, t.target)]
    if p.kind == "equals" and p.labels[0] == ROOT_LABEL:
        return [Transition(t.source, t.read, Predicate.equals(r),
                           t.instruction, t.target) for r in roots]
    if p.kind == "notequals" and ROOT_LABEL in p.labels:
        return [Transition(t.source, t.read,
                           Predicate.notequals(*(set(p.labels) | set(roots))),
                           t.instruction, t.target)]
    return [t]


def _extend_component(m: StorageAutomaton, suffixes: Sequence[tuple],
                      wrap: Callable, roots: tuple | None, add: Callable,
                      eps_only: bool = False) -> tuple:
    """Pendingize, re-root and append one component's rules.

    A nonempty pending word is consumed silently: rules reading its head
    letter apply as ε-rules and drop the head; ε-rules of the component
    preserve the pending word.  Real input is only read with empty pending
    (never in ``eps_only`` copies).  Returns (by_base, by_base_v) mapping
    component transition indices, and (index, pending) pairs, to the
    composite indices emitted for them, for hint translation.
    """
    by_base: dict = {}
    by_base_v: dict = {}

    def put(bi: int, v: tuple, rule: Transition) -> None:
        for emb in _embed_one(rule, roots):
            idx = add(emb)
            by_base.setdefault(bi, []).append(idx)
            by_base_v.setdefault((bi, v), []).append(idx)

    for bi, t in enumerate(m.transitions):
        if t.read is EPSILON:
            for v in suffixes:
                put(bi, v, Transition(wrap(t.source, v), EPSILON,
                                      t.predicate, t.instruction,
                                      wrap(t.target, v)))
        else:
            for v in suffixes:
                if v and v[0] == t.read:
                    put(bi, v, Transition(wrap(t.source, v), EPSILON,
                                          t.predicate, t.instruction,
                                          wrap(t.target, v[1:])))
            if not eps_only:
                put(bi, (), Transition(wrap(t.source, ()), t.read,
                                       t.predicate, t.instruction,
                                       wrap(t.target, ())))
    return by_base, by_base_v


def _translate_hints(hints, suffixes: Sequence[tuple], by_base: dict,
                     by_base_v: dict, entry_groups: list, exit_groups: list,
                     families: list) -> None:
    """Carry a component's hint groups over to its embedded copies.

    Each component group becomes a fresh composite group, so a component's
    entries only ever block that component's own chained transitions.
    """
    if hints is None:
        return
    n = max(len(hints.suppress_chained_entries),
            len(hints.suppress_empty_exits))
    for gid in range(n):
        entries = hints.suppress_chained_entries[gid] \
            if gid < len(hints.suppress_chained_entries) else ()
        exits = hints.suppress_empty_exits[gid] \
            if gid < len(hints.suppress_empty_exits) else ()
        entry_groups.append(tuple(i for bi in entries
                                  for i in by_base.get(bi, ())))
        exit_groups.append(tuple(i for bi in exits
                                 for i in by_base.get(bi, ())))
    for fam in hints.symmetric_families:
        for v in suffixes:
            members = tuple(i for bi in fam
                            for i in by_base_v.get((bi, v), ()))
            if len(members) > 1:
                families.append(members)


def _suffixes(words: Iterable[tuple]) -> tuple:
    out = {()}
    for w in words:
        for i in range(len(w) + 1):
            out.add(tuple(w[i:]))
    return tuple(sorted(out, key=lambda v: (len(v), v)))


def _branches(n: int) -> range:
    return range(-1, -n - 1, -1)


# --- subset recognizer ----------------------------------------------------


def subset_recognizer(m: StorageAutomaton, prefixes: Iterable) -> StorageAutomaton:
    """Automaton for {w : some v in ``prefixes`` has vw ∈ L(M)}.

    States pair M's states with pending suffixes of the prefix words; a
    bootstrap rule at the root guesses which prefix to charge.  With
    prefixes = {ε} this is L(M) itself.
    """
    _require_tree(m)
    final = _single_final(m)
    words = tuple(dict.fromkeys(tuple(v) for v in prefixes))
    suffixes = _suffixes(words)
    wrap = lambda q, v: (q, v)
    start = "S"
    transitions = [
        Transition(start, EPSILON, Predicate.equals(ROOT_LABEL),
                   Instruction.id(), (m.initial_state, v))
        for v in words
    ]

    def add(t: Transition) -> int:
        transitions.append(t)
        return len(transitions) - 1

    entry_groups: list = []
    exit_groups: list = []
    families: list = []
    by_base, by_base_v = _extend_component(m, suffixes, wrap, None, add)
    _translate_hints(m.search_hints, suffixes, by_base, by_base_v,
                     entry_groups, exit_groups, families)
    states = (start,) + tuple((q, v) for q in m.states for v in suffixes)
    return StorageAutomaton(
        states=states,
        input_alphabet=m.input_alphabet,
        storage_kind=TREE_STACK,
        storage_alphabet=m.storage_alphabet,
        initial_state=start,
        final_states=frozenset({(final, ())}),
        transitions=tuple(transitions),
        search_hints=SearchHints(tuple(entry_groups), tuple(exit_groups),
                                 tuple(families)),
    )


# --- free product ---------------------------------------------------------


def free_product(m1: StorageAutomaton, m2: StorageAutomaton,
                 k: int = 1) -> StorageAutomaton:
    """Word-problem automaton for G₁ ∗ G₂ from component automata.

    Components must be cycle-free with a single final state reached at the
    root.  Runs alternate between the components: a bootstrap marker starts
    either side, and either side may be interrupted by pushing a marker
    recording the interrupted state, to be resumed when the other side's
    syllable closes.  Only states with a letter in-edge are interruptible;
    an interruption at an ε-derived state is subsumed by one at its
    ancestor, since the ε-step replays after the resume.
    """
    _require_tree(m1)
    _require_tree(m2)
    _check_disjoint(m1, m2)
    finals = {1: _single_final(m1), 2: _single_final(m2)}
    n = max(uniform_visit_bound(m1, k), uniform_visit_bound(m2, k))
    sides = {1: m1, 2: m2}
    start, accept = "S", "F"

    entry_states = {}
    for side in (1, 2):
        targets = {t.target for t in sides[side].transitions
                   if t.read is not EPSILON}
        entry_states[side] = tuple(
            q for q in sides[side].states
            if q == sides[side].initial_state or q in targets)

    def marker(side: int, ret) -> tuple:
        return ("box", side, ret)

    # markers that can actually appear as a side's local root
    def live_roots(side: int) -> tuple:
        other = 2 if side == 1 else 1
        return (marker(side, start),) + tuple(
            marker(side, (other, q)) for q in entry_states[other])

    # the printed re-entry guard: markers of the entered side whose return
    # state is also of that side; no rule ever pushes one
    def vacuous_guard(side: int) -> Predicate:
        return Predicate.notequals(
            *(marker(side, (side, q)) for q in entry_states[side]))

    transitions: list = []
    own_entries: list = []
    own_exits: list = []
    families: list = []

    def add(t: Transition) -> int:
        transitions.append(t)
        return len(transitions) - 1

    add(Transition(start, EPSILON, Predicate.equals(ROOT_LABEL),
                   Instruction.id(), accept))
    for side in (1, 2):
        own_entries.append(add(Transition(
            start, EPSILON, Predicate.any(),
            Instruction.push(side, marker(side, start)),
            (side, sides[side].initial_state))))
        own_exits.append(add(Transition((side, finals[side]), EPSILON,
                                        Predicate.equals(marker(side, start)),
                                        Instruction.down(), start)))
    for side in (1, 2):
        other = 2 if side == 1 else 1
        guard = vacuous_guard(side)
        for q in entry_states[other]:
            ret = (other, q)
            first = len(transitions)
            for b in _branches(n):
                add(Transition(ret, EPSILON, guard,
                               Instruction.push(b, marker(side, ret)),
                               (side, sides[side].initial_state)))
            families.append(tuple(range(first, len(transitions))))
            own_entries.append(first)
            own_exits.append(add(Transition(
                (side, finals[side]), EPSILON,
                Predicate.equals(marker(side, ret)),
                Instruction.down(), ret)))
    entry_groups = [tuple(own_entries)]
    exit_groups = [tuple(own_exits)]
    for side in (1, 2):
        wrap = lambda q, v, side=side: (side, q)
        by_base, by_base_v = _extend_component(sides[side], ((),), wrap,
                                               live_roots(side), add)
        _translate_hints(sides[side].search_hints, ((),), by_base, by_base_v,
                         entry_groups, exit_groups, families)

    # the full marker label space, including the vacuous guard labels
    marker_labels = tuple(
        marker(side, ret)
        for side in (1, 2)
        for ret in (start,) + tuple((i, q) for i in (1, 2)
                                    for q in entry_states[i]))
    _check_fresh_labels(marker_labels, m1.storage_alphabet,
                        m2.storage_alphabet)
    return StorageAutomaton(
        states=(start, accept) + tuple((i, q) for i in (1, 2)
                                       for q in sides[i].states),
        input_alphabet=m1.input_alphabet + m2.input_alphabet,
        storage_kind=TREE_STACK,
        storage_alphabet=m1.storage_alphabet + m2.storage_alphabet
        + marker_labels,
        initial_state=start,
        final_states=frozenset({accept}),
        transitions=tuple(transitions),
        search_hints=SearchHints(tuple(entry_groups), tuple(exit_groups),
                                 tuple(families)),
    )


# --- amalgamated product --------------------------------------------------


def amalgamated_product(m1: StorageAutomaton, m2: StorageAutomaton,
                        subgroup: FiniteSubgroupData,
                        k: int = 1) -> StorageAutomaton:
    """Word-problem automaton for G₁ ∗_H G₂ over a finite subgroup H.

    On top of the free-product mechanics, states carry a pending word.  A
    host at (q, ε) may push a marker recording q and enter the other side;
    the inner syllable must evaluate to ι(φ(h)) for some h ∈ H.  The guess
    of h is deferred to the exit: an ε-rule charges the inner run with the
    representative of φ(h)⁻¹ in a closing copy that admits no further
    input, so a wrong guess dies inside one ε-closure instead of being
    carried in the marker.  Once the charge is delivered and the inner run
    accepts at the marker, an ε-exit pops it and resumes the host at
    (q, rep of h), replaying h's word on the host side.  Markers record
    only host states with a letter in-edge; entries from ε-derived states
    are subsumed because pendingized ε-rules survive under every pending
    word.  Subgroup data is validated against the components before use.
    """
    _require_tree(m1)
    _require_tree(m2)
    _check_disjoint(m1, m2)
    finals = {1: _single_final(m1), 2: _single_final(m2)}
    sides = {1: m1, 2: m2}
    for side_name, m in (("left", m1), ("right", m2)):
        check_rep_words(subgroup, side_name,
                        lambda w, m=m: accepts(m, w) == ACCEPTED)
    elements = subgroup.elements
    reps = {
        1: {h: tuple(subgroup.left_reps[h]) for h in elements},
        2: {h: tuple(subgroup.right_reps[h]) for h in elements},
    }

    def entry_pending(host_side: int, h):
        # the other side's representative of φ(h)⁻¹ (resp. φ⁻¹(h)⁻¹)
        if host_side == 1:
            return reps[2][subgroup.phi_of(subgroup.inv(h))]
        return reps[1][subgroup.phi_inverse_of(subgroup.inv(h))]

    suffixes = {side: _suffixes(reps[side].values()) for side in (1, 2)}
    n = max(uniform_visit_bound(m1, k), uniform_visit_bound(m2, k))
    start, accept = "S", "F"
    box = {1: ("box", 1), 2: ("box", 2)}

    entry_states = {}
    for side in (1, 2):
        targets = {t.target for t in sides[side].transitions
                   if t.read is not EPSILON}
        entry_states[side] = tuple(
            q for q in sides[side].states
            if q == sides[side].initial_state or q in targets)

    def mark(host_side: int, q) -> tuple:
        return ("mark", host_side, q)

    marks = {side: tuple(mark(side, q) for q in entry_states[side])
             for side in (1, 2)}
    # side i runs are rooted at its bootstrap box or at markers pushed by
    # the other side's hosts
    local_roots = {1: (box[1],) + marks[2], 2: (box[2],) + marks[1]}

    transitions: list = []
    own_entries: list = []
    own_exits: list = []
    entry_groups: list = []
    exit_groups: list = []
    families: list = []

    def add(t: Transition) -> int:
        transitions.append(t)
        return len(transitions) - 1

    # group 1: bootstraps (both on branch 1) and the final rule at the root
    for side in (1, 2):
        own_entries.append(add(Transition(
            start, EPSILON, Predicate.any(), Instruction.push(1, box[side]),
            (side, sides[side].initial_state, ()))))
    add(Transition(start, EPSILON, Predicate.equals(ROOT_LABEL),
                   Instruction.id(), accept))
    # group 2: bottom exits
    for side in (1, 2):
        own_exits.append(add(Transition((side, finals[side], ()), EPSILON,
                                        Predicate.equals(box[side]),
                                        Instruction.down(), start)))
    # groups 3/4: entries into the other side, markers recording the return
    # state only
    for side in (1, 2):
        other = 2 if side == 1 else 1
        guard = Predicate.notequals(*marks[other])
        for q in entry_states[side]:
            first = len(transitions)
            for b in _branches(n):
                add(Transition(
                    (side, q, ()), EPSILON, guard,
                    Instruction.push(b, mark(side, q)),
                    (other, sides[other].initial_state, ())))
            families.append(tuple(range(first, len(transitions))))
            own_entries.append(first)
    # group 5: deferred exits.  Guessing h charges the inner run with the
    # word it must still be worth; delivery ends in the closing copy at the
    # marker, which pops and resumes the host charged with rep(h).
    for side in (1, 2):
        other = 2 if side == 1 else 1
        for h in elements:
            for q in sides[other].states:
                own_exits.append(add(Transition(
                    (other, q, ()), EPSILON, Predicate.any(),
                    Instruction.id(),
                    ("close", side, h, q, entry_pending(side, h)))))
            for q_ret in entry_states[side]:
                add(Transition(("close", side, h, finals[other], ()),
                               EPSILON, Predicate.equals(mark(side, q_ret)),
                               Instruction.down(),
                               (side, q_ret, reps[side][h])))
            wrap_close = lambda q, v, s=side, e=h: ("close", s, e, q, v)
            by_base, by_base_v = _extend_component(
                sides[other], suffixes[other], wrap_close,
                local_roots[other], add, eps_only=True)
            _translate_hints(sides[other].search_hints, suffixes[other],
                             by_base, by_base_v, entry_groups, exit_groups,
                             families)
    # group 6: the pendingized component rules, re-rooted on markers
    for side in (1, 2):
        wrap = lambda q, v, side=side: (side, q, v)
        by_base, by_base_v = _extend_component(sides[side], suffixes[side],
                                               wrap, local_roots[side], add)
        _translate_hints(sides[side].search_hints, suffixes[side], by_base,
                         by_base_v, entry_groups, exit_groups, families)

    marker_labels = (box[1], box[2]) + marks[1] + marks[2]
    _check_fresh_labels(marker_labels, m1.storage_alphabet,
                        m2.storage_alphabet)
    states = (start, accept) + tuple(
        (side, q, v) for side in (1, 2) for q in sides[side].states
        for v in suffixes[side]) + tuple(
        ("close", side, h, q, v) for side in (1, 2) for h in elements
        for q in sides[2 if side == 1 else 1].states
        for v in suffixes[2 if side == 1 else 1])
    return StorageAutomaton(
        states=states,
        input_alphabet=m1.input_alphabet + m2.input_alphabet,
        storage_kind=TREE_STACK,
        storage_alphabet=m1.storage_alphabet + m2.storage_alphabet
        + marker_labels,
        initial_state=start,
        final_states=frozenset({accept}),
        transitions=tuple(transitions),
        search_hints=SearchHints(
            (tuple(own_entries),) + tuple(entry_groups),
            (tuple(own_exits),) + tuple(exit_groups),
            tuple(families)),
    )


# --- HNN extension --------------------------------------------------------


def hnn_extension(m: StorageAutomaton, h1: FiniteSubgroupData,
                  h2: FiniteSubgroupData, phi: Mapping,
                  t_name: str, T_name: str, k: int = 1) -> StorageAutomaton:
    """Word-problem automaton for the HNN extension G∗_φ.

    Reading the stable letter t at a host state (q, ε) pushes a marker
    (q, t) on a fresh negative branch and starts an inner run.  The segment
    up to the matching t⁻¹ must equal ι(h) for some h ∈ H₁; rather than
    guessing h up front, the guess is deferred to the t⁻¹: reading it
    charges the inner run with rep(h⁻¹) in a closing copy that admits no
    further input, so a wrong guess dies in the same ε-closure instead of
    being carried.  Once the charge is delivered and the inner run accepts
    at its marker, an ε-exit pops it and resumes the host at
    (q, rep(φ(h))), replacing the pinch t·ι(h)·t⁻¹ by ι(φ(h)).  t⁻¹…t
    pinches work dually with φ⁻¹.  Markers record only host states with a
    letter in-edge: an entry from an ε-derived state is subsumed by the
    entry from its ancestor, because pendingized ε-rules preserve the
    closure chain under every pending word.
    """
    _require_tree(m)
    final = _single_final(m)
    if t_name == T_name or t_name in m.input_alphabet \
            or T_name in m.input_alphabet:
        raise ConstructionError("alphabet-overlap",
                                "stable letters must be fresh and distinct")
    phi = dict(phi)
    check_phi(h1, h2, phi)
    phi_inverse = {image: g for g, image in phi.items()}
    decide = lambda w: accepts(m, w) == ACCEPTED
    check_rep_words(h1, "left", decide)
    check_rep_words(h2, "left", decide)
    rep1 = {g: tuple(h1.left_reps[g]) for g in h1.elements}
    rep2 = {g: tuple(h2.left_reps[g]) for g in h2.elements}
    suffixes = _suffixes(tuple(rep1.values()) + tuple(rep2.values()))
    n = uniform_visit_bound(m, k)
    start, accept = "S", "F"
    base_box = ("box", 0)

    letter_targets = {t.target for t in m.transitions if t.read is not EPSILON}
    entry_states = tuple(q for q in m.states
                         if q == m.initial_state or q in letter_targets)

    def mark(q, stable: str) -> tuple:
        return ("mark", q, stable)

    marker_labels = tuple(mark(q, s) for s in (t_name, T_name)
                          for q in entry_states)
    local_roots = (base_box,) + marker_labels
    _check_fresh_labels((base_box,) + marker_labels, m.storage_alphabet)

    transitions: list = []
    families: list = []

    def add(t: Transition) -> int:
        transitions.append(t)
        return len(transitions) - 1

    add(Transition(start, EPSILON, Predicate.equals(ROOT_LABEL),
                   Instruction.push(1, base_box), (m.initial_state, ())))
    add(Transition((final, ()), EPSILON, Predicate.equals(base_box),
                   Instruction.down(), accept))
    for stable in (t_name, T_name):
        for q in entry_states:
            first = len(transitions)
            for b in _branches(n):
                add(Transition((q, ()), stable, Predicate.any(),
                               Instruction.push(b, mark(q, stable)),
                               (m.initial_state, ())))
            families.append(tuple(range(first, len(transitions))))
    close_plans = (
        (t_name, T_name, h1, rep1, lambda g: rep2[phi[g]]),
        (T_name, t_name, h2, rep2, lambda g: rep1[phi_inverse[g]]),
    )
    entry_groups: list = []
    exit_groups: list = []
    closing_states: list = []
    for stable, opposite, sub, rep, resume_pending in close_plans:
        for g in sub.elements:
            for q in m.states:
                add(Transition((q, ()), opposite, Predicate.any(),
                               Instruction.id(),
                               (q, rep[sub.inv(g)], stable, g)))
            for q_ret in entry_states:
                add(Transition((final, (), stable, g), EPSILON,
                               Predicate.equals(mark(q_ret, stable)),
                               Instruction.down(), (q_ret, resume_pending(g))))
            wrap_close = lambda q, v, s=stable, e=g: (q, v, s, e)
            by_base, by_base_v = _extend_component(m, suffixes, wrap_close,
                                                   local_roots, add,
                                                   eps_only=True)
            _translate_hints(m.search_hints, suffixes, by_base, by_base_v,
                             entry_groups, exit_groups, families)
            closing_states.extend((q, v, stable, g) for q in m.states
                                  for v in suffixes)
    wrap = lambda q, v: (q, v)
    by_base, by_base_v = _extend_component(m, suffixes, wrap, local_roots,
                                           add)
    _translate_hints(m.search_hints, suffixes, by_base, by_base_v,
                     entry_groups, exit_groups, families)

    states = (start, accept) \
        + tuple((q, v) for q in m.states for v in suffixes) \
        + tuple(closing_states)
    return StorageAutomaton(
        states=states,
        input_alphabet=m.input_alphabet + (t_name, T_name),
        storage_kind=TREE_STACK,
        storage_alphabet=m.storage_alphabet + (base_box,) + marker_labels,
        initial_state=start,
        final_states=frozenset({accept}),
        transitions=tuple(transitions),
        search_hints=SearchHints(tuple(entry_groups), tuple(exit_groups),
                                 tuple(families)),
    )


# --- graphs of groups -----------------------------------------------------


def automaton_for(spec: Any, k: int = 1) -> StorageAutomaton:
    """A root-accepting tree-stack automaton for a group description."""
    from .analysis import normalize_root_acceptance
    from .groups import finite_group_automaton, spine_lift, \
        z_word_problem_automaton

    if isinstance(spec, StorageAutomaton):
        _require_tree(spec)
        _single_final(spec)
        return spec
    if isinstance(spec, FiniteGroupSpec):
        flat = finite_group_automaton(spec.group, spec.gen_map())
        return normalize_root_acceptance(spine_lift(flat))
    if isinstance(spec, IntegersSpec):
        return z_word_problem_automaton(spec.plus, spec.minus)
    if isinstance(spec, FreeProductSpec):
        return free_product(automaton_for(spec.left, k),
                            automaton_for(spec.right, k), k)
    if isinstance(spec, AmalgamSpec):
        return amalgamated_product(automaton_for(spec.left, k),
                                   automaton_for(spec.right, k),
                                   spec.subgroup, k)
    if isinstance(spec, HnnSpec):
        return hnn_extension(automaton_for(spec.base, k), spec.h1, spec.h2,
                             spec.phi_map(), spec.t_name, spec.T_name, k)
    if isinstance(spec, GraphOfGroupsSpec):
        return graph_of_groups(spec, k)
    raise OracleError("unsupported-vertex-group", repr(spec))


def graph_of_groups(spec: GraphOfGroupsSpec, k: int = 1) -> StorageAutomaton:
    """Automaton for the fundamental group of a finite graph of groups.

    Folds amalgamated products over the spanning-tree edges in lexicographic
    edge-id order, then HNN extensions over the remaining edges, mirroring
    the fold used by the oracle so the two stay word-for-word comparable.
    """
    spec.validate()
    component: dict = {v: v for v in dict(spec.vertices)}
    current: dict = {v: automaton_for(vspec, k)
                     for v, vspec in spec.vertices}

    def root(v):
        while component[v] != v:
            component[v] = component[component[v]]
            v = component[v]
        return v

    for e in sorted((e for e in spec.edges if e.in_spanning_tree),
                    key=lambda e: e.edge_id):
        a, b = root(e.source), root(e.target)
        merged = amalgamated_product(current[a], current[b], e.data, k)
        component[a] = b
        current[b] = merged
    for e in sorted((e for e in spec.edges if not e.in_spanning_tree),
                    key=lambda e: e.edge_id):
        a = root(e.source)
        data = e.data
        g1 = FiniteSubgroupData(data.group, data.left_reps, data.left_reps)
        g2 = FiniteSubgroupData(data.group, data.right_reps, data.right_reps)
        phi = {h: data.phi_of(h) for h in data.elements}
        t, T = e.stable
        current[a] = hnn_extension(current[a], g1, g2, phi, t, T, k)
    return current[root(next(iter(dict(spec.vertices))))]


# --- fixtures -------------------------------------------------------------


def dyck_pushdown_automaton() -> StorageAutomaton:
    """One-letter Dyck pushdown automaton over {a, A}, accepting on empty
    stack at a dedicated final state."""
    from .automata import PUSHDOWN

    q, q_acc = "q0", "q_acc"
    transitions = (
        Transition(q, "a", Predicate.any(), Instruction.pd_push("a"), q),
        Transition(q, "A", Predicate.equals("a"), Instruction.pd_pop("a"), q),
        Transition(q, EPSILON, Predicate.equals(ROOT_LABEL),
                   Instruction.id(), q_acc),
    )
    return StorageAutomaton(
        states=(q, q_acc),
        input_alphabet=("a", "A"),
        storage_kind=PUSHDOWN,
        storage_alphabet=("a",),
        initial_state=q,
        final_states=frozenset({q_acc}),
        transitions=transitions,
    )
