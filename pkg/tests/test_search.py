"""Acceptance engine: verdicts, budgets, runs, and hint semantics."""

import itertools

import pytest

from treestack.automata import (EPSILON, TREE_STACK, Instruction, Predicate,
                                SearchHints, StorageAutomaton, Transition)
from treestack.groups import z_word_problem_automaton
from treestack.search import (ACCEPTED, BUDGET_EXHAUSTED, REJECTED, Run,
                              RunStep, SearchBudget, SearchBudgetExceeded,
                              accepts, find_accepting_run, replay,
                              revalidate, search_word, successors, sweep)
from treestack.trees import ROOT_LABEL


def _tiny(transitions, finals, states, alphabet=("x",), hints=None):
    return StorageAutomaton(
        states=states,
        input_alphabet=alphabet,
        storage_kind=TREE_STACK,
        storage_alphabet=("m",),
        initial_state=states[0],
        final_states=frozenset(finals),
        transitions=tuple(transitions),
        search_hints=hints,
    )


def test_z_verdicts():
    m = z_word_problem_automaton("t", "T")
    assert accepts(m, ()) == ACCEPTED
    assert accepts(m, ("t", "T")) == ACCEPTED
    assert accepts(m, ("T", "t")) == ACCEPTED
    assert accepts(m, ("t",)) == REJECTED
    assert accepts(m, ("t", "t", "T")) == REJECTED


def test_run_witness_and_revalidate():
    m = z_word_problem_automaton("t", "T")
    result = search_word(m, ("t", "T"), want_run=True)
    assert result.verdict == ACCEPTED
    run = result.run
    assert run.word_read == ("t", "T")
    assert run.word_str == "tT"
    assert revalidate(m, run)
    assert run.steps[0].before == m.initial_configuration()
    assert run.steps[-1].after.state in m.final_states


def test_find_accepting_run_none_on_rejection():
    m = z_word_problem_automaton("t", "T")
    assert find_accepting_run(m, ("t",)) is None


def test_successors_plain_relation():
    m = z_word_problem_automaton("t", "T")
    config = m.initial_configuration()
    options = successors(m, config, "t")
    assert len(options) == 1
    transition, after = options[0]
    assert transition.read == "t"
    assert after.state == "q_plus"
    assert after.storage.pointer == (0,)
    ((_, after_minus),) = successors(m, config, "T")
    assert after_minus.state == "q_minus"
    ((_, after_eps),) = successors(m, config, EPSILON)
    assert after_eps.state == "q_f"
    assert after_eps.storage == config.storage


def test_replay_desync_raises():
    m = z_word_problem_automaton("t", "T")
    with pytest.raises(ValueError):
        replay(m, [m.transitions[1]])  # starts at the wrong state


def test_revalidate_rejects_mangled_run():
    m = z_word_problem_automaton("t", "T")
    run = find_accepting_run(m, ("t", "T"))
    bad_step = RunStep(run.steps[0].before, run.steps[0].transition,
                       run.steps[-1].after)
    assert not revalidate(m, Run((bad_step,) + run.steps[1:]))


def test_unknown_letter_rejects():
    m = z_word_problem_automaton("t", "T")
    assert accepts(m, ("z",)) == REJECTED


# --- budgets --------------------------------------------------------------


def test_budget_fields_must_be_positive():
    with pytest.raises(ValueError):
        SearchBudget(0, 1)
    with pytest.raises(ValueError):
        SearchBudget(1, 0)


def test_tiny_configuration_budget_exhausts():
    m = z_word_problem_automaton("t", "T")
    assert accepts(m, ("t", "T"), SearchBudget(1, 10**4)) == BUDGET_EXHAUSTED


def test_find_accepting_run_raises_on_budget():
    m = z_word_problem_automaton("t", "T")
    with pytest.raises(SearchBudgetExceeded):
        find_accepting_run(m, ("t", "T"), SearchBudget(1, 10**4))


def test_budget_monotonicity():
    m = z_word_problem_automaton("t", "T")
    small = SearchBudget(12, 12)
    big = SearchBudget(10**6, 10**4)
    for n in range(0, 5):
        for w in itertools.product("tT", repeat=n):
            got = accepts(m, w, small)
            if got != BUDGET_EXHAUSTED:
                assert got == accepts(m, w, big)


def _push_loop(hints):
    # an ε push loop: every closure step descends one fresh m vertex
    return _tiny(
        [
            Transition("A", EPSILON, Predicate.any(),
                       Instruction.push(1, "m"), "A"),
            Transition("A", "x", Predicate.any(), Instruction.id(), "B"),
        ],
        finals=["B"], states=("A", "B"), hints=hints,
    )


def test_unhinted_push_loop_exhausts_budget():
    m = _push_loop(hints=None)
    assert accepts(m, ("x",), SearchBudget(50, 30)) == BUDGET_EXHAUSTED


def test_hinted_entry_makes_search_finite():
    m = _push_loop(hints=SearchHints(suppress_chained_entries=((0,),)))
    assert accepts(m, ("x",), SearchBudget(50, 30)) == ACCEPTED
    assert accepts(m, (), SearchBudget(50, 30)) == REJECTED


# --- grouped hint semantics ----------------------------------------------


def _two_entry_chain(same_group):
    # A0 --entry--> A1 --entry--> F, all inside the initial closure
    transitions = [
        Transition("A0", EPSILON, Predicate.any(),
                   Instruction.push(1, "m"), "A1"),
        Transition("A1", EPSILON, Predicate.any(),
                   Instruction.push(1, "m"), "F"),
    ]
    if same_group:
        hints = SearchHints(suppress_chained_entries=((0, 1),))
    else:
        hints = SearchHints(suppress_chained_entries=((0,), (1,)))
    return _tiny(transitions, finals=["F"], states=("A0", "A1", "F"),
                 hints=hints)


def test_same_group_entries_block_chaining():
    assert accepts(_two_entry_chain(same_group=True), ()) == REJECTED


def test_distinct_group_entries_nest():
    assert accepts(_two_entry_chain(same_group=False), ()) == ACCEPTED


def test_letter_resets_entry_freshness():
    # entry, letter, then another entry of the same group
    m = _tiny(
        [
            Transition("A0", EPSILON, Predicate.any(),
                       Instruction.push(1, "m"), "A1"),
            Transition("A1", "x", Predicate.any(), Instruction.id(), "A2"),
            Transition("A2", EPSILON, Predicate.any(),
                       Instruction.push(1, "m"), "F"),
        ],
        finals=["F"], states=("A0", "A1", "A2", "F"),
        hints=SearchHints(suppress_chained_entries=((0, 2),)),
    )
    assert accepts(m, ("x",)) == ACCEPTED
    assert accepts(m, ()) == REJECTED


def test_exit_blocked_while_its_group_is_fresh():
    transitions = [
        Transition("A0", EPSILON, Predicate.any(),
                   Instruction.push(1, "m"), "A1"),
        Transition("A1", EPSILON, Predicate.equals("m"),
                   Instruction.down(), "F"),
    ]
    states = ("A0", "A1", "F")
    paired = _tiny(transitions, ["F"], states,
                   hints=SearchHints(suppress_chained_entries=((0,),),
                                     suppress_empty_exits=((1,),)))
    assert accepts(paired, ()) == REJECTED
    other_group = _tiny(transitions, ["F"], states,
                        hints=SearchHints(
                            suppress_chained_entries=((0,), ()),
                            suppress_empty_exits=((), (1,))))
    assert accepts(other_group, ()) == ACCEPTED


def test_exits_do_not_arm_freshness():
    # two consecutive hinted exits after a letter-driven double push
    m = _tiny(
        [
            Transition("A0", "x", Predicate.any(),
                       Instruction.push(1, "m"), "A1"),
            Transition("A1", EPSILON, Predicate.any(),
                       Instruction.push(2, "m"), "A2"),
            Transition("A2", EPSILON, Predicate.equals("m"),
                       Instruction.down(), "A3"),
            Transition("A3", EPSILON, Predicate.equals("m"),
                       Instruction.down(), "F"),
        ],
        finals=["F"], states=("A0", "A1", "A2", "A3", "F"),
        hints=SearchHints(suppress_chained_entries=((),),
                          suppress_empty_exits=((2, 3),)),
    )
    assert accepts(m, ("x",)) == ACCEPTED


def test_symmetric_family_uses_first_applicable_branch():
    m = _tiny(
        [
            Transition("A0", "x", Predicate.any(),
                       Instruction.push(-1, "m"), "A1"),
            Transition("A1", EPSILON, Predicate.equals("m"),
                       Instruction.down(), "A2"),
            Transition("A2", EPSILON, Predicate.any(),
                       Instruction.push(-1, "m"), "F"),
            Transition("A2", EPSILON, Predicate.any(),
                       Instruction.push(-2, "m"), "F"),
        ],
        finals=["F"], states=("A0", "A1", "A2", "F"),
        hints=SearchHints(symmetric_families=((2, 3),)),
    )
    run = find_accepting_run(m, ("x",))
    # branch -1 is occupied at the root, so the family falls through to -2
    assert run.steps[-1].transition.instruction.branch == -2

    free = _tiny(
        [
            Transition("A0", EPSILON, Predicate.any(),
                       Instruction.push(-1, "m"), "F"),
            Transition("A0", EPSILON, Predicate.any(),
                       Instruction.push(-2, "m"), "F"),
        ],
        finals=["F"], states=("A0", "F"),
        hints=SearchHints(symmetric_families=((0, 1),)),
    )
    run = find_accepting_run(free, ())
    assert run.steps[-1].transition.instruction.branch == -1


# --- sweep ----------------------------------------------------------------


def test_sweep_matches_per_word_accepts():
    m = z_word_problem_automaton("t", "T")
    verdicts = sweep(m, ("t", "T"), 6)
    assert len(verdicts) == 127
    for w, got in verdicts.items():
        assert got == accepts(m, w), w


def test_sweep_budget_agrees_with_per_word_calls():
    m = z_word_problem_automaton("t", "T")
    budget = SearchBudget(25, 20)
    verdicts = sweep(m, ("t", "T"), 5, budget)
    for w, got in verdicts.items():
        assert got == accepts(m, w, budget), w


def test_sweep_runs_revalidate():
    m = z_word_problem_automaton("t", "T")
    results = sweep(m, ("t", "T"), 5, want_runs=True)
    for w, (verdict, run) in results.items():
        if verdict == ACCEPTED:
            assert run is not None
            assert run.word_read == w
            assert revalidate(m, run)
        else:
            assert run is None


def test_sweep_streaming_matches_collected():
    m = z_word_problem_automaton("t", "T")
    seen = {}
    out = sweep(m, ("t", "T"), 4,
                on_result=lambda w, v, run: seen.__setitem__(w, v))
    assert out is None
    assert seen == sweep(m, ("t", "T"), 4)


def test_sweep_length_zero_checks_only_epsilon():
    m = z_word_problem_automaton("t", "T")
    assert sweep(m, ("t", "T"), 0) == {(): ACCEPTED}
