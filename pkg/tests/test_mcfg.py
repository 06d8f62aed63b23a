"""Multiple context-free grammars: validation, derivation, membership."""

import pytest

from treestack.mcfg import (VAR, LinearRewriting, McfGrammar, McfRule,
                            McfgError, StratifiedNonterminal, anbncn_grammar,
                            apply_rewriting, derivable_tuples, grammar_k,
                            is_deleting, mcfg_membership, validate)


def test_bundled_grammar_is_well_formed():
    g = anbncn_grammar()
    assert validate(g) == []
    assert not is_deleting(g)
    assert grammar_k(g) == 2


def test_bundled_grammar_membership():
    g = anbncn_grammar()
    for n in range(4):
        assert mcfg_membership(g, "a" * n + "b" * n + "c" * n), n
    for bad in ["a", "ab", "abcc", "acb", "aabbc", "ba", "abcabc"]:
        assert not mcfg_membership(g, bad), bad


def test_derivable_tuples_exact_set():
    g = anbncn_grammar()
    assert derivable_tuples(g, "S", 6) == {("",), ("abc",), ("aabbcc",)}
    assert derivable_tuples(g, "A", 4) == {("", ""), ("ab", "c")}
    assert derivable_tuples(g, "A", 6) == {("", ""), ("ab", "c"),
                                           ("aabb", "cc")}


def test_apply_rewriting_substitutes_by_position():
    f = LinearRewriting((("a", (VAR, 2)), ((VAR, 1), "b")), 2)
    assert apply_rewriting(f, ("x", "y")) == ("ay", "xb")
    with pytest.raises(McfgError) as err:
        apply_rewriting(f, ("x",))
    assert err.value.code == "arity mismatch"


def _grammar(**overrides):
    parts = dict(
        terminals=("a",),
        nonterminals=(StratifiedNonterminal("S", 1),
                      StratifiedNonterminal("B", 1)),
        start="S",
        rules=(
            McfRule("S", ("B",), LinearRewriting((((VAR, 1),),), 1)),
            McfRule("B", (), LinearRewriting((("a",),), 0)),
        ),
    )
    parts.update(overrides)
    return McfGrammar(**parts)


def test_validate_clean():
    assert validate(_grammar()) == []


def test_validate_dimension_and_declarations():
    bad_dim = _grammar(nonterminals=(StratifiedNonterminal("S", 0),
                                     StratifiedNonterminal("B", 1)))
    assert any("dimension must be ≥ 1" in p for p in validate(bad_dim))

    dup = _grammar(nonterminals=(StratifiedNonterminal("S", 1),
                                 StratifiedNonterminal("S", 1)))
    assert any("declared twice" in p for p in validate(dup))

    assert any("not declared" in p for p in validate(_grammar(start="X")))

    wide_start = _grammar(
        nonterminals=(StratifiedNonterminal("S", 2),
                      StratifiedNonterminal("B", 1)),
        rules=(McfRule("S", ("B",),
                       LinearRewriting((((VAR, 1),), ()), 1)),
               McfRule("B", (), LinearRewriting((("a",),), 0))))
    assert any("must be 1" in p for p in validate(wide_start))


def test_validate_rule_shapes():
    bad_lhs = _grammar(rules=(
        McfRule("X", (), LinearRewriting((("a",),), 0)),))
    assert any("undeclared lhs" in p for p in validate(bad_lhs))

    bad_rhs = _grammar(rules=(
        McfRule("S", ("X",), LinearRewriting((((VAR, 1),),), 1)),))
    assert any("undeclared rhs symbol X" in p for p in validate(bad_rhs))

    bad_arity = _grammar(rules=(
        McfRule("S", ("B",), LinearRewriting((((VAR, 1),),), 2)),
        McfRule("B", (), LinearRewriting((("a",),), 0))))
    assert any("≠ sum of rhs dimensions" in p for p in validate(bad_arity))

    bad_out = _grammar(rules=(
        McfRule("S", ("B",), LinearRewriting((((VAR, 1),), ()), 1)),
        McfRule("B", (), LinearRewriting((("a",),), 0))))
    assert any("components but" in p for p in validate(bad_out))

    out_of_range = _grammar(rules=(
        McfRule("S", ("B",), LinearRewriting((((VAR, 3),),), 1)),
        McfRule("B", (), LinearRewriting((("a",),), 0))))
    assert any("variable x3 out of range" in p
               for p in validate(out_of_range))

    nonlinear = _grammar(rules=(
        McfRule("S", ("B",),
                LinearRewriting((((VAR, 1), (VAR, 1)),), 1)),
        McfRule("B", (), LinearRewriting((("a",),), 0))))
    assert any("non-linear" in p for p in validate(nonlinear))

    bad_term = _grammar(rules=(
        McfRule("S", ("B",), LinearRewriting((((VAR, 1),),), 1)),
        McfRule("B", (), LinearRewriting((("z",),), 0))))
    assert any("undeclared terminal 'z'" in p for p in validate(bad_term))


def test_is_deleting_detects_dropped_variables():
    deleting = _grammar(rules=(
        McfRule("S", ("B",), LinearRewriting(((),), 1)),
        McfRule("B", (), LinearRewriting((("a",),), 0))))
    assert is_deleting(deleting)
    assert not is_deleting(_grammar())


def test_derivable_tuples_rejects_invalid_grammar():
    bad = _grammar(start="X")
    with pytest.raises(McfgError) as err:
        derivable_tuples(bad, "S", 4)
    assert err.value.code == "invalid-grammar"
    with pytest.raises(McfgError):
        grammar_k(bad)


def test_membership_on_linear_grammar():
    # S → a S | a over one letter: the language {a, aa, aaa, ...}
    g = McfGrammar(
        terminals=("a",),
        nonterminals=(StratifiedNonterminal("S", 1),),
        start="S",
        rules=(
            McfRule("S", ("S",), LinearRewriting((("a", (VAR, 1)),), 1)),
            McfRule("S", (), LinearRewriting((("a",),), 0)),
        ))
    assert validate(g) == []
    assert grammar_k(g) == 1
    assert not mcfg_membership(g, "")
    assert mcfg_membership(g, "aaa")


def test_dimension_of_unknown_nonterminal():
    with pytest.raises(McfgError) as err:
        anbncn_grammar().dimension_of("Q")
    assert err.value.code == "unknown-nonterminal"
