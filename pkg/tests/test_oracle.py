"""Reference word-problem deciders used to cross-check the automata."""

import random

import pytest

from treestack.groups import FiniteGroup, FiniteSubgroupData
from treestack.oracle import (AmalgamSpec, FiniteGroupSpec, FreeProductSpec,
                              GraphEdge, GraphOfGroupsSpec, HnnSpec,
                              IntegersSpec, OracleError, Syllable,
                              alphabet_of, enumerate_words,
                              eval_in_vertex_group, fold_graph,
                              formal_inverse, inverse_letter_map, is_trivial,
                              sample_words, syllable_split)


def _c4_spec(low, high):
    return FiniteGroupSpec(FiniteGroup.cyclic(4),
                           ((low, 1), (high, 3)),
                           ((low, high), (high, low)))


def _c2_spec(letter="a"):
    return FiniteGroupSpec(FiniteGroup.cyclic(2), ((letter, 1),),
                           ((letter, letter),))


def _c3_spec(low="b", high="B"):
    return FiniteGroupSpec(FiniteGroup.cyclic(3),
                           ((low, 1), (high, 2)),
                           ((low, high), (high, low)))


def _amalgam_spec():
    sub = FiniteSubgroupData(FiniteGroup.cyclic(2),
                             {0: (), 1: ("a", "a")},
                             {0: (), 1: ("b", "b")})
    return AmalgamSpec(_c4_spec("a", "A"), _c4_spec("b", "B"), sub)


def _hnn_spec():
    c2 = FiniteGroup.cyclic(2)
    reps = {0: (), 1: ("a",)}
    sub = FiniteSubgroupData(c2, reps, reps)
    return HnnSpec(_c2_spec(), sub, sub, ((0, 0), (1, 1)), "t", "T")


def _graph_spec():
    c2 = FiniteGroup.cyclic(2)
    loop_data = FiniteSubgroupData(c2, {0: (), 1: ("a",)},
                                   {0: (), 1: ("a",)})
    return GraphOfGroupsSpec(
        vertices=(("u", _c2_spec()), ("v", _c3_spec())),
        edges=(GraphEdge("e1", "u", "v", FiniteSubgroupData.trivial(), True),
               GraphEdge("e2", "u", "u", loop_data, False, ("t", "T"))))


# --- spec validation ------------------------------------------------------


def test_finite_spec_requires_inverse_letters():
    c4 = FiniteGroup.cyclic(4)
    with pytest.raises(OracleError) as err:
        FiniteGroupSpec(c4, (("a", 1), ("A", 3)), (("a", "A"),))
    assert err.value.code == "bad-spec"
    with pytest.raises(OracleError):
        FiniteGroupSpec(c4, (("a", 1), ("A", 1)),
                        (("a", "A"), ("A", "a")))  # A carries 1, not 3


def test_graph_validation_errors():
    c2 = _c2_spec()
    with pytest.raises(OracleError):
        GraphOfGroupsSpec((("u", c2), ("u", c2)), ()).validate()
    with pytest.raises(OracleError):
        GraphOfGroupsSpec(
            (("u", c2),),
            (GraphEdge("e", "u", "w", FiniteSubgroupData.trivial(),
                       True),)).validate()
    with pytest.raises(OracleError):  # tree edge closing a cycle
        GraphOfGroupsSpec(
            (("u", c2), ("v", _c3_spec())),
            (GraphEdge("e1", "u", "v", FiniteSubgroupData.trivial(), True),
             GraphEdge("e2", "v", "u", FiniteSubgroupData.trivial(),
                       True))).validate()
    with pytest.raises(OracleError):  # loop without stable letters
        GraphOfGroupsSpec(
            (("u", c2),),
            (GraphEdge("e", "u", "u", FiniteSubgroupData.trivial(),
                       False),)).validate()
    with pytest.raises(OracleError):  # two components
        GraphOfGroupsSpec((("u", c2), ("v", _c3_spec())), ()).validate()
    with pytest.raises(OracleError):
        GraphOfGroupsSpec(
            (("u", c2), ("v", _c3_spec())),
            (GraphEdge("e", "u", "v", FiniteSubgroupData.trivial(), True),
             GraphEdge("e", "u", "v", FiniteSubgroupData.trivial(),
                       True))).validate()
    _graph_spec().validate()


# --- alphabets ------------------------------------------------------------


def test_alphabets_and_inverse_letters():
    assert alphabet_of(_c4_spec("a", "A")) == ("a", "A")
    assert alphabet_of(IntegersSpec()) == ("t", "T")
    fp = FreeProductSpec(_c4_spec("a", "A"), _c4_spec("b", "B"))
    assert alphabet_of(fp) == ("a", "A", "b", "B")
    assert alphabet_of(_hnn_spec()) == ("a", "t", "T")
    assert set(alphabet_of(_graph_spec())) == {"a", "b", "B", "t", "T"}

    inv = inverse_letter_map(fp)
    assert inv == {"a": "A", "A": "a", "b": "B", "B": "b"}
    hnn_inv = inverse_letter_map(_hnn_spec())
    assert hnn_inv["t"] == "T" and hnn_inv["T"] == "t"


def test_formal_inverse_reverses_and_flips():
    spec = _hnn_spec()
    assert formal_inverse(spec, ("t", "a", "T")) == ("t", "a", "T")
    assert formal_inverse(spec, ("t", "t", "a")) == ("a", "T", "T")
    assert is_trivial(spec, ("t", "a") + formal_inverse(spec, ("t", "a")))


def test_enumerate_words_shortest_first():
    words = list(enumerate_words(("a", "b"), 2))
    assert words == [(), ("a",), ("b",), ("a", "a"), ("a", "b"),
                     ("b", "a"), ("b", "b")]
    assert len(list(enumerate_words(("a", "b"), 3))) == 15


def test_sample_words_deterministic_per_seed():
    a = sample_words(("a", "b"), 50, 6, seed=7)
    b = sample_words(("a", "b"), 50, 6, seed=7)
    c = sample_words(("a", "b"), 50, 6, seed=8)
    assert a == b
    assert a != c
    assert len(a) == 50
    assert all(len(w) <= 6 for w in a)


# --- leaf groups ----------------------------------------------------------


def test_eval_in_vertex_group():
    assert eval_in_vertex_group(_c4_spec("a", "A"), ("a", "a", "A")) == 1
    assert eval_in_vertex_group(IntegersSpec(), ("t", "t", "T")) == 1
    with pytest.raises(OracleError) as err:
        eval_in_vertex_group(IntegersSpec(), ("x",))
    assert err.value.code == "unknown-letter"
    with pytest.raises(OracleError) as err:
        eval_in_vertex_group(FreeProductSpec(_c2_spec(), _c3_spec()), ())
    assert err.value.code == "unsupported-vertex-group"


def test_syllable_split():
    fp = FreeProductSpec(_c4_spec("a", "A"), _c4_spec("b", "B"))
    assert syllable_split(fp, ("a", "a", "b", "A")) == (
        Syllable("left", ("a", "a")),
        Syllable("right", ("b",)),
        Syllable("left", ("A",)))
    assert syllable_split(fp, ()) == ()
    with pytest.raises(OracleError):
        syllable_split(fp, ("z",))
    with pytest.raises(OracleError):
        syllable_split(IntegersSpec(), ("t",))


# --- triviality verdicts --------------------------------------------------


def test_leaf_triviality():
    assert is_trivial(_c4_spec("a", "A"), ("a",) * 4)
    assert not is_trivial(_c4_spec("a", "A"), ("a", "a"))
    assert is_trivial(IntegersSpec(), ("t", "T"))
    assert not is_trivial(IntegersSpec(), ("t",))


def test_free_product_verdicts():
    fp = FreeProductSpec(_c4_spec("a", "A"), _c4_spec("b", "B"))
    assert is_trivial(fp, ())
    assert is_trivial(fp, ("a", "A"))
    assert is_trivial(fp, ("a", "A", "b", "B"))
    assert not is_trivial(fp, ("a", "b", "A", "B"))
    assert not is_trivial(fp, ("a", "b"))
    assert is_trivial(fp, ("a", "b", "B", "a", "a", "a"))


def test_amalgam_verdicts():
    am = _amalgam_spec()
    assert is_trivial(am, ("a", "A", "b", "B"))
    assert not is_trivial(am, ("a", "b", "A", "B"))
    # aa is identified with bb, so aabb = bb·bb = identity on the right
    assert is_trivial(am, ("a", "a", "b", "b"))
    assert not is_trivial(am, ("a", "a", "b"))
    assert is_trivial(am, ("a", "a", "B", "B"))


def test_hnn_verdicts():
    hnn = _hnn_spec()
    assert is_trivial(hnn, ("t", "T"))
    assert is_trivial(hnn, ("t", "a", "T", "a"))
    assert not is_trivial(hnn, ("t", "a", "T"))
    assert not is_trivial(hnn, ("t", "t", "a", "T", "T"))
    assert not is_trivial(hnn, ("t",))


def test_hnn_unknown_letter():
    with pytest.raises(OracleError) as err:
        is_trivial(_hnn_spec(), ("q",))
    assert err.value.code == "unknown-letter"


def test_graph_verdicts():
    g = _graph_spec()
    for w in ["", "aa", "bbb", "bB", "tT", "taTa", "tbbbT", "abbba"]:
        assert is_trivial(g, tuple(w)), w
    for w in ["ab", "tbT", "ttaTT", "a", "b", "t", "ta", "tat", "taT",
              "abab"]:
        assert not is_trivial(g, tuple(w)), w


def test_graph_matches_its_fold():
    g = _graph_spec()
    folded = fold_graph(g)
    for w in enumerate_words(alphabet_of(g), 3):
        assert is_trivial(g, w) == is_trivial(folded, w), w


def test_fold_graph_structure():
    folded = fold_graph(_graph_spec())
    assert isinstance(folded, HnnSpec)
    assert folded.t_name == "t" and folded.T_name == "T"
    assert isinstance(folded.base, AmalgamSpec)
    assert isinstance(folded.base.left, FiniteGroupSpec)
    assert isinstance(folded.base.right, FiniteGroupSpec)
    assert alphabet_of(folded.base.left) == ("a",)
    assert alphabet_of(folded.base.right) == ("b", "B")


def test_rewriting_order_does_not_change_verdicts():
    specs = [FreeProductSpec(_c4_spec("a", "A"), _c4_spec("b", "B")),
             _amalgam_spec(), _hnn_spec(), _graph_spec()]
    for spec in specs:
        alphabet = alphabet_of(spec)
        words = sample_words(alphabet, 60, 5, seed=11)
        for w in words:
            base = is_trivial(spec, w)
            assert is_trivial(spec, w, random.Random(0)) == base, (spec, w)
            assert is_trivial(spec, w, random.Random(99)) == base, (spec, w)
