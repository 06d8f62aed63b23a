"""Tree-stack storage: instruction semantics and value behaviour."""

import pytest
from hypothesis import given, strategies as st

from treestack.trees import (ROOT_LABEL, TOMB_LABEL, TreeOpError, TreeStack,
                             from_map)


def test_empty_tree():
    ts = TreeStack.empty()
    assert ts.at_root
    assert ts.label == ROOT_LABEL
    assert ts.pointer == ()
    assert ts.tree() == {(): ROOT_LABEL}


def test_push_moves_pointer():
    ts = TreeStack.empty().push(1, "a")
    assert ts.pointer == (1,)
    assert ts.label == "a"
    assert not ts.at_root
    assert ts.tree() == {(): ROOT_LABEL, (1,): "a"}


def test_push_occupied_branch_fails():
    ts = TreeStack.empty().push(1, "a").down()
    with pytest.raises(TreeOpError) as err:
        ts.push(1, "b")
    assert err.value.code == "branch-occupied"


def test_push_negative_branch():
    ts = TreeStack.empty().push(-3, "m")
    assert ts.pointer == (-3,)
    assert ts.down().has_child(-3)


def test_up_existing_child():
    ts = TreeStack.empty().push(2, "a").down().up(2)
    assert ts.pointer == (2,)
    assert ts.label == "a"


def test_up_missing_child_fails():
    with pytest.raises(TreeOpError) as err:
        TreeStack.empty().up(1)
    assert err.value.code == "no-such-child"


def test_down_at_root_fails():
    with pytest.raises(TreeOpError) as err:
        TreeStack.empty().down()
    assert err.value.code == "at-root"


def test_set_relabels_pointer():
    ts = TreeStack.empty().push(1, "a").set("b")
    assert ts.label == "b"
    assert ts.pointer == (1,)


def test_set_at_root_fails():
    with pytest.raises(TreeOpError) as err:
        TreeStack.empty().set("x")
    assert err.value.code == "at-root"


def test_operations_are_persistent():
    base = TreeStack.empty().push(1, "a")
    snapshot = base.tree()
    base.push(2, "b")
    base.set("c")
    base.down()
    assert base.tree() == snapshot
    assert base.label == "a"


def test_value_equality_across_histories():
    # same tree and pointer reached along different op orders
    one = TreeStack.empty().push(1, "a").down().push(2, "b").down()
    two = TreeStack.empty().push(2, "b").down().push(1, "a").down()
    assert one == two
    assert hash(one) == hash(two)


def test_pointer_position_distinguishes():
    here = TreeStack.empty().push(1, "a")
    there = here.down()
    assert here != there
    assert here.tree() == there.tree()


def test_tombstone_is_an_ordinary_label():
    ts = TreeStack.empty().push(1, TOMB_LABEL)
    assert ts.label == TOMB_LABEL


def test_tuple_labels():
    mark = ("mark", 2, ("q", ()))
    ts = TreeStack.empty().push(-1, mark)
    assert ts.label == mark
    assert ts.tree()[(-1,)] == mark


def test_walk_preorder():
    ts = (TreeStack.empty().push(1, "a").push(1, "b").down()
          .push(2, "c").down().down())
    seen = list(ts.walk())
    assert seen[0] == ((), ROOT_LABEL)
    assert set(seen) == {((), ROOT_LABEL), ((1,), "a"), ((1, 1), "b"),
                         ((1, 2), "c")}
    # parents precede children
    positions = {addr: i for i, (addr, _) in enumerate(seen)}
    for addr in positions:
        if addr:
            assert positions[addr[:-1]] < positions[addr]


def test_from_map_round_trip():
    entries = {(): ROOT_LABEL, (1,): "a", (1, -2): "b", (3,): "c"}
    ts = from_map(entries, pointer=(1, -2))
    assert ts.tree() == entries
    assert ts.pointer == (1, -2)
    assert ts.label == "b"


def test_from_map_requires_root_label():
    with pytest.raises(ValueError):
        from_map({(): "x"})


def test_from_map_requires_prefix_closed():
    with pytest.raises(ValueError):
        from_map({(): ROOT_LABEL, (1, 2): "a"})


_OPS = st.lists(
    st.one_of(
        st.tuples(st.just("push"), st.integers(-3, 3),
                  st.sampled_from(["a", "b", "c"])),
        st.tuples(st.just("down")),
        st.tuples(st.just("set"), st.sampled_from(["x", "y"])),
    ),
    max_size=25,
)


def _apply_ops(ops):
    ts = TreeStack.empty()
    for op in ops:
        try:
            if op[0] == "push":
                ts = ts.push(op[1], op[2])
            elif op[0] == "down":
                ts = ts.down()
            else:
                ts = ts.set(op[1])
        except TreeOpError:
            pass
    return ts


@given(_OPS)
def test_domain_always_prefix_closed(ops):
    ts = _apply_ops(ops)
    entries = ts.tree()
    assert entries[()] == ROOT_LABEL
    for address in entries:
        assert not address or address[:-1] in entries
    assert ts.pointer in entries
    assert entries[ts.pointer] == ts.label


@given(_OPS)
def test_from_map_reconstructs(ops):
    ts = _apply_ops(ops)
    again = from_map(ts.tree(), ts.pointer)
    assert again == ts
