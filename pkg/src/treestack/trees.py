"""Persistent tree-stacks: labelled rooted trees with a movable pointer.

A tree-stack is a partial map from addresses (sequences of integer branch
numbers) to labels, together with a pointer at one address.  The domain is
prefix-closed and exactly the root carries the reserved label ``ROOT_LABEL``.
All operations return new values; existing tree-stacks are never mutated, so
snapshots taken before an operation remain valid afterwards.

Labels are hashable values (strings, or nested tuples for structured marker
labels).  Branch numbers may be negative.
"""

from __future__ import annotations

from typing import Any, Iterator

ROOT_LABEL = "◇"

# Collapsed-subtree sentinel used by the search engine's canonical forms.
# It is a label like any other as far as this module is concerned.
TOMB_LABEL = "†"


class TreeOpError(Exception):
    """A tree-stack instruction was applied outside its domain.

    ``code`` is one of ``branch-occupied``, ``no-such-child``, ``at-root``.
    """

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(code if not detail else f"{code}: {detail}")


class TreeNode:
    """Immutable subtree: a label plus children keyed by branch number.

    ``children`` is a tuple of ``(branch, TreeNode)`` pairs sorted by branch,
    which makes structural equality and hashing canonical.
    """

    __slots__ = ("label", "children", "_hash")

    def __init__(self, label: Any, children: tuple = ()):
        self.label = label
        self.children = children
        self._hash = hash((label, children))

    def child(self, branch: int) -> "TreeNode | None":
        for b, node in self.children:
            if b == branch:
                return node
        return None

    def with_child(self, branch: int, node: "TreeNode") -> "TreeNode":
        kept = tuple(p for p in self.children if p[0] != branch)
        merged = tuple(sorted(kept + ((branch, node),)))
        return TreeNode(self.label, merged)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, TreeNode):
            return NotImplemented
        if self._hash != other._hash:
            return False
        return self.label == other.label and self.children == other.children

    def __repr__(self) -> str:
        return f"TreeNode({self.label!r}, {self.children!r})"


class PathStep:
    """One level of zipper context: how to rebuild the parent of the focus.

    ``siblings`` holds the parent's other children (the focus excluded).
    """

    __slots__ = ("branch", "parent_label", "siblings", "tail", "_hash")

    def __init__(self, branch: int, parent_label: Any, siblings: tuple,
                 tail: "PathStep | None"):
        self.branch = branch
        self.parent_label = parent_label
        self.siblings = siblings
        self.tail = tail
        self._hash = hash((branch, parent_label, siblings, tail))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, PathStep):
            return NotImplemented
        if self._hash != other._hash:
            return False
        return (self.branch == other.branch
                and self.parent_label == other.parent_label
                and self.siblings == other.siblings
                and self.tail == other.tail)


class TreeStack:
    """A labelled tree plus pointer, as a zipper over :class:`TreeNode`.

    ``focus`` is the subtree rooted at the pointer; ``path`` rebuilds each
    ancestor in turn.  The pair determines the whole tree and the pointer, so
    equality and hashing work directly on it without re-rooting.
    """

    __slots__ = ("focus", "path", "_hash", "_root")

    def __init__(self, focus: TreeNode, path: PathStep | None = None):
        self.focus = focus
        self.path = path
        self._hash = hash((focus, path))
        self._root: TreeNode | None = None

    @staticmethod
    def empty() -> "TreeStack":
        """The initial storage: a lone root labelled ◇, pointer at the root."""
        return TreeStack(TreeNode(ROOT_LABEL))

    # instructions ---------------------------------------------------------

    def push(self, branch: int, label: Any) -> "TreeStack":
        """Create child ``branch`` of the pointer and move onto it.

        Undefined (``branch-occupied``) when that child already exists.
        """
        if self.focus.child(branch) is not None:
            raise TreeOpError("branch-occupied",
                             f"branch {branch} below {self.pointer}")
        step = PathStep(branch, self.focus.label, self.focus.children, self.path)
        return TreeStack(TreeNode(label), step)

    def up(self, branch: int) -> "TreeStack":
        """Move the pointer to existing child ``branch``."""
        child = self.focus.child(branch)
        if child is None:
            raise TreeOpError("no-such-child",
                             f"branch {branch} below {self.pointer}")
        siblings = tuple(p for p in self.focus.children if p[0] != branch)
        step = PathStep(branch, self.focus.label, siblings, self.path)
        return TreeStack(child, step)

    def down(self) -> "TreeStack":
        """Move the pointer to the parent.  Undefined at the root."""
        step = self.path
        if step is None:
            raise TreeOpError("at-root")
        merged = tuple(sorted(step.siblings + ((step.branch, self.focus),)))
        return TreeStack(TreeNode(step.parent_label, merged), step.tail)

    def set(self, label: Any) -> "TreeStack":
        """Relabel the pointer.  Undefined at the root (◇ is fixed)."""
        if self.path is None:
            raise TreeOpError("at-root")
        return TreeStack(TreeNode(label, self.focus.children), self.path)

    # queries --------------------------------------------------------------

    @property
    def label(self) -> Any:
        return self.focus.label

    @property
    def pointer(self) -> tuple:
        """The pointer address as a tuple of branch numbers (root = ())."""
        branches = []
        step = self.path
        while step is not None:
            branches.append(step.branch)
            step = step.tail
        branches.reverse()
        return tuple(branches)

    @property
    def at_root(self) -> bool:
        return self.path is None

    def has_child(self, branch: int) -> bool:
        return self.focus.child(branch) is not None

    def root_node(self) -> TreeNode:
        """The whole tree re-rooted (cached; the value is immutable)."""
        if self._root is None:
            cursor = self
            while cursor.path is not None:
                cursor = cursor.down()
            self._root = cursor.focus
        return self._root

    def tree(self) -> dict:
        """The tree as a map from address tuples to labels."""
        out: dict = {}

        def walk(node: TreeNode, address: tuple) -> None:
            out[address] = node.label
            for branch, child in node.children:
                walk(child, address + (branch,))

        walk(self.root_node(), ())
        return out

    def walk(self) -> Iterator[tuple]:
        """Yield (address, label) over the whole tree, preorder."""
        stack = [((), self.root_node())]
        while stack:
            address, node = stack.pop()
            yield address, node.label
            for branch, child in reversed(node.children):
                stack.append((address + (branch,), child))

    # value semantics ------------------------------------------------------

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, TreeStack):
            return NotImplemented
        if self._hash != other._hash:
            return False
        return self.focus == other.focus and self.path == other.path

    def __repr__(self) -> str:
        return f"TreeStack(pointer={self.pointer!r}, label={self.label!r})"


def from_map(entries: dict, pointer: tuple = ()) -> TreeStack:
    """Build a tree-stack from an address→label map (test convenience).

    ``entries`` must have a prefix-closed domain containing the root ``()``
    with label ``ROOT_LABEL``; ``pointer`` must be in the domain.
    """
    if entries.get(()) != ROOT_LABEL:
        raise ValueError("root must carry the reserved root label")
    for address in entries:
        if address and address[:-1] not in entries:
            raise ValueError(f"domain not prefix-closed at {address}")

    def build(address: tuple) -> TreeNode:
        children = sorted(
            (addr[-1], build(addr))
            for addr in entries
            if len(addr) == len(address) + 1 and addr[:-1] == address
        )
        return TreeNode(entries[address], tuple(children))

    ts = TreeStack(build(()))
    for branch in pointer:
        ts = ts.up(branch)
    return ts
