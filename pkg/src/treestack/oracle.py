"""Independent word-problem decisions via normal-form rewriting.

This module never consults the automata it is used to check.  Triviality of a
word is decided directly from group-theoretic normal forms: Cayley-table
folding for finite groups, exponent sums for ℤ, syllable deletion for free
products, subgroup-syllable substitution for amalgams, and pinch elimination
for HNN extensions.  Graphs of groups are folded into nested amalgam/HNN
descriptions first.

Rewriting order is a free choice everywhere a step applies; the reductions
are confluent, and an optional random number generator picks among eligible
steps so tests can check that verdicts do not depend on the order.  Every
rewrite strictly decreases (stable letters, syllables, length) and this is
asserted on each step.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Any, Iterator, Sequence

from .groups import FiniteGroup, FiniteSubgroupData, check_phi


class OracleError(Exception):
    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(code if not detail else f"{code}: {detail}")


# --- group descriptions ---------------------------------------------------


@dataclass(frozen=True)
class FiniteGroupSpec:
    """A finite group with a named generating alphabet.

    ``gens`` maps letters to elements; ``inverse_letters`` names, for each
    letter, a letter carrying the inverse element.
    """

    group: FiniteGroup
    gens: tuple  # ((letter, element), ...) in alphabet order
    inverse_letters: tuple  # ((letter, letter), ...)

    def gen_map(self) -> dict:
        return dict(self.gens)

    def __post_init__(self):
        gens = self.gen_map()
        inverses = dict(self.inverse_letters)
        for letter, element in gens.items():
            other = inverses.get(letter)
            if other is None or other not in gens:
                raise OracleError("bad-spec",
                                  f"no inverse letter declared for {letter!r}")
            if gens[other] != self.group.inv(element):
                raise OracleError(
                    "bad-spec",
                    f"inverse letter of {letter!r} carries the wrong element")


@dataclass(frozen=True)
class IntegersSpec:
    """ℤ with a generator letter and its inverse letter."""

    plus: str = "t"
    minus: str = "T"


@dataclass(frozen=True)
class FreeProductSpec:
    left: Any
    right: Any


@dataclass(frozen=True)
class AmalgamSpec:
    """Amalgamated product identifying left_reps[h] with right_reps[φ(h)]."""

    left: Any
    right: Any
    subgroup: FiniteSubgroupData


@dataclass(frozen=True)
class HnnSpec:
    """HNN extension of ``base`` with t·(h1 rep)·T ≡ (h2 rep of φ(h))."""

    base: Any
    h1: FiniteSubgroupData
    h2: FiniteSubgroupData
    phi: tuple  # ((h1 element, h2 element), ...)
    t_name: str = "t"
    T_name: str = "T"

    def phi_map(self) -> dict:
        return dict(self.phi)

    def phi_inverse_map(self) -> dict:
        return {v: k for k, v in self.phi}

    def __post_init__(self):
        check_phi(self.h1, self.h2, dict(self.phi))


@dataclass(frozen=True)
class GraphEdge:
    edge_id: str
    source: str
    target: str
    data: FiniteSubgroupData  # left reps over source's alphabet, right over target's
    in_spanning_tree: bool
    stable: tuple | None = None  # (t letter, t⁻¹ letter) for non-tree edges


@dataclass(frozen=True)
class GraphOfGroupsSpec:
    vertices: tuple  # ((vertex id, GroupSpec), ...)
    edges: tuple  # of GraphEdge

    def validate(self) -> None:
        ids = [v for v, _ in self.vertices]
        if len(set(ids)) != len(ids):
            raise OracleError("bad-spec", "duplicate vertex ids")
        known = set(ids)
        parent = {v: v for v in known}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        edge_ids = set()
        for e in self.edges:
            if e.edge_id in edge_ids:
                raise OracleError("bad-spec", f"duplicate edge id {e.edge_id}")
            edge_ids.add(e.edge_id)
            if e.source not in known or e.target not in known:
                raise OracleError("bad-spec",
                                  f"edge {e.edge_id} touches unknown vertex")
            if e.in_spanning_tree:
                a, b = find(e.source), find(e.target)
                if a == b:
                    raise OracleError("bad-spec",
                                      "spanning tree contains a cycle")
                parent[a] = b
            elif not e.stable:
                raise OracleError("bad-spec",
                                  f"non-tree edge {e.edge_id} lacks stable letters")
        roots = {find(v) for v in known}
        if len(roots) != 1:
            raise OracleError("bad-spec", "spanning tree does not span")


GroupSpec = Any  # any of the classes above


# --- alphabets and inverses ----------------------------------------------


def alphabet_of(spec: GroupSpec) -> tuple:
    if isinstance(spec, FiniteGroupSpec):
        return tuple(letter for letter, _ in spec.gens)
    if isinstance(spec, IntegersSpec):
        return (spec.plus, spec.minus)
    if isinstance(spec, (FreeProductSpec, AmalgamSpec)):
        return alphabet_of(spec.left) + alphabet_of(spec.right)
    if isinstance(spec, HnnSpec):
        return alphabet_of(spec.base) + (spec.t_name, spec.T_name)
    if isinstance(spec, GraphOfGroupsSpec):
        letters = ()
        for _, vspec in spec.vertices:
            letters += alphabet_of(vspec)
        for e in spec.edges:
            if e.stable:
                letters += tuple(e.stable)
        return letters
    raise OracleError("unsupported-vertex-group", repr(spec))


def inverse_letter_map(spec: GroupSpec) -> dict:
    if isinstance(spec, FiniteGroupSpec):
        return dict(spec.inverse_letters)
    if isinstance(spec, IntegersSpec):
        return {spec.plus: spec.minus, spec.minus: spec.plus}
    if isinstance(spec, (FreeProductSpec, AmalgamSpec)):
        out = inverse_letter_map(spec.left)
        out.update(inverse_letter_map(spec.right))
        return out
    if isinstance(spec, HnnSpec):
        out = inverse_letter_map(spec.base)
        out[spec.t_name] = spec.T_name
        out[spec.T_name] = spec.t_name
        return out
    if isinstance(spec, GraphOfGroupsSpec):
        out = {}
        for _, vspec in spec.vertices:
            out.update(inverse_letter_map(vspec))
        for e in spec.edges:
            if e.stable:
                t, T = e.stable
                out[t] = T
                out[T] = t
        return out
    raise OracleError("unsupported-vertex-group", repr(spec))


def formal_inverse(spec: GroupSpec, word: Sequence) -> tuple:
    inverses = inverse_letter_map(spec)
    return tuple(inverses[letter] for letter in reversed(tuple(word)))


# --- word enumeration -----------------------------------------------------


def enumerate_words(alphabet: Sequence, max_len: int) -> Iterator[tuple]:
    """All words of length ≤ max_len, shortest first, lexicographic within
    a length by the given alphabet order."""
    for length in range(max_len + 1):
        for combo in product(tuple(alphabet), repeat=length):
            yield combo


def sample_words(alphabet: Sequence, count: int, max_len: int,
                 seed: int) -> list:
    rng = random.Random(seed)
    letters = tuple(alphabet)
    out = []
    for _ in range(count):
        length = rng.randint(0, max_len)
        out.append(tuple(rng.choice(letters) for _ in range(length)))
    return out


# --- triviality -----------------------------------------------------------


def eval_in_vertex_group(spec: GroupSpec, word: Sequence):
    """Fold a word in a leaf group: element (finite) or exponent sum (ℤ)."""
    word = tuple(word)
    if isinstance(spec, FiniteGroupSpec):
        gens = spec.gen_map()
        for letter in word:
            if letter not in gens:
                raise OracleError("unknown-letter", repr(letter))
        return spec.group.eval_word(word, gens)
    if isinstance(spec, IntegersSpec):
        total = 0
        for letter in word:
            if letter == spec.plus:
                total += 1
            elif letter == spec.minus:
                total -= 1
            else:
                raise OracleError("unknown-letter", repr(letter))
        return total
    raise OracleError("unsupported-vertex-group", repr(spec))


@dataclass(frozen=True)
class Syllable:
    side: str  # "left" | "right"
    word: tuple


def syllable_split(spec: GroupSpec, word: Sequence) -> tuple:
    """Maximal same-factor runs of a word over a two-factor alphabet."""
    if not isinstance(spec, (FreeProductSpec, AmalgamSpec)):
        raise OracleError("unsupported-vertex-group",
                          "syllables need a two-factor description")
    left = set(alphabet_of(spec.left))
    right = set(alphabet_of(spec.right))
    out = []
    for letter in word:
        if letter in left:
            side = "left"
        elif letter in right:
            side = "right"
        else:
            raise OracleError("unknown-letter", repr(letter))
        if out and out[-1].side == side:
            out[-1] = Syllable(side, out[-1].word + (letter,))
        else:
            out.append(Syllable(side, (letter,)))
    return tuple(out)


def _choose(eligible: list, rng: random.Random | None):
    if rng is None:
        return eligible[0]
    return rng.choice(eligible)


def _merge_around(syllables: list, index: int, replacement: Syllable | None):
    """Replace syllables[index] (or delete it when None), then re-merge
    equal-side neighbours.  Returns the new list."""
    out = syllables[:index]
    middle = [] if replacement is None else [replacement]
    rest = syllables[index + 1:]
    for syllable in middle + rest:
        if out and out[-1].side == syllable.side:
            out[-1] = Syllable(out[-1].side, out[-1].word + syllable.word)
        else:
            out.append(syllable)
    return out


def _factor(spec, side: str):
    return spec.left if side == "left" else spec.right


def _free_product_trivial(spec: FreeProductSpec, word, rng) -> bool:
    syllables = list(syllable_split(spec, word))
    while True:
        if not syllables:
            return True
        eligible = [i for i, s in enumerate(syllables)
                    if is_trivial(_factor(spec, s.side), s.word, rng)]
        if not eligible:
            return False
        index = _choose(eligible, rng)
        before = len(syllables)
        syllables = _merge_around(syllables, index, None)
        assert len(syllables) < before, "free-product rewrite must shrink"


def _subgroup_match(side_spec, word, data: FiniteSubgroupData,
                    rng) -> Any | None:
    """The unique non-identity element whose left rep equals ``word`` in the
    ambient group, or None."""
    matches = []
    for h in data.elements:
        if h == data.identity:
            continue
        against = tuple(word) + tuple(data.left_reps[data.inv(h)])
        if is_trivial(side_spec, against, rng):
            matches.append(h)
    assert len(matches) <= 1, "subgroup reps are not injective"
    return matches[0] if matches else None


def _amalgam_substitute(spec: AmalgamSpec, syllable: Syllable,
                        rng) -> Syllable | None:
    """The other factor's spelling of a subgroup-valued syllable, if any.

    The identified subgroup pairs left_reps[h] with right_reps[φ(h)]; the
    identity case never arises here because trivial syllables are deleted
    beforehand.
    """
    data = spec.subgroup
    matches = []
    for h in data.elements:
        if h == data.identity:
            continue
        if syllable.side == "left":
            against = tuple(syllable.word) + tuple(data.left_reps[data.inv(h)])
            if is_trivial(spec.left, against, rng):
                matches.append(
                    Syllable("right", tuple(data.right_reps[data.phi_of(h)])))
        else:
            against = tuple(syllable.word) + tuple(
                data.right_reps[data.phi_of(data.inv(h))])
            if is_trivial(spec.right, against, rng):
                matches.append(Syllable("left", tuple(data.left_reps[h])))
    assert len(matches) <= 1, "subgroup reps are not injective"
    return matches[0] if matches else None


def _amalgam_trivial(spec: AmalgamSpec, word, rng) -> bool:
    syllables = list(syllable_split(spec, word))
    while True:
        trivial_ones = [i for i, s in enumerate(syllables)
                        if is_trivial(_factor(spec, s.side), s.word, rng)]
        if trivial_ones:
            index = _choose(trivial_ones, rng)
            before = len(syllables)
            syllables = _merge_around(syllables, index, None)
            assert len(syllables) < before, "amalgam deletion must shrink"
            continue
        if not syllables:
            return True
        if len(syllables) == 1:
            return False  # single non-trivial syllable: embeds as-is
        candidates = []
        for i, s in enumerate(syllables):
            replacement = _amalgam_substitute(spec, s, rng)
            if replacement is not None:
                candidates.append((i, replacement))
        if not candidates:
            return False  # alternating product of non-subgroup syllables
        index, replacement = _choose(candidates, rng)
        before = len(syllables)
        syllables = _merge_around(syllables, index, replacement)
        assert len(syllables) < before, "amalgam substitution must shrink"


def _britton_trivial(spec: HnnSpec, word, rng) -> bool:
    base_letters = set(alphabet_of(spec.base))
    pieces: list = [()]  # base words alternating with stable letters
    stables: list = []
    for letter in word:
        if letter in (spec.t_name, spec.T_name):
            stables.append(letter)
            pieces.append(())
        elif letter in base_letters:
            pieces[-1] = pieces[-1] + (letter,)
        else:
            raise OracleError("unknown-letter", repr(letter))
    phi = spec.phi_map()
    phi_inv = spec.phi_inverse_map()
    while stables:
        pinches = []
        for i in range(len(stables) - 1):
            between = pieces[i + 1]
            if stables[i] == spec.t_name and stables[i + 1] == spec.T_name:
                h = _match_or_identity(spec.base, between, spec.h1, rng)
                if h is not None:
                    pinches.append((i, tuple(spec.h2.left_reps[phi[h]])))
            elif stables[i] == spec.T_name and stables[i + 1] == spec.t_name:
                h = _match_or_identity(spec.base, between, spec.h2, rng)
                if h is not None:
                    pinches.append((i, tuple(spec.h1.left_reps[phi_inv[h]])))
        if not pinches:
            return False  # Britton: reduced with stable letters present
        index, injected = _choose(pinches, rng)
        merged = pieces[index] + injected + pieces[index + 2]
        before = len(stables)
        pieces[index:index + 3] = [merged]
        stables[index:index + 2] = []
        assert len(stables) == before - 2, "pinch must remove two stable letters"
    return is_trivial(spec.base, pieces[0], rng)


def _match_or_identity(base_spec, word, data: FiniteSubgroupData,
                       rng) -> Any | None:
    """Which subgroup element ``word`` equals in the base, if any.

    Reps are read from ``left_reps`` (HNN subgroup data keeps both maps
    equal).  Returns None when the value lies outside the subgroup.
    """
    if is_trivial(base_spec, word, rng):
        return data.identity
    return _subgroup_match(base_spec, word, data, rng)


def fold_graph(spec: GraphOfGroupsSpec) -> GroupSpec:
    """Collapse a graph of groups into nested amalgam/HNN descriptions.

    Spanning-tree edges are amalgamated first (lexicographic by edge id),
    then each remaining edge becomes an HNN extension with its stable
    letters.  The result presents the fundamental group.
    """
    spec.validate()
    component: dict = {v: v for v in dict(spec.vertices)}
    current: dict = dict(spec.vertices)

    def root(v):
        while component[v] != v:
            component[v] = component[component[v]]
            v = component[v]
        return v

    tree_edges = sorted((e for e in spec.edges if e.in_spanning_tree),
                        key=lambda e: e.edge_id)
    for e in tree_edges:
        a, b = root(e.source), root(e.target)
        merged = AmalgamSpec(current[a], current[b], e.data)
        component[a] = b
        current[b] = merged
    loop_edges = sorted((e for e in spec.edges if not e.in_spanning_tree),
                        key=lambda e: e.edge_id)
    for e in loop_edges:
        a = root(e.source)
        assert a == root(e.target), "graph must be connected"
        data = e.data
        h1 = FiniteSubgroupData(data.group, data.left_reps, data.left_reps)
        h2 = FiniteSubgroupData(data.group, data.right_reps, data.right_reps)
        phi = tuple((h, data.phi_of(h)) for h in data.elements)
        t, T = e.stable
        current[a] = HnnSpec(current[a], h1, h2, phi, t, T)
    return current[root(next(iter(dict(spec.vertices))))]


def is_trivial(spec: GroupSpec, word: Sequence,
               rng: random.Random | None = None) -> bool:
    """Decide whether ``word`` is the identity of the described group."""
    word = tuple(word)
    if isinstance(spec, FiniteGroupSpec):
        return eval_in_vertex_group(spec, word) == spec.group.identity
    if isinstance(spec, IntegersSpec):
        return eval_in_vertex_group(spec, word) == 0
    if isinstance(spec, FreeProductSpec):
        return _free_product_trivial(spec, word, rng)
    if isinstance(spec, AmalgamSpec):
        return _amalgam_trivial(spec, word, rng)
    if isinstance(spec, HnnSpec):
        return _britton_trivial(spec, word, rng)
    if isinstance(spec, GraphOfGroupsSpec):
        return is_trivial(fold_graph(spec), word, rng)
    raise OracleError("unsupported-vertex-group", repr(spec))
