"""Multiple context-free grammars: validation, rewriting, and membership.

A nonterminal derives tuples of words; its dimension fixes the tuple width.
Rules carry a linear rewriting: each component of the output tuple is a word
over terminals and variables, and each variable (one per component of each
right-hand-side nonterminal) is used at most once overall.

Membership is decided by saturating the derivable-tuple sets under a total
length cap.  For non-deleting grammars (every variable used exactly once)
every tuple in a derivation of a final tuple is no longer than the final
tuple, so the cap loses nothing and membership is exact.  Deleting grammars
get a warning instead of an exact procedure.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Any, Mapping, Sequence

VAR = "var"  # token tag: ("var", j) is the j-th variable, 1-based


class McfgError(Exception):
    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(code if not detail else f"{code}: {detail}")


@dataclass(frozen=True)
class StratifiedNonterminal:
    name: str
    dimension: int


@dataclass(frozen=True)
class LinearRewriting:
    """Output components over terminals and 1-based variable tokens."""

    components: tuple  # tuple of tuples of tokens (str | ("var", j))
    arity: int

    @property
    def out_dimension(self) -> int:
        return len(self.components)

    def variables_used(self) -> list:
        used = []
        for component in self.components:
            for token in component:
                if isinstance(token, tuple) and token[0] == VAR:
                    used.append(token[1])
        return used


@dataclass(frozen=True)
class McfRule:
    lhs: str
    rhs: tuple  # nonterminal names B₁…B_s
    rewriting: LinearRewriting


@dataclass(frozen=True)
class McfGrammar:
    terminals: tuple
    nonterminals: tuple  # of StratifiedNonterminal
    start: str
    rules: tuple

    def dimension_of(self, name: str) -> int:
        for nt in self.nonterminals:
            if nt.name == name:
                return nt.dimension
        raise McfgError("unknown-nonterminal", name)


def validate(g: McfGrammar) -> list:
    """All invariant violations, as strings naming the offender."""
    problems = []
    names = {}
    for nt in g.nonterminals:
        if nt.dimension < 1:
            problems.append(f"nonterminal {nt.name}: dimension must be ≥ 1")
        if nt.name in names:
            problems.append(f"nonterminal {nt.name}: declared twice")
        names[nt.name] = nt.dimension
    if g.start not in names:
        problems.append(f"start symbol {g.start} not declared")
    elif names[g.start] != 1:
        problems.append(f"start dimension: ‖{g.start}‖ must be 1")
    terminals = set(g.terminals)
    for i, rule in enumerate(g.rules):
        where = f"rule {i} ({rule.lhs})"
        if rule.lhs not in names:
            problems.append(f"{where}: undeclared lhs")
            continue
        arity = 0
        ok = True
        for b in rule.rhs:
            if b not in names:
                problems.append(f"{where}: undeclared rhs symbol {b}")
                ok = False
            else:
                arity += names[b]
        if not ok:
            continue
        if rule.rewriting.arity != arity:
            problems.append(f"{where}: rewriting arity {rule.rewriting.arity} "
                            f"≠ sum of rhs dimensions {arity}")
        if rule.rewriting.out_dimension != names[rule.lhs]:
            problems.append(f"{where}: {rule.rewriting.out_dimension} "
                            f"components but ‖{rule.lhs}‖ = {names[rule.lhs]}")
        used = rule.rewriting.variables_used()
        for j in used:
            if not 1 <= j <= arity:
                problems.append(f"{where}: variable x{j} out of range")
        if len(used) != len(set(used)):
            problems.append(f"{where}: non-linear rewriting (a variable "
                            "occurs twice)")
        for component in rule.rewriting.components:
            for token in component:
                if isinstance(token, str) and token not in terminals:
                    problems.append(f"{where}: undeclared terminal {token!r}")
    return problems


def is_deleting(g: McfGrammar) -> bool:
    """True when some rule drops one of its variables."""
    for rule in g.rules:
        if len(rule.rewriting.variables_used()) != rule.rewriting.arity:
            return True
    return False


def apply_rewriting(f: LinearRewriting, args: Sequence[str]) -> tuple:
    """Substitute argument words for variables, per component."""
    if len(args) != f.arity:
        raise McfgError("arity mismatch",
                        f"expected {f.arity} arguments, got {len(args)}")
    out = []
    for component in f.components:
        parts = []
        for token in component:
            if isinstance(token, tuple) and token[0] == VAR:
                parts.append(args[token[1] - 1])
            else:
                parts.append(token)
        out.append("".join(parts))
    return tuple(out)


def derivable_tuples(g: McfGrammar, nonterminal: str,
                     max_total_length: int) -> set:
    """Least fixed point of rule application, capped by summed tuple length.

    Exact for non-deleting grammars; for deleting grammars the cap can cut
    off derivations whose intermediate tuples shrink later.
    """
    problems = validate(g)
    if problems:
        raise McfgError("invalid-grammar", "; ".join(problems))
    known: dict = {nt.name: set() for nt in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            pools = [sorted(known[b]) for b in rule.rhs]
            for combo in product(*pools):
                args = tuple(w for tup in combo for w in tup)
                result = apply_rewriting(rule.rewriting, args)
                if sum(len(w) for w in result) > max_total_length:
                    continue
                if result not in known[rule.lhs]:
                    known[rule.lhs].add(result)
                    changed = True
    return known[nonterminal]


def mcfg_membership(g: McfGrammar, word: str) -> bool:
    """Whether the start symbol derives (word); see module note on deletion."""
    return (word,) in derivable_tuples(g, g.start, len(word))


def grammar_k(g: McfGrammar) -> int:
    """The largest nonterminal dimension (the k of "k-MCF")."""
    problems = validate(g)
    if problems:
        raise McfgError("invalid-grammar", "; ".join(problems))
    return max(nt.dimension for nt in g.nonterminals)


def anbncn_grammar() -> McfGrammar:
    """The bundled grammar for {aⁿbⁿcⁿ}: S→x₁x₂(A); A→(a x₁ b, x₂ c)(A); A→(ε,ε)."""
    return McfGrammar(
        terminals=("a", "b", "c"),
        nonterminals=(StratifiedNonterminal("S", 1),
                      StratifiedNonterminal("A", 2)),
        start="S",
        rules=(
            McfRule("S", ("A",), LinearRewriting((((VAR, 1), (VAR, 2)),), 2)),
            McfRule("A", ("A",), LinearRewriting(
                (("a", (VAR, 1), "b"), ((VAR, 2), "c")), 2)),
            McfRule("A", (), LinearRewriting(((), ()), 0)),
        ),
    )
