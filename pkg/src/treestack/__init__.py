"""Tree-stack automata for group word problems, with an MCFG side door.

Core layers:

- :mod:`treestack.trees` / :mod:`treestack.automata`: persistent tree-stack
  storage and the storage-automaton model (tree-stack, pushdown, trivial).
- :mod:`treestack.search`: the nondeterministic acceptance engine.
- :mod:`treestack.analysis`: k-restriction, cycle-freeness, visit bounds,
  root normalization, and the pushdown embedding.
- :mod:`treestack.groups` / :mod:`treestack.constructions`: component
  automata and the free product / amalgam / HNN / graph-of-groups builders.
- :mod:`treestack.oracle`: independent normal-form word-problem decisions.
- :mod:`treestack.mcfg`: multiple context-free grammar membership.
- :mod:`treestack.documents` / :mod:`treestack.service` /
  :mod:`treestack.cli`: JSON formats, the HTTP service, and its CLI client.
"""

from .automata import (EPSILON, PUSHDOWN, TREE_STACK, TRIVIAL,
                       AutomatonError, Configuration, Instruction, Predicate,
                       SearchHints, StorageAutomaton, Transition)
from .search import (ACCEPTED, BUDGET_EXHAUSTED, REJECTED, SearchBudget,
                     SearchBudgetExceeded, SearchResult, accepts,
                     find_accepting_run, search_word, sweep)
from .trees import ROOT_LABEL, TreeOpError, TreeStack

__all__ = [
    "ACCEPTED", "BUDGET_EXHAUSTED", "EPSILON", "PUSHDOWN", "REJECTED",
    "ROOT_LABEL", "TREE_STACK", "TRIVIAL", "AutomatonError", "Configuration",
    "Instruction", "Predicate", "SearchBudget", "SearchBudgetExceeded",
    "SearchHints", "SearchResult", "StorageAutomaton", "Transition",
    "TreeOpError", "TreeStack", "accepts", "find_accepting_run",
    "search_word", "sweep",
]

__version__ = "0.1.0"
