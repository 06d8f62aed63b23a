"""HTTP front end: accept/construct/compare/analyze/mcfg as JSON endpoints.

The service owns no state; each request carries its documents.  Domain
errors (parse failures, bad group data, construction preconditions) map to
HTTP 422 with the diagnostic as the detail string, so clients can surface
them verbatim.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .analysis import AnalysisError, check_cycle_free, uniform_visit_bound
from .automata import (EPSILON, TREE_STACK, AutomatonError, StorageAutomaton,
                       _fmt)
from .constructions import ConstructionError, automaton_for
from .documents import (DocumentError, automaton_from_document,
                        automaton_to_document, grammar_from_document,
                        group_spec_from_document)
from .groups import GroupDataError
from .mcfg import McfgError, is_deleting, mcfg_membership
from .oracle import (AmalgamSpec, FreeProductSpec, GraphOfGroupsSpec,
                     HnnSpec, OracleError, alphabet_of, is_trivial,
                     sample_words)
from .search import (ACCEPTED, BUDGET_EXHAUSTED, REJECTED, SearchBudget,
                     search_word, sweep)
from .trees import TreeOpError

_DOMAIN_ERRORS = (DocumentError, OracleError, GroupDataError,
                  ConstructionError, McfgError, AnalysisError,
                  AutomatonError, TreeOpError, ValueError)

_CONSTRUCTION_KINDS = {
    "free-product": FreeProductSpec,
    "amalgam": AmalgamSpec,
    "hnn": HnnSpec,
    "graph": GraphOfGroupsSpec,
}

app = FastAPI(title="tree-stack word-problem service", version="0.1.0")


@contextmanager
def _domain():
    try:
        yield
    except HTTPException:
        raise
    except _DOMAIN_ERRORS as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _bad(detail: str) -> HTTPException:
    return HTTPException(status_code=422, detail=detail)


class _BudgetFields(BaseModel):
    max_configs: int = Field(default=10**6, gt=0)
    max_eps: int = Field(default=10**4, gt=0)

    def budget(self) -> SearchBudget:
        return SearchBudget(self.max_configs, self.max_eps)


class AcceptRequest(_BudgetFields):
    automaton: dict
    word: list[str] = []
    trace: bool = False


class AcceptResponse(BaseModel):
    verdict: str
    trace: Optional[list[str]] = None


class ConstructRequest(BaseModel):
    kind: str
    spec: dict
    k: int = Field(default=1, gt=0)


class ConstructResponse(BaseModel):
    automaton: dict


class CompareRequest(_BudgetFields):
    automaton: dict
    spec: dict
    max_len: int = Field(default=0, ge=0)
    sample: Optional[int] = Field(default=None, gt=0)
    seed: int = 0


class Mismatch(BaseModel):
    word: list[str]
    automaton: str
    oracle: str


class CompareResponse(BaseModel):
    checked: int
    matched: int
    mismatched: int
    budget_exhausted: int
    seed: Optional[int] = None
    mismatches: list[Mismatch]


class AnalyzeRequest(BaseModel):
    automaton: dict
    k: Optional[int] = Field(default=None, gt=0)


class AnalyzeResponse(BaseModel):
    storage: str
    states: int
    transitions: int
    cycle_free: bool
    witness: Optional[list[str]] = None
    bound: Optional[int] = None


class McfgRequest(BaseModel):
    grammar: dict
    word: list[str] = []


class McfgResponse(BaseModel):
    verdict: str
    deleting: bool


def _check_word(word: list, alphabet) -> tuple:
    allowed = set(alphabet)
    for letter in word:
        if letter not in allowed:
            raise _bad(f"unknown letter {letter!r}")
    return tuple(word)


def _storage_view(storage, storage_kind: str) -> tuple:
    if storage_kind == TREE_STACK:
        pointer = storage.pointer
        where = "ε" if not pointer else ".".join(str(b) for b in pointer)
        return where, _fmt(storage.label)
    if storage_kind == PUSHDOWN:
        return str(len(storage)), _fmt(storage[-1]) if storage else "◇"
    return "-", "-"


def _trace_lines(m: StorageAutomaton, run) -> list:
    lines = []
    for step in run.steps:
        t = step.transition
        read = "ε" if t.read is EPSILON else str(t.read)
        where, label = _storage_view(step.after.storage, m.storage_kind)
        lines.append(f"{_fmt(t.target)} | {read} | {t.predicate} | "
                     f"{t.instruction} | {where} | {label}")
    return lines


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/accept", response_model=AcceptResponse)
def accept_endpoint(req: AcceptRequest) -> AcceptResponse:
    with _domain():
        m = automaton_from_document(req.automaton)
        word = _check_word(req.word, m.input_alphabet)
        result = search_word(m, word, req.budget(), want_run=req.trace)
        trace = None
        if req.trace and result.run is not None:
            trace = _trace_lines(m, result.run)
        return AcceptResponse(verdict=result.verdict, trace=trace)


@app.post("/construct", response_model=ConstructResponse)
def construct_endpoint(req: ConstructRequest) -> ConstructResponse:
    with _domain():
        if req.kind not in _CONSTRUCTION_KINDS:
            raise _bad(f"unknown construction kind {req.kind!r}")
        spec = group_spec_from_document(req.spec)
        if not isinstance(spec, _CONSTRUCTION_KINDS[req.kind]):
            raise _bad(f"spec document is not a {req.kind} spec")
        m = automaton_for(spec, req.k)
        return ConstructResponse(automaton=automaton_to_document(m))


@app.post("/compare", response_model=CompareResponse)
def compare_endpoint(req: CompareRequest) -> CompareResponse:
    with _domain():
        m = automaton_from_document(req.automaton)
        spec = group_spec_from_document(req.spec)
        alphabet = alphabet_of(spec)
        if set(alphabet) != set(m.input_alphabet):
            raise _bad("automaton and group spec alphabets differ")
        budget = req.budget()
        if req.sample is None:
            verdicts = sweep(m, alphabet, req.max_len, budget)
            seed = None
        else:
            words = sample_words(alphabet, req.sample, req.max_len, req.seed)
            verdicts = {}
            for w in words:
                if w not in verdicts:
                    result = search_word(m, w, budget)
                    verdicts[w] = result.verdict
            seed = req.seed
        matched = 0
        budget_exhausted = 0
        mismatches = []
        for w in sorted(verdicts, key=lambda w: (len(w), w)):
            got = verdicts[w]
            if got == BUDGET_EXHAUSTED:
                budget_exhausted += 1
                continue
            want = ACCEPTED if is_trivial(spec, w) else REJECTED
            if got == want:
                matched += 1
            else:
                mismatches.append(Mismatch(word=list(w), automaton=got,
                                           oracle=want))
        return CompareResponse(
            checked=len(verdicts), matched=matched,
            mismatched=len(mismatches), budget_exhausted=budget_exhausted,
            seed=seed, mismatches=mismatches)


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze_endpoint(req: AnalyzeRequest) -> AnalyzeResponse:
    with _domain():
        m = automaton_from_document(req.automaton)
        report = check_cycle_free(m)
        witness = [str(t) for t in report.witness] if not report.ok else None
        bound = None
        if req.k is not None and report.ok and m.storage_kind == TREE_STACK:
            bound = uniform_visit_bound(m, req.k)
        return AnalyzeResponse(
            storage=m.storage_kind, states=len(m.states),
            transitions=len(m.transitions), cycle_free=report.ok,
            witness=witness, bound=bound)


@app.post("/mcfg", response_model=McfgResponse)
def mcfg_endpoint(req: McfgRequest) -> McfgResponse:
    with _domain():
        grammar = grammar_from_document(req.grammar)
        word = _check_word(req.word, grammar.terminals)
        ok = mcfg_membership(grammar, "".join(word))
        return McfgResponse(verdict=ACCEPTED if ok else REJECTED,
                            deleting=is_deleting(grammar))
