"""JSON document formats for automata, group specs, and grammars.

Storage labels and states may be nested tuples; they are encoded as nested
JSON arrays and decoded back to tuples, so parse(serialize(x)) = x.  All
parse errors raise DocumentError carrying a path into the offending field,
like ``transitions[3].instr.branch``.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .automata import (EPSILON, PUSHDOWN, TREE_STACK, TRIVIAL, Instruction,
                       Predicate, SearchHints, StorageAutomaton, Transition)
from .groups import FiniteGroup, FiniteSubgroupData, GroupDataError
from .mcfg import (LinearRewriting, McfGrammar, McfRule,
                   StratifiedNonterminal, VAR, validate as validate_grammar)
from .oracle import (AmalgamSpec, FiniteGroupSpec, FreeProductSpec,
                     GraphEdge, GraphOfGroupsSpec, HnnSpec, IntegersSpec,
                     OracleError)


class DocumentError(Exception):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


def _encode(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_encode(v) for v in value]
    return value


def _decode(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(_decode(v) for v in value)
    return value


def _need(doc: Any, field: str, path: str) -> Any:
    if not isinstance(doc, Mapping):
        raise DocumentError(path, "expected an object")
    if field not in doc:
        raise DocumentError(f"{path}.{field}", "missing field")
    return doc[field]


def _need_list(doc: Any, field: str, path: str) -> list:
    value = _need(doc, field, path)
    if not isinstance(value, list):
        raise DocumentError(f"{path}.{field}", "expected a list")
    return value


def _need_str(doc: Any, field: str, path: str) -> str:
    value = _need(doc, field, path)
    if not isinstance(value, str):
        raise DocumentError(f"{path}.{field}", "expected a string")
    return value


def _load(text: str, path: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(path, f"invalid JSON: {exc}") from exc


def _dump(doc: Any) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


# --- automata -------------------------------------------------------------


def _predicate_document(p: Predicate) -> dict:
    return {"kind": p.kind, "labels": [_encode(l) for l in p.labels]}


def _instruction_document(i: Instruction) -> dict:
    doc: dict = {"kind": i.kind}
    if i.branch is not None:
        doc["branch"] = i.branch
    if i.kind in ("push", "set", "pd_push", "pd_pop"):
        doc["label"] = _encode(i.label)
    return doc


def automaton_to_document(m: StorageAutomaton) -> dict:
    doc: dict = {
        "states": [_encode(q) for q in m.states],
        "alphabet": list(m.input_alphabet),
    }
    if m.storage_kind == TREE_STACK:
        doc["tree_alphabet"] = [_encode(l) for l in m.storage_alphabet]
    elif m.storage_kind == PUSHDOWN:
        doc["stack_alphabet"] = [_encode(l) for l in m.storage_alphabet]
    doc["initial"] = _encode(m.initial_state)
    doc["finals"] = sorted((_encode(q) for q in m.final_states), key=repr)
    doc["transitions"] = [
        {
            "from": _encode(t.source),
            "read": None if t.read is EPSILON else t.read,
            "pred": _predicate_document(t.predicate),
            "instr": _instruction_document(t.instruction),
            "to": _encode(t.target),
        }
        for t in m.transitions
    ]
    if m.search_hints is not None:
        doc["search_hints"] = {
            "suppress_chained_entries":
                [list(g) for g in m.search_hints.suppress_chained_entries],
            "suppress_empty_exits":
                [list(g) for g in m.search_hints.suppress_empty_exits],
            "symmetric_families":
                [list(f) for f in m.search_hints.symmetric_families],
        }
    return doc


def _parse_predicate(doc: Any, path: str) -> Predicate:
    kind = _need_str(doc, "kind", path)
    labels = [_decode(l) for l in _need_list(doc, "labels", path)]
    if kind == "any":
        return Predicate.any()
    if kind == "equals":
        if len(labels) != 1:
            raise DocumentError(f"{path}.labels",
                                "equals takes exactly one label")
        return Predicate.equals(labels[0])
    if kind == "notequals":
        if not labels:
            raise DocumentError(f"{path}.labels",
                                "notequals needs at least one label")
        return Predicate.notequals(*labels)
    raise DocumentError(f"{path}.kind", f"unknown predicate kind {kind!r}")


def _parse_instruction(doc: Any, path: str) -> Instruction:
    kind = _need_str(doc, "kind", path)
    if kind in ("push", "up"):
        branch = _need(doc, "branch", path)
        if not isinstance(branch, int) or isinstance(branch, bool):
            raise DocumentError(f"{path}.branch", "expected an integer")
        if kind == "up":
            return Instruction.up(branch)
        return Instruction.push(branch, _decode(_need(doc, "label", path)))
    if kind in ("set", "pd_push", "pd_pop"):
        label = _decode(_need(doc, "label", path))
        return Instruction(kind, None, label)
    if kind in ("id", "down"):
        return Instruction(kind)
    raise DocumentError(f"{path}.kind", f"unknown instruction kind {kind!r}")


def automaton_from_document(doc: Any, path: str = "$") -> StorageAutomaton:
    states = tuple(_decode(q) for q in _need_list(doc, "states", path))
    alphabet = tuple(_need_list(doc, "alphabet", path))
    if "tree_alphabet" in doc and "stack_alphabet" in doc:
        raise DocumentError(path,
                            "both tree_alphabet and stack_alphabet present")
    if "tree_alphabet" in doc:
        kind = TREE_STACK
        storage = tuple(_decode(l)
                        for l in _need_list(doc, "tree_alphabet", path))
    elif "stack_alphabet" in doc:
        kind = PUSHDOWN
        storage = tuple(_decode(l)
                        for l in _need_list(doc, "stack_alphabet", path))
    else:
        kind = TRIVIAL
        storage = ()
    initial = _decode(_need(doc, "initial", path))
    finals = frozenset(_decode(q) for q in _need_list(doc, "finals", path))
    transitions = []
    for i, rec in enumerate(_need_list(doc, "transitions", path)):
        where = f"{path}.transitions[{i}]"
        read = _need(rec, "read", where)
        if read is not None and not isinstance(read, str):
            raise DocumentError(f"{where}.read", "expected a letter or null")
        transitions.append(Transition(
            _decode(_need(rec, "from", where)),
            EPSILON if read is None else read,
            _parse_predicate(_need(rec, "pred", where), f"{where}.pred"),
            _parse_instruction(_need(rec, "instr", where), f"{where}.instr"),
            _decode(_need(rec, "to", where)),
        ))
    hints = None
    if isinstance(doc, Mapping) and doc.get("search_hints") is not None:
        hdoc = doc["search_hints"]
        hpath = f"{path}.search_hints"
        def groups(field: str) -> tuple:
            raw = hdoc.get(field, ())
            if not isinstance(raw, list):
                raise DocumentError(f"{hpath}.{field}",
                                    "expected a list of index lists")
            out = []
            for g in raw:
                if not isinstance(g, list):
                    raise DocumentError(f"{hpath}.{field}",
                                        "expected a list of index lists")
                out.append(tuple(g))
            return tuple(out)

        suppress = groups("suppress_chained_entries")
        empty_exits = groups("suppress_empty_exits")
        families = groups("symmetric_families")
        for idx in [i for g in suppress + empty_exits + families for i in g]:
            if not isinstance(idx, int) or not 0 <= idx < len(transitions):
                raise DocumentError(hpath,
                                    f"transition index {idx!r} out of range")
        hints = SearchHints(suppress, empty_exits, families)
    m = StorageAutomaton(
        states=states,
        input_alphabet=alphabet,
        storage_kind=kind,
        storage_alphabet=storage,
        initial_state=initial,
        final_states=finals,
        transitions=tuple(transitions),
        search_hints=hints,
    )
    problems = m.validate()
    if problems:
        raise DocumentError(path, "; ".join(problems))
    return m


def automaton_to_json(m: StorageAutomaton) -> str:
    return _dump(automaton_to_document(m))


def automaton_from_json(text: str, path: str = "$") -> StorageAutomaton:
    return automaton_from_document(_load(text, path), path)


# --- group specs ----------------------------------------------------------


def _group_document(g: FiniteGroup) -> dict:
    return {
        "elements": [_encode(e) for e in g.elements],
        "identity": _encode(g.identity),
        "table": [[_encode(g.mul(a, b)) for b in g.elements]
                  for a in g.elements],
    }


def _parse_group(doc: Any, path: str) -> FiniteGroup:
    elements = tuple(_decode(e) for e in _need_list(doc, "elements", path))
    identity = _decode(_need(doc, "identity", path))
    rows = _need_list(doc, "table", path)
    if len(rows) != len(elements):
        raise DocumentError(f"{path}.table",
                            "one row per element is required")
    table = {}
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(elements):
            raise DocumentError(f"{path}.table[{i}]",
                                "one entry per element is required")
        for j, value in enumerate(row):
            table[(elements[i], elements[j])] = _decode(value)
    try:
        return FiniteGroup(elements, identity, table)
    except GroupDataError as exc:
        raise DocumentError(f"{path}.table", str(exc)) from exc


def _pairs_document(pairs: Mapping) -> list:
    return [[_encode(k), _encode(v)] for k, v in pairs.items()]


def _parse_pairs(doc: Any, field: str, path: str) -> dict:
    out = {}
    for i, pair in enumerate(_need_list(doc, field, path)):
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError(f"{path}.{field}[{i}]",
                                "expected a [key, value] pair")
        out[_decode(pair[0])] = _decode(pair[1])
    return out


def _subgroup_document(data: FiniteSubgroupData) -> dict:
    doc = _group_document(data.group)
    doc["left_reps"] = [[_encode(h), list(data.left_reps[h])]
                        for h in data.group.elements]
    doc["right_reps"] = [[_encode(h), list(data.right_reps[h])]
                         for h in data.group.elements]
    if data.phi is not None:
        doc["phi"] = _pairs_document(dict(data.phi))
    return doc


def _parse_subgroup(doc: Any, path: str) -> FiniteSubgroupData:
    group = _parse_group(doc, path)
    reps = {}
    for field in ("left_reps", "right_reps"):
        parsed = _parse_pairs(doc, field, path)
        reps[field] = {h: tuple(w) for h, w in parsed.items()}
    phi = None
    if isinstance(doc, Mapping) and doc.get("phi") is not None:
        phi = _parse_pairs(doc, "phi", path)
    try:
        return FiniteSubgroupData(group, reps["left_reps"],
                                  reps["right_reps"], phi)
    except GroupDataError as exc:
        raise DocumentError(path, str(exc)) from exc


def group_spec_to_document(spec: Any) -> dict:
    if isinstance(spec, FiniteGroupSpec):
        doc = {"kind": "finite"}
        doc.update(_group_document(spec.group))
        doc["gens"] = [[letter, _encode(element)]
                       for letter, element in spec.gens]
        doc["inverse_letters"] = [list(p) for p in spec.inverse_letters]
        return doc
    if isinstance(spec, IntegersSpec):
        return {"kind": "integers", "plus": spec.plus, "minus": spec.minus}
    if isinstance(spec, FreeProductSpec):
        return {"kind": "free-product",
                "left": group_spec_to_document(spec.left),
                "right": group_spec_to_document(spec.right)}
    if isinstance(spec, AmalgamSpec):
        return {"kind": "amalgam",
                "left": group_spec_to_document(spec.left),
                "right": group_spec_to_document(spec.right),
                "subgroup": _subgroup_document(spec.subgroup)}
    if isinstance(spec, HnnSpec):
        return {"kind": "hnn",
                "base": group_spec_to_document(spec.base),
                "h1": _subgroup_document(spec.h1),
                "h2": _subgroup_document(spec.h2),
                "phi": [[_encode(a), _encode(b)] for a, b in spec.phi],
                "t": spec.t_name, "T": spec.T_name}
    if isinstance(spec, GraphOfGroupsSpec):
        return {
            "kind": "graph",
            "vertices": [[v, group_spec_to_document(s)]
                         for v, s in spec.vertices],
            "edges": [
                {
                    "id": e.edge_id,
                    "source": e.source,
                    "target": e.target,
                    "data": _subgroup_document(e.data),
                    "tree": e.in_spanning_tree,
                    "stable": list(e.stable) if e.stable else None,
                }
                for e in spec.edges
            ],
        }
    raise DocumentError("$", f"unsupported group spec {type(spec).__name__}")


def group_spec_from_document(doc: Any, path: str = "$") -> Any:
    kind = _need_str(doc, "kind", path)
    try:
        if kind == "finite":
            group = _parse_group(doc, path)
            gens = tuple((letter, _decode(element)) for letter, element in
                         (_check_pair(p, f"{path}.gens[{i}]") for i, p in
                          enumerate(_need_list(doc, "gens", path))))
            inverses = tuple(
                tuple(_check_pair(p, f"{path}.inverse_letters[{i}]"))
                for i, p in enumerate(_need_list(doc, "inverse_letters",
                                                 path)))
            return FiniteGroupSpec(group, gens, inverses)
        if kind == "integers":
            return IntegersSpec(_need_str(doc, "plus", path),
                                _need_str(doc, "minus", path))
        if kind == "free-product":
            return FreeProductSpec(
                group_spec_from_document(_need(doc, "left", path),
                                         f"{path}.left"),
                group_spec_from_document(_need(doc, "right", path),
                                         f"{path}.right"))
        if kind == "amalgam":
            return AmalgamSpec(
                group_spec_from_document(_need(doc, "left", path),
                                         f"{path}.left"),
                group_spec_from_document(_need(doc, "right", path),
                                         f"{path}.right"),
                _parse_subgroup(_need(doc, "subgroup", path),
                                f"{path}.subgroup"))
        if kind == "hnn":
            phi = tuple((_decode(p[0]), _decode(p[1])) for p in
                        (_check_pair(p, f"{path}.phi[{i}]") for i, p in
                         enumerate(_need_list(doc, "phi", path))))
            return HnnSpec(
                group_spec_from_document(_need(doc, "base", path),
                                         f"{path}.base"),
                _parse_subgroup(_need(doc, "h1", path), f"{path}.h1"),
                _parse_subgroup(_need(doc, "h2", path), f"{path}.h2"),
                phi,
                _need_str(doc, "t", path), _need_str(doc, "T", path))
        if kind == "graph":
            vertices = []
            for i, pair in enumerate(_need_list(doc, "vertices", path)):
                where = f"{path}.vertices[{i}]"
                _check_pair(pair, where)
                vertices.append((pair[0],
                                 group_spec_from_document(pair[1], where)))
            edges = []
            for i, rec in enumerate(_need_list(doc, "edges", path)):
                where = f"{path}.edges[{i}]"
                stable = rec.get("stable") if isinstance(rec, Mapping) \
                    else None
                edges.append(GraphEdge(
                    edge_id=_need(rec, "id", where),
                    source=_need(rec, "source", where),
                    target=_need(rec, "target", where),
                    data=_parse_subgroup(_need(rec, "data", where),
                                         f"{where}.data"),
                    in_spanning_tree=bool(_need(rec, "tree", where)),
                    stable=tuple(stable) if stable else None,
                ))
            spec = GraphOfGroupsSpec(tuple(vertices), tuple(edges))
            spec.validate()
            return spec
    except (OracleError, GroupDataError) as exc:
        raise DocumentError(path, str(exc)) from exc
    raise DocumentError(f"{path}.kind", f"unknown group spec kind {kind!r}")


def _check_pair(pair: Any, path: str) -> list:
    if not isinstance(pair, list) or len(pair) != 2:
        raise DocumentError(path, "expected a two-element pair")
    return pair


def group_spec_to_json(spec: Any) -> str:
    return _dump(group_spec_to_document(spec))


def group_spec_from_json(text: str, path: str = "$") -> Any:
    return group_spec_from_document(_load(text, path), path)


# --- grammars -------------------------------------------------------------


def grammar_to_document(g: McfGrammar) -> dict:
    def token_doc(token):
        if isinstance(token, tuple) and token[0] == VAR:
            return ["var", token[1]]
        return token

    return {
        "terminals": list(g.terminals),
        "nonterminals": [{"name": nt.name, "dimension": nt.dimension}
                         for nt in g.nonterminals],
        "start": g.start,
        "rules": [
            {
                "lhs": r.lhs,
                "rhs": list(r.rhs),
                "components": [[token_doc(tok) for tok in comp]
                               for comp in r.rewriting.components],
            }
            for r in g.rules
        ],
    }


def grammar_from_document(doc: Any, path: str = "$") -> McfGrammar:
    terminals = tuple(_need_list(doc, "terminals", path))
    nts = []
    for i, rec in enumerate(_need_list(doc, "nonterminals", path)):
        where = f"{path}.nonterminals[{i}]"
        dim = _need(rec, "dimension", where)
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise DocumentError(f"{where}.dimension", "expected an integer")
        nts.append(StratifiedNonterminal(_need_str(rec, "name", where), dim))
    dims = {nt.name: nt.dimension for nt in nts}
    start = _need_str(doc, "start", path)
    rules = []
    for i, rec in enumerate(_need_list(doc, "rules", path)):
        where = f"{path}.rules[{i}]"
        lhs = _need_str(rec, "lhs", where)
        rhs = tuple(_need_list(rec, "rhs", where))
        components = []
        for j, comp in enumerate(_need_list(rec, "components", where)):
            if not isinstance(comp, list):
                raise DocumentError(f"{where}.components[{j}]",
                                    "expected a token list")
            tokens = []
            for tok in comp:
                if isinstance(tok, str):
                    tokens.append(tok)
                elif isinstance(tok, list) and len(tok) == 2 \
                        and tok[0] == "var" and isinstance(tok[1], int):
                    tokens.append((VAR, tok[1]))
                else:
                    raise DocumentError(f"{where}.components[{j}]",
                                        f"bad token {tok!r}")
            components.append(tuple(tokens))
        arity = sum(dims.get(b, 0) for b in rhs)
        rules.append(McfRule(lhs, rhs,
                             LinearRewriting(tuple(components), arity)))
    grammar = McfGrammar(terminals, tuple(nts), start, tuple(rules))
    problems = validate_grammar(grammar)
    if problems:
        raise DocumentError(path, "; ".join(problems))
    return grammar


def grammar_to_json(g: McfGrammar) -> str:
    return _dump(grammar_to_document(g))


def grammar_from_json(text: str, path: str = "$") -> McfGrammar:
    return grammar_from_document(_load(text, path), path)
