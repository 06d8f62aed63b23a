"""Batch command line front end.

Thin client over the HTTP service: every command builds one request, posts
it (in-process by default, or to ``--server URL``), and renders the JSON
response.  Exit codes are a stable contract: 0 accepted / clean compare,
1 rejected / mismatches, 2 budget exhausted, 3 errors.

Words are whitespace-free strings of single-character letters; generator
names longer than one character need ``--sep``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

_EXIT_BY_VERDICT = {"accepted": 0, "rejected": 1, "budget-exhausted": 2}


class CliError(Exception):
    pass


class _Client:
    """POSTs to the in-process app unless a remote server is named."""

    def __init__(self, server: Optional[str]):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server)
        else:
            import warnings

            with warnings.catch_warnings():
                # some starlette builds warn about their httpx shim on import
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail")
            except ValueError:
                detail = response.text
            raise CliError(str(detail))
        return response.json()


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise CliError(str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}") from exc


def _split_word(word: str, sep: Optional[str]) -> list:
    if not word:
        return []
    if sep:
        return [piece for piece in word.split(sep) if piece]
    return list(word)


def _join_word(letters, sep: Optional[str]) -> str:
    if not letters:
        return "ε"
    return (sep or "").join(letters)


def _budget_payload(args) -> dict:
    return {"max_configs": args.max_configs, "max_eps": args.max_eps}


def _cmd_accept(args) -> int:
    payload = {
        "automaton": _read_json(args.automaton),
        "word": _split_word(args.word, args.sep),
        "trace": args.trace,
    }
    payload.update(_budget_payload(args))
    response = _Client(args.server).post("/accept", payload)
    print(response["verdict"])
    if args.trace and response.get("trace"):
        for line in response["trace"]:
            print(line)
    return _EXIT_BY_VERDICT[response["verdict"]]


def _cmd_construct(args) -> int:
    payload = {
        "kind": args.kind,
        "spec": _read_json(args.spec),
        "k": args.k,
    }
    response = _Client(args.server).post("/construct", payload)
    text = json.dumps(response["automaton"], ensure_ascii=False,
                      indent=2) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            raise CliError(str(exc)) from exc
    else:
        sys.stdout.write(text)
    return 0


def _cmd_compare(args) -> int:
    payload = {
        "automaton": _read_json(args.automaton),
        "spec": _read_json(args.spec),
        "max_len": args.max_len,
    }
    payload.update(_budget_payload(args))
    if args.sample is not None:
        payload["sample"] = args.sample
        payload["seed"] = args.seed
    response = _Client(args.server).post("/compare", payload)
    if response.get("seed") is not None:
        print(f"seed: {response['seed']}")
    for miss in response["mismatches"]:
        word = _join_word(miss["word"], args.sep)
        print(f"mismatch: {word} | automaton: {miss['automaton']} | "
              f"oracle: {miss['oracle']}")
    print(f"checked: {response['checked']}")
    print(f"matched: {response['matched']}")
    print(f"mismatched: {response['mismatched']}")
    print(f"budget-exhausted: {response['budget_exhausted']}")
    if response["budget_exhausted"]:
        return 2
    return 0 if response["mismatched"] == 0 else 1


def _cmd_analyze(args) -> int:
    payload: dict = {"automaton": _read_json(args.automaton)}
    if args.k is not None:
        payload["k"] = args.k
    response = _Client(args.server).post("/analyze", payload)
    print(f"storage: {response['storage']}")
    print(f"states: {response['states']}")
    print(f"transitions: {response['transitions']}")
    print(f"cycle-free: {'yes' if response['cycle_free'] else 'no'}")
    if response.get("witness"):
        for line in response["witness"]:
            print(f"witness: {line}")
    if response.get("bound") is not None:
        print(f"bound: {response['bound']}")
    return 0


def _cmd_mcfg(args) -> int:
    payload = {
        "grammar": _read_json(args.grammar),
        "word": _split_word(args.word, args.sep),
    }
    response = _Client(args.server).post("/mcfg", payload)
    print(response["verdict"])
    if response["deleting"]:
        print("deleting-grammar-warning")
    return _EXIT_BY_VERDICT[response["verdict"]]


def _add_common(sub: argparse.ArgumentParser, budget: bool = False,
                sep: bool = False) -> None:
    sub.add_argument("--server", default=None,
                     help="base URL of a running service "
                          "(default: run in-process)")
    if budget:
        sub.add_argument("--max-configs", type=int, default=10**6,
                         help="total explored configurations per word")
        sub.add_argument("--max-eps", type=int, default=10**4,
                         help="ε-closure moves allowed between letters")
    if sep:
        sub.add_argument("--sep", default=None,
                         help="separator for multi-character letters")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treestack",
        description="Tree-stack automata for word problems: run, build, "
                    "compare, analyze.")
    commands = parser.add_subparsers(dest="command", required=True)

    accept = commands.add_parser(
        "accept", help="run an automaton on a word")
    accept.add_argument("automaton", help="automaton document (JSON)")
    accept.add_argument("word", nargs="?", default="",
                        help="input word (empty for ε)")
    accept.add_argument("--trace", action="store_true",
                        help="print an accepting run, one step per line")
    _add_common(accept, budget=True, sep=True)
    accept.set_defaults(func=_cmd_accept)

    construct = commands.add_parser(
        "construct", help="build an automaton from a group spec")
    construct.add_argument("kind",
                           choices=("free-product", "amalgam", "hnn",
                                    "graph"))
    construct.add_argument("spec", help="group spec document (JSON)")
    construct.add_argument("-o", "--output", default=None,
                           help="write the automaton here (default stdout)")
    construct.add_argument("--k", type=int, default=1,
                           help="restriction parameter for branch budgets")
    _add_common(construct)
    construct.set_defaults(func=_cmd_construct)

    compare = commands.add_parser(
        "compare", help="sweep words, automaton versus oracle")
    compare.add_argument("automaton", help="automaton document (JSON)")
    compare.add_argument("spec", help="group spec document (JSON)")
    compare.add_argument("--max-len", type=int, default=0,
                         help="check all words up to this length")
    compare.add_argument("--sample", type=int, default=None,
                         help="check this many random words instead")
    compare.add_argument("--seed", type=int, default=0,
                         help="sampling seed (printed with the report)")
    _add_common(compare, budget=True, sep=True)
    compare.set_defaults(func=_cmd_compare)

    analyze = commands.add_parser(
        "analyze", help="static report: sizes, cycle-freeness, bounds")
    analyze.add_argument("automaton", help="automaton document (JSON)")
    analyze.add_argument("--k", type=int, default=None,
                         help="also print the uniform visit bound for k")
    _add_common(analyze)
    analyze.set_defaults(func=_cmd_analyze)

    mcfg = commands.add_parser(
        "mcfg", help="grammar membership for a word")
    mcfg.add_argument("grammar", help="grammar document (JSON)")
    mcfg.add_argument("word", nargs="?", default="",
                      help="input word (empty for ε)")
    _add_common(mcfg, sep=True)
    mcfg.set_defaults(func=_cmd_mcfg)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # no traceback spew on broken remote calls
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
