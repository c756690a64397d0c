"""Command-line entry point: ``opetopic COMMAND [options] INPUT``.

INPUT is a path (``.popt`` preopetope, ``.drv`` script) or an inline
preopetope literal.  Exit codes: 0 ok, 1 rule violation (or a negative
``decide`` verdict), 2 parse or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .coding import to_named_with_proof, to_preopetope
from .counting import count, count_oracle
from .errors import OpetopeError, ParseError, RuleViolation
from .named import NamedSequent, alpha_equivalent
from .named_sets import OCMT, os_materialize, os_repr
from .preopetope import Preopetope
from .textio import (
    dumps, parse_preopetope, preopetope_to_json, render, run_script, serialize_address,
    serialize_preopetope, to_json,
)
from .unnamed import UnnamedSequent, derive, explain, target_of
from .unnamed_sets import UContext, u_materialize

EXIT_OK, EXIT_RULE, EXIT_PARSE = 0, 1, 2


class InputError(Exception):
    pass


def _read(arg: str) -> tuple[str, str]:
    """(kind, text) where kind is "script" or "preopetope"."""
    path = Path(arg)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        if path.suffix == ".drv" or text.lstrip().startswith("#dialect"):
            return "script", text
        return "preopetope", text
    if path.suffix in (".drv", ".popt"):
        raise InputError(f"no such file: {arg}")
    return "preopetope", arg


def load(arg: str):
    kind, text = _read(arg)
    if kind == "script":
        return run_script(None, text)
    return parse_preopetope(text)


def as_preopetope(obj) -> Preopetope:
    if isinstance(obj, Preopetope):
        return obj
    if isinstance(obj, UnnamedSequent):
        return obj.src
    if isinstance(obj, NamedSequent):
        return to_preopetope(obj)
    raise InputError(f"expected an opetope, got {type(obj).__name__}")


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _check_one(path: str) -> tuple[str, int, str]:
    try:
        result = load(path)
    except ParseError as e:
        return path, EXIT_PARSE, f"parse error: {e}"
    except RuleViolation as e:
        return path, EXIT_RULE, f"rule violation: {e}"
    except (InputError, OSError) as e:
        return path, EXIT_PARSE, str(e)
    return path, EXIT_OK, render(result)


def _expand(paths: list[str]) -> list[str]:
    out = []
    for p in paths:
        if os.path.isdir(p):
            out.extend(sorted(str(q) for q in Path(p).glob("*.drv")))
        else:
            out.append(p)
    return out


def cmd_check(args) -> int:
    files = _expand(args.inputs)
    if args.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check_one, files))
    else:
        results = [_check_one(f) for f in files]
    worst = max((code for _, code, _ in results), default=EXIT_OK)
    if args.format == "json":
        print(json.dumps([{"file": f, "exit": code, "result": msg} for f, code, msg in results],
                         indent=2, ensure_ascii=False))
        return worst
    for f, code, msg in results:
        head = f"{f}: " if len(files) > 1 else ""
        if code == EXIT_OK:
            print(head + msg)
        else:
            print(head + msg, file=sys.stderr)
    return worst


def cmd_decide(args) -> int:
    p = as_preopetope(load(args.input))
    why = explain(p)
    ok = why is None
    text = "true" if ok else "false"
    if args.explain and not ok:
        text += f"\n{why}"
    _emit(args, text, {"opetope": ok, "reason": why})
    return EXIT_OK if ok else EXIT_RULE


def cmd_target(args) -> int:
    p = as_preopetope(load(args.input))
    why = explain(p)
    if why is not None:
        raise RuleViolation(f"not an opetope: {why}")
    t, bij = target_of(p)
    rows = [(serialize_address(a), serialize_address(b)) for a, b in bij.pairs]
    text = "\n".join([f"target: {serialize_preopetope(t)}"] + [f"{a} -> {b}" for a, b in rows])
    _emit(args, text, {"target": preopetope_to_json(t), "readdressing": [list(r) for r in rows]})
    return EXIT_OK


def cmd_count(args) -> int:
    p = as_preopetope(load(args.input))
    n = count(p)
    payload: dict = {"count": n}
    text = str(n)
    if args.oracle:
        m = count_oracle(p)
        payload["oracle"] = m
        payload["agree"] = m == n
        text += f"\noracle: {m} ({'agree' if m == n else 'DISAGREE'})"
        if m != n:
            _emit(args, text, payload)
            return EXIT_RULE
    _emit(args, text, payload)
    return EXIT_OK


def cmd_convert(args) -> int:
    obj = load(args.input)
    if args.to == "named":
        p = as_preopetope(obj)
        s, proof = to_named_with_proof(p)
        if args.verify:
            if to_preopetope(s) != p:
                raise RuleViolation("roundtrip failed: coding the named form does not give the input")
        text = f"{s}\n#dialect opt!\n{proof.script()}"
        _emit(args, text, {"sequent": to_json(s), "script": proof.script()})
        return EXIT_OK
    if isinstance(obj, NamedSequent):
        p = to_preopetope(obj)
        if args.verify:
            back, _ = to_named_with_proof(p)
            if not alpha_equivalent(back, obj):
                raise RuleViolation("roundtrip failed: the named form is not recovered up to renaming")
    else:
        p = as_preopetope(obj)
    seq = derive(p)
    _emit(args, str(seq), to_json(seq))
    return EXIT_OK


def cmd_materialize(args) -> int:
    obj = load(args.input)
    if isinstance(obj, UContext):
        cx = u_materialize(obj)
    elif isinstance(obj, OCMT):
        cx = os_materialize(obj)
    elif isinstance(obj, NamedSequent):
        cx = os_materialize(os_repr(obj))
    else:
        cx = os_materialize(os_repr(to_named_with_proof(as_preopetope(obj))[0]))
    bad = cx.violations()
    payload = cx.to_json()
    payload["violations"] = bad
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(dumps(cx))
        print(f"cells: {len(cx)}; identity checks: {'all pass' if not bad else f'{len(bad)} failing'}")
        for b in bad:
            print(f"  {b}")
    return EXIT_OK if not bad else EXIT_RULE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="opetopic", description="Check opetopes and opetopic sets.")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run scripts and print their conclusions")
    p.add_argument("inputs", nargs="+", help="script files or directories of .drv files")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("decide", help="is this preopetope an opetope?")
    p.add_argument("input")
    p.add_argument("--explain", action="store_true")
    p.set_defaults(fn=cmd_decide)

    p = sub.add_parser("target", help="target and readdressing table")
    p.add_argument("input")
    p.set_defaults(fn=cmd_target)

    p = sub.add_parser("count", help="number of faces")
    p.add_argument("input")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("convert", help="translate between named and unnamed forms")
    p.add_argument("input")
    p.add_argument("--to", choices=("named", "unnamed"), required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("materialize", help="cells with sources and targets, plus identity checks")
    p.add_argument("input")
    p.set_defaults(fn=cmd_materialize)

    for name in ("decide", "target", "count", "convert", "materialize"):
        sub.choices[name].add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sub.choices["check"].add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OpetopeError as e:
        print(f"rule violation: {e}", file=sys.stderr)
        return EXIT_RULE


if __name__ == "__main__":
    sys.exit(main())
