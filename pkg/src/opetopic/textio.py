"""Text formats: addresses, preopetopes, named terms, OCMT literals, scripts, JSON.

Surface syntax is ASCII (``<-``, ``~>``, ``point``, ``degen``, ``[]:k``);
the symbols ``← ⤳ ∗ ♦ ■ ∅`` are accepted on input as aliases.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable

from .address import STAR, Address
from .errors import OpetopeError, ParseError, RuleViolation, ScriptError
from .named import (
    DegenTerm, EqTheory, NamedSequent, Term, Var, render_type,
)
from .preopetope import ARROW, POINT, Degenerate, EmptyTarget, Nodes, Preopetope, integer

DIALECTS = ("opt?", "optset?", "opt!", "optset!", "optset!m")

_SYMBOLS = ["<-", "~>", "|-", "|>", "->", "(", ")", "[", "]", "{", "}", ",", ";", "=", ":", "*", "^", "/"]
_ALIASES = {"←": "<-", "⤳": "~>", "∗": "*", "⊢": "|-", "▷": "|>", "→": "->"}
_WORD_ALIASES = {"♦": "point", "■": "arrow", "∅": "0"}
_STOP = set("()[]{},;=:*^/#\"<>~|") | set(_ALIASES) | set(_WORD_ALIASES)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "sym", "str", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _ALIASES:
            out.append(Token("sym", _ALIASES[ch], line, col))
            i, col = i + 1, col + 1
            continue
        if ch in _WORD_ALIASES:
            out.append(Token("ident", _WORD_ALIASES[ch], line, col))
            i, col = i + 1, col + 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", line, col)
            out.append(Token("str", text[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                out.append(Token("sym", sym, line, col))
                i, col = i + len(sym), col + len(sym)
                break
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _STOP:
                j += 1
            if j == i:
                raise ParseError(f"unexpected character {ch!r}", line, col)
            out.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind in ("sym", "ident") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            shown = t.text or "end of input"
            raise ParseError(f"expected {text!r} but found {shown!r}", t.line, t.col)
        return self.next()

    def ident(self, what: str = "a name") -> Token:
        t = self.peek()
        if t.kind not in ("ident", "str"):
            shown = t.text or "end of input"
            raise ParseError(f"expected {what} but found {shown!r}", t.line, t.col)
        return self.next()

    def error(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    def done(self) -> None:
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"unexpected {t.text!r}", t.line, t.col)


# -- addresses ---------------------------------------------------------------

@dataclass
class _RawAddr:
    entries: list | None  # None for the atom
    ann: int | None
    line: int
    col: int


def _parse_raw_address(p: _Parser) -> _RawAddr:
    t = p.peek()
    if p.accept("*"):
        return _RawAddr(None, None, t.line, t.col)
    if not p.accept("["):
        raise ParseError(f"expected an address but found {t.text or 'end of input'!r}", t.line, t.col)
    entries = []
    while not p.at("]"):
        if p.peek().kind == "eof":
            raise p.error("unclosed '['")
        entries.append(_parse_raw_address(p))
    p.expect("]")
    ann = None
    if p.at(":") and p.peek(1).kind == "ident" and p.peek(1).text.isdigit():
        p.next()
        ann = int(p.next().text)
    return _RawAddr(entries, ann, t.line, t.col)


def _infer_dim(raw: _RawAddr) -> int | None:
    if raw.entries is None:
        return 0
    if raw.ann is not None:
        return raw.ann
    for e in raw.entries:
        d = _infer_dim(e)
        if d is not None:
            return d + 1
    return None


def _resolve_address(raw: _RawAddr, expected: int | None) -> Address:
    if raw.entries is None:
        if expected not in (None, 0):
            raise ParseError(f"the atom * is a 0-address, expected dim {expected}", raw.line, raw.col)
        return STAR
    dim = raw.ann
    if expected is not None:
        if dim is not None and dim != expected:
            raise ParseError(f"annotated dim {dim} but dim {expected} expected", raw.line, raw.col)
        dim = expected
    if dim is None:
        dim = _infer_dim(raw)
    if dim is None:
        raise ParseError("ambiguous address: annotate its dimension, e.g. []:1", raw.line, raw.col)
    if dim == 0:
        raise ParseError("a bracketed address has dim >= 1", raw.line, raw.col)
    return Address(dim, tuple(_resolve_address(e, dim - 1) for e in raw.entries))


def parse_address(text: str, dim: int | None = None) -> Address:
    p = _Parser(text)
    raw = _parse_raw_address(p)
    p.done()
    return _resolve_address(raw, dim)


def _inferable(a: Address) -> bool:
    return a.dim == 0 or any(_inferable(e) for e in a.entries)


def serialize_address(a: Address, annotate: bool = True) -> str:
    """Bracket form; ``:k`` is appended only when nesting leaves the dim open."""
    if annotate and not _inferable(a):
        return f"{a}:{a.dim}"
    return str(a)


# -- preopetopes -------------------------------------------------------------

def _parse_raw_preopetope(p: _Parser):
    t = p.peek()
    if p.accept("point"):
        return ("lit", POINT)
    if p.accept("arrow"):
        return ("lit", ARROW)
    if p.accept("degen"):
        p.expect("{")
        inner = _parse_raw_preopetope(p)
        p.expect("}")
        return ("degen", inner)
    if p.at("{"):
        p.next()
        if p.at("{"):
            p.next()
            inner = _parse_raw_preopetope(p)
            p.expect("}")
            p.expect("}")
            return ("degen", inner)
        entries = []
        while True:
            addr = _parse_raw_address(p)
            p.expect("<-")
            entries.append((addr, _parse_raw_preopetope(p)))
            if p.accept(";"):
                if p.at("}"):
                    break
                continue
            break
        p.expect("}")
        return ("nodes", entries, t.line, t.col)
    if t.kind == "ident":
        if t.text.isdigit():
            p.next()
            return ("lit", integer(int(t.text)))
        p.next()
        return ("ref", t.text, t.line, t.col)
    raise ParseError(f"expected a preopetope but found {t.text or 'end of input'!r}", t.line, t.col)


def _eval_preopetope(raw, env: dict) -> Preopetope:
    kind = raw[0]
    if kind == "lit":
        return raw[1]
    if kind == "degen":
        return Degenerate(_eval_preopetope(raw[1], env))
    if kind == "ref":
        _, name, line, col = raw
        if name not in env:
            raise ParseError(f"unknown preopetope {name!r}", line, col)
        v = env[name]
        v = getattr(v, "src", v)
        if not isinstance(v, Preopetope):
            raise ParseError(f"{name!r} is not a preopetope", line, col)
        return v
    _, entries, line, col = raw
    vals = [(a, _eval_preopetope(v, env)) for a, v in entries]
    dims = {v.dim for _, v in vals}
    if len(dims) != 1:
        raise ParseError("sources of different dimensions", line, col)
    d = dims.pop()
    pairs = [(_resolve_address(a, d), v) for a, v in vals]
    keys = [k for k, _ in pairs]
    if len(set(keys)) != len(keys):
        raise ParseError("duplicate node address", line, col)
    return Nodes(pairs)


def parse_preopetope(text: str, env: dict | None = None) -> Preopetope:
    """A preopetope literal, optionally preceded by ``let NAME = P`` macros."""
    p = _Parser(text)
    env = dict(env or {})
    while p.at("let"):
        p.next()
        name = p.ident().text
        p.expect("=")
        env[name] = _eval_preopetope(_parse_raw_preopetope(p), env)
    if p.peek().kind == "eof" and env:
        return list(env.values())[-1]
    out = _eval_preopetope(_parse_raw_preopetope(p), env)
    p.done()
    return out


def serialize_preopetope(p: Preopetope) -> str:
    if isinstance(p, EmptyTarget):
        return "empty"
    if p.is_point:
        return "point"
    if isinstance(p, Degenerate):
        return "degen{" + serialize_preopetope(p.inner) + "}"
    return "{" + "; ".join(f"{k} <- {serialize_preopetope(v)}" for k, v in p.entries) + "}"


def preopetope_to_json(p) -> Any:
    if isinstance(p, EmptyTarget):
        return {"empty": True}
    if p.is_point:
        return {"point": True}
    if isinstance(p, Degenerate):
        return {"degen": preopetope_to_json(p.inner)}
    return {"nodes": [[serialize_address(k), preopetope_to_json(v)] for k, v in p.entries]}


def preopetope_from_json(obj) -> Preopetope:
    if "point" in obj:
        return POINT
    if "degen" in obj:
        return Degenerate(preopetope_from_json(obj["degen"]))
    vals = [(k, preopetope_from_json(v)) for k, v in obj["nodes"]]
    return Nodes([(parse_address(k, v.dim), v) for k, v in vals])


# -- named terms and OCMT literals ---------------------------------------------

def _parse_var_ref(p: _Parser) -> tuple[str, int, Token]:
    """``name`` or ``t^k:name``; returns (name, depth, token)."""
    t = p.ident("a variable")
    if t.text == "t" and p.at("^"):
        p.next()
        k = p.ident("a number")
        if not k.text.isdigit():
            raise ParseError("expected a number after '^'", k.line, k.col)
        p.expect(":")
        base = p.ident("a variable")
        return base.text, int(k.text), t
    return t.text, 0, t


def _parse_raw_term(p: _Parser):
    t = p.peek()
    if t.kind == "ident" and t.text.startswith("_") and len(t.text) > 1:
        p.next()
        return ("degen", (t.text[1:], 0, t))
    ref = _parse_var_ref(p)
    args = []
    if p.accept("("):
        if not p.at(")"):
            while True:
                key = _parse_var_ref(p)
                p.expect("<-")
                args.append((key, _parse_raw_term(p)))
                if not p.accept(","):
                    break
        p.expect(")")
    return ("app", ref, args)


def _parse_raw_type(p: _Parser) -> list:
    chain = []
    while not (p.at("0") and not p.at("(", 1)):
        chain.append(_parse_raw_term(p))
        p.expect("~>")
    p.expect("0")
    return chain


def _lookup(ref, scope: dict[tuple[str, int], Var], displays: dict[str, Var]) -> Var:
    name, depth, tok = ref
    v = scope.get((name, depth))
    if v is None and depth == 0:
        v = displays.get(name)
    if v is None:
        raise ParseError(f"unknown variable {name!r}", tok.line, tok.col)
    return v


def _resolve_term(raw, scope, displays):
    if raw[0] == "degen":
        return DegenTerm(_lookup(raw[1], scope, displays))
    _, ref, args = raw
    head = _lookup(ref, scope, displays)
    return Term(head, tuple((_lookup(k, scope, displays), _resolve_term(u, scope, displays))
                            for k, u in args))


def _scope_of(ctx) -> tuple[dict, dict]:
    scope = {(v.name, v.depth): v for v in ctx}
    displays = {v.display: v for v in ctx}
    return scope, displays


def parse_term(text: str, ctx) -> Term:
    """A named term whose variables are looked up in ``ctx``."""
    p = _Parser(text)
    raw = _parse_raw_term(p)
    p.done()
    return _resolve_term(raw, *_scope_of(ctx))


def parse_type(text: str, ctx) -> tuple:
    p = _Parser(text)
    raw = _parse_raw_type(p)
    p.done()
    scope = _scope_of(ctx)
    return tuple(_resolve_term(r, *scope) for r in raw)


def _parse_theory_block(p: _Parser) -> list[list]:
    p.expect("eq")
    p.expect("{")
    groups = []
    while not p.at("}"):
        group = [_parse_var_ref(p)]
        while p.accept("="):
            group.append(_parse_var_ref(p))
        groups.append(group)
        if not p.accept(";"):
            break
    p.expect("}")
    return groups


def _parse_ocmt_body(p: _Parser):
    from .named_sets import OCMT
    p.expect("ocmt")
    p.expect("{")
    decls = []
    while not p.at("}"):
        ref = _parse_var_ref(p)
        p.expect(":")
        decls.append((ref, _parse_raw_type(p)))
        if not p.accept(";"):
            break
    p.expect("}")
    groups = _parse_theory_block(p) if p.at("eq") else []
    scope: dict = {}
    for (name, depth, tok), chain in decls:
        if (name, depth) in scope:
            raise ParseError(f"{name!r} is declared twice", tok.line, tok.col)
        scope[(name, depth)] = Var(name, len(chain), depth)
    displays = {v.display: v for v in scope.values()}
    ctx = {scope[(n, d)]: tuple(_resolve_term(r, scope, displays) for r in chain)
           for (n, d, _), chain in decls}
    pairs = []
    for group in groups:
        vs = [_lookup(r, scope, displays) for r in group]
        pairs.extend((vs[0], w) for w in vs[1:])
    return OCMT(EqTheory(pairs), ctx)


def parse_ocmt(text: str):
    """``ocmt { a : 0; f : a ~> 0; ... } eq { b = t^1:f; ... }``."""
    from .named_sets import close
    p = _Parser(text)
    o = _parse_ocmt_body(p)
    p.done()
    return type(o)(close(o.theory, o.ctx), o.ctx)


def serialize_theory(theory: EqTheory, variables=None) -> str:
    vs = variables if variables is not None else {x for pair in theory.pairs for x in pair}
    groups = [c for c in theory.classes(vs) if len(c) > 1]
    body = "; ".join(" = ".join(_var_text(v) for v in g) for g in groups)
    return "eq {" + (" " + body + " " if body else "") + "}"


def _var_text(v: Var) -> str:
    return v.name if v.depth == 0 else f"t^{v.depth}:{v.name}"


def _term_text(t) -> str:
    if isinstance(t, DegenTerm):
        return "_" + _var_text(t.var)
    if not t.args:
        return _var_text(t.head)
    inner = ", ".join(f"{_var_text(k)} <- {_term_text(v)}" for k, v in t.args)
    return f"{_var_text(t.head)}({inner})"


def _type_text(chain) -> str:
    return " ~> ".join([_term_text(t) for t in chain] + ["0"])


def _ctx_text(ctx) -> str:
    items = sorted(ctx.items(), key=lambda kv: (kv[0].dim, kv[0].depth, kv[0].name))
    return "; ".join(f"{_var_text(v)} : {_type_text(c)}" for v, c in items)


def serialize_ocmt(o) -> str:
    return f"ocmt {{ {_ctx_text(o.ctx)} }} {serialize_theory(o.theory, o.ctx)}"


def serialize_named_sequent(s: NamedSequent) -> str:
    return f"{serialize_theory(s.theory, s.ctx)} |> {_ctx_text(s.ctx)} |- {_term_text(s.term)} : {_type_text(s.type)}"


def serialize_unnamed_sequent(s) -> str:
    ctx = ", ".join(f"{serialize_address(a)}/{serialize_address(b)}" for a, b in s.ctx.pairs)
    return f"{{{ctx}}} |- {serialize_preopetope(s.src)} -> {serialize_preopetope(s.tgt)}"


def serialize_ucontext(ctx) -> str:
    lines = []
    for c in ctx.cells:
        if c.shape.is_point:
            lines.append(f"{c.name} : point")
            continue
        srcs = "; ".join(f"{serialize_address(a, annotate=False)} <- {x}" for a, x in c.srcs)
        lines.append(f"{c.name} : {{{srcs}}} -> {c.tgt}    # shape {serialize_preopetope(c.shape)}")
    return "\n".join(lines)


# -- JSON of derived objects --------------------------------------------------

def unnamed_sequent_to_json(s) -> dict:
    return {"ctx": [[serialize_address(a), serialize_address(b)] for a, b in s.ctx.pairs],
            "src": preopetope_to_json(s.src), "tgt": preopetope_to_json(s.tgt)}


def _theory_json(theory, variables) -> list:
    return [[_var_text(v) for v in c] for c in theory.classes(variables) if len(c) > 1]


def named_sequent_to_json(s: NamedSequent) -> dict:
    return {"theory": _theory_json(s.theory, s.ctx),
            "ctx": [[_var_text(v), v.dim, _type_text(c)] for v, c in
                    sorted(s.ctx.items(), key=lambda kv: (kv[0].dim, kv[0].depth, kv[0].name))],
            "term": _term_text(s.term), "type": _type_text(s.type)}


def ocmt_to_json(o) -> dict:
    return {"theory": _theory_json(o.theory, o.ctx),
            "ctx": [[_var_text(v), v.dim, _type_text(c)] for v, c in
                    sorted(o.ctx.items(), key=lambda kv: (kv[0].dim, kv[0].depth, kv[0].name))]}


def ucontext_to_json(ctx) -> dict:
    return {"cells": [{"name": c.name, "shape": preopetope_to_json(c.shape),
                       "sources": [[serialize_address(a), x] for a, x in c.srcs], "target": c.tgt}
                      for c in ctx.cells]}


def to_json(obj) -> Any:
    from .cells import Complex
    from .named_sets import OCMT
    from .unnamed import UnnamedSequent
    from .unnamed_sets import UContext
    if isinstance(obj, (Preopetope, EmptyTarget)):
        return preopetope_to_json(obj)
    if isinstance(obj, Address):
        return serialize_address(obj)
    if isinstance(obj, UnnamedSequent):
        return unnamed_sequent_to_json(obj)
    if isinstance(obj, NamedSequent):
        return named_sequent_to_json(obj)
    if isinstance(obj, OCMT):
        return ocmt_to_json(obj)
    if isinstance(obj, UContext):
        return ucontext_to_json(obj)
    if isinstance(obj, Complex):
        return obj.to_json()
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_json(obj), indent=2, sort_keys=True, ensure_ascii=False)


def render(obj) -> str:
    from .cells import Complex
    from .unnamed_sets import UContext
    if isinstance(obj, Address):
        return serialize_address(obj)
    if isinstance(obj, (Preopetope, EmptyTarget)):
        return serialize_preopetope(obj)
    if isinstance(obj, Complex):
        return dumps(obj)
    return str(obj)


# -- scripts -----------------------------------------------------------------

@dataclass
class _Name:
    text: str
    line: int
    col: int


@dataclass
class _Call:
    fn: str
    args: list
    line: int
    col: int


@dataclass
class _Lit:
    raw: Any
    kind: str  # "addr" or "pre"
    line: int
    col: int


@dataclass
class Script:
    dialect: str
    statements: list


def split_header(text: str) -> tuple[str | None, str]:
    """Read a leading ``#dialect NAME`` line, if present."""
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#dialect"):
            parts = s.split()
            return (parts[1] if len(parts) > 1 else None), text
        if s.startswith("#"):
            continue
        break
    return None, text


_PREFIX_FORMS = {"point", "mpoint"}


def _parse_expr(p: _Parser):
    t = p.peek()
    if p.at("{") or (p.at("degen") and p.at("{", 1)):
        return _Lit(_parse_raw_preopetope(p), "pre", t.line, t.col)
    if p.at("[") or p.at("*"):
        return _Lit(_parse_raw_address(p), "addr", t.line, t.col)
    if p.at("ocmt") and p.at("{", 1):
        from .named_sets import OCMT, close
        o = _parse_ocmt_body(p)
        return _Lit(OCMT(close(o.theory, o.ctx), o.ctx), "ocmt", t.line, t.col)
    if t.kind == "str":
        p.next()
        return _Name(t.text, t.line, t.col)
    if t.kind != "ident":
        raise ParseError(f"expected an expression but found {t.text or 'end of input'!r}", t.line, t.col)
    p.next()
    if p.accept("("):
        args = []
        if not p.at(")"):
            while True:
                args.append(_parse_expr(p))
                if not p.accept(","):
                    break
        p.expect(")")
        return _Call(t.text, args, t.line, t.col)
    nxt = p.peek()
    if t.text in _PREFIX_FORMS and nxt.kind in ("ident", "str") and nxt.line == t.line and nxt.text != "let":
        p.next()
        return _Call(t.text, [_Name(nxt.text, nxt.line, nxt.col)], t.line, t.col)
    return _Name(t.text, t.line, t.col)


def _parse_assignment_block(p: _Parser) -> list:
    p.expect("{")
    out = []
    while not p.at("}"):
        addr = _parse_raw_address(p)
        p.expect("<-")
        out.append((addr, p.ident("a cell name")))
        if not p.accept(";"):
            break
    p.expect("}")
    return out


def parse_script(dialect: str | None, text: str) -> Script:
    header, _ = split_header(text)
    dialect = dialect or header
    if dialect not in DIALECTS:
        raise ParseError(f"unknown dialect {dialect!r}; expected one of {', '.join(DIALECTS)}", 1, 1)
    p = _Parser(text)
    stmts = []
    while p.peek().kind != "eof":
        t = p.peek()
        if p.accept("let"):
            name = p.ident()
            p.expect("=")
            stmts.append(("let", name.text, _parse_expr(p), t))
            continue
        if dialect == "optset?":
            word = p.ident("a statement").text
            if word == "point":
                stmts.append(("point", p.ident(), t))
            elif word == "degen":
                stmts.append(("degen", p.ident(), t))
            elif word == "graft":
                shape = _parse_expr(p)
                block = _parse_assignment_block(p)
                stmts.append(("graft", shape, block, t))
            elif word == "shift":
                stmts.append(("shift", p.ident(), p.ident(), t))
            else:
                raise ParseError(f"unknown statement {word!r}", t.line, t.col)
            continue
        stmts.append(("expr", _parse_expr(p), t))
    return Script(dialect, stmts)


class _Evaluator:
    def __init__(self, dialect: str):
        self.dialect = dialect
        self.env: dict[str, Any] = {}
        self.builtins = _builtins(dialect)

    def name_of(self, node) -> str:
        if isinstance(node, _Name):
            return node.text
        raise ParseError("expected a name", node.line, node.col)

    def value(self, node):
        if isinstance(node, _Lit):
            if node.kind in ("addr", "ocmt"):
                return node.raw
            return _eval_preopetope(node.raw, self.env)
        if isinstance(node, _Name):
            if node.text in self.env:
                return self.env[node.text]
            if node.text.isdigit():
                return integer(int(node.text))
            if node.text in self.builtins:
                return self.call(_Call(node.text, [], node.line, node.col))
            raise ParseError(f"unbound name {node.text!r}", node.line, node.col)
        return self.call(node)

    def call(self, node: _Call):
        spec = self.builtins.get(node.fn)
        if spec is None:
            raise ParseError(f"unknown function {node.fn!r} in dialect {self.dialect}", node.line, node.col)
        kinds, fn = spec
        variadic = kinds.endswith("*")
        kinds = kinds.rstrip("*")
        if (len(node.args) != len(kinds)) if not variadic else (len(node.args) < len(kinds)):
            raise ParseError(f"{node.fn} expects {len(kinds)} argument(s)", node.line, node.col)
        args = []
        for i, a in enumerate(node.args):
            kind = kinds[i] if i < len(kinds) else kinds[-1]
            if kind == "N":
                args.append(self.name_of(a))
            elif kind == "A":
                if not isinstance(a, _Lit) or a.kind != "addr":
                    raise ParseError("expected an address", node.line, node.col)
                args.append(a.raw)
            else:
                args.append(self.value(a))
        try:
            return fn(*args)
        except OpetopeError as e:
            if isinstance(e, (ParseError, ScriptError)):
                raise
            raise ScriptError(f"{node.fn}: {e}", node.line, node.col) from e

    def run(self, script: Script):
        from .unnamed_sets import UContext, u_degen, u_graft, u_point, u_shift
        result = None
        ctx = UContext()
        for st in script.statements:
            kind = st[0]
            tok = st[-1]
            try:
                if kind == "let":
                    self.env[st[1]] = result = self.value(st[2])
                elif kind == "expr":
                    result = self.value(st[1])
                elif kind == "point":
                    ctx = result = u_point(ctx, st[1].text)
                elif kind == "degen":
                    self.pending = u_degen(ctx, st[1].text)
                elif kind == "graft":
                    shape = self.value(st[1])
                    shape = getattr(shape, "src", shape)
                    if not isinstance(shape, Preopetope):
                        raise ScriptError("graft needs a shape", tok.line, tok.col)
                    block = {_resolve_address(a, shape.dim - 1): n.text for a, n in st[2]}
                    self.pending = u_graft(ctx, shape, block)
                elif kind == "shift":
                    pd = getattr(self, "pending", None)
                    if pd is None:
                        raise ScriptError("shift without a pasting diagram", tok.line, tok.col)
                    ctx = result = u_shift(ctx, pd, st[1].text, st[2].text)
                    self.pending = None
            except (ParseError, ScriptError):
                raise
            except OpetopeError as e:
                raise ScriptError(str(e), tok.line, tok.col) from e
        return result


def run_script(dialect: str | None, text: str):
    """Parse and evaluate; the value of the last statement is returned."""
    script = parse_script(dialect, text)
    return _Evaluator(script.dialect).run(script)


def load_script(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return run_script(None, text)


def _as_sequent(v):
    from .unnamed import derive
    if isinstance(v, Preopetope):
        return derive(v)
    return v


def _builtins(dialect: str) -> dict[str, tuple[str, Callable]]:
    from . import named_derivation as nd
    from . import named_sets as ns
    from . import unnamed as ud

    def graft_q(s, raw, q):
        s, q = _as_sequent(s), _as_sequent(q)
        return ud.rule_graft(s, _resolve_address(raw, s.src.dim - 1), q)

    unnamed = {
        "point": ("", ud.rule_point),
        "arrow": ("", lambda: ud.rule_shift(ud.rule_point())),
        "degen": ("E", lambda s: ud.rule_degen(_as_sequent(s))),
        "shift": ("E", lambda s: ud.rule_shift(_as_sequent(s))),
        "graft": ("EAE", graft_q),
        "integer": ("N", lambda n: ud.derive(integer(int(n)))),
        "derive": ("E", _as_sequent),
    }
    named = {
        "point": ("N", nd.n_point),
        "degen": ("E", nd.n_degen),
        "shift": ("EN", nd.n_shift),
        "graft": ("ENE", nd.n_graft),
        "degenshift": ("EN", nd.n_degen_shift),
    }
    sets = {
        "repr": ("E", ns.os_repr),
        "zero": ("", ns.os_zero),
        "sum": ("EE", ns.os_sum),
        "usum": ("E*", ns.os_usum),
        "glue": ("ENN", ns.os_glue),
    }
    mixed = {
        "mpoint": ("N", ns.m_point),
        "mpd": ("EN", ns.m_pd),
        "mdegen": ("EN", ns.m_degen),
        "mgraft": ("ENE", ns.m_graft),
        "mshift": ("EN", ns.m_shift),
    }
    if dialect in ("opt?", "optset?"):
        return unnamed
    if dialect == "opt!":
        return named
    if dialect == "optset!":
        return {**named, **sets}
    out = {**sets, **mixed}
    out.pop("repr")
    for short in ("point", "pd", "degen", "graft", "shift"):
        out[short] = out["m" + short]
    return out
