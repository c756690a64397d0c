"""Translations between named sequents and preopetopes."""
from __future__ import annotations

from dataclasses import dataclass, field

from .address import Address, join, wrap
from .errors import NotAnOpetope, RuleViolation
from .named import (
    DegenTerm, NamedSequent, Term, Var, _find_unique, leaf_positions, node_positions,
    rename_sequent, source_of,
)
from .named_derivation import n_degen_shift, n_graft, n_point, n_shift
from .preopetope import POINT, Degenerate, Nodes, Preopetope, corolla
from .unnamed import explain, target_of


def code_var(v: Var, ctx, theory=None) -> Preopetope:
    """The shape of a variable: the coding of its source, or the point."""
    if v.dim == 0:
        return POINT
    return code_term(source_of(ctx, v), ctx, theory)


def code_term(t, ctx, theory=None) -> Preopetope:
    """The (n+1)-preopetope of the pasting scheme described by an n-term."""
    if isinstance(t, DegenTerm):
        return Degenerate(code_var(t.var, ctx, theory))
    entries = dict(corolla(code_var(t.head, ctx, theory)).entries)
    if t.args:
        src = node_positions(source_of(ctx, t.head), ctx, theory)
        for y, u in t.args:
            pre = wrap(_find_unique(src, y, theory))
            for k, v in code_term(u, ctx, theory).entries:
                entries[join(pre, k)] = v
    return Nodes(entries)


def to_preopetope(s: NamedSequent) -> Preopetope:
    if isinstance(s.term, Term) and s.term.is_var:
        return code_var(s.term.head, s.ctx, s.theory)
    return code_term(s.term, s.ctx, s.theory)


class Namer:
    """Deterministic fresh names: prefix, dimension, counter."""

    def __init__(self, prefix: str = "v"):
        self.prefix = prefix
        self.counts: dict[int, int] = {}

    def fresh(self, dim: int) -> str:
        k = self.counts.get(dim, 0)
        self.counts[dim] = k + 1
        return f"{self.prefix}{dim}_{k}"


@dataclass
class Proof:
    """A derivation tree in the named system, replayable as a script."""
    rule: str
    name: str | None = None
    premises: tuple = ()
    at: str | None = None

    def rename(self, mapping: dict[str, str]) -> "Proof":
        return Proof(self.rule, mapping.get(self.name, self.name) if self.name else None,
                     tuple(p.rename(mapping) for p in self.premises),
                     mapping.get(self.at, self.at) if self.at else None)

    def script(self) -> str:
        if self.rule == "point":
            return f"point({self.name})"
        if self.rule in ("shift", "degenshift"):
            return f"{self.rule}({self.premises[0].script()}, {self.name})"
        if self.rule == "degen":
            return f"degen({self.premises[0].script()})"
        left, right = self.premises
        return f"graft({left.script()}, {self.at}, {right.script()})"


def _match(src, dst, ctx_src, ctx_dst, mapping: dict[Var, Var], theory_src, theory_dst) -> None:
    """Extend ``mapping`` so that the term src renames onto dst, types included."""
    if src is None or dst is None:
        if src is not dst:
            raise RuleViolation("cannot match a term against the empty term")
        return
    pending = []

    def bind(v: Var, w: Var):
        if v.dim != w.dim:
            raise RuleViolation(f"cannot match {v} with {w}")
        if v in mapping:
            if mapping[v] != w:
                raise RuleViolation(f"inconsistent match for {v}")
            return
        mapping[v] = w
        pending.append((v, w))

    def walk(a, b):
        if isinstance(a, DegenTerm) or isinstance(b, DegenTerm):
            if not (isinstance(a, DegenTerm) and isinstance(b, DegenTerm)):
                raise RuleViolation("degenerate and non-degenerate terms do not match")
            bind(a.var, b.var)
            return
        bind(a.head, b.head)
        if len(a.args) != len(b.args):
            raise RuleViolation(f"{a} and {b} have different shapes")
        if not a.args:
            return
        sa = node_positions(source_of(ctx_src, a.head), ctx_src, theory_src)
        sb = node_positions(source_of(ctx_dst, b.head), ctx_dst, theory_dst)
        by_addr = {_find_unique(sb, k, theory_dst): (k, u) for k, u in b.args}
        for k, u in a.args:
            addr = _find_unique(sa, k, theory_src)
            if addr not in by_addr:
                raise RuleViolation(f"{a} and {b} have different shapes")
            k2, u2 = by_addr[addr]
            bind(k, k2)
            walk(u, u2)

    walk(src, dst)
    while pending:
        v, w = pending.pop()
        cv, cw = ctx_src.get(v, ()), ctx_dst.get(w, ())
        if len(cv) != len(cw):
            raise RuleViolation(f"{v} and {w} have types of different lengths")
        for a, b in zip(cv, cw):
            walk(a, b)


def _to_named(p: Preopetope, namer: Namer) -> tuple[NamedSequent, Proof]:
    if p.is_point:
        name = namer.fresh(0)
        return n_point(name), Proof("point", name)
    if isinstance(p, Degenerate):
        sub, proof = _to_named(p.inner, namer)
        name = namer.fresh(p.dim)
        return n_degen_shift(sub, name), Proof("degenshift", name, (proof,))
    root_key, root_val = p.entries[0]
    cur, proof = _to_named(root_val, namer)
    for key, val in p.entries[1:]:
        sub, sproof = _to_named(val, namer)
        leaves = dict(leaf_positions(cur.term, cur.ctx, cur.theory))
        if key not in leaves:
            raise NotAnOpetope(f"{key} is not a leaf")
        a = leaves[key]
        mapping: dict[Var, Var] = {}
        if len(sub.type) > 1:
            _match(sub.type[1], source_of(cur.ctx, a), sub.ctx, cur.ctx, mapping,
                   sub.theory, cur.theory)
        sub = rename_sequent(sub, mapping)
        sproof = sproof.rename({v.name: w.name for v, w in mapping.items()})
        cur = n_graft(cur, a, sub)
        proof = Proof("graft", None, (proof, sproof), a.name)
    name = namer.fresh(p.dim)
    return n_shift(cur, name), Proof("shift", name, (proof,))


def to_named(p: Preopetope, namer: Namer | None = None) -> NamedSequent:
    return to_named_with_proof(p, namer)[0]


def to_named_with_proof(p: Preopetope, namer: Namer | None = None) -> tuple[NamedSequent, Proof]:
    why = explain(p)
    if why is not None:
        raise NotAnOpetope(why)
    return _to_named(p, namer or Namer())


def target_consistency(s: NamedSequent) -> bool:
    """The second source codes to the target of the coding."""
    x = s.subject
    chain = s.ctx[x]
    if len(chain) < 2:
        raise RuleViolation("needs a variable of dim >= 2")
    return code_term(chain[1], s.ctx, s.theory) == target_of(to_preopetope(s))[0]


def readdressing_holds(s: NamedSequent) -> bool:
    """Locating a source variable in r or in s r agree through the coding bijection."""
    if isinstance(s.term, Term) and s.term.is_var:
        chain = s.ctx[s.term.head]
        if len(chain) < 2:
            return True
        r, sr = chain[0], chain[1]
    else:
        if not s.type or s.term.dim == 0:
            return True
        r, sr = s.term, s.type[0]
    _, bij = target_of(code_term(r, s.ctx, s.theory))
    located = leaf_positions(r, s.ctx, s.theory)
    if {leaf for leaf, _ in located} != set(bij.keys()):
        return False
    nodes_of_sr = node_positions(sr, s.ctx, s.theory)
    return all(bij[leaf] == _find_unique(nodes_of_sr, b, s.theory) for leaf, b in located)
