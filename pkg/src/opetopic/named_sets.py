"""Opetopic contexts modulo theory (OCMTs): repr/zero/sum/glue, the mixed rules,
materialization into cell complexes, and isomorphism."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .cells import Cell, Complex, isomorphic
from .coding import code_var
from .errors import RuleViolation
from .named import (
    DegenTerm, EqTheory, NamedSequent, Term, Var, node_positions, render_type,
    source_of, terms_equal,
)
from .named_derivation import n_graft


@dataclass(frozen=True)
class OCMT:
    theory: EqTheory
    ctx: Mapping[Var, tuple]

    def lookup(self, name) -> Var:
        """Resolve a variable by its displayed name (``tf`` for the target of f)."""
        if isinstance(name, Var):
            if name not in self.ctx:
                raise RuleViolation(f"unknown variable {name}")
            return name
        hits = [v for v in self.ctx if v.display == name]
        if not hits:
            raise RuleViolation(f"unknown variable {name!r}")
        if len(hits) > 1:
            raise RuleViolation(f"ambiguous variable {name!r}")
        return hits[0]

    def __str__(self):
        from .textio import serialize_ocmt
        return serialize_ocmt(self)


def close(theory: EqTheory, ctx: Mapping[Var, tuple]) -> EqTheory:
    """Close a theory under targets: a = b implies t a = t b when both exist."""
    while True:
        added = False
        for cls in theory.classes(ctx):
            first = cls[0]
            for other in cls[1:]:
                k = 1
                while k <= min(first.dim, other.dim):
                    x, y = first.tag(k), other.tag(k)
                    if x in ctx and y in ctx and not theory.equal(x, y):
                        theory = theory.add(x, y)
                        added = True
                    k += 1
        if not added:
            return theory


def _tag_var(v: Var, k: int) -> Var:
    return v if k == 0 else v.tag(k)


def _arg_equations(t) -> list[tuple[Var, Var]]:
    """``t a = b`` for every ``b <- a(...)`` occurring in t."""
    out = []
    if isinstance(t, Term):
        for b, u in t.args:
            out.append((u.head.tag(), b))
            out.extend(_arg_equations(u))
    return out


def os_repr(s: NamedSequent) -> OCMT:
    s.subject
    ctx = dict(s.ctx)
    for a, chain in s.ctx.items():
        for k in range(1, len(chain) + 1):
            ctx.setdefault(a.tag(k), tuple(chain[k:]))
    eqs = []
    for chain in s.ctx.values():
        for t in chain:
            eqs.extend(_arg_equations(t))
    for a, chain in ctx.items():
        if a.dim >= 2 and chain:
            src = chain[0]
            if isinstance(src, DegenTerm):
                eqs.append((a.tag(2), src.var))
            elif isinstance(src, Term):
                eqs.append((a.tag(2), src.head.tag()))
    theory = s.theory
    for x, y in eqs:
        theory = theory.add(x, y)
    return OCMT(close(theory, ctx), ctx)


def os_zero() -> OCMT:
    return OCMT(EqTheory(), {})


def _names(o: OCMT) -> set[str]:
    return {v.name for v in o.ctx}


def os_sum(a: OCMT, b: OCMT) -> OCMT:
    clash = _names(a) & _names(b)
    if clash:
        raise RuleViolation(f"sum of overlapping sets: {', '.join(sorted(clash))}")
    ctx = dict(a.ctx)
    ctx.update(b.ctx)
    return OCMT(a.theory.union(b.theory), ctx)


def os_usum(*parts: OCMT) -> OCMT:
    out = os_zero()
    for p in parts:
        out = os_sum(out, p)
    return out


def os_glue(o: OCMT, a, b) -> OCMT:
    a, b = o.lookup(a), o.lookup(b)
    if a.dim != b.dim:
        raise RuleViolation(f"cannot glue {a} and {b} of different dims")
    if not terms_equal(source_of(o.ctx, a), source_of(o.ctx, b), o.theory):
        raise RuleViolation(f"cannot glue {a} and {b}: sources differ")
    if a.dim > 0:
        ta, tb = a.tag(), b.tag()
        if ta not in o.ctx or tb not in o.ctx or not o.theory.equal(ta, tb):
            raise RuleViolation(f"cannot glue {a} and {b}: targets differ")
    return OCMT(close(o.theory.add(a, b), o.ctx), o.ctx)


# -- the mixed system --------------------------------------------------------

def m_point(name: str) -> OCMT:
    return OCMT(EqTheory(), {Var(name, 0): ()})


def m_pd(o: OCMT, x) -> NamedSequent:
    x = o.lookup(x)
    return NamedSequent(o.theory, dict(o.ctx), Term(x), tuple(o.ctx[x]))


def m_degen(o: OCMT, x) -> NamedSequent:
    x = o.lookup(x)
    return NamedSequent(o.theory, dict(o.ctx), DegenTerm(x), (Term(x),) + tuple(o.ctx[x]))


def m_graft(s: NamedSequent, a, x: NamedSequent) -> NamedSequent:
    return n_graft(s, a, x, strict=False)


def m_shift(s: NamedSequent, name: str) -> OCMT:
    if any(v.name == name for v in s.ctx):
        raise RuleViolation(f"name {name!r} is already used")
    t = s.term
    n = t.dim
    x = Var(name, n + 1)
    chain = (t,) + tuple(s.type)
    ctx = dict(s.ctx)
    ctx[x] = chain
    for i in range(1, n + 2):
        ctx[x.tag(i)] = chain[i:]
    theory = s.theory
    if isinstance(t, DegenTerm):
        for i in range(0, n):
            theory = theory.add(x.tag(i + 2), _tag_var(t.var, i))
    else:
        if n >= 1:
            theory = theory.add(x.tag(2), t.head.tag())
        for p, q in _arg_equations(t):
            theory = theory.add(p, q)
    return OCMT(close(theory, ctx), ctx)


# -- materialization ---------------------------------------------------------

def os_materialize(o: OCMT) -> Complex:
    classes = o.theory.classes(o.ctx)
    rep_of = {}
    reps = []
    for cls in classes:
        rep = min(cls, key=lambda v: (v.depth, v.name))
        reps.append((rep, cls))
        for v in cls:
            rep_of[v] = rep
    names = {rep: rep.display for rep, _ in reps}

    def cell_name(v: Var) -> str:
        r = rep_of.get(o.theory.find(v)) or rep_of.get(v)
        if r is None:
            raise RuleViolation(f"untyped variable {v}")
        return names[r]

    cells = []
    for rep, cls in reps:
        shape = code_var(rep, o.ctx, o.theory)
        sources = ()
        target = None
        if rep.dim > 0:
            src = source_of(o.ctx, rep)
            sources = tuple((a, cell_name(v)) for a, v in node_positions(src, o.ctx, o.theory))
            tags = [v.tag() for v in cls if v.tag() in o.ctx]
            target = cell_name(tags[0]) if tags else None
        cells.append(Cell(names[rep], shape, sources, target))
    return Complex(cells)


def ocmt_isomorphic(a: OCMT, b: OCMT) -> bool:
    return isomorphic(os_materialize(a), os_materialize(b))
