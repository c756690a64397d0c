"""Rules for named sequents: point, degen, shift, graft and degen-shift."""
from __future__ import annotations

from .errors import RuleViolation
from .named import (
    DegenTerm, EqTheory, NamedSequent, Term, Var, chains_equal, graft_notation,
    iterated_source_vars, member, named_substitute, render_type, rename_sequent,
    source_of, term_vars, terms_equal,
)


def _fresh_check(ctx, name: str) -> None:
    if any(v.name == name for v in ctx):
        raise RuleViolation(f"name {name!r} is already used")


def n_point(name: str) -> NamedSequent:
    a = Var(name, 0)
    return NamedSequent(EqTheory(), {a: ()}, Term(a), ())


def n_degen(s: NamedSequent) -> NamedSequent:
    x = s.subject
    return NamedSequent(s.theory, s.ctx, DegenTerm(x), (Term(x),) + tuple(s.type))


def n_shift(s: NamedSequent, name: str) -> NamedSequent:
    _fresh_check(s.ctx, name)
    x = Var(name, s.term.dim + 1)
    chain = (s.term,) + tuple(s.type)
    ctx = dict(s.ctx)
    ctx[x] = chain
    return NamedSequent(s.theory, ctx, Term(x), chain)


def n_degen_shift(s: NamedSequent, name: str) -> NamedSequent:
    return n_shift(n_degen(s), name)


def _resolve(ctx, a) -> Var:
    if isinstance(a, Var):
        if a not in ctx:
            raise RuleViolation(f"untyped variable {a}")
        return a
    hits = [v for v in ctx if v.display == a]
    if len(hits) != 1:
        raise RuleViolation(f"unknown variable {a!r}" if not hits else f"ambiguous variable {a!r}")
    return hits[0]


def _rename_apart(x: NamedSequent, taken: set[str], keep: set[Var]) -> NamedSequent:
    mapping = {}
    used = set(taken) | {v.name for v in x.ctx}
    for v in sorted(x.ctx):
        if v.name in taken and v not in keep:
            k = 1
            while f"{v.name}_{k}" in used:
                k += 1
            new = f"{v.name}_{k}"
            used.add(new)
            mapping[v] = Var(new, v.dim, v.depth)
    return rename_sequent(x, mapping) if mapping else x


def n_graft(s: NamedSequent, a, x: NamedSequent, strict: bool = True) -> NamedSequent:
    """Graft the variable-subject sequent x on s at the source variable a.

    With ``strict`` the two contexts may share only a and its iterated
    sources; other clashes in x are renamed apart.  Without it (grafting
    inside one opetopic set) the contexts are merged as they are.
    """
    t = s.term
    if not isinstance(t, Term):
        raise RuleViolation("cannot graft on a degenerate pasting diagram")
    a = _resolve(s.ctx, a)
    xv = x.subject
    if xv.dim != t.dim:
        raise RuleViolation(f"dimension mismatch: grafting a {xv.dim}-cell on a {t.dim}-term")
    if strict:
        keep = {a} | iterated_source_vars(s.ctx, a)
        x = _rename_apart(x, {v.name for v in s.ctx}, keep)
        xv = x.subject
    theory = s.theory.union(x.theory)
    ctx = dict(s.ctx)
    for v, chain in x.ctx.items():
        if v in ctx:
            if not chains_equal(ctx[v], chain, theory):
                raise RuleViolation(
                    f"context incompatibility on {v}: {render_type(ctx[v])} vs {render_type(chain)}")
        else:
            clash = [w for w in ctx if w.name == v.name and w.depth == v.depth]
            if clash:
                raise RuleViolation(f"context incompatibility: {v} clashes with {clash[0]}")
            ctx[v] = chain
    s1 = s.type[0] if s.type else None
    if not member(a, term_vars(s1), theory):
        raise RuleViolation(f"{a} is not in the source of {t}")
    sa = source_of(ctx, a)
    ssx = x.type[1] if len(x.type) > 1 else None
    if not terms_equal(sa, ssx, theory):
        raise RuleViolation(f"inner edge mismatch: s {a} = {sa} but s s {xv} = {ssx}")
    new_term = graft_notation(t, a, xv, ctx, theory)
    new_s1, theory = named_substitute(s1, x.type[0], a, theory, ctx)
    return NamedSequent(theory, ctx, new_term, (new_s1,) + tuple(s.type[1:]))
