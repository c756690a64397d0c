"""The named calculus: variables, terms, types, theories and sequents.

Terms are ``Term(head, args)`` (a bare variable when ``args`` is empty) or
``DegenTerm(var)``.  Every operation that may extend the equational theory
returns the new theory alongside its result.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .address import Address, empty, join, wrap
from .errors import DimensionError, RuleViolation


@dataclass(frozen=True, order=True)
class Var:
    name: str
    dim: int
    depth: int = 0

    def tag(self, k: int = 1) -> "Var":
        """The iterated target ``t^k`` of this variable, as a variable of its own."""
        if k > self.dim:
            raise DimensionError(f"t^{k} of a {self.dim}-variable does not exist")
        return Var(self.name, self.dim - k, self.depth + k)

    @property
    def display(self) -> str:
        return "t" * self.depth + self.name

    def __str__(self):
        return self.display


class NamedTerm:
    __slots__ = ()
    dim: int


@dataclass(frozen=True)
class Term(NamedTerm):
    head: Var
    args: tuple[tuple[Var, "Term"], ...] = ()

    def __post_init__(self):
        args = tuple(sorted(self.args, key=lambda kv: kv[0]))
        keys = [k for k, _ in args]
        if len(set(keys)) != len(keys):
            raise RuleViolation(f"repeated argument key in {self.head}(...)")
        for k, v in args:
            if not isinstance(v, Term):
                raise RuleViolation("arguments must be non-degenerate terms")
            if k.dim != self.head.dim - 1 or v.dim != self.head.dim:
                raise DimensionError(f"argument {k} <- ... does not fit under {self.head}")
        object.__setattr__(self, "args", args)

    @property
    def dim(self) -> int:
        return self.head.dim

    @property
    def is_var(self) -> bool:
        return not self.args

    def __str__(self):
        if not self.args:
            return self.head.display
        inner = ", ".join(f"{k} <- {v}" for k, v in self.args)
        return f"{self.head}({inner})"


@dataclass(frozen=True)
class DegenTerm(NamedTerm):
    var: Var

    @property
    def dim(self) -> int:
        return self.var.dim + 1

    def __str__(self):
        return "_" + self.var.display


def var(v: Var) -> Term:
    return Term(v)


Type = tuple  # a chain s1 ~> s2 ~> ... ~> sn, as a tuple of terms


def render_type(chain: tuple) -> str:
    return " ~> ".join([str(t) for t in chain] + ["0"])


class EqTheory:
    """Generated equivalence on variables, answered by union-find."""

    __slots__ = ("pairs", "_rep")

    def __init__(self, pairs: Iterable[tuple[Var, Var]] = ()):
        norm = set()
        for a, b in pairs:
            if a == b:
                continue
            if a.dim != b.dim:
                raise DimensionError(f"cannot equate {a} and {b} of different dims")
            norm.add((a, b) if a < b else (b, a))
        self.pairs = frozenset(norm)
        self._rep = None

    def _build(self):
        parent: dict[Var, Var] = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for a, b in sorted(self.pairs):
            ra, rb = find(a), find(b)
            if ra != rb:
                lo, hi = (ra, rb) if ra < rb else (rb, ra)
                parent[hi] = lo
        self._rep = {x: find(x) for x in parent}

    def find(self, v: Var) -> Var:
        if self._rep is None:
            self._build()
        return self._rep.get(v, v)

    def equal(self, a: Var, b: Var) -> bool:
        return a == b or self.find(a) == self.find(b)

    def add(self, a: Var, b: Var) -> "EqTheory":
        if self.equal(a, b):
            return self
        return EqTheory(self.pairs | {(a, b)})

    def union(self, other: "EqTheory") -> "EqTheory":
        if not other.pairs:
            return self
        return EqTheory(self.pairs | other.pairs)

    def rename(self, mapping: Mapping[Var, Var]) -> "EqTheory":
        return EqTheory((mapping.get(a, a), mapping.get(b, b)) for a, b in self.pairs)

    def classes(self, variables: Iterable[Var]) -> list[list[Var]]:
        groups: dict[Var, list[Var]] = {}
        for v in sorted(set(variables)):
            groups.setdefault(self.find(v), []).append(v)
        return list(groups.values())

    def __eq__(self, other):
        return isinstance(other, EqTheory) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return "eq {" + "; ".join(f"{a} = {b}" for a, b in sorted(self.pairs)) + "}"


@dataclass(frozen=True)
class NamedSequent:
    theory: EqTheory
    ctx: Mapping[Var, tuple]
    term: NamedTerm
    type: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.term.dim

    @property
    def subject(self) -> Var:
        """The variable of a variable-subject sequent."""
        if isinstance(self.term, Term) and self.term.is_var:
            return self.term.head
        raise RuleViolation(f"{self.term} is not a variable")

    def __str__(self):
        from .textio import serialize_named_sequent
        return serialize_named_sequent(self)


# -- basic term utilities ---------------------------------------------------

def rename_term(t, mapping: Mapping[Var, Var]):
    if t is None:
        return None
    if isinstance(t, DegenTerm):
        return DegenTerm(mapping.get(t.var, t.var))
    return Term(mapping.get(t.head, t.head),
                tuple((mapping.get(k, k), rename_term(v, mapping)) for k, v in t.args))


def rename_sequent(s: NamedSequent, mapping: Mapping[Var, Var]) -> NamedSequent:
    ctx = {mapping.get(v, v): tuple(rename_term(t, mapping) for t in chain)
           for v, chain in s.ctx.items()}
    return NamedSequent(s.theory.rename(mapping), ctx, rename_term(s.term, mapping),
                        tuple(rename_term(t, mapping) for t in s.type))


def all_vars(t) -> set[Var]:
    """Every variable occurring in t, at any dimension."""
    if t is None:
        return set()
    if isinstance(t, DegenTerm):
        return {t.var}
    out = {t.head}
    for k, v in t.args:
        out.add(k)
        out |= all_vars(v)
    return out


def term_vars(t, theory: EqTheory | None = None) -> set[Var]:
    """Top-dimensional variables of t (empty for degenerate terms)."""
    if t is None or isinstance(t, DegenTerm):
        return set()
    out = {t.head}
    for _, v in t.args:
        out |= term_vars(v)
    return out


def member(v: Var, vs: Iterable[Var], theory: EqTheory | None) -> bool:
    if theory is None:
        return v in set(vs)
    return any(theory.equal(v, w) for w in vs)


def normalize(t, theory: EqTheory):
    """Replace every variable by its class representative."""
    if t is None:
        return None
    if isinstance(t, DegenTerm):
        return DegenTerm(theory.find(t.var))
    return Term(theory.find(t.head), tuple((theory.find(k), normalize(v, theory)) for k, v in t.args))


def terms_equal(a, b, theory: EqTheory) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return normalize(a, theory) == normalize(b, theory)


def chains_equal(a: tuple, b: tuple, theory: EqTheory) -> bool:
    return len(a) == len(b) and all(terms_equal(x, y, theory) for x, y in zip(a, b))


def source_of(ctx: Mapping[Var, tuple], v: Var):
    """``s v`` from the context, or None for a point."""
    try:
        chain = ctx[v]
    except KeyError:
        raise RuleViolation(f"untyped variable {v}") from None
    return chain[0] if chain else None


def iterated_source_vars(ctx: Mapping[Var, tuple], v: Var) -> set[Var]:
    """Every variable occurring in the type of v, recursively."""
    seen: set[Var] = set()
    todo = [v]
    while todo:
        x = todo.pop()
        for t in ctx.get(x, ()):
            for w in all_vars(t):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
    return seen


# -- addresses of variables in terms ----------------------------------------

def _find_unique(positions, z: Var, theory: EqTheory | None) -> Address:
    exact = [a for a, v in positions if v == z]
    if len(exact) == 1:
        return exact[0]
    if not exact and theory is not None:
        exact = [a for a, v in positions if theory.equal(v, z)]
        if len(exact) == 1:
            return exact[0]
    if not exact:
        raise RuleViolation(f"variable {z} does not occur")
    raise RuleViolation(f"variable {z} occurs at several positions")


def node_positions(t, ctx, theory: EqTheory | None = None) -> list[tuple[Address, Var]]:
    """(address, variable) for every top-dimensional position of t."""
    if t is None or isinstance(t, DegenTerm):
        return []
    out = [(empty(t.dim), t.head)]
    if not t.args:
        return out
    src = node_positions(source_of(ctx, t.head), ctx, theory)
    for y, u in t.args:
        pre = wrap(_find_unique(src, y, theory))
        out.extend((join(pre, a), v) for a, v in node_positions(u, ctx, theory))
    return out


def leaf_positions(t, ctx, theory: EqTheory | None = None) -> list[tuple[Address, Var]]:
    """(address, variable) for every variable of the source of t, located in t."""
    if t is None:
        return []
    if isinstance(t, DegenTerm):
        return [(empty(t.dim), t.var)]
    if t.dim == 0:
        return []
    src = node_positions(source_of(ctx, t.head), ctx, theory)
    keyed = {}
    for y, u in t.args:
        keyed[_find_unique(src, y, theory)] = u
    out = [(wrap(a), v) for a, v in src if a not in keyed]
    for a, u in keyed.items():
        pre = wrap(a)
        out.extend((join(pre, b), v) for b, v in leaf_positions(u, ctx, theory))
    return out


def var_address(t, z: Var, mode: str, ctx, theory: EqTheory | None = None) -> Address:
    """The address of z in t, as a node (``mode='node'``) or a leaf (``'leaf'``)."""
    if mode == "node":
        return _find_unique(node_positions(t, ctx, theory), z, theory)
    if mode == "leaf":
        return _find_unique(leaf_positions(t, ctx, theory), z, theory)
    raise ValueError(f"unknown mode {mode!r}")


# -- graft notation and substitution ----------------------------------------

def _absorbs(t: Term, a: Var, ctx, theory) -> bool:
    if t.dim == 0:
        return False
    keys = [k for k, _ in t.args]
    return member(a, term_vars(source_of(ctx, t.head)), theory) and not member(a, keys, theory)


def _push(t: Term, a: Var, x: Term, ctx, theory):
    if _absorbs(t, a, ctx, theory):
        return Term(t.head, t.args + ((a, x),))
    for i, (k, v) in enumerate(t.args):
        r = _push(v, a, x, ctx, theory)
        if r is not None:
            return Term(t.head, t.args[:i] + ((k, r),) + t.args[i + 1:])
    return None


def graft_notation(t, a: Var, x, ctx, theory: EqTheory | None = None) -> Term:
    """``t(a <- x)`` pushed to the position whose head's source contains a."""
    if isinstance(x, Var):
        x = Term(x)
    if not isinstance(t, Term):
        raise RuleViolation("cannot graft on a degenerate term")
    r = _push(t, a, x, ctx, theory)
    if r is None:
        raise RuleViolation(f"{a} is not a graftable position of {t}")
    return r


def named_substitute(u, w, a: Var, theory: EqTheory, ctx) -> tuple:
    """``u[w/a]`` together with the theory, extended by degenerate clauses."""
    if u is None or isinstance(u, DegenTerm):
        return u, theory
    if isinstance(w, DegenTerm):
        return _subst_degen(u, w.var, a, theory, ctx)
    if theory.equal(u.head, a):
        out = w
        for z, v in u.args:
            sub, theory = named_substitute(v, w, a, theory, ctx)
            out = graft_notation(out, z, sub, ctx, theory)
        return out, theory
    args = []
    for z, v in u.args:
        sub, theory = named_substitute(v, w, a, theory, ctx)
        args.append((z, sub))
    return Term(u.head, tuple(args)), theory


def _subst_degen(u: Term, b: Var, a: Var, theory: EqTheory, ctx) -> tuple:
    if theory.equal(u.head, a):
        if not u.args:
            return DegenTerm(b), theory
        if len(u.args) == 1:
            return u.args[0][1], theory
        raise RuleViolation(f"cannot substitute a degenerate term for {a} in {u}")
    args = []
    for z, v in u.args:
        if theory.equal(v.head, a):
            if not v.args:
                theory = theory.add(b, z)
                continue
            if len(v.args) == 1:
                theory = theory.add(b, z)
                args.append((z, v.args[0][1]))
                continue
            raise RuleViolation(f"cannot substitute a degenerate term for {a} in {u}")
        sub, theory = _subst_degen(v, b, a, theory, ctx)
        args.append((z, sub))
    return Term(u.head, tuple(args)), theory


def source_bar(ctx, theory: EqTheory, t) -> tuple:
    """The source of a term, with any equations its computation adds."""
    if t is None:
        raise RuleViolation("the empty term has no source")
    if isinstance(t, DegenTerm):
        return Term(t.var), theory
    out = source_of(ctx, t.head)
    for y, u in t.args:
        su, theory = source_bar(ctx, theory, u)
        out, theory = named_substitute(out, su, y, theory, ctx)
    return out, theory


def source_chain(ctx, theory: EqTheory, t) -> tuple[tuple, EqTheory]:
    """Iterate the source function down to dimension 0."""
    chain = []
    cur = t
    while cur is not None and cur.dim > 0:
        cur, theory = source_bar(ctx, theory, cur)
        chain.append(cur)
    return tuple(chain), theory


def _computed_chain(ctx, theory: EqTheory, t) -> tuple:
    if isinstance(t, Term) and t.is_var and t.head in ctx:
        chain = ctx[t.head]
        if not chain:
            return ()
        rest, _ = source_chain(ctx, theory, chain[0])
        return (chain[0],) + rest
    return source_chain(ctx, theory, t)[0]


def coherence_violations(s: NamedSequent) -> list[str]:
    """Typings whose stored chain differs from the iterated source function."""
    out = []
    items = [("subject", s.term, s.type)]
    items += [(str(v), Term(v), chain) for v, chain in sorted(s.ctx.items())]
    for who, t, chain in items:
        computed = _computed_chain(s.ctx, s.theory, t)
        if not chains_equal(computed, tuple(chain), s.theory):
            out.append(f"{who}: stored {render_type(chain)} but computed {render_type(computed)}")
    return out


def type_coherent(s: NamedSequent) -> bool:
    return not coherence_violations(s)


# -- alpha-equivalence -------------------------------------------------------

def canonical_form(s: NamedSequent):
    """A name-free rendering; two sequents are alpha-equivalent iff these agree."""
    theory, ctx = s.theory, s.ctx
    labels: dict[Var, str] = {}
    counters: dict[int, int] = {}
    queue: list[Var] = []

    def see(v: Var):
        r = theory.find(v)
        if r not in labels:
            k = counters.get(v.dim, 0)
            counters[v.dim] = k + 1
            labels[r] = f"v{v.dim}.{k}"
            queue.append(v)

    def walk(t):
        if t is None:
            return
        if isinstance(t, DegenTerm):
            see(t.var)
            return
        see(t.head)
        if not t.args:
            return
        src = node_positions(source_of(ctx, t.head), ctx, theory)
        for y, u in sorted(t.args, key=lambda kv: _find_unique(src, kv[0], theory)):
            see(y)
            walk(u)

    def render(t) -> str:
        if t is None:
            return "0"
        if isinstance(t, DegenTerm):
            return "_" + labels.get(theory.find(t.var), "?")
        head = labels.get(theory.find(t.head), "?")
        if not t.args:
            return head
        src = node_positions(source_of(ctx, t.head), ctx, theory)
        parts = []
        for y, u in t.args:
            addr = _find_unique(src, y, theory)
            parts.append((addr, f"{labels.get(theory.find(y), '?')}<-{render(u)}"))
        parts.sort(key=lambda p: p[0])
        return head + "(" + ",".join(p for _, p in parts) + ")"

    def drain():
        while queue:
            v = queue.pop(0)
            for t in ctx.get(v, ()):
                walk(t)

    walk(s.term)
    for t in s.type:
        walk(t)
    drain()
    while True:
        rest = [v for v in ctx if theory.find(v) not in labels]
        if not rest:
            break
        rest.sort(key=lambda v: (v.dim, [render(t) for t in ctx[v]], v))
        see(rest[0])
        drain()
    classes = {}
    for v in ctx:
        classes.setdefault(labels[theory.find(v)], []).append(
            (v.depth, tuple(render(t) for t in ctx[v])))
    return (render(s.term), tuple(render(t) for t in s.type),
            tuple(sorted((k, tuple(sorted(m))) for k, m in classes.items())))


def alpha_equivalent(s1: NamedSequent, s2: NamedSequent) -> bool:
    if s1.term.dim != s2.term.dim:
        return False
    return canonical_form(s1) == canonical_form(s2)
