"""Preopetopes: points, degenerate wrappers and address-keyed node maps."""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from .address import Address, empty, extend, is_prefix, lex_compare, wrap
from .errors import DimensionError, RuleViolation


class Preopetope:
    """Base class.  Instances are immutable and hashable."""

    __slots__ = ()
    dim: int

    @property
    def is_point(self) -> bool:
        return isinstance(self, Point)

    @property
    def is_degenerate(self) -> bool:
        return isinstance(self, Degenerate)

    def __str__(self):
        from .textio import serialize_preopetope
        return serialize_preopetope(self)


class Point(Preopetope):
    __slots__ = ()
    dim = 0

    def __eq__(self, other):
        return isinstance(other, Point)

    def __hash__(self):
        return hash("point")

    def __repr__(self):
        return "POINT"


POINT = Point()


class Degenerate(Preopetope):
    __slots__ = ("inner", "dim", "_hash")

    def __init__(self, inner: Preopetope):
        if not isinstance(inner, Preopetope):
            raise TypeError("degenerate wrapper needs a preopetope")
        self.inner = inner
        self.dim = inner.dim + 2
        self._hash = hash(("degen", inner))

    def __eq__(self, other):
        return isinstance(other, Degenerate) and self.inner == other.inner

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Degenerate({self.inner!r})"


class Nodes(Preopetope):
    """A nonempty map from (n-1)-addresses to (n-1)-preopetopes, kept sorted."""

    __slots__ = ("entries", "dim", "_map", "_hash")

    def __init__(self, entries: Mapping[Address, Preopetope] | Iterable[tuple[Address, Preopetope]]):
        pairs = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        if not pairs:
            raise DimensionError("a node map needs at least one entry")
        keys = [k for k, _ in pairs]
        if len(set(keys)) != len(keys):
            raise DimensionError("duplicate node address")
        n = pairs[0][0].dim + 1
        for k, v in pairs:
            if k.dim != n - 1 or v.dim != n - 1:
                raise DimensionError(f"entry {k} <- {v!r} does not fit in dimension {n}")
        self.entries = tuple(sorted(pairs, key=lambda kv: _LexKey(kv[0])))
        self._map = dict(self.entries)
        self.dim = n
        self._hash = hash(("nodes", self.entries))

    def __getitem__(self, a: Address) -> Preopetope:
        return self._map[a]

    def __contains__(self, a: Address) -> bool:
        return a in self._map

    def __len__(self):
        return len(self.entries)

    def keys(self):
        return self._map.keys()

    def items(self):
        return self.entries

    def __eq__(self, other):
        return isinstance(other, Nodes) and self._map == other._map

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{k}: {v!r}" for k, v in self.entries)
        return f"Nodes({{{inner}}})"


class _LexKey:
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a

    def __lt__(self, other):
        return lex_compare(self.a, other.a) < 0


class EmptyTarget:
    """The (-1)-dimensional target of the point; not usable as a preopetope."""

    __slots__ = ()
    dim = -1

    def __repr__(self):
        return "EMPTY"

    def __str__(self):
        return "empty"

    def __eq__(self, other):
        return isinstance(other, EmptyTarget)

    def __hash__(self):
        return hash("empty-target")


EMPTY = EmptyTarget()

ARROW = Nodes({Address(0): POINT})


def corolla(p: Preopetope) -> Nodes:
    """``{[] <- p}``."""
    return Nodes({empty(p.dim): p})


def integer(n: int) -> Preopetope:
    """The opetopic integer: n arrows in a line, or ``{{point}}`` when n = 0."""
    if n == 0:
        return Degenerate(POINT)
    star = Address(0)
    return Nodes({Address(1, (star,) * i): ARROW for i in range(n)})


@lru_cache(maxsize=None)
def nodes(p: Preopetope) -> frozenset[Address]:
    if isinstance(p, Nodes):
        return frozenset(p.keys())
    return frozenset()


@lru_cache(maxsize=None)
def leaves(p: Preopetope) -> frozenset[Address]:
    if isinstance(p, Degenerate):
        return frozenset({empty(p.dim - 1)})
    if isinstance(p, Point):
        return frozenset()
    if p.dim == 1:
        raise DimensionError("leaves are undefined for the arrow")
    out = set()
    for k, v in p.entries:
        for q in nodes(v):
            cand = extend(k, q)
            if cand not in p:
                out.add(cand)
    return frozenset(out)


def source(p: Preopetope, a: Address) -> Preopetope:
    if not isinstance(p, Nodes):
        raise RuleViolation(f"{p!r} has no sources")
    try:
        return p[a]
    except KeyError:
        raise RuleViolation(f"{a} is not a node address") from None


def improper_graft(p: Preopetope, r: Address, q: Preopetope) -> Nodes:
    if not isinstance(p, Nodes):
        raise RuleViolation("improper grafting needs a node map")
    if q.dim != p.dim - 1:
        raise DimensionError(f"cannot graft a {q.dim}-preopetope on a {p.dim}-preopetope")
    if r not in leaves(p):
        raise RuleViolation(f"{r} is not a leaf")
    return Nodes(p.entries + ((r, q),))


def decompose(p: Preopetope) -> list[tuple[Address, Preopetope]]:
    if not isinstance(p, Nodes):
        raise RuleViolation("only node maps decompose")
    return list(p.entries)


def refold(pairs: list[tuple[Address, Preopetope]]) -> Nodes:
    (k0, v0), *rest = pairs
    out = Nodes({k0: v0})
    for k, v in rest:
        out = improper_graft(out, k, v)
    return out


def _bijection_inverse(ctx) -> dict[Address, Address]:
    pairs = ctx.items() if hasattr(ctx, "items") else ctx
    return {b: a for a, b in pairs}


def reindex(key: Address, at: Address, inverse: Mapping[Address, Address]) -> Address:
    """The address ``chi(key)`` of a node of t after substituting at ``at``.

    A key ``[at [b] rest]`` becomes ``[at a rest]`` where ``a/b`` is a pair of
    the substituted sequent's context; every other key is unchanged.
    """
    if key.dim == 0 or not is_prefix(at, key) or len(key) == len(at):
        return key
    b = key.entries[len(at)]
    try:
        a = inverse[b]
    except KeyError:
        raise RuleViolation(f"no leaf over node {b} while reindexing {key}") from None
    return Address(key.dim, at.entries + a.entries + key.entries[len(at) + 1:])


def substitute(t: Preopetope, at: Address, q: Preopetope, ctx) -> Preopetope:
    """Replace the node ``at`` of t by the pasting scheme q.

    ``ctx`` is the leaf-to-node bijection of a derivable sequent with source q.
    """
    if not isinstance(t, Nodes):
        raise RuleViolation("substitution needs a node map")
    if at not in t:
        raise RuleViolation(f"{at} is not a node")
    if q.dim != t.dim:
        raise DimensionError(f"cannot substitute a {q.dim}-preopetope in a {t.dim}-preopetope")
    if t.dim == 1:
        return q
    if isinstance(q, Degenerate) and len(t) == 1:
        return q
    inverse = _bijection_inverse(ctx)
    out = {}
    for k, v in t.entries:
        if k == at:
            continue
        out[reindex(k, at, inverse)] = v
    if isinstance(q, Nodes):
        for k, v in q.entries:
            out[Address(at.dim, at.entries + k.entries)] = v
    if len(out) != len(t) - 1 + len(nodes(q)):
        raise RuleViolation("substitution produced colliding addresses")
    return Nodes(out)


def unit_corolla(p: Preopetope) -> Nodes:
    """The corolla on p, the unit of substitution at a node decorated by p."""
    return corolla(p)


def corolla_context(p: Preopetope) -> dict[Address, Address]:
    """Leaf-to-node bijection of the corolla on p."""
    return {wrap(a): a for a in nodes(p)}


def _ctx_of(q: Preopetope):
    from .unnamed import target_of
    return target_of(q)[1]


def substitute_associativity_check(t: Preopetope, a1: Address, q1: Preopetope,
                                   a2: Address, q2: Preopetope, ctxs=None,
                                   nested: bool | None = None) -> bool:
    """Both evaluation orders of a double substitution agree.

    If ``a2`` is a node of t other than ``a1`` the substitutions are disjoint;
    if ``a2`` is a node of q1 they are nested.  ``ctxs`` optionally supplies
    the bijections of q1 and q2; they are recomputed from the rules otherwise.
    ``nested`` settles the case when ``a2`` is a node of both.
    """
    if nested is None:
        nested = not (a2 in nodes(t) and a2 != a1)
    c1, c2 = ctxs if ctxs is not None else (_ctx_of(q1), _ctx_of(q2))
    if not nested and a2 in nodes(t) and a2 != a1:
        inv1 = _bijection_inverse(c1)
        inv2 = _bijection_inverse(c2)
        left = substitute(substitute(t, a1, q1, c1), reindex(a2, a1, inv1), q2, c2)
        right = substitute(substitute(t, a2, q2, c2), reindex(a1, a2, inv2), q1, c1)
        return left == right
    if nested and a2 in nodes(q1):
        left = substitute(substitute(t, a1, q1, c1), Address(a1.dim, a1.entries + a2.entries), q2, c2)
        inner = substitute(q1, a2, q2, c2)
        right = substitute(t, a1, inner, _ctx_of(inner))
        return left == right
    raise RuleViolation(f"{a2} is neither another node of t nor a node of q1")
