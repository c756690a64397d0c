"""Unnamed sequents ``ctx |- p -> t``: the four rules, targets, and opetope decision."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .address import Address, empty, extend, is_prefix, join, last, parent, wrap
from .errors import DimensionError, NotAnOpetope, RuleViolation
from .preopetope import (
    ARROW, EMPTY, POINT, Degenerate, EmptyTarget, Nodes, Point, Preopetope,
    corolla, improper_graft, leaves, nodes, source, substitute,
)


class LeafNodeBijection(Mapping):
    """Finite map from leaves of a source to nodes of its target."""

    __slots__ = ("pairs", "_map", "_hash")

    def __init__(self, pairs: Mapping[Address, Address] | Iterable[tuple[Address, Address]] = ()):
        items = list(pairs.items()) if isinstance(pairs, Mapping) else list(pairs)
        self._map = dict(items)
        if len(self._map) != len(items):
            raise RuleViolation("duplicate leaf in context")
        self.pairs = tuple(sorted(self._map.items()))
        self._hash = hash(self.pairs)

    def __getitem__(self, k):
        return self._map[k]

    def __iter__(self):
        return iter(k for k, _ in self.pairs)

    def __len__(self):
        return len(self._map)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, LeafNodeBijection):
            return self._map == other._map
        return NotImplemented

    def inverse(self) -> dict[Address, Address]:
        return {b: a for a, b in self._map.items()}

    def __repr__(self):
        return "{" + ", ".join(f"{a}/{b}" for a, b in self.pairs) + "}"


@dataclass(frozen=True)
class UnnamedSequent:
    ctx: LeafNodeBijection
    src: Preopetope
    tgt: Preopetope | EmptyTarget

    def __str__(self):
        from .textio import serialize_unnamed_sequent
        return serialize_unnamed_sequent(self)


def check_sequent(s: UnnamedSequent) -> None:
    """Dimension and leaf/node bijection invariants; raises on failure."""
    if s.src.dim != s.tgt.dim + 1:
        raise RuleViolation(f"dim src {s.src.dim} != dim tgt {s.tgt.dim} + 1")
    if s.src.dim >= 2:
        if set(s.ctx.keys()) != set(leaves(s.src)):
            raise RuleViolation("context keys are not the leaves of the source")
        if set(s.ctx.values()) != set(nodes(s.tgt)) or len(set(s.ctx.values())) != len(s.ctx):
            raise RuleViolation("context values are not the nodes of the target")


def _checked(s: UnnamedSequent) -> UnnamedSequent:
    check_sequent(s)
    return s


def rule_point() -> UnnamedSequent:
    return UnnamedSequent(LeafNodeBijection(), POINT, EMPTY)


def rule_degen(s: UnnamedSequent) -> UnnamedSequent:
    p = s.src
    n = p.dim
    return _checked(UnnamedSequent(
        LeafNodeBijection({Address(n + 1, ()): empty(n)}), Degenerate(p), corolla(p)))


def rule_shift(s: UnnamedSequent) -> UnnamedSequent:
    p = s.src
    return _checked(UnnamedSequent(
        LeafNodeBijection({wrap(a): a for a in nodes(p)}), corolla(p), p))


def rule_graft(s: UnnamedSequent, at: Address, q: UnnamedSequent) -> UnnamedSequent:
    p = s.src
    if not isinstance(p, Nodes) or p.dim < 2:
        raise RuleViolation("grafting needs a non-degenerate source of dim >= 2")
    if q.src.dim != p.dim - 1:
        raise DimensionError(f"cannot graft a {q.src.dim}-preopetope on a {p.dim}-preopetope")
    if at not in s.ctx:
        raise RuleViolation(f"{_fmt(at)} is not a leaf of the source")
    r = s.ctx[at]
    edge = source(source(p, parent(at)), last(at))
    if edge != q.tgt:
        raise RuleViolation(
            f"inner edge mismatch at {at}: edge {edge} differs from target {q.tgt}")
    new_src = improper_graft(p, at, q.src)
    new_tgt = substitute(s.tgt, r, q.src, q.ctx)
    inv = q.ctx.inverse()
    pairs = {}
    for a, b in s.ctx.items():
        if a == at:
            continue
        if b.dim > 0 and is_prefix(r, b) and len(b) > len(r) and b.entries[len(r)] in inv:
            x = inv[b.entries[len(r)]]
            b = Address(b.dim, r.entries + x.entries + b.entries[len(r) + 1:])
        pairs[a] = b
    for sj in nodes(q.src):
        pairs[extend(at, sj)] = join(r, sj)
    return _checked(UnnamedSequent(LeafNodeBijection(pairs), new_src, new_tgt))


def _derive(p: Preopetope, order: list[Address] | None) -> UnnamedSequent:
    if isinstance(p, Point):
        return rule_point()
    if isinstance(p, Degenerate):
        return rule_degen(derive(p.inner))
    if p.dim == 1:
        return rule_shift(rule_point())
    root = empty(p.dim - 1)
    if root not in p:
        raise NotAnOpetope(f"no root node {root}")
    s = rule_shift(derive(p[root]))
    keys = order if order is not None else [k for k, _ in p.entries]
    for k in keys:
        if k == root:
            continue
        try:
            s = rule_graft(s, k, derive(p[k]))
        except NotAnOpetope:
            raise
        except RuleViolation as e:
            raise NotAnOpetope(str(e)) from None
    return s


@lru_cache(maxsize=None)
def _derive_cached(p: Preopetope) -> UnnamedSequent:
    return _derive(p, None)


def derive(p: Preopetope, order: list[Address] | None = None) -> UnnamedSequent:
    """Replay p through the rules, grafting keys in ``order`` (lexicographic by default)."""
    if order is None:
        return _derive_cached(p)
    return _derive(p, list(order))


def target_of(p: Preopetope) -> tuple[Preopetope | EmptyTarget, LeafNodeBijection]:
    s = derive(p)
    return s.tgt, s.ctx


def legal_orders(p: Nodes, rng: random.Random) -> list[Address]:
    """A random linear extension of the parent relation on the keys of p."""
    keys = set(p.keys())
    root = empty(p.dim - 1)
    placed = {root}
    out = [root]
    pending = sorted(keys - placed)
    while pending:
        ready = [k for k in pending if parent(k) in placed]
        if not ready:
            raise NotAnOpetope("keys without a parent chain to the root")
        k = rng.choice(ready)
        pending.remove(k)
        placed.add(k)
        out.append(k)
    return out


def _fmt(a: Address) -> str:
    from .textio import serialize_address
    return serialize_address(a)


def explain(p: Preopetope) -> str | None:
    """None if p is an opetope, otherwise the failing deconstruction step."""
    return _explain(p)


@lru_cache(maxsize=None)
def _explain(p: Preopetope) -> str | None:
    if isinstance(p, Point):
        return None
    if isinstance(p, Degenerate):
        why = _explain(p.inner)
        return None if why is None else f"inside degenerate: {why}"
    if p.dim == 1:
        return None
    root = empty(p.dim - 1)
    if root not in p:
        return f"no root node {_fmt(root)}"
    for k, v in p.entries:
        why = _explain(v)
        if why is not None:
            return f"source at {_fmt(k)}: {why}"
    remaining = dict(p.entries)
    for k, v in reversed(p.entries):
        if k == root:
            continue
        del remaining[k]
        par = parent(k)
        if par not in remaining:
            return f"{_fmt(k)} is not a leaf: its parent {_fmt(par)} is not a node"
        q = last(k)
        if q not in nodes(remaining[par]):
            return f"{_fmt(k)} is not a leaf: {_fmt(q)} is not a node of the source at {_fmt(par)}"
        edge = source(remaining[par], q)
        tgt, _ = target_of(v)
        if edge != tgt:
            return f"inner edge mismatch at {_fmt(k)}: edge {edge} differs from target {tgt}"
    return None


def is_opetope(p: Preopetope) -> bool:
    return explain(p) is None


def _random_sequent(n: int, budget: int, rng: random.Random) -> UnnamedSequent:
    if n == 0:
        return rule_point()
    if n == 1:
        return rule_shift(rule_point())
    if rng.random() < 0.15:
        return rule_degen(_random_sequent(n - 2, budget, rng))
    s = rule_shift(_random_sequent(n - 1, max(1, budget // 2), rng))
    for _ in range(rng.randint(0, max(0, budget - 1))):
        if len(nodes(s.src)) >= budget or not s.ctx:
            break
        at = rng.choice(sorted(s.ctx.keys()))
        edge = source(source(s.src, parent(at)), last(at))
        s = rule_graft(s, at, _random_with_target(edge, max(1, budget // 2), rng))
    return s


def _random_with_target(e: Preopetope, budget: int, rng: random.Random) -> UnnamedSequent:
    """A random derivable sequent whose target is the opetope e."""
    if isinstance(e, Nodes) and len(e) == 1 and e.dim >= 1 and rng.random() < 0.2:
        (_, phi), = e.entries
        return rule_degen(derive(phi))
    s = rule_shift(derive(e))
    if e.dim == 0:
        return s
    for _ in range(rng.randint(0, max(0, budget - 1))):
        if not isinstance(s.src, Nodes) or len(s.src) >= budget:
            break
        at = rng.choice([k for k, _ in s.src.entries])
        sub = _random_with_target(s.src[at], max(1, budget // 2), rng)
        if isinstance(sub.src, Degenerate) and len(s.src) == 1:
            continue
        s = derive(substitute(s.src, at, sub.src, sub.ctx))
    return s


def generate_sequent(n: int, size: int, seed: int) -> UnnamedSequent:
    return _random_sequent(n, max(1, size), random.Random(seed))


def generate_with_target(e: Preopetope, size: int, seed: int) -> UnnamedSequent:
    """A derivable sequent whose target is the opetope e."""
    return _random_with_target(e, max(1, size), random.Random(seed))


def generate_random(n: int, size: int, seed: int) -> Preopetope:
    """A derivable n-preopetope with at most ``size`` nodes, determined by seed."""
    return generate_sequent(n, size, seed).src


def corpus(count: int, max_dim: int, size: int, seed: int = 0) -> Iterator[Preopetope]:
    rng = random.Random(seed)
    for _ in range(count):
        yield generate_random(rng.randint(0, max_dim), rng.randint(1, size), rng.randrange(2**31))
