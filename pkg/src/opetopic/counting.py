"""Face counts of representables."""
from __future__ import annotations

from functools import lru_cache

from .address import last, parent
from .errors import NotAnOpetope
from .preopetope import Degenerate, Nodes, Preopetope, improper_graft, source
from .unnamed import explain


def _require(p: Preopetope) -> None:
    why = explain(p)
    if why is not None:
        raise NotAnOpetope(why)


@lru_cache(maxsize=None)
def count_incremental(p: Preopetope) -> int:
    """Build p by successive graftings; each adds the grafted faces minus the shared edge."""
    if p.is_point:
        return 1
    if isinstance(p, Degenerate):
        return 2 + count_incremental(p.inner)
    if p.dim == 1:
        return 3
    (k0, v0), *rest = p.entries
    acc = Nodes({k0: v0})
    total = 2 + count_incremental(v0)
    for k, v in rest:
        edge = source(source(acc, parent(k)), last(k))
        total += count_incremental(v) - count_incremental(edge)
        acc = improper_graft(acc, k, v)
    return total


@lru_cache(maxsize=None)
def count_closed_form(p: Preopetope) -> int:
    """Sum over sources, minus the inner edges they share."""
    if p.is_point:
        return 1
    if isinstance(p, Degenerate):
        return 2 + count_closed_form(p.inner)
    if p.dim == 1:
        return 3
    total = 2 + sum(count_closed_form(v) for _, v in p.entries)
    for k, _ in p.entries:
        if len(k):
            total -= count_closed_form(source(p[parent(k)], last(k)))
    return total


def count(p: Preopetope) -> int:
    _require(p)
    a, b = count_incremental(p), count_closed_form(p)
    if a != b:
        raise AssertionError(f"face count formulas disagree on {p!r}: {a} vs {b}")
    return a


def count_oracle(p: Preopetope) -> int:
    """Cells of the materialized representable, built through the named side."""
    from .coding import to_named
    from .named_sets import os_materialize, os_repr
    _require(p)
    return len(os_materialize(os_repr(to_named(p))))
