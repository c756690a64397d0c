"""Explicit cell complexes: faces, opetopic identities, isomorphism."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .address import Address, empty, last, parent
from .preopetope import Degenerate, Nodes, Preopetope, leaves, nodes, source
from .unnamed import target_of


@dataclass(frozen=True)
class Cell:
    name: str
    shape: Preopetope
    sources: tuple[tuple[Address, str], ...]
    target: str | None

    @property
    def dim(self) -> int:
        return self.shape.dim

    def src(self, a: Address) -> str:
        return dict(self.sources)[a]


class Complex:
    """A finite set of named cells with shapes, source maps and targets."""

    def __init__(self, cells: Iterable[Cell]):
        self.cells = {c.name: c for c in cells}

    def __len__(self):
        return len(self.cells)

    def __getitem__(self, name: str) -> Cell:
        return self.cells[name]

    def by_dim(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for c in self.cells.values():
            out.setdefault(c.dim, []).append(c.name)
        return {d: sorted(v) for d, v in sorted(out.items())}

    def violations(self) -> list[str]:
        """Every failed face check or opetopic identity, as readable lines."""
        out: list[str] = []
        for c in sorted(self.cells.values(), key=lambda c: (c.dim, c.name)):
            out.extend(self._check(c))
        return out

    def _check(self, c: Cell) -> list[str]:
        bad = []
        src = dict(c.sources)
        if set(src) != set(nodes(c.shape)):
            return [f"{c.name}: sources do not cover the nodes of its shape"]
        for a, x in src.items():
            if x not in self.cells:
                return [f"{c.name}: unknown source {x}"]
            if self.cells[x].shape != source(c.shape, a):
                bad.append(f"{c.name}: source at {a} has the wrong shape")
        if c.dim == 0:
            if c.target is not None:
                bad.append(f"{c.name}: a point has no target")
            return bad
        if c.target not in self.cells:
            return bad + [f"{c.name}: missing target"]
        tgt = self.cells[c.target]
        t_shape, readdress = target_of(c.shape)
        if tgt.shape != t_shape:
            bad.append(f"{c.name}: target has the wrong shape")
            return bad
        if c.dim < 2 or bad:
            return bad
        tt = tgt.target
        if isinstance(c.shape, Degenerate):
            root = empty(tgt.dim - 1)
            if tgt.src(root) != tt:
                bad.append(f"{c.name}: Degen fails, s_{root} t = {tgt.src(root)} but t t = {tt}")
            return bad
        for k in c.shape.keys():
            if len(k) == 0:
                continue
            p, q = parent(k), last(k)
            lhs = self.cells[src[k]].target
            rhs = self.cells[src[p]].src(q)
            if lhs != rhs:
                bad.append(f"{c.name}: Inner fails at {k}, t s_{k} = {lhs} but s_{q} s_{p} = {rhs}")
        root = empty(c.dim - 1)
        lhs = self.cells[src[root]].target
        if lhs != tt:
            bad.append(f"{c.name}: Glob1 fails, t s_{root} = {lhs} but t t = {tt}")
        for leaf in leaves(c.shape):
            p, q = parent(leaf), last(leaf)
            lhs = self.cells[src[p]].src(q)
            image = readdress[leaf]
            rhs = tgt.src(image)
            if lhs != rhs:
                bad.append(f"{c.name}: Glob2 fails at leaf {leaf} over {image}, {lhs} vs {rhs}")
        return bad

    def to_json(self) -> dict:
        from .textio import preopetope_to_json, serialize_address
        return {
            "cells": [
                {"name": c.name, "dim": c.dim, "shape": preopetope_to_json(c.shape),
                 "sources": [[serialize_address(a), x] for a, x in c.sources], "target": c.target}
                for c in sorted(self.cells.values(), key=lambda c: (c.dim, c.name))
            ]
        }


def _refine(cx: Complex) -> dict[str, int]:
    """Colour refinement by shape, faces and cofaces; colours are comparable across complexes."""
    colour = {n: hash((c.dim, c.shape)) for n, c in cx.cells.items()}
    incoming: dict[str, list[tuple]] = {n: [] for n in cx.cells}
    for c in cx.cells.values():
        for a, x in c.sources:
            incoming[x].append(("s", a, c.name))
        if c.target is not None:
            incoming[c.target].append(("t", None, c.name))
    for _ in range(len(cx.cells) + 1):
        new = {}
        for n, c in cx.cells.items():
            sig = (colour[n],
                   tuple(sorted((str(a), colour[x]) for a, x in c.sources)),
                   colour[c.target] if c.target is not None else None,
                   tuple(sorted((kind, str(a), colour[m]) for kind, a, m in incoming[n])))
            new[n] = hash(sig)
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    return colour


def isomorphic(a: Complex, b: Complex) -> bool:
    """A bijection of cells preserving shapes, sources by address, and targets."""
    if len(a) != len(b):
        return False
    ca, cb = _refine(a), _refine(b)
    if sorted(ca.values()) != sorted(cb.values()):
        return False
    order = sorted(a.cells, key=lambda n: (sum(1 for v in ca.values() if v == ca[n]), -a[n].dim, n))
    candidates = {n: [m for m in b.cells if cb[m] == ca[n]] for n in a.cells}

    def consistent(mapping, n, m) -> bool:
        x, y = a[n], b[m]
        if x.shape != y.shape:
            return False
        ys = dict(y.sources)
        for addr, s in x.sources:
            if s in mapping and mapping[s] != ys[addr]:
                return False
        if x.target in mapping and mapping[x.target] != y.target:
            return False
        return True

    def extend(mapping: dict, used: set) -> bool:
        todo = [n for n in order if n not in mapping]
        if not todo:
            return all(_preserves(a, b, mapping, n) for n in a.cells)
        n = todo[0]
        for m in candidates[n]:
            if m in used or not consistent(mapping, n, m):
                continue
            forced = _propagate(a, b, dict(mapping), set(used), n, m)
            if forced is not None and extend(*forced):
                return True
        return False

    return extend({}, set())


def _propagate(a, b, mapping, used, n, m):
    stack = [(n, m)]
    while stack:
        x, y = stack.pop()
        if x in mapping:
            if mapping[x] != y:
                return None
            continue
        if y in used or a[x].shape != b[y].shape:
            return None
        mapping[x] = y
        used.add(y)
        ys = dict(b[y].sources)
        for addr, s in a[x].sources:
            stack.append((s, ys[addr]))
        if a[x].target is not None:
            if b[y].target is None:
                return None
            stack.append((a[x].target, b[y].target))
    return mapping, used


def _preserves(a, b, mapping, n) -> bool:
    x, y = a[n], b[mapping[n]]
    ys = dict(y.sources)
    return (x.shape == y.shape
            and all(mapping[s] == ys[addr] for addr, s in x.sources)
            and (x.target is None) == (y.target is None)
            and (x.target is None or mapping[x.target] == y.target))
