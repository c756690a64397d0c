"""Shape-annotated contexts: cells built by point, degen, graft and shift."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .address import Address, empty, last, parent
from .cells import Cell, Complex
from .errors import RuleViolation
from .preopetope import POINT, Degenerate, Nodes, Preopetope, leaves, nodes, source
from .unnamed import explain, target_of


@dataclass(frozen=True)
class UCell:
    name: str
    shape: Preopetope
    srcs: tuple[tuple[Address, str], ...] = ()
    tgt: str | None = None

    def src(self, a: Address) -> str:
        return dict(self.srcs)[a]


@dataclass(frozen=True)
class UContext:
    cells: tuple[UCell, ...] = ()

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.cells)

    def __getitem__(self, name: str) -> UCell:
        for c in self.cells:
            if c.name == name:
                return c
        raise RuleViolation(f"unknown cell {name!r}")

    def __len__(self):
        return len(self.cells)

    def __str__(self):
        from .textio import serialize_ucontext
        return serialize_ucontext(self)


@dataclass(frozen=True)
class DegeneratePD:
    base: str
    shape: Preopetope


@dataclass(frozen=True)
class NodesPD:
    shape: Nodes
    assignment: tuple[tuple[Address, str], ...]


def u_point(ctx: UContext, name: str) -> UContext:
    if name in ctx:
        raise RuleViolation(f"name {name!r} is already used")
    return UContext(ctx.cells + (UCell(name, POINT),))


def u_degen(ctx: UContext, base: str) -> DegeneratePD:
    return DegeneratePD(base, Degenerate(ctx[base].shape))


def u_graft(ctx: UContext, shape: Preopetope, assignment: Mapping[Address, str]) -> NodesPD:
    if not isinstance(shape, Nodes):
        raise RuleViolation("the shape of a grafted pasting diagram must be non-degenerate")
    why = explain(shape)
    if why is not None:
        raise RuleViolation(f"shape is not an opetope: {why}")
    assignment = dict(assignment)
    if set(assignment) != set(nodes(shape)):
        raise RuleViolation("the assignment must cover exactly the nodes of the shape")
    for a, x in assignment.items():
        if ctx[x].shape != source(shape, a):
            raise RuleViolation(f"shape mismatch at {a}: {x} does not have the shape of that source")
    if shape.dim >= 2:
        for k, x in assignment.items():
            if len(k) == 0:
                continue
            p, q = parent(k), last(k)
            lhs, rhs = ctx[x].tgt, ctx[assignment[p]].src(q)
            if lhs != rhs:
                raise RuleViolation(f"Inner fails at {k}: t {x} = {lhs} but s_{q} {assignment[p]} = {rhs}")
    return NodesPD(shape, tuple(sorted(assignment.items())))


def u_shift(ctx: UContext, pd, filler: str, name: str) -> UContext:
    if name in ctx:
        raise RuleViolation(f"name {name!r} is already used")
    x = ctx[filler]
    t, readdress = target_of(pd.shape)
    if x.shape != t:
        raise RuleViolation(f"shape mismatch: {filler} is not shaped like the target of the pasting diagram")
    if isinstance(pd, DegeneratePD):
        root = empty(x.shape.dim - 1)
        if x.src(root) != pd.base or x.tgt != pd.base:
            raise RuleViolation(f"Degen fails: {filler} must be a loop on {pd.base}")
        cell = UCell(name, pd.shape, (), filler)
    else:
        assignment = dict(pd.assignment)
        if pd.shape.dim >= 2:
            root = empty(pd.shape.dim - 1)
            lhs = ctx[assignment[root]].tgt
            if lhs != x.tgt:
                raise RuleViolation(f"Glob1 fails: t s_{root} = {lhs} but t {filler} = {x.tgt}")
            for leaf in sorted(leaves(pd.shape)):
                p, q = parent(leaf), last(leaf)
                lhs = ctx[assignment[p]].src(q)
                rhs = x.src(readdress[leaf])
                if lhs != rhs:
                    raise RuleViolation(
                        f"Glob2 fails at leaf {leaf} over {readdress[leaf]}: {lhs} vs {rhs}")
        cell = UCell(name, pd.shape, pd.assignment, filler)
    return UContext(ctx.cells + (cell,))


def u_materialize(ctx: UContext) -> Complex:
    return Complex(Cell(c.name, c.shape, c.srcs, c.tgt) for c in ctx.cells)


def from_complex(cx: Complex) -> UContext:
    """Rebuild a complex cell by cell through the rules, lowest dimension first."""
    ctx = UContext()
    for c in sorted(cx.cells.values(), key=lambda c: (c.dim, c.name)):
        if c.dim == 0:
            ctx = u_point(ctx, c.name)
            continue
        if isinstance(c.shape, Degenerate):
            base = cx[cx[c.target].target].name
            pd = u_degen(ctx, base)
        else:
            pd = u_graft(ctx, c.shape, dict(c.sources))
        ctx = u_shift(ctx, pd, c.target, c.name)
    return ctx
