"""Higher addresses.

An n-address is either the atom ``*`` (n = 0) or a finite sequence of
(n-1)-addresses.  The dimension is stored explicitly, so the empty word
``[]`` is never ambiguous internally.
"""
from __future__ import annotations

from functools import total_ordering

from .errors import DimensionError


@total_ordering
class Address:
    __slots__ = ("dim", "entries", "_hash")

    def __init__(self, dim: int, entries: tuple["Address", ...] | None = None):
        if dim < 0:
            raise DimensionError("addresses have non-negative dimension")
        if dim == 0:
            if entries is not None:
                raise DimensionError("a 0-address is the atom *")
        else:
            entries = tuple(entries or ())
            for e in entries:
                if not isinstance(e, Address) or e.dim != dim - 1:
                    raise DimensionError(f"entry {e!r} of a {dim}-address must have dim {dim - 1}")
        self.dim = dim
        self.entries = entries
        self._hash = hash((dim, entries))

    @classmethod
    def of(cls, *entries: "Address", dim: int | None = None) -> "Address":
        """Build ``[e1 e2 ...]``; ``dim`` is needed only when there are no entries."""
        if entries:
            return cls(entries[0].dim + 1, entries)
        if dim is None:
            raise DimensionError("the empty address needs an explicit dimension")
        return cls(dim, ())

    @property
    def is_atom(self) -> bool:
        return self.dim == 0

    def __len__(self) -> int:
        return 0 if self.entries is None else len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Address):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Address") -> bool:
        return lex_compare(self, other) < 0

    def __add__(self, other: "Address") -> "Address":
        return concat(self, other)

    def __repr__(self):
        return f"Address({self})"

    def __str__(self):
        return _render(self)


STAR = Address(0)


def _render(a: Address) -> str:
    if a.dim == 0:
        return "*"
    return "[" + "".join(_render(e) for e in a.entries) + "]"


def empty(dim: int) -> Address:
    """The root address of dimension ``dim``; at dim 0 this is ``*``."""
    return STAR if dim == 0 else Address(dim, ())


def wrap(a: Address) -> Address:
    """The one-entry address ``[a]``."""
    return Address(a.dim + 1, (a,))


def _check_same_dim(a: Address, b: Address) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a} has dim {a.dim}, {b} has dim {b.dim}")


def concat(a: Address, b: Address) -> Address:
    _check_same_dim(a, b)
    if a.dim == 0:
        raise DimensionError("the atom * has no concatenation")
    return Address(a.dim, a.entries + b.entries)


def join(a: Address, b: Address) -> Address:
    """Concatenation extended to dim 0, where ``* . * = *``."""
    _check_same_dim(a, b)
    return STAR if a.dim == 0 else Address(a.dim, a.entries + b.entries)


def is_prefix(a: Address, b: Address) -> bool:
    _check_same_dim(a, b)
    if a.dim == 0:
        return True
    n = len(a.entries)
    return n <= len(b.entries) and b.entries[:n] == a.entries


def lex_compare(a: Address, b: Address) -> int:
    """-1, 0 or 1.  Entrywise at dim-1, shorter first on a common prefix."""
    _check_same_dim(a, b)
    if a.dim == 0:
        return 0
    for x, y in zip(a.entries, b.entries):
        c = lex_compare(x, y)
        if c:
            return c
    return (len(a.entries) > len(b.entries)) - (len(a.entries) < len(b.entries))


def parent(a: Address) -> Address:
    """Drop the last entry: ``[p[q]] -> [p]``."""
    if a.dim == 0 or not a.entries:
        raise DimensionError(f"{a} has no parent")
    return Address(a.dim, a.entries[:-1])


def last(a: Address) -> Address:
    if a.dim == 0 or not a.entries:
        raise DimensionError(f"{a} has no last entry")
    return a.entries[-1]


def extend(a: Address, q: Address) -> Address:
    """``[p] , q -> [p[q]]``."""
    if q.dim != a.dim - 1:
        raise DimensionError(f"cannot extend {a} by {q}")
    return Address(a.dim, a.entries + (q,))
