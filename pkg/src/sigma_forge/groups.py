"""Fully enumerated finite groups.

Elements are dense integer handles ``0..order-1`` with ``0`` the identity.
Groups built from permutations order their handles by the lexicographic
order of the image arrays, so handle numbering does not depend on the
generators supplied. Products follow the left-to-right convention:
``(a*b)[i] == b[a[i]]`` (apply ``a`` first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ResourceLimitError

TABLE_LIMIT = 4096
DEFAULT_ELEMENT_LIMIT = 200_000

_rng = np.random.default_rng(0x5EED)
_HASH_COEFFS = _rng.integers(1, 2**62, size=(2, 4096), dtype=np.int64) | 1


def _row_keys(rows: np.ndarray) -> np.ndarray:
    """Two independent 64-bit hashes per row, combined into a structured key."""
    d = rows.shape[1]
    r = rows.astype(np.int64)
    k1 = r @ _HASH_COEFFS[0, :d]
    k2 = (r * r + 7) @ _HASH_COEFFS[1, :d]
    return k1 * np.int64(1_000_003) + k2


def _check_permutation(img: Sequence[int], degree: int) -> np.ndarray:
    arr = np.asarray(img, dtype=np.int64)
    if arr.shape != (degree,) or sorted(arr.tolist()) != list(range(degree)):
        raise DomainError(f"{list(img)!r} is not a permutation of 0..{degree - 1}")
    return arr


def _closure(degree: int, gens: list[np.ndarray], limit: int) -> np.ndarray:
    """Breadth-first closure of ``gens`` under composition; rows are elements."""
    ident = np.arange(degree, dtype=np.int64)[None, :]
    if degree == 0:
        return np.zeros((1, 0), dtype=np.int64)
    found = [ident]
    seen = set(_row_keys(ident).tolist())
    frontier = ident
    total = 1
    while len(frontier):
        fresh = []
        for g in gens:
            prod = g[frontier]  # (f*g)[i] = g[f[i]]
            keys = _row_keys(prod)
            _, first = np.unique(keys, return_index=True)
            mask = np.zeros(len(prod), dtype=bool)
            for i in first:
                k = int(keys[i])
                if k not in seen:
                    seen.add(k)
                    mask[i] = True
            if mask.any():
                fresh.append(prod[mask])
        frontier = np.concatenate(fresh) if fresh else np.zeros((0, degree), dtype=np.int64)
        total += len(frontier)
        if total > limit:
            raise ResourceLimitError(f"group closure exceeds element limit {limit}")
        if len(frontier):
            found.append(frontier)
    elements = np.concatenate(found)
    if len(np.unique(elements, axis=0)) != len(elements):  # pragma: no cover - hash collision
        raise RuntimeError("permutation hash collision")
    return elements


class FiniteGroup:
    """A finite group with dense handles.

    Either a Cayley table is given directly (``table``) or the group is built
    from a full list of permutations (``perms``); at most ``TABLE_LIMIT``
    elements get a table, larger groups multiply by composing permutations.
    """

    def __init__(self, table: np.ndarray | None = None, perms: np.ndarray | None = None,
                 name: str | None = None):
        if table is None and perms is None:
            raise DomainError("need a table or permutations")
        self.name = name
        self._perms = None if perms is None else np.asarray(perms, dtype=np.int64)
        self._table = None if table is None else np.asarray(table)
        self.order = len(self._table) if self._table is not None else len(self._perms)
        self._keys_sorted = None
        self._key_index = None
        self._cache: dict = {}
        if self._table is None and self.order <= TABLE_LIMIT:
            self._table = self._table_from_perms()
        if self._table is not None:
            if self._table[0].tolist() != list(range(self.order)):
                raise DomainError("handle 0 must be the identity")
            self.inverse = np.argmax(self._table == 0, axis=1)
        else:
            self.inverse = self.lookup(np.argsort(self._perms, axis=1))

    # -- construction helpers -------------------------------------------
    def _perm_lookup_setup(self):
        if self._key_index is None:
            keys = _row_keys(self._perms)
            order = np.argsort(keys, kind="stable")
            if len(np.unique(keys)) != len(keys):  # pragma: no cover
                raise RuntimeError("permutation hash collision")
            self._keys_sorted = keys[order]
            self._key_index = order

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Handles of the given permutation rows; ``DomainError`` if absent."""
        if self._perms is None:
            raise DomainError("group has no permutation images")
        self._perm_lookup_setup()
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
        if rows.shape[1] != self.degree:
            raise DomainError(f"expected images on {self.degree} points")
        keys = _row_keys(rows)
        pos = np.searchsorted(self._keys_sorted, keys)
        pos = np.minimum(pos, self.order - 1)
        handles = self._key_index[pos]
        ok = np.all(self._perms[handles] == rows, axis=1)
        if not ok.all():
            raise DomainError("permutation is not an element of the group")
        return handles

    def _table_from_perms(self) -> np.ndarray:
        n = self.order
        dtype = np.int16 if n < 2**15 else np.int32
        table = np.empty((n, n), dtype=dtype)
        for a in range(n):
            table[a] = self.lookup(self._perms[:, self._perms[a]])
        return table

    # -- basic accessors ---------------------------------------------------
    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise ResourceLimitError(
                f"order {self.order} exceeds the Cayley table limit {TABLE_LIMIT}")
        return self._table

    @property
    def has_table(self) -> bool:
        return self._table is not None

    @property
    def perms(self) -> np.ndarray:
        """Permutation images of every element (regular representation if built from a table)."""
        if self._perms is None:
            # right regular representation: x -> x*g
            self._perms = self._table.T.astype(np.int64)
        return self._perms

    @property
    def degree(self) -> int:
        return self.perms.shape[1]

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        return int(self.lookup(self._perms[b][self._perms[a]])[0])

    def mul_many(self, a, b) -> np.ndarray:
        """Elementwise products of broadcastable handle arrays."""
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        if self._table is not None:
            return self._table[a, b]
        flat = self.lookup(np.take_along_axis(
            self._perms[b.ravel()], self._perms[a.ravel()], axis=1))
        return flat.reshape(a.shape)

    def conjugate(self, x: int, g: int) -> int:
        """``g^-1 x g``."""
        return self.mul(self.mul(int(self.inverse[g]), x), g)

    def commutator(self, x: int, y: int) -> int:
        """``[x, y] = x^-1 y^-1 x y``."""
        return self.mul(self.mul(int(self.inverse[x]), int(self.inverse[y])), self.mul(x, y))

    def power(self, x: int, k: int) -> int:
        result, base = 0, x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    @property
    def element_orders(self) -> np.ndarray:
        if "orders" not in self._cache:
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            cur = np.arange(n)
            k = 1
            while (orders == 0).any():
                done = (cur == 0) & (orders == 0)
                orders[done] = k
                cur = self.mul_many(cur, np.arange(n))
                k += 1
            self._cache["orders"] = orders
        return self._cache["orders"]

    def element_order(self, h: int) -> int:
        if "orders" in self._cache or self._table is not None:
            return int(self.element_orders[h])
        # lcm of cycle lengths; avoids sweeping every element of a big group
        perm, seen, k = self._perms[h], np.zeros(self.degree, dtype=bool), 1
        for start in range(self.degree):
            if not seen[start]:
                n, j = 0, start
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    n += 1
                k = math.lcm(k, n)
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return bool((t == t.T).all())

    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    def center_size(self) -> int:
        t = self.table
        return int((t == t.T).all(axis=1).sum())

    def validate(self, sample: int = 2000) -> None:
        """Check the group axioms; exhaustive for order <= 2000, sampled above."""
        t = self.table
        n = self.order
        if (t[0] != np.arange(n)).any() or (t[:, 0] != np.arange(n)).any():
            raise DomainError("identity law fails")
        if (t[np.arange(n), self.inverse] != 0).any():
            raise DomainError("inverse law fails")
        for row in t:
            if len(np.unique(row)) != n:
                raise DomainError("table is not a Latin square")
        if n <= 2000:
            a = np.arange(n)
            for b in range(n):
                # (a*b)*c == a*(b*c) for all a, c
                if (t[t[a, b]] != t[a][:, t[b]]).any():
                    raise DomainError("associativity fails")
        else:
            rng = np.random.default_rng(1)
            a, b, c = rng.integers(0, n, size=(3, sample))
            if (t[t[a, b], c] != t[a, t[b, c]]).any():
                raise DomainError("associativity fails")

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<FiniteGroup {label} of order {self.order}>"

    # -- alternate constructors -------------------------------------------
    @classmethod
    def from_table(cls, table, name: str | None = None) -> "FiniteGroup":
        """Wrap a Cayley table whose row/column 0 is the identity."""
        table = np.asarray(table)
        n = table.shape[0]
        if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
            raise DomainError("malformed Cayley table")
        dtype = np.int16 if n < 2**15 else np.int32
        return cls(table=table.astype(dtype), name=name)

    @classmethod
    def from_permutation_list(cls, perms: np.ndarray, name: str | None = None) -> "FiniteGroup":
        perms = np.asarray(perms, dtype=np.int64)
        if perms.shape[1] == 0:
            return cls(perms=perms[:1], name=name)
        order = np.lexsort(perms.T[::-1])
        return cls(perms=perms[order], name=name)


def group_from_permutations(degree: int, generators: Sequence[Sequence[int]],
                            limit: int = DEFAULT_ELEMENT_LIMIT,
                            name: str | None = None) -> FiniteGroup:
    """The permutation group on ``degree`` points generated by ``generators``."""
    if degree < 0:
        raise DomainError("degree must be non-negative")
    gens = [_check_permutation(g, degree) for g in generators]
    elements = _closure(degree, gens, limit)
    return FiniteGroup.from_permutation_list(elements, name=name)


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by its full handle map."""

    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def __call__(self, h):
        return self.images[h]

    def image_of(self, handles) -> np.ndarray:
        return np.unique(self.images[np.asarray(handles)])

    def kernel(self) -> np.ndarray:
        return np.flatnonzero(self.images == 0)


def quotient_group(G: FiniteGroup, normal) -> tuple[FiniteGroup, GroupHom]:
    """``G/N`` as a fresh group, with the canonical surjection.

    ``normal`` is anything with an ``elements`` array or a handle array.
    Cosets are numbered by their minimal handle, so the identity coset is 0.
    """
    N = np.asarray(getattr(normal, "elements", normal))
    t = G.table
    conj = t[t[G.inverse][:, N], np.arange(G.order)[:, None]]  # g^-1 n g
    member = np.zeros(G.order, dtype=bool)
    member[N] = True
    if not member[conj].all():
        raise DomainError("quotient by a subgroup that is not normal")
    reps_of = t[:, N].min(axis=1)
    reps = np.unique(reps_of)
    index = np.full(G.order, -1, dtype=np.int64)
    index[reps] = np.arange(len(reps))
    images = index[reps_of]
    qtable = images[t[np.ix_(reps, reps)]]
    label = f"{G.name}/N{len(N)}" if G.name else None
    Q = FiniteGroup.from_table(qtable, name=label)
    return Q, GroupHom(G, Q, images)


def subgroup_as_group(G: FiniteGroup, elements) -> tuple[FiniteGroup, GroupHom]:
    """The subgroup on ``elements`` as a group in its own right, with its embedding."""
    els = np.unique(np.asarray(elements))
    if els[0] != 0:
        raise DomainError("subgroup must contain the identity")
    index = np.full(G.order, -1, dtype=np.int64)
    index[els] = np.arange(len(els))
    sub = index[G.table[np.ix_(els, els)]]
    if (sub < 0).any():
        raise DomainError("element set is not closed under multiplication")
    if G._perms is not None:
        H = FiniteGroup(table=sub.astype(G.table.dtype), perms=G.perms[els])
    else:
        H = FiniteGroup.from_table(sub)
    return H, GroupHom(H, G, els)
