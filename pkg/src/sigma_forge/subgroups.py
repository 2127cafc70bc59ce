"""Subgroups, the subgroup lattice, and standard subgroup constructions."""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .arith import ClassId, PrimePartition, factorize
from .errors import DomainError, ResourceLimitError
from .groups import FiniteGroup


@dataclass
class LatticeLimits:
    max_order: int = 2000
    max_subgroups: int = 20_000


LIMITS = LatticeLimits()


@contextlib.contextmanager
def lattice_limits(max_order: int | None = None, max_subgroups: int | None = None):
    """Temporarily change the lattice enumeration limits."""
    saved = (LIMITS.max_order, LIMITS.max_subgroups)
    if max_order is not None:
        LIMITS.max_order = max_order
    if max_subgroups is not None:
        LIMITS.max_subgroups = max_subgroups
    try:
        yield LIMITS
    finally:
        LIMITS.max_order, LIMITS.max_subgroups = saved


class Subgroup:
    """A subgroup of ``parent`` given by its sorted element handles.

    Two subgroups are equal when they have the same parent and members.
    """

    __slots__ = ("parent", "elements", "_mask", "_key")

    def __init__(self, parent: FiniteGroup, elements):
        self.parent = parent
        self.elements = np.unique(np.asarray(elements, dtype=np.int64))
        self._mask = None
        self._key = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.parent.order, dtype=bool)
            m[self.elements] = True
            self._mask = m
        return self._mask

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = np.packbits(self.mask).tobytes()
        return self._key

    def __contains__(self, h) -> bool:
        return bool(self.mask[h])

    def __len__(self) -> int:
        return self.order

    def __le__(self, other: "Subgroup") -> bool:
        _same_parent(self, other)
        return bool(other.mask[self.elements].all())

    def __lt__(self, other: "Subgroup") -> bool:
        return self.order < other.order and self <= other

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.parent is other.parent
                and self.key == other.key)

    def __hash__(self) -> int:
        return hash(self.key)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def generators(self) -> list[int]:
        """A small generating set, chosen greedily (largest element orders first)."""
        G = self.parent
        orders = G.element_orders[self.elements]
        ranked = self.elements[np.lexsort((self.elements, -orders))]
        gens: list[int] = []
        current = _trivial_state(G)
        for x in ranked:
            if not current.member[x]:
                gens.append(int(x))
                current.extend(G, gens)
            if len(current.elements) == self.order:
                break
        return gens

    def __repr__(self) -> str:
        shown = self.elements[:8].tolist()
        more = "..." if self.order > 8 else ""
        return f"<Subgroup order={self.order} of {self.parent.order}: {shown}{more}>"


def _same_parent(A: Subgroup, B: Subgroup) -> None:
    if A.parent is not B.parent:
        raise DomainError("subgroups belong to different groups")


class _Closure:
    """Growing subgroup kept as a union of right cosets of the previous stage."""

    def __init__(self, elements: np.ndarray, member: np.ndarray):
        self.elements = elements
        self.member = member

    def extend(self, G: FiniteGroup, gens: list[int]) -> None:
        H = self.elements
        pieces = [H]
        reps = [0]
        i = 0
        while i < len(reps):
            r = reps[i]
            i += 1
            for g in gens:
                y = G.mul(r, g)
                if not self.member[y]:
                    coset = G.mul_many(H, y)
                    self.member[coset] = True
                    pieces.append(coset)
                    reps.append(int(y))
        if len(pieces) > 1:
            self.elements = np.sort(np.concatenate(pieces)).astype(np.int64)


def _trivial_state(G: FiniteGroup) -> _Closure:
    member = np.zeros(G.order, dtype=bool)
    member[0] = True
    return _Closure(np.array([0], dtype=np.int64), member)


def _generate(G: FiniteGroup, seed: Iterable[int], start: Subgroup | None = None,
              start_gens: list[int] | None = None) -> Subgroup:
    if start is None:
        state = _trivial_state(G)
        gens: list[int] = []
    else:
        state = _Closure(start.elements.copy(), start.mask.copy())
        gens = list(start_gens) if start_gens is not None else start.generators()
    for s in np.asarray(list(seed) if not isinstance(seed, np.ndarray) else seed).ravel():
        s = int(s)
        if not state.member[s]:
            gens.append(s)
            state.extend(G, gens)
    return Subgroup(G, state.elements)


def generated(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """The subgroup generated by a set of handles."""
    return _generate(G, seed)


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, np.arange(G.order))


def trivial(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, [0])


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    _same_parent(A, B)
    if B <= A:
        return A
    if A <= B:
        return B
    return _generate(A.parent, B.elements, start=A)


def meet(A: Subgroup, B: Subgroup) -> Subgroup:
    _same_parent(A, B)
    return Subgroup(A.parent, A.elements[B.mask[A.elements]])


def product_set(A: Subgroup, B: Subgroup) -> np.ndarray:
    _same_parent(A, B)
    return np.unique(A.parent.table[np.ix_(A.elements, B.elements)])


def permutes(A: Subgroup, B: Subgroup) -> bool:
    """Whether ``AB == BA`` as sets."""
    _same_parent(A, B)
    t = A.parent.table
    ab = np.zeros(A.parent.order, dtype=bool)
    ab[t[np.ix_(A.elements, B.elements)]] = True
    ba = np.zeros(A.parent.order, dtype=bool)
    ba[t[np.ix_(B.elements, A.elements)]] = True
    return bool((ab == ba).all())


def conjugation_table(G: FiniteGroup) -> np.ndarray:
    """``c[g, x] == g^-1 x g``."""
    if "conj" not in G._cache:
        t = G.table
        G._cache["conj"] = t[t[G.inverse], np.arange(G.order)[:, None]]
    return G._cache["conj"]


def _rows(G: FiniteGroup, within: Subgroup | None) -> np.ndarray:
    return np.arange(G.order) if within is None else within.elements


def conjugate_subgroup(A: Subgroup, g: int) -> Subgroup:
    return Subgroup(A.parent, conjugation_table(A.parent)[g, A.elements])


def normalizer(G: FiniteGroup, A: Subgroup, within: Subgroup | None = None) -> Subgroup:
    rows = _rows(G, within)
    conj = conjugation_table(G)[np.ix_(rows, A.elements)]
    return Subgroup(G, rows[A.mask[conj].all(axis=1)])


def centralizer(G: FiniteGroup, S, within: Subgroup | None = None) -> Subgroup:
    S = np.asarray(getattr(S, "elements", S), dtype=np.int64).ravel()
    rows = _rows(G, within)
    t = G.table
    if len(S) == 0:
        return Subgroup(G, rows)
    ok = (t[np.ix_(rows, S)] == t[np.ix_(S, rows)].T).all(axis=1)
    return Subgroup(G, rows[ok])


def is_normal(G: FiniteGroup, A: Subgroup, within: Subgroup | None = None) -> bool:
    rows = _rows(G, within)
    return bool(A.mask[conjugation_table(G)[np.ix_(rows, A.elements)]].all())


def core(G: FiniteGroup, A: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """Largest subgroup of ``A`` normal in ``within`` (default ``G``)."""
    rows = _rows(G, within)
    conj = conjugation_table(G)[np.ix_(rows, A.elements)]
    return Subgroup(G, A.elements[A.mask[conj].all(axis=0)])


def normal_closure(G: FiniteGroup, A: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """Smallest subgroup of ``within`` (default ``G``) normal there and containing ``A``."""
    rows = _rows(G, within)
    seed = np.unique(conjugation_table(G)[np.ix_(rows, A.elements)])
    return _generate(G, seed, start=A)


def is_subnormal(G: FiniteGroup, A: Subgroup) -> bool:
    """Descending series ``G_{k+1} = A^{G_k}`` reaches ``A``."""
    cur = whole(G)
    while True:
        if cur.order == A.order:
            return cur == A
        nxt = normal_closure(G, A, within=cur)
        if nxt.order == cur.order:
            return False
        cur = nxt


def cyclic_subgroups(G: FiniteGroup) -> list[tuple[int, Subgroup]]:
    """Distinct cyclic subgroups, each with its least-handle generator."""
    if "cyclic" not in G._cache:
        found: dict[bytes, tuple[int, Subgroup]] = {}
        seen = np.zeros(G.order, dtype=bool)
        for x in range(G.order):
            if seen[x]:
                continue
            powers = [0]
            y = x
            while y != 0:
                powers.append(y)
                y = G.mul(y, x)
            C = Subgroup(G, powers)
            # generators of C are the powers coprime to |C|; mark them handled
            k = C.order
            y = x
            for e in range(1, k + 1):
                if np.gcd(e, k) == 1:
                    seen[y] = True
                y = G.mul(y, x)
            found.setdefault(C.key, (x, C))
        G._cache["cyclic"] = sorted(found.values(), key=lambda xc: (xc[1].order, xc[1].elements.tolist()))
    return G._cache["cyclic"]


# -- lattice enumeration --------------------------------------------------

def _check_limits(G: FiniteGroup) -> None:
    if G.order > LIMITS.max_order:
        raise ResourceLimitError(
            f"order {G.order} exceeds lattice limit {LIMITS.max_order}")


def enumerate_by_cyclic_joins(G: FiniteGroup) -> list[Subgroup]:
    """All subgroups: cyclic seeds closed under joins with prime-power cyclic subgroups.

    Every subgroup is generated by its elements of prime-power order, so
    extending known subgroups one such cyclic subgroup at a time reaches all.
    """
    _check_limits(G)
    cyclic = cyclic_subgroups(G)
    extenders = [(x, C) for x, C in cyclic if len(factorize(C.order)) == 1]
    found: dict[bytes, Subgroup] = {}
    gens: dict[bytes, list[int]] = {}
    queue: list[Subgroup] = []

    def add(H: Subgroup, hgens: list[int]) -> None:
        if H.key not in found:
            found[H.key] = H
            gens[H.key] = hgens
            queue.append(H)
            if len(found) > LIMITS.max_subgroups:
                raise ResourceLimitError(
                    f"more than {LIMITS.max_subgroups} subgroups")

    add(trivial(G), [])
    for x, C in cyclic:
        add(C, [x])
    i = 0
    while i < len(queue):
        H = queue[i]
        i += 1
        for x, C in extenders:
            if H.mask[x]:
                continue
            hg = gens[H.key]
            K = _generate(G, [x], start=H, start_gens=hg)
            add(K, hg + [x])
    return sorted(found.values(), key=_lattice_key)


def enumerate_by_extension(G: FiniteGroup) -> list[frozenset[int]]:
    """All subgroups as frozensets, by an independent pure-Python route.

    Works up to conjugacy: each class representative ``H`` is extended by one
    representative of every right coset ``Hg`` outside ``H`` (``<H, g>``
    depends only on the coset), closures are plain breadth-first searches, and
    every new subgroup contributes its whole conjugacy class.
    """
    _check_limits(G)
    t = G.table.tolist()
    inv = G.inverse.tolist()
    n = G.order

    def close(gens: list[int]) -> frozenset[int]:
        members = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                row = t[a]
                for g in gens:
                    b = row[g]
                    if b not in members:
                        members.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(members)

    def conjugates(H: frozenset[int]) -> set[frozenset[int]]:
        return {frozenset(t[t[inv[g]][h]][g] for h in H) for g in range(n)}

    start = frozenset([0])
    every: set[frozenset[int]] = {start}
    reps: list[tuple[frozenset[int], list[int]]] = [(start, [])]
    i = 0
    while i < len(reps):
        H, hgens = reps[i]
        i += 1
        covered = set(H)
        for g in range(n):
            if g in covered:
                continue
            covered.update(t[h][g] for h in H)
            K = close(hgens + [g])
            if K not in every:
                every |= conjugates(K)
                reps.append((K, hgens + [g]))
                if len(every) > LIMITS.max_subgroups:
                    raise ResourceLimitError(
                        f"more than {LIMITS.max_subgroups} subgroups")
    return sorted(every, key=lambda s: (len(s), sorted(s)))


def _lattice_key(H: Subgroup):
    return (H.order, H.elements.tolist())


class SubgroupLattice:
    """The enumerated subgroup lattice of ``G`` with cached order relations.

    Subgroups are sorted by ``(order, sorted members)``; positions in that
    list are the lattice indices used by the ``join``/``meet`` tables.
    """

    def __init__(self, G: FiniteGroup):
        self.group = G
        self.subgroups = enumerate_by_cyclic_joins(G)
        self.index = {H.key: i for i, H in enumerate(self.subgroups)}
        self.orders = np.array([H.order for H in self.subgroups])
        members = np.array([H.mask for H in self.subgroups], dtype=np.int32)
        inter = members @ members.T
        self.le = inter == self.orders[:, None]
        self._join = None
        self._meet = None
        self._normal = None
        self._core_cache: dict[tuple[int, int], int] = {}
        self._normal_in_cache: dict[tuple[int, int], bool] = {}

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self) -> Iterator[Subgroup]:
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> Subgroup:
        return self.subgroups[i]

    def index_of(self, H: Subgroup) -> int:
        try:
            return self.index[H.key]
        except KeyError:
            raise DomainError("not a subgroup of this group") from None

    @property
    def top(self) -> int:
        return len(self.subgroups) - 1

    @property
    def join_table(self) -> np.ndarray:
        if self._join is None:
            le = self.le
            n = len(le)
            J = np.empty((n, n), dtype=np.int32)
            for i in range(n):
                J[i] = np.argmax(le[i][None, :] & le, axis=1)
            self._join = J
        return self._join

    @property
    def meet_table(self) -> np.ndarray:
        if self._meet is None:
            le = self.le
            n = len(le)
            M = np.empty((n, n), dtype=np.int32)
            rev = le[::-1].T  # rev[j, k'] = le[n-1-k', j]
            for i in range(n):
                M[i] = n - 1 - np.argmax(rev[i][None, :] & rev, axis=1)
            self._meet = M
        return self._meet

    @property
    def normal_flags(self) -> np.ndarray:
        if self._normal is None:
            G = self.group
            self._normal = np.array([is_normal(G, H) for H in self.subgroups])
        return self._normal

    def below(self, b: int) -> np.ndarray:
        """Indices of subgroups contained in subgroup ``b``."""
        return np.flatnonzero(self.le[:, b])

    def normal_in(self, k: int, m: int) -> bool:
        """Whether subgroup ``k`` is normal in subgroup ``m`` (``k <= m``)."""
        key = (k, m)
        if key not in self._normal_in_cache:
            self._normal_in_cache[key] = is_normal(
                self.group, self.subgroups[k], within=self.subgroups[m])
        return self._normal_in_cache[key]

    def core_order_in(self, k: int, m: int) -> int:
        """Order of the core of subgroup ``k`` in subgroup ``m``."""
        key = (k, m)
        if key not in self._core_cache:
            if self.normal_in(k, m):
                self._core_cache[key] = int(self.orders[k])
            else:
                self._core_cache[key] = core(
                    self.group, self.subgroups[k], within=self.subgroups[m]).order
        return self._core_cache[key]


def lattice(G: FiniteGroup) -> SubgroupLattice:
    """The cached subgroup lattice; the current limits apply even on a cache hit."""
    if "lattice" not in G._cache:
        G._cache["lattice"] = SubgroupLattice(G)
    else:
        _check_limits(G)
    L = G._cache["lattice"]
    if len(L) > LIMITS.max_subgroups:
        raise ResourceLimitError(f"more than {LIMITS.max_subgroups} subgroups")
    return L


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    return list(lattice(G).subgroups)


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    L = lattice(G)
    return [H for H, f in zip(L.subgroups, L.normal_flags) if f]


def minimal_normal_above(G: FiniteGroup, N: Subgroup) -> list[Subgroup]:
    """Normal ``M > N`` with no normal subgroup of ``G`` strictly between."""
    if not is_normal(G, N):
        raise DomainError("minimal_normal_above needs a normal subgroup")
    L = lattice(G)
    n = L.index_of(N)
    above = [i for i in np.flatnonzero(L.normal_flags & L.le[n]) if i != n]
    out = []
    for i in above:
        if not any(j != i and L.le[j, i] for j in above):
            out.append(L.subgroups[i])
    return out


def hall_subgroups(G: FiniteGroup, cls: ClassId, sigma: PrimePartition) -> list[Subgroup]:
    target = sigma.sigma_part(G.order, cls)
    return [H for H in lattice(G) if H.order == target]


def sylow_subgroups(G: FiniteGroup, p: int) -> list[Subgroup]:
    return hall_subgroups(G, ClassId("singleton", p), PrimePartition.sigma1())
