"""Subgroup predicates relative to a prime partition sigma."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arith import PrimePartition, prime_divisors
from .errors import DomainError
from .groups import FiniteGroup
from .subgroups import (
    Subgroup,
    core,
    cyclic_subgroups,
    is_normal,
    is_subnormal,
    join,
    lattice,
    meet,
    normalizer,
    permutes,
    whole,
)


def _order_classes(G: FiniteGroup, sigma: PrimePartition) -> list[frozenset]:
    """sigma(|x|) for every element handle."""
    cache = {}
    out = []
    for o in G.element_orders.tolist():
        if o not in cache:
            cache[o] = sigma.sigma_of(o)
        out.append(cache[o])
    return out


def is_sigma_primary_group(G: FiniteGroup, sigma: PrimePartition) -> bool:
    return sigma.is_primary(G.order)


def sigma_nilpotent_by_halls(G: FiniteGroup, sigma: PrimePartition) -> bool:
    """For each class c of |G|, the c-elements form a subgroup of the full c-order.

    Those subgroups are then normal Hall subgroups whose direct product is G.
    """
    orders = G.element_orders
    distinct = np.unique(orders)
    for cls in sigma.sigma_of(G.order):
        ok_orders = [o for o in distinct.tolist() if sigma.is_class_number(o, cls)]
        S = np.flatnonzero(np.isin(orders, ok_orders))
        if len(S) != sigma.sigma_part(G.order, cls):
            return False
        inS = np.zeros(G.order, dtype=bool)
        inS[S] = True
        if not inS[G.table[np.ix_(S, S)]].all():
            return False
    return True


def is_sigma_nilpotent(G: FiniteGroup, sigma: PrimePartition, algorithm: str = "halls") -> bool:
    """``algorithm`` is ``"halls"`` (element sweep) or ``"chief"`` (all chief factors sigma-central)."""
    if algorithm == "halls":
        return sigma_nilpotent_by_halls(G, sigma)
    if algorithm == "chief":
        from .chief import sigma_nilpotent_by_chief
        return sigma_nilpotent_by_chief(G, sigma)
    raise DomainError(f"unknown algorithm {algorithm!r}")


def is_pi_decomposable(G: FiniteGroup, pi) -> bool:
    pi = frozenset(pi)
    if not pi:
        return True
    return is_sigma_nilpotent(G, PrimePartition.pi(pi))


def is_pi_special(G: FiniteGroup, pi) -> bool:
    pi = frozenset(pi)
    if not pi:
        return True
    return is_sigma_nilpotent(G, PrimePartition.one_pi(pi))


# -- sigma-subnormality -----------------------------------------------------

@dataclass(frozen=True)
class SigmaChain:
    """``A = A_0 <= A_1 <= ... <= A_n``; the last term is the ambient group."""

    subgroups: tuple[Subgroup, ...]

    @property
    def bottom(self) -> Subgroup:
        return self.subgroups[0]

    @property
    def top(self) -> Subgroup:
        return self.subgroups[-1]

    def __len__(self) -> int:
        return len(self.subgroups)


def step_ok(B: Subgroup, C: Subgroup, sigma: PrimePartition) -> bool:
    """One chain link: ``B`` normal in ``C`` or ``C / B_C`` sigma-primary."""
    if not B <= C:
        raise DomainError("chain link needs B <= C")
    G = B.parent
    if is_normal(G, B, within=C):
        return True
    return sigma.is_primary(C.order // core(G, B, within=C).order)


def verify_sigma_chain(chain: SigmaChain | Sequence[Subgroup], sigma: PrimePartition) -> bool:
    terms = chain.subgroups if isinstance(chain, SigmaChain) else tuple(chain)
    if not terms:
        raise DomainError("empty chain")
    for B, C in zip(terms, terms[1:]):
        if B.parent is not C.parent or not B <= C:
            raise DomainError("chain terms are not increasing subgroups")
    return all(step_ok(B, C, sigma) for B, C in zip(terms, terms[1:]))


class _SigmaReach:
    """Upward search for sigma-chains on a fixed lattice and partition.

    ``reach(a)`` maps every subgroup ``m`` with ``a`` sigma-subnormal in ``m``
    to its predecessor on one witnessing strict chain.
    """

    def __init__(self, L, sigma: PrimePartition):
        self.L = L
        self.sigma = sigma
        self._step: dict[tuple[int, int], bool] = {}
        self._reach: dict[int, dict[int, int]] = {}

    def step(self, k: int, m: int) -> bool:
        key = (k, m)
        if key not in self._step:
            L = self.L
            self._step[key] = L.normal_in(k, m) or self.sigma.is_primary(
                int(L.orders[m]) // L.core_order_in(k, m))
        return self._step[key]

    def reach(self, a: int) -> dict[int, int]:
        if a not in self._reach:
            le = self.L.le
            parent = {a: -1}
            frontier = [a]
            while frontier:
                nxt = []
                for k in frontier:
                    for m in np.flatnonzero(le[k]).tolist():
                        if m not in parent and self.step(k, m):
                            parent[m] = k
                            nxt.append(m)
                frontier = nxt
            self._reach[a] = parent
        return self._reach[a]

    def chain(self, a: int, top: int) -> list[int] | None:
        parent = self.reach(a)
        if top not in parent:
            return None
        path = [top]
        while path[-1] != a:
            path.append(parent[path[-1]])
        return path[::-1]


def _reach_for(G: FiniteGroup, sigma: PrimePartition) -> _SigmaReach:
    L = lattice(G)
    store = G._cache.setdefault("sigma_reach", {})
    if sigma not in store:
        store[sigma] = _SigmaReach(L, sigma)
    return store[sigma]


def is_sigma_subnormal(G: FiniteGroup, A: Subgroup, sigma: PrimePartition,
                       within: Subgroup | None = None) -> tuple[bool, SigmaChain | None]:
    """Decide sigma-subnormality of ``A`` in ``within`` (default ``G``) with a witness chain."""
    top = whole(G) if within is None else within
    if not A <= top:
        raise DomainError("A is not contained in the ambient subgroup")
    L = lattice(G)
    path = _reach_for(G, sigma).chain(L.index_of(A), L.index_of(top))
    if path is None:
        return False, None
    return True, SigmaChain(tuple(L[i] for i in path))


# -- modularity -------------------------------------------------------------

def modular_violation(G: FiniteGroup, A: Subgroup, within: Subgroup | None = None):
    """First failure of the modular identities for ``A`` in the lattice of ``within``.

    Returns ``None`` when ``A`` is modular, else ``("i", X, Z)`` or ``("ii", Y, Z)``.
    """
    L = lattice(G)
    a = L.index_of(A)
    idx = np.arange(len(L)) if within is None else L.below(L.index_of(within))
    if within is not None and not A <= within:
        raise DomainError("A is not contained in the ambient subgroup")
    J, M, le = L.join_table, L.meet_table, L.le
    # (i) <X, A n Z> = <X, A> n Z whenever X <= Z
    xi, zi = np.nonzero(le[np.ix_(idx, idx)])
    X, Z = idx[xi], idx[zi]
    bad = J[X, M[a, Z]] != M[J[X, a], Z]
    if bad.any():
        k = int(np.argmax(bad))
        return ("i", L[X[k]], L[Z[k]])
    # (ii) <A, Y n Z> = <A, Y> n Z whenever A <= Z
    Zs = idx[le[a, idx]]
    Y = np.repeat(idx, len(Zs))
    Z = np.tile(Zs, len(idx))
    bad = J[a, M[Y, Z]] != M[J[a, Y], Z]
    if bad.any():
        k = int(np.argmax(bad))
        return ("ii", L[Y[k]], L[Z[k]])
    return None


def is_modular(G: FiniteGroup, A: Subgroup, within: Subgroup | None = None) -> bool:
    return modular_violation(G, A, within) is None


def refute_modular(G: FiniteGroup, A: Subgroup, budget: int = 10_000):
    """Search small subgroups for a failure of the modular identities.

    Uses only cyclic subgroups and subgroups generated by one extra element,
    so it never needs the full lattice. Returns ``("ii", Y, Z)`` or
    ``("i", X, Z)`` on success, ``None`` when the budget of candidate pairs
    runs out; ``None`` does not prove modularity.
    """
    cyclic = [C for _, C in cyclic_subgroups(G)]
    spent = 0
    # (ii): Z ranges over <A, x>, Y over cyclic subgroups
    zs = {}
    for C in cyclic:
        Z = join(A, C)
        zs.setdefault(Z.key, Z)
    for Z in sorted(zs.values(), key=lambda H: H.order):
        for Y in cyclic:
            spent += 1
            if spent > budget:
                return None
            if join(A, meet(Y, Z)) != meet(join(A, Y), Z):
                return ("ii", Y, Z)
    # (i): X cyclic, Z = <X, y>
    for X in cyclic:
        AX = join(X, A)
        for Yc in cyclic:
            spent += 1
            if spent > budget:
                return None
            Z = join(X, Yc)
            if join(X, meet(A, Z)) != meet(AX, Z):
                return ("i", X, Z)
    return None


# -- permutability ----------------------------------------------------------

def is_quasinormal(G: FiniteGroup, A: Subgroup) -> bool:
    """``A`` permutes with every cyclic subgroup, hence with every subgroup."""
    return all(permutes(A, C) for _, C in cyclic_subgroups(G))


def is_quasinormal_by_lattice(G: FiniteGroup, A: Subgroup) -> bool:
    return all(permutes(A, L) for L in lattice(G))


def is_sigma_quasinormal(G: FiniteGroup, A: Subgroup, sigma: PrimePartition,
                         within: Subgroup | None = None) -> bool:
    return (is_modular(G, A, within)
            and is_sigma_subnormal(G, A, sigma, within)[0])


def is_sigma_seminormal(G: FiniteGroup, A: Subgroup, sigma: PrimePartition) -> bool:
    """Every ``x`` with sigma(|x|) disjoint from sigma(|A|) normalizes ``A``."""
    sa = sigma.sigma_of(A.order)
    classes = _order_classes(G, sigma)
    xs = [x for x in range(G.order) if not (classes[x] & sa)]
    N = normalizer(G, A)
    return bool(N.mask[xs].all()) if xs else True


def is_seminormal(G: FiniteGroup, A: Subgroup) -> bool:
    """Every ``x`` with pi(|x|) disjoint from pi(|A|) normalizes ``A``."""
    pa = prime_divisors(A.order)
    orders = G.element_orders.tolist()
    xs = [x for x in range(G.order) if not (prime_divisors(orders[x]) & pa)]
    N = normalizer(G, A)
    return bool(N.mask[xs].all()) if xs else True


def classify(G: FiniteGroup, A: Subgroup, sigma: PrimePartition) -> dict[str, bool]:
    """Every predicate flag for one subgroup."""
    modular = is_modular(G, A)
    sub = is_subnormal(G, A)
    ssub = is_sigma_subnormal(G, A, sigma)[0]
    return {
        "modular": modular,
        "subnormal": sub,
        "sigma_subnormal": ssub,
        "quasinormal": is_quasinormal(G, A),
        "sigma_quasinormal": modular and ssub,
        "seminormal": is_seminormal(G, A),
        "sigma_seminormal": is_sigma_seminormal(G, A, sigma),
    }

