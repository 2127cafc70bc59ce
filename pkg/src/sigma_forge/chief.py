"""Chief series, sigma-central chief factors, the sigma-hypercentre,
sigma-radicals and residuals, P-groups and Schmidt's decomposition of a
group relative to a modular core-free subgroup."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from .arith import ClassId, PrimePartition, factorize
from .errors import DomainError, FalsificationError
from .groups import FiniteGroup, subgroup_as_group
from .predicates import is_modular, is_quasinormal
from .subgroups import (
    Subgroup,
    conjugation_table,
    core,
    is_normal,
    join,
    meet,
    minimal_normal_above,
    normal_subgroups,
    trivial,
    whole,
)


@dataclass(frozen=True)
class ChiefFactor:
    """``upper/lower`` with both terms normal in ``group`` and nothing normal between."""

    group: FiniteGroup
    lower: Subgroup
    upper: Subgroup

    @property
    def order(self) -> int:
        return self.upper.order // self.lower.order

    def is_valid(self) -> bool:
        G = self.group
        if not (self.lower < self.upper and is_normal(G, self.lower) and is_normal(G, self.upper)):
            return False
        return any(M == self.upper for M in minimal_normal_above(G, self.lower))

    def __repr__(self) -> str:
        return f"<ChiefFactor {self.upper.order}/{self.lower.order}>"


def chief_series_through(G: FiniteGroup, anchors: Sequence[Subgroup] = ()) -> list[ChiefFactor]:
    """A chief series of ``G`` passing through every anchor, as its factors.

    Each step takes the first (in lattice order) minimal normal subgroup above
    the current term that stays inside the next anchor.
    """
    targets = list(anchors) + [whole(G)]
    prev = trivial(G)
    for T in targets:
        if not is_normal(G, T):
            raise DomainError("chief series anchors must be normal subgroups")
        if not prev <= T:
            raise DomainError("chief series anchors must form an increasing chain")
        prev = T
    factors = []
    cur = trivial(G)
    for T in targets:
        while cur.order < T.order:
            step = next(M for M in minimal_normal_above(G, cur) if M <= T)
            factors.append(ChiefFactor(G, cur, step))
            cur = step
    return factors


def section_centralizer(G: FiniteGroup, upper: Subgroup, lower: Subgroup) -> Subgroup:
    """``{g : [g, h] in lower for every h in upper}``."""
    t = G.table
    inv = G.inverse
    g = np.arange(G.order)[:, None]
    h = upper.elements[None, :]
    comm = t[t[inv[g], inv[h]], t[g, h]]
    return Subgroup(G, np.flatnonzero(lower.mask[comm].all(axis=1)))


def chief_factor_centralizer(f: ChiefFactor) -> Subgroup:
    return section_centralizer(f.group, f.upper, f.lower)


def is_sigma_central(f: ChiefFactor, sigma: PrimePartition) -> bool:
    """The semidirect product of the factor by ``G/C_G(H/K)`` has order
    ``|H/K| * |G : C_G(H/K)|``; it is sigma-primary iff that order is."""
    index = f.group.order // chief_factor_centralizer(f).order
    return sigma.is_primary(f.order * index)


def is_central(f: ChiefFactor) -> bool:
    return chief_factor_centralizer(f).is_whole()


def sigma_nilpotent_by_chief(G: FiniteGroup, sigma: PrimePartition) -> bool:
    return all(is_sigma_central(f, sigma) for f in chief_series_through(G))


def sigma_hypercentre(G: FiniteGroup, sigma: PrimePartition) -> Subgroup:
    """Ascending construction: add every sigma-central minimal normal subgroup
    above the current term until none is left."""
    Z = trivial(G)
    for _ in range(G.order):
        central = [M for M in minimal_normal_above(G, Z)
                   if is_sigma_central(ChiefFactor(G, Z, M), sigma)]
        if not central:
            return Z
        for M in central:
            Z = join(Z, M)
    return Z  # pragma: no cover


def sigma_hypercentre_oracle(G: FiniteGroup, sigma: PrimePartition) -> Subgroup:
    """Largest normal subgroup all of whose chief factors (every covering pair
    of normal subgroups beneath it) are sigma-central. Brute force."""
    normals = normal_subgroups(G)
    covers = []
    for K in normals:
        for H in normals:
            if K < H and not any(K < N < H for N in normals):
                covers.append((K, H))
    hyper = [T for T in normals
             if all(is_sigma_central(ChiefFactor(G, K, H), sigma)
                    for K, H in covers if H <= T)]
    top = max(hyper, key=lambda T: T.order)
    if not all(T <= top for T in hyper):
        raise FalsificationError("sigma-hypercentral normal subgroups have no largest element")
    return top


def hypercentre(G: FiniteGroup) -> Subgroup:
    return sigma_hypercentre(G, PrimePartition.sigma1())


def o_sigma(G: FiniteGroup, cls: ClassId, sigma: PrimePartition) -> Subgroup:
    """Largest normal subgroup whose order involves only primes of ``cls``."""
    sigma._check_class(cls)
    return max((N for N in normal_subgroups(G) if sigma.is_class_number(N.order, cls)),
               key=lambda N: N.order)


def o_sigma_residual(G: FiniteGroup, cls: ClassId, sigma: PrimePartition) -> Subgroup:
    """Smallest normal subgroup whose quotient involves only primes of ``cls``."""
    sigma._check_class(cls)
    return min((N for N in normal_subgroups(G)
                if sigma.is_class_number(G.order // N.order, cls)),
               key=lambda N: N.order)


# -- P-groups ---------------------------------------------------------------

@dataclass(frozen=True)
class PGroupInfo:
    p: int
    q: int
    base: Subgroup        # the normal elementary abelian Sylow p-subgroup
    t: int                # an element of order q
    exponent: int         # a^t == a^exponent for all a in base


def p_group_structure(G: FiniteGroup) -> PGroupInfo | None:
    fac = factorize(G.order)
    if len(fac) != 2:
        return None
    orders = G.element_orders
    conj = conjugation_table(G)
    for q, eq in fac:
        if eq != 1:
            continue
        p = fac[0][0] if fac[0][0] != q else fac[1][0]
        part = G.order // q
        base = np.flatnonzero(np.isin(orders, [1, p]))
        if len(base) != part:
            continue  # Sylow p not normal, or not of exponent p
        A = Subgroup(G, base)
        if not A.mask[G.table[np.ix_(base, base)]].all():
            continue
        sub = G.table[np.ix_(base, base)]
        if not (sub == sub.T).all():
            continue
        t = int(np.flatnonzero(orders == q)[0])
        a0 = int(base[1])
        image = int(conj[t, a0])
        e, y = 1, a0
        while y != image and e < p:
            y = G.mul(y, a0)
            e += 1
        if y != image or e == 1:
            continue  # t does not act by a non-trivial power map
        powers = np.array([G.power(int(a), e) for a in base])
        if (conj[t, base] == powers).all():
            return PGroupInfo(p, q, A, t, e)
    return None


def is_p_group_of_type(G: FiniteGroup) -> tuple[int, int] | None:
    """``(p, q)`` when ``G`` is a P-group of type ``(p, q)``, else ``None``."""
    info = p_group_structure(G)
    return None if info is None else (info.p, info.q)


# -- Schmidt decomposition --------------------------------------------------

@dataclass(frozen=True)
class SchmidtDecomposition:
    factors: tuple[Subgroup, ...]      # the P-groups S_i
    rest: Subgroup                     # K
    sylows: tuple[Subgroup, ...]       # Q_i = M n S_i

    @property
    def r(self) -> int:
        return len(self.factors)


def coprime_direct_factors(G: FiniteGroup) -> list[Subgroup]:
    """The finest decomposition of ``G`` into normal subgroups of pairwise coprime order."""
    normals = normal_subgroups(G)
    splitting = []
    for N in normals:
        if N.is_trivial():
            continue
        m = G.order // N.order
        if gcd(N.order, m) != 1:
            continue
        if any(C.order == m and meet(N, C).is_trivial() for C in normals):
            splitting.append(N)
    return [N for N in splitting if not any(M < N for M in splitting)]


def schmidt_decomposition(G: FiniteGroup, M: Subgroup) -> SchmidtDecomposition:
    if not is_modular(G, M):
        raise DomainError("Schmidt decomposition needs a modular subgroup")
    if not core(G, M).is_trivial():
        raise DomainError("Schmidt decomposition needs a core-free subgroup")
    factors, sylows, rest = [], [], trivial(G)
    for D in coprime_direct_factors(G):
        MD = meet(M, D)
        DG, emb = subgroup_as_group(G, D.elements)
        info = p_group_structure(DG)
        local = Subgroup(DG, np.searchsorted(D.elements, MD.elements))
        if (info is not None and MD.order == info.q
                and not is_normal(DG, local)):
            factors.append(D)
            sylows.append(MD)
        else:
            rest = join(rest, D)
    dec = SchmidtDecomposition(tuple(factors), rest, tuple(sylows))
    problem = check_schmidt(G, M, dec)
    if problem:
        raise FalsificationError(f"no Schmidt decomposition found: {problem}")
    return dec


def check_schmidt(G: FiniteGroup, M: Subgroup, dec: SchmidtDecomposition) -> str | None:
    """Return a description of the first failed condition, or ``None``."""
    parts = list(dec.factors) + [dec.rest]
    if np.prod([P.order for P in parts]) != G.order:
        return "orders of the factors do not multiply to |G|"
    for i, P in enumerate(parts):
        if not is_normal(G, P):
            return "a factor is not normal"
        for Q in parts[i + 1:]:
            if gcd(P.order, Q.order) != 1:
                return "factor orders are not coprime"
    for S, Q in zip(dec.factors, dec.sylows):
        SG, _ = subgroup_as_group(G, S.elements)
        if p_group_structure(SG) is None or SG.is_abelian():
            return "a factor is not a non-abelian P-group"
        local = Subgroup(SG, np.searchsorted(S.elements, Q.elements))
        if len(factorize(Q.order)) != 1 or gcd(Q.order, S.order // Q.order) != 1:
            return "Q_i is not a Sylow subgroup of S_i"
        if is_normal(SG, local):
            return "Q_i is normal in S_i"
    MK = meet(M, dec.rest)
    rebuilt = MK
    for Q in dec.sylows:
        rebuilt = join(rebuilt, Q)
    if rebuilt != M:
        return "M is not the product of the Q_i and M n K"
    if not is_quasinormal(G, MK):
        return "M n K is not quasinormal"
    return None

