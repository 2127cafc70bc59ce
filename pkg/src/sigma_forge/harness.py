"""Machine checks of the theorem and lemma statements over (group, sigma) cells.

Every claim produces one :class:`ClaimRecord`. A ``violated`` record carries
a witness (generators, as permutation images, of the subgroups involved) so
the failure can be replayed; since the statements are theorems, a violation
always points at a bug in this package.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .arith import ClassId, PrimePartition, factorize, parse_sigma
from .chief import (
    ChiefFactor,
    chief_series_through,
    is_central,
    is_sigma_central,
    o_sigma_residual,
    p_group_structure,
    section_centralizer,
    sigma_hypercentre,
)
from .errors import ResourceLimitError
from .groups import FiniteGroup, GroupHom, quotient_group, subgroup_as_group
from .predicates import (
    _reach_for,
    is_modular,
    is_pi_decomposable,
    is_pi_special,
    is_quasinormal,
    is_sigma_nilpotent,
    is_sigma_quasinormal,
    is_sigma_seminormal,
    is_sigma_subnormal,
)
from .subgroups import (
    Subgroup,
    centralizer,
    core,
    hall_subgroups,
    is_subnormal,
    lattice,
    normal_closure,
    normal_subgroups,
    permutes,
    sylow_subgroups,
)

CLAIM_IDS = ("A", "B.i", "B.ii", "C.i", "C.ii", "C.iii", "C.iv", "C.v",
             "L2.1", "L2.3.1", "L2.3.2", "L2.3.3", "L2.4.1", "L2.4.2",
             "L2.5", "L2.6", "Cor1.3", "Cor1.4")

VERIFIED, VIOLATED, SKIPPED = "verified", "violated", "skipped"
RESOURCE_PREFIX = "resource limit: "


@dataclass
class ClaimRecord:
    id: str
    subjects: int = 0
    outcome: str = VERIFIED
    witness: dict | None = None
    reason: str | None = None

    def fail(self, detail: str, **subgroups: Subgroup) -> None:
        """Mark the claim violated; only the first witness is kept."""
        if self.outcome != VIOLATED:
            self.outcome = VIOLATED
            self.witness = {"detail": detail,
                            "subgroups": {k: subgroup_witness(H) for k, H in subgroups.items()}}

    def skip(self, reason: str) -> None:
        self.outcome = SKIPPED
        self.reason = reason

    def to_dict(self) -> dict:
        d = {"id": self.id, "subjects": self.subjects, "outcome": self.outcome}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.reason is not None:
            d["reason"] = self.reason
        return d


@dataclass
class VerificationReport:
    group: str
    sigma: str
    claims: list[ClaimRecord] = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return any(c.outcome == VIOLATED for c in self.claims)

    @property
    def resource_skipped(self) -> bool:
        return any(c.outcome == SKIPPED and (c.reason or "").startswith(RESOURCE_PREFIX)
                   for c in self.claims)

    def claim(self, cid: str) -> ClaimRecord:
        return next(c for c in self.claims if c.id == cid)

    def to_dict(self) -> dict:
        return {"group": self.group, "sigma": self.sigma,
                "claims": [c.to_dict() for c in self.claims]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(d["group"], d["sigma"],
                   [ClaimRecord(**{k: c.get(k) for k in ("id", "subjects", "outcome", "witness", "reason")})
                    for c in d["claims"]])


def subgroup_witness(H: Subgroup) -> dict:
    G = H.parent
    return {"order": H.order,
            "generators": [G.perms[g].tolist() for g in H.generators()]}


def witness_subgroups(G: FiniteGroup, witness: dict) -> dict[str, Subgroup]:
    """Rebuild the subgroups named in a serialized witness inside ``G``."""
    from .subgroups import generated
    out = {}
    for name, w in witness.get("subgroups", {}).items():
        gens = G.lookup(np.array(w["generators"])).tolist() if w["generators"] else []
        H = generated(G, gens)
        if H.order != w["order"]:
            raise ValueError(f"witness subgroup {name} rebuilt with order {H.order}")
        out[name] = H
    return out


class Deadline:
    """Cooperative time budget, checked at loop boundaries."""

    def __init__(self, seconds: float | None = None):
        self.end = None if seconds is None else time.monotonic() + seconds

    def check(self) -> None:
        if self.end is not None and time.monotonic() > self.end:
            raise ResourceLimitError("time budget exhausted")


_NO_DEADLINE = Deadline()


def _guarded(records: Sequence[ClaimRecord], fn, *args) -> None:
    try:
        fn(*args)
    except ResourceLimitError as exc:
        for r in records:
            r.subjects = 0
            r.witness = None
            r.skip(RESOURCE_PREFIX + str(exc))


def _quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    store = G._cache.setdefault("quotients", {})
    if N.key not in store:
        store[N.key] = quotient_group(G, N)
    return store[N.key]


class _Subject:
    """Derived data for one subgroup ``A`` of ``G`` used by the C-type checks."""

    def __init__(self, G: FiniteGroup, A: Subgroup):
        self.G = G
        self.A = A

    @cached_property
    def closure(self) -> Subgroup:
        return normal_closure(self.G, self.A)

    @cached_property
    def core(self) -> Subgroup:
        return core(self.G, self.A)

    @cached_property
    def section(self) -> FiniteGroup:
        """``A^G / A_G`` as a group."""
        Q, hom = _quotient(self.G, self.core)
        H, _ = subgroup_as_group(Q, hom.image_of(self.closure.elements))
        return H

    @cached_property
    def centralizer(self) -> Subgroup:
        """``C_G(A^G / A_G)``."""
        return section_centralizer(self.G, self.closure, self.core)

    @cached_property
    def acting(self) -> FiniteGroup:
        """``G / C_G(A^G / A_G)``."""
        return _quotient(self.G, self.centralizer)[0]

    @cached_property
    def factors(self) -> list[ChiefFactor]:
        """Chief factors of ``G`` between ``A_G`` and ``A^G``."""
        series = chief_series_through(self.G, [self.core, self.closure])
        return [f for f in series if self.core <= f.lower and f.upper <= self.closure]


def _check_theorem_c(G: FiniteGroup, s: _Subject, sigma: PrimePartition,
                     records: dict[str, ClaimRecord]) -> None:
    A = s.A
    for cls in sorted(sigma.sigma_of(G.order)):
        for H in hall_subgroups(G, cls, sigma):
            if not permutes(A, H):
                records["C.i"].fail(f"A does not permute with a Hall {cls}-subgroup", A=A, H=H)
    if not is_sigma_nilpotent(s.section, sigma):
        records["C.ii"].fail("A^G/A_G is not sigma-nilpotent", A=A)
    if not is_sigma_nilpotent(s.acting, sigma):
        records["C.ii"].fail("G/C_G(A^G/A_G) is not sigma-nilpotent", A=A)
    for f in s.factors:
        if not is_sigma_central(f, sigma):
            records["C.iii"].fail("chief factor between A_G and A^G is not sigma-central",
                                  A=A, H=f.upper, K=f.lower)
    if not sigma.sigma_of(s.acting.order) <= sigma.sigma_of(s.section.order):
        records["C.iv"].fail("sigma(G/C) is not contained in sigma(A^G/A_G)", A=A)
    if not is_sigma_seminormal(G, A, sigma):
        records["C.v"].fail("A is not sigma-seminormal", A=A)


def sigma_quasinormal_subgroups(G: FiniteGroup, sigma: PrimePartition) -> list[Subgroup]:
    return [A for A in lattice(G) if is_sigma_quasinormal(G, A, sigma)]


# -- Theorem A ---------------------------------------------------------------

def verify_theorem_A(G: FiniteGroup, deadline: Deadline = _NO_DEADLINE) -> ClaimRecord:
    rec = ClaimRecord("A")

    def run():
        for A in lattice(G):
            deadline.check()
            rec.subjects += 1
            lhs = is_quasinormal(G, A)
            rhs = is_modular(G, A) and is_subnormal(G, A)
            if lhs != rhs:
                rec.fail(f"quasinormal={lhs} but modular and subnormal={rhs}", A=A)

    _guarded([rec], run)
    return rec


# -- Theorem B ---------------------------------------------------------------

def verify_theorem_B(G: FiniteGroup, deadline: Deadline = _NO_DEADLINE) -> list[ClaimRecord]:
    """Theorem B directly, plus agreement with the sigma1 instance of Theorem C."""
    bi, bii = ClaimRecord("B.i"), ClaimRecord("B.ii")
    sigma1 = PrimePartition.sigma1()

    def run():
        quasi = []
        for A in lattice(G):
            deadline.check()
            if not is_quasinormal(G, A):
                continue
            quasi.append(A)
            s = _Subject(G, A)
            bi.subjects += 1
            bii.subjects += 1
            if not is_sigma_nilpotent(s.section, sigma1):
                bi.fail("A^G/A_G is not nilpotent", A=A)
            for f in s.factors:
                if not is_central(f):
                    bii.fail("chief factor between A_G and A^G is not central",
                             A=A, H=f.upper, K=f.lower)
        # the sigma1 instance must see exactly the same subjects and outcomes
        c_subjects = sigma_quasinormal_subgroups(G, sigma1)
        if c_subjects != quasi:
            bi.fail("quasinormal subgroups differ from sigma1-quasinormal subgroups")
        c = {r.id: r for r in verify_theorem_C(G, sigma1, deadline)}
        if (c["C.ii"].outcome == VERIFIED) != (bi.outcome == VERIFIED):
            bi.fail("outcome differs from Theorem C(ii) at sigma1")
        if (c["C.iii"].outcome == VERIFIED) != (bii.outcome == VERIFIED):
            bii.fail("outcome differs from Theorem C(iii) at sigma1")

    _guarded([bi, bii], run)
    return [bi, bii]


# -- Theorem C ---------------------------------------------------------------

def verify_theorem_C(G: FiniteGroup, sigma: PrimePartition,
                     deadline: Deadline = _NO_DEADLINE) -> list[ClaimRecord]:
    records = {cid: ClaimRecord(cid) for cid in ("C.i", "C.ii", "C.iii", "C.iv", "C.v")}

    def run():
        for A in sigma_quasinormal_subgroups(G, sigma):
            deadline.check()
            for r in records.values():
                r.subjects += 1
            _check_theorem_c(G, _Subject(G, A), sigma, records)

    _guarded(list(records.values()), run)
    return list(records.values())


# -- Lemmas --------------------------------------------------------------------

def verify_lemmas(G: FiniteGroup, sigma: PrimePartition,
                  deadline: Deadline = _NO_DEADLINE) -> list[ClaimRecord]:
    ids = ("L2.1", "L2.3.1", "L2.3.2", "L2.3.3", "L2.4.1", "L2.4.2", "L2.5", "L2.6")
    recs = {cid: ClaimRecord(cid) for cid in ids}
    _guarded([recs["L2.1"]], _lemma_2_1, G, recs["L2.1"], deadline)
    _guarded([recs[i] for i in ids[1:6]], _lemmas_2_3_2_4, G, sigma, recs, deadline)
    _guarded([recs["L2.5"], recs["L2.6"]], _lemmas_2_5_2_6, G, sigma, recs, deadline)
    return [recs[i] for i in ids]


def _lemma_2_1(G: FiniteGroup, rec: ClaimRecord, deadline: Deadline) -> None:
    """<t>^S = S for every subgroup S that is a P-group and every t of order q."""
    for S in lattice(G):
        deadline.check()
        fac = factorize(S.order)
        if len(fac) != 2 or all(e != 1 for _, e in fac):
            continue
        SG, emb = subgroup_as_group(G, S.elements)
        info = p_group_structure(SG)
        if info is None:
            continue
        rec.subjects += 1
        for t in np.flatnonzero(SG.element_orders == info.q):
            T = Subgroup(G, emb.images[[0] + _powers(SG, int(t))])
            if normal_closure(G, T, within=S) != S:
                rec.fail("normal closure of <t> is not the whole P-group", S=S, T=T)
    if rec.subjects == 0:
        rec.skip("no subgroup is a P-group")


def _powers(G: FiniteGroup, x: int) -> list[int]:
    out, y = [], x
    while y != 0:
        out.append(y)
        y = G.mul(y, x)
    return out


def _image(hom: GroupHom, A: Subgroup) -> Subgroup:
    return Subgroup(hom.target, hom.image_of(A.elements))


def _lemmas_2_3_2_4(G: FiniteGroup, sigma: PrimePartition,
                    recs: dict[str, ClaimRecord], deadline: Deadline) -> None:
    L = lattice(G)
    reach = _reach_for(G, sigma)
    M = L.meet_table
    top = L.top
    subn = [a for a in range(len(L)) if top in reach.reach(a)]
    quasi = [a for a in subn if is_modular(G, L[a])]
    normals = [N for N in normal_subgroups(G) if not N.is_trivial()]
    classes = sorted(sigma.sigma_of(G.order))
    halls = {cls: hall_subgroups(G, cls, sigma) for cls in classes}

    r = recs["L2.3.1"]
    for a in subn:
        deadline.check()
        for b in range(len(L)):
            r.subjects += 1
            if b not in reach.reach(int(M[a, b])):
                r.fail("A n B is not sigma-subnormal in B", A=L[a], B=L[b])

    r = recs["L2.3.2"]
    for N in normals:
        Q, hom = _quotient(G, N)
        for a in subn:
            deadline.check()
            r.subjects += 1
            if not is_sigma_subnormal(Q, _image(hom, L[a]), sigma)[0]:
                r.fail("AN/N is not sigma-subnormal in G/N", A=L[a], N=N)

    r = recs["L2.3.3"]
    for a in subn:
        A = L[a]
        for cls in classes:
            for H in halls[cls]:
                r.subjects += 1
                if L[int(M[a, L.index_of(H)])].order != sigma.sigma_part(A.order, cls):
                    r.fail(f"A n H is not a Hall {cls}-subgroup of A", A=A, H=H)

    r = recs["L2.4.1"]
    for a in quasi:
        deadline.check()
        for b in np.flatnonzero(L.le[a]).tolist():
            r.subjects += 1
            if not is_sigma_quasinormal(G, L[a], sigma, within=L[b]):
                r.fail("A is not sigma-quasinormal in B", A=L[a], B=L[b])

    r = recs["L2.4.2"]
    for N in normals:
        Q, hom = _quotient(G, N)
        for a in quasi:
            deadline.check()
            r.subjects += 1
            if not is_sigma_quasinormal(Q, _image(hom, L[a]), sigma):
                r.fail("AN/N is not sigma-quasinormal in G/N", A=L[a], N=N)


def _lemmas_2_5_2_6(G: FiniteGroup, sigma: PrimePartition,
                    recs: dict[str, ClaimRecord], deadline: Deadline) -> None:
    Z = sigma_hypercentre(G, sigma)
    normals = normal_subgroups(G)
    r = recs["L2.5"]
    below = [N for N in normals if N <= Z]
    for K in below:
        deadline.check()
        for H in below:
            if K < H and not any(K < N < H for N in below):
                r.subjects += 1
                if not is_sigma_central(ChiefFactor(G, K, H), sigma):
                    r.fail("chief factor below Z_sigma(G) is not sigma-central", H=H, K=K)

    r = recs["L2.6"]
    for N in normals:
        deadline.check()
        classes = sigma.sigma_of(N.order)
        if len(classes) != 1:
            continue
        (cls,) = classes
        r.subjects += 1
        lhs = N <= Z
        rhs = o_sigma_residual(G, cls, sigma) <= centralizer(G, N)
        if lhs != rhs:
            r.fail(f"N <= Z_sigma(G) is {lhs} but O^sigma_i(G) <= C_G(N) is {rhs}", N=N)
    if r.subjects == 0:
        r.skip("no non-trivial sigma-primary normal subgroup")


# -- Corollaries -----------------------------------------------------------------

def verify_corollaries(G: FiniteGroup, pi: Iterable[int],
                       deadline: Deadline = _NO_DEADLINE) -> list[ClaimRecord]:
    pi = frozenset(pi)
    c13, c14 = ClaimRecord("Cor1.3"), ClaimRecord("Cor1.4")
    _guarded([c13], _corollary_1_3, G, pi, c13, deadline)
    _guarded([c14], _corollary_1_4, G, pi, c14, deadline)
    return [c13, c14]


def _pi_number(n: int, pi: frozenset[int]) -> bool:
    return all(p in pi for p, _ in factorize(n))


def _pi_prime_number(n: int, pi: frozenset[int]) -> bool:
    return all(p not in pi for p, _ in factorize(n))


def _theorem_c_as(rec: ClaimRecord, G: FiniteGroup, s: _Subject, sigma: PrimePartition) -> None:
    sub = {cid: ClaimRecord(cid) for cid in ("C.i", "C.ii", "C.iii", "C.iv", "C.v")}
    _check_theorem_c(G, s, sigma, sub)
    for r in sub.values():
        if r.outcome == VIOLATED:
            rec.outcome = VIOLATED
            rec.witness = rec.witness or dict(r.witness, detail=f"{r.id}: {r.witness['detail']}")


def _corollary_1_3(G: FiniteGroup, pi: frozenset[int], rec: ClaimRecord, deadline: Deadline) -> None:
    sigma = PrimePartition.pi(pi)
    for A in sigma_quasinormal_subgroups(G, sigma):
        deadline.check()
        rec.subjects += 1
        s = _Subject(G, A)
        _theorem_c_as(rec, G, s, sigma)
        for cls in sigma.sigma_of(G.order):
            for H in hall_subgroups(G, cls, sigma):
                if not permutes(A, H):
                    rec.fail("A does not permute with a Hall pi- or pi'-subgroup", A=A, H=H)
        if not (is_pi_decomposable(s.section, pi) and is_pi_decomposable(s.acting, pi)):
            rec.fail("a quotient is not pi-decomposable", A=A)
        for f in s.factors:
            n = f.order * (G.order // section_centralizer(G, f.upper, f.lower).order)
            if not (_pi_number(n, pi) or _pi_prime_number(n, pi)):
                rec.fail("factor extension is neither a pi- nor a pi'-group",
                         A=A, H=f.upper, K=f.lower)


def _corollary_1_4(G: FiniteGroup, pi: frozenset[int], rec: ClaimRecord, deadline: Deadline) -> None:
    sigma = PrimePartition.one_pi(pi)
    rest = sigma.class_of(next(p for p in range(2, 10**6) if p not in pi and _is_p(p)))
    for A in sigma_quasinormal_subgroups(G, sigma):
        deadline.check()
        rec.subjects += 1
        s = _Subject(G, A)
        _theorem_c_as(rec, G, s, sigma)
        for p in sorted(pi):
            for P in sylow_subgroups(G, p):
                if not permutes(A, P):
                    rec.fail(f"A does not permute with a Sylow {p}-subgroup", A=A, H=P)
        for H in hall_subgroups(G, rest, sigma):
            if not permutes(A, H):
                rec.fail("A does not permute with a Hall pi'-subgroup", A=A, H=H)
        if not (is_pi_special(s.section, pi) and is_pi_special(s.acting, pi)):
            rec.fail("a quotient is not pi-special", A=A)
        for f in s.factors:
            C = section_centralizer(G, f.upper, f.lower)
            if C.is_whole():
                continue
            n = f.order * (G.order // C.order)
            if not _pi_prime_number(n, pi):
                rec.fail("non-central factor extension is not a pi'-group",
                         A=A, H=f.upper, K=f.lower)


def _is_p(n: int) -> bool:
    return factorize(n) == ((n, 1),)


# -- whole cells and surveys -------------------------------------------------------

def verify_all(G: FiniteGroup, sigma: PrimePartition, group_label: str | None = None,
               deadline: Deadline = _NO_DEADLINE) -> VerificationReport:
    """Every claim for one (group, sigma) cell, in ``CLAIM_IDS`` order."""
    label = group_label or G.name or f"order-{G.order} group"
    report = VerificationReport(label, sigma.spec())
    try:
        lattice(G)
    except ResourceLimitError as exc:
        report.claims = [ClaimRecord(cid, outcome=SKIPPED, reason=RESOURCE_PREFIX + str(exc))
                         for cid in CLAIM_IDS]
        return report
    records = [verify_theorem_A(G, deadline), *verify_theorem_B(G, deadline),
               *verify_theorem_C(G, sigma, deadline), *verify_lemmas(G, sigma, deadline)]
    pi = sigma.pi_form()
    if pi is None:
        records += [ClaimRecord(cid, outcome=SKIPPED,
                                reason="sigma is not of the form {pi, pi'} or {{p1},...,{pn}, pi'}")
                    for cid in ("Cor1.3", "Cor1.4")]
    else:
        records += verify_corollaries(G, pi, deadline)
    report.claims = records
    return report


def _survey_cell(args: tuple) -> dict:
    from .catalog import build
    from .subgroups import lattice_limits
    expr, sigma_text, budget, limits = args
    with lattice_limits(*limits):
        try:
            G = build(expr)
        except ResourceLimitError as exc:
            return VerificationReport(expr, sigma_text, [
                ClaimRecord(cid, outcome=SKIPPED, reason=RESOURCE_PREFIX + str(exc))
                for cid in CLAIM_IDS]).to_dict()
        return verify_all(G, parse_sigma(sigma_text), expr, Deadline(budget)).to_dict()


def survey(suite: Iterable, sigmas: Iterable, threads: int | None = None,
           time_budget: float | None = None) -> list[VerificationReport]:
    """Run :func:`verify_all` over ``suite x sigmas``.

    ``suite`` holds expression strings (or ``(expr, group)`` pairs); cells
    are independent and may run in ``threads`` worker processes
    (default: ``SIGMA_FORGE_THREADS`` or 1). ``time_budget`` applies per cell
    and the current lattice limits are passed on to the workers.
    """
    exprs = [str(item[0]) if isinstance(item, tuple) else str(item) for item in suite]
    sigma_texts = [s.spec() if isinstance(s, PrimePartition) else parse_sigma(s).spec()
                   for s in sigmas]
    from .subgroups import LIMITS
    limits = (LIMITS.max_order, LIMITS.max_subgroups)
    cells = [(e, s, time_budget, limits) for e in exprs for s in sigma_texts]
    if threads is None:
        threads = int(os.environ.get("SIGMA_FORGE_THREADS", "1") or 1)
    if threads > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            dicts = list(pool.map(_survey_cell, cells))
    else:
        dicts = [_survey_cell(c) for c in cells]
    return [VerificationReport.from_dict(d) for d in dicts]


def survey_passed(reports: Sequence[VerificationReport]) -> bool:
    return not any(r.violated for r in reports)
