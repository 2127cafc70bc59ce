"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line (also collected into the terminal summary).
Timed criteria run on freshly built groups so no lattice is served from cache.
Run directly with ``python3 tests/test_acceptance.py`` for the lines alone.
"""

import time

import pytest

from sigma_forge.arith import PrimePartition, parse_sigma
from sigma_forge.catalog import (
    STANDARD_SIGMAS,
    STANDARD_SUITE,
    _build_cached,
    build,
    example12_analog,
)
from sigma_forge.chief import (
    chief_series_through,
    is_sigma_central,
    p_group_structure,
    sigma_hypercentre,
    sigma_hypercentre_oracle,
    sigma_nilpotent_by_chief,
)
from sigma_forge.harness import (
    survey,
    verify_all,
    verify_theorem_A,
    verify_theorem_B,
    verify_theorem_C,
)
from sigma_forge.predicates import (
    is_modular,
    is_quasinormal,
    is_sigma_nilpotent,
    is_sigma_subnormal,
    refute_modular,
    verify_sigma_chain,
)
from sigma_forge.subgroups import (
    core,
    enumerate_by_cyclic_joins,
    enumerate_by_extension,
    generated,
    is_subnormal,
    lattice,
    normal_closure,
)

from conftest import ACCEPTANCE_LINES

SIGMAS = [parse_sigma(s) for s in STANDARD_SIGMAS]
SIGMA1 = PrimePartition.sigma1()


def report(n: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def cold():
    """Forget every built group (and with it every cached lattice)."""
    _build_cached.cache_clear()


@pytest.fixture(scope="module")
def full_survey():
    cold()
    t0 = time.perf_counter()
    reports = survey(STANDARD_SUITE, STANDARD_SIGMAS, threads=1)
    return reports, time.perf_counter() - t0


def test_criterion_1_theorem_A():
    cold()
    t0 = time.perf_counter()
    mismatches, subjects, bad = 0, 0, []
    for expr in STANDARD_SUITE:
        rec = verify_theorem_A(build(expr))
        subjects += rec.subjects
        if rec.outcome != "verified":
            mismatches += 1
            bad.append(f"{expr}:{rec.outcome}")
    elapsed = time.perf_counter() - t0
    counts = {e: len(lattice(build(e))) for e in ("S(4)", "A(5)")}
    ok = mismatches == 0 and elapsed < 120 and counts == {"S(4)": 30, "A(5)": 59}
    report(1, ok, f"quasinormal == modular and subnormal on {subjects} subgroups of "
                  f"{len(STANDARD_SUITE)} groups, {mismatches} mismatches {bad}, "
                  f"{elapsed:.1f}s (limit 120s)")


def test_criterion_2_theorem_C(full_survey):
    reports, _ = full_survey
    violations = [(r.group, r.sigma, c.id) for r in reports for c in r.claims
                  if c.id.startswith("C.") and c.outcome != "verified"]
    subjects = sum(r.claim("C.i").subjects for r in reports)
    cold()
    G = build("DP(A(4),SDC(11,5,3))")
    t0 = time.perf_counter()
    cell = verify_theorem_C(G, parse_sigma("classes:[{2,5,11}]"))
    cell_time = time.perf_counter() - t0
    n_sub = len(lattice(G))
    ok = (not violations and all(r.outcome == "verified" for r in cell)
          and cell_time < 60 and n_sub == 140)
    report(2, ok, f"C(i)-(v) over {len(reports)} cells, {subjects} sigma-quasinormal subjects, "
                  f"{len(violations)} violations; 660-group cell over {n_sub} subgroups "
                  f"in {cell_time:.2f}s (limit 60s)")


def test_criterion_3_theorem_B():
    failures, subjects = [], 0
    for expr in STANDARD_SUITE:
        G = build(expr)
        b = verify_theorem_B(G)
        c = {r.id: r.outcome for r in verify_theorem_C(G, SIGMA1)}
        subjects += b[0].subjects
        if any(r.outcome != "verified" for r in b):
            failures.append(expr)
        # the sigma1 instance of C must give the same outcomes
        if (b[0].outcome, b[1].outcome) != (c["C.ii"], c["C.iii"]):
            failures.append(f"{expr} differs from C at sigma1")
    report(3, not failures, f"B(i), B(ii) on {subjects} quasinormal subgroups, "
                            f"agreement with C at sigma1; failures {failures}")


def test_criterion_4_example_analog():
    ex = example12_analog()
    G, A, B, sigma = ex.group, ex.A, ex.B, ex.sigma
    ok_ssub, chain = is_sigma_subnormal(G, A, sigma)
    closure, kore = normal_closure(G, A), core(G, A)
    between = [f for f in chief_series_through(G, [kore, closure])
               if kore <= f.lower and f.upper <= closure]
    witness = refute_modular(G, B, budget=10_000)
    checks = {
        "modular": is_modular(G, A),
        "sigma-subnormal": ok_ssub,
        "3-term chain verified": chain is not None and len(chain) == 3
                                 and verify_sigma_chain(chain, sigma),
        "not subnormal": not is_subnormal(G, A),
        "not quasinormal": not is_quasinormal(G, A),
        "|A^G| = 55": closure.order == 55,
        "A_G = 1": kore.is_trivial(),
        "factors sigma-central": len(between) == 2
                                 and all(is_sigma_central(f, sigma) for f in between),
        "B refuted within 10^4": witness is not None,
    }
    failed = [k for k, v in checks.items() if not v]
    chain_orders = [H.order for H in chain.subgroups] if chain else None
    report(4, not failed, f"analog checks {len(checks) - len(failed)}/{len(checks)} "
                          f"(chain orders {chain_orders}, witness type "
                          f"{witness[0] if witness else None}); failed {failed}")


def test_criterion_5_lemmas(full_survey):
    reports, _ = full_survey
    bad_21 = []
    for expr in ("S(3)", "SDC(5,2,4)", "SDC(7,3,2)", "SDC(11,5,3)"):
        G = build(expr)
        info = p_group_structure(G)
        if info is None:
            bad_21.append(f"{expr}: not recognised")
            continue
        for t in range(G.order):
            if G.element_order(t) == info.q and not normal_closure(G, generated(G, [t])).is_whole():
                bad_21.append(expr)
    small = {e for e in STANDARD_SUITE if build(e).order <= 100}
    lemma_ids = {"L2.1", "L2.3.1", "L2.3.2", "L2.3.3", "L2.4.1", "L2.4.2", "L2.5", "L2.6"}
    violations = [(r.group, r.sigma, c.id) for r in reports for c in r.claims
                  if c.id in lemma_ids and c.outcome == "violated"]
    # the quantified sweeps must actually have run on every small cell
    unrun = [(r.group, r.sigma, c.id) for r in reports for c in r.claims
             if r.group in small and c.id in lemma_ids - {"L2.1", "L2.6"}
             and c.outcome != "verified"]
    report(5, not bad_21 and not violations and not unrun,
           f"L2.1 on 4 P-groups (bad {bad_21}); L2.3/L2.4/L2.5/L2.6 over {len(reports)} cells, "
           f"{len(violations)} violations, {len(unrun)} sweeps not run")


def test_criterion_6_cross_oracles():
    disagreements = {"nilpotency": [], "hypercentre": [], "enumerators": [], "chains": []}
    decisions = 0
    for expr in STANDARD_SUITE:
        G = build(expr)
        a = {frozenset(H.elements.tolist()) for H in enumerate_by_cyclic_joins(G)}
        if a != set(enumerate_by_extension(G)):
            disagreements["enumerators"].append(expr)
        for sigma in SIGMAS:
            if is_sigma_nilpotent(G, sigma, "halls") != sigma_nilpotent_by_chief(G, sigma):
                disagreements["nilpotency"].append((expr, sigma.spec()))
            if sigma_hypercentre(G, sigma) != sigma_hypercentre_oracle(G, sigma):
                disagreements["hypercentre"].append((expr, sigma.spec()))
            for A in lattice(G):
                ok, chain = is_sigma_subnormal(G, A, sigma)
                if ok:
                    decisions += 1
                    if not verify_sigma_chain(chain, sigma):
                        disagreements["chains"].append((expr, sigma.spec(), A.order))
    n_bad = sum(len(v) for v in disagreements.values())
    report(6, n_bad == 0, f"(a) nilpotency, (b) Z_sigma, (c) enumerators, "
                          f"(d) {decisions} sigma-subnormal chains; disagreements "
                          f"{ {k: len(v) for k, v in disagreements.items()} }")


def test_criterion_7_counts():
    def both(expr):
        G = build(expr)
        return len(enumerate_by_cyclic_joins(G)), len(enumerate_by_extension(G))

    wrong = []
    for n in range(1, 13):
        divisors = sum(1 for d in range(1, n + 1) if n % d == 0)
        if both(f"C({n})") != (divisors, divisors):
            wrong.append(f"C({n})")
    a4, sdc = both("A(4)")[0], both("SDC(11,5,3)")[0]
    expected = {"DP(A(4),SDC(11,5,3))": a4 * sdc, "S(4)": 30, "A(5)": 59}
    for expr, n in expected.items():
        if both(expr) != (n, n):
            wrong.append(expr)
    report(7, not wrong and a4 * sdc == 140,
           f"C(1..12) divisor counts, DP {a4}*{sdc} = {a4 * sdc}, S(4) 30, A(5) 59 "
           f"by both enumerators; wrong {wrong}")


def test_criterion_8_performance(full_survey):
    reports, survey_time = full_survey
    cold()
    G = build("S(4)")
    t0 = time.perf_counter()
    s4 = [verify_all(G, sigma, "S(4)") for sigma in SIGMAS]
    s4_time = time.perf_counter() - t0
    ok = s4_time < 1.0 and survey_time < 600 and not any(r.violated for r in s4 + reports)
    report(8, ok, f"S(4) all claims x 5 sigmas in {s4_time:.2f}s (limit 1s); full survey of "
                  f"{len(reports)} cells in {survey_time:.1f}s (limit 600s)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
