import json

import pytest

from sigma_forge.arith import PrimePartition, parse_sigma
from sigma_forge.catalog import build, example12_analog
from sigma_forge.harness import (
    CLAIM_IDS,
    ClaimRecord,
    Deadline,
    VerificationReport,
    sigma_quasinormal_subgroups,
    survey,
    survey_passed,
    verify_all,
    verify_corollaries,
    verify_lemmas,
    verify_theorem_A,
    verify_theorem_B,
    verify_theorem_C,
    witness_subgroups,
)
from sigma_forge.subgroups import lattice, lattice_limits

from conftest import sub

PI23 = PrimePartition.pi({2, 3})


def _all_verified(records):
    return all(r.outcome == "verified" for r in records)


def test_theorem_A_examples(s3):
    assert verify_theorem_A(s3).subjects == 6
    rec = verify_theorem_A(build("Q8"))
    assert rec.outcome == "verified" and rec.subjects == 6
    rec = verify_theorem_A(build("S(4)"))
    assert rec.outcome == "verified" and rec.subjects == 30


def test_theorem_C_examples(s3):
    recs = verify_theorem_C(s3, PI23)
    assert _all_verified(recs)
    assert sub(s3, [1, 0, 2]) in sigma_quasinormal_subgroups(s3, PI23)
    ex = example12_analog()
    recs = verify_theorem_C(ex.group, ex.sigma)
    assert _all_verified(recs)
    assert ex.A in sigma_quasinormal_subgroups(ex.group, ex.sigma)
    assert recs[0].subjects == len(sigma_quasinormal_subgroups(ex.group, ex.sigma))


def test_theorem_C_single_class():
    from sigma_forge.predicates import is_modular
    G = build("S(4)")
    recs = verify_theorem_C(G, PI23)
    assert _all_verified(recs)
    assert recs[0].subjects == sum(is_modular(G, A) for A in lattice(G))


@pytest.mark.parametrize("expr", ["Q8", "S(4)", "C(12)", "E(3,2)"])
def test_theorem_B(expr):
    assert _all_verified(verify_theorem_B(build(expr)))


def test_lemma_examples(s3):
    recs = {r.id: r for r in verify_lemmas(build("SDC(11,5,3)"), PrimePartition.sigma1())}
    assert recs["L2.1"].outcome == "verified"
    recs = {r.id: r for r in verify_lemmas(s3, PI23)}
    assert recs["L2.3.1"].outcome == "verified" and recs["L2.3.1"].subjects == 36
    recs = {r.id: r for r in verify_lemmas(build("D(12)"), PrimePartition.sigma1())}
    assert recs["L2.6"].outcome == "verified" and recs["L2.6"].subjects > 0


def test_corollary_examples():
    assert _all_verified(verify_corollaries(build("S(4)"), {2, 3}))
    ex = example12_analog()
    assert _all_verified(verify_corollaries(ex.group, {2, 5, 11}))
    recs = verify_corollaries(build("C(12)"), {3})
    assert _all_verified(recs)


def test_report_json_round_trip():
    r = verify_all(build("S(3)"), PI23, "S(3)")
    text = r.to_json()
    back = VerificationReport.from_dict(json.loads(text))
    assert back.to_json() == text
    assert [c.id for c in r.claims] == list(CLAIM_IDS)
    assert "time" not in text


def test_report_deterministic():
    a = verify_all(build("D(12)"), parse_sigma("onepi:{2,3}"), "D(12)").to_json()
    b = verify_all(build("D(12)"), parse_sigma("onepi:{2,3}"), "D(12)").to_json()
    assert a == b


def test_sigma1_skips_corollaries():
    r = verify_all(build("S(3)"), PrimePartition.sigma1())
    assert r.claim("Cor1.3").outcome == "skipped" and r.claim("Cor1.3").reason


def test_resource_limits_skip():
    with lattice_limits(max_order=10):
        r = verify_all(build("S(4)"), PI23, "S(4)")
    assert all(c.outcome == "skipped" and c.reason.startswith("resource limit") for c in r.claims)
    assert r.resource_skipped and not r.violated


def test_time_budget_skip():
    rec = verify_theorem_A(build("A(5)"), Deadline(-1.0))
    assert rec.outcome == "skipped" and rec.reason.startswith("resource limit")


def test_witness_replay():
    G = build("S(4)")
    A = next(H for H in lattice(G) if H.order == 6)
    rec = ClaimRecord("C.i")
    rec.fail("example", A=A)
    data = json.loads(json.dumps(rec.to_dict()))
    assert witness_subgroups(G, data["witness"]) == {"A": A}


def test_survey_small():
    assert survey([], ["sigma1"]) == []
    reps = survey(["C(6)", "S(3)"], ["sigma1", "pi:{2,3}"])
    assert [(r.group, r.sigma) for r in reps] == [
        ("C(6)", "sigma1"), ("C(6)", "classes:[{2,3}];rest=complement"),
        ("S(3)", "sigma1"), ("S(3)", "classes:[{2,3}];rest=complement")]
    assert survey_passed(reps)


def test_survey_parallel_matches_serial():
    serial = survey(["S(4)", "D(10)"], ["sigma1", "onepi:{2,3}"], threads=1)
    parallel = survey(["S(4)", "D(10)"], ["sigma1", "onepi:{2,3}"], threads=2)
    assert [r.to_json() for r in serial] == [r.to_json() for r in parallel]
