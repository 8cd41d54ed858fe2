"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import io as _io
import time

import pytest

from freeline_lab import verify
from freeline_lab.cli import run

RESULTS = []


def record(idx, label, ok, detail, elapsed, limit=None):
    budget = f", limit {limit:.0f}s" if limit else ""
    line = f"{'PASS' if ok else 'FAIL'}  criterion {idx}: {label} [{detail}; {elapsed:.1f}s{budget}]"
    RESULTS.append(line)
    print(line)
    return ok and (limit is None or elapsed < limit)


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


SEED = 7


def test_criterion_1_case1_lines():
    res, dt = timed(verify.check_case1_lines, SEED, 50)
    ok = all(h == {"case1": 50} for h in res["histograms"].values()) and len(res["histograms"]) == 3
    assert record(1, "(x_i^3) char 3, 50 lines per E in {1,2,3} split as (-2,1,1)", ok,
                  f"histograms {res['histograms']}", dt, 5)


def test_criterion_2_twisted_cubic():
    res, dt = timed(verify.check_twisted_cubic, SEED)
    ok = res["splitting"] == [0, 0, 0] and res["globally_generated"]
    assert record(2, "twisted cubic gives (0,0,0), globally generated", ok,
                  f"splitting {res['splitting']}", dt, 1)


def test_criterion_3_fermat_no_free_lines(monkeypatch):
    monkeypatch.setenv("FREELINE_LAB_JOBS", "1")
    res, dt = timed(verify.check_fermat_no_free_lines, SEED)
    audit = res["audit"]
    ok = (audit["contained"] >= 1 and audit["free"] == 0
          and list(audit["splittings"]) == ["(-1, 1)"]
          and min(int(h) for h in audit["h0_histogram"]) >= 2)
    assert record(3, "Fermat cubic threefold over F_4: no free lines, all (-1,1), h0 >= 2", ok,
                  f"{audit['contained']} lines, h0 {audit['h0_histogram']}", dt, 60)


def test_criterion_4_27_lines():
    res, dt = timed(verify.check_27_lines, SEED)
    assert record(4, "Fermat cubic surface over F_4 has 27 lines", res["lines"] == 27,
                  f"{res['lines']} lines", dt, 10)


def test_criterion_5_free_curves():
    res, dt = timed(verify.check_free_curves, SEED)
    ok = len(res["audits"]) == 4 and all(a["verdict"] == "free" and min(a["splitting"]) >= 0
                                         for a in res["audits"])
    detail = ", ".join(f"(d={a['d']},k={a['k']}) {a['field']}: {a['verdict']}" for a in res["audits"])
    assert record(5, "standard Fermat curves are free", ok, detail, dt, 30)


@pytest.fixture(scope="module")
def identity_run():
    return timed(verify.check_linear_part_identity, SEED, 100)


def test_criterion_6_dimension_identity(identity_run):
    res, dt = identity_run
    assert record("6", "dim V(L_1..L_d) = h0(N(-1)) = sum max(0,e_i) and rank = d - a, 100 samples",
                  res["passed"], f"splittings {res['splittings']}", dt, 120)


@pytest.mark.xfail(strict=True, reason="codim V(L) equals d - a, not h0(N(-1)); see the ledger")
def test_criterion_6_literal_codimension(identity_run):
    res, dt = identity_run
    bad = res["literal_codim_mismatches"]
    assert record("6*", "literal form codim V(L_1..L_d) = h0(N(-1))", bad == 0,
                  f"{bad}/100 samples differ", dt)


def test_criterion_7_expected_dimension():
    res, dt = timed(verify.check_expected_dimension, SEED, 10)
    ok = res["passed"] and len(res["cubics"]) == 10
    assert record(7, "free lines on 10 smooth cubic threefolds over F_5 have h0 = 2", ok,
                  f"{res['free_lines']} free lines checked", dt, 300)


def test_criterion_8_splitting_oracle():
    res, dt = timed(verify.check_splitting_oracle, SEED, 200)
    ok = res["disagreements"] == 0 and res["euler_failures"] == 0
    assert record(8, "200 random maps: splitting = syzygy oracle, Euler identity holds", ok,
                  f"{res['disagreements']} disagreements, {res['euler_failures']} Euler failures",
                  dt, 60)


def test_criterion_9_bpf_certificate():
    res, dt = timed(verify.check_bpf_certificate, SEED, 100)
    assert record(9, "100 cubic systems: Macaulay verdict never contradicts point search",
                  res["contradictions"] == 0, f"outcomes {res['outcomes']}", dt, 120)


def test_criterion_10_determinism():
    t0 = time.perf_counter()
    outputs, codes = [], []
    for _ in range(2):
        buf = _io.StringIO()
        codes.append(run(["verify-paper", "--suite", "quick", "--seed", "7", "--output", "json"],
                         buf, _io.StringIO()))
        outputs.append(buf.getvalue().encode())
    dt = time.perf_counter() - t0
    ok = outputs[0] == outputs[1] and codes == [0, 0]
    assert record(10, "verify-paper --suite quick --seed 7 twice gives identical bytes", ok,
                  f"{len(outputs[0])} bytes, exit codes {codes}", dt)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
