import itertools
import os

import pytest

import dioph

CORPUS = os.path.join(os.path.dirname(__file__), "..", "..", "corpus", "paper.toml")


def test_modular_refutation_checks():
    v = dioph.solve("15*x^2 - 35*y^3 = 10")
    assert v["status"] == "no_solution"
    assert v["certificate"]["kind"] == "modular"
    assert v["certificate"]["modulus"] <= 7
    ok, _ = dioph.check_certificate("15*x^2 - 35*y^3 = 10", v["certificate"])
    assert ok


def test_forged_certificate_rejected():
    ok, msg = dioph.check_certificate("x^2 + y^2 = 25", {"kind": "modular", "modulus": 4, "data": {}})
    assert not ok and "4" in msg


def test_finite_set_matches_brute_force():
    v = dioph.solve("x^4 + y^4 + z^4 = 3042")
    got = {(s["x"], s["y"], s["z"]) for s in v["solutions"]}
    r = range(-8, 9)
    want = {t for t in itertools.product(r, r, r) if sum(c**4 for c in t) == 3042}
    assert v["status"] == "finite" and got == want and len(got) == 48


def test_family_and_verification():
    v = dioph.solve("2*x + 3*y = 1")
    assert v["status"] == "family"
    ok, failures = dioph.verify_solutions("2*x + 3*y = 1", families=v["families"])
    assert ok, failures
    ok, failures = dioph.verify_solutions("2*x + 3*y = 2", families=v["families"])
    assert not ok


def test_verify_solutions():
    assert dioph.verify_solutions("4^x - 3^y = 1", [{"x": 1, "y": 1}]) == (True, [])
    ok, failures = dioph.verify_solutions("4^x - 3^y = 1", [{"x": 0, "y": 0}])
    assert not ok and "evaluates to -1" in failures[0]


def test_big_integers_round_trip():
    big = 10**30
    ok, _ = dioph.verify_solutions("x - y = 0", [{"x": big, "y": big}])
    assert ok


def test_inconclusive_with_trace():
    v = dioph.solve("x^3*y + y^3*z + z^3*x = 1", timeout_ms=1000, probe_budget=5000, trace=True)
    assert v["status"] == "inconclusive"
    assert all("millis" in t for t in v["trace"])


def test_box_option():
    v = dioph.solve("x^3 + y^3 + z^3 = 3", box=(-3, 3), enum_budget=100000)
    assert v["status"] == "inconclusive"
    found = {(s["x"], s["y"], s["z"]) for t in v["trace"] for s in t.get("solutions", [])}
    assert (1, 1, 1) in found


def test_errors():
    with pytest.raises(dioph.ProblemSyntaxError):
        dioph.solve("x^^2")
    with pytest.raises(ValueError):
        dioph.solve("x = 1", box=(3, 1))
    with pytest.raises(dioph.MalformedInput):
        dioph.check_certificate("x = 1", {"kind": 3})
    with pytest.raises(dioph.CorpusError):
        dioph.run_corpus("[[case]]\nname = 'a'\n")


def test_normalize():
    assert dioph.normalize("x^2 = y + 1") == "x^2 - y - 1 = 0 ; x,y in Z"


def test_corpus_runs_clean():
    report = dioph.run_corpus(CORPUS, jobs=2)
    assert report["total"] >= 50
    assert report["failed"] == 0, [c for c in report["cases"] if not c["passed"]]


def test_imported_build_location():
    pkg = os.environ.get("DIOPH_TEST_PYPKG")
    if pkg:
        assert dioph._core.__file__.startswith(pkg)
