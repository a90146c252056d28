import pytest

from sharedrand import verify


@pytest.mark.parametrize("suite,trials", [("monotone", 200), ("lemma1", 5), ("lemma2", 5),
                                          ("theorem5", 20), ("werner-ppt", 101)])
def test_suites_pass(suite, trials):
    results = verify.run(suite, trials, seed=1)
    assert results and all(r.passed and r.failures == 0 for r in results)
    assert all(r.suite == suite for r in results)


def test_all_runs_every_suite(monkeypatch):
    called = []
    for name in list(verify.SUITES):
        monkeypatch.setitem(verify.SUITES, name, lambda t, s, name=name: called.append((name, t)) or [])
    verify.run("all", seed=0)
    assert called == [(n, verify.DEFAULT_TRIALS[n]) for n in verify.DEFAULT_TRIALS]


def test_seeded_reproducible():
    assert verify.monotone(300, seed=5) == verify.monotone(300, seed=5)


def test_row_format():
    r = verify.SuiteResult("x", "p", 3, 1, 0.5, False)
    assert verify.as_row(r) == ("x", "p", 3, 1, 0.5, "FAIL")
    assert len(verify.HEADER) == len(verify.as_row(r))


def test_ppt_boundary():
    assert verify.werner_ppt_boundary() == pytest.approx(1 / 3, abs=1e-6)
