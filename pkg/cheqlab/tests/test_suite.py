import pytest

from cheqlab.app.services import suite
from cheqlab.app.services.errors import BadIndexError, MapError, SearchBudgetError
from cheqlab.app.services.suite import BOUNDS, CHECKS, Outcome, check_ids, render_table, run_suite


def _strip_timing(report):
    data = report.model_dump()
    for c in data["checks"]:
        c.pop("elapsed")
    return data


@pytest.fixture(scope="module")
def quick_report():
    return run_suite("quick")


def test_check_ids_are_unique():
    ids = check_ids()
    assert len(ids) == len(set(ids))
    assert len(ids) == len(CHECKS)


def test_quick_profile_passes(quick_report):
    bad = [(c.check_id, c.detail, c.witness) for c in quick_report.checks if c.status != "pass"]
    assert bad == []
    assert quick_report.ok
    assert quick_report.counts() == {"pass": len(CHECKS), "fail": 0, "skipped": 0}


def test_quick_profile_is_deterministic(quick_report):
    again = run_suite("quick")
    assert _strip_timing(again) == _strip_timing(quick_report)


def test_quick_witnesses(quick_report):
    by_id = {c.check_id: c for c in quick_report.checks}
    assert by_id["kp.countermodel"].witness["point"] == "00"
    assert by_id["ml.wem-fails"].witness == {"point": "0", "valuation": {"p": ["-"]}}
    assert by_id["kp.valuation"].witness == {"failing": ["00"]}
    assert by_id["h.f2-onto"].witness["00"] == "r"
    assert by_id["h.not-image"].witness == {"M2": "none", "M3": "none", "M4": "none"}
    assert by_id["dp.embeddings"].witness["F1+F1 in F2"] is not None


def test_bounds_profiles():
    assert BOUNDS["quick"].reductions == (1, 2)
    assert BOUNDS["full"].reductions == (1, 2, 3)
    assert 5 in BOUNDS["full"].h_sources


def test_only_filters_checks():
    report = run_suite("quick", only=["sizes", "oracle.upsets"])
    assert [c.check_id for c in report.checks] == ["sizes", "oracle.upsets"]


def test_unknown_profile():
    with pytest.raises(BadIndexError):
        run_suite("exhaustive")


def _exhausted(ctx):
    raise SearchBudgetError("out of nodes", estimate=10, budget=1)


def _failing(ctx):
    return Outcome(False, "broken on purpose")


def test_budget_exhaustion_is_skipped_in_quick_and_fails_in_full(monkeypatch):
    monkeypatch.setattr(suite, "CHECKS", [suite.Check("x.budget", "budget", _exhausted)])
    quick = run_suite("quick")
    assert quick.checks[0].status == "skipped"
    assert quick.ok
    full = run_suite("full")
    assert full.checks[0].status == "fail"
    assert not full.ok


def test_failed_check_is_reported(monkeypatch):
    monkeypatch.setattr(suite, "CHECKS", [suite.Check("x.fail", "failure", _failing)])
    report = run_suite("quick")
    assert report.failed[0].detail == "broken on purpose"
    text = render_table(report)
    assert "FAIL" in text
    assert text.rstrip().endswith("0 passed, 1 failed, 0 skipped")


def test_each_check_names_its_claim(quick_report):
    refs = [c.theorem_ref for c in quick_report.checks]
    assert len(set(refs)) == len(refs)
    by_id = {c.check_id: c.theorem_ref for c in quick_report.checks}
    assert by_id["kp.valuation"] == "kp fails on F_2 under V(p)={-+,+-}, V(q)={--}, V(r)={++}"
    assert by_id["h.not-image"] == "H is not a p-morphic image of any M_n"


def _broken_map(ctx):
    raise MapError("search produced a map failing verification")


def test_library_error_fails_only_that_check(monkeypatch):
    monkeypatch.setattr(
        suite,
        "CHECKS",
        [suite.Check("x.map", "maps verify", _broken_map), suite.Check("x.ok", "nothing", lambda ctx: Outcome(True))],
    )
    report = run_suite("quick")
    assert [c.status for c in report.checks] == ["fail", "pass"]
    assert report.checks[0].detail == "MapError: search produced a map failing verification"
    assert report.checks[0].witness is None
    assert not report.ok


def test_verify_paper_exits_one_on_library_error(cli, monkeypatch):
    monkeypatch.setattr(suite, "CHECKS", [suite.Check("x.map", "maps verify", _broken_map)])
    code, text = cli("verify-paper")
    assert code == 1
    assert "x.map" in text and "FAIL" in text
