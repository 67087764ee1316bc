import json

from algebra.defects import DefectReport
from algebra.exact import ONE, SparseVector
from errors import SolverCapError
from report import VERSION, Report, dumps, write_artifact


def failing_defects():
    defects = DefectReport("sample")
    defects.record("jacobi", "e,f,h", SparseVector({(0,): ONE}))
    defects.record("cojacobi", "e", SparseVector())
    return defects


def test_empty_report_passes():
    report = Report("check", "sha256:00")
    data = report.to_dict()
    assert data["status"] == "pass"
    assert data["version"] == VERSION
    assert "timings" not in data
    assert "created_at" not in data


def test_defects_fail_the_report():
    report = Report("check")
    entry = report.add_check("lie_bialgebra", failing_defects())
    assert entry["sections"]["jacobi"]["defects"] == [{"at": "e,f,h", "terms": 1}]
    assert entry["sections"]["cojacobi"]["status"] == "pass"
    assert not report.passed


def test_skipped_checks_do_not_fail():
    report = Report("check")
    report.skip("copoisson", "no group")
    assert report.passed
    assert report.to_dict()["checks"]["copoisson"] == {"status": "skipped", "why": "no group"}


def test_error_is_reported():
    report = Report("quantize")
    report.fail(SolverCapError("no solution", order=2, hint="raise --degree-cap"))
    data = report.to_dict()
    assert data["status"] == "fail"
    assert data["error"]["reason"] == "solver_inconsistent"
    assert data["error"]["order"] == 2


def test_timestamps_are_opt_in():
    report = Report("check", timestamps=True)
    data = report.to_dict()
    assert "total" in data["timings"]
    assert "created_at" in data


def test_json_rendering_is_stable():
    first, second = Report("check", "sha256:ab"), Report("check", "sha256:ab")
    for report in (first, second):
        report.set("twists", "zero")
        report.add_check("gamma", status="pass")
    assert first.render("json") == second.render("json")
    assert first.render("json").endswith("}\n")
    assert json.loads(first.render("json"))["result"] == {"twists": "zero"}


def test_text_rendering_lists_defect_locations():
    report = Report("check")
    report.add_check("lie_bialgebra", failing_defects())
    text = report.render("text")
    assert text.startswith(f"gammaq {VERSION} check: FAIL")
    assert "jacobi at e,f,h" in text


def test_dumps_sorts_keys():
    assert dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'


def test_write_artifact(tmp_path):
    path = tmp_path / "artifact.json"
    write_artifact(str(path), {"order": 1, "tool": "gammaq"})
    assert path.read_text(encoding="utf-8") == dumps({"order": 1, "tool": "gammaq"})
