import json

import catalog
from config import TestingConfig


def report_of(result):
    return json.loads(result.output)


# ─────────────────────────────────────────────
# check
# ─────────────────────────────────────────────
def test_check_catalog_entry(run):
    result = run("check", "catalog:sl2-z2")
    assert result.exit_code == 0
    data = report_of(result)
    assert data["status"] == "pass"
    assert data["command"] == "check"
    assert data["result"]["twists"] == "r-matrix"
    assert {"lie_bialgebra", "quasitriangular", "action", "gamma", "copoisson"} <= set(data["checks"])
    assert data["input_digest"].startswith("sha256:")


def test_check_without_group_skips_gamma_checks(run):
    data = report_of(run("check", "catalog:sl2"))
    assert data["checks"]["gamma"]["status"] == "skipped"
    assert data["checks"]["quasitriangular"]["status"] == "pass"


def test_check_reports_jacobi_defect(run, write_doc):
    doc = catalog.sl2_zero()
    doc["bracket"][1] = [0, 2, 0, "-3"]
    result = run("check", write_doc(doc))
    assert result.exit_code == 2
    data = report_of(result)
    jacobi = data["checks"]["lie_bialgebra"]["sections"]["jacobi"]
    assert jacobi["status"] == "fail"
    assert "e,f,h" in [d["at"] for d in jacobi["defects"]]
    assert data["error"]["reason"] == "defect"


def test_check_schema_error(run, write_doc):
    doc = catalog.sl2()
    del doc["bracket"]
    result = run("check", write_doc(doc))
    assert result.exit_code == 3
    assert report_of(result)["error"]["pointer"] == "/bracket"


def test_unknown_catalog_entry(run):
    result = run("check", "catalog:nope")
    assert result.exit_code == 3
    assert report_of(result)["error"]["reason"] == "schema"


def test_check_text_format(run):
    result = run("check", "catalog:solvable2", "--format", "text")
    assert result.exit_code == 0
    assert result.output.startswith("gammaq ")
    assert "pass    lie_bialgebra" in result.output


def test_reports_are_reproducible(run):
    first = run("check", "catalog:solvable2-z2").output
    second = run("check", "catalog:solvable2-z2").output
    assert first == second
    assert "created_at" not in first


def test_timestamps_flag(run):
    data = report_of(run("check", "catalog:solvable2", "--timestamps"))
    assert "created_at" in data


def test_missing_argument_is_a_usage_error(run):
    result = run("check")
    assert result.exit_code == 3


# ─────────────────────────────────────────────
# quantize / verify-artifact
# ─────────────────────────────────────────────
def test_quantize_order_zero(run):
    result = run("quantize", "catalog:sl2-z2", "--order", "0")
    assert result.exit_code == 0
    data = report_of(result)
    assert data["checks"]["quantization"]["status"] == "pass"
    artifact = data["result"]["artifact"]
    assert artifact["order"] == 0
    assert artifact["pipeline"] == "generic"


def test_quantize_cross_checks_the_ladder(run):
    result = run("quantize", "catalog:solvable2-z2", "--order", "1")
    assert result.exit_code == 0, result.output
    data = report_of(result)
    assert data["checks"]["ladder"]["status"] == "pass"
    events = data["result"]["artifact"]["quantization"]["gauge_log"]
    assert any(e["object"] == "Γ-assembly" for e in events)


def test_quantize_then_verify(run, tmp_path):
    path = str(tmp_path / "solvable.json")
    result = run("quantize", "catalog:solvable2-z2", "--order", "1", "-o", path)
    assert result.exit_code == 0, result.output
    assert report_of(result)["result"]["artifact"] == path
    with open(path, encoding="utf-8") as fh:
        artifact = json.load(fh)
    assert artifact["input"] == catalog.document("solvable2-z2")
    assert artifact["order"] == 1

    verified = run("verify-artifact", path)
    assert verified.exit_code == 0, verified.output
    assert report_of(verified)["checks"]["quantization"]["status"] == "pass"


def test_quantize_is_deterministic(run, tmp_path):
    paths = [str(tmp_path / f"run{i}.json") for i in range(2)]
    for path in paths:
        run("quantize", "catalog:solvable2-z2", "--order", "1", "-o", path)
    with open(paths[0], "rb") as a, open(paths[1], "rb") as b:
        assert a.read() == b.read()


def test_verify_rejects_a_tampered_input(run, tmp_path):
    path = tmp_path / "solvable.json"
    run("quantize", "catalog:solvable2-z2", "--order", "1", "-o", str(path))
    artifact = json.loads(path.read_text(encoding="utf-8"))
    artifact["input"]["twists"]["s"] = [[0, 1, "2"]]
    path.write_text(json.dumps(artifact), encoding="utf-8")
    result = run("verify-artifact", str(path))
    assert result.exit_code == 3
    assert report_of(result)["error"]["pointer"] == "/input_digest"


def test_quasitriangular_pipeline_needs_r(run):
    result = run("quantize", "catalog:solvable2-z2", "--pipeline", "quasitriangular", "--order", "1")
    assert result.exit_code == 3
    assert report_of(result)["error"]["pointer"] == "/r"


def test_quantize_uses_the_cache(run, tmp_path, monkeypatch):
    monkeypatch.setattr(TestingConfig, "CACHE_DIR", str(tmp_path / "cache"))
    first = report_of(run("quantize", "catalog:solvable2-z2", "--order", "1"))
    second = report_of(run("quantize", "catalog:solvable2-z2", "--order", "1"))
    assert "cache" not in first["result"]
    assert second["result"]["cache"] == "hit"
    assert second["result"]["artifact"] == first["result"]["artifact"]


# ─────────────────────────────────────────────
# compare
# ─────────────────────────────────────────────
def test_compare_finds_a_gauge(run):
    result = run("compare", "catalog:abelian2-swap", "--order", "1")
    assert result.exit_code == 0, result.output
    data = report_of(result)
    assert data["checks"]["equivalence"]["status"] == "pass"
    assert "witness" in data["result"]


def test_compare_without_equivalence(run):
    result = run("compare", "catalog:abelian2-swap-mismatch", "--order", "1")
    assert result.exit_code == 5
    error = report_of(result)["error"]
    assert error["reason"] == "equivalence_not_found"
    assert error["order"] == 1


def test_compare_needs_a_group(run):
    result = run("compare", "catalog:sl2")
    assert result.exit_code == 3


# ─────────────────────────────────────────────
# catalog
# ─────────────────────────────────────────────
def test_catalog_listing(run):
    result = run("catalog")
    assert result.exit_code == 0
    for name in catalog.names():
        assert name in result.output


def test_catalog_entry_is_a_valid_input(run, write_doc):
    result = run("catalog", "sl2-z2")
    assert json.loads(result.output) == catalog.document("sl2-z2")
    assert run("check", write_doc(json.loads(result.output))).exit_code == 0
