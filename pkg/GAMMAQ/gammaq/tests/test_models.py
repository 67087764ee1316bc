import pytest

from models.models import SolveCache

CAPS = {"slack": 0, "absolute": None}


@pytest.fixture
def cache(tmp_path):
    return SolveCache(f"sqlite:///{tmp_path / 'cache.db'}")


def artifact(order=1):
    return {
        "order": order,
        "quantization": {"order": order, "gauge_log": [{"object": "F_s", "order": 1, "event": "aligned"}]},
    }


def test_miss_on_empty_cache(cache):
    assert cache.get("sha256:aa", "generic", 1, CAPS) is None


def test_put_then_get(cache):
    cache.put("sha256:aa", "generic", 1, CAPS, "0.3.0", artifact())
    assert cache.get("sha256:aa", "generic", 1, CAPS) == artifact()


def test_key_includes_pipeline_order_and_caps(cache):
    cache.put("sha256:aa", "generic", 1, CAPS, "0.3.0", artifact())
    assert cache.get("sha256:aa", "quasitriangular", 1, CAPS) is None
    assert cache.get("sha256:aa", "generic", 2, CAPS) is None
    assert cache.get("sha256:aa", "generic", 1, {"slack": 1, "absolute": None}) is None


def test_latest_artifact_wins(cache):
    cache.put("sha256:aa", "generic", 1, CAPS, "0.3.0", artifact())
    newer = dict(artifact(), note="second")
    cache.put("sha256:aa", "generic", 1, CAPS, "0.3.0", newer)
    assert cache.get("sha256:aa", "generic", 1, CAPS) == newer


def test_gauge_events_are_stored(cache):
    cache.put("sha256:aa", "generic", 1, CAPS, "0.3.0", artifact())
    assert cache.events("sha256:aa") == [{"object": "F_s", "order": 1, "event": "aligned"}]


def test_discard_removes_artifacts_and_events(cache):
    cache.put("sha256:aa", "generic", 1, CAPS, "0.3.0", artifact())
    cache.put("sha256:bb", "generic", 1, CAPS, "0.3.0", artifact())
    cache.discard("sha256:aa")
    assert cache.get("sha256:aa", "generic", 1, CAPS) is None
    assert cache.events("sha256:aa") == []
    assert cache.get("sha256:bb", "generic", 1, CAPS) is not None
