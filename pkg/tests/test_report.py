import json
import math

import pytest

from cocompact import corpus
from cocompact.config import RunConfig
from cocompact.plmap import affine_conjugate
from cocompact.report import entropy_report


def report(f, **kw):
    return entropy_report(f, RunConfig(map_source="test", **kw))


def test_doubling_contrast():
    r = report(corpus.doubling())
    est = r.estimates
    assert est["horseshoe"] is None
    assert est["lap"].value == 0
    assert est["cover"].direction == "upper-bound"
    assert r.cover_series.counts == [2, 3, 4, 5, 6, 7]
    assert est["bowen-euclid"].value >= math.log(2) - 0.05
    assert est["bowen-circle"].value <= 0.05
    assert r.consistent


def test_example_map():
    r = report(corpus.example_truncated(1), horseshoe_n_max=1)
    assert r.estimates["horseshoe"].value == pytest.approx(math.log(2))
    assert r.estimates["horseshoe"].direction == "lower-bound"
    assert r.estimates["lap"].value == pytest.approx(math.log(3), abs=1e-6)
    assert r.consistent


def test_identity_is_zero():
    r = report(corpus.identity())
    assert r.estimates["horseshoe"] is None
    assert r.estimates["lap"].value == 0
    assert r.estimates["bowen-euclid"].value == pytest.approx(0, abs=0.02)
    assert r.estimates["bowen-circle"].value == pytest.approx(0, abs=0.02)
    # min a_n / n over n <= 6 for a constant N_n = 2
    assert r.estimates["cover"].value == pytest.approx(math.log(2) / 6)


def test_inconsistency_is_flagged_not_raised():
    r = report(corpus.example_truncated(1), horseshoe_n_max=1, lap_n_max=1, tolerance=0.0)
    r.checks[0]["value"] = 0.0
    r.checks[0]["ok"] = False
    assert not r.consistent
    assert r.to_json()["verdict"]["consistent"] is False


def test_json_shape_and_log_base():
    r = report(corpus.example_truncated(1), horseshoe_n_max=1, log_base="2")
    doc = json.loads(r.dumps())
    assert doc["estimates"]["horseshoe"]["value"] == pytest.approx(1.0)
    for est in doc["estimates"].values():
        if est is not None:
            assert {"value", "method", "direction", "params"} <= set(est)
    assert doc["config"]["log_base"] == "2"
    assert doc["end_class"] == "C3"
    assert r.dumps() == report(corpus.example_truncated(1), horseshoe_n_max=1, log_base="2").dumps()


@pytest.mark.parametrize("a, b", [(2, 1), (-1, 0), (3, -5)])
def test_affine_conjugates_agree(a, b):
    f = corpus.tent_extended()
    r1, r2 = report(f, metrics=("euclid",)), report(affine_conjugate(f, a, b), metrics=("euclid",))
    assert r1.lap_series.counts == r2.lap_series.counts
    for key in ("horseshoe", "lap"):
        assert r1.estimates[key].value == pytest.approx(r2.estimates[key].value, abs=0.02)
