import numpy as np
import pytest

from contactgeo.catalog import catalog
from contactgeo.classify import CLASS_IDS, applicable_classes, classify
from contactgeo.manifold import sample_points
from contactgeo.util import Sampling, verdict_for

SMP = Sampling(points=8, vectors=6, seed=42)


def _structure(name):
    entry = catalog(name).build()
    return entry.total if hasattr(entry, "total") else entry


def test_unknown_class_id():
    with pytest.raises(ValueError):
        classify(_structure("cosymplectic_r3"), "bogus", SMP)


def test_kind_mismatch():
    with pytest.raises(ValueError):
        classify(_structure("cosymplectic_r3"), "kahler", SMP)
    with pytest.raises(ValueError):
        classify(_structure("kodaira_thurston"), "C12", SMP)


def test_applicable_classes_partition():
    acm = applicable_classes(_structure("cosymplectic_r3"))
    ah = applicable_classes(_structure("flat_kahler_r4"))
    assert set(acm) | set(ah) == set(CLASS_IDS)
    assert not set(acm) & set(ah)


def test_verdict_bands():
    assert verdict_for(1e-9, 1e-7) == "holds"
    assert verdict_for(1e-3, 1e-7) == "fails"
    assert verdict_for(5e-7, 1e-7) == "inconclusive"


def test_sasakian_alpha_fit():
    rep = classify(_structure("sasakian_r5"), "alpha_sasakian", SMP)
    assert rep.verdict == "holds"
    assert abs(rep.extra["alpha"]) == pytest.approx(1.0, abs=1e-7)
    assert rep.extra["alpha_spread"] <= 1e-7


def test_cosymplectic_alpha_is_zero():
    rep = classify(_structure("cosymplectic_r3"), "alpha_sasakian", SMP)
    assert rep.verdict == "holds"
    assert rep.extra["alpha"] == pytest.approx(0.0, abs=1e-12)


def test_kodaira_thurston_kahler_witness():
    rep = classify(_structure("kodaira_thurston"), "kahler", SMP)
    assert rep.verdict == "fails"
    assert rep.witness_point in [ps.point for ps in
                                 sample_points(_structure("kodaira_thurston").chart, SMP.points, SMP.seed)]
    assert len(rep.witness_vectors) == 3


def test_report_shape_and_reproducibility():
    a = classify(_structure("cosymplectic_r5"), "quasi_sasakian", SMP)
    b = classify(_structure("cosymplectic_r5"), "quasi_sasakian", SMP)
    assert a.to_dict() == b.to_dict()
    doc = a.to_dict()
    assert doc["samples"] == {"points": 8, "vectors": 6, "seed": 42}
    assert doc["verdict"] == "holds"


def test_class_hierarchy_on_cosymplectic_entries():
    # anything that is parallel-phi must satisfy every weaker defining identity
    wider = (
        "almost_cosymplectic",
        "quasi_sasakian",
        "lc_cosymplectic",
        "lc_almost_quasi_sasakian",
    )
    for name in ("cosymplectic_r3", "cosymplectic_r5"):
        s = _structure(name)
        assert classify(s, "cosymplectic", SMP).verdict == "holds"
        for cid in wider:
            assert classify(s, cid, SMP).verdict == "holds", (name, cid)


def test_lee_form_closed_when_conformal_identity_holds():
    # structures satisfying the conformal identity in dim >= 5 have closed
    # Lee form and co-closed eta, with lee(xi) = 0
    for name in ("warped_s4", "sasakian_r5", "example31_kt", "c12_model"):
        s = _structure(name)
        if classify(s, "lc_almost_quasi_sasakian", SMP).verdict != "holds":
            continue
        for ps in sample_points(s.chart, 8, 5):
            ctx = s.at(ps)
            assert np.max(np.abs(ctx.dlee.val)) <= 1e-7, name
            assert abs(float(ctx.delta_eta.val)) <= 1e-8, name
            assert abs(float(ctx.lee.val @ ctx.xi.val)) <= 1e-8, name


def test_alpha_spread_reported_when_identity_fails():
    rep = classify(_structure("warped_s4"), "alpha_sasakian", SMP)
    assert rep.verdict == "fails"
    assert "alpha" in rep.extra
