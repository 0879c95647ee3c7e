import numpy as np
import pytest

import ddmap


def test_scenarios_listed():
    names = ddmap.scenario_names()
    assert "pvc10" in names and "ectopy10" in names


def test_template_vanishes_at_support_ends():
    grid, values = ddmap.make_template("ecg_like", 257)
    assert grid[0] == -0.5 and grid[-1] == 0.5
    assert values[0] == 0.0 and values[-1] == 0.0
    assert np.argmax(values) == 128


def test_lowpass_keeps_dc():
    x = np.full(2000, 3.0)
    np.testing.assert_allclose(ddmap.lowpass(x, 200.0), 3.0, atol=1e-9)


def test_circle_has_paired_eigenvalues():
    theta = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    pts = np.c_[np.cos(theta), np.sin(theta)]
    emb = ddmap.diffusion_map(pts, bandwidth=("knn", 16, 25.0), alpha=1.0, t=1.0, d=2)
    lam = emb["eigenvalues"]
    assert emb["coords"].shape == (400, 2)
    assert abs(lam[0] / lam[1] - 1.0) < 1e-6


def test_sign_cluster_small_set_is_ectopic():
    c = ddmap.sign_cluster(np.array([0.5, 0.2, -0.1]))
    assert c["ectopic"] == [2]
    assert c["normal"] == [0, 1]


def test_single_class_warns():
    with pytest.warns(UserWarning, match="single morphology class"):
        ddmap.sign_cluster(np.array([1.0, 2.0, 3.0]))


def test_error_types():
    with pytest.raises(ddmap.ConfigError):
        ddmap.make_scenario("nope")
    with pytest.raises(ValueError):
        ddmap.resolved_config(overrides=["kernel.bogus=1"])
    with pytest.raises(ddmap.DDMapError):
        ddmap.detect_landmarks(np.zeros(1000), 200.0)


def test_resolved_ecg_defaults():
    cfg = ddmap.resolved_config("ecg")
    assert cfg["kernel"]["dim"] == 32
    assert cfg["kernel"]["diffusion_time"] == 10
    assert cfg["window"] == {"mode": "fixed", "left_ms": 80.0, "right_ms": 400.0}


def test_pipeline_separates_ectopic_beats():
    data = ddmap.make_scenario("pvc10", seed=3, duration=120.0)
    with pytest.warns(UserWarning):
        out = ddmap.derive_edr(data["signal"], data["fs"], overrides=["kernel.dim=8"])
    truth = dict(zip(data["landmarks"], data["labels"]))
    found = out["landmarks"]
    assert len(found) >= 0.98 * len(truth)
    labels = np.asarray(out["clusters"]["labels"])
    expected = np.array([truth.get(i, truth.get(i + 1, truth.get(i - 1, -1))) for i in found])
    assert np.mean(labels == expected) >= 0.99
    assert out["embedding"]["coords"].shape == (len(found), 8)
    assert np.all(np.isfinite(out["edr"]["values"]))
