import json
import math
import os
import subprocess

import pytest

import phasecrb as pc


def test_coherent_wiener_bound():
    r = pc.crb_mse(pc.PhaseNoiseModel.wiener(1.0), pc.CoherentBeam(1.0))
    assert r["value"] == pytest.approx(0.25, rel=1e-10)


def test_ou_coherent_closed_form():
    n, kappa, lam = 1e5, 0.3, 2.0
    r = pc.crb_mse(pc.PhaseNoiseModel.ornstein_uhlenbeck(kappa, lam), pc.CoherentBeam(math.sqrt(n)))
    assert r["value"] == pytest.approx(kappa / (2 * math.sqrt(4 * n * kappa + lam * lam)), rel=1e-9)


def test_squeezing_helps():
    phase = pc.PhaseNoiseModel.wiener(1.0)
    coherent = pc.crb_mse(phase, pc.CoherentBeam(2.0))["value"]
    squeezed = pc.crb_mse(phase, pc.OpoBeam.pure(2.0, 10.0, 10.0))["value"]
    assert squeezed < coherent


def test_optimum():
    r = pc.optimize_C(gamma_points=16, tau_points=8)
    assert r["C0"] == pytest.approx(pc.C0_exact(), rel=1e-6)
    assert r["tau"] == 1.0


def test_validation_report():
    ok = pc.validate_beam_spectrum(pc.OpoBeam.pure(1.0, 4.0, 2.0))
    assert ok["pass"]
    bad = pc.validate_beam_spectrum(pc.opo_general_unchecked(1.0, 4.0, 0.1, 2.0, 1.0 / 3.0))
    assert not bad["pass"]


def test_errors_map_to_exceptions():
    with pytest.raises(pc.DomainError):
        pc.PhaseNoiseModel.power_law(1.0, 1.0)
    with pytest.raises(pc.ConfigError):
        pc.run_config('{"beam": {"alhpa": 1}}')


def test_monte_carlo_small():
    r = pc.monte_carlo_mse(alpha=2.0, dt=5e-4, duration=10.0, burn_in=2.5, trajectories=5, seed=3)
    assert abs(r["mse_filtered"]["value"] - 0.25) < 5 * r["mse_filtered"]["stderr"]


def test_run_config_matches_cli(tmp_path):
    cli = os.environ.get("PHASECRB_CLI")
    if not cli:
        pytest.skip("PHASECRB_CLI not set")
    cfg = {"phase": {"model": "power_law", "p": 3.0, "kappa": 1.0}, "beam": {"type": "coherent", "alpha": 5.0}}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out = subprocess.run([cli, "bound", "--config", str(path)], capture_output=True, text=True, check=True)
    from_cli = json.loads(out.stdout)
    from_module = json.loads(pc.run_config(json.dumps(cfg)))
    assert from_cli == from_module
