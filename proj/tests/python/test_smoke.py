import math
import xml.etree.ElementTree as ET

import pytest

import edl


def test_version():
    assert edl.__version__


def test_fixed_point_and_eigenvalues():
    x = edl.fixed_point(edl.SystemParams(), edl.ControlParams(1.0, 1.0, 0.5))
    assert x.H == pytest.approx(1.0)
    assert x.Q == pytest.approx(1.0)
    assert x.M == pytest.approx(2.0)
    ev = edl.eigenvalues(edl.jacobian(edl.SystemParams(), edl.ControlParams(1.0, 1.0, 0.5)))
    assert max(z.real for z in ev) == pytest.approx(-0.25)
    assert edl.classify_stability(ev) == edl.Stability.StableSpiralMixed


def test_singular_equilibrium_raises():
    with pytest.raises(edl.SingularEquilibriumError):
        edl.fixed_point(edl.SystemParams(), edl.ControlParams(1.0, 1.0, 0.0))


def test_integrate_and_classify():
    params = edl.SystemParams()
    control = edl.ControlParams(1.0, 1.0, 0.8)
    cfg = edl.IntegratorConfig()
    cfg.T = 100.0
    traj = edl.integrate(edl.StateVec(1.0, 1.0, 1.0), params, control, cfg)
    assert len(traj["t"]) == 10001
    assert traj["t"][-1] == 100.0
    assert edl.classify_regime(traj, params, control) == edl.Regime.Degeneration


def test_invalid_step_raises():
    cfg = edl.IntegratorConfig()
    cfg.h = 0.0
    with pytest.raises(edl.ValidationError):
        edl.integrate(edl.StateVec(1.0, 1.0, 1.0), edl.SystemParams(), edl.ControlParams(1.0, 1.0, 0.5), cfg)


def test_sweep():
    grid = [0.05 + 0.01 * i for i in range(96)]
    res = edl.sweep_u(edl.SystemParams(), 1.0, 1.0, grid)
    q = [s[1] for s in res["steady_states"]]
    assert all(b <= a for a, b in zip(q, q[1:]))
    assert grid[0] < res["u_c"] < grid[-1]


def test_information_measures():
    assert edl.shannon_entropy([0.25] * 4) == pytest.approx(math.log(4), abs=1e-12)
    assert edl.kl_divergence([0.9, 0.1], [0.5, 0.5]) == pytest.approx(0.36806420716849707, abs=1e-10)
    assert edl.mutual_information([[0.25, 0.25], [0.25, 0.25]]) == pytest.approx(0.0, abs=1e-15)
    rows = edl.run_generations(u=0.9, generations=20)
    assert [r["gen"] for r in rows] == list(range(1, 21))
    assert rows[-1]["H_human"] < rows[0]["H_human"]


def test_presets_and_config():
    names = edl.preset_names()
    assert {"enhancement", "equilibrium", "degeneration", "offload_sweep"} <= set(names)
    text = edl.normalize_config(edl.preset_text("degeneration"))
    assert edl.normalize_config(text) == text


def test_cli_outputs(tmp_path):
    code, out, _ = edl.run_cli(["classify", "--config", "presets/equilibrium.cfg"])
    assert (code, out) == (0, "Equilibrium\n")
    code, _, _ = edl.run_cli(["--no-timestamp", "sweep", "--config", "presets/offload_sweep.cfg",
                              "--out", str(tmp_path), "--svg"])
    assert code == 0
    root = ET.parse(tmp_path / "sweep.svg").getroot()
    assert root.tag.endswith("svg")
    assert len(root.findall(".//{http://www.w3.org/2000/svg}polyline")) == 3
    assert edl.run_cli(["nonsense"])[0] == 2
