import json
import math
import os
import pathlib
import subprocess

import jsonschema
import numpy as np
import pytest

import ttqi

ROOT = pathlib.Path(os.environ.get("TTQI_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
GRID = str(ROOT / "data" / "pdf" / "NNPDF31_lo_as_0118_0000.dat")


def schema(name):
    return json.loads((ROOT / "schemas" / name).read_text())


def test_singlet_markers():
    s = ttqi.FanoState.unpolarized(-np.eye(3))
    assert ttqi.concurrence(s) == pytest.approx(1.0)
    assert ttqi.chsh_value(s.c) == pytest.approx(2 * math.sqrt(2))
    rho = ttqi.density_matrix(s)
    assert rho.shape == (4, 4)
    assert np.trace(rho).real == pytest.approx(1.0)
    back = ttqi.from_density_matrix(rho)
    assert np.allclose(back.c, -np.eye(3))


def test_quoted_critical_values():
    a = ttqi.axial_criticals_gg()
    assert a["beta_ph"] == pytest.approx(0.632, abs=1e-3)
    assert a["m_ch"] == pytest.approx(374.0, abs=1.0)
    assert ttqi.knm(0, 1, 0.5) == pytest.approx(2 * math.atanh(0.5))


def test_errors_map_to_value_error():
    with pytest.raises(ttqi.TtqiError, match="BelowThreshold"):
        ttqi.beta_of_mass(300.0)
    with pytest.raises(ValueError):
        ttqi.Collider(beam="ep")


def test_collider_weights():
    c = ttqi.Collider(beam="pp", sqrt_s=13000.0, pdf=GRID)
    lqq, lgg = c.luminosities(400.0)
    assert lgg / lqq > 5.0
    wq, wg = c.channel_weights(346.0)
    assert wq + wg == pytest.approx(1.0)


def test_sampling_round_trip():
    s = ttqi.FanoState.unpolarized(-np.eye(3))
    ev = ttqi.sample_events(s, 20000, 5)
    assert ev.shape == (20000, 6)
    assert np.allclose(np.linalg.norm(ev[:, :3], axis=1), 1.0)
    assert np.array_equal(ev, ttqi.sample_events(s, 20000, 5))
    est = ttqi.estimate_state(ev)
    assert est["d"] == pytest.approx(-1.0, abs=5 * est["d_error"])


def test_report_matches_schema():
    doc = ttqi.report(ttqi.Collider(pdf="toy-v1"), 346.0, 400.0, 20000, 3)
    jsonschema.validate(doc, schema("tomography_report.schema.json"))
    assert len(doc["estimates"]["none"]) == 15


@pytest.mark.skipif("TTQI_CLI" not in os.environ, reason="CLI binary not provided")
@pytest.mark.parametrize(
    "args",
    [
        ["--grid", "4x3", "scan-map"],
        ["--grid", "3", "luminosity"],
        ["--grid", "3", "observables"],
        ["--grid", "2", "critical", "--energies", "2000:13000"],
    ],
)
def test_cli_tables_match_schema(tmp_path, args):
    out = tmp_path / "t.json"
    subprocess.run([os.environ["TTQI_CLI"], "--format", "json", "--out", str(out), *args], check=True)
    jsonschema.validate(json.loads(out.read_text()), schema("table.schema.json"))


@pytest.mark.skipif("TTQI_CLI" not in os.environ, reason="CLI binary not provided")
def test_cli_report_matches_schema(tmp_path):
    out = tmp_path / "r.json"
    subprocess.run(
        [os.environ["TTQI_CLI"], "--n", "5000", "--format", "json", "--out", str(out), "tomography"], check=True
    )
    jsonschema.validate(json.loads(out.read_text()), schema("tomography_report.schema.json"))
