import math

import numpy as np
import pytest

import qecool as qc


def test_gate_identities():
    h = qc.standard_gate("H").matrix
    x = qc.standard_gate("X").matrix
    z = qc.standard_gate("Z").matrix
    assert np.allclose(h @ h, np.eye(2), atol=1e-14)
    assert np.allclose(h @ z @ h, x, atol=1e-14)


def test_dephasing_fidelity_is_one_minus_p():
    for p in (0.0, 0.1, 0.35, 0.5):
        assert qc.channel_fidelity(qc.dephasing_channel(p)) == pytest.approx(
            1 - p, abs=1e-12
        )


def test_bit_flip_equals_conjugated_dephasing():
    h = qc.KrausChannel.from_unitary(qc.standard_gate("H"))
    for p in (0.0, 0.3):
        conj = qc.compose_channels(h, qc.compose_channels(qc.dephasing_channel(p), h))
        assert qc.choi_distance(conj, qc.bit_flip_channel(p)) < 1e-12


def test_pipeline_matches_closed_forms():
    assert qc.pipeline_fidelity(qc.CodeKind.TRADITIONAL, 0.0, q=0.4) == pytest.approx(
        0.96, abs=1e-12
    )
    anc = qc.AncillaState(0.64, 0.16, 0.16, 0.04)
    assert qc.pipeline_fidelity(qc.CodeKind.OPTIMAL, 0.1, ancilla=anc) == pytest.approx(
        0.92016, abs=1e-12
    )
    forms = qc.closed_form_fidelity(qc.CodeKind.OPTIMAL, 0.1, q=0.4)
    assert forms["from_rho"] == pytest.approx(0.92016, abs=1e-12)


def test_critical_rho00_optimal_is_half():
    crit = qc.critical_rho00(qc.CodeKind.OPTIMAL, 0.2)
    assert crit["attainable"]
    assert crit["rho00"] == pytest.approx(0.5, abs=1e-9)


def test_validate_channel_reset():
    ops = []
    for ij in range(4):
        k = np.zeros((8, 8), dtype=complex)
        for s in range(2):
            k[4 * s, 4 * s + ij] = 1.0
        ops.append(k)
    report = qc.validate_channel(qc.KrausChannel(ops))
    assert report["cptp"] and not report["unital"]


def test_thermal_state_and_calibration():
    eps = qc.polarization_from_temperature(4.7)
    assert eps == pytest.approx(0.3084125946846297, abs=1e-12)
    rho = qc.thermal_state(eps, 2)
    d = rho.diagonal_probabilities()
    assert d[0] == pytest.approx((1 + eps) ** 2 / 4, abs=1e-14)
    assert qc.temperature_from_polarization(math.sqrt(2) - 1) == pytest.approx(
        3.4, rel=0.02
    )


def test_ppa_reaches_the_fixed_point():
    bath = 0.31
    state = qc.thermal_state(bath, 3)
    state = qc.ppa_cool(state, [0, 1, 2], bath, 400)
    metrics = qc.refresh_metrics(state)
    assert metrics["rho00_pair"] == pytest.approx(0.51274769637806761, abs=1e-12)

    trace = qc.ppa_run(qc.thermal_state(bath, 2), bath, 3)
    assert len(trace["snapshots"]) == 7
    for snap in trace["snapshots"]:
        assert np.allclose(snap, trace["snapshots"][0], atol=1e-12)


def test_run_experiment_and_determinism(tmp_path):
    spec = qc.ExperimentSpec.defaults_for("fidelity-curves")
    spec.p_steps = 4
    table = qc.run_experiment(spec)
    assert table["columns"] == ["p", "baseline", "f_traditional", "f_optimal"]
    assert table["rows"][0][2] == pytest.approx(0.96, abs=1e-12)

    a = qc.render_experiment(spec, qc.TableFormat.CSV)
    b = qc.render_experiment(spec, qc.TableFormat.CSV)
    assert a == b

    out = tmp_path / "curves.csv"
    qc.run_experiment_to_file(spec, qc.TableFormat.CSV, out)
    text = out.read_text()
    assert text.startswith("# engine=qecool")
    assert "p,baseline,f_traditional,f_optimal" in text


def test_multiround_noiseless_is_lossless():
    spec = qc.MultiRoundSpec()
    spec.kind = qc.CodeKind.OPTIMAL
    spec.rounds = 3
    spec.p = 0.0
    spec.theta = 0.9
    spec.bath_eps = 0.31
    spec.dephase_during_refresh = False
    table = qc.multiround_sim(spec)
    for row in table["rows"]:
        assert row[1] == pytest.approx(1.0, abs=1e-12)


def test_invalid_specs_raise():
    with pytest.raises(ValueError):
        qc.dephasing_channel(1.5)
    spec = qc.ExperimentSpec.defaults_for("fidelity-curves")
    spec.p_steps = 0
    with pytest.raises(ValueError):
        qc.run_experiment(spec)
