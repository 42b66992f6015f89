import json
import math

import pytest

from bievolve import interference, kaon, pathsum, spectral, verify

SX = [[0, 1], [1, 0]]
SY = [[0, -1j], [1j, 0]]


def test_interference_peak_is_binomial():
    assert interference.eval(3, 2, 0.0) == pytest.approx(10.0, rel=1e-12)
    log_abs, phase = interference.eval_log(500, 100, 0.0)
    assert log_abs == pytest.approx(interference.log_binomial(600, 100), rel=1e-12)
    assert phase == 0.0


def test_interference_symmetry_and_oracle():
    x = 0.37
    a = interference.eval(4, 3, x)
    assert a == pytest.approx(interference.eval(3, 4, x), abs=1e-12)
    assert a == pytest.approx(interference.eval_oracle(4, 3, x), abs=1e-11)


def test_profile_normalized_peak():
    prof = interference.sample_profile(20, 20, -0.5, 0.5, 41, normalized=True)
    centre = prof.samples[20]
    assert centre.x == 0.0
    assert centre.norm_abs == pytest.approx(1.0, abs=1e-12)
    assert prof.peak_log_modulus == pytest.approx(interference.log_binomial(40, 20), rel=1e-12)
    assert prof.width == pytest.approx(interference.peak_width(20, 20), rel=1e-15)


def test_pathsum_decomposition_sums_to_total():
    bh = pathsum.BiHamiltonian(SX, SY, 0.5)
    assert not bh.t_invariant()
    res = pathsum.symmetric_evolve(bh, [1.0, 0.0], 6)
    summed = [sum(v[i] for v in res.per_n) for i in range(bh.dim)]
    assert summed == pytest.approx(res.total, abs=1e-12)
    assert res.norms[0] == pytest.approx(1.0, abs=1e-13)
    assert res.norms[6] == pytest.approx(1.0, abs=1e-13)


def test_destructive_demo_prunes_centre():
    bh = pathsum.BiHamiltonian(SX, SY, 0.5)
    s = pathsum.s_mn_spectral(bh, 20, 20)
    column = math.hypot(abs(s[0][0]), abs(s[1][0]))
    assert column / math.exp(interference.log_binomial(40, 20)) < 1e-2


def test_kaon_estimate_window():
    params = kaon.KaonParams()
    res = kaon.commutator_2x2(kaon.mass_matrix(params))
    assert 1.5e17 < res.lambda1 < 2.5e17
    assert res.lambda1 == pytest.approx(abs(kaon.eigenvalue_closed_form(params)), rel=0.023)


def test_regime_classification():
    model = spectral.EnsembleModel()
    report = spectral.regime_classify(model, 1e27, 1.0)
    assert report.classification == spectral.Regime.Broad
    assert spectral.lambda_sd(model).exp10() == 56
    assert spectral.t23_boundary(model).exp10() == -24


def test_attractor_reaches_constraint():
    h = [[0.0, 0.0], [0.0, math.pi / 3]]
    amp = 2 ** -0.5
    res = pathsum.attractor_evolve(h, [amp, amp], 1.0, 200)
    assert res.converged_to_zero_energy
    assert res.spectral_condition_ok
    assert abs(res.state[1]) < 1e-40


def test_verify_json_roundtrip():
    report = json.loads(verify.run("kaon", 42))
    assert report["all_pass"] is True
    assert report["suites"][0]["suite"] == "kaon"
    assert all(p["pass"] for p in report["suites"][0]["properties"])
