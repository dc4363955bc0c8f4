import math

import numpy as np
import pytest

from waveq.gridfn import GridFunction, GridResolutionError
from waveq.laurent import Dyadic, EvaluationOverflowError, parse_laurent
from waveq.scaling import (
    CascadeDivergenceError,
    ScalingSystem,
    algebraic_form_check,
    b2_system,
    box_grid,
    box_midpoint_profile,
    box_profile,
    cascade,
    check_admissibility,
    deformed_scaling,
    deformed_scaling_report,
    haar_system,
    hat_grid,
    hat_profile,
    limit_build,
    limit_build_report,
    wavelet_from_scaling,
    wavelet_selfequation_report,
)


# -- systems and admissibility ---------------------------------------------------


def test_haar_symbol():
    assert haar_system().g == parse_laurent("1 + T^-1")
    assert float(haar_system().finest_step) == 1.0


def test_b2_symbol():
    sys = b2_system()
    assert sys.g == parse_laurent("1/2 + T^-1/2 + 1/2*T^-1")
    assert float(sys.finest_step) == 0.5


def test_system_validation():
    with pytest.raises(ValueError):
        ScalingSystem("bad", {0: 1.0}, lam=2)
    with pytest.raises(ValueError):
        ScalingSystem("bad", {})
    with pytest.raises(ValueError):
        ScalingSystem("bad", {1.0 / 3.0: 1.0})
    # negative odd shifts are fine
    ScalingSystem("ok", {0: 2.0}, lam=-1)


def test_admissibility_haar():
    rep = check_admissibility(haar_system())
    assert rep["sum_ok"]
    assert rep["coefficient_sum"] == 2.0
    assert all(rep["orth_ok"].values())
    assert rep["overlaps"]["0"] == 2.0


def test_admissibility_b2():
    rep = check_admissibility(b2_system())
    assert rep["sum_ok"]
    assert not rep["orth_ok"]["0"]
    assert rep["overlaps"]["0"] == 1.5
    assert not rep["orthonormal"]


def test_admissibility_constant_mask():
    rep = check_admissibility(ScalingSystem("const", {0: 2.0}))
    assert rep["sum_ok"]
    assert not rep["orth_ok"]["0"]
    assert rep["overlaps"]["0"] == 4.0


def test_admissibility_note_mentions_normalization():
    assert "2*delta" in check_admissibility(haar_system())["normalization_note"]


# -- cascade ---------------------------------------------------------------------


def test_cascade_box_is_fixed():
    start = box_grid(4)
    res = cascade(haar_system(), start, 3)
    assert res.residual == 0.0
    assert res.iterations == 3
    assert res.phi.identical(start)
    assert res.history == (0.0, 0.0, 0.0)


def test_cascade_box_fixed_at_coarse_grid():
    res = cascade(haar_system(), box_grid(2), 1)
    assert res.residual == 0.0


def test_cascade_hat_is_fixed():
    start = hat_grid(3)
    res = cascade(b2_system(), start, 2)
    assert res.residual == 0.0
    assert res.phi.identical(start)
    assert res.phi.value_at(0.5) == 2.0 + 0j


def test_cascade_alignment_error():
    with pytest.raises(GridResolutionError, match="non-aligned"):
        cascade(b2_system(), box_grid(0), 1)


def test_cascade_amplitude_preserved():
    # no normalization: a doubled start stays doubled forever
    start = box_grid(4) * 2.0
    res = cascade(haar_system(), start, 5)
    assert res.phi.identical(start)
    assert res.phi.integral() == 2.0 + 0j
    assert all(d == 0.0 for d in res.history)


def test_cascade_mass_conserved_from_wrong_start():
    # box is not the hat mask's fixed point, but mass is conserved exactly
    # at every step (sum C_k = 2 under the sigma = 1 convention)
    start = box_grid(4)
    masses = [start.integral()]
    phi = start
    for _ in range(6):
        phi = cascade(b2_system(), phi, 1).phi
        masses.append(phi.integral())
    assert all(m == 1.0 + 0j for m in masses)


def test_cascade_converges_toward_hat_from_box():
    res = cascade(b2_system(), box_grid(5), 10)
    assert res.history[-1] < res.history[0]


def test_cascade_divergence():
    sysd = ScalingSystem("triple", {0: 3.0})
    with pytest.raises(CascadeDivergenceError, match="cascade divergence"):
        cascade(sysd, box_grid(4), 40)


def test_cascade_rejects_negative_iters():
    with pytest.raises(ValueError):
        cascade(haar_system(), box_grid(3), -1)


# -- wavelets --------------------------------------------------------------------


def test_wavelet_literal_haar_values():
    psi = wavelet_from_scaling(haar_system(), box_grid(4), form="literal")
    assert psi.value_at(0.5) == 1.0 + 0j
    assert psi.value_at(0.75) == 1.0 + 0j
    assert psi.value_at(1.0) == -1.0 + 0j
    assert psi.value_at(1.25) == -1.0 + 0j
    assert psi.value_at(0.25) == 0j
    assert psi.value_at(1.5) == 0j
    assert abs(psi.integral()) <= 1e-12


def test_wavelet_canonical_haar_values():
    phi = box_grid(4)
    psi = wavelet_from_scaling(haar_system(), phi, form="canonical")
    assert psi.value_at(0.25) == 1.0 + 0j
    assert psi.value_at(0.75) == -1.0 + 0j
    assert abs(psi.integral()) <= 1e-12
    # orthogonal to the scaling function: equal-area overlap cancels
    phi_fine = GridFunction.from_callable(box_profile, psi.resolution, psi.window)
    assert psi.inner(phi_fine) == 0j


def test_wavelet_literal_shift():
    sys1 = haar_system()
    sys3 = ScalingSystem("haar3", {0: 1.0, 1: 1.0}, lam=3)
    psi1 = wavelet_from_scaling(sys1, box_grid(4), form="literal")
    psi3 = wavelet_from_scaling(sys3, box_grid(4), form="literal")
    for x in (0.5, 0.75, 1.0, 1.25):
        assert psi3.value_at(x + 2.0) == psi1.value_at(x)


def test_wavelet_b2_canonical():
    psi = wavelet_from_scaling(b2_system(), hat_grid(4), form="canonical")
    assert abs(psi.integral()) <= 1e-12
    assert psi.max_abs() > 0.1


def test_wavelet_b2_literal_rejected():
    with pytest.raises(ValueError, match="integer mask steps"):
        wavelet_from_scaling(b2_system(), hat_grid(4), form="literal")


def test_wavelet_form_validation():
    with pytest.raises(ValueError, match="literal"):
        wavelet_from_scaling(haar_system(), box_grid(3), form="other")


# -- limit sequences ---------------------------------------------------------------


def test_limit_build_arctan_accuracy():
    rep = limit_build_report("haar", "arctan", (8, 12, 16, 20), 10)
    assert rep["errors"][20]["l1"] < 1e-3
    assert rep["monotone_l1"]


def test_limit_build_tanh_accuracy():
    f = limit_build("haar", "tanh", 20, 10)
    target = GridFunction.from_callable(box_midpoint_profile, 10, (-1, 2))
    assert f.l1_distance(target) < 1e-6


def test_limit_build_tanh_monotone_at_fine_grid():
    # at coarse grids the tanh seed saturates and successive errors tie at
    # zero; resolution 18 keeps all four errors distinct
    rep = limit_build_report("haar", "tanh", (8, 12, 16, 20), 18)
    assert rep["monotone_l1"]
    assert rep["errors"][20]["l1"] < 1e-6


def test_limit_build_tri_accuracy():
    rep = limit_build_report("b2", "tri", (8, 12, 16, 20), 10)
    assert rep["errors"][20]["l1"] < 1e-2
    assert rep["monotone_l1"]
    f = limit_build("b2", "tri", 20, 10)
    assert abs(f.value_at(0.5) - 2.0) < 1e-2


def test_limit_build_jump_midpoints():
    f = limit_build("haar", "arctan", 20, 10)
    assert abs(f.value_at(0.0) - 0.5) < 1e-3
    assert abs(f.value_at(1.0) - 0.5) < 1e-3
    assert abs(f.value_at(0.5) - 1.0) < 1e-3


def test_limit_build_validation():
    with pytest.raises(ValueError):
        limit_build("haar", "tri", 4, 6)
    with pytest.raises(ValueError):
        limit_build("b2", "arctan", 4, 6)
    with pytest.raises(ValueError):
        limit_build("haar", "arctan", 0, 6)
    with pytest.raises(ValueError):
        limit_build("spline7", "arctan", 4, 6)
    with pytest.raises(EvaluationOverflowError):
        limit_build("haar", "arctan", 61, 6)


def test_limit_built_box_near_orthonormal():
    # translates of the n = 20 profile are orthonormal to grid accuracy
    f = limit_build("haar", "arctan", 20, 10, window=(-2, 3))
    vals = f.values
    m = 1 << 10
    for shift in (0, 1, 2):
        rolled = np.roll(vals, shift * m)
        got = float((np.conj(vals) * rolled).sum().real) * 2.0**-10
        target = 1.0 if shift == 0 else 0.0
        assert abs(got - target) < 1e-3


# -- operator identity behind the construction ---------------------------------------


def test_algebraic_form_check_range():
    for n in range(0, 9):
        rep = algebraic_form_check(n)
        assert rep["residual"] == 0.0
        assert rep["word_terms"] == 2**n
        assert rep["ok"]
    with pytest.raises(ValueError):
        algebraic_form_check(9)
    with pytest.raises(ValueError):
        algebraic_form_check(-1)


# -- deformed family -------------------------------------------------------------------


def test_deformed_scaling_unit_endpoint():
    f = deformed_scaling(1.0, 16, 8)
    target = GridFunction.from_callable(box_midpoint_profile, 8, (-1, 2))
    assert f.l1_distance(target) < 1e-2
    assert abs(f.integral() - 1.0) < 1e-12


def test_deformed_scaling_interior_sanity():
    f = deformed_scaling(0.5, 10, 7)
    assert abs(f.integral() - 1.0) < 1e-12
    assert np.isfinite(f.values).all()


def test_deformed_scaling_zero_endpoint_reported():
    rep = deformed_scaling_report((0.0, 1.0), 10, 7)
    assert len(rep["rows"]) == 2
    # the s = 0 degenerate endpoint must produce a row, with no accuracy claim
    assert rep["rows"][0]["s"] == 0.0
    assert math.isfinite(rep["rows"][0]["l1_to_box"])
    assert rep["rows"][1]["l1_to_box"] < 0.05


def test_deformed_scaling_validation():
    with pytest.raises(ValueError):
        deformed_scaling(1.5, 4, 6)
    with pytest.raises(ValueError):
        deformed_scaling(-0.1, 4, 6)
    with pytest.raises(ValueError):
        deformed_scaling(0.5, 0, 6)


# -- wavelet self-similarity report ------------------------------------------------------


def test_selfequation_report_shape():
    rep = wavelet_selfequation_report(resolution=6)
    for key in (
        "printed_residual_max",
        "printed_residual_l1",
        "symmetric_residual_max",
        "symmetric_residual_l1",
    ):
        assert key in rep
        assert math.isfinite(rep[key])
        assert rep[key] >= 0.0
    assert "not asserted" in rep["note"]


def test_profiles_exact_values():
    xs = np.array([-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5])
    assert list(box_profile(xs)) == [0, 1, 1, 1, 1, 0, 0]
    assert list(box_midpoint_profile(xs)) == [0, 0.5, 1, 1, 1, 0.5, 0]
    assert list(hat_profile(xs)) == [0, 0, 1, 2, 1, 0, 0]
