import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from twistscrew.model import (
    Fields,
    Geometry,
    Mode,
    angular_bracket,
    effective_index,
    effective_potential,
    geometric_phase,
    relative_phase,
    screw_profile,
    shifted_index,
    term_decomposition,
)
from twistscrew.units import ELECTRON_GAAS

small = st.floats(-5.0, 5.0)
radii = st.floats(1e-2, 400.0)


def test_screw_profile():
    assert screw_profile(Geometry(50, 0), 10) == 50
    assert screw_profile(Geometry(0, 1), 10) == 10
    assert screw_profile(Geometry(50, 2), 20) == 90
    np.testing.assert_array_equal(screw_profile(Geometry(1, 2), [0, 1]), [1, 3])


def test_effective_index_examples():
    assert effective_index(Mode(1, 0.01), Fields(0, 0), Geometry(50, 0)) == pytest.approx(0.5)
    assert effective_index(Mode(0, 0.0), Fields(0, 0), Geometry(50, 0)) == 0.0
    assert effective_index(Mode(1, 0.0), Fields(0, 1.0), Geometry(0, 0)) == 0.0


def test_shifted_index_keeps_sign():
    assert shifted_index(Mode(0, 0.01), Fields(0, 0), Geometry(50, 0)) == pytest.approx(-0.5)


def test_potential_vanishes_at_half_index():
    r = np.linspace(1e-3, 500, 97)
    U = effective_potential(Geometry(50, 0), Fields(0, 0), Mode(1, 0.01), r)
    assert np.all(U == 0.0)


def test_potential_examples():
    U = effective_potential(Geometry(50, 0), Fields(0, 0), Mode(2, 0.01), 10.0)
    assert U == pytest.approx(1.5**2 / 100 - 1 / 400, rel=1e-14)
    assert effective_potential(Geometry(0, 0), Fields(0, 0), Mode(0, 0.0), 1.0) == -0.25


@pytest.mark.parametrize("r", [0.0, -1.0])
def test_potential_domain(r):
    with pytest.raises(ValueError):
        effective_potential(Geometry(), Fields(), Mode(), r)


@given(st.integers(-4, 4), small, st.floats(0.001, 0.05), st.floats(-3, 3), radii)
def test_potential_depends_on_combination(ell, delta, kz, phi, r):
    geo = Geometry(50.0, 0.7)
    a = effective_potential(geo, Fields(0.5, phi + delta), Mode(ell, kz), r)
    b = effective_potential(Geometry(50.0 + delta / kz, 0.7), Fields(0.5, phi), Mode(ell, kz), r)
    assert a == pytest.approx(b, rel=1e-9, abs=1e-12 * (1 + abs(a)))


@given(small, st.floats(0.01, 100.0))
def test_field_free_potential_is_pure_barrier(x, r):
    geo, mode = Geometry(0.0, 0.0), Mode(0, 0.0)
    U = effective_potential(geo, Fields(0.0, -x), mode, r)
    assert U == pytest.approx((x * x - 0.25) / (r * r), rel=1e-12, abs=1e-15)


@given(st.integers(-3, 3), st.floats(-2, 2), st.floats(-0.05, 0.05), st.floats(-100, 100),
       st.floats(-3, 3), st.floats(-5, 5), radii)
def test_term_decomposition_recomposes(ell, phi, kz, w1, w2, B, r):
    geo, fld, mode = Geometry(w1, w2), Fields(B, phi), Mode(ell, kz)
    terms = term_decomposition(geo, fld, mode)
    b = angular_bracket(geo, fld, mode, r)
    compact = b * b / (r * r)
    expanded = -terms.evaluate(r)
    # the expansion loses digits to cancellation; compare against the largest term
    scale = max(abs(terms.constant_shift), abs(terms.centrifugal_coeff) / r**2, abs(terms.coulomb_coeff) / r,
                abs(terms.linear_tilt_coeff) * r, abs(terms.landau_coeff) * r * r, 1e-300)
    assert abs(expanded - compact) <= 1e-12 * scale + 1e-15
    U = effective_potential(geo, fld, mode, r)
    assert U + 0.25 / r**2 == pytest.approx(compact, rel=1e-10, abs=1e-15 * (scale + 0.25 / r**2))


def test_term_decomposition_benchmark_with_twist():
    t = term_decomposition(Geometry(50, 1.0), Fields(1.0, 0.0), Mode(1, 0.01), ELECTRON_GAAS)
    assert t.constant_shift == pytest.approx(-8.5963e-4, abs=1e-8)
    assert t.coulomb_coeff == pytest.approx(0.01)
    assert t.linear_tilt_coeff == pytest.approx(1.51926e-5, rel=1e-5)
    assert t.landau_coeff == pytest.approx(-5.770e-7, rel=1e-3)
    assert t.centrifugal_coeff == pytest.approx(-0.25)


def test_term_decomposition_limits():
    t = term_decomposition(Geometry(50, 0), Fields(0, 0), Mode(1, 0.01))
    assert t.coulomb_coeff == t.linear_tilt_coeff == t.landau_coeff == 0.0
    assert t.constant_shift == 0.0
    t = term_decomposition(Geometry(50, 1.0), Fields(1.0, 0.25), Mode(2, 0.0))
    assert t.coulomb_coeff == 0.0 and t.linear_tilt_coeff == 0.0
    from twistscrew.units import beta_B
    assert t.constant_shift == pytest.approx(2 * beta_B(1.0, ELECTRON_GAAS) * 1.75)


def test_geometric_phase():
    assert geometric_phase(Geometry(50, 0), 0.01, 7.0) == pytest.approx(math.pi)
    assert geometric_phase(Geometry(50, 3), 0.0, 7.0) == 0.0
    assert geometric_phase(Geometry(0, 1), 0.01, 25.0) == pytest.approx(math.pi / 2)


@given(st.floats(-0.1, 0.1), st.floats(0, 100), st.floats(0.1, 5))
def test_geometric_phase_linear(kz, r, c):
    geo = Geometry(0.0, 1.3)
    assert geometric_phase(geo, c * kz, r) == pytest.approx(c * geometric_phase(geo, kz, r), rel=1e-12, abs=1e-14)
    assert geometric_phase(geo, kz, c * r) == pytest.approx(c * geometric_phase(geo, kz, r), rel=1e-12, abs=1e-14)


def test_relative_phase():
    assert relative_phase(Geometry(50, 1), 0.01, 30, 20) == pytest.approx(0.2 * math.pi)
    assert relative_phase(Geometry(50, 1), 0.01, 12, 12) == 0.0


@given(st.floats(-200, 200), st.floats(-200, 200), st.floats(0, 100), st.floats(0, 100))
def test_relative_phase_antisymmetric_and_blind_to_screw(w1a, w1b, r1, r2):
    assume(r1 != r2)
    a = relative_phase(Geometry(w1a, 0.8), 0.02, r1, r2)
    assert a == relative_phase(Geometry(w1b, 0.8), 0.02, r1, r2)
    assert relative_phase(Geometry(w1a, 0.8), 0.02, r2, r1) == -a


def test_mode_requires_integer_ell():
    with pytest.raises(ValueError):
        Mode(1.5, 0.01)
    assert Mode(2.0, 0.0).ell == 2


@pytest.mark.parametrize("ctor", [lambda: Geometry(math.nan, 0), lambda: Fields(math.inf, 0), lambda: Mode(1, math.nan)])
def test_non_finite_parameters_rejected(ctor):
    with pytest.raises(ValueError):
        ctor()
