from fractions import Fraction
from math import lcm

import pytest
from hypothesis import assume, given, strategies as st

from oracles import pl_integral_grid
from stability_forge.algebra import OnePSG, Polynomial, monomial_weight
from stability_forge.groebner import Ideal, initial_form, is_multiplicity_free
from stability_forge.hilbert import donaldson_futaki, hilbert_polynomial
from stability_forge.hypersurface import (
    DivergentIntegralError, HypersurfaceProblem, MultipleFibersError, PLFunction,
    coefficient_identity_check, hypersurface_slope, lu_integral, lu_slope,
    mabuchi_coefficient, psi_profile, refined_futaki,
)

CONIC = "x0*x2 - x1^2"
FERMAT = "x0^3 + x1^3 + x2^3 + x3^3"


def brute_psi(f: Polynomial, w, i, r):
    return min(-monomial_weight(a, w) + a[i] * r for a in f.support())


def test_envelope_examples():
    psi = PLFunction.lower_envelope([(0, 2), (1, 0)])
    assert psi.slopes == (2, 0) and psi.breakpoints == (Fraction(1, 2),)
    assert psi(Fraction(1, 4)) == Fraction(1, 2) and psi(3) == 1
    single = PLFunction.lower_envelope([(-3, 1)])
    assert single.slopes == (1,) and single(2) == -1


def test_conic_profiles():
    p = HypersurfaceProblem.parse(CONIC, (1, -1, 0))
    assert hypersurface_slope(p) == 1
    profiles = [psi_profile(p, i) for i in range(3)]
    assert [lu_integral(psi) for psi in profiles] == [0, 0, 0]
    assert lu_slope(p) == Fraction(3, 2)


def test_conic_non_reduced_limit():
    p = HypersurfaceProblem.parse(CONIC, (1, 1, -2))
    assert hypersurface_slope(p) == 2
    # x1 profile: min(1, -2 + 2r) has a slope-2 piece on [0, 3/2]
    psi = psi_profile(p, 1)
    assert psi.slopes[0] == 2
    assert psi.breakpoints == (Fraction(3, 2),)
    assert lu_integral(psi) == 3
    assert lu_slope(p) == 0
    assert donaldson_futaki(Ideal([p.f]), (1, 1, -2)) == Fraction(3, 4)
    with pytest.raises(MultipleFibersError, match="multiple fibers"):
        mabuchi_coefficient(p)


def test_divergent_profile():
    # every monomial of x0^2*x1 + x0^2*x2 is divisible by x0^2
    p = HypersurfaceProblem.parse("x0^2*x1 + x0^2*x2", (1, 0, -1))
    with pytest.raises(DivergentIntegralError, match="divergent"):
        lu_integral(psi_profile(p, 0))


def test_fermat_surface():
    p = HypersurfaceProblem.parse(FERMAT, (1, 1, -1, -1))
    assert hypersurface_slope(p) == 3
    assert lu_slope(p) == Fraction(16, 3)
    assert donaldson_futaki(Ideal([p.f]), (1, 1, -1, -1)) == Fraction(4, 3)


def test_trivial_weight_is_neutral():
    p = HypersurfaceProblem.parse(CONIC, (0, 0, 0))
    assert hypersurface_slope(p) == 0
    assert lu_slope(p) == 0
    assert mabuchi_coefficient(p) == 0


def test_refined_futaki_and_mabuchi():
    assert refined_futaki(2, 1, 1, 1, 0) == Fraction(3, 2)
    p = HypersurfaceProblem.parse(CONIC, (1, -1, 0))
    assert mabuchi_coefficient(p) == Fraction(-3, 2)
    assert mabuchi_coefficient(p, slope_fD=1) == Fraction(-1, 2)


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("d", range(1, 7))
def test_coefficient_identity(n, d):
    assert coefficient_identity_check(d, n)


def test_non_traceless_weights_are_normalized():
    raw = HypersurfaceProblem.parse(CONIC, (2, 0, 1))
    moved = HypersurfaceProblem.parse(CONIC, (1, -1, 0))
    assert lu_slope(raw) == lu_slope(moved)
    odd = HypersurfaceProblem.parse(CONIC, (1, 0, 0))
    assert tuple(odd.traceless) == (2, -1, -1) and odd.scale == 3
    assert lu_slope(odd) == lu_slope(HypersurfaceProblem.parse(CONIC, (2, -1, -1))) / 3


# -- properties over random hypersurfaces ------------------------------------

@st.composite
def hypersurfaces(draw):
    nvars = draw(st.integers(3, 4))
    d = draw(st.integers(2, 3))
    monos = [a for a in _monomials(nvars, d)]
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=5, unique=True))
    coeffs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(chosen), max_size=len(chosen)))
    w = draw(st.lists(st.integers(-3, 3), min_size=nvars, max_size=nvars))
    return Polynomial(dict(zip(chosen, coeffs)), nvars), w


def _monomials(nvars, d):
    if nvars == 1:
        yield (d,)
        return
    for k in range(d + 1):
        for rest in _monomials(nvars - 1, d - k):
            yield (k,) + rest


@given(hypersurfaces(), st.integers(0, 4))
def test_envelope_matches_brute_force(data, i):
    f, w = data
    i %= f.nvars
    psi = psi_profile(HypersurfaceProblem(f, w), i)
    assert psi.is_concave() and psi.is_continuous()
    assert set(psi.slopes) <= {a[i] for a in f.support()}
    for r in [Fraction(k, 6) for k in range(0, 60)]:
        assert psi(r) == brute_psi(f, w, i, r)


@given(hypersurfaces(), st.integers(0, 4))
def test_integral_matches_grid_sum(data, i):
    f, w = data
    i %= f.nvars
    psi = psi_profile(HypersurfaceProblem(f, w), i)
    assume(psi.eventual_slope < 2)
    den = lcm(*range(1, f.degree() + 1))
    horizon = (max(psi.breakpoints, default=Fraction(0)) + 1)
    assert lu_integral(psi) == pl_integral_grid(psi, None, horizon, den)


@given(hypersurfaces())
def test_calibration_on_multiplicity_free_limits(data):
    f, w = data
    assume(not OnePSG(w).is_trivial)
    assume(is_multiplicity_free(f, w))
    p = HypersurfaceProblem(f, w)
    F1 = donaldson_futaki(Ideal([f]), w)
    lu = lu_slope(p)
    mu = hilbert_polynomial(Ideal([f])).mu
    slope_RX = Fraction(max(monomial_weight(a, p.traceless) for a in f.support()), p.scale)
    assert lu == 4 * F1
    assert lu == refined_futaki(p.d, p.n, mu, slope_RX, 0)
    assert mabuchi_coefficient(p) == -lu


@given(hypersurfaces(), st.integers(-4, 4), st.integers(1, 3))
def test_lu_slope_shift_and_scale(data, c, k):
    f, w = data
    p = HypersurfaceProblem(f, w)
    try:
        base = lu_slope(p)
    except DivergentIntegralError:
        return
    assert lu_slope(HypersurfaceProblem(f, [x + c for x in w])) == base
    assert lu_slope(HypersurfaceProblem(f, [k * x for x in w])) == k * base


@given(hypersurfaces())
def test_squarefree_initial_form_has_no_correction(data):
    f, w = data
    assume(is_multiplicity_free(f, w))
    p = HypersurfaceProblem(f, w)
    assert all(lu_integral(psi_profile(p, i)) == 0 for i in range(f.nvars))
    assert initial_form(f, w).is_homogeneous()


def test_problem_validation():
    with pytest.raises(ValueError):
        HypersurfaceProblem.parse("x0^2 + x1", (1, 0, -1))
    with pytest.raises(ValueError):
        HypersurfaceProblem.parse("x0*x1", (1, -1))
    with pytest.raises(ValueError):
        HypersurfaceProblem(Polynomial.parse("x0*x1", 3), (1, -1))
