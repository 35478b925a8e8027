import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import hook_length_count
from stability_forge.chow import (
    Bidegree, CenterOnCurveError, NonGenericCenterError, Partition, Witness,
    bidegree_curve, double_chow_value, double_chow_verdict, grassmannian_degree,
    pieri, project_curve, projection_node_count, schubert_integral,
    singular_divisor_volume, stability_constants,
)
from stability_forge.groebner import Ideal

TWISTED_CUBIC = Ideal.parse(["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"], 4)


# -- Schubert calculus -------------------------------------------------------

@pytest.mark.parametrize("k, N1", [(2, 4), (2, 5), (2, 6), (3, 6), (2, 7), (3, 7), (1, 5)])
def test_grassmannian_degree_matches_hook_length(k, N1):
    assert grassmannian_degree(k, N1) == hook_length_count(k, N1 - k)


def test_catalan_sequence():
    assert [grassmannian_degree(2, m) for m in range(3, 9)] == [1, 2, 5, 14, 42, 132]


def test_gr24_products():
    assert schubert_integral([2, 1, 1], 2, 4) == 1
    assert schubert_integral([Partition((1, 1)), 2], 2, 4) == 0
    assert schubert_integral([Partition((1, 1)), Partition((1, 1))], 2, 4) == 1
    assert schubert_integral([2, 2], 2, 4) == 1


def test_pieri_rule():
    assert sorted(pieri(Partition((1,)), 1, 2, 4)) == sorted([Partition((2,)), Partition((1, 1))])
    # strip must be horizontal: no two boxes in one column
    assert Partition((1, 1)) not in pieri(Partition(), 2, 2, 4)
    assert pieri(Partition((2, 2)), 1, 2, 4) == []


def test_codimension_mismatch_rejected():
    with pytest.raises(ValueError, match="codimension mismatch"):
        schubert_integral([1, 1], 2, 4)


partitions_in_box = st.lists(st.integers(0, 3), min_size=0, max_size=3).map(
    lambda ps: Partition(sorted(ps, reverse=True)))


@given(partitions_in_box, partitions_in_box)
def test_products_commute(a, b):
    k, N1 = 3, 6
    rest = 9 - a.size - b.size
    if rest < 0:
        return
    tail = [1] * rest
    assert schubert_integral([a, b] + tail, k, N1) == schubert_integral([b, a] + tail, k, N1)


@given(partitions_in_box)
def test_duality(lam):
    # sigma_lam * sigma_lam_dual = 1 and every other complementary class gives 0
    k, cols = 3, 3
    padded = list(lam.parts) + [0] * (k - len(lam.parts))
    dual = Partition(sorted((cols - p for p in padded), reverse=True))
    assert schubert_integral([lam, dual], k, k + cols) == 1


def test_giambelli_matches_pieri_expansion():
    # sigma_1^2 = sigma_2 + sigma_11, checked against every complementary class on Gr(2,5)
    for comp in [Partition((3, 1)), Partition((2, 2))]:
        lhs = schubert_integral([1, 1, comp], 2, 5)
        rhs = schubert_integral([2, comp], 2, 5) + schubert_integral([Partition((1, 1)), comp], 2, 5)
        assert lhs == rhs


# -- constants ---------------------------------------------------------------

@pytest.mark.parametrize("d, n, N, mu, D, beta, nu1, nu2", [
    (3, 1, 3, Fraction(2, 3), 2, 1, Fraction(20, 3), 1),
    (2, 1, 2, 1, 1, 1, 3, 2),
])
def test_stability_constants(d, n, N, mu, D, beta, nu1, nu2):
    b = stability_constants(d, n, N, mu)
    assert (b.D, b.beta, b.nu1, b.nu2) == (D, beta, nu1, nu2)
    assert b.nu2 * b.D == n + 1


@given(st.integers(1, 4), st.integers(1, 3), st.integers(1, 6), st.fractions(-6, 6, max_denominator=5))
def test_nu2_times_D(n, extra, d, mu):
    N = n + extra
    if (N - n) * (n + 1) > 12:
        return
    b = stability_constants(d, n, N, mu)
    assert b.nu2 * b.D == n + 1


def test_volume():
    assert singular_divisor_volume(3, 1, 2, 1, Fraction(2, 3)) == 8
    assert stability_constants(3, 1, 3, Fraction(2, 3)).volume == 8


def test_verdicts():
    assert double_chow_value(3, 1, Fraction(2, 3), 1, 0) == Fraction(10, 3)
    assert double_chow_verdict(3, 1, Fraction(2, 3), 1, 0) is Witness.STABLE
    assert double_chow_verdict(3, 1, Fraction(2, 3), 0, 0) is Witness.NOT_STABLE
    assert double_chow_verdict(3, 1, Fraction(2, 3), 1, 4) is Witness.NOT_STABLE


# -- curves ------------------------------------------------------------------

def test_bidegree():
    assert bidegree_curve(3, 0) == Bidegree(3, 1)
    assert bidegree_curve(4, 1) == Bidegree(6, 2)
    with pytest.raises(ValueError):
        bidegree_curve(3, 2)


@given(st.integers(1, 8), st.data())
def test_bidegree_difference(d, data):
    g = data.draw(st.integers(0, (d - 1) * (d - 2) // 2))
    b = bidegree_curve(d, g)
    assert b.d1 - b.d2 == d - 1 + g


def test_projection_of_twisted_cubic():
    g = project_curve(TWISTED_CUBIC, (1, 0, 0, 1))
    assert g.degree() == 3
    assert projection_node_count(TWISTED_CUBIC, (1, 0, 0, 1)) == 1


def test_projection_from_tangent_line_is_cuspidal():
    # (0:0:1:0) lies on the tangent line at (0:0:0:1)
    with pytest.raises(NonGenericCenterError) as info:
        projection_node_count(TWISTED_CUBIC, (0, 0, 1, 0))
    assert info.value.singular_degree == 2


def test_center_on_curve_rejected():
    with pytest.raises(CenterOnCurveError):
        project_curve(TWISTED_CUBIC, (1, 0, 0, 0))


def test_generic_centers_give_one_node():
    rng = random.Random(5)
    seen = 0
    for _ in range(12):
        center = [rng.randint(-4, 4) for _ in range(4)]
        if not any(center) or TWISTED_CUBIC.vanishes_at(center):
            continue
        try:
            count = projection_node_count(TWISTED_CUBIC, center)
        except NonGenericCenterError:
            continue
        assert count == 1 == bidegree_curve(3, 0).d2
        seen += 1
    assert seen >= 6
