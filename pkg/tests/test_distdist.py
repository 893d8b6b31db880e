import math
from itertools import combinations
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lshcube.bitvec import Word
from lshcube.distdist import (
    DistDist,
    PointSet,
    collision_probability,
    distance_distribution,
    distance_sum,
    error_exponent,
    rho_exponent,
)
from oracles import collision_double_sum, ddf_naive, load


@st.composite
def point_sets(draw, max_n=16, max_size=64):
    n = draw(st.integers(1, max_n))
    pts = draw(st.sets(st.integers(0, 2**n - 1), min_size=1, max_size=min(max_size, 2**n)))
    return PointSet(pts, n)


SUBCUBE_2 = PointSet([0, 1, 2, 3], 2)
SPHERE_3 = PointSet([0b000, 0b001, 0b010, 0b100], 3)


def test_subcube_and_sphere_ddfs():
    assert distance_distribution(SUBCUBE_2).coeffs == (4, 8, 4)
    assert distance_distribution(SPHERE_3).coeffs == (4, 6, 6, 0)


def test_golay_sphere_ddf_matches_oracle():
    frozen = load()["golay_ddf"]
    pts = [0] + [sum(1 << i for i in c) for w in (1, 2, 3) for c in combinations(range(23), w)]
    d = distance_distribution(PointSet(pts, 23))
    assert list(d.coeffs) == frozen
    assert d.trimmed() == (2048, 11684, 128524, 226688, 1133440, 672980, 2018940)


def test_distance_sums():
    assert distance_sum(SUBCUBE_2) == 8
    assert distance_sum(SPHERE_3) == 9


@pytest.mark.parametrize("k", [1, 2, 5, 12])
@pytest.mark.parametrize("gamma", [0.0, 0.1, 0.3, 0.49])
def test_subcube_probability(k, gamma):
    n = k + 3
    cube = PointSet(range(8), n)
    assert collision_probability(cube, gamma) == pytest.approx((1 - gamma) ** k, rel=1e-12)


def test_subcube_limit_near_half():
    cube = PointSet(range(4), 4)
    assert collision_probability(cube, 0.5 - 1e-9) == pytest.approx(0.25, abs=1e-8)


def test_hamming_sphere_ties_projection_at_table_value():
    sphere = PointSet([0] + [1 << i for i in range(15)], 15)
    assert abs(collision_probability(sphere, 0.2826) - (1 - 0.2826) ** 11) < 1e-3


def test_exponents():
    g, k, n = 0.2, 12, 23
    E = error_exponent((1 - g) ** k, n)
    assert E == pytest.approx(-(k / n) * math.log2(1 - g))
    assert rho_exponent((1 - g) ** k, 2.0**-k) == pytest.approx(E / (k / n))
    with pytest.raises(ValueError):
        rho_exponent(0.0, 0.5)


def test_gamma_domain():
    with pytest.raises(ValueError):
        collision_probability(SUBCUBE_2, 0.5)
    with pytest.raises(ValueError):
        collision_probability(SUBCUBE_2, -0.01)


@given(point_sets())
def test_ddf_invariants(S):
    d = distance_distribution(S)
    assert d.coeffs[0] == len(S)
    assert sum(d.coeffs) == len(S) ** 2
    assert list(d.coeffs) == ddf_naive(S.points, S.n)
    assert DistDist.from_json(d.to_json()) == d


@given(point_sets(), st.fractions(Fraction(0), Fraction(49, 100), max_denominator=1000))
def test_probability_matches_double_sum(S, g):
    exact = collision_double_sum(S.points, S.n, g)
    assert collision_probability(S, float(g)) == pytest.approx(float(exact), rel=1e-12, abs=1e-300)


@given(point_sets(), st.floats(0.001, 0.499))
def test_probability_at_least_singleton(S, gamma):
    P = collision_probability(S, gamma)
    floor = (1 - gamma) ** S.n
    if len(S) == 1:
        assert P == pytest.approx(floor, rel=1e-12)
    else:
        assert P >= floor * (1 - 1e-12)
        # strictness, exactly: A(zeta) > s whenever another point exists
        z = Fraction(gamma) / (1 - Fraction(gamma))
        assert distance_distribution(S).evaluate(z) > len(S)


@given(point_sets(max_n=12))
def test_first_order_expansion_near_half(S):
    s, n = len(S), S.n
    d = distance_distribution(S)
    weighted = sum(i * a for i, a in enumerate(d.coeffs))

    def residual(eps):
        linear = (s / 2**n) * (1 + 2 * n * eps) - 4 * eps / (s * 2**n) * weighted
        return abs(collision_probability(d, 0.5 - eps) - linear)

    scale = s / 2**n * (n + 1) ** 2 * 8
    assert residual(1e-4) <= scale * 1e-8
    assert residual(1e-5) <= scale * 1e-10


@given(point_sets())
def test_literal_round_trip(S):
    assert PointSet.from_literal(S.to_literal()) == S
    assert all(isinstance(w, Word) for w in S.words())


def test_pointset_validation():
    with pytest.raises(ValueError):
        PointSet([], 3)
    with pytest.raises(ValueError):
        PointSet([8], 3)
    with pytest.raises(ValueError):
        PointSet([Word(1, 4)], 3)
    assert len(PointSet([1, 1, 2], 3)) == 2
    with pytest.raises(ValueError):
        PointSet([1], 4).embed(3)


def test_ddf_validation():
    with pytest.raises(ValueError):
        DistDist((4, 8), 2, 4)
    with pytest.raises(ValueError):
        DistDist((4, 8, 5), 2, 4)


def test_polynomial_string():
    d = distance_distribution(PointSet([0] + [1 << i for i in range(15)], 15))
    assert d.polynomial() == "16+30x+210x^2"
    assert d.evaluate(Fraction(1)) == 256
