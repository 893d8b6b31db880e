import pytest

from lshcube.distdist import PointSet
from lshcube.optsets import OptimalityProfile, optimal_sets, optimal_table
from lshcube.optsets.optimal import Catalog, envelope
from oracles import load

FROZEN = load()


def _gens(row):
    return sorted((list(g.gens) for g in row.generators), reverse=True)


@pytest.fixture(scope="module")
def small_tables():
    return [row for t in range(1, 6) for row in optimal_table(t)]


def test_small_tables_match_oracle(small_tables):
    want = FROZEN["table4"]
    assert [(r.t, r.n) for r in small_tables] == [(w["t"], w["n"]) for w in want]
    for got, w in zip(small_tables, want):
        assert list(got.ddf.trimmed()) == w["ddf"]
        assert got.gamma_cross == pytest.approx(w["gamma_cross"], abs=2e-8)
        assert _gens(got) == w["generators"]


def test_tie_rows_list_both_sets(small_tables):
    ties = {(r.t, r.n): len(r.generators) for r in small_tables if len(r.generators) > 1}
    assert ties == {(4, 12): 2, (5, 12): 2, (5, 28): 2}


def test_small_examples():
    (cube,) = optimal_sets(2, 2)
    assert cube.regimes == ((0.0, 0.5),)
    assert cube.generators[0].gens == (3,)

    first, second = optimal_sets(4, 15)
    assert first.set == PointSet(range(16), 15)
    assert second.generators[0].gens == (2**14,)
    assert second.ddf.trimmed() == (16, 30, 210)
    assert second.gamma_cross == pytest.approx(FROZEN["table1"]["4"][0], abs=1e-8)
    assert second.regimes[0][1] == 0.5


def test_three_regimes_at_19():
    profiles = optimal_sets(5, 19)
    assert [p.generators[0].gens for p in profiles] == [(31,), (2**15 + 1,), (2**18, 2**12 + 1)]
    bounds = [p.regimes for p in profiles]
    assert bounds[0][0][0] == 0.0 and bounds[2][0][1] == 0.5
    assert round(bounds[1][0][0], 4) == 0.2826 and round(bounds[2][0][0], 4) == 0.3333
    assert bounds[0][0][1] == bounds[1][0][0] and bounds[1][0][1] == bounds[2][0][0]


def test_envelope_regimes_tile_the_range():
    cat = Catalog(5, 31)
    for n in (5, 12, 19, 28, 31):
        regs = envelope(cat, n)
        assert regs[0][1] == 0.0 and regs[-1][2] == 0.5
        assert all(a[2] == b[1] for a, b in zip(regs, regs[1:]))
        assert all(cat.mindim[r] <= n for r, _, _ in regs)


def test_profile_validation():
    S = PointSet([0], 1)
    from lshcube.distdist import distance_distribution

    with pytest.raises(ValueError):
        OptimalityProfile(S, distance_distribution(S), ((0.3, 0.2),))
    with pytest.raises(ValueError):
        OptimalityProfile(S, distance_distribution(S), ((0.0, 0.3), (0.2, 0.5)))
    with pytest.raises(ValueError):
        optimal_sets(7, 10)
    with pytest.raises(ValueError):
        optimal_sets(4, 16)


@pytest.mark.slow
def test_size_64_spot_dims_match_oracle():
    want = FROZEN["table5_spot"]
    for n in (12, 22, 28, 63):
        got = optimal_sets(6, n)
        regs = sorted((lo, hi, list(p.ddf.trimmed())) for p in got for lo, hi in p.regimes)
        exp = [(w["lo"], w["hi"], w["ddf"]) for w in want[str(n)]]
        assert len(regs) == len(exp)
        for (lo, hi, d), (elo, ehi, eds) in zip(regs, exp):
            assert d in eds
            assert lo == pytest.approx(elo, abs=2e-8) and hi == pytest.approx(ehi, abs=2e-8)
