
import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphavg.funcspace import (INF, BallSum, BoxIndicator, GridFunction,
                              LorentzParams, RadialProfile, SimpleFunction,
                              SupportError, ball_volume, conjugate,
                              distribution_function, gaussian, hl_maximal,
                              lorentz_norm, lorentz_norm_distribution_form,
                              lp_norm)


def unit_square_indicator(n=64):
    vals = np.ones((n, n))
    return GridFunction([0.0, 0.0], [1.0, 1.0], vals)


def disc_indicator(n=512, radius=1.0, box=1.5):
    xs = -box + (np.arange(n) + 0.5) * (2 * box / n)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    vals = ((X**2 + Y**2) <= radius**2).astype(float)
    return GridFunction([-box, -box], [box, box], vals)


class TestLpNorm:
    def test_unit_square_l2(self):
        assert abs(lp_norm(unit_square_indicator(), 2) - 1.0) < 1e-12

    def test_disc_l1_is_area(self):
        f = disc_indicator()
        assert abs(lp_norm(f, 1) - math.pi) < 2e-2

    def test_gaussian_l2_closed_form(self):
        # ||exp(-pi |x|^2)||_2 = 2^(-1/2) in d = 2
        n = 700
        xs = -3.0 + (np.arange(n) + 0.5) * 6.0 / n
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        f = GridFunction([-3.0, -3.0], [3.0, 3.0],
                         np.exp(-math.pi * (X**2 + Y**2)))
        assert abs(lp_norm(f, 2) - 2.0**-0.5) < 1e-4

    def test_linf(self):
        f = GridFunction([0.0], [1.0], np.array([0.5, -2.0, 1.0]))
        assert lp_norm(f, INF) == 2.0

    def test_rejects_small_p(self):
        with pytest.raises(ValueError):
            lp_norm(unit_square_indicator(), 0.5)

    def test_radial_profile_ball_volume(self):
        r = np.linspace(0, 2, 4001)
        prof = RadialProfile(r, (r <= 1.0).astype(float), d=3)
        assert abs(lp_norm(prof, 1) - ball_volume(3, 1.0)) < 5e-3


class TestDistribution:
    def test_indicator_levels(self):
        f = unit_square_indicator()
        assert abs(distribution_function(f, 0.5) - 1.0) < 1e-12
        assert distribution_function(f, 1.5) == 0.0

    def test_dyadic_block_value(self):
        # three-level dyadic sum: inside the first block the super-level
        # set is exactly the second ball
        from sphavg.examples import DyadicSumSpec, dyadic_block_edges, make_dyadic_sum

        spec = DyadicSumSpec(N=3, a=1.0, d=1, r=1)
        f = make_dyadic_sum(spec)
        edges = dyadic_block_edges(spec)
        t = 0.5 * (edges[0] + edges[1])  # inside block F_1
        want = ball_volume(1, 1.0 * 4.0 ** -2)
        assert abs(distribution_function(f, t) - want) < 1e-12

    def test_nonincreasing(self, rng):
        vals = np.sort(rng.uniform(0.1, 5, 7))[::-1]
        meas = rng.uniform(0.1, 1, 7)
        f = SimpleFunction(vals, meas)
        lams = np.sort(rng.uniform(0.05, 6, 30))
        ds = [distribution_function(f, lam) for lam in lams]
        assert all(a >= b for a, b in zip(ds, ds[1:]))

    def test_right_continuity_at_blocks(self):
        f = SimpleFunction([2.0, 1.0], [0.3, 0.7])
        # at lambda = 1 the level-1 mass drops out (strict inequality)
        assert abs(distribution_function(f, 1.0) - 0.3) < 1e-15
        assert abs(distribution_function(f, 1.0 - 1e-9) - 1.0) < 1e-12


class TestLorentz:
    @pytest.mark.parametrize("p", [Fr(3, 2), Fr(2), Fr(7, 2)])
    def test_indicator_q1(self, p):
        E = 0.42
        f = SimpleFunction([1.0], [E])
        assert abs(lorentz_norm(f, p, 1)
                   - float(p) * E ** (1 / float(p))) < 1e-14

    def test_indicator_qinf(self):
        f = SimpleFunction([1.0], [0.42])
        assert abs(lorentz_norm(f, 2, INF) - 0.42**0.5) < 1e-14

    def test_pp_equals_lp(self, rng):
        vals = np.sort(rng.uniform(0.2, 3.0, 8))[::-1]
        meas = rng.uniform(0.1, 2.0, 8)
        f = SimpleFunction(vals, meas)
        for p in (Fr(1), Fr(2), Fr(7, 3)):
            assert abs(lorentz_norm(f, p, p) - lp_norm(f, p)) < 1e-10

    def test_rejects_infinite_p(self):
        f = SimpleFunction([1.0], [1.0])
        with pytest.raises(ValueError):
            lorentz_norm(f, INF, 2)

    def test_matches_distribution_form(self, rng):
        vals = np.sort(rng.uniform(0.2, 3.0, 5))[::-1]
        meas = rng.uniform(0.1, 2.0, 5)
        f = SimpleFunction(vals, meas)
        params = LorentzParams(Fr(3, 2), Fr(2))
        a = lorentz_norm(f, params)
        b = lorentz_norm_distribution_form(f, params)
        assert abs(a - b) / a < 2e-3

    def test_rearrangement_invariance(self, rng):
        vals = rng.uniform(0, 2, size=(16, 16))
        f = GridFunction([0, 0], [1, 1], vals)
        perm = rng.permutation(vals.ravel()).reshape(16, 16)
        g = GridFunction([0, 0], [1, 1], perm)
        assert abs(lorentz_norm(f, 2, 1) - lorentz_norm(g, 2, 1)) < 1e-12

    @settings(max_examples=50, deadline=None)
    @given(c=st.floats(min_value=0.01, max_value=100.0),
           seed=st.integers(0, 10**6))
    def test_homogeneity(self, c, seed):
        r = np.random.default_rng(seed)
        k = int(r.integers(1, 6))
        vals = np.sort(r.uniform(0.1, 4.0, k))[::-1]
        vals = np.unique(vals)[::-1]
        meas = r.uniform(0.1, 2.0, len(vals))
        f = SimpleFunction(vals, meas)
        assert lorentz_norm(f.scale(c), 2, 1) == pytest.approx(
            c * lorentz_norm(f, 2, 1), rel=1e-12)


class TestHLMaximal:
    def test_constant(self):
        f = GridFunction([0.0], [1.0], np.ones(32))
        for p in (1, 2, Fr(3, 2)):
            assert abs(hl_maximal(f, p, 0.4) - 1.0) < 1e-12

    def test_indicator_outside_point(self):
        n = 600
        xs = -1.0 + (np.arange(n) + 0.5) * 4.0 / n
        vals = ((xs > 0) & (xs < 1)).astype(float)
        f = GridFunction([-1.0], [3.0], vals)
        # best interval containing x = 2 is [0, 2]
        assert abs(hl_maximal(f, 1, 2.0) - 0.5) < 5e-3

    def test_brute_force_oracle(self, rng):
        # independent oracle: direct scan over all subinterval averages on
        # a coarse grid
        n = 24
        vals = rng.uniform(0, 1, n)
        f = GridFunction([0.0], [1.0], vals)
        h = 1.0 / n
        x = 0.52
        best = 0.0
        pref = np.concatenate([[0.0], np.cumsum(vals) * h])
        for a in range(n + 1):
            for b in range(a + 1, n + 1):
                if a * h <= x <= b * h:
                    best = max(best, (pref[b] - pref[a]) / ((b - a) * h))
        assert hl_maximal(f, 1, x) >= best - 1e-12

    def test_monotone_in_p(self, rng):
        vals = rng.uniform(0, 2, 48)
        f = GridFunction([0.0], [1.0], vals)
        for x in rng.uniform(0, 1, 5):
            m32 = hl_maximal(f, Fr(3, 2), float(x))
            m3 = hl_maximal(f, 3, float(x))
            assert m32 <= m3 + 1e-12


class TestCarriers:
    def test_ball_sum_values(self):
        f = BallSum([1.0, 2.0], [1.0, 0.5], d=2)
        assert f.eval_points(np.array([[0.1, 0.0]]))[0] == 3.0
        assert f.eval_points(np.array([[0.8, 0.0]]))[0] == 1.0
        assert f.eval_points(np.array([[2.0, 0.0]]))[0] == 0.0

    def test_ball_sum_levels(self):
        f = BallSum([1.0, 2.0], [1.0, 0.5], d=2)
        vals, meas = f.level_representation()
        assert np.allclose(vals, [3.0, 1.0])
        assert np.allclose(meas, [math.pi * 0.25,
                                  math.pi * (1.0 - 0.25)])

    def test_box_indicator(self):
        b = BoxIndicator([0, 0], [2, 1])
        assert b.measure == 2.0
        assert b.eval_points(np.array([[1.0, 0.5]]))[0] == 1.0
        assert b.eval_points(np.array([[3.0, 0.5]]))[0] == 0.0

    def test_gaussian_decay(self):
        g = gaussian(2, center=[1.0, 0.0], scale=2.0)
        v = g.eval_points(np.array([[1.0, 0.0], [3.0, 0.0]]))
        assert v[0] == 1.0
        assert abs(v[1] - math.exp(-1.0)) < 1e-14

    def test_conjugate(self):
        assert conjugate(2) == 2
        assert conjugate(1) == INF
        assert conjugate(INF) == 1
        assert conjugate(Fr(3, 2)) == 3


class TestSupportGuard:
    def test_zero_margin_allows_outside(self):
        vals = np.zeros((8, 8))
        vals[3:5, 3:5] = 1.0
        f = GridFunction([0, 0], [1, 1], vals)
        assert f.has_zero_margin()
        out = f.eval_points(np.array([[10.0, 10.0]]))
        assert out[0] == 0.0

    def test_no_margin_raises(self):
        f = GridFunction([0, 0], [1, 1], np.ones((8, 8)))
        assert not f.has_zero_margin()
        with pytest.raises(SupportError):
            f.eval_points(np.array([[10.0, 10.0]]))
        # interior queries are fine
        assert f.eval_points(np.array([[0.5, 0.5]]))[0] == 1.0


class TestSerialization:
    def test_bytes_roundtrip(self, rng):
        vals = rng.normal(size=(9, 13))
        f = GridFunction([-1.0, 0.0], [1.0, 2.6], vals)
        g = GridFunction.from_bytes(f.to_bytes())
        assert g.d == 2
        assert np.array_equal(g.values, f.values)
        assert np.allclose(g.lo, f.lo) and np.allclose(g.hi, f.hi)

    def test_bytes_rejects_garbage(self):
        with pytest.raises(ValueError):
            GridFunction.from_bytes(b"XXXX" + b"\0" * 64)

    def test_csv_roundtrippable_values(self):
        f = GridFunction([0.0], [1.0], np.array([1.0, 2.0, 3.0]))
        text = f.to_csv_string()
        lines = text.strip().split("\n")
        assert lines[0] == "x0,value"
        assert len(lines) == 4
        got = [float(line.split(",")[1]) for line in lines[1:]]
        assert got == [1.0, 2.0, 3.0]
