from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphavg import regions as rg
from sphavg.funcspace import INF

RS = (1, Fr(3, 2), 2, 3, INF)


def pt(coords, d=2, r=None):
    return rg.ExponentPoint(tuple(coords), d=d, r=r)


class TestVertexFormulas:
    """Golden coordinates: every named vertex from the diagrams."""

    def test_linear_ar_d2_r2(self):
        V = rg.vertex_table("linear-ar", d=2, r=2)
        assert V["O"] == (0, 0)
        assert V["A"] == (Fr(1, 2), 0)
        assert V["P"] == (Fr(7, 10), Fr(1, 10))
        assert V["Q"] == (Fr(3, 4), Fr(1, 4))
        assert V["R"] == (Fr(3, 4), Fr(3, 4))

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("r", RS)
    def test_linear_ar_general(self, d, r):
        from sphavg.regions import inv

        V = rg.vertex_table("linear-ar", d=d, r=r)
        ir = inv(r)
        irp = 1 - ir
        X = Fr(d - 1, d) + ir / d
        assert V["A"] == (ir, 0)
        assert V["Q"] == (X, irp / d)
        assert V["R"] == (X, X)
        # P = ((d+1+r(d^2-d))/(r(d^2+1)), (d-1)/(r'(d^2+1))), written with
        # inverse exponents so r = infinity is just ir = 0
        want_px = ((d + 1) * ir + d * d - d) / Fr(d * d + 1)
        want_py = Fr(d - 1, d * d + 1) * irp
        assert V["P"] == (want_px, want_py)

    def test_linear_br_primed(self):
        for d in (2, 3):
            V = rg.vertex_table("linear-br", d=d, r=2)
            assert V["P'"] == (Fr(d * d - d, d * d + 1),
                               Fr(d - 1, d * d + 1))
            assert V["Q'"] == (Fr(d - 1, d), Fr(1, d))
            assert V["R'"] == (Fr(d - 1, d), Fr(d - 1, d))
        # d = 2 degeneracy: Q' = R' = (1/2, 1/2)
        V2 = rg.vertex_table("linear-br", d=2, r=2)
        assert V2["Q'"] == V2["R'"] == (Fr(1, 2), Fr(1, 2))

    def test_local_bilinear_improved_captions(self):
        for d in (2, 3):
            V = rg.vertex_table("local-bilinear-improved", d=d)
            assert V["A"] == (Fr(1, 2), 0)
            assert V["E"] == (Fr(2 * d - 3, 2 * (d - 1)),
                              Fr(d - 2, d * (d - 1)))
            assert V["F"] == (Fr((2 * d - 1) ** 2, 2 * (2 * d * d - d + 1)),
                              Fr(2 * d - 3, 2 * d * d - d + 1))
            assert V["B'"] == (Fr(2 * d * d - d + 1, 2 * (d * d + 1)),
                               Fr(d - 1, d * d + 1))
            assert V["C"] == (Fr(2 * d - 1, 2 * d), Fr(1, d))
            assert V["D"] == (Fr(2 * d - 1, 2 * d), Fr(2 * d - 1, d))

    def test_endpoint_diagrams(self):
        V1 = rg.vertex_table("bilinear-endpoint", d=1)
        assert V1 == {"U1": (Fr(1, 2), Fr(0)), "U2": (Fr(1, 2), Fr(1, 2)),
                      "U3": (Fr(0), Fr(1, 2))}
        V2 = rg.vertex_table("bilinear-endpoint", d=2)
        assert V2 == {"V1": (Fr(1), Fr(1, 2)), "V2": (Fr(1, 2), Fr(1))}

    def test_rotated_hull_vertices(self):
        V = rg.vertex_table("rotated-single-scale")
        assert len(V) == 7
        assert V["W1"] == (Fr(2, 3), Fr(2, 3), Fr(1))
        assert V["W6"] == (Fr(1, 2), Fr(1, 2), Fr(1, 2))
        Vpi = rg.vertex_table("rotated-single-scale-pi")
        assert len(Vpi) == 6

    def test_unknown_theorem(self):
        with pytest.raises(ValueError):
            rg.vertex_table("no-such-theorem")


class TestFacetIncidence:
    """Each named vertex lies with equality on exactly the facets the
    diagram puts it on."""

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("r", RS)
    def test_linear_ar_vertices_on_facets(self, d, r):
        from sphavg.regions import inv

        V = rg.vertex_table("linear-ar", d=d, r=r)
        ir = inv(r)

        def c1(x, y):
            return x - d * y  # = 1/r on the facet A-P

        def c3(x, y):
            return x - Fr(d - 1, d + 1) * y  # = 2 ir/(d+1) + (d-1)/(d+1)

        X = Fr(d - 1, d) + ir / d
        assert c1(*V["A"]) == ir
        assert c1(*V["P"]) == ir
        assert c3(*V["P"]) == Fr(2, d + 1) * ir + Fr(d - 1, d + 1)
        assert c3(*V["Q"]) == Fr(2, d + 1) * ir + Fr(d - 1, d + 1)
        assert V["Q"][0] == X and V["R"][0] == X
        assert V["R"][0] == V["R"][1]  # R on the diagonal
        assert V["O"] == (0, 0)

    def test_rotated_hull_facets_tight(self):
        verts = rg.ROTATED_HULL_VERTICES
        for A, b in rg.ROTATED_HULL_FACETS:
            vals = [sum(Fr(a) * c for a, c in zip(A, v)) for v in verts]
            assert all(v <= b for v in vals)
            assert sum(1 for v in vals if v == b) >= 3
        # the pi facet is valid for the reduced hull and cuts off W6
        A, b = rg.ROTATED_HULL_FACET_PI
        vals = [sum(Fr(a) * c for a, c in zip(A, v)) for v in verts[:-1]]
        assert all(v <= b for v in vals)
        w6 = sum(Fr(a) * c for a, c in zip(A, verts[-1]))
        assert w6 > b


class TestClassify:
    def test_pinned_probe_points(self):
        # >= 30 probes: interior, each facet, excluded vertices/segments
        probes = [
            # linear-ar, d=2, r=2: region O A P Q R
            ((Fr(0), Fr(0)), "linear-ar", 2, 2, "strong"),
            ((Fr(1, 2), Fr(1, 4)), "linear-ar", 2, 2, "strong"),
            ((Fr(1, 2), Fr(0)), "linear-ar", 2, 2, "strong"),   # vertex A
            ((Fr(3, 5), Fr(1, 20)), "linear-ar", 2, 2, "strong"),  # on A-P
            ((Fr(29, 40), Fr(7, 40)), "linear-ar", 2, 2, "strong"),  # on P-Q
            ((Fr(1, 2), Fr(1, 2)), "linear-ar", 2, 2, "strong"),  # diagonal
            ((Fr(7, 10), Fr(1, 10)), "linear-ar", 2, 2, "restricted-weak"),
            ((Fr(3, 4), Fr(1, 4)), "linear-ar", 2, 2, "restricted-weak"),
            ((Fr(3, 4), Fr(3, 4)), "linear-ar", 2, 2, "restricted-weak"),
            ((Fr(3, 4), Fr(1, 2)), "linear-ar", 2, 2, "restricted-strong"),
            ((Fr(3, 4), Fr(2, 5)), "linear-ar", 2, 2, "restricted-strong"),
            ((Fr(4, 5), Fr(1, 5)), "linear-ar", 2, 2, "false"),
            ((Fr(1, 4), Fr(1, 2)), "linear-ar", 2, 2, "false"),  # above diag
            ((Fr(9, 10), Fr(9, 10)), "linear-ar", 2, 2, "false"),
            # linear-ar at r = 1 and r = inf (degenerate vertex collisions)
            ((Fr(1), Fr(0)), "linear-ar", 2, 1, "strong"),  # P=Q collapse on A
            ((Fr(1, 2), Fr(1, 2)), "linear-ar", 2, INF,
             "restricted-weak"),  # Q = R at r = inf
            ((Fr(1, 2), Fr(1, 4)), "linear-ar", 2, INF,
             "false"),  # outside the local maximal region
            # global maximal family (diagonal)
            ((Fr(1, 2), Fr(1, 2)), "linear-ar-star", 2, 2, "strong"),
            ((Fr(3, 4), Fr(3, 4)), "linear-ar-star", 2, 2,
             "restricted-weak"),
            ((Fr(4, 5), Fr(4, 5)), "linear-ar-star", 2, 2, "open"),
            # endpoint diagrams
            ((Fr(1, 2), Fr(1, 4)), "bilinear-endpoint", 1, None,
             "restricted-weak"),
            ((Fr(1, 2), Fr(1, 2)), "bilinear-endpoint", 1, None,
             "restricted-weak"),
            ((Fr(1, 4), Fr(1, 2)), "bilinear-endpoint", 1, None,
             "restricted-weak"),
            ((Fr(1, 4), Fr(1, 4)), "bilinear-endpoint", 1, None, "open"),
            ((Fr(3, 4), Fr(3, 4)), "bilinear-endpoint", 2, None,
             "restricted-weak"),
            ((Fr(1), Fr(1, 2)), "bilinear-endpoint", 2, None, "open"),
            ((Fr(2, 3), Fr(2, 3)), "bilinear-endpoint", 2, None, "open"),
            # multilinear (m = 2: no corner passes condition (1); the weak
            # corners live at m >= 3)
            ((Fr(1, 4), Fr(1, 4)), "multilinear-sphere", 2, None, "strong"),
            ((Fr(1, 2), Fr(1)), "multilinear-sphere", 2, None, "false"),
            ((Fr(1), Fr(1, 4)), "multilinear-sphere", 2, None, "false"),
            ((Fr(1), Fr(1)), "multilinear-sphere", 2, None, "false"),
            ((Fr(1), Fr(0)), "multilinear-sphere", 2, None, "false"),
            ((Fr(1), Fr(0), Fr(0)), "multilinear-sphere", 2, None, "weak"),
            ((Fr(1, 4), Fr(1, 4), Fr(1, 4)), "multilinear-sphere", 2, None,
             "strong"),
            ((Fr(1), Fr(1, 2), Fr(0)), "multilinear-sphere", 2, None,
             "false"),  # a partial sum sits exactly at m - 3/2
            ((Fr(1), Fr(1, 2), Fr(0)), "multilinear-segments", 2, None,
             "restricted-weak"),
            ((Fr(1), Fr(1, 4), Fr(1, 4)), "multilinear-segments", 2, None,
             "open"),
            # rotated maximal / linearized
            ((Fr(1, 2), Fr(1, 2)), "rotated-maximal", 2, None, "false"),
            ((Fr(3, 4), Fr(1, 8)), "rotated-maximal", 2, None, "false"),
            ((Fr(1, 5), Fr(1, 5)), "rotated-maximal", 2, None, "strong"),
            ((Fr(1, 3), Fr(1, 3)), "rotated-maximal", 2, None, "open"),
            ((Fr(1, 2), Fr(1, 2)), "linearized-rotated", 2, None,
             "restricted-weak"),
            ((Fr(1, 4), Fr(1, 4)), "linearized-rotated", 2, None, "strong"),
            ((Fr(2, 3), Fr(1, 4)), "linearized-rotated", 2, None, "open"),
            # rotated single scale hull
            ((Fr(1, 3), Fr(1, 3), Fr(1, 3)), "rotated-single-scale", 2,
             None, "strong"),
            ((Fr(1, 2), Fr(1, 2), Fr(1, 2)), "rotated-single-scale", 2,
             None, "strong"),
            ((Fr(1, 2), Fr(1, 2), Fr(1, 2)), "rotated-single-scale-pi", 2,
             None, "false"),  # violates 3/p1 + 3/p2 <= 1 + 3/p
            ((Fr(2, 3), Fr(2, 3), Fr(1)), "rotated-single-scale-pi", 2,
             None, "strong"),
        ]
        assert len(probes) >= 30
        for coords, thm, d, r, want in probes:
            got = rg.classify(pt(coords, d=d, r=r), thm).verdict
            assert got == want, (coords, thm, d, r, got, want)

    def test_local_bilinear_cases(self):
        # p = infinity split
        assert rg.classify(pt((Fr(1, 2), Fr(1, 2), Fr(0))),
                           "local-bilinear").verdict == "strong"
        assert rg.classify(pt((Fr(1), Fr(1, 2), Fr(0))),
                           "local-bilinear").verdict == "false"
        # Holder diagonal interior
        assert rg.classify(pt((Fr(1, 2), Fr(1, 2), Fr(1))),
                           "local-bilinear").verdict == "strong"
        # necessary violated
        assert rg.classify(pt((Fr(1), Fr(1), Fr(1, 10))),
                           "local-bilinear").verdict == "false"

    def test_improved_region_open_triangle(self):
        V = rg.vertex_table("local-bilinear-improved", d=2)
        F, Bp, C = V["F"], V["B'"], V["C"]
        centroid = tuple((F[i] + Bp[i] + C[i]) / 3 for i in range(2))
        got = rg.classify(pt(centroid, d=2), "local-bilinear-improved")
        assert got.verdict == "open"
        assert "F B' C" in got.citations[0]

    def test_improved_region_strong_point(self):
        got = rg.classify(pt((Fr(1, 4), Fr(1, 4), Fr(2, 5)), d=2),
                          "local-bilinear-improved")
        assert got.verdict == "strong"

    def test_qr_failure_note_attached(self):
        v = rg.classify(pt((Fr(3, 4), Fr(1, 2)), d=2, r=2), "linear-ar")
        assert any("s > 1" in c for c in v.citations)

    @settings(max_examples=60, deadline=None)
    @given(num=st.integers(0, 40), den=st.integers(1, 40),
           num2=st.integers(0, 40), den2=st.integers(1, 40),
           mult=st.integers(2, 7))
    def test_denominator_clearing_stability(self, num, den, num2, den2,
                                            mult):
        x = Fr(num, den * 40)
        y = Fr(num2, den2 * 40)
        if x > 1 or y > 1:
            return
        a = rg.classify(pt((x, y), d=2, r=2), "linear-ar").verdict
        b = rg.classify(pt((Fr(num * mult, den * 40 * mult), y), d=2, r=2),
                        "linear-ar").verdict
        assert a == b


class TestNecessaryGap:
    def test_product_type_example(self):
        recs = rg.necessary_gap(pt((Fr(1, 2), Fr(1, 2), Fr(1)), d=2),
                                "product-type-necessary")
        name, lhs, rhs, ok, boundary = recs[0]
        assert (lhs, rhs, ok, boundary) == (Fr(3), Fr(4), True, False)

    def test_product_type_exact_rationals(self):
        recs = rg.necessary_gap(pt((Fr(3, 4), Fr(3, 4), Fr(3, 2)), d=2),
                                "product-type-necessary")
        _, lhs, rhs, ok, _ = recs[0]
        assert lhs == Fr(9, 2) and rhs == Fr(11, 2) and ok

    def test_linear_ar_boundary_flag(self):
        recs = rg.necessary_gap(pt((Fr(1), Fr(0)), d=2, r=1), "linear-ar")
        # at r = 1, the point (1, 0): every bound is met, three exactly
        assert all(ok for (_, _, _, ok, _) in recs)
        assert sum(1 for (_, _, _, _, eq) in recs if eq) == 3

    def test_single_scale_items(self):
        recs = rg.necessary_gap(pt((Fr(1, 2), Fr(1, 2), Fr(1, 2)), d=2),
                                "single-scale-necessary")
        assert len(recs) == 4
        assert all(ok for (_, _, _, ok, _) in recs)

    def test_local_bilinear_gap(self):
        recs = rg.necessary_gap(pt((Fr(1), Fr(1), Fr(1, 2)), d=2),
                                "local-bilinear")
        sat = {name: ok for (name, _, _, ok, _) in recs}
        assert not sat["1/p1 + 1/p2 <= (2d-1)/d"]


class TestHullCsv:
    def test_vertices_csv(self):
        text = rg.hull_vertices_csv("linear-ar", d=2, r=2)
        assert text.startswith("name,coords\n")
        assert "Q,3/4 1/4" in text
