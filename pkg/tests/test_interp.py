from fractions import Fraction as Fr

import pytest

from sphavg import interp
from sphavg import regions as rg
from sphavg.funcspace import INF


class TestCombine:
    def test_q_row_theta(self):
        # d >= 2, r in [1,2], target Q: theta = (d-1)/d
        for d in (2, 3, 4):
            e1, e2, target = interp.table_row_estimates("Q-r12", d, Fr(3, 2))
            point = interp.bourgain_combine(e1, e2)
            assert target == "Q"
            assert point.theta == Fr(d - 1, d)

    def test_p_row_d2(self):
        # d = 2 P row: theta = 1/20 and 1/p = (3 + 2r)/(5r)
        for r in (Fr(3, 2), Fr(2), Fr(3)):
            e1, e2, _ = interp.table_row_estimates("P-d2", 2, r)
            point = interp.bourgain_combine(e1, e2)
            assert point.theta == Fr(1, 20)
            assert point.point[0] == (3 + 2 * r) / (5 * r)

    def test_equal_rates_midpoint(self):
        e1 = interp.EndpointEstimate((Fr(1),), Fr(0), Fr(1), growth=True)
        e2 = interp.EndpointEstimate((Fr(1, 2),), Fr(1, 2), Fr(1),
                                     growth=False)
        point = interp.bourgain_combine(e1, e2)
        assert point.theta == Fr(1, 2)
        assert point.inv_inputs[0] == Fr(3, 4)
        assert point.inv_q == Fr(1, 4)

    def test_homogeneity_in_rates(self):
        e1 = interp.EndpointEstimate((Fr(1),), Fr(0), Fr(2, 3), growth=True)
        e2 = interp.EndpointEstimate((Fr(1, 2),), Fr(1, 2), Fr(1, 3),
                                     growth=False)
        a = interp.bourgain_combine(e1, e2)
        scale = Fr(7, 2)
        e1s = interp.EndpointEstimate(e1.inv_inputs, e1.inv_q,
                                      e1.eps * scale, growth=True)
        e2s = interp.EndpointEstimate(e2.inv_inputs, e2.inv_q,
                                      e2.eps * scale, growth=False)
        b = interp.bourgain_combine(e1s, e2s)
        assert a.theta == b.theta and a.inv_inputs == b.inv_inputs

    def test_rejects_two_growth(self):
        e1 = interp.EndpointEstimate((Fr(1),), Fr(0), Fr(1), growth=True)
        with pytest.raises(ValueError):
            interp.bourgain_combine(e1, e1)

    def test_rejects_arity_mismatch(self):
        e1 = interp.EndpointEstimate((Fr(1),), Fr(0), Fr(1), growth=True)
        e2 = interp.EndpointEstimate((Fr(1), Fr(1)), Fr(1), Fr(1),
                                     growth=False)
        with pytest.raises(ValueError):
            interp.bourgain_combine(e1, e2)

    def test_degenerate_rate_flagged(self):
        e1 = interp.EndpointEstimate((Fr(1),), Fr(0), Fr(0), growth=True)
        e2 = interp.EndpointEstimate((Fr(1, 2),), Fr(1, 2), Fr(1),
                                     growth=False)
        with pytest.raises(interp.DegenerateRateError):
            interp.bourgain_combine(e1, e2)

    def test_q1_infinite_flag(self):
        e1, e2, _ = interp.table_row_estimates("Q-r12", 2, 2)
        assert interp.bourgain_combine(e1, e2).q1_infinite
        e1, e2, _ = interp.table_row_estimates("R-r12", 2, 2)
        assert not interp.bourgain_combine(e1, e2).q1_infinite


class TestTable:
    def test_all_rows_exact(self):
        results = interp.reproduce_table()
        assert not [r for r in results if r["status"] == "mismatch"]
        assert sum(r["status"] == "ok" for r in results) >= 40

    def test_r1_rows_degenerate(self):
        results = interp.reproduce_table(rs=(1,))
        assert results
        assert all(r["status"] == "degenerate" for r in results)

    def test_d2_rinf_rows_degenerate(self):
        results = interp.reproduce_table(ds=(2,), rs=(INF,))
        by_row = {r["row"]: r["status"] for r in results}
        # at d = 2, r = inf the decay rate (d-2)/2 + 1/r vanishes
        assert by_row["Q-r2inf"] == "degenerate"
        assert by_row["R-r2inf"] == "degenerate"
        assert by_row["P-d2"] == "ok"

    def test_r_row_targets_R(self):
        e1, e2, target = interp.table_row_estimates("R-r2inf", 3, 3)
        point = interp.bourgain_combine(e1, e2)
        assert target == "R"
        V = rg.vertex_table("linear-ar", d=3, r=3)
        assert point.point == V["R"]

    def test_consistency_with_regions(self):
        # every reproduced point classifies as the restricted weak stratum
        for rec in interp.reproduce_table():
            if rec["status"] != "ok":
                continue
            pt = rg.ExponentPoint((rec["inv_p"], rec["inv_q"]),
                                  d=rec["d"], r=rec["r"])
            v = rg.classify(pt, "linear-ar")
            assert v.verdict == "restricted-weak", rec

    def test_csv_export(self):
        text = interp.table_report_csv()
        lines = text.strip().split("\n")
        assert lines[0].split(",")[:4] == ["row", "d", "r", "target"]
        assert len(lines) > 40
