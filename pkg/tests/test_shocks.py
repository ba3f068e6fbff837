import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import canonical_dgp
from lrsvar import (
    DataError,
    QuarterIndex,
    ShockPanel,
    ShockSeries,
    SubPeriod,
    build_correlation_report,
    combined_triangle_table,
    correlation_matrix,
    fit_var,
    identify_long_run,
    pearson_correlation,
    read_shock_csv,
    recover_shocks,
    shock_volatility,
    simulate,
    write_shock_csv,
)

Q = QuarterIndex(1997, 1)


def _shock(demand, supply=None, start=Q):
    demand = tuple(float(v) for v in demand)
    supply = demand if supply is None else tuple(float(v) for v in supply)
    return ShockSeries(start=start, u_demand=demand, u_supply=supply)


class TestPearson:
    def test_self_correlation_exactly_one(self):
        x = [1.3, -0.2, 4.5, 2.2, -3.1]
        assert pearson_correlation(x, x) == 1.0

    def test_negation_exactly_minus_one(self):
        x = [1.3, -0.2, 4.5, 2.2, -3.1]
        assert pearson_correlation(x, [-v for v in x]) == -1.0

    def test_hand_computed_value(self):
        # cov = 1.5, s_x = 1, s_y = sqrt(7/3), all with divisor n-1
        r = pearson_correlation([1.0, 2.0, 3.0], [1.0, 2.0, 4.0])
        oracle = 1.5 / (1.0 * math.sqrt(7.0 / 3.0))
        assert r == pytest.approx(oracle, abs=1e-12)
        assert r == pytest.approx(0.9819805060619657, abs=1e-12)

    def test_constant_input(self):
        with pytest.raises(DataError, match="constant"):
            pearson_correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(DataError, match="mismatch"):
            pearson_correlation([1.0, 2.0, 3.0], [1.0, 2.0])

    def test_too_short(self):
        with pytest.raises(DataError, match="at least 3"):
            pearson_correlation([1.0, 2.0], [1.0, 2.0])

    @given(
        data=st.lists(
            st.floats(min_value=-10, max_value=10, allow_nan=False),
            min_size=5,
            max_size=50,
        ),
        a=st.floats(min_value=0.5, max_value=2.0),
        b=st.floats(min_value=-5.0, max_value=5.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_positive_affine_invariance(self, data, a, b):
        x = np.asarray(data)
        if np.std(x) < 1.0:
            x = x + np.arange(len(x))  # guarantee spread without changing the property
        rng = np.random.default_rng(0)
        y = np.sin(np.arange(len(x))) + 0.1 * rng.standard_normal(len(x))
        r1 = pearson_correlation(x, y)
        r2 = pearson_correlation(a * x + b, y)
        assert abs(r1 - r2) < 1e-12

    def test_bounded(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.standard_normal(10)
            y = 0.999 * x + 1e-9 * rng.standard_normal(10)
            assert -1.0 <= pearson_correlation(x, y) <= 1.0


class TestCorrelationMatrix:
    def test_identical_series(self):
        rng = np.random.default_rng(1)
        base = rng.standard_normal(40)
        panel = ShockPanel(entries={"a": _shock(base), "b": _shock(base)})
        mat = correlation_matrix(panel, "demand")
        assert np.array_equal(mat, np.ones((2, 2)))

    def test_sign_flip(self):
        rng = np.random.default_rng(2)
        base = rng.standard_normal(40)
        panel = ShockPanel(entries={"a": _shock(base), "b": _shock(-base)})
        mat = correlation_matrix(panel, "supply")
        assert mat[0, 1] == -1.0 and mat[1, 0] == -1.0
        assert mat[0, 0] == 1.0 and mat[1, 1] == 1.0

    def test_white_noise_sampling_bound(self):
        # 4 independent countries, n = 76; pooled coverage of the 1% normal
        # band 2.58/sqrt(76) should be at least 95% across replications
        bound = 2.58 / math.sqrt(76)
        inside = 0
        total = 0
        for rep in range(200):
            rng = np.random.default_rng(1000 + rep)
            panel = ShockPanel(
                entries={
                    f"c{i}": _shock(rng.standard_normal(76), rng.standard_normal(76))
                    for i in range(4)
                }
            )
            for kind in ("demand", "supply"):
                mat = correlation_matrix(panel, kind)
                off = mat[np.triu_indices(4, 1)]
                inside += int(np.sum(np.abs(off) <= bound))
                total += off.size
        assert inside / total >= 0.95

    def test_symmetry_unit_diagonal_bounded(self):
        rng = np.random.default_rng(3)
        panel = ShockPanel(
            entries={f"c{i}": _shock(rng.standard_normal(60), rng.standard_normal(60)) for i in range(3)}
        )
        for kind in ("demand", "supply"):
            mat = correlation_matrix(panel, kind)
            assert np.array_equal(mat, mat.T)
            assert np.all(np.diag(mat) == 1.0)
            assert np.all(np.abs(mat) <= 1.0)

    def test_pairwise_common_range(self):
        rng = np.random.default_rng(4)
        a = _shock(rng.standard_normal(20), start=Q)
        b = _shock(rng.standard_normal(20), start=Q + 10)
        panel = ShockPanel(entries={"a": a, "b": b})
        mat = correlation_matrix(panel, "demand")
        overlap_a = np.asarray(a.u_demand[10:])
        overlap_b = np.asarray(b.u_demand[:10])
        assert mat[0, 1] == pytest.approx(pearson_correlation(overlap_a, overlap_b), abs=1e-15)

    def test_empty_intersection(self):
        a = _shock(np.arange(5.0) + 0.5, start=Q)
        b = _shock(np.arange(5.0) ** 2, start=Q + 50)
        panel = ShockPanel(entries={"a": a, "b": b})
        with pytest.raises(DataError, match="too short"):
            correlation_matrix(panel, "demand")

    def test_needs_two_countries(self):
        panel = ShockPanel(entries={"a": _shock(np.random.default_rng(0).standard_normal(10))})
        with pytest.raises(DataError, match="at least 2"):
            correlation_matrix(panel, "demand")

    def test_sub_period_restriction(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal(40)
        y = rng.standard_normal(40)
        sp = SubPeriod("early", Q, Q + 19)
        panel = ShockPanel(entries={"a": _shock(x), "b": _shock(y)}, sub_periods=(sp,))
        mat = correlation_matrix(panel, "demand", "early")
        assert mat[0, 1] == pytest.approx(pearson_correlation(x[:20], y[:20]), abs=1e-15)


class TestPanelValidation:
    def test_overlapping_sub_periods_rejected(self):
        s = _shock(np.random.default_rng(0).standard_normal(40))
        with pytest.raises(ValueError, match="overlap"):
            ShockPanel(
                entries={"a": s},
                sub_periods=(SubPeriod("x", Q, Q + 10), SubPeriod("y", Q + 5, Q + 20)),
            )

    def test_duplicate_labels_rejected(self):
        s = _shock(np.random.default_rng(0).standard_normal(40))
        with pytest.raises(ValueError, match="unique"):
            ShockPanel(
                entries={"a": s},
                sub_periods=(SubPeriod("x", Q, Q + 1), SubPeriod("x", Q + 5, Q + 6)),
            )

    def test_reserved_full_label(self):
        s = _shock(np.random.default_rng(0).standard_normal(40))
        with pytest.raises(ValueError):
            ShockPanel(entries={"a": s}, sub_periods=(SubPeriod("full", Q, Q + 1),))

    def test_backwards_sub_period(self):
        with pytest.raises(ValueError, match="before start"):
            SubPeriod("x", Q + 5, Q)


class TestVolatility:
    def test_constant_series_zero(self):
        panel = ShockPanel(entries={"a": _shock([2.0] * 10, [1.0] * 10)})
        out = shock_volatility(panel)
        assert out["a"]["demand"] == 0.0
        assert out["a"]["supply"] == 0.0

    def test_alternating_unit_series(self):
        vals = [-1.0, 1.0] * 38  # n = 76, mean 0, sum of squares 76
        panel = ShockPanel(entries={"a": _shock(vals)})
        out = shock_volatility(panel)
        assert out["a"]["demand"] == pytest.approx(math.sqrt(76.0 / 75.0), abs=1e-12)

    def test_ml_divisor_identity_for_recovered_shocks(self):
        series, _ = simulate(canonical_dgp(seed=20), 300)
        m = fit_var(series, 2)
        shocks = recover_shocks(identify_long_run(m), m)
        panel = ShockPanel(entries={"x": shocks})
        ml = shock_volatility(panel, ddof=0)
        assert ml["x"]["demand"] == pytest.approx(1.0, abs=1e-8)
        assert ml["x"]["supply"] == pytest.approx(1.0, abs=1e-8)
        n = len(shocks)
        sample = shock_volatility(panel, ddof=1)
        assert sample["x"]["demand"] == pytest.approx(
            math.sqrt(n / (n - 1.0)) * ml["x"]["demand"], abs=1e-12
        )

    def test_too_short_period(self):
        panel = ShockPanel(
            entries={"a": _shock(np.random.default_rng(0).standard_normal(30))},
            sub_periods=(SubPeriod("tail", Q + 29, Q + 40),),
        )
        with pytest.raises(DataError, match="need >= 3"):
            shock_volatility(panel, "tail")


class TestReportAndIo:
    def test_combined_triangle(self):
        d = np.array([[1.0, 0.2, 0.3], [0.2, 1.0, 0.4], [0.3, 0.4, 1.0]])
        s = np.array([[1.0, -0.5, 0.6], [-0.5, 1.0, 0.7], [0.6, 0.7, 1.0]])
        t = combined_triangle_table(d, s)
        assert t[1, 0] == 0.2 and t[2, 0] == 0.3 and t[2, 1] == 0.4  # demand below
        assert t[0, 1] == -0.5 and t[0, 2] == 0.6 and t[1, 2] == 0.7  # supply above
        assert np.all(np.diag(t) == 1.0)

    def test_build_correlation_report_periods(self):
        rng = np.random.default_rng(7)
        panel = ShockPanel(
            entries={"a": _shock(rng.standard_normal(40)), "b": _shock(rng.standard_normal(40))},
            sub_periods=(SubPeriod("p1", Q, Q + 19), SubPeriod("p2", Q + 20, Q + 39)),
        )
        rep = build_correlation_report(panel)
        assert sorted(rep.periods) == ["full", "p1", "p2"]
        assert rep.labels == ("a", "b")

    def test_shock_csv_round_trip(self, tmp_path):
        rng = np.random.default_rng(8)
        shocks = _shock(rng.standard_normal(25), rng.standard_normal(25), start=QuarterIndex(2001, 3))
        path = tmp_path / "shk.csv"
        write_shock_csv(shocks, path)
        back = read_shock_csv(path)
        assert back.start == shocks.start
        assert back.u_demand == shocks.u_demand
        assert back.u_supply == shocks.u_supply

    def test_read_shock_csv_errors(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("quarter,u_demand\n1997-Q1,1.0\n")
        with pytest.raises(DataError, match="expected columns"):
            read_shock_csv(p)
        with pytest.raises(DataError, match="no such file"):
            read_shock_csv(tmp_path / "missing.csv")
