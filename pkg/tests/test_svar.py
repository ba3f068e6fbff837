import numpy as np
import pytest

from conftest import canonical_dgp, hand_var_model, make_series
from lrsvar import (
    IdentificationError,
    compute_irf,
    fit_var,
    identify_long_run,
    ma_coefficients,
    recover_shocks,
    simulate,
)


def _identity_model():
    # ML covariance of these residuals is exactly the identity
    resid = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0]])
    return hand_var_model(resid)


class TestIdentifyLongRun:
    def test_identity_case(self):
        sm = identify_long_run(_identity_model())
        expected = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert np.max(np.abs(sm.F - expected)) < 1e-12
        assert np.max(np.abs(sm.B - expected)) < 1e-12
        assert np.max(np.abs(sm.C1 - np.eye(2))) < 1e-12

    def test_closed_form_2x2(self):
        # S = [[4,2],[2,5]], C1 = I: lower Cholesky [[2,0],[1,2]], columns swapped
        sigma = np.array([[4.0, 2.0], [2.0, 5.0]])
        m = hand_var_model(np.zeros((10, 2)), sigma=sigma)
        sm = identify_long_run(m)
        expected_F = np.array([[0.0, 2.0], [2.0, 1.0]])
        assert np.max(np.abs(sm.F - expected_F)) < 1e-12
        assert np.max(np.abs(sm.B - expected_F)) < 1e-12
        # hand multiplication: F F' = [[4,2],[2,5]]
        assert np.max(np.abs(sm.F @ sm.F.T - sigma)) < 1e-12

    def test_fitted_model_identities(self, fitted_pair):
        model, sm = fitted_pair
        S = sm.C1 @ model.sigma_ml @ sm.C1.T
        assert np.max(np.abs(sm.B @ sm.B.T - model.sigma_ml)) < 1e-10
        assert np.max(np.abs(sm.F @ sm.F.T - S)) < 1e-10
        assert np.max(np.abs(sm.F - sm.C1 @ sm.B)) < 1e-10
        assert abs(sm.F[0, 0]) < 1e-12

    def test_restriction_pattern(self, fitted_pair):
        _, sm = fitted_pair
        assert sm.restriction[0, 0] == 0.0
        assert np.isnan(sm.restriction[0, 1])

    def test_long_run_sign_convention(self, fitted_pair):
        _, sm = fitted_pair
        assert sm.F[0, 1] > 0  # supply shock raises long-run output
        assert sm.F[1, 0] > 0  # demand shock raises long-run price level
        assert sm.flipped_columns == ()

    def test_impact_sign_convention(self, fitted_pair):
        model, _ = fitted_pair
        sm = identify_long_run(model, sign_convention="impact")
        assert sm.B[0, 0] >= 0 and sm.B[0, 1] >= 0
        assert np.max(np.abs(sm.B @ sm.B.T - model.sigma_ml)) < 1e-10

    def test_unstable_model_rejected(self):
        m = hand_var_model(
            np.random.default_rng(0).standard_normal((50, 2)),
            lag_coeffs=(np.array([[1.0, 0.0], [0.0, 0.5]]),),
        )
        with pytest.raises(IdentificationError, match="not stable"):
            identify_long_run(m)

    def test_requires_bivariate(self):
        resid = np.random.default_rng(0).standard_normal((50, 3))
        m = hand_var_model(resid, lag_coeffs=(np.zeros((3, 3)),))
        with pytest.raises(IdentificationError, match="bivariate"):
            identify_long_run(m)

    def test_singular_covariance_rejected(self):
        m = hand_var_model(np.zeros((10, 2)), sigma=np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(IdentificationError, match="positive definite"):
            identify_long_run(m)

    def test_scale_equivariance(self):
        series, _ = simulate(canonical_dgp(seed=17), 800)
        lam = 3.5
        scaled = [
            make_series(
                np.asarray(series[0].values) * lam, label=series[0].label
            ),
            series[1],
        ]
        m1 = fit_var(series, 2)
        m2 = fit_var(scaled, 2)
        sm1 = identify_long_run(m1)
        sm2 = identify_long_run(m2)
        assert np.max(np.abs(sm2.B[0] - lam * sm1.B[0])) < 1e-8
        assert np.max(np.abs(sm2.B[1] - sm1.B[1])) < 1e-8
        u1 = recover_shocks(sm1, m1)
        u2 = recover_shocks(sm2, m2)
        assert np.max(np.abs(np.asarray(u1.u_demand) - np.asarray(u2.u_demand))) < 1e-8
        assert np.max(np.abs(np.asarray(u1.u_supply) - np.asarray(u2.u_supply))) < 1e-8


class TestComputeIrf:
    def test_no_dynamics(self):
        m = _identity_model()
        sm = identify_long_run(m)
        irf = compute_irf(sm, m, 6)
        assert np.array_equal(irf.responses[0], sm.B)
        assert np.max(np.abs(irf.responses[1:])) == 0.0
        for h in range(6):
            assert np.array_equal(irf.cumulative[h], sm.B)

    def test_geometric_decay(self):
        # A1 = 0.5 I, B = I: theta_h = 0.5^h I, cumulative -> 2I
        resid = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0]])
        m = hand_var_model(resid, lag_coeffs=(0.5 * np.eye(2),))
        sm = identify_long_run(m)
        B = sm.B  # [[0,1],[1,0]] under the swap; theta_h = 0.5^h B
        irf = compute_irf(sm, m, 50)
        for h in range(10):
            assert np.max(np.abs(irf.responses[h] - 0.5**h * B)) < 1e-14
        assert np.max(np.abs(irf.cumulative[-1] - 2.0 * B)) < 1e-12

    def test_horizon_length(self, fitted_pair):
        model, sm = fitted_pair
        irf = compute_irf(sm, model, 10)
        assert irf.responses.shape == (10, 2, 2)
        assert irf.cumulative.shape == (10, 2, 2)

    def test_theta0_is_B_exactly(self, fitted_pair):
        model, sm = fitted_pair
        irf = compute_irf(sm, model, 5)
        assert np.array_equal(irf.responses[0], sm.B)

    def test_long_run_restriction_kills_cumulative_demand_output(self, fitted_pair):
        model, sm = fitted_pair
        irf = compute_irf(sm, model, 400)
        assert abs(irf.cumulative[-1][0, 0]) < 1e-6
        # and the cumulative matrix converges to F
        assert np.max(np.abs(irf.cumulative[-1] - sm.F)) < 1e-6

    def test_matches_brute_force_propagation(self, fitted_pair):
        # independent oracle: inject e_0 = B[:, j] into the fitted difference
        # equation with zero history and no further noise
        model, sm = fitted_pair
        H = 21
        irf = compute_irf(sm, model, H)
        p = model.p
        for j in range(2):
            path = np.zeros((H + p, 2))
            for t in range(p, H + p):
                acc = np.zeros(2)
                for i in range(1, p + 1):
                    acc += model.lag_coeffs[i - 1] @ path[t - i]
                if t == p:
                    acc += sm.B[:, j]
                path[t] = acc
            assert np.max(np.abs(irf.responses[:, :, j] - path[p:])) < 1e-10

    def test_bad_horizon(self, fitted_pair):
        model, sm = fitted_pair
        with pytest.raises(ValueError):
            compute_irf(sm, model, 0)

    def test_ma_recursion_truncates_at_p(self, fitted_pair):
        model, _ = fitted_pair
        psi = ma_coefficients(model, 4)
        assert np.array_equal(psi[0], np.eye(2))
        assert np.max(np.abs(psi[1] - model.lag_coeffs[0])) < 1e-14


class TestRecoverShocks:
    def test_identity_impact_returns_residuals(self):
        m = _identity_model()
        sm = identify_long_run(m)
        # force B = I by building the structural model directly
        from lrsvar import StructuralModel

        sm_id = StructuralModel(
            B=np.eye(2), F=sm.C1 @ np.eye(2), C1=sm.C1,
            restriction=sm.restriction, sign_convention="long_run", flipped_columns=(),
        )
        shocks = recover_shocks(sm_id, m)
        U = np.column_stack([shocks.u_demand, shocks.u_supply])
        assert np.max(np.abs(U - m.residuals)) < 1e-14

    def test_swap_impact(self):
        m = hand_var_model(np.array([[3.0, 7.0]] * 12))
        from lrsvar import StructuralModel

        sm = StructuralModel(
            B=np.array([[0.0, 1.0], [1.0, 0.0]]), F=np.eye(2)[::-1].copy(), C1=np.eye(2),
            restriction=np.array([[0.0, np.nan], [np.nan, np.nan]]),
            sign_convention="long_run", flipped_columns=(),
        )
        shocks = recover_shocks(sm, m)
        assert shocks.u_demand == (7.0,) * 12
        assert shocks.u_supply == (3.0,) * 12

    def test_unit_covariance_identity(self, fitted_pair):
        model, sm = fitted_pair
        shocks = recover_shocks(sm, model)
        U = np.column_stack([shocks.u_demand, shocks.u_supply])
        assert np.max(np.abs(U.T @ U / U.shape[0] - np.eye(2))) < 1e-8

    def test_round_trip_reproduces_residuals(self, fitted_pair):
        model, sm = fitted_pair
        shocks = recover_shocks(sm, model)
        U = np.column_stack([shocks.u_demand, shocks.u_supply])
        assert np.max(np.abs(U @ sm.B.T - model.residuals)) < 1e-10

    def test_dating_from_p_plus_one(self, fitted_pair):
        model, sm = fitted_pair
        shocks = recover_shocks(sm, model)
        assert shocks.start == model.start + model.p
        assert len(shocks) == model.T_eff
