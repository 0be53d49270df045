"""Elliptic kernel tests: trivial identities, golden oracles, properties.

The golden values below were computed with the quadrature/root-finding
oracles in ``triadlab.elliptic`` (adaptive quadrature of the defining
integral; Brent inversion of the amplitude integral) and frozen here.
"""

import math

import numpy as np
import pytest

from triadlab import elliptic
from triadlab.elliptic import (
    EllipticModulus,
    complete_elliptic_k,
    jacobi_by_inversion,
    jacobi_sn_cn_dn,
    quarter_period_by_quadrature,
    sn_squared,
    sn_squared_array,
)
from triadlab.errors import EllipticDivergenceError, EllipticDomainError

# Frozen oracle values (17 significant digits).
K_08_ORACLE = 1.9953027776647294
SN_07_06_ORACLE = 0.62991711532348671
CN_07_06_ORACLE = 0.7766623641084569
DN_07_06_ORACLE = 0.92582589832868323
SN_SQ_03_025_ORACLE = 0.087176324481154602


class TestEllipticModulus:
    def test_complement_is_computed(self):
        m = EllipticModulus(0.6)
        assert m.k == 0.6
        # Equal to 1 - k*k within one unit in the last place.
        assert abs(m.k_complement_sq - (1 - 0.36)) <= math.ulp(0.64)

    @pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan"), float("inf")])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(EllipticDomainError):
            EllipticModulus(bad)

    def test_no_cancellation_near_one(self):
        k = 1.0 - 1e-12
        m = EllipticModulus(k)
        # (1-k)(1+k) keeps ~16 digits where 1-k*k would keep ~4.
        np.testing.assert_allclose(m.k_complement_sq, 2e-12, rtol=1e-3)


class TestCompleteEllipticK:
    def test_k_zero_is_half_pi(self):
        assert complete_elliptic_k(EllipticModulus(0.0)) == pytest.approx(
            math.pi / 2.0, abs=1e-15
        )

    def test_divergence_within_rounding_of_one(self):
        with pytest.raises(EllipticDivergenceError):
            complete_elliptic_k(EllipticModulus(1.0))
        with pytest.raises(EllipticDivergenceError):
            complete_elliptic_k(EllipticModulus(1.0 - 1e-16))

    def test_against_frozen_quadrature_value(self):
        k_impl = complete_elliptic_k(EllipticModulus(0.8))
        assert abs(k_impl - K_08_ORACLE) < 1e-12

    def test_against_live_quadrature(self):
        for k in np.linspace(0.0, 0.99, 23):
            m = EllipticModulus(float(k))
            k_impl = complete_elliptic_k(m)
            k_quad = quarter_period_by_quadrature(m)
            assert abs(k_impl - k_quad) / k_quad < 1e-14

    def test_monotone_increasing(self):
        values = [
            complete_elliptic_k(EllipticModulus(float(k)))
            for k in np.linspace(0.0, 0.99, 100)
        ]
        assert all(b > a for a, b in zip(values[:-1], values[1:]))


class TestJacobiTriple:
    def test_origin(self):
        for k in (0.0, 0.3, 0.9, 1.0):
            triple = jacobi_sn_cn_dn(0.0, EllipticModulus(k))
            assert triple.sn == 0.0
            assert triple.cn == 1.0
            assert triple.dn == 1.0

    def test_trigonometric_degeneration(self):
        m = EllipticModulus(0.0)
        triple = jacobi_sn_cn_dn(math.pi / 2.0, m)
        np.testing.assert_allclose(triple.sn, 1.0, atol=1e-15)
        np.testing.assert_allclose(triple.cn, 0.0, atol=1e-15)
        assert triple.dn == 1.0
        u = 0.83
        triple = jacobi_sn_cn_dn(u, m)
        np.testing.assert_allclose(
            triple, (math.sin(u), math.cos(u), 1.0), atol=1e-15
        )

    def test_hyperbolic_degeneration(self):
        triple = jacobi_sn_cn_dn(1.0, EllipticModulus(1.0))
        np.testing.assert_allclose(triple.sn, math.tanh(1.0), atol=1e-15)
        np.testing.assert_allclose(triple.cn, 1.0 / math.cosh(1.0), atol=1e-15)
        np.testing.assert_allclose(triple.dn, 1.0 / math.cosh(1.0), atol=1e-15)

    def test_against_frozen_inversion_oracle(self):
        triple = jacobi_sn_cn_dn(0.7, EllipticModulus(0.6))
        assert abs(triple.sn - SN_07_06_ORACLE) < 1e-11
        assert abs(triple.cn - CN_07_06_ORACLE) < 1e-11
        assert abs(triple.dn - DN_07_06_ORACLE) < 1e-11

    def test_rejects_non_finite_argument(self):
        with pytest.raises(EllipticDomainError):
            jacobi_sn_cn_dn(float("nan"), EllipticModulus(0.5))
        with pytest.raises(EllipticDomainError):
            jacobi_sn_cn_dn(float("inf"), EllipticModulus(0.5))


class TestSnSquared:
    def test_zero_at_origin(self):
        assert sn_squared(0.0, EllipticModulus(0.4)) == 0.0

    def test_one_at_quarter_period(self):
        m = EllipticModulus(0.7)
        big_k = complete_elliptic_k(m)
        assert sn_squared(big_k, m) == pytest.approx(1.0, abs=1e-13)

    def test_matches_frozen_oracle_square(self):
        value = sn_squared(0.3, EllipticModulus(0.25))
        assert abs(value - SN_SQ_03_025_ORACLE) < 1e-11

    def test_consistent_with_triple(self):
        m = EllipticModulus(0.55)
        for u in np.linspace(-3, 3, 11):
            sn = jacobi_sn_cn_dn(float(u), m).sn
            assert sn_squared(float(u), m) == pytest.approx(sn * sn, abs=5e-16)

    def test_array_matches_scalar(self):
        m = EllipticModulus(0.8)
        u = np.linspace(-6, 6, 57)
        values = sn_squared_array(u, m)
        expected = [sn_squared(float(ui), m) for ui in u]
        np.testing.assert_allclose(values, expected, atol=1e-15)


class TestIdentitiesAndProperties:
    def test_pythagorean_identities_random(self):
        rng = np.random.default_rng(2024)
        k = rng.uniform(0.0, 0.99, 10_000)
        u = rng.uniform(-20.0, 20.0, 10_000)
        for ki, ui in zip(k, u):
            m = EllipticModulus(float(ki))
            sn, cn, dn = jacobi_sn_cn_dn(float(ui), m)
            assert abs(sn * sn + cn * cn - 1.0) <= 1e-12
            assert abs(dn * dn - 1.0 + ki * ki * sn * sn) <= 1e-12

    def test_periodicity_4k(self):
        rng = np.random.default_rng(7)
        for k in (0.1, 0.5, 0.9, 0.99):
            m = EllipticModulus(k)
            big_k = complete_elliptic_k(m)
            for u in rng.uniform(-10 * big_k, 6 * big_k, 50):
                a = jacobi_sn_cn_dn(float(u), m)
                b = jacobi_sn_cn_dn(float(u) + 4.0 * big_k, m)
                assert abs(a.sn - b.sn) <= 1e-10
                assert abs(a.cn - b.cn) <= 1e-10
                assert abs(a.dn - b.dn) <= 1e-10

    def test_parity(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            k = float(rng.uniform(0.0, 0.99))
            u = float(rng.uniform(-8.0, 8.0))
            m = EllipticModulus(k)
            plus = jacobi_sn_cn_dn(u, m)
            minus = jacobi_sn_cn_dn(-u, m)
            assert abs(plus.sn + minus.sn) <= 1e-12
            assert abs(plus.cn - minus.cn) <= 1e-12
            assert abs(plus.dn - minus.dn) <= 1e-12

    def test_range_bounds(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            k = float(rng.uniform(0.0, 0.999))
            m = EllipticModulus(k)
            u = float(rng.uniform(-30.0, 30.0))
            sn, cn, dn = jacobi_sn_cn_dn(u, m)
            kp = math.sqrt(m.k_complement_sq)
            assert -1.0 <= sn <= 1.0
            assert -1.0 <= cn <= 1.0
            assert kp - 1e-12 <= dn <= 1.0 + 1e-15

    def test_oracle_equivalence_small_grid(self):
        # The full 50x50 sweep lives in the acceptance suite; this is a
        # fast smoke version.
        worst = 0.0
        for k in np.linspace(0.05, 0.99, 8):
            m = EllipticModulus(float(k))
            big_k = complete_elliptic_k(m)
            for u in np.linspace(-3 * big_k, 3 * big_k, 9):
                impl = jacobi_sn_cn_dn(float(u), m)
                gold = jacobi_by_inversion(float(u), m)
                worst = max(worst, abs(impl.sn - gold.sn))
        assert worst <= 1e-11


class TestGoldenTable:
    def test_write_golden_table(self, tmp_path):
        path = tmp_path / "sn_golden.csv"
        elliptic.write_golden_table(path, u_values=[0.0, 0.5], k_values=[0.0, 0.6])
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "u,k,sn,cn,dn"
        assert len(lines) == 5
        # Row for u=0.5, k=0: sn = sin(0.5) from the quadrature oracle.
        row = lines[2].split(",")
        assert float(row[2]) == pytest.approx(math.sin(0.5), abs=1e-13)
