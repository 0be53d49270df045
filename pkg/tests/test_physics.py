"""Acoustic gravity-wave mapping tests."""

import math

import numpy as np
import pytest

from triadlab import physics
from triadlab.errors import AmplitudeOrderingError, ResonanceError
from triadlab.physics import (
    OceanParameters,
    acoustic_prefactor_report,
    application_solution,
    map_to_triad,
    resonant_frequency,
)
from triadlab.triad import FormulaVariant


def resonant_ocean(h=4000.0, g=9.81, c=1500.0):
    return OceanParameters(omega=resonant_frequency(h, g), h=h, g=g, c=c)


class TestOceanParameters:
    def test_defaults(self):
        ocean = OceanParameters(omega=0.035, h=4000.0)
        assert ocean.c == 1500.0
        assert ocean.g == 9.81

    @pytest.mark.parametrize("field", ["omega", "h", "c", "g"])
    def test_rejects_nonpositive(self, field):
        values = {"omega": 0.03, "h": 4000.0, "c": 1500.0, "g": 9.81}
        values[field] = 0.0
        with pytest.raises(ValueError):
            OceanParameters(**values)


class TestResonantFrequency:
    def test_algebraic_identity(self):
        assert resonant_frequency(1.0, 2.0) == 1.0

    def test_reference_depth(self):
        # h = 4000 m, g = 9.81: omega = sqrt(g/2h) ~ 0.035018 rad/s.
        omega = resonant_frequency(4000.0, 9.81)
        assert omega == pytest.approx(0.035017852589786, rel=1e-12)

    def test_depth_scaling(self):
        omega1 = resonant_frequency(500.0, 9.81)
        omega2 = resonant_frequency(1000.0, 9.81)
        assert omega2 == pytest.approx(omega1 / math.sqrt(2.0), rel=1e-14)

    def test_zeroes_residual(self):
        ocean = resonant_ocean()
        mapping = map_to_triad(ocean)
        scale = max(abs(g) for g in mapping.gamma_raw)
        assert abs(mapping.residual) <= 1e-15 * scale

    def test_c_independence_exact(self):
        # Varying c leaves the resonant frequency untouched: c is not an
        # argument at all, and the residual stays zero across c.
        omega = resonant_frequency(2500.0, 9.81)
        for c in np.linspace(1400.0, 1550.0, 7):
            ocean = OceanParameters(omega=omega, h=2500.0, c=float(c))
            mapping = map_to_triad(ocean)
            assert abs(mapping.residual) <= 1e-15 * max(
                abs(g) for g in mapping.gamma_raw
            )


class TestMapToTriad:
    def test_carrier_halving(self):
        ocean = resonant_ocean()
        params = map_to_triad(ocean).params
        assert params.delta[0] == pytest.approx(2.0 * ocean.omega / ocean.c, rel=0)
        assert params.delta[1] == params.delta[0] / 2.0
        assert params.delta[2] == params.delta[0] / 2.0

    def test_coefficients_read_off(self):
        ocean = resonant_ocean()
        mapping = map_to_triad(ocean)
        c, omega, h, g = ocean.c, ocean.omega, ocean.h, ocean.g
        delta1 = 2.0 * omega / c
        assert mapping.params.alpha[0] == pytest.approx(
            -(c**2) * delta1 / (2.0 * omega * h), rel=1e-15
        )
        assert mapping.params.alpha[1] == 0.0
        assert mapping.gamma_raw[0] == pytest.approx(-2.0 * omega / (h * c), rel=0)
        assert mapping.gamma_raw[1] == pytest.approx(
            2.0 * omega**3 / (g * c), rel=0
        )
        assert mapping.gamma_raw[1] == mapping.gamma_raw[2]

    def test_off_resonance_suggests_frequency(self):
        with pytest.raises(ResonanceError) as excinfo:
            map_to_triad(OceanParameters(omega=0.02, h=4000.0))
        message = str(excinfo.value)
        assert "0.0350178" in message

    def test_adjustment_reported_and_tiny(self):
        # A frequency 1e-8-relative off resonance passes the physical
        # gate; the distributed residual is reported.
        h, g = 4000.0, 9.81
        omega = resonant_frequency(h, g) * (1.0 + 1e-8)
        mapping = map_to_triad(OceanParameters(omega=omega, h=h, g=g))
        assert mapping.adjustment != 0.0
        total = sum(mapping.params.gamma)
        assert abs(total) <= 1e-12 * max(abs(x) for x in mapping.params.gamma)

    def test_random_inputs_pass_triad_invariants(self):
        rng = np.random.default_rng(19)
        for _ in range(100):
            h = float(rng.uniform(10.0, 10000.0))
            g = float(rng.uniform(1.0, 30.0))
            c = float(rng.uniform(1400.0, 1550.0))
            mapping = map_to_triad(resonant_ocean(h=h, g=g, c=c))
            params = mapping.params
            assert params.gamma[0] < 0.0 < params.gamma[1]
            residual = sum(mapping.gamma_raw)
            assert abs(residual) <= 1e-14 * max(abs(x) for x in mapping.gamma_raw)


class TestApplicationSolution:
    def test_modulus_is_amplitude_ratio(self):
        app = application_solution(
            resonant_ocean(), 1.0, 0.5, FormulaVariant.AS_PRINTED
        )
        assert app.solution.k == pytest.approx(0.5, abs=0)

    def test_published_rate_coefficient_identity(self):
        # sqrt(2|gamma1|gamma3)|psi02| == 2 sqrt(2/(gh)) omega^2/c * |phi0_g1|
        ocean = resonant_ocean()
        for phi in (1.0, 0.37, 2.4):
            app = application_solution(ocean, phi, 0.3 * phi, FormulaVariant.AS_PRINTED)
            assert app.constructed_rate_coefficient == pytest.approx(
                app.published_rate_coefficient, rel=1e-14
            )

    def test_acoustic_starts_from_rest(self):
        app = application_solution(
            resonant_ocean(), 1.0, 0.5, FormulaVariant.ORACLE_CONSISTENT
        )
        from triadlab.triad import amplitude_squared

        amps = amplitude_squared(app.solution, 0.0)
        assert amps.values[0] == 0.0
        assert amps.values[1] == pytest.approx(1.0)
        assert amps.values[2] == pytest.approx(0.25)

    def test_ordering_enforced(self):
        with pytest.raises(AmplitudeOrderingError):
            application_solution(resonant_ocean(), 0.5, 1.0, FormulaVariant.AS_PRINTED)


class TestAcousticPrefactor:
    def test_general_form_at_resonance(self):
        # -2 gamma1/gamma3 = 2g/(omega^2 h), which equals 4 on resonance.
        mapping = map_to_triad(resonant_ocean())
        report = acoustic_prefactor_report(mapping, 0.5)
        ocean = mapping.ocean
        expected = 2.0 * ocean.g / (ocean.omega**2 * ocean.h) * 0.25
        assert report["general_prefactor"] == pytest.approx(expected, rel=1e-12)
        assert report["general_prefactor"] == pytest.approx(4.0 * 0.25, rel=1e-12)

    def test_published_to_general_ratio_is_omega(self):
        # The published prefactor carries 2g/(omega h): exactly a factor
        # omega against the general form.  Measured, not resolved.
        mapping = map_to_triad(resonant_ocean())
        report = acoustic_prefactor_report(mapping, 0.7)
        assert report["ratio_published_to_general"] == pytest.approx(
            mapping.ocean.omega, rel=1e-12
        )
