import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcelimits import bounds, noise
from forcelimits.errors import UnstableModel, ZeroResponse
from forcelimits.linsys import transfer
from forcelimits.schemes import DetectorParams, SchemeConfig, build
from forcelimits.spectra import QuadratureSpectrum, squeeze_spectrum, vacuum


FIG2A = DetectorParams(Omega=0.01, Gamma=0.01, gamma=3.0, Delta=0.0, g=-10.0)


class TestQuadratureSpectrum:
    def test_vacuum(self):
        spec = vacuum()
        assert (spec.u, spec.v, spec.w) == (0.5, 0.5, 0.0)

    def test_heisenberg_violation_rejected(self):
        with pytest.raises(ValueError):
            QuadratureSpectrum(u=0.1, v=0.1, w=0.0)
        with pytest.raises(ValueError):
            QuadratureSpectrum(u=-0.5, v=1.0, w=0.0)

    def test_no_squeezing_is_vacuum(self):
        spec = squeeze_spectrum(0.0, 1.234)
        assert (spec.u, spec.v, spec.w) == (0.5, 0.5, 0.0)

    def test_frozen_squeezed_values(self):
        # cosh/sinh identities evaluated directly: u = e^(-2)/2, v = e^2/2
        spec = squeeze_spectrum(1.0, 0.0)
        assert spec.u == pytest.approx(math.exp(-2.0) / 2.0, rel=1e-12)
        assert spec.v == pytest.approx(math.exp(2.0) / 2.0, rel=1e-12)
        assert spec.w == 0.0

    @given(
        s=st.floats(min_value=0.0, max_value=2.0),
        theta=st.floats(min_value=-math.pi, max_value=math.pi),
    )
    @settings(max_examples=200)
    def test_pure_squeezing_saturates_heisenberg(self, s, theta):
        spec = squeeze_spectrum(s, theta)
        assert spec.u * spec.v - spec.w**2 == pytest.approx(0.25, abs=1e-12)


class TestAddedNoise:
    def test_resonant_coefficients(self):
        # shot term (xi b1 + b2)/(g sqrt(gamma) chi_a chi_b*) plus backaction
        # g sqrt(gamma) chi_b on b1
        rng = np.random.default_rng(23)
        for _ in range(25):
            p = DetectorParams(
                Omega=rng.uniform(0.05, 2),
                Gamma=rng.uniform(0.01, 1),
                gamma=rng.uniform(0.5, 5),
                g=rng.uniform(0.3, 4) * rng.choice([-1, 1]),
            )
            phi = rng.uniform(-1.2, 1.2)
            omega = rng.uniform(0.01, 8)
            model = build(SchemeConfig("standard", p))
            coeffs = noise.added_noise(transfer(model, omega), phi)
            xi = math.tan(phi)
            ca = bounds.chi_mech(p, omega)
            cb = bounds.chi_cav(p, omega)
            shot = 1.0 / (p.g * math.sqrt(p.gamma) * ca * cb.conjugate())
            c1, c2 = coeffs.coeffs["readout"]
            assert c1 == pytest.approx(
                xi * shot + p.g * math.sqrt(p.gamma) * cb, rel=1e-10
            )
            assert c2 == pytest.approx(shot, rel=1e-10)

    def test_steep_readout_angle_shot_term(self):
        # xi = 20 adds 20/(g sqrt(gamma) chi_a chi_b*) of extra shot noise on b1
        p = FIG2A
        model = build(SchemeConfig("standard", p))
        omega = 0.43
        coeffs = noise.added_noise(transfer(model, omega), math.atan(20.0))
        ca = bounds.chi_mech(p, omega)
        cb = bounds.chi_cav(p, omega)
        shot = 1.0 / (p.g * math.sqrt(p.gamma) * ca * cb.conjugate())
        c1, c2 = coeffs.coeffs["readout"]
        assert c1 == pytest.approx(20.0 * shot + p.g * math.sqrt(p.gamma) * cb, rel=1e-10)
        assert c2 == pytest.approx(shot, rel=1e-10)

    def test_uncoupled_force_is_invisible(self):
        model = build(SchemeConfig("standard", replace(FIG2A, g=0.0)))
        with pytest.raises(ZeroResponse):
            noise.added_noise(transfer(model, 0.2), 0.0)

    def test_quarter_turn_readout_is_legal(self):
        # phi = pi/2 is a valid angle (no tan division anywhere); on
        # resonance the force is invisible on that quadrature, detuned it
        # is not
        resonant = build(SchemeConfig("standard", FIG2A))
        with pytest.raises(ZeroResponse):
            noise.added_noise(transfer(resonant, 0.2), math.pi / 2)
        detuned_cfg = SchemeConfig(
            "standard", replace(FIG2A, Delta=-7.0), readout_angle=math.pi / 2
        )
        assert noise.sensitivity_at(detuned_cfg, 0.2) > 0.0


class TestPowerDensity:
    def test_single_quadrature_vacuum(self):
        coeffs = noise.AddedNoiseCoeffs(
            omega=1.0, coeffs={"readout": (0.0, 1.0)}, norm=1.0
        )
        assert noise.power_density(coeffs, {"readout": vacuum()}) == pytest.approx(0.5)

    @given(
        re1=st.floats(-5, 5), im1=st.floats(-5, 5),
        re2=st.floats(-5, 5), im2=st.floats(-5, 5),
        s=st.floats(0, 1.5), theta=st.floats(-math.pi, math.pi),
    )
    @settings(max_examples=200)
    def test_never_negative(self, re1, im1, re2, im2, s, theta):
        coeffs = noise.AddedNoiseCoeffs(
            1.0, {"readout": (complex(re1, im1), complex(re2, im2))}, 1.0
        )
        spectra = {"readout": squeeze_spectrum(s, theta)}
        assert noise.power_density(coeffs, spectra) >= -1e-12

    def test_overall_phase_invariance(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            c1 = complex(rng.normal(), rng.normal())
            c2 = complex(rng.normal(), rng.normal())
            spec = squeeze_spectrum(rng.uniform(0, 1.5), rng.uniform(-3, 3))
            alpha = rng.uniform(0, 2 * math.pi)
            rotated = (
                c1 * complex(math.cos(alpha), math.sin(alpha)),
                c2 * complex(math.cos(alpha), math.sin(alpha)),
            )
            base = noise.AddedNoiseCoeffs(1.0, {"readout": (c1, c2)}, 1.0)
            rot = noise.AddedNoiseCoeffs(1.0, {"readout": rotated}, 1.0)
            assert noise.power_density(rot, {"readout": spec}) == pytest.approx(
                noise.power_density(base, {"readout": spec}), rel=1e-12
            )

    def test_resonant_phase_readout_closed_form(self):
        # vacuum, phi = 0: S_f = (g^2 gamma |chi_b|^2 + 1/(g^2 gamma |chi_a|^2 |chi_b|^2))/2
        p = FIG2A
        cfg = SchemeConfig("standard", p)
        for omega in (0.003, 0.05, 0.97, 7.0):
            ca2 = abs(bounds.chi_mech(p, omega)) ** 2
            cb2 = abs(bounds.chi_cav(p, omega)) ** 2
            closed = 0.5 * (
                p.g**2 * p.gamma * cb2 + 1.0 / (p.g**2 * p.gamma * ca2 * cb2)
            )
            assert noise.sensitivity_at(cfg, omega) == pytest.approx(closed, rel=1e-10)

    def test_rotated_readout_closed_form(self):
        # vacuum, xi = tan(phi):
        # S_f = xi Re(1/chi_a) + (g^2 gamma |chi_b|^2 + (1 + xi^2)/(...))/2
        rng = np.random.default_rng(37)
        for _ in range(100):
            p = DetectorParams(
                Omega=rng.uniform(0.05, 2),
                Gamma=rng.uniform(0.01, 1),
                gamma=rng.uniform(0.5, 5),
                g=rng.uniform(0.3, 4) * rng.choice([-1, 1]),
            )
            phi = rng.uniform(-1.2, 1.2)
            omega = rng.uniform(0.01, 8)
            xi = math.tan(phi)
            ca2 = abs(bounds.chi_mech(p, omega)) ** 2
            cb2 = abs(bounds.chi_cav(p, omega)) ** 2
            closed = xi * bounds.inverse_chi_mech(p, omega).real + 0.5 * (
                p.g**2 * p.gamma * cb2
                + (1 + xi**2) / (p.g**2 * p.gamma * ca2 * cb2)
            )
            measured = noise.sensitivity_at(
                SchemeConfig("standard", p, readout_angle=phi), omega
            )
            assert measured == pytest.approx(closed, rel=1e-10)

    def test_squeezed_rotated_closed_form(self):
        # S_f = 2(xi u + w) Re(1/chi_a) + g^2 gamma |chi_b|^2 u
        #       + (xi^2 u + 2 xi w + v)/(g^2 gamma |chi_a|^2 |chi_b|^2)
        rng = np.random.default_rng(43)
        for _ in range(100):
            p = DetectorParams(
                Omega=rng.uniform(0.05, 2),
                Gamma=rng.uniform(0.01, 1),
                gamma=rng.uniform(0.5, 5),
                g=rng.uniform(0.3, 4) * rng.choice([-1, 1]),
            )
            phi = rng.uniform(-1.2, 1.2)
            uvw = squeeze_spectrum(rng.uniform(0, 1.5), rng.uniform(-math.pi, math.pi))
            omega = rng.uniform(0.01, 8)
            xi = math.tan(phi)
            u, v, w = uvw.u, uvw.v, uvw.w
            ca2 = abs(bounds.chi_mech(p, omega)) ** 2
            cb2 = abs(bounds.chi_cav(p, omega)) ** 2
            closed = (
                2 * (xi * u + w) * bounds.inverse_chi_mech(p, omega).real
                + p.g**2 * p.gamma * cb2 * u
                + (xi**2 * u + 2 * xi * w + v) / (p.g**2 * p.gamma * ca2 * cb2)
            )
            measured = noise.sensitivity_at(
                SchemeConfig("standard", p, readout_angle=phi, input_spectrum=uvw),
                omega,
            )
            assert measured == pytest.approx(closed, rel=1e-10)

    def test_combined_squeezed_rotated_respects_dissipation_bound(self):
        rng = np.random.default_rng(41)
        for _ in range(60):
            p = DetectorParams(
                Omega=rng.uniform(0.05, 2),
                Gamma=rng.uniform(0.01, 1),
                gamma=rng.uniform(0.5, 5),
                g=rng.uniform(0.3, 4) * rng.choice([-1, 1]),
            )
            cfg = SchemeConfig(
                "standard",
                p,
                readout_angle=rng.uniform(-1.3, 1.3),
                input_spectrum=squeeze_spectrum(
                    rng.uniform(0, 1.5), rng.uniform(-math.pi, math.pi)
                ),
            )
            omega = rng.uniform(0.01, 8)
            s_f = noise.sensitivity_at(cfg, omega)
            assert s_f >= bounds.uql(p, omega) * (1 - 1e-9)


class TestSensitivitySpectrum:
    def test_standard_orders_above_bounds(self):
        grid = np.geomspace(1e-3, 10, 120)
        spec = noise.sensitivity_spectrum(SchemeConfig("standard", FIG2A), grid)
        assert np.all(spec.s_f >= 0.0)
        assert np.all(spec.s_f >= spec.sql * (1 - 1e-9))
        assert np.all(spec.sql >= spec.uql * (1 - 1e-12))
        assert np.all(spec.s_f >= spec.uql * (1 - 1e-9))
        assert np.all(spec.uql >= spec.opt_uql * (1 - 1e-12))

    def test_cqnc_approaches_ancilla_floor_with_coupling(self):
        # residual shot noise shrinks as 1/g^2, so the worst deviation from
        # the ancilla floor decreases monotonically with the pump
        grid = np.geomspace(1e-3, 10, 60)
        p = FIG2A
        floor = p.Gamma / (2 * p.Omega**2) * (grid**2 + p.Omega**2 + p.Gamma**2 / 4)
        worst = []
        for g in (10.0, 100.0, 1000.0, 10000.0):
            spec = noise.sensitivity_spectrum(
                SchemeConfig("cqnc", replace(p, g=g)), grid
            )
            worst.append(np.max(np.abs(spec.s_f / floor - 1.0)))
        assert all(a > b for a, b in zip(worst, worst[1:]))
        assert worst[-1] < 0.01

    def test_cqnc_quadratic_scaling_window(self):
        # between the mechanical resonance and the shot-noise takeover
        # (relative shot grows as 0.75 omega^2 at g = -10) the ancilla floor
        # dominates and S_f grows as omega^2
        spec = noise.sensitivity_spectrum(
            SchemeConfig("cqnc", FIG2A), np.geomspace(0.05, 0.3, 40)
        )
        p = FIG2A
        quadratic = p.Gamma / (2 * p.Omega**2) * spec.omegas**2
        assert np.all(np.abs(spec.s_f / quadratic - 1.0) < 0.1)
        slope = np.polyfit(np.log(spec.omegas), np.log(spec.s_f), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.1)

    def test_toy_tracks_generalized_bound(self):
        p = DetectorParams(Omega=1.0, Gamma=1.0, gamma=100.0, g=5.0)
        grid = np.geomspace(1e-2, 1e2, 120)
        spec = noise.sensitivity_spectrum(SchemeConfig("toy", p, eta=1.0), grid)
        assert np.all(spec.s_f >= spec.guql * (1 - 1e-9))
        assert np.all(spec.guql < spec.uql)
        assert np.min(spec.s_f / spec.guql) < 1.1

    def test_unstable_model_raises(self):
        grid = np.geomspace(1e-3, 1, 10)
        with pytest.raises(UnstableModel):
            noise.sensitivity_spectrum(
                SchemeConfig("standard", replace(FIG2A, Delta=2.3)), grid
            )

    def test_grid_validation(self):
        spec_cfg = SchemeConfig("standard", FIG2A)
        with pytest.raises(ValueError):
            noise.sensitivity_spectrum(spec_cfg, np.array([1.0, 0.5]))
        with pytest.raises(ValueError):
            noise.sensitivity_spectrum(spec_cfg, np.array([-1.0, 0.5]))

    def test_column_length_validation(self):
        with pytest.raises(ValueError):
            noise.SensitivitySpectrum(
                omegas=np.array([1.0, 2.0]),
                s_f=np.array([1.0]),
                sql=np.array([1.0, 1.0]),
                uql=np.array([1.0, 1.0]),
                guql=np.array([1.0, 1.0]),
                opt_uql=np.array([1.0, 1.0]),
            )

    def test_mechanical_bath_not_counted(self):
        # the thermal occupancy is carried on the model but S_f is blind to it
        hot = replace(FIG2A, n_th=1e6)
        cold = FIG2A
        omega = 0.21
        assert noise.sensitivity_at(
            SchemeConfig("standard", hot), omega
        ) == pytest.approx(
            noise.sensitivity_at(SchemeConfig("standard", cold), omega), rel=1e-14
        )
