import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trispiral import (
    DegenerateTraceError,
    PolarSample,
    as_arrays,
    candidate_mods,
    classify_mod,
    fit_golden_spiral,
    fit_hls,
    fit_log_spiral,
    fit_triangular,
    golden_growth,
    growth_rate,
    phi0_from_growth,
    sample_polyline,
    spec_from_mod,
    unwrap_angles,
)

from oracles import envelope_radius0, grid_fit, hls_grid_r0

# growth halfway (in rms) between the mod-10 and mod-12 envelopes for a
# 3-turn, 400-sample trace; found by root-finding rms10 - rms12 = 0
MOD10_12_TIE_GROWTH = 0.3046


def log_trace(scale, growth, turns=3, count=400):
    theta = np.linspace(0, turns * 2 * math.pi, count)
    return [PolarSample(t, scale * math.exp(growth * t)) for t in theta]


class TestTraceValidation:
    def test_empty(self):
        with pytest.raises(ValueError, match="empty"):
            as_arrays([])

    def test_nonpositive_radius(self):
        with pytest.raises(ValueError, match="positive"):
            as_arrays([(0, 1), (1, -1)])

    def test_non_monotone(self):
        with pytest.raises(ValueError, match="increasing"):
            as_arrays([(0, 1), (1, 1), (0.5, 1)])

    def test_unwrap_helper(self):
        raw = np.angle(np.exp(1j * np.linspace(0, 6 * math.pi, 50)))
        np.testing.assert_allclose(unwrap_angles(raw), np.linspace(0, 6 * math.pi, 50), atol=1e-12)


class TestLogFit:
    def test_exact(self):
        fit = fit_log_spiral(log_trace(1.0, 0.2, count=50))
        assert fit.params.scale == pytest.approx(1.0, abs=1e-9)
        assert fit.params.growth == pytest.approx(0.2, abs=1e-9)
        assert fit.rms_error < 1e-9
        assert fit.kind == "log"

    def test_circle(self):
        fit = fit_log_spiral([(t, 5.0) for t in np.linspace(0, 10, 30)])
        assert fit.params.growth == pytest.approx(0.0, abs=1e-14)
        assert fit.params.scale == pytest.approx(5.0)

    def test_noisy_growth(self):
        # 200 points over 4*pi, sigma 0.01 on ln r: slope standard error
        # 0.01 / (sqrt(200) * std(theta)) ~ 1.95e-4, so 0.005 is ~25 SE
        rng = np.random.default_rng(20240501)
        theta = np.linspace(0, 4 * math.pi, 200)
        r = np.exp(0.3 + 0.15 * theta + 0.01 * rng.standard_normal(200))
        fit = fit_log_spiral(np.column_stack([theta, r]))
        assert abs(fit.params.growth - 0.15) < 0.005

    def test_too_few(self):
        with pytest.raises(ValueError):
            fit_log_spiral([(0, 1), (1, 2)])

    def test_rms_is_rms_of_residuals(self):
        rng = np.random.default_rng(3)
        theta = np.linspace(0, 9, 40)
        fit = fit_log_spiral(np.column_stack([theta, np.exp(0.1 * theta) * (1 + 0.01 * rng.standard_normal(40))]))
        assert fit.rms_error == pytest.approx(np.sqrt(np.mean(fit.residuals**2)))
        np.testing.assert_allclose(fit.residuals, fit.r - fit.model_r)


class TestGoldenFit:
    def test_golden_trace(self):
        fit = fit_golden_spiral(log_trace(2.0, golden_growth(), count=60))
        assert fit.params.scale == pytest.approx(2.0, rel=1e-12)
        assert fit.rms_error < 1e-9


class TestHlsFit:
    def hls_trace(self, r0, a, b, count=120):
        theta = np.linspace(0, 4 * math.pi, count)
        return theta, r0 + np.exp(a + b * theta)

    def test_recovers_offset(self):
        theta, r = self.hls_trace(2.0, 0.0, 0.1)
        oracle = hls_grid_r0(theta, r)
        assert oracle == pytest.approx(2.0, abs=1e-3)
        fit = fit_hls(np.column_stack([theta, r]))
        assert fit.params.r0 == pytest.approx(2.0, abs=1e-3)
        assert abs(fit.params.r0 - oracle) <= 1e-4
        assert fit.params.b_l == pytest.approx(0.1, abs=1e-6)

    def test_zero_offset_matches_log_fit(self):
        trace = log_trace(1.3, 0.17)
        h = fit_hls(trace)
        lg = fit_log_spiral(trace)
        assert h.params.r0 == pytest.approx(0.0, abs=1e-6)
        assert h.params.b_l == pytest.approx(lg.params.growth, abs=1e-6)
        assert math.exp(h.params.a_l) == pytest.approx(lg.params.scale, abs=1e-6)

    def test_constant_radius(self):
        fit = fit_hls([(t, 3.0) for t in np.linspace(0, 10, 30)])
        assert fit.params.b_l == pytest.approx(0.0, abs=1e-9)

    def test_noisy_offset_matches_grid_oracle(self):
        rng = np.random.default_rng(11)
        theta, r = self.hls_trace(1.5, 0.2, 0.12)
        r = r * (1 + 0.002 * rng.standard_normal(r.size))
        fit = fit_hls(np.column_stack([theta, r]))
        assert fit.params.r0 == pytest.approx(hls_grid_r0(theta, r), abs=2e-4)

    def test_too_few(self):
        with pytest.raises(ValueError):
            fit_hls([(0, 1), (1, 2), (2, 3)])


class TestPhi0FromGrowth:
    def test_mod12_round_trip(self):
        b = math.log(1 / math.cos(math.pi / 6)) / (math.pi / 6)
        assert phi0_from_growth(b) == pytest.approx(math.pi / 6, abs=1e-10)

    def test_mod6_base_two(self):
        assert phi0_from_growth(math.log(2.0) / (math.pi / 3)) == pytest.approx(math.pi / 3, abs=1e-10)

    def test_small_growth_limit(self):
        assert phi0_from_growth(1e-9) == pytest.approx(2e-9, rel=1e-3)

    @pytest.mark.parametrize("b", [0.0, -0.1, float("nan")])
    def test_non_growing(self, b):
        with pytest.raises(ValueError):
            phi0_from_growth(b)

    def test_too_large(self):
        with pytest.raises(ValueError, match="largest"):
            phi0_from_growth(1e3)

    def test_monotone_and_inverse(self):
        phis = np.linspace(1e-3, math.pi / 2 - 1e-3, 400)
        bs = growth_rate(phis)
        back = np.array([phi0_from_growth(b) for b in bs])
        assert np.all(np.diff(back) > 0)
        np.testing.assert_allclose(back, phis, atol=1e-10)


class TestModRange:
    def test_default(self):
        assert candidate_mods() == list(range(6, 42, 2))

    @pytest.mark.parametrize("bad", [(7, 12), (6, 13), (4, 10), (6, 222)])
    def test_bad_bounds(self, bad):
        with pytest.raises(ValueError):
            candidate_mods(bad)

    def test_empty(self):
        with pytest.raises(ValueError, match="empty"):
            candidate_mods((12, 10))

    def test_explicit(self):
        assert candidate_mods(mods=[12, 8, 8]) == [8, 12]
        with pytest.raises(ValueError):
            candidate_mods(mods=[8, 9])


class TestTriangularFit:
    def test_vertex_samples_mod12(self):
        trace = sample_polyline(spec_from_mod(12), turns=3, per_triangle=1)
        assert len(trace) == 36
        fit = fit_triangular(trace)
        assert fit.classified_mod == 12
        assert fit.rms_error < 1e-9
        # one sample per triangle at a fixed offset pins the mod but not the
        # phase: any rotation fits with a rescaled seed

    def test_mid_chord_mod8(self):
        # vertices plus chord midpoints; midpoints alone lie on a log spiral
        trace = sample_polyline(spec_from_mod(8, 1.2, 0.3), turns=3, per_triangle=2)
        fit = fit_triangular(trace)
        assert fit.classified_mod == 8
        assert fit.rms_error < 1e-9
        assert fit_log_spiral(trace).rms_error > 1e-3
        th, r = as_arrays(trace)
        mod, size, phase, rms = grid_fit(th, r, [8])
        assert envelope_radius0(8, fit.params.seed, fit.params.phase) == pytest.approx(size, abs=1e-3)
        assert fit.params.phase == pytest.approx(phase, abs=1e-3)

    def test_scores_and_argmin(self):
        fit = fit_triangular(sample_polyline(spec_from_mod(14), 2, 4))
        assert set(fit.candidate_scores) == set(range(6, 42, 2))
        assert fit.classified_mod == min(fit.candidate_scores, key=fit.candidate_scores.get)

    def test_tie_goes_to_smaller_mod(self, monkeypatch):
        from trispiral import fitting

        monkeypatch.setattr(fitting, "_fit_one_mod", lambda theta, r, mod, grid: (1.0, 0.0, 0.25))
        fit = fit_triangular(sample_polyline(spec_from_mod(10), 2, 4), mods=[12, 8, 10])
        assert fit.classified_mod == 8
        assert set(fit.candidate_scores.values()) == {0.25 ** 0.5 / math.sqrt(80)}

    def test_parallel_identical(self):
        trace = sample_polyline(spec_from_mod(16, 0.8, 0.1), 3, 4, noise=0.005, rng=4)
        a = fit_triangular(trace)
        b = fit_triangular(trace, n_jobs=4)
        assert a.candidate_scores == b.candidate_scores
        assert a.params == b.params

    def test_phase_canonical(self):
        fit = fit_triangular(sample_polyline(spec_from_mod(12, 1.0, 0.7), 2, 4))
        assert 0 <= fit.params.phase < fit.params.phi0
        # 0.7 rad is beyond one 30 degree step, so the canonical phase is one triangle back
        assert fit.params.phase == pytest.approx(0.7 - math.pi / 6, abs=1e-9)
        assert fit.params.seed == pytest.approx(math.cos(math.pi / 6), rel=1e-9)

    def test_empty(self):
        with pytest.raises(ValueError):
            fit_triangular([])

    def test_bad_range(self):
        trace = sample_polyline(spec_from_mod(12), 1, 2)
        with pytest.raises(ValueError):
            fit_triangular(trace, (6, 7))

    def test_scale_equivariance(self):
        trace = np.array(sample_polyline(spec_from_mod(18, 1.1, 0.05), 3, 8))
        base = fit_triangular(trace)
        for c in (0.01, 3.7, 250.0):
            scaled = fit_triangular(trace * [1.0, c])
            assert scaled.classified_mod == base.classified_mod
            assert scaled.params.seed == pytest.approx(c * base.params.seed, rel=1e-9)
            assert scaled.params.phase == pytest.approx(base.params.phase, abs=1e-9)
            np.testing.assert_allclose(scaled.residuals / scaled.r, base.residuals / base.r, atol=1e-9)

    def test_rotation_equivariance(self):
        trace = np.array(sample_polyline(spec_from_mod(10, 1.0, 0.2), 3, 8))
        base = fit_triangular(trace)
        phi0 = base.params.phi0
        for shift in (0.1, 1.0, -2.3):
            rot = fit_triangular(trace + [shift, 0.0])
            assert rot.classified_mod == base.classified_mod
            dphase = (rot.params.phase - base.params.phase - shift) % phi0
            assert min(dphase, phi0 - dphase) < 1e-9
            np.testing.assert_allclose(rot.residuals, base.residuals, atol=1e-9)

    def test_equivariance_under_noise(self):
        trace = np.array(sample_polyline(spec_from_mod(12, 1.0, 0.2), 3, 8, noise=0.005, rng=9))
        base = fit_triangular(trace)
        scaled = fit_triangular(trace * [1.0, 4.0])
        assert scaled.classified_mod == base.classified_mod
        assert scaled.params.seed == pytest.approx(4 * base.params.seed, rel=1e-9)
        assert scaled.params.phase == pytest.approx(base.params.phase, abs=1e-9)
        rot = fit_triangular(trace + [0.7, 0.0])
        dphase = (rot.params.phase - base.params.phase - 0.7) % base.params.phi0
        assert min(dphase, base.params.phi0 - dphase) < 1e-9

    @settings(max_examples=25, deadline=None)
    @given(mod=st.integers(3, 20).map(lambda s: 2 * s), seed=st.floats(0.1, 10),
           frac=st.floats(0, 0.999))
    def test_recovers_generator(self, mod, seed, frac):
        spec = spec_from_mod(mod, seed, frac * 2 * math.pi / mod)
        fit = fit_triangular(sample_polyline(spec, 2, 5))
        assert fit.classified_mod == mod
        assert fit.params.seed == pytest.approx(seed, rel=1e-7)

    def test_nested_model_sanity(self):
        # growth 0.05 is slower than the mod-40 envelope (0.0787), so every
        # candidate up to 40 is too coarse and finer mods fit better
        fit = fit_triangular(log_trace(1.0, 0.05))
        scores = [fit.candidate_scores[m] for m in sorted(fit.candidate_scores)]
        assert min(scores) > 0
        assert np.all(np.diff(scores) < 0)

    def test_oracle_equivalence_small(self):
        rng = np.random.default_rng(5)
        for mod in (8, 12):
            phi0 = 2 * math.pi / mod
            spec = spec_from_mod(mod, rng.uniform(0.8, 1.4), rng.uniform(0.2, 0.8) * phi0)
            trace = sample_polyline(spec, 2, 4, noise=0.005, rng=mod)
            fit = fit_triangular(trace, mods=[8, 12])
            th, r = as_arrays(trace)
            gmod, size, phase, rms = grid_fit(th, r, [8, 12])
            assert fit.classified_mod == gmod == mod
            assert fit.rms_error <= rms
            assert envelope_radius0(mod, fit.params.seed, fit.params.phase) == pytest.approx(size, abs=1e-3)
            assert fit.params.phase == pytest.approx(phase, abs=1e-3)


class TestClassify:
    def test_exact_mod18(self):
        c = classify_mod(sample_polyline(spec_from_mod(18), 3, 8))
        assert c.mod == 18
        assert c.confidence > 0.5
        assert 0 <= c.confidence < 1
        assert c.continuous_mod == pytest.approx(18, rel=0.05)

    def test_ambiguous_log_trace(self):
        b10, b12 = growth_rate(math.pi / 5), growth_rate(math.pi / 6)
        assert b12 < MOD10_12_TIE_GROWTH < b10
        c = classify_mod(log_trace(1.0, MOD10_12_TIE_GROWTH))
        assert c.mod in (10, 12)
        assert c.confidence < 0.1
        assert 10 < c.continuous_mod < 12

    def test_circle_degenerate(self):
        with pytest.raises(DegenerateTraceError):
            classify_mod([(t, 2.0) for t in np.linspace(0, 12, 100)])

    def test_single_candidate_zero_confidence(self):
        c = classify_mod(sample_polyline(spec_from_mod(8), 2, 4), mods=[8])
        assert (c.mod, c.confidence) == (8, 0.0)
