"""Symbol constructors, multiplier application, and the two propagators."""

import numpy as np
import pytest

from tfmult.core import ParameterError, SampledField, l2_norm, make_grid, sample
from tfmult.mult import (
    apply_multiplier,
    custom_symbol,
    multiply_symbols,
    schrodinger_propagate,
    split_sing_osc,
    symbol_gaussian_chirp,
    symbol_piecewise,
    symbol_sin_singular,
    symbol_unimodular,
    wave_energy,
    wave_propagate,
)


@pytest.fixture
def grid():
    return make_grid(1, 16.0, 512)


class TestSymbols:
    def test_unimodular_is_unimodular(self, grid):
        s = symbol_unimodular(grid, 1.5, t=0.7)
        assert np.allclose(np.abs(s.values), 1.0)

    def test_unimodular_alpha_zero_constant(self, grid):
        s = symbol_unimodular(grid, 0.0, t=2.0)
        assert np.allclose(s.values, np.exp(2.0j))

    def test_unimodular_rejects_alpha_out_of_range(self, grid):
        with pytest.raises(ParameterError):
            symbol_unimodular(grid, 2.5)
        with pytest.raises(ParameterError):
            symbol_unimodular(grid, -0.1)

    def test_anisotropic_radius(self, grid):
        s1 = symbol_unimodular(grid, 1.0, r=1.0)
        s2 = symbol_unimodular(grid, 1.0, r=2.0)
        # in one dimension |xi|_{2r} = |xi| for every r
        assert np.allclose(s1.values, s2.values)

    def test_anisotropic_radius_2d(self):
        g = make_grid(2, 8.0, 32)
        rho = g.frequency_radius(2.0)
        X, Y = g.frequency_meshes()
        assert np.allclose(rho, (X ** 4 + Y ** 4) ** 0.25)

    def test_chirp_aliasing_flag(self):
        coarse = make_grid(1, 16.0, 64)
        fine = make_grid(1, 16.0, 2048)
        assert symbol_gaussian_chirp(coarse, 8.0).aliasing_warning
        assert not symbol_gaussian_chirp(fine, 0.1).aliasing_warning

    def test_sin_singular_origin_value(self, grid):
        mid = grid.npoints // 2
        assert symbol_sin_singular(grid, 1.0, 1.0).values[mid] == 1.0
        assert symbol_sin_singular(grid, 1.0, 0.5).values[mid] == 0.0

    def test_sin_singular_rejects_unbounded(self, grid):
        with pytest.raises(ParameterError):
            symbol_sin_singular(grid, 0.5, 1.0)

    def test_piecewise_cells(self, grid):
        s = symbol_piecewise(grid, [1.0], lambda n: n[:, 0].astype(complex))
        xi = grid.axis_frequencies()
        vals = s.values
        # interior of cell (0, 1]: index 0
        assert vals[np.argmin(np.abs(xi - 0.5))] == 0.0
        # face point xi = 1 belongs to the lower cell (0, 1]
        assert vals[np.argmin(np.abs(xi - 1.0))] == 0.0
        # one lattice step above the face: next cell
        assert vals[np.argmin(np.abs(xi - (1.0 + grid.dxi)))] == 1.0
        # negative side: xi = -0.5 lies in (-1, 0], index -1
        assert vals[np.argmin(np.abs(xi + 0.5))] == -1.0

    def test_piecewise_2d_shape(self):
        g = make_grid(2, 8.0, 32)
        s = symbol_piecewise(g, [1.0, 2.0], lambda n: np.ones(len(n), complex))
        assert s.values.shape == (g.npoints,)

    def test_split_sums_back(self, grid):
        s = symbol_unimodular(grid, 1.0)
        sing, osc = split_sing_osc(s)
        assert np.max(np.abs(sing.values + osc.values - s.values)) < 1e-15
        rho = grid.frequency_radius().reshape(-1)
        assert np.all(np.abs(sing.values[rho >= 2.0]) == 0.0)
        assert np.all(np.abs(osc.values[rho <= 1.0]) == 0.0)


class TestApply:
    def test_identity_symbol(self, grid):
        rng = np.random.default_rng(1)
        f = SampledField(grid, rng.standard_normal(512) + 1j * rng.standard_normal(512))
        one = custom_symbol(grid, np.ones(grid.npoints))
        out = apply_multiplier(one, f)
        assert np.max(np.abs(out.values - f.values)) < 1e-12

    def test_l2_isometry(self, grid):
        rng = np.random.default_rng(2)
        f = SampledField(grid, rng.standard_normal(512) + 1j * rng.standard_normal(512))
        s = symbol_unimodular(grid, 1.3, t=-0.9)
        assert np.isclose(l2_norm(apply_multiplier(s, f)), l2_norm(f), rtol=1e-12)

    def test_composition_commutes(self, grid):
        rng = np.random.default_rng(3)
        f = SampledField(grid, rng.standard_normal(512) + 1j * rng.standard_normal(512))
        s1 = symbol_unimodular(grid, 0.5, t=1.0)
        s2 = symbol_gaussian_chirp(grid, 0.3)
        a = apply_multiplier(s1, apply_multiplier(s2, f))
        b = apply_multiplier(s2, apply_multiplier(s1, f))
        c = apply_multiplier(multiply_symbols(s1, s2), f)
        assert np.max(np.abs(a.values - b.values)) < 1e-12
        assert np.max(np.abs(a.values - c.values)) < 1e-12

    def test_does_not_mutate_input(self, grid):
        f = sample(lambda x: np.exp(-np.pi * x ** 2), grid)
        saved = f.values.copy()
        apply_multiplier(symbol_unimodular(grid, 1.0), f)
        assert np.array_equal(f.values, saved)


class TestSchrodinger:
    def test_t_zero_identity(self, grid):
        f = sample(lambda x: np.exp(-np.pi * x ** 2), grid)
        out = schrodinger_propagate(f, 0.0)
        assert np.max(np.abs(out.u.values - f.values)) < 1e-14

    def test_group_law(self, grid):
        f = sample(lambda x: np.exp(-np.pi * x ** 2) * np.cos(2 * x), grid)
        u1 = schrodinger_propagate(schrodinger_propagate(f, 0.7).u, 1.1).u
        u2 = schrodinger_propagate(f, 1.8).u
        assert np.max(np.abs(u1.values - u2.values)) < 1e-12

    def test_mass_conserved(self, grid):
        f = sample(lambda x: np.exp(-np.pi * x ** 2), grid)
        u = schrodinger_propagate(f, 2.0).u
        assert np.isclose(l2_norm(u), l2_norm(f), rtol=1e-12)

    def test_gaussian_spreading_closed_form(self):
        # |u(x, t)|^2 for e^{-pi x^2} initial data has variance growing as
        # (1 + t^2/pi^2 * pi^2) -> peak amplitude (1 + t^2/pi^2)^{-1/4}... use
        # the exact peak value |u(0, t)| = (1 + t^2 / pi^2)^{-1/4}
        grid = make_grid(1, 64.0, 4096)
        f = sample(lambda x: np.exp(-np.pi * x ** 2), grid)
        t = 1.5
        u = schrodinger_propagate(f, t).u
        peak = np.abs(u.values[grid.N // 2])
        oracle = (1.0 + (t / np.pi) ** 2) ** -0.25
        assert np.isclose(peak, oracle, rtol=1e-8)


class TestWave:
    def test_t_zero_identity(self, grid):
        f = sample(lambda x: np.exp(-np.pi * x ** 2), grid)
        g0 = sample(lambda x: np.exp(-x ** 2) * np.sin(x), grid)
        st = wave_propagate(f, g0, 0.0)
        assert np.max(np.abs(st.u.values - f.values)) < 1e-13
        assert np.max(np.abs(st.v.values - g0.values)) < 1e-13

    def test_energy_conserved(self, grid):
        f = sample(lambda x: np.exp(-np.pi * x ** 2), grid)
        g0 = sample(lambda x: np.exp(-x ** 2), grid)
        e0 = wave_energy(wave_propagate(f, g0, 0.0))
        for t in (0.5, 1.0, 3.0):
            et = wave_energy(wave_propagate(f, g0, t))
            assert abs(et - e0) / e0 < 1e-12

    def test_dalembert_splitting(self):
        # zero initial velocity: u = (F(x - s) + F(x + s)) / 2 where the
        # shift is s = t / (2 pi) under the 2 pi frequency convention
        grid = make_grid(1, 64.0, 2048)
        f = sample(lambda x: np.exp(-np.pi * x ** 2), grid)
        g0 = sample(lambda x: np.zeros_like(x), grid)
        t = 4.0
        s = t / (2.0 * np.pi)
        u = wave_propagate(f, g0, t).u
        x = grid.axis_positions()
        oracle = 0.5 * (np.exp(-np.pi * (x - s) ** 2) + np.exp(-np.pi * (x + s) ** 2))
        assert np.max(np.abs(u.values - oracle)) < 1e-10

    def test_time_reversal(self, grid):
        f = sample(lambda x: np.exp(-np.pi * x ** 2), grid)
        g0 = sample(lambda x: np.exp(-x ** 2), grid)
        st = wave_propagate(f, g0, 1.3)
        back = wave_propagate(st.u, st.v, -1.3)
        assert np.max(np.abs(back.u.values - f.values)) < 1e-12
        assert np.max(np.abs(back.v.values - g0.values)) < 1e-12
