import math

import numpy as np
import pytest

from fracquad.exceptions import (
    AlignmentError,
    DomainError,
    GridMismatchError,
    LengthError,
)
from fracquad.oracle import (
    exact_integral_const,
    exact_integral_exp,
    exact_integral_monomial,
)
from fracquad.quadrature import (
    SampledSignal,
    UniformGrid,
    frac_integral,
    frac_newton_cotes,
    frac_trapezoid,
    short_memory_integral,
)
from fracquad.weights import Scheme, gl_weights, nc0_weights, weights_for_scheme


def make_signal(fn, t_end, n):
    grid = UniformGrid(t_end / (n - 1), n)
    return SampledSignal.sample(fn, grid)


def test_grid_basics():
    grid = UniformGrid(0.25, 5)
    assert grid.node(0) == 0.0
    assert grid.node(4) == 1.0
    assert grid.t_end == 1.0
    assert np.array_equal(grid.nodes, [0.0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(DomainError):
        UniformGrid(0.0, 5)
    with pytest.raises(DomainError):
        UniformGrid(0.1, 0)


def test_signal_validation():
    grid = UniformGrid(0.1, 4)
    with pytest.raises(DomainError):
        SampledSignal(grid, np.ones(3))
    with pytest.raises(DomainError):
        SampledSignal(grid, [1.0, 2.0, np.nan, 4.0])


def test_nc0_exact_on_constants():
    sig = make_signal(lambda t: np.ones_like(t), 9.9, 100)
    w = nc0_weights(0.5, sig.grid.dt, 100)
    out = frac_integral(sig, w).values
    t = sig.grid.nodes
    want = np.array([exact_integral_const(x, 0.5) for x in t])
    assert np.max(np.abs(out - want)) < 1e-12


def test_gl_const_error_profile():
    # relative deviation below 0.1% away from the origin singularity
    sig = make_signal(lambda t: np.ones_like(t), 10.0, 1500)
    t = sig.grid.nodes
    for alpha in (0.25, 0.5, 0.75):
        w = gl_weights(alpha, sig.grid.dt, 1500)
        out = frac_integral(sig, w, method="fft").values
        want = t**alpha / math.gamma(alpha + 1.0)
        sel = t >= 6.0
        rel = np.abs(out[sel] - want[sel]) / want[sel]
        assert rel.max() < 1e-3


def test_gl_exp_against_closed_form():
    sig = make_signal(np.exp, 10.0, 1500)
    t = sig.grid.nodes
    for alpha in (0.25, 0.5, 0.75):
        w = gl_weights(alpha, sig.grid.dt, 1500)
        out = frac_integral(sig, w, method="fft").values
        sel = (t >= 1.0) & (t <= 8.0)
        want = np.array([exact_integral_exp(x, alpha) for x in t[sel]])
        rel = np.abs(out[sel] - want) / want
        assert rel.max() < 1e-2


def test_convention_at_origin():
    sig = make_signal(lambda t: 2.0 + 0.0 * t, 1.0, 9)
    gl = frac_integral(sig, gl_weights(0.5, sig.grid.dt, 9)).values
    nc = frac_integral(sig, nc0_weights(0.5, sig.grid.dt, 9)).values
    # GL references the sample at the node itself; NC0 has an empty panel sum
    assert gl[0] == pytest.approx(2.0 * sig.grid.dt**0.5)
    assert nc[0] == 0.0


def test_direct_and_fft_agree():
    rng = np.random.default_rng(42)
    for n in (257, 4096, 8192):
        grid = UniformGrid(0.01, n)
        sig = SampledSignal(grid, rng.standard_normal(n))
        w = gl_weights(0.5, grid.dt, n)
        d = frac_integral(sig, w, method="direct").values
        f = frac_integral(sig, w, method="fft").values
        scale = np.max(np.abs(d))
        assert np.max(np.abs(d - f)) < 1e-10 * scale


def test_mismatch_errors():
    sig = make_signal(np.exp, 1.0, 16)
    with pytest.raises(GridMismatchError):
        frac_integral(sig, gl_weights(0.5, 0.5, 16))
    with pytest.raises(LengthError):
        frac_integral(sig, gl_weights(0.5, sig.grid.dt, 8))
    with pytest.raises(DomainError):
        frac_integral(sig, gl_weights(0.5, sig.grid.dt, 16), method="simpson")


def test_linearity():
    rng = np.random.default_rng(7)
    grid = UniformGrid(0.02, 300)
    f = rng.standard_normal(300)
    g = rng.standard_normal(300)
    a, b = 2.5, -1.25
    w = gl_weights(0.6, grid.dt, 300)

    def integ(values):
        return frac_integral(SampledSignal(grid, values), w).values

    combined = integ(a * f + b * g)
    separate = a * integ(f) + b * integ(g)
    scale = np.max(np.abs(separate))
    assert np.max(np.abs(combined - separate)) < 1e-12 * scale


def test_classical_limits_alpha_one():
    rng = np.random.default_rng(3)
    n = 129
    grid = UniformGrid(0.05, n)
    values = rng.standard_normal(n)
    sig = SampledSignal(grid, values)
    dt = grid.dt

    gl = frac_integral(sig, gl_weights(1.0, dt, n)).values
    assert np.max(np.abs(gl - dt * np.cumsum(values))) < 1e-11

    nc = frac_integral(sig, nc0_weights(1.0, dt, n)).values
    left_riemann = dt * np.concatenate(([0.0], np.cumsum(values[:-1])))
    assert np.max(np.abs(nc - left_riemann)) < 1e-11

    tr = frac_trapezoid(sig, 1.0).values
    classical_trap = np.concatenate(
        ([0.0], dt * np.cumsum(0.5 * (values[:-1] + values[1:]))))
    assert np.max(np.abs(tr - classical_trap)) < 1e-11

    simpson = frac_newton_cotes(sig, 1.0, 3).values
    for m in range(2, n, 2):
        want = dt / 3.0 * np.sum(
            values[0:m - 1:2] + 4.0 * values[1:m:2] + values[2:m + 1:2])
        assert simpson[m] == pytest.approx(want, abs=1e-11)


def test_trapezoid_examples():
    # alpha = 1 on a linear integrand: classical trapezoid is exact
    sig = make_signal(lambda t: t, 1.0, 101)
    out = frac_trapezoid(sig, 1.0).values
    assert np.max(np.abs(out - sig.grid.nodes**2 / 2.0)) < 1e-12

    # constant integrand: identical to NC0 (average of equal endpoints)
    sig1 = make_signal(lambda t: np.ones_like(t), 2.0, 64)
    tr = frac_trapezoid(sig1, 0.3).values
    nc = frac_integral(sig1, nc0_weights(0.3, sig1.grid.dt, 64)).values
    assert np.max(np.abs(tr - nc)) < 1e-13

    # f(t) = t at alpha = 0.5: measurably better than the left NC0 rule
    sig2 = make_signal(lambda t: t, 1.0, 512)
    want = exact_integral_monomial(1.0, 0.5, 1.0)
    err_trap = abs(frac_trapezoid(sig2, 0.5).values[-1] - want)
    err_nc0 = abs(frac_integral(
        sig2, nc0_weights(0.5, sig2.grid.dt, 512)).values[-1] - want)
    assert err_trap * 2.0 <= err_nc0


def test_newton_cotes_polynomial_exactness():
    sig = make_signal(lambda t: t * t, 1.0, 65)
    out = frac_newton_cotes(sig, 1.0, 3).values
    assert np.max(np.abs(out - sig.grid.nodes**3 / 3.0)) < 1e-11

    sig2 = make_signal(lambda t: t, 1.0, 65)
    out2 = frac_newton_cotes(sig2, 0.5, 2).values
    want = np.array([exact_integral_monomial(x, 0.5, 1.0)
                     for x in sig2.grid.nodes])
    assert np.max(np.abs(out2 - want)) < 1e-10

    # quadratic exactness holds for fractional orders too
    out3 = frac_newton_cotes(sig, 0.5, 3).values
    want3 = np.array([exact_integral_monomial(x, 0.5, 2.0)
                      for x in sig.grid.nodes])
    assert np.max(np.abs(out3 - want3)) < 1e-10


def test_newton_cotes_beats_nc0_on_exp():
    want = exact_integral_exp(1.0, 0.5)
    errs = []
    for n in (64, 128, 256):
        sig = make_signal(np.exp, 1.0, n + 1)
        got = frac_newton_cotes(sig, 0.5, 2).values[-1]
        errs.append(abs(got - want))
        nc0 = frac_integral(
            sig, nc0_weights(0.5, sig.grid.dt, n + 1)).values[-1]
        assert abs(got - want) <= abs(nc0 - want)
    order = math.log(errs[-2] / errs[-1]) / math.log(2.0)
    assert order >= 1.8


def test_newton_cotes_alignment():
    sig = make_signal(np.exp, 1.0, 64)  # 63 steps, does not tile by 2
    with pytest.raises(AlignmentError):
        frac_newton_cotes(sig, 0.5, 3)
    with pytest.raises(DomainError):
        frac_newton_cotes(sig, 0.5, 4)


def test_short_memory_full_window_is_bitwise_identical():
    sig = make_signal(np.exp, 1.0, 500)
    w = gl_weights(0.5, sig.grid.dt, 500)
    full = frac_integral(sig, w).values
    sm = short_memory_integral(sig, w, 500).values
    assert np.array_equal(full, sm)


def test_short_memory_truncation_contrast():
    # derivative-type kernels decay fast enough to truncate; integral-type
    # kernels do not: keeping a ~77-time-unit window of 512 samples holds
    # the derivative deviation under 1e-3 while the integral rule drifts
    # far past 1e-2
    grid = UniformGrid(0.15, 4096)
    t = grid.nodes
    sel = t > 5.0

    sig = SampledSignal(grid, np.sin(t))
    w_d = gl_weights(-0.5, grid.dt, grid.n)
    full_d = frac_integral(sig, w_d).values
    trunc_d = short_memory_integral(sig, w_d, 512).values
    assert np.max(np.abs(full_d[sel] - trunc_d[sel])) < 1e-3

    ones = SampledSignal(grid, np.ones(grid.n))
    w_i = gl_weights(0.5, grid.dt, grid.n)
    full_i = frac_integral(ones, w_i).values
    trunc_i = short_memory_integral(ones, w_i, 512).values
    assert np.max(np.abs(full_i[sel] - trunc_i[sel])) > 1e-2


def test_short_memory_domain():
    sig = make_signal(np.exp, 1.0, 32)
    w = gl_weights(0.5, sig.grid.dt, 32)
    with pytest.raises(DomainError):
        short_memory_integral(sig, w, 0)
    with pytest.raises(DomainError):
        short_memory_integral(sig, w, 33)


def test_semigroup_composition():
    # GL weights compose exactly: (1-z)^-a (1-z)^-b = (1-z)^-(a+b)
    n = 1000
    sig = make_signal(np.exp, 1.0, n)
    dt = sig.grid.dt
    twice = frac_integral(
        frac_integral(sig, gl_weights(0.4, dt, n)), gl_weights(0.3, dt, n))
    once = frac_integral(sig, gl_weights(0.7, dt, n))
    scale = np.max(np.abs(once.values))
    assert np.max(np.abs(twice.values - once.values)) < 1e-13 * scale

    # the NC0 panel rule composes only approximately, at its own order
    devs = []
    for m in (250, 500, 1000):
        s = make_signal(np.exp, 1.0, m)
        d = s.grid.dt
        two = frac_integral(
            frac_integral(s, nc0_weights(0.4, d, m)), nc0_weights(0.3, d, m))
        one = frac_integral(s, nc0_weights(0.7, d, m))
        devs.append(abs(two.values[-1] - one.values[-1]))
    order = math.log(devs[0] / devs[-1]) / math.log(4.0)
    assert 0.85 <= order <= 1.15


def test_first_order_convergence_gl_nc0():
    want = exact_integral_exp(1.0, 0.5)
    for maker in (
        lambda dt, n: gl_weights(0.5, dt, n),
        lambda dt, n: nc0_weights(0.5, dt, n),
    ):
        errs = []
        for n in (250, 500, 1000, 2000):
            sig = make_signal(np.exp, 1.0, n)
            got = frac_integral(sig, maker(sig.grid.dt, n)).values[-1]
            errs.append(abs(got - want))
        slopes = np.diff(-np.log2(errs))
        assert np.all((slopes >= 0.85) & (slopes <= 1.15))


def test_starting_corrections_restore_exactness():
    n = 64
    grid = UniformGrid(1.0 / (n - 1), n)
    w = gl_weights(0.5, grid.dt, n)

    ones = SampledSignal(grid, np.ones(n))
    out0 = frac_integral(ones, w, starting_degree=0).values
    want0 = np.array([exact_integral_const(x, 0.5) for x in grid.nodes])
    assert np.max(np.abs(out0 - want0)) < 1e-10

    ramp = SampledSignal(grid, grid.nodes)
    out1 = frac_integral(ramp, w, starting_degree=1).values
    want1 = np.array([exact_integral_monomial(x, 0.5, 1.0)
                      for x in grid.nodes])
    assert np.max(np.abs(out1 - want1)) < 1e-10


def test_flmm_trap_scheme_runs_through_integral():
    sig = make_signal(np.exp, 1.0, 400)
    w = weights_for_scheme(Scheme.FLMM_TRAP, 0.5, sig.grid.dt, 400)
    out = frac_integral(sig, w).values
    want = exact_integral_exp(1.0, 0.5)
    assert out[-1] == pytest.approx(want, rel=2e-3)
