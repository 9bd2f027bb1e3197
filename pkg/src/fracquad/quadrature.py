"""Left-sided fractional integrals of sampled signals.

The evaluators here are discrete causal convolutions between a
:class:`~fracquad.weights.WeightSequence` and signal samples on a uniform
grid anchored at t = 0.  Two index conventions coexist, both kept exactly
as the underlying rules define them:

* convolution-quadrature rules (GL, FLMM) reference the sample at the
  output node itself:  ``out[n] = sum_{j=0..n} w_j f_(n-j)``;
* panel rules (NC0 and everything derived from it) sum over the ``n``
  panels left of the output node: ``out[n] = sum_{k=0..n-1} f_k w_(n-1-k)``
  with ``out[0] = 0``.

The ``direct`` evaluation path accumulates in increasing sample index and
switches to compensated (Kahan) summation for long signals; the ``fft``
path computes the identical convolution by zero-padded real transforms.
The two agree to ~1e-10 relative, but only the direct path is bitwise
causal, so it is the default everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import (
    AlignmentError,
    DomainError,
    GridMismatchError,
    LengthError,
)
from .special import gamma
from .weights import (
    WeightSequence,
    nc0_weights,
    starting_weight_table,
)

__all__ = [
    "UniformGrid",
    "SampledSignal",
    "frac_integral",
    "frac_trapezoid",
    "frac_newton_cotes",
    "short_memory_integral",
]

#: Direct-path signals longer than this use compensated summation.
KAHAN_THRESHOLD = 10_000


@dataclass(frozen=True)
class UniformGrid:
    """Uniform time mesh ``t_i = i * dt`` with the origin fixed at zero."""

    dt: float
    n: int

    def __post_init__(self) -> None:
        if not self.dt > 0.0:
            raise DomainError(f"grid step must be positive, got {self.dt!r}")
        if self.n < 1:
            raise DomainError(f"grid needs >= 1 node, got {self.n}")

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n) * self.dt

    def node(self, i: int) -> float:
        return i * self.dt

    @property
    def t_end(self) -> float:
        return (self.n - 1) * self.dt


@dataclass(frozen=True)
class SampledSignal:
    """Real samples of a function on a :class:`UniformGrid`."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or len(values) != self.grid.n:
            raise DomainError(
                f"signal needs {self.grid.n} samples, got shape "
                f"{values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("signal samples must all be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def sample(cls, f: Callable[[np.ndarray], np.ndarray],
               grid: UniformGrid) -> "SampledSignal":
        return cls(grid, np.asarray(f(grid.nodes), dtype=float))

    def replace_values(self, values: np.ndarray) -> "SampledSignal":
        return SampledSignal(self.grid, values)


def _kahan_causal_conv(f: np.ndarray, c: np.ndarray) -> np.ndarray:
    # out[n] = sum_k f[k] c[n-k], accumulated in increasing k with a
    # per-element compensation term.
    n = len(f)
    span = min(len(c), n)
    total = np.zeros(n)
    comp = np.zeros(n)
    for k in range(n):
        hi = min(n, k + span)
        if hi <= k:
            continue
        y = f[k] * c[: hi - k] - comp[k:hi]
        t = total[k:hi] + y
        comp[k:hi] = (t - total[k:hi]) - y
        total[k:hi] = t
    return total


def _causal_conv_direct(f: np.ndarray, c: np.ndarray) -> np.ndarray:
    n = len(f)
    if n > KAHAN_THRESHOLD:
        return _kahan_causal_conv(f, c)
    return np.convolve(f, c)[:n]


def _causal_conv_fft(f: np.ndarray, c: np.ndarray) -> np.ndarray:
    n = len(f)
    size = 1 << (2 * n - 1).bit_length()
    spectrum = np.fft.rfft(f, size) * np.fft.rfft(c[:n], size)
    return np.fft.irfft(spectrum, size)[:n]


def _causal_conv(f: np.ndarray, c: np.ndarray, method: str) -> np.ndarray:
    if method == "direct":
        return _causal_conv_direct(f, c)
    if method == "fft":
        return _causal_conv_fft(f, c)
    raise DomainError(f"method must be 'direct' or 'fft', got {method!r}")


def _check_compatibility(signal: SampledSignal,
                         weights: WeightSequence) -> None:
    dt = signal.grid.dt
    if not math.isclose(weights.dt, dt, rel_tol=1e-12, abs_tol=0.0):
        raise GridMismatchError(
            f"weights were generated for dt={weights.dt!r}, signal grid "
            f"has dt={dt!r}"
        )
    if len(weights.values) < signal.grid.n:
        raise LengthError(
            f"{len(weights.values)} weights cannot integrate a signal of "
            f"{signal.grid.n} samples"
        )


def _convolve_by_convention(values: np.ndarray, weights: WeightSequence,
                            method: str) -> np.ndarray:
    if weights.scheme.panel_based:
        out = np.zeros(len(values))
        if len(values) > 1:
            out[1:] = _causal_conv(values, weights.values, method)[:-1]
        return out
    return _causal_conv(values, weights.values, method)


def frac_integral(
    signal: SampledSignal,
    weights: WeightSequence,
    method: str = "direct",
    starting_degree: int | None = None,
) -> SampledSignal:
    """Fractional integral of a sampled signal by discrete convolution.

    Parameters
    ----------
    signal : SampledSignal
        Samples of the integrand on a uniform grid.
    weights : WeightSequence
        Convolution weights generated for the same grid step.
    method : {"direct", "fft"}
        Summation backend.  Identical results to ~1e-10 relative; only
        ``direct`` is bitwise causal.
    starting_degree : int, optional
        When given, add the polynomial-exactness corrections of this degree
        (weights attached to the first ``starting_degree + 1`` nodes).
        Off by default.
    """
    _check_compatibility(signal, weights)
    out = _convolve_by_convention(signal.values, weights, method)
    if starting_degree is not None:
        out = out + _starting_correction(signal, weights, starting_degree)
    return signal.replace_values(out)


def _starting_correction(signal: SampledSignal, weights: WeightSequence,
                         s: int) -> np.ndarray:
    table = starting_weight_table(weights, s).table[: signal.grid.n]
    head = signal.values[: s + 1]
    if len(head) < s + 1:
        raise DomainError(
            f"signal too short for degree-{s} starting corrections"
        )
    return table @ head


def frac_trapezoid(signal: SampledSignal, alpha: float,
                   method: str = "direct") -> SampledSignal:
    """Fractional composite trapezoid rule.

    Convolves panel midpoint averages ``(f_k + f_(k+1)) / 2`` with the NC0
    panel weights; reduces to the classical composite trapezoid rule at
    ``alpha = 1``.
    """
    if not alpha > 0.0:
        raise DomainError(f"trapezoid rule requires alpha > 0, got {alpha!r}")
    n = signal.grid.n
    if n < 2:
        raise DomainError("trapezoid rule needs at least 2 samples")
    c = nc0_weights(alpha, signal.grid.dt, n - 1)
    averages = 0.5 * (signal.values[:-1] + signal.values[1:])
    out = np.zeros(n)
    out[1:] = _causal_conv(averages, c.values, method)
    return signal.replace_values(out)


def frac_newton_cotes(signal: SampledSignal, alpha: float,
                      p: int) -> SampledSignal:
    """Fractional Newton-Cotes rule of ``p`` points per panel, p in {2, 3}.

    Each panel replaces the integrand with its Lagrange polynomial through
    ``p`` consecutive grid nodes and integrates that polynomial against the
    kernel ``(t_n - t')^(alpha-1)`` exactly, via monomial moments expanded
    binomially around ``t_n``.  Grids must tile: ``n mod (p - 1) == 1``.
    """
    if p not in (2, 3):
        raise DomainError(f"panel order must be 2 or 3, got {p}")
    if not alpha > 0.0:
        raise DomainError(f"Newton-Cotes rule requires alpha > 0, got {alpha!r}")
    n = signal.grid.n
    if n < p:
        raise AlignmentError(f"{n} samples cannot hold a {p}-point panel")
    if (n - 1) % (p - 1) != 0:
        raise AlignmentError(
            f"{n - 1} steps do not tile into panels of {p - 1} steps"
        )
    dt = signal.grid.dt
    f = signal.values
    inv_gamma = 1.0 / gamma(alpha)
    out = np.zeros(n)
    for m in range(1, n):
        if p == 2:
            starts = np.arange(m)
            widths = np.ones(m, dtype=int)
        elif m % 2 == 0:
            starts = np.arange(0, m, 2)
            widths = np.full(len(starts), 2)
        else:
            # odd node: a single-step leading panel interpolated on nodes
            # (0, 1, 2), then full two-step panels tiling [t_1, t_m]
            starts = np.concatenate(([0], np.arange(1, m, 2)))
            widths = np.full(len(starts), 2)
            widths[0] = 1
        node_sets = np.stack([starts + i for i in range(p)])
        out[m] = inv_gamma * _panel_contributions(
            f, dt, alpha, m, starts, widths, node_sets)
    return signal.replace_values(out)


def _panel_contributions(f, dt, alpha, m, starts, widths, node_sets):
    """Sum of Lagrange-panel moment integrals for output node ``m``."""
    t_n = m * dt
    a = starts * dt
    b = (starts + widths) * dt
    p = node_sets.shape[0]
    # monomial moments S_q = int_a^b t'^q (t_n - t')^(alpha-1) dt', q < p
    power_ints = np.stack([
        _power_integral(t_n - b, t_n - a, alpha + i) for i in range(p)
    ])
    # t'^q expanded binomially as (t_n - u)^q with u = t_n - t'
    moments = np.empty_like(power_ints)
    for q in range(p):
        acc = np.zeros(len(starts))
        sign = 1.0
        for i in range(q + 1):
            acc += sign * math.comb(q, i) * t_n**(q - i) * power_ints[i]
            sign = -sign
        moments[q] = acc
    # Lagrange basis coefficients per panel in global monomials
    node_times = node_sets * dt
    total = 0.0
    for j in range(p):
        coeffs = _lagrange_coeffs(node_times, j)
        contribution = np.zeros(len(starts))
        for q in range(p):
            contribution += coeffs[q] * moments[q]
        total += float(np.dot(f[node_sets[j]], contribution))
    return total


def _power_integral(lo: np.ndarray, hi: np.ndarray,
                    beta: float) -> np.ndarray:
    """``int_lo^hi u^(beta-1) du`` evaluated without subtractive loss.

    ``0 <= lo < hi``; uses ``hi^beta * (-expm1(beta * log(lo / hi)))`` so
    nearby limits keep full relative accuracy.
    """
    hi_pow = hi**beta
    out = np.empty_like(hi_pow)
    zero = lo <= 0.0
    out[zero] = hi_pow[zero]
    nz = ~zero
    out[nz] = hi_pow[nz] * -np.expm1(beta * np.log(lo[nz] / hi[nz]))
    return out / beta


def _lagrange_coeffs(node_times: np.ndarray, j: int) -> np.ndarray:
    """Monomial coefficients of the j-th Lagrange basis polynomial.

    ``node_times`` has shape (p, n_panels); returns shape (p, n_panels)
    with row q the coefficient of ``t^q``.
    """
    p = node_times.shape[0]
    others = [i for i in range(p) if i != j]
    denom = np.ones(node_times.shape[1])
    for i in others:
        denom *= node_times[j] - node_times[i]
    coeffs = np.zeros_like(node_times)
    if p == 2:
        x0 = node_times[others[0]]
        coeffs[0] = -x0
        coeffs[1] = 1.0
    else:
        x0, x1 = node_times[others[0]], node_times[others[1]]
        coeffs[0] = x0 * x1
        coeffs[1] = -(x0 + x1)
        coeffs[2] = 1.0
    return coeffs / denom


def short_memory_integral(
    signal: SampledSignal,
    weights: WeightSequence,
    memory_length: int,
    method: str = "direct",
) -> SampledSignal:
    """Fractional integral with the convolution tail cut at ``memory_length``.

    Keeps only the newest ``memory_length`` kernel terms of each output
    node; with ``memory_length == grid.n`` this is the same code path as
    :func:`frac_integral` and produces bitwise-equal results.  Truncation
    is only safe when the weights decay (derivative-type kernels).
    """
    n = signal.grid.n
    if not 1 <= memory_length <= n:
        raise DomainError(
            f"memory length must be in [1, {n}], got {memory_length}"
        )
    _check_compatibility(signal, weights)
    truncated = weights.truncated(memory_length)
    out = _convolve_by_convention(signal.values, truncated, method)
    return signal.replace_values(out)
