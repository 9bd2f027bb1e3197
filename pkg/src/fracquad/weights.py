"""Convolution-quadrature weight generation.

All supported rules reduce to a discrete causal convolution

    I[f](t_n)  ~=  sum_k  f_k * w_(n-k)

on a uniform grid, and differ only in how the weight sequence ``w`` is
produced:

``Scheme.GL``
    Fractional implicit Euler / Grunwald-Letnikov weights, the power-series
    coefficients of ``(1 - z)^(-alpha)`` scaled by ``dt^alpha``.  Generated
    by a multiplicative recurrence, so the sequence stays finite for any
    length (no factorials are ever formed).
``Scheme.NC0``
    Zero-order Newton-Cotes (piecewise-constant product rule) panel weights
    ``dt^alpha / Gamma(alpha+1) * ((k+1)^alpha - k^alpha)``.
``Scheme.FLMM_TRAP``
    Fractional trapezoidal linear multistep weights, the series coefficients
    of ``((1 + z) / (2 (1 - z)))^alpha``.

The generic :func:`flmm_weights` raises an arbitrary implicit multistep
method ``(rho, sigma)`` to a real power via series division followed by the
J.C.P. Miller recurrence.  Starting-weight corrections that restore
polynomial exactness near the origin are provided by
:func:`starting_weight_row` / :func:`starting_weight_table`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import (
    DegenerateMethodError,
    DomainError,
    SingularSystemError,
)
from .special import gamma

__all__ = [
    "Scheme",
    "WeightSequence",
    "StartingWeights",
    "TRAPEZOID_RHO",
    "TRAPEZOID_SIGMA",
    "gl_weights",
    "nc0_weights",
    "flmm_weights",
    "weights_for_scheme",
    "starting_weight_row",
    "starting_weight_table",
]


class Scheme(enum.Enum):
    """Supported quadrature weight families."""

    GL = "gl"
    NC0 = "nc0"
    FLMM_TRAP = "flmm-trap"

    @property
    def panel_based(self) -> bool:
        """True when the rule convolves panel values ``f_0 .. f_(n-1)``
        instead of node values ``f_0 .. f_n``."""
        return self is Scheme.NC0


#: Generating polynomials (ascending powers of zeta) of the implicit
#: trapezoidal method ``y_n = y_(n-1) + dt/2 (f_n + f_(n-1))``.
TRAPEZOID_RHO: tuple[float, ...] = (-1.0, 1.0)
TRAPEZOID_SIGMA: tuple[float, ...] = (0.5, 0.5)

_EULER_RHO: tuple[float, ...] = (-1.0, 1.0)
_EULER_SIGMA: tuple[float, ...] = (0.0, 1.0)


@dataclass(frozen=True)
class WeightSequence:
    """Weights of one (scheme, alpha, dt) convolution rule.

    ``alpha`` is the integral order; a negative value marks the
    derivative-role variant (order ``-alpha`` derivative), available for the
    GL family through the ``(1-z)^(-alpha)`` duality.
    """

    scheme: Scheme
    alpha: float
    dt: float
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def truncated(self, length: int) -> "WeightSequence":
        """First ``length`` weights as a new sequence (short-memory use)."""
        if not 1 <= length <= len(self.values):
            raise DomainError(
                f"truncation length must be in [1, {len(self.values)}], "
                f"got {length}"
            )
        return WeightSequence(self.scheme, self.alpha, self.dt,
                              self.values[:length])


@dataclass(frozen=True)
class StartingWeights:
    """Per-node correction weights restoring exactness on ``t^0 .. t^s``.

    ``table[n, j]`` multiplies the sample ``f_j`` (corrections are attached
    to the first ``s + 1`` grid nodes) and already carries the ``dt^alpha``
    scale of the parent weight sequence.
    """

    degree: int
    dt: float
    alpha: float
    table: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        table = np.asarray(self.table, dtype=float)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)


def _validate_common(dt: float, n: int) -> None:
    if not dt > 0.0:
        raise DomainError(f"grid step must be positive, got {dt!r}")
    if n < 1:
        raise DomainError(f"weight count must be >= 1, got {n}")


def gl_weights(alpha: float, dt: float, n: int) -> WeightSequence:
    """Grunwald-Letnikov weights ``dt^alpha (-1)^k C(-alpha, k)``.

    ``alpha > 0`` generates the order-``alpha`` integral rule; ``alpha < 0``
    generates the order-``|alpha|`` derivative rule (same recurrence, order
    negated).  The coefficient ratio ``w_k / w_(k-1) = (k - 1 + alpha) / k``
    makes the whole sequence a single cumulative product.
    """
    _validate_common(dt, n)
    alpha = float(alpha)
    if alpha == 0.0:
        raise DomainError("order 0 has no weight rule; it is the identity")
    values = np.empty(n)
    values[0] = 1.0
    if n > 1:
        k = np.arange(1.0, n)
        np.cumprod((k - 1.0 + alpha) / k, out=values[1:])
    values *= dt**alpha
    return WeightSequence(Scheme.GL, alpha, dt, values)


def nc0_weights(alpha: float, dt: float, n: int) -> WeightSequence:
    """Zero-order Newton-Cotes panel weights
    ``dt^alpha / Gamma(alpha+1) * ((k+1)^alpha - k^alpha)``.

    The bracket is evaluated as ``k^alpha * expm1(alpha * log1p(1/k))`` so
    no digits are lost to cancellation at large ``k``.
    """
    _validate_common(dt, n)
    alpha = float(alpha)
    if not alpha > 0.0:
        raise DomainError(f"NC0 weights require alpha > 0, got {alpha!r}")
    values = np.empty(n)
    values[0] = 1.0
    if n > 1:
        k = np.arange(1.0, n)
        values[1:] = np.exp(alpha * np.log(k)) * np.expm1(alpha * np.log1p(1.0 / k))
    values *= dt**alpha / gamma(alpha + 1.0)
    return WeightSequence(Scheme.NC0, alpha, dt, values)


def flmm_weights(
    numerator: Sequence[float],
    denominator: Sequence[float],
    alpha: float,
    dt: float,
    n: int,
    scheme: Scheme = Scheme.FLMM_TRAP,
) -> WeightSequence:
    """Fractional linear multistep weights for a method ``(rho, sigma)``.

    Parameters
    ----------
    numerator, denominator : sequence of float
        Coefficients of ``sigma`` and ``rho`` in ascending powers of zeta.
        The weight generating function is ``w(z) = sigma(1/z) / rho(1/z)``
        and the returned values are ``dt^alpha`` times the series
        coefficients of ``w(z)^alpha``.
    scheme : Scheme
        Tag recorded on the result; controls the convolution convention
        used downstream.

    The power series of the rational part comes from long division; the
    ``alpha``-th power from the J.C.P. Miller recurrence

        v_0 = u_0^alpha,
        v_m = (1 / (m u_0)) sum_{k=1..m} (k (alpha + 1) - m) u_k v_(m-k).

    Raises
    ------
    DegenerateMethodError
        If ``u_0 = 0``, i.e. the method is explicit and unusable here.
    """
    _validate_common(dt, n)
    alpha = float(alpha)
    num = _reversed_padded(numerator)
    den = _reversed_padded(denominator)
    if len(num) != len(den):
        longer = max(len(num), len(den))
        num = np.pad(num, (longer - len(num), 0))
        den = np.pad(den, (longer - len(den), 0))
    if den[0] == 0.0:
        raise DegenerateMethodError(
            "rho(1/z) normalization has no constant term; the method "
            "cannot define a weight series"
        )
    u = _series_divide(num, den, n)
    if u[0] == 0.0:
        raise DegenerateMethodError(
            "w(z) has no constant term (explicit method); fractional "
            "multistep rules must be implicit"
        )
    v = _series_power(u, alpha, n)
    v *= float(dt)**alpha
    return WeightSequence(scheme, alpha, dt, v)


def _reversed_padded(coeffs: Sequence[float]) -> np.ndarray:
    arr = np.asarray(list(coeffs), dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("generating polynomial needs >= 1 coefficient")
    # zeta -> 1/z followed by clearing z powers == coefficient reversal
    return arr[::-1].copy()


def _series_divide(num: np.ndarray, den: np.ndarray, n: int) -> np.ndarray:
    """First ``n`` coefficients of the power series ``num(z) / den(z)``."""
    out = np.zeros(n, dtype=np.longdouble)
    d0 = np.longdouble(den[0])
    for m in range(n):
        acc = np.longdouble(num[m]) if m < len(num) else np.longdouble(0.0)
        jmax = min(m, len(den) - 1)
        for j in range(1, jmax + 1):
            acc -= den[j] * out[m - j]
        out[m] = acc / d0
    return out


def _series_power(u: np.ndarray, alpha: float, n: int) -> np.ndarray:
    """First ``n`` coefficients of ``u(z)^alpha`` via Miller's recurrence.

    The bracket pairs large terms of opposite sign, so the recurrence runs
    in extended precision and rounds to binary64 once at the end.
    """
    v = np.empty(n, dtype=np.longdouble)
    u = np.asarray(u, dtype=np.longdouble)
    alpha = np.longdouble(alpha)
    u0 = u[0]
    v[0] = u0**alpha
    ku = np.arange(len(u)) * u
    for m in range(1, n):
        us = u[1: m + 1]
        kus = ku[1: m + 1]
        vs = v[m - 1:: -1]
        v[m] = ((alpha + 1.0) * np.dot(kus, vs) - m * np.dot(us, vs)) / (m * u0)
    return v.astype(float)


def weights_for_scheme(scheme: Scheme, alpha: float, dt: float,
                       n: int) -> WeightSequence:
    """Generate weights for any supported scheme tag."""
    if scheme is Scheme.GL:
        return gl_weights(alpha, dt, n)
    if scheme is Scheme.NC0:
        return nc0_weights(alpha, dt, n)
    if scheme is Scheme.FLMM_TRAP:
        if alpha == 0.0:
            raise DomainError("order 0 has no weight rule; it is the identity")
        return flmm_weights(TRAPEZOID_SIGMA, TRAPEZOID_RHO, alpha, dt, n)
    raise DomainError(f"unknown scheme {scheme!r}")


def euler_flmm_weights(alpha: float, dt: float, n: int) -> WeightSequence:
    """Implicit-Euler multistep weights; coincide with :func:`gl_weights`."""
    return flmm_weights(_EULER_SIGMA, _EULER_RHO, alpha, dt, n,
                        scheme=Scheme.GL)


def _monomial_defects(weights: WeightSequence, s: int,
                      n_max: int) -> np.ndarray:
    """Defect of the bare rule on ``t^q`` (dt-scaled units) for q = 0..s.

    Returns an array ``d[q, n] = Gamma(q+1)/Gamma(q+1+alpha) n^(q+alpha)
    - sum_k w_k (n-k)^q`` for every node n up to ``n_max`` (inclusive).
    """
    alpha = weights.alpha
    omega = weights.values[: n_max + 1] / weights.dt**alpha
    nodes = np.arange(n_max + 1, dtype=float)
    defects = np.empty((s + 1, n_max + 1))
    for q in range(s + 1):
        seq = nodes**q
        if q == 0:
            seq = np.ones_like(nodes)
        exact = (gamma(q + 1.0) / gamma(q + 1.0 + alpha)) * nodes**(q + alpha)
        base = np.convolve(omega, seq)[: n_max + 1]
        defects[q] = exact - base
    return defects


def starting_weight_row(weights: WeightSequence, s: int,
                        n: int) -> np.ndarray:
    """Correction weights ``mu_(n,0..s)`` for grid node ``n``.

    Solves the (s+1) x (s+1) system ``sum_j mu_nj j^q = defect(q, n)``
    (q = 0..s) so that the corrected rule integrates every monomial up to
    degree ``s`` exactly at node ``n``.  The returned row carries the
    ``dt^alpha`` scale of the parent weights.
    """
    _check_starting_args(weights, s)
    if n < s:
        raise DomainError(f"node index must satisfy n >= s, got n={n}, s={s}")
    if len(weights.values) < n + 1:
        raise DomainError(
            f"weight sequence of length {len(weights.values)} cannot "
            f"correct node {n}"
        )
    row = _solve_rows(_monomial_defects(weights, s, n)[:, n: n + 1], s)[0]
    return row * weights.dt**weights.alpha


def starting_weight_table(weights: WeightSequence, s: int) -> StartingWeights:
    """Correction table for every node of the parent weight sequence.

    Nodes ``n < s`` get a reduced-degree correction (exactness on
    ``t^0 .. t^n`` only), since the rule at node n sees no later samples.
    """
    _check_starting_args(weights, s)
    n_max = len(weights.values) - 1
    defects = _monomial_defects(weights, s, n_max)
    table = np.zeros((n_max + 1, s + 1))
    full_nodes = np.arange(s, n_max + 1)
    if full_nodes.size:
        table[s:] = _solve_rows(defects[:, s:], s)
    for n in range(min(s, n_max + 1)):
        deg = n
        table[n, : deg + 1] = _solve_rows(
            defects[: deg + 1, n: n + 1], deg)[0]
    table *= weights.dt**weights.alpha
    return StartingWeights(s, weights.dt, weights.alpha, table)


def _check_starting_args(weights: WeightSequence, s: int) -> None:
    if weights.scheme.panel_based:
        raise DomainError(
            "starting corrections are defined for the convolution-"
            "quadrature schemes (GL / FLMM), not panel rules"
        )
    if not 0 <= s <= 3:
        raise DomainError(f"correction degree must be in 0..3, got {s}")
    if not weights.alpha > 0:
        raise DomainError("starting corrections apply to integral orders")


def _solve_rows(defect_cols: np.ndarray, s: int) -> np.ndarray:
    """Solve ``V mu = defect`` for each column; V[q, j] = j^q, 0^0 = 1."""
    j = np.arange(s + 1, dtype=float)
    vander = np.vstack([np.ones(s + 1) if q == 0 else j**q
                        for q in range(s + 1)])
    try:
        sol = np.linalg.solve(vander, defect_cols)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"starting-weight system of degree {s} is singular"
        ) from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystemError(
            f"starting-weight system of degree {s} produced non-finite "
            "corrections"
        )
    return sol.T
