"""Convolution quadrature weights and discrete convolutions.

The weights of the fractional-power operator are the Taylor coefficients of
``(delta(xi)/tau)**alpha`` where ``delta`` is the generating quotient of the
underlying multistep method (backward Euler or the second-order backward
difference). The primary path computes them with the power-series power
recurrence; an FFT-based evaluation of the same generating function is kept
as a validation oracle.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CqRule:
    """Generating quotient delta(xi) of a linear multistep method."""

    kind: str
    delta_coeffs: tuple

    def delta(self, xi):
        out = np.zeros_like(np.asarray(xi, dtype=complex))
        for j, a in enumerate(self.delta_coeffs):
            out = out + a * np.asarray(xi) ** j
        return out


BE = CqRule("BE", (1.0, -1.0))
SBD = CqRule("SBD", (1.5, -2.0, 0.5))

_RULES = {"BE": BE, "SBD": SBD}


def get_rule(kind):
    try:
        return _RULES[kind.upper()]
    except KeyError:
        raise ValueError(f"unknown quadrature rule {kind!r}") from None


@dataclass(frozen=True)
class CqWeights:
    rule: CqRule
    alpha: float
    tau: float
    weights: np.ndarray

    @property
    def N(self):
        return len(self.weights) - 1


def _series_power(coeffs, alpha, n_terms):
    """Taylor coefficients of p(xi)**alpha via the power recurrence.

    With p = sum a_j xi^j and a_0 > 0:
        q_0 = a_0**alpha,
        q_n = (n a_0)^-1 sum_{j=1}^{min(n,deg)} ((alpha+1) j - n) a_j q_{n-j}.
    """
    a = np.asarray(coeffs, dtype=float)
    if a[0] <= 0.0:
        raise ValueError("invalid generating polynomial")
    deg = len(a) - 1
    q = np.zeros(n_terms)
    q[0] = a[0] ** alpha
    for n in range(1, n_terms):
        jmax = min(n, deg)
        js = np.arange(1, jmax + 1)
        q[n] = np.sum(((alpha + 1.0) * js - n) * a[1 : jmax + 1] * q[n - js]) / (
            n * a[0]
        )
    return q


@functools.lru_cache(maxsize=256)
def _cached_weights(delta_coeffs, alpha, tau, N):
    q = _series_power(delta_coeffs, alpha, N + 1)
    w = q * tau ** (-alpha)
    w.flags.writeable = False
    return w


def cq_weights(rule, alpha, tau, N):
    """Quadrature weights of (delta(xi)/tau)**alpha, indices 0..N."""
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    if N < 0:
        raise ValueError("N must be nonnegative")
    w = _cached_weights(tuple(rule.delta_coeffs), float(alpha), float(tau), int(N))
    return CqWeights(rule, float(alpha), float(tau), w)


def cq_weights_fft(rule, alpha, tau, N):
    """Same weights via sampling the generating function on a scaled circle.

    Evaluates (delta(xi)/tau)**alpha on 2(N+1) roots of unity of radius
    rho < 1 and inverts the transform. Round-off limits the accuracy of the
    tiny high-index weights, so this path serves as a cross-check, not as
    the production route.
    """
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    # oversample: aliasing decays like rho**L while round-off grows like
    # rho**-N, so a mild radius plus a long transform beats the balanced
    # sqrt(eps) choice by several orders
    L = 1 << max(4, int(np.ceil(np.log2(16 * (N + 1)))))
    rho = 0.1 ** (1.0 / max(N, 1))
    m = np.arange(L)
    xi = rho * np.exp(2j * np.pi * m / L)
    vals = (rule.delta(xi) / tau) ** alpha
    # forward transform recovers Taylor coefficients: c_j = (1/L) sum f(xi_m) xi_m^{-j}
    coeffs = np.fft.fft(vals)[: N + 1] / L
    w = coeffs.real / rho ** np.arange(N + 1)
    w.flags.writeable = False
    return CqWeights(rule, float(alpha), float(tau), w)


def cq_apply(w, g, n):
    """Discrete convolution sum_{j=0}^{n} w_j g_{n-j}.

    ``g`` holds the samples g_0..g_n (at least); entries may be scalars or
    coefficient vectors stacked along axis 0.
    """
    if n > w.N:
        raise ValueError(f"index {n} exceeds weight table length {w.N}")
    g = np.asarray(g, dtype=float)
    if g.shape[0] < n + 1:
        raise ValueError("sample sequence shorter than n+1")
    rev = g[n::-1]
    return np.tensordot(w.weights[: n + 1], rev, axes=(0, 0))
