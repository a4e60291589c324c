"""Hermite polynomials at complex argument and the two holomorphic systems.

``psi_s`` evaluates the normalised holomorphic Hermite functions

    psi_n(z) = b_nn^{-1/2} e^{-z^2/2} H_n(z),

via a recurrence that propagates the *normalised* polynomial
b_nn^{-1/2} H_n directly (the diagonal constants grow factorially, so
normalising after the fact would overflow long before n = 512).

``psi_n_ellipse`` evaluates the elliptic system

    Psi_n(z) = { e^{lam z^2/2} (d/dz)^n e^{-lam z^2/2} } Psi_0(z),
    Psi_0(z) = exp(mu z^2 / 4),

through the closed form (-1)^n (lam/2)^{n/2} H_n(sqrt(lam/2) z) Psi_0(z).
The square root uses the principal branch; the parity H_n(-w) =
(-1)^n H_n(w) makes the result branch-independent, and
``rodrigues_oracle`` (a Cauchy-integral n-th derivative) provides an
independent check of the whole closed form.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericalError, ParameterError
from .params import EllipseParams, HermiteNormalization, SParam

_MAX_HERMITE = 512
_MAX_ELLIPSE = 64
_MAX_ORACLE = 20


def _as_array(z) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z)
    return arr, arr.ndim == 0


def _check_degree(n: int, limit: int) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ParameterError(f"degree must be an integer, got {n!r}")
    if n < 0 or n > limit:
        raise ParameterError(f"degree must lie in [0, {limit}], got {n}")


def hermite_poly(n: int, z):
    """Physicists' Hermite polynomial H_n by the three-term recurrence."""
    _check_degree(n, _MAX_HERMITE)
    arr, scalar = _as_array(z)
    h_prev = np.ones_like(arr, dtype=arr.dtype if arr.dtype.kind == "c" else float)
    if n == 0:
        out = h_prev
    else:
        h = 2.0 * arr
        for k in range(1, n):
            h, h_prev = 2.0 * arr * h - 2.0 * k * h_prev, h
        out = h
    if not np.all(np.isfinite(out)):
        raise NumericalError(f"H_{n} overflowed at |z| ~ {np.max(np.abs(arr)):.3g}")
    return out[()] if scalar else out


def hermite_function(n: int, x):
    """Orthonormal Hermite function h_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}."""
    _check_degree(n, _MAX_HERMITE)
    arr, scalar = _as_array(x)
    h_prev = np.full_like(np.asarray(arr, dtype=float), math.pi**-0.25)
    if n == 0:
        out = h_prev
    else:
        h = arr * math.sqrt(2.0) * h_prev
        for k in range(1, n):
            h, h_prev = (
                arr * math.sqrt(2.0 / (k + 1)) * h - math.sqrt(k / (k + 1.0)) * h_prev,
                h,
            )
        out = h
    out = out * np.exp(-np.asarray(arr, dtype=float) ** 2 / 2.0)
    return out[()] if scalar else out


def _normalized_hermite(n: int, s: SParam, z: np.ndarray) -> np.ndarray:
    """b_nn(s)^{-1/2} H_n(z) via the normalised recurrence (no overflow)."""
    gamma = 2.0 * (1.0 + s.s) / (1.0 - s.s)
    a0 = math.sqrt((1.0 - s.s) / (math.pi * math.sqrt(s.s)))
    p_prev = np.full_like(z, a0, dtype=complex)
    if n == 0:
        return p_prev
    p = 2.0 * z / math.sqrt(gamma) * p_prev
    for k in range(1, n):
        p, p_prev = (
            2.0 * z / math.sqrt(gamma * (k + 1)) * p
            - (2.0 / gamma) * math.sqrt(k / (k + 1.0)) * p_prev,
            p,
        )
    return p


def psi_s(n: int, s: SParam, z):
    """Holomorphic Hermite function psi_n of the weighted space."""
    _check_degree(n, _MAX_HERMITE)
    arr, scalar = _as_array(z)
    arr = np.asarray(arr, dtype=complex)
    out = np.exp(-arr**2 / 2.0) * _normalized_hermite(n, s, arr)
    if not np.all(np.isfinite(out)):
        raise NumericalError(
            f"psi_{n} overflowed at |Im z| ~ {np.max(np.abs(arr.imag)):.3g}"
        )
    return out[()] if scalar else out


def psi_s_all(n_max: int, s: SParam, z) -> np.ndarray:
    """psi_0..psi_{n_max} stacked along the first axis (shared recurrence)."""
    _check_degree(n_max, _MAX_HERMITE)
    arr = np.asarray(z, dtype=complex)
    gamma = 2.0 * (1.0 + s.s) / (1.0 - s.s)
    a0 = math.sqrt((1.0 - s.s) / (math.pi * math.sqrt(s.s)))
    gauss = np.exp(-arr**2 / 2.0)
    out = np.empty((n_max + 1,) + arr.shape, dtype=complex)
    p_prev = np.full_like(arr, a0, dtype=complex)
    out[0] = p_prev * gauss
    if n_max == 0:
        return out
    p = 2.0 * arr / math.sqrt(gamma) * p_prev
    out[1] = p * gauss
    for k in range(1, n_max):
        p, p_prev = (
            2.0 * arr / math.sqrt(gamma * (k + 1)) * p
            - (2.0 / gamma) * math.sqrt(k / (k + 1.0)) * p_prev,
            p,
        )
        out[k + 1] = p * gauss
    if not np.all(np.isfinite(out)):
        raise NumericalError("psi sequence overflowed")
    return out


def b_nn(n: int, s: SParam) -> float:
    """Diagonal normalisation constant of the holomorphic Hermite system."""
    return HermiteNormalization(n=n, s=s).b_nn


def ellipse_params(alpha: float, beta: float) -> EllipseParams:
    """Validated parameter pack for the elliptic system."""
    return EllipseParams(alpha=alpha, beta=beta)


def zeta_map(p: EllipseParams, z):
    """Linear map z -> alpha x + i (beta x + xi) for z = x + i xi."""
    c1, c2 = p.zeta_coeffs
    arr, scalar = _as_array(z)
    arr = np.asarray(arr, dtype=complex)
    out = c1 * arr + c2 * np.conj(arr)
    return out[()] if scalar else out


def psi0_ellipse(p: EllipseParams, z):
    """Ground function Psi_0(z) = exp(mu z^2 / 4) of the elliptic system."""
    arr, scalar = _as_array(z)
    arr = np.asarray(arr, dtype=complex)
    out = np.exp(p.mu * arr**2 / 4.0)
    return out[()] if scalar else out


def psi_n_ellipse(n: int, p: EllipseParams, z):
    """Elliptic system member Psi_n via the closed Hermite form."""
    _check_degree(n, _MAX_ELLIPSE)
    arr, scalar = _as_array(z)
    arr = np.asarray(arr, dtype=complex)
    w = np.sqrt(complex(p.lam) / 2.0)  # principal branch; parity cancels the sign
    out = (-1.0) ** n * w**n * hermite_poly(n, w * arr) * np.exp(p.mu * arr**2 / 4.0)
    if not np.all(np.isfinite(out)):
        raise NumericalError(f"Psi_{n} overflowed at |z| ~ {np.max(np.abs(arr)):.3g}")
    return out[()] if scalar else out


def rodrigues_oracle(n: int, lam: complex, z):
    """e^{lam z^2/2} (d/dz)^n e^{-lam z^2/2} by a Cauchy-integral derivative.

    The n-th derivative is taken on the unit circle around z with
    64 (n+1) trapezoid points; for an entire integrand the trapezoid
    rule on a circle is spectrally accurate, which makes this an
    independent check of the closed Hermite form used by
    ``psi_n_ellipse``.
    """
    _check_degree(n, _MAX_ORACLE)
    arr, scalar = _as_array(z)
    arr = np.asarray(arr, dtype=complex)
    m = 64 * (n + 1)
    theta = 2.0 * math.pi * np.arange(m) / m
    ring = np.exp(1j * theta)
    w = arr[..., None] + ring
    samples = np.exp(-lam * w**2 / 2.0) * np.exp(-1j * n * theta)
    deriv = math.factorial(n) / m * samples.sum(axis=-1)
    out = np.exp(lam * arr**2 / 2.0) * deriv
    return out[()] if scalar else out
