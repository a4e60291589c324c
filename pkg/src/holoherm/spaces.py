"""Weighted measures, inner products, Gram matrices and kernels.

Three weighted measures e^{E(z)} L(dz) appear:

* the weighted holomorphic space with
  E(z) = -(1-s^2)/(2s) |z|^2 + (1+s^2)/(4s) (z^2 + conj(z)^2),
  which reduces to s x^2 - y^2/s and therefore *grows* along the real
  axis -- integrability always comes from the members' own decay;
* the standard Segal-Bargmann weight E(z) = -|z|^2/2;
* the quadratic-phase weight E(z) = -2 Phi(z) attached to a phase
  triple (a, b, c).

Weighted integrands are assembled by splitting the measure exponent
evenly across the two factors, f e^{E/2} times conj(g) e^{E/2}.  Each
half-weighted factor is bounded whenever the declared envelope is
valid, so no intermediate overflows; factors that underflow to exact
zero are kept at zero (their true contribution is below the envelope
tail and thus negligible).

Kernel convention: two-argument kernels conjugate their second argument
internally, so K(z, zeta) is Hermitian in the usual sense and
apply_kernel(K, ...) computes integral K(z, zeta) F(zeta) e^{E(zeta)} L(d zeta).
The bilinear phase polarisation ``psi_kernel`` is the literal form; the
projection kernels are built from it with the conjugation applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConsistencyError, NumericalError, ParameterError
from .hermite import psi_s_all
from .params import PhaseParams, SParam
from .quadrature import (
    PlanarGrid,
    _cascade_sum,
    _symmetric_pair_sum,
    envelope_for,
    planar_grid,
)

_GRAM_MAX = 24


def phi_weight(p: PhaseParams, z):
    """Real weight exponent Phi(z) of a phase triple.

    The defining combination is real by construction; the imaginary
    residual is asserted below 1e-10 and discarded.
    """
    arr = np.asarray(z, dtype=complex)
    im_c = complex(p.c).imag
    val = (
        np.abs(p.b * arr) ** 2 / (4.0 * im_c)
        - (p.b**2 * arr**2 + np.conj(p.b) ** 2 * np.conj(arr) ** 2) / (8.0 * im_c)
        - (p.a * arr**2 - np.conj(p.a) * np.conj(arr) ** 2) / 4j
    )
    residual = float(np.max(np.abs(val.imag))) if val.size else 0.0
    if residual >= 1e-10:
        raise ConsistencyError(
            f"phase weight picked up an imaginary part ({residual:.3e})"
        )
    out = val.real
    return out[()] if np.ndim(z) == 0 else out


@dataclass(frozen=True)
class WeightSpec:
    """Which weighted measure a computation lives in."""

    variant: Literal["xs", "bargmann", "phi"]
    s: SParam | None = None
    phase: PhaseParams | None = None

    def __post_init__(self) -> None:
        if self.variant == "xs" and self.s is None:
            raise ParameterError("xs weight requires an SParam")
        if self.variant == "phi" and self.phase is None:
            raise ParameterError("phi weight requires a PhaseParams")
        if self.variant not in ("xs", "bargmann", "phi"):
            raise ParameterError(f"unknown weight variant {self.variant!r}")

    def exponent(self, z) -> np.ndarray:
        """E(z) such that the measure is e^{E(z)} L(dz)."""
        arr = np.asarray(z, dtype=complex)
        if self.variant == "xs":
            s = self.s.s
            out = s * arr.real**2 - arr.imag**2 / s
        elif self.variant == "bargmann":
            out = -0.5 * (arr.real**2 + arr.imag**2)
        else:
            out = -2.0 * phi_weight(self.phase, arr)
        return out[()] if np.ndim(z) == 0 else out

    def exponent_quadratic(self) -> tuple[float, float, float]:
        """Coefficients (A, B, C) of E = A x^2 + B y^2 + C x y."""
        if self.variant == "xs":
            return (self.s.s, -1.0 / self.s.s, 0.0)
        if self.variant == "bargmann":
            return (-0.5, -0.5, 0.0)
        a = float(self.exponent(1.0 + 0.0j))
        b = float(self.exponent(0.0 + 1.0j))
        c = float(self.exponent(1.0 + 1.0j)) - a - b
        return (a, b, c)


def xs_weight(s: SParam) -> WeightSpec:
    return WeightSpec(variant="xs", s=s)


def bargmann_weight() -> WeightSpec:
    return WeightSpec(variant="bargmann")


def phi_weight_spec(p: PhaseParams) -> WeightSpec:
    return WeightSpec(variant="phi", phase=p)


def weight_exponent(spec: WeightSpec, z):
    """Real exponent E(z) of the measure e^{E(z)} L(dz)."""
    return spec.exponent(z)


def half_weighted(values: np.ndarray, half_exponent: np.ndarray) -> np.ndarray:
    """values * exp(half_exponent), treating underflowed values as exact zeros.

    Where ``values`` is exactly zero the integrand has decayed below the
    representable range; the true term there is bounded by the envelope
    tail, so pinning it to zero is safe.  Anywhere else a non-finite
    product is allowed to propagate -- it signals a violated envelope.
    """
    values = np.asarray(values, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        out = values * np.exp(half_exponent)
        return np.where(values == 0, 0.0 + 0.0j, out)


def weighted_grid(spec: WeightSpec, decay_hint: tuple[float, float], nodes: int) -> PlanarGrid:
    """Planar grid matched to the weight and a declared integrand profile."""
    return planar_grid(nodes, envelope_for(spec, decay_hint, nodes=nodes))


_grid_for = weighted_grid


def pair_integral(left: np.ndarray, right: np.ndarray, grid: PlanarGrid) -> complex:
    """Quadrature sum of left * right over the grid (both already half-weighted)."""
    terms = left * right * grid.multipliers
    bad = ~np.isfinite(terms)
    if bad.any():
        j, i = np.unravel_index(int(np.argmax(bad)), terms.shape)
        raise NumericalError(
            f"non-finite weighted integrand at grid point ({j}, {i}), "
            f"z = {grid.zmesh[j, i]}"
        )
    return complex(_symmetric_pair_sum(_symmetric_pair_sum(terms, axis=1), axis=0))


_integrate_pair = pair_integral


def inner_product(
    f, g, spec: WeightSpec, decay_hint: tuple[float, float], nodes: int = 201
) -> complex:
    """(f, g) = integral f(z) conj(g(z)) e^{E(z)} L(dz).

    ``decay_hint`` = (dx, dy) declares the decay e^{-dx x^2 - dy y^2}
    of f conj(g) itself (weight excluded).
    """
    grid = _grid_for(spec, decay_hint, nodes)
    half = 0.5 * spec.exponent(grid.zmesh)
    f_half = half_weighted(np.asarray(f(grid.zmesh)), half)
    g_half = half_weighted(np.asarray(g(grid.zmesh)), half)
    return _integrate_pair(f_half, np.conj(g_half), grid)


@dataclass(frozen=True)
class GramReport:
    """Gram matrix of a finite family with summary residuals."""

    dimension: int
    matrix: np.ndarray
    max_offdiag: float
    max_diag_dev: float

    def __post_init__(self) -> None:
        g = self.matrix
        scale = max(1.0, float(np.max(np.abs(g)))) if g.size else 1.0
        herm = float(np.max(np.abs(g - g.conj().T))) if g.size else 0.0
        if herm > 1e-12 * scale:
            raise ConsistencyError(f"Gram matrix is not Hermitian ({herm:.3e})")

    def offdiag_relative(self) -> float:
        """Largest |G_mn| / sqrt(G_mm G_nn) over m != n.

        The natural scale for a family that is orthogonal but not
        normalised.
        """
        g = self.matrix
        if self.dimension < 2:
            return 0.0
        d = np.sqrt(np.abs(np.diag(g)))
        rel = np.abs(g) / np.outer(d, d)
        np.fill_diagonal(rel, 0.0)
        return float(np.max(rel))


def gram_matrix(
    family,
    n_members: int,
    spec: WeightSpec,
    decay_hint: tuple[float, float],
    nodes: int = 201,
    target_diagonal: float | None = None,
) -> GramReport:
    """Gram matrix G_mn = (family(m), family(n)) on a shared grid."""
    if not 1 <= n_members <= _GRAM_MAX:
        raise ParameterError(f"family size must lie in [1, {_GRAM_MAX}]")
    grid = _grid_for(spec, decay_hint, nodes)
    half = 0.5 * spec.exponent(grid.zmesh)
    halves = [
        half_weighted(np.asarray(family(n)(grid.zmesh)), half)
        for n in range(n_members)
    ]
    g = np.empty((n_members, n_members), dtype=complex)
    for m in range(n_members):
        for n in range(m, n_members):
            val = _integrate_pair(halves[m], np.conj(halves[n]), grid)
            g[m, n] = val
            g[n, m] = np.conj(val)
    off = np.abs(g - np.diag(np.diag(g)))
    max_off = float(np.max(off)) if n_members > 1 else 0.0
    if target_diagonal is None:
        max_diag = float("nan")
    else:
        max_diag = float(np.max(np.abs(np.diag(g) - target_diagonal)))
    return GramReport(
        dimension=n_members, matrix=g, max_offdiag=max_off, max_diag_dev=max_diag
    )


def k_s_kernel(s: SParam, z, zeta, prefactor_scale: float = 1.0):
    """Reproducing kernel of the weighted space (second argument conjugated).

    ``prefactor_scale`` is a fault-injection hook for harness
    self-tests; production callers leave it at 1.
    """
    ss = s.s
    zz = np.asarray(z, dtype=complex)
    zb = np.conj(np.asarray(zeta, dtype=complex))
    pref = prefactor_scale * (1.0 - ss**2) / (2.0 * math.pi * ss)
    out = pref * np.exp(
        (1.0 - ss**2) / (2.0 * ss) * zz * zb
        - (1.0 + ss**2) / (4.0 * ss) * (zz**2 + zb**2)
    )
    return out[()] if (np.ndim(z) == 0 and np.ndim(zeta) == 0) else out


def mehler_partial_sum(s: SParam, n_terms: int, z, zeta):
    """sum_{n <= N} psi_n(z) conj(psi_n(zeta)) -- the bilinear route to the kernel."""
    if not 0 <= n_terms <= 64:
        raise ParameterError(f"partial sum order must lie in [0, 64], got {n_terms}")
    vz = psi_s_all(n_terms, s, z)
    vzeta = psi_s_all(n_terms, s, zeta)
    out = _cascade_sum(vz * np.conj(vzeta), axis=0)
    return out[()] if (np.ndim(z) == 0 and np.ndim(zeta) == 0) else out


def projection_kernel_B(z, zeta):
    """Kernel e^{z conj(zeta)/2} / (2 pi) projecting onto the Bargmann space."""
    zz = np.asarray(z, dtype=complex)
    zb = np.conj(np.asarray(zeta, dtype=complex))
    out = np.exp(zz * zb / 2.0) / (2.0 * math.pi)
    return out[()] if (np.ndim(z) == 0 and np.ndim(zeta) == 0) else out


def psi_kernel(p: PhaseParams, z, zeta):
    """Bilinear polarisation Psi(z, zeta) of the phase weight.

    Literal in both arguments: Psi(z, conj(z)) = Phi(z).  The projection
    kernel is its exponential with the second argument conjugated; see
    ``projection_kernel_phi``.
    """
    zz = np.asarray(z, dtype=complex)
    ww = np.asarray(zeta, dtype=complex)
    im_c = complex(p.c).imag
    out = (
        abs(p.b) ** 2 * zz * ww / (4.0 * im_c)
        - (p.b**2 * zz**2 + np.conj(p.b) ** 2 * ww**2) / (8.0 * im_c)
        - (p.a * zz**2 - np.conj(p.a) * ww**2) / 4j
    )
    return out[()] if (np.ndim(z) == 0 and np.ndim(zeta) == 0) else out


def projection_kernel_phi(p: PhaseParams, z, zeta):
    """Kernel C e^{2 Psi(z, conj(zeta))} of the projection onto the phase space."""
    zz = np.asarray(z, dtype=complex)
    zb = np.conj(np.asarray(zeta, dtype=complex))
    out = p.projection_constant * np.exp(2.0 * psi_kernel(p, zz, zb))
    return out[()] if (np.ndim(z) == 0 and np.ndim(zeta) == 0) else out


def apply_kernel(
    kernel,
    spec: WeightSpec,
    F,
    z,
    decay_hint: tuple[float, float],
    nodes: int = 201,
):
    """integral kernel(z, zeta) F(zeta) e^{E(zeta)} L(d zeta), at one or many z.

    ``decay_hint`` declares the zeta-decay of kernel(z, .) F(.)
    combined (weight excluded).
    """
    grid = _grid_for(spec, decay_hint, nodes)
    half = 0.5 * spec.exponent(grid.zmesh)
    f_half = half_weighted(np.asarray(F(grid.zmesh)), half)
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z_arr.shape, dtype=complex)
    for idx, zi in np.ndenumerate(z_arr):
        k_half = half_weighted(np.asarray(kernel(zi, grid.zmesh)), half)
        out[idx] = _integrate_pair(k_half, f_half, grid)
    return out[0] if np.ndim(z) == 0 else out
