"""Gaussian quadrature over the line and the plane.

Every integral in this package is of the form

    integral of  (Gaussian-envelope integrand)  dx   or   L(dz),

where the integrand decays like exp(-sigma_x x^2 - sigma_y y^2) once the
weighted measure and the members' own decay are combined.  The rules here
carry the weight exp(-t^2), and integration *transfers* that Gaussian to
the rule: with nodes t_i and weights w_i,

    integral f(x) dx  ~=  sum_i  w_i e^{+t_i^2} f(t_i / scale) / scale,

so the caller evaluates the raw integrand at scaled nodes and the factor
w_i e^{+t_i^2} (an O(1) quantity, kept in log form) absorbs the decay.
This avoids ever forming exp(-t_i^2) or its reciprocal at large nodes.

Summation is deterministic: symmetric nodes are paired first (so odd
integrands cancel exactly in IEEE arithmetic), then a pairwise cascade
reduces the pairs in a fixed tree order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import ConvergenceError, EnvelopeError, NumericalError, ParameterError

_SQRT_PI = math.sqrt(math.pi)
_MAX_ORDER = 2000
_EIGH_MAX = 64  # Golub-Welsch below, Newton iteration above


def _cascade_sum(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Pairwise (cascade) reduction along ``axis`` in a fixed tree order."""
    a = np.moveaxis(a, axis, -1)
    while a.shape[-1] > 1:
        half = a.shape[-1] // 2
        head = a[..., :half] + a[..., half : 2 * half]
        if a.shape[-1] % 2:
            head = np.concatenate([head, a[..., 2 * half :]], axis=-1)
        a = head
    return a[..., 0]


def _symmetric_pair_sum(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Sum along ``axis``, pairing entry i with entry n-1-i first.

    On a symmetric rule this makes the contributions of an odd integrand
    cancel exactly, not merely to rounding.
    """
    a = np.moveaxis(a, axis, -1)
    n = a.shape[-1]
    m = n // 2
    if m == 0:
        return a[..., 0]
    folded = a[..., :m] + a[..., : -m - 1 : -1]
    if n % 2:
        folded = np.concatenate([folded, a[..., m : m + 1]], axis=-1)
    return _cascade_sum(folded, axis=-1)


@dataclass(frozen=True)
class QuadratureRule1D:
    """Gauss-Hermite rule for the weight e^{-x^2} on the real line.

    ``log_weights`` is the primary representation; at high order the
    extreme raw weights underflow double precision while their logs stay
    finite, and integration only ever needs exp(log_w + t^2).
    """

    nodes: np.ndarray
    log_weights: np.ndarray
    order: int

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.exp(self.log_weights)
        w.setflags(write=False)
        return w

    @cached_property
    def effective_log_weights(self) -> np.ndarray:
        """log(w_i) + t_i^2, the O(1) multipliers after envelope transfer."""
        lw = self.log_weights + self.nodes**2
        lw.setflags(write=False)
        return lw

    def validate(self) -> None:
        n = self.order
        if len(self.nodes) != n or len(self.log_weights) != n:
            raise ParameterError("rule arrays do not match the stated order")
        if n > 1 and not np.all(np.diff(self.nodes) > 0):
            raise ParameterError("nodes must be strictly increasing")
        if np.max(np.abs(self.nodes + self.nodes[::-1])) > 1e-14:
            raise ParameterError("node set must equal its negation")
        if not np.all(np.isfinite(self.log_weights)):
            raise ParameterError("weights must be positive (finite logs)")
        total = _symmetric_pair_sum(np.exp(self.log_weights))
        if abs(total - _SQRT_PI) > 1e-13:
            raise ParameterError(
                f"weights must sum to sqrt(pi); off by {total - _SQRT_PI:.3e}"
            )


def _rule_golub_welsch(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes from the symmetric Jacobi matrix, one Newton polish each.

    Weights come from the recurrence derivative rather than the
    eigenvector first components: the latter lose relative accuracy in
    the far tail, where the weights are ~1e-40 but still meaningful
    after envelope transfer.
    """
    if n == 1:
        return np.array([0.0]), np.array([math.log(_SQRT_PI)])
    beta = np.sqrt(np.arange(1, n) / 2.0)
    jacobi = np.diag(beta, 1) + np.diag(beta, -1)
    nodes = np.linalg.eigvalsh(jacobi)
    sq2n = math.sqrt(2.0 * n)
    p1, p2, _ = _orthonormal_hermite_scaled(n, nodes)
    nodes = nodes - p1 / (sq2n * p2)
    _, p2, log_scale = _orthonormal_hermite_scaled(n, nodes)
    log_w = math.log(2.0) - 2.0 * (np.log(sq2n * np.abs(p2)) + log_scale)
    return nodes, log_w


_RESCALE = 1e150
_LOG_RESCALE = math.log(_RESCALE)


def _orthonormal_hermite_scaled(n: int, z: np.ndarray):
    """(p_n, p_{n-1}, log_scale) of the orthonormal recurrence, elementwise.

    True values are p * exp(log_scale); dynamic rescaling keeps the
    recurrence finite up to order 2000, where the raw polynomials
    overflow near extreme roots.
    """
    z = np.asarray(z, dtype=float)
    p1 = np.full_like(z, math.pi**-0.25)
    p2 = np.zeros_like(z)
    log_scale = np.zeros_like(z)
    for j in range(1, n + 1):
        p1, p2 = z * math.sqrt(2.0 / j) * p1 - math.sqrt((j - 1.0) / j) * p2, p1
        big = np.abs(p1) > _RESCALE
        if big.any():
            p1 = np.where(big, p1 / _RESCALE, p1)
            p2 = np.where(big, p2 / _RESCALE, p2)
            log_scale = log_scale + np.where(big, _LOG_RESCALE, 0.0)
    return p1, p2, log_scale


def _asymptotic_positive_roots(n: int) -> np.ndarray:
    """WKB first guesses for the positive Hermite roots, largest first.

    In the oscillatory region the phase integral from a root to the
    turning point L = sqrt(2n+1) is approximately pi (k - 1/4) for the
    k-th root from the top.  With x = L cos(psi) the phase condition
    becomes psi - sin(psi) cos(psi) = 2 pi (k - 1/4) / L^2, a monotone
    scalar equation solved here by bisection.  Each guess lands well
    inside its own Newton basin, independently of every other root.
    """
    m = n // 2
    if m == 0:
        return np.empty(0)
    big_l = math.sqrt(2.0 * n + 1.0)
    target = 2.0 * math.pi * (np.arange(1, m + 1) - 0.25) / big_l**2
    lo = np.zeros(m)
    hi = np.full(m, math.pi / 2.0)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        above = mid - np.sin(mid) * np.cos(mid) > target
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    psi = 0.5 * (lo + hi)
    return big_l * np.cos(psi)


def _rule_newton(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Newton on the scaled recurrence from independent asymptotic guesses."""
    sq2n = math.sqrt(2.0 * n)
    z = _asymptotic_positive_roots(n)
    for _ in range(100):
        p1, p2, _ = _orthonormal_hermite_scaled(n, z)
        dz = p1 / (sq2n * p2)
        z = z - dz
        if np.max(np.abs(dz) / np.maximum(1.0, np.abs(z))) < 1e-15:
            break
    else:
        raise NumericalError(f"node iteration of the {n}-point rule did not converge")
    if n % 2:
        z = np.concatenate([z, [0.0]])  # symmetry pins the middle root
    _, p2, log_scale = _orthonormal_hermite_scaled(n, z)
    log_w = math.log(2.0) - 2.0 * (np.log(sq2n * np.abs(p2)) + log_scale)

    # z holds the positive half in descending order; mirror to ascending
    if n % 2:
        nodes = np.concatenate([-z[:-1], z[::-1]])
        log_weights = np.concatenate([log_w[:-1], log_w[::-1]])
    else:
        nodes = np.concatenate([-z, z[::-1]])
        log_weights = np.concatenate([log_w, log_w[::-1]])
    return nodes, log_weights


@lru_cache(maxsize=128)
def gauss_hermite_rule(n: int) -> QuadratureRule1D:
    """n-point rule for the weight e^{-x^2}; nodes are the H_n roots."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ParameterError(f"order must be an integer, got {n!r}")
    if not 1 <= n <= _MAX_ORDER:
        raise ParameterError(f"order must lie in [1, {_MAX_ORDER}], got {n}")
    if n <= _EIGH_MAX:
        nodes, log_w = _rule_golub_welsch(int(n))
    else:
        nodes, log_w = _rule_newton(int(n))
    # enforce exact +/- symmetry of the node set and weights
    nodes = 0.5 * (nodes - nodes[::-1])
    log_w = 0.5 * (log_w + log_w[::-1])
    nodes.setflags(write=False)
    log_w.setflags(write=False)
    rule = QuadratureRule1D(nodes=nodes, log_weights=log_w, order=int(n))
    rule.validate()
    return rule


@dataclass(frozen=True)
class GaussianEnvelope:
    """Decay profile exp(-sigma_x (x-cx)^2 - sigma_y (y-cy)^2) of an integrand."""

    sigma_x: float
    sigma_y: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if not (self.sigma_x > 0 and self.sigma_y > 0):
            raise ParameterError(
                f"envelope must decay in both axes, got "
                f"({self.sigma_x}, {self.sigma_y})"
            )


@dataclass(frozen=True)
class PlanarGrid:
    """Tensor grid over C ~ R^2, affinely scaled to a Gaussian envelope."""

    rule_x: QuadratureRule1D
    rule_y: QuadratureRule1D
    envelope: GaussianEnvelope

    @cached_property
    def xs(self) -> np.ndarray:
        return self.envelope.center[0] + self.rule_x.nodes / math.sqrt(self.envelope.sigma_x)

    @cached_property
    def ys(self) -> np.ndarray:
        return self.envelope.center[1] + self.rule_y.nodes / math.sqrt(self.envelope.sigma_y)

    @cached_property
    def zmesh(self) -> np.ndarray:
        z = self.xs[None, :] + 1j * self.ys[:, None]
        z.setflags(write=False)
        return z

    @cached_property
    def multipliers(self) -> np.ndarray:
        """Quadrature multipliers w_i w_j e^{t_i^2 + t_j^2} / sqrt(sx sy)."""
        lx = self.rule_x.effective_log_weights
        ly = self.rule_y.effective_log_weights
        log_mult = (
            ly[:, None]
            + lx[None, :]
            - 0.5 * math.log(self.envelope.sigma_x * self.envelope.sigma_y)
        )
        mult = np.exp(log_mult)
        mult.setflags(write=False)
        return mult

    @property
    def size(self) -> int:
        return self.rule_x.order * self.rule_y.order


def planar_grid(
    nodes: int, envelope: GaussianEnvelope, nodes_y: int | None = None
) -> PlanarGrid:
    """Grid with ``nodes`` points per axis (``nodes_y`` overrides the y axis)."""
    return PlanarGrid(
        rule_x=gauss_hermite_rule(nodes),
        rule_y=gauss_hermite_rule(nodes_y if nodes_y is not None else nodes),
        envelope=envelope,
    )


def integrate_line(f, rule: QuadratureRule1D, envelope_scale: float) -> complex:
    """Integral of f over R, where f decays like exp(-(scale*x)^2).

    The substitution x = t/scale transfers the Gaussian to the rule:
    the result is sum_i w_i e^{t_i^2} f(t_i/scale) / scale.
    """
    if not envelope_scale > 0:
        raise ParameterError(f"envelope scale must be positive, got {envelope_scale}")
    x = rule.nodes / envelope_scale
    vals = np.asarray(f(x))
    if vals.shape != x.shape:
        vals = np.broadcast_to(vals, x.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericalError(f"non-finite integrand at node {i} (x = {x[i]})")
    terms = vals * (np.exp(rule.effective_log_weights) / envelope_scale)
    return complex(_symmetric_pair_sum(terms))


def integrate_plane(F, grid: PlanarGrid, check_convergence: float | None = None) -> complex:
    """Integral of F over C with respect to Lebesgue measure.

    F must decay at least like the grid envelope.  The tensor-product
    sum reduces x-lines first, then the line sums, both in the fixed
    symmetric-pair/cascade order, so results are bit-reproducible.

    With ``check_convergence`` set, the integral is recomputed at twice
    the node count per axis and a deviation above the given tolerance
    raises ``ConvergenceError``.
    """
    vals = np.asarray(F(grid.zmesh))
    if vals.shape != grid.zmesh.shape:
        vals = np.broadcast_to(vals, grid.zmesh.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        j, i = np.unravel_index(int(np.argmax(bad)), vals.shape)
        raise NumericalError(
            f"non-finite integrand at grid point ({j}, {i}), z = {grid.zmesh[j, i]}"
        )
    terms = vals * grid.multipliers
    total = complex(_symmetric_pair_sum(_symmetric_pair_sum(terms, axis=1), axis=0))
    if check_convergence is not None:
        doubled = PlanarGrid(
            rule_x=gauss_hermite_rule(min(2 * grid.rule_x.order, _MAX_ORDER)),
            rule_y=gauss_hermite_rule(min(2 * grid.rule_y.order, _MAX_ORDER)),
            envelope=grid.envelope,
        )
        refined = integrate_plane(F, doubled)
        if abs(refined - total) > check_convergence:
            raise ConvergenceError(
                f"integral moved by {abs(refined - total):.3e} when doubling nodes "
                f"(tolerance {check_convergence:.3e})"
            )
    return total


_SAFE_EXPONENT = 650.0  # exp stays finite with headroom for polynomial factors


def envelope_for(
    spec, extra_quadratic_decay: tuple[float, float], nodes: int | None = None
) -> GaussianEnvelope:
    """Combined Gaussian envelope of weight times integrand.

    ``spec`` is any weight description exposing ``exponent_quadratic()``
    -> (A, B, C) with measure exp(A x^2 + B y^2 + C x y) L(dz); the
    extra decay (dx, dy) declares the integrand family's own profile
    exp(-dx x^2 - dy y^2).  The combined exponent must be negative
    definite -- for the weighted holomorphic space the weight alone
    grows along the real axis, so integrability comes only from the
    integrand family, and a bare request is a caller bug.

    With ``nodes`` given, an axis along which the integrand *grows*
    (negative hint component) is narrowed so the grid never enters the
    region where raw member values overflow double precision.  The
    narrowing only drops nodes whose true contribution is below
    exp(-t_max^2 * sigma_true / sigma_clamped), ~1e-60 in every
    configuration this package reaches.
    """
    a, b, c = spec.exponent_quadratic()
    dx, dy = extra_quadratic_decay
    sigma_x = dx - a
    sigma_y = dy - b
    if sigma_x <= 0 or sigma_y <= 0 or c**2 >= 4.0 * sigma_x * sigma_y:
        raise EnvelopeError(
            "combined weight+integrand exponent is not negative definite: "
            f"sigma_x={sigma_x:.6g}, sigma_y={sigma_y:.6g}, cross={c:.6g}"
        )
    if nodes is not None:
        t2_max = 2.0 * nodes + 1.0
        if dx < 0:
            sigma_x = max(sigma_x, t2_max * -dx / _SAFE_EXPONENT)
        if dy < 0:
            sigma_y = max(sigma_y, t2_max * -dy / _SAFE_EXPONENT)
    return GaussianEnvelope(sigma_x=sigma_x, sigma_y=sigma_y)
