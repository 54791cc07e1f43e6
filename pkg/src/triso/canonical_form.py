"""Rotation of a tensor into canonical position.

Every symmetric traceless tensor can be rotated so that a global maximizer
of its cubic form g(x) = D_ijk x_i x_j x_k sits at e1.  First-order
stationarity there kills d112 and d113, and d111 becomes the (nonnegative)
maximum value.  A second rotation about e1 moves a zero of the circle
restriction theta -> g(0, cos theta, sin theta) to e2, killing d222 while
leaving e1 (hence the stationarity conditions) fixed.  Four parameters
survive: (d111, d122, d123, d223).

The maximizer search is multi-start projected gradient ascent over a batch
of quasi-uniform plus seeded-random sphere starts, finished by a batched
Riemannian Newton polish.  The search runs on the unit-normalized tensor,
so step sizes and the convergence criterion are scale-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .invariants import CanonicalParams
from .tensor_core import (
    FullTensor3,
    OrthogonalTransform3,
    SymTraceless3,
    act,
    compress,
    cubic_form,
    cubic_gradient,
    expand,
)

__all__ = [
    "SphereOptConfig",
    "SphereMaximizer",
    "CanonicalResult",
    "ConvergenceError",
    "maximize_cubic_on_sphere",
    "rotation_to_e1",
    "circle_zero_angle",
    "rotation_about_e1",
    "canonicalize",
    "stationarity_residual",
]


class ConvergenceError(RuntimeError):
    """No optimizer start reached the requested stationarity tolerance."""


@dataclass(frozen=True)
class SphereOptConfig:
    """Settings for the multi-start maximizer search.

    Parameters
    ----------
    starts : deterministic quasi-uniform (spiral lattice) sphere starts.
    random_starts : additional seeded random starts.
    max_iter : cap on projected-ascent iterations before the Newton polish.
    tol : stationarity tolerance, applied to the unit-normalized tensor.
    seed : seed for the random starts.
    """

    starts: int = 64
    random_starts: int = 16
    max_iter: int = 200
    tol: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError(f"starts must be at least 1, got {self.starts}")
        if self.random_starts < 0:
            raise ValueError(f"random_starts must be nonnegative, got {self.random_starts}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")


@dataclass(frozen=True)
class SphereMaximizer:
    """A stationary point of the cubic form on the unit sphere.

    value = g(u) >= 0 (the maximum of an odd function is nonnegative), and
    residual is the tangential gradient norm ||grad g - (u.grad g) u|| at u,
    measured on the input tensor, so it scales with the tensor's norm.
    """

    u: np.ndarray
    value: float
    residual: float
    iterations: int = 0

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).reshape(3).copy()
        u.setflags(write=False)
        object.__setattr__(self, "u", u)


@dataclass(frozen=True)
class CanonicalResult:
    """Outcome of canonicalization.

    ``act(transform, original)`` has |d112|, |d113|, |d222| at roundoff
    level, d111 = max_value >= 0, and the same invariant tuple as the
    input; ``params`` holds its four surviving components.  ``diagnostics``
    records iteration counts and residuals of the two rotation stages.
    """

    params: CanonicalParams
    transform: OrthogonalTransform3
    max_value: float
    diagnostics: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "params": self.params.to_json_obj(),
            "rotation": [[float(v) for v in row] for row in self.transform.m],
            "max_value": self.max_value,
            "residual": self.diagnostics.get("stationarity_residual", 0.0),
        }


def _full(t: SymTraceless3 | FullTensor3) -> FullTensor3:
    return expand(t) if isinstance(t, SymTraceless3) else t


def _fibonacci_sphere(n: int) -> np.ndarray:
    # spiral lattice: n points with near-uniform coverage, deterministic
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    phi = i * (math.pi * (3.0 - math.sqrt(5.0)))
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _unit_rows(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _batch_values(d: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.einsum("ijk,si,sj,sk->s", d, x, x, x, optimize=True)


def _batch_gradients(d: np.ndarray, x: np.ndarray) -> np.ndarray:
    return 3.0 * np.einsum("ijk,sj,sk->si", d, x, x, optimize=True)


def _tangent_bases(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal tangent pairs (t1, t2) for a batch of unit vectors."""
    n = len(x)
    helper = np.zeros_like(x)
    helper[np.arange(n), np.argmin(np.abs(x), axis=1)] = 1.0
    t1 = helper - np.sum(helper * x, axis=1, keepdims=True) * x
    t1 = _unit_rows(t1)
    t2 = np.cross(x, t1)
    return t1, t2


def _newton_polish(d: np.ndarray, x: np.ndarray, iters: int = 15) -> np.ndarray:
    """Batched Riemannian Newton for stationary points of the cubic form.

    Solves the projected system P(H - lambda I)P dx = -P grad in a 2d
    tangent basis; near-singular tangent Hessians fall back to a damped
    gradient step.  Step length is capped so iterates stay in their basin.
    """
    for _ in range(iters):
        grad = _batch_gradients(d, x)
        lam = np.sum(grad * x, axis=1)
        t1, t2 = _tangent_bases(x)
        # tangent Hessian entries; H_ij = 6 d_ijk x_k
        h = 6.0 * np.einsum("ijk,sk->sij", d, x, optimize=True)
        ht1 = np.einsum("sij,sj->si", h, t1) - lam[:, None] * t1
        ht2 = np.einsum("sij,sj->si", h, t2) - lam[:, None] * t2
        a00 = np.sum(t1 * ht1, axis=1)
        a01 = np.sum(t1 * ht2, axis=1)
        a11 = np.sum(t2 * ht2, axis=1)
        b0 = -np.sum(grad * t1, axis=1)
        b1 = -np.sum(grad * t2, axis=1)
        det = a00 * a11 - a01 * a01
        safe = np.abs(det) > 1e-14 * (1.0 + a00 * a00 + a01 * a01 + a11 * a11)
        z0 = np.where(safe, (a11 * b0 - a01 * b1) / np.where(safe, det, 1.0), 0.2 * b0)
        z1 = np.where(safe, (a00 * b1 - a01 * b0) / np.where(safe, det, 1.0), 0.2 * b1)
        step_norm = np.hypot(z0, z1)
        cap = np.minimum(1.0, 0.3 / np.maximum(step_norm, 1e-300))
        x = _unit_rows(x + (cap * z0)[:, None] * t1 + (cap * z1)[:, None] * t2)
    return x


def maximize_cubic_on_sphere(
    t: SymTraceless3 | FullTensor3, cfg: SphereOptConfig | None = None
) -> SphereMaximizer:
    """Find the global maximizer of the cubic form on the unit sphere.

    Multi-start local ascent; the best stationary value over all starts is
    returned, with ties (within 1e-12 on the normalized tensor) broken by
    picking the lexicographically largest unit vector.  Starts with a
    negative value are flipped to the antipode first, so every ascent path
    carries a nonnegative value and the result satisfies value >= 0.

    Raises ConvergenceError if no start reaches the stationarity tolerance.
    """
    cfg = cfg or SphereOptConfig()
    full = _full(t)
    frob = full.frobenius()
    if frob == 0.0:
        return SphereMaximizer(np.array([1.0, 0.0, 0.0]), 0.0, 0.0, 0)
    d = full.entries / frob

    x = _fibonacci_sphere(cfg.starts)
    if cfg.random_starts:
        rng = np.random.default_rng(cfg.seed)
        extra = rng.normal(size=(cfg.random_starts, 3))
        x = np.vstack([x, _unit_rows(extra)])
    x[_batch_values(d, x) < 0.0] *= -1.0

    step = np.full(len(x), 0.1)
    val = _batch_values(d, x)
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        grad = _batch_gradients(d, x)
        tang = grad - np.sum(grad * x, axis=1, keepdims=True) * x
        res = np.linalg.norm(tang, axis=1)
        if np.all(res <= 1e-6):
            break
        trial = _unit_rows(x + step[:, None] * tang)
        trial_val = _batch_values(d, trial)
        ok = trial_val >= val
        x[ok] = trial[ok]
        val[ok] = trial_val[ok]
        step = np.where(ok, step * 1.2, step * 0.5)

    x = _newton_polish(d, x)
    val = _batch_values(d, x)
    grad = _batch_gradients(d, x)
    res = np.linalg.norm(grad - np.sum(grad * x, axis=1, keepdims=True) * x, axis=1)

    converged = res <= cfg.tol
    if not converged.any():
        raise ConvergenceError(
            f"no start reached stationarity tolerance {cfg.tol:.3g}; "
            f"best residual {res.min():.3g} (normalized tensor)"
        )
    best = val[converged].max()
    tied = converged & (val >= best - 1e-12)
    candidates = x[tied]
    order = np.lexsort((candidates[:, 2], candidates[:, 1], candidates[:, 0]))
    u = candidates[order[-1]]

    value = cubic_form(full, u)
    grad_u = cubic_gradient(full, u)
    residual = float(np.linalg.norm(grad_u - (grad_u @ u) * u))
    return SphereMaximizer(u, value, residual, iterations)


def rotation_to_e1(u) -> OrthogonalTransform3:
    """Proper rotation whose first row is u, so that R u = e1.

    Acting with R on a tensor whose cubic form peaks at u moves the peak to
    e1.  For u = e1 the identity is returned.
    """
    u = np.asarray(u, dtype=float).reshape(3)
    norm = np.linalg.norm(u)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"u must be a unit vector, got |u| = {norm:.17g}")
    u = u / norm
    helper = np.zeros(3)
    helper[np.argmin(np.abs(u))] = 1.0
    r2 = helper - (helper @ u) * u
    r2 /= np.linalg.norm(r2)
    r3 = np.cross(u, r2)
    return OrthogonalTransform3(np.vstack([u, r2, r3]), 1)


def circle_zero_angle(t: SymTraceless3 | FullTensor3) -> float:
    """Smallest angle in [0, pi) where the circle restriction vanishes.

    The restriction h(theta) = g(0, cos theta, sin theta) is odd under
    theta -> theta + pi, so it has a zero in [0, pi); the smallest one is
    located by a sign-change scan over a fine grid followed by bisection.
    Expects a tensor already aligned so that |d112|, |d113| are negligible
    (the result is a valid zero either way).  If the restriction vanishes
    identically, returns 0.
    """
    full = _full(t)
    arr = full.entries

    def h(theta):
        x = np.array([0.0, math.cos(theta), math.sin(theta)])
        return float(np.einsum("ijk,i,j,k->", arr, x, x, x))

    n = 256
    grid = np.linspace(0.0, math.pi, n + 1)
    x = np.stack([np.zeros(n + 1), np.cos(grid), np.sin(grid)], axis=1)
    values = np.einsum("ijk,si,sj,sk->s", arr, x, x, x, optimize=True)

    tiny = 1e-13 * max(1.0, full.frobenius())
    if np.max(np.abs(values)) <= tiny:
        return 0.0
    near_zero = np.abs(values) <= tiny
    flips = values[:-1] * values[1:] < 0.0
    first_zero = np.argmax(near_zero) if near_zero.any() else n + 1
    first_flip = np.argmax(flips) if flips.any() else n + 1
    if first_zero <= first_flip:
        theta = grid[first_zero]
        return float(theta % math.pi)

    lo, hi = grid[first_flip], grid[first_flip + 1]
    f_lo = values[first_flip]
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        f_mid = h(mid)
        if f_mid == 0.0:
            return float(mid % math.pi)
        if (f_lo > 0) == (f_mid > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    theta = lo if abs(h(lo)) <= abs(h(hi)) else hi
    return float(theta % math.pi)


def rotation_about_e1(theta: float) -> OrthogonalTransform3:
    """Proper rotation fixing e1 and mapping (0, cos theta, sin theta) to e2."""
    c, s = math.cos(theta), math.sin(theta)
    return OrthogonalTransform3(np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]]), 1)


def canonicalize(
    t: SymTraceless3, cfg: SphereOptConfig | None = None
) -> CanonicalResult:
    """Rotate a tensor into canonical position.

    The transform is rotation_about_e1(theta0) composed after
    rotation_to_e1(u); the second stage fixes e1, so the stationarity won by
    the first stage (d112 = d113 = 0) survives.  The zero tensor
    short-circuits to the identity.
    """
    cfg = cfg or SphereOptConfig()
    full = expand(t)
    if full.frobenius() == 0.0:
        return CanonicalResult(
            CanonicalParams(0.0, 0.0, 0.0, 0.0),
            OrthogonalTransform3.identity(),
            0.0,
            {
                "ascent_iterations": 0,
                "stationarity_residual": 0.0,
                "circle_residual": 0.0,
                "constraint_violation": 0.0,
            },
        )

    mx = maximize_cubic_on_sphere(t, cfg)
    r1 = rotation_to_e1(mx.u)
    aligned = act(r1, full)
    theta0 = circle_zero_angle(aligned)
    r2 = rotation_about_e1(theta0)
    transform = r2.compose(r1)
    rotated = act(r2, aligned)
    out = compress(rotated)
    params = CanonicalParams(out.d111, out.d122, out.d123, out.d223)
    diagnostics = {
        "ascent_iterations": mx.iterations,
        "stationarity_residual": mx.residual,
        "circle_residual": abs(out.d222),
        "constraint_violation": max(abs(out.d112), abs(out.d113), abs(out.d222)),
    }
    return CanonicalResult(params, transform, mx.value, diagnostics)


def stationarity_residual(t: SymTraceless3 | FullTensor3, x) -> float:
    """Distance of x from being a stationary point of the cubic form.

    Returns min over lambda of ||grad g(x) - lambda x||, attained at
    lambda = x . grad g(x).
    """
    x = np.asarray(x, dtype=float).reshape(3)
    norm = np.linalg.norm(x)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"x must be a unit vector, got |x| = {norm:.17g}")
    grad = cubic_gradient(_full(t), x)
    return float(np.linalg.norm(grad - (grad @ x) * x))
