"""Third-order symmetric traceless tensors in three dimensions.

A tensor of this class has seven free components; the remaining entries of
the full 3x3x3 array follow from index symmetry and the vanishing of every
single-index trace.  This module provides the seven-component value type,
expansion to and compression from the full array, the orthogonal group
action, the associated cubic form on R^3, and seeded random sampling of
tensors and of orthogonal matrices.

All operations are pure functions; arrays held by the value types are
read-only, so values are safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

__all__ = [
    "SymTraceless3",
    "FullTensor3",
    "OrthogonalTransform3",
    "expand",
    "compress",
    "act",
    "cubic_form",
    "cubic_gradient",
    "random_tensor",
    "random_orthogonal",
    "st_dimension",
    "symmetry_violation",
    "trace_violation",
    "tensor_to_json_obj",
    "tensor_from_json_obj",
]

# Default tolerance for validating symmetry/trace of raw full arrays.
# Looser than construction exactness so that arrays that went through a
# rotation (and picked up roundoff) still compress cleanly.
COMPRESS_TOL = 1e-9

# Orthogonality tolerance for transform validation.
ORTHO_TOL = 1e-12

COMPONENT_NAMES = ("d111", "d112", "d113", "d122", "d123", "d222", "d223")

# Index triples (0-based) carrying each free component; every permutation of
# a triple holds the same value.
_FREE_SLOTS = {
    "d111": (0, 0, 0),
    "d112": (0, 0, 1),
    "d113": (0, 0, 2),
    "d122": (0, 1, 1),
    "d123": (0, 1, 2),
    "d222": (1, 1, 1),
    "d223": (1, 1, 2),
}


@dataclass(frozen=True)
class SymTraceless3:
    """The seven free components of a symmetric traceless third-order tensor."""

    d111: float = 0.0
    d112: float = 0.0
    d113: float = 0.0
    d122: float = 0.0
    d123: float = 0.0
    d222: float = 0.0
    d223: float = 0.0

    def __post_init__(self):
        for name in COMPONENT_NAMES:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"component {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in COMPONENT_NAMES])

    @classmethod
    def from_array(cls, values) -> "SymTraceless3":
        values = np.asarray(values, dtype=float).reshape(7)
        return cls(*values)


@dataclass(frozen=True, eq=False)
class FullTensor3:
    """Full 3x3x3 array form of a tensor.

    Arrays produced by :func:`expand` and :func:`act` are symmetric and
    traceless by construction; raw arrays from outside are only checked when
    passed through :func:`compress`.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.shape != (3, 3, 3):
            raise ValueError(f"expected a 3x3x3 array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def frobenius(self) -> float:
        return float(np.sqrt(np.einsum("ijk,ijk->", self.entries, self.entries)))


@dataclass(frozen=True, eq=False)
class OrthogonalTransform3:
    """An element of the 3x3 orthogonal group, with its determinant sign.

    Construction validates orthogonality (``m.T @ m == I`` within 1e-12) and
    that ``det(m)`` matches ``det_sign``; invalid matrices are rejected.
    """

    m: np.ndarray
    det_sign: int = 1

    def __post_init__(self):
        mat = np.array(self.m, dtype=float)
        if mat.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix entries must be finite")
        if self.det_sign not in (1, -1):
            raise ValueError(f"det_sign must be +1 or -1, got {self.det_sign!r}")
        err = np.max(np.abs(mat.T @ mat - np.eye(3)))
        if err > ORTHO_TOL:
            raise ValueError(f"matrix is not orthogonal: max |m.T m - I| = {err:.3g}")
        det = float(np.linalg.det(mat))
        if abs(det - self.det_sign) > ORTHO_TOL:
            raise ValueError(f"det(m) = {det:.17g} does not match det_sign = {self.det_sign:+d}")
        mat.setflags(write=False)
        object.__setattr__(self, "m", mat)

    @classmethod
    def identity(cls) -> "OrthogonalTransform3":
        return cls(np.eye(3), 1)

    @classmethod
    def from_matrix(cls, m) -> "OrthogonalTransform3":
        """Build from a matrix, inferring the determinant sign."""
        det = float(np.linalg.det(np.asarray(m, dtype=float)))
        return cls(m, 1 if det > 0 else -1)

    def compose(self, other: "OrthogonalTransform3") -> "OrthogonalTransform3":
        """Return the transform acting as self after other."""
        return OrthogonalTransform3(self.m @ other.m, self.det_sign * other.det_sign)

    def inverse(self) -> "OrthogonalTransform3":
        return OrthogonalTransform3(self.m.T.copy(), self.det_sign)

    def apply(self, x) -> np.ndarray:
        """Apply to a 3-vector."""
        return self.m @ np.asarray(x, dtype=float)


def expand(s: SymTraceless3) -> FullTensor3:
    """Expand seven components into the full symmetric traceless 3x3x3 array.

    The three constrained diagonal families come from the vanishing traces:
    entries at (1,3,3) equal -d111-d122, at (2,3,3) equal -d112-d222, and
    (3,3,3) equals -d113-d223 (1-based indices).
    """
    arr = np.zeros((3, 3, 3))
    values = {
        (0, 0, 0): s.d111,
        (0, 0, 1): s.d112,
        (0, 0, 2): s.d113,
        (0, 1, 1): s.d122,
        (0, 1, 2): s.d123,
        (1, 1, 1): s.d222,
        (1, 1, 2): s.d223,
        (0, 2, 2): -s.d111 - s.d122,
        (1, 2, 2): -s.d112 - s.d222,
        (2, 2, 2): -s.d113 - s.d223,
    }
    for triple, value in values.items():
        for perm in set(permutations(triple)):
            arr[perm] = value
    return FullTensor3(arr)


def symmetry_violation(f: FullTensor3) -> float:
    """Largest entry difference between the array and any slot permutation."""
    arr = f.entries
    worst = 0.0
    for perm in permutations((0, 1, 2)):
        worst = max(worst, float(np.max(np.abs(arr - np.transpose(arr, perm)))))
    return worst


def trace_violation(f: FullTensor3) -> float:
    """Largest |sum_i entries[i,i,k]| over k."""
    return float(np.max(np.abs(np.einsum("iik->k", f.entries))))


def compress(f: FullTensor3, tol: float = COMPRESS_TOL) -> SymTraceless3:
    """Extract the seven free components, validating the array first.

    Raises ValueError if any permuted-slot pair differs by more than tol or
    any trace exceeds tol, reporting the worst violation found.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    sym = symmetry_violation(f)
    if sym > tol:
        raise ValueError(f"array is not symmetric: worst permuted-entry mismatch {sym:.3g} > tol {tol:.3g}")
    trc = trace_violation(f)
    if trc > tol:
        raise ValueError(f"array is not traceless: worst trace magnitude {trc:.3g} > tol {tol:.3g}")
    arr = f.entries
    return SymTraceless3(*(float(arr[slot]) for slot in _FREE_SLOTS.values()))


def act(g: OrthogonalTransform3, f: FullTensor3) -> FullTensor3:
    """Apply the orthogonal change of coordinates to the tensor.

    (g . T)_{jkl} = g_{ja} g_{kb} g_{lc} T_{abc}; the result stays symmetric
    and traceless to roundoff.
    """
    if not isinstance(g, OrthogonalTransform3):
        raise TypeError("act expects an OrthogonalTransform3 (validated orthogonal matrix)")
    return FullTensor3(np.einsum("ja,kb,lc,abc->jkl", g.m, g.m, g.m, f.entries))


def cubic_form(f: FullTensor3, x) -> float:
    """Evaluate the cubic form T_{ijk} x_i x_j x_k."""
    x = np.asarray(x, dtype=float)
    return float(np.einsum("ijk,i,j,k->", f.entries, x, x, x))


def cubic_gradient(f: FullTensor3, x) -> np.ndarray:
    """Gradient of the cubic form, with components 3 T_{ijk} x_j x_k."""
    x = np.asarray(x, dtype=float)
    return 3.0 * np.einsum("ijk,j,k->i", f.entries, x, x)


def random_tensor(seed, scale: float = 1.0) -> SymTraceless3:
    """Draw seven iid normal(0, scale) components; deterministic per seed.

    seed may be an int or an existing numpy Generator.
    """
    if scale < 0:
        raise ValueError(f"scale must be nonnegative, got {scale!r}")
    rng = np.random.default_rng(seed)
    return SymTraceless3(*rng.normal(0.0, scale, size=7))


def random_orthogonal(seed, proper: bool = True) -> OrthogonalTransform3:
    """Sample a Haar-uniform orthogonal matrix.

    A unit quaternion with normal components gives a uniform rotation; the
    improper branch composes it with the fixed reflection diag(1, 1, -1).
    """
    rng = np.random.default_rng(seed)
    q = rng.normal(size=4)
    while np.linalg.norm(q) < 1e-12:
        q = rng.normal(size=4)
    mat = _quaternion_to_matrix(q / np.linalg.norm(q))
    if proper:
        return OrthogonalTransform3(mat, 1)
    reflect = np.diag([1.0, 1.0, -1.0])
    return OrthogonalTransform3(reflect @ mat, -1)


def _quaternion_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def st_dimension(m: int, n: int) -> int:
    """Dimension of the space of symmetric traceless order-m dim-n tensors.

    Equals C(n+m-1, n-1) - C(n+m-3, n-1); for order 3 in dimension 3 this
    gives 7.
    """
    if m <= 1 or n <= 1:
        raise ValueError(f"order and dimension must both exceed 1, got m={m}, n={n}")
    return math.comb(n + m - 1, n - 1) - math.comb(n + m - 3, n - 1)


def tensor_to_json_obj(s: SymTraceless3) -> dict:
    """Component dict with upper-case keys D111 ... D223."""
    return {name.upper(): getattr(s, name) for name in COMPONENT_NAMES}


def tensor_from_json_obj(obj: dict, tol: float = COMPRESS_TOL) -> SymTraceless3:
    """Parse a tensor from its JSON object form.

    Accepts either the seven component keys D111 ... D223 (missing keys
    default to zero) or a 27-element row-major list under the key "full",
    which is validated like any raw array.
    """
    if not isinstance(obj, dict):
        raise ValueError(f"expected a JSON object, got {type(obj).__name__}")
    if "full" in obj:
        flat = np.asarray(obj["full"], dtype=float)
        if flat.size != 27:
            raise ValueError(f'key "full" must hold 27 numbers, got {flat.size}')
        return compress(FullTensor3(flat.reshape(3, 3, 3)), tol)
    known = {name.upper() for name in COMPONENT_NAMES}
    unknown = set(obj) - known
    if unknown:
        raise ValueError(f"unknown tensor keys: {sorted(unknown)}")
    return SymTraceless3(**{name: float(obj.get(name.upper(), 0.0)) for name in COMPONENT_NAMES})
