"""Dense complex vector arithmetic, orthonormalization and subspace algebra.

Everything here is plain ``numpy.complex128`` with explicit tolerances; all
functions are pure and all returned values should be treated as immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OMEGA",
    "OMEGA2",
    "Tolerances",
    "DEFAULT_TOL",
    "Subspace",
    "as_vector",
    "inner",
    "norm",
    "canonical_phase",
    "gram_residual",
    "orthonormalize",
    "singular_values_2xn",
    "subspace_equal",
]

# primitive cube root of unity, (-1 + i*sqrt(3)) / 2
OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)
OMEGA2 = OMEGA.conjugate()


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used throughout the package.

    eps_orth: max Gram deviation still counted as orthonormal
    eps_unit: max deviation of <v|v> from 1 still counted as unit
    eps_rank: singular-value cutoff for rank decisions
    eps_ray:  overlap-modulus threshold for ray (phase-class) equality
    """

    eps_orth: float = 1e-9
    eps_unit: float = 1e-9
    eps_rank: float = 1e-8
    eps_ray: float = 1e-8

    def __post_init__(self):
        for name in ("eps_orth", "eps_unit", "eps_rank", "eps_ray"):
            value = getattr(self, name)
            if not 0.0 < value < 1e-3:
                raise ValueError(f"{name} must lie strictly inside (0, 1e-3), got {value!r}")


DEFAULT_TOL = Tolerances()


def as_vector(v) -> np.ndarray:
    """Coerce to a finite 1-d complex128 array (no copy when already one)."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite entries")
    return arr


def norm(v) -> float:
    return float(np.linalg.norm(as_vector(v)))


def inner(x, y) -> complex:
    """Inner product <x|y>, conjugate-linear in the first argument."""
    x = as_vector(x)
    y = as_vector(y)
    if x.size != y.size:
        raise ValueError(f"dim-mismatch: {x.size} vs {y.size}")
    return complex(np.vdot(x, y))


def canonical_phase(v) -> np.ndarray:
    """Multiply by the unit scalar making the largest-modulus entry real positive.

    Ties are broken by lowest index, so equivalent rays map to one
    deterministic representative.
    """
    v = as_vector(v)
    k = int(np.argmax(np.abs(v)))
    pivot = v[k]
    if pivot == 0:
        raise ValueError("cannot phase-canonicalize the zero vector")
    return v * (abs(pivot) / pivot)


def gram_residual(vectors) -> float:
    """Max absolute deviation of the Gram matrix of `vectors` from the identity."""
    cols = np.column_stack([as_vector(v) for v in vectors])
    g = cols.conj().T @ cols
    return float(np.max(np.abs(g - np.eye(g.shape[0]))))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^ambient_dim given by a matrix with orthonormal columns."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.complex128)
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise ValueError(f"basis shape {b.shape} does not match ambient dim {self.ambient_dim}")
        if not 1 <= b.shape[1] <= self.ambient_dim:
            raise ValueError(f"subspace dimension {b.shape[1]} out of range")
        if np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1]))) > 1e-6:
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def __repr__(self):
        return f"<Subspace dim {self.dim} of C^{self.ambient_dim}>"


def orthonormalize(vectors, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of span(vectors) via modified Gram-Schmidt.

    One re-orthogonalization pass is applied to every vector, which keeps the
    output Gram residual near machine precision at these sizes.  Vectors whose
    residual after projection falls below eps_rank (relative to their original
    norm) are treated as dependent and dropped, so the result dimension is the
    numeric rank of the input.
    """
    vs = [as_vector(v) for v in vectors]
    if not vs:
        raise ValueError("zero-span: no input vectors")
    ambient = vs[0].size
    if any(v.size != ambient for v in vs):
        raise ValueError("dim-mismatch: input vectors have differing dimensions")
    cols: list[np.ndarray] = []
    for v in vs:
        scale = max(float(np.linalg.norm(v)), 1.0)
        w = v.astype(np.complex128, copy=True)
        for _ in range(2):
            for q in cols:
                w = w - q * np.vdot(q, w)
        r = float(np.linalg.norm(w))
        if r > tol.eps_rank * scale:
            cols.append(w / r)
    if not cols:
        raise ValueError("zero-span: input spans no direction")
    return Subspace(ambient, np.column_stack([canonical_phase(q) for q in cols]))


def singular_values_2xn(m) -> tuple[float, float]:
    """The two singular values (descending) of a matrix with 2 rows.

    Closed form from the 2x2 Gram quadratic, evaluated on the row-triangular
    parameterization (row norms plus the orthogonalized cross term) rather
    than on the raw trace/determinant.  The raw determinant cancels
    catastrophically for near-rank-1 input and would floor sigma_2 at
    ~sqrt(machine eps); this form keeps sigma_2 accurate down to ~1e-16.
    """
    M = np.asarray(m, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != 2:
        raise ValueError(f"expected a matrix with 2 rows, got shape {M.shape}")
    r0, r1 = M[0], M[1]
    n0 = float(np.linalg.norm(r0))
    n1 = float(np.linalg.norm(r1))
    if n1 > n0:
        r0, r1 = r1, r0
        n0, n1 = n1, n0
    if n0 == 0.0:
        return (0.0, 0.0)
    u = r0 / n0
    c1 = np.vdot(u, r1)
    w = r1 - c1 * u
    c2 = np.vdot(u, w)
    w = w - c2 * u
    beta = abs(c1 + c2)
    gamma = float(np.linalg.norm(w))
    t = n0 * n0 + beta * beta + gamma * gamma
    d = (n0 * gamma) ** 2
    disc = max(t * t - 4.0 * d, 0.0)
    lam1 = 0.5 * (t + math.sqrt(disc))
    lam2 = d / lam1 if lam1 > 0.0 else 0.0
    return (math.sqrt(lam1), math.sqrt(lam2))


def subspace_equal(s: Subspace, t: Subspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether two subspaces coincide: equal dims and close orthogonal projectors.

    The Frobenius distance between the two projectors is compared against
    sqrt(2*dim) * eps_orth, which makes the predicate symmetric and scale-aware.
    """
    if s.ambient_dim != t.ambient_dim:
        raise ValueError(f"dim-mismatch: ambient {s.ambient_dim} vs {t.ambient_dim}")
    if s.dim != t.dim:
        return False
    dist = float(np.linalg.norm(s.projector() - t.projector()))
    return dist <= math.sqrt(2.0 * s.dim) * tol.eps_orth
