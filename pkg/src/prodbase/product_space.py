"""Kronecker products of a qubit with a qudit, and the inverse factorization.

The coordinate convention is row-major with the qubit index major: the entry
of ``kron(a, b)`` at index ``k*n + j`` is ``a[k] * b[j]``, so reshaping a
vector of C^(2n) to a 2 x n matrix recovers the outer product of its factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import (
    DEFAULT_TOL,
    Tolerances,
    as_vector,
    canonical_phase,
    singular_values_2xn,
)

__all__ = ["ProductVector", "NotAProduct", "kron", "factorize", "qubit_orthogonal"]


@dataclass(frozen=True, eq=False)
class ProductVector:
    """A pure product state: qubit factor `a`, qudit factor `b`, full = kron(a, b).

    `phase` records the residual global phase when the value came out of
    `factorize`: the factorized input equals ``phase * full``.
    """

    a: np.ndarray
    b: np.ndarray
    full: np.ndarray
    phase: complex = 1.0 + 0.0j


@dataclass(frozen=True)
class NotAProduct:
    """Marker for a vector rejected by `factorize`, carrying the measured sigma_2."""

    sigma2: float

    def __bool__(self) -> bool:
        return False


def kron(a, b) -> np.ndarray:
    """Kronecker product of a qubit state with a qudit state."""
    a = as_vector(a)
    b = as_vector(b)
    if a.size != 2:
        raise ValueError(f"first factor must live in C^2, got dim {a.size}")
    return np.kron(a, b)


def _dominant_left_factor(M: np.ndarray) -> np.ndarray:
    """Unit eigenvector of the 2x2 Gram M M^H for its largest eigenvalue."""
    g = M @ M.conj().T
    p = g[0, 0].real
    s = g[1, 1].real
    q = g[0, 1]
    lam1 = 0.5 * (p + s + math.sqrt((p - s) * (p - s) + 4.0 * abs(q) ** 2))
    cand1 = np.array([q, lam1 - p], dtype=np.complex128)
    cand2 = np.array([lam1 - s, np.conj(q)], dtype=np.complex128)
    v = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
    return v / np.linalg.norm(v)


def factorize(v, tol: Tolerances = DEFAULT_TOL):
    """Extract the C^2 (x) C^n factorization of a unit vector, if it has one.

    The vector is reshaped to 2 x n; if the second singular value exceeds
    eps_rank the vector is entangled and a `NotAProduct` marker holding the
    measured sigma_2 comes back.  Otherwise the dominant singular pair is
    returned as a `ProductVector` with both factors unit and
    phase-canonicalized, and the residual global phase recorded so that
    ``v == pv.phase * pv.full`` up to roundoff.
    """
    v = as_vector(v)
    if v.size % 2 != 0:
        raise ValueError(f"odd dimension {v.size}: cannot split off a qubit factor")
    n = v.size // 2
    nrm2 = float(np.vdot(v, v).real)
    if abs(nrm2 - 1.0) > tol.eps_unit:
        raise ValueError(f"not-normalized: <v|v> = {nrm2!r}")
    M = v.reshape(2, n)
    _, sigma2 = singular_values_2xn(M)
    if sigma2 > tol.eps_rank:
        return NotAProduct(sigma2=sigma2)
    a = canonical_phase(_dominant_left_factor(M))
    b_raw = a.conj() @ M
    b = canonical_phase(b_raw / np.linalg.norm(b_raw))
    full = np.kron(a, b)
    ph = complex(np.vdot(full, v))
    return ProductVector(a=a, b=b, full=full, phase=ph / abs(ph))


def qubit_orthogonal(a) -> np.ndarray:
    """The unique (up to phase) qubit state orthogonal to `a`, canonicalized.

    For a = (alpha, beta) the raw complement is (-conj(beta), conj(alpha)).
    """
    a = as_vector(a)
    if a.size != 2:
        raise ValueError(f"expected a qubit state, got dim {a.size}")
    nrm = float(np.linalg.norm(a))
    if nrm < 1e-12:
        raise ValueError("zero vector has no orthogonal complement")
    perp = np.array([-np.conj(a[1]), np.conj(a[0])], dtype=np.complex128) / nrm
    return canonical_phase(perp)
