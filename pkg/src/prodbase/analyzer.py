"""Verification and structural classification of candidate product bases.

A candidate basis is 2n unit vectors in C^(2n).  When it really is an
orthonormal product basis, its qubit factors fall into ray classes that pair
up antipodally, the qudit factors attached to a paired class span equal
orthogonal subspaces, and the subspace dimensions form a partition of n.
`classify` computes that decomposition (or explains where it breaks down),
and the remaining functions check the individual conditions separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    as_vector,
    canonical_phase,
    gram_residual,
    inner,
    orthonormalize,
    subspace_equal,
)
from .partitions import Partition
from .product_space import ProductVector, factorize

__all__ = [
    "ProductBasis",
    "RayClass",
    "PairBlock",
    "StructureReport",
    "factorize_all",
    "verify_orthonormal",
    "verify_product_basis",
    "check_pairwise_condition",
    "check_groupable",
    "classify",
    "left_classify",
    "mu_check",
    "swap_factors",
]


class ProductBasis:
    """An ordered set of 2n unit vectors in C^(2n) claimed to form a product basis.

    `factored` caches per-vector factorizations once they are known (either
    because the basis was built from factors, or after `factorize_all`).  The
    cache is the only mutable state; concurrent users of one instance must
    treat it as read-only.
    """

    def __init__(self, n: int, vectors, factored=None, tol: Tolerances = DEFAULT_TOL, meta=None):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"n must be a positive integer, got {n!r}")
        vecs = [np.array(as_vector(v), copy=True) for v in vectors]
        if len(vecs) != 2 * n:
            raise ValueError(f"expected {2 * n} vectors, got {len(vecs)}")
        for k, v in enumerate(vecs):
            if v.size != 2 * n:
                raise ValueError(f"vector {k} has dim {v.size}, expected {2 * n}")
            nrm2 = float(np.vdot(v, v).real)
            if abs(nrm2 - 1.0) > tol.eps_unit:
                raise ValueError(f"not-normalized: vector {k} has <v|v> = {nrm2!r}")
        self.n = n
        self.vectors = tuple(vecs)
        if factored is not None:
            factored = tuple(factored)
            if len(factored) != 2 * n:
                raise ValueError("factored list must align with vectors")
        self.factored = factored
        self.meta = dict(meta or {})

    @property
    def dims(self) -> tuple[int, int]:
        return (2, self.n)

    def __len__(self):
        return len(self.vectors)

    def __repr__(self):
        return f"<ProductBasis 2x{self.n}, {len(self.vectors)} vectors>"


@dataclass(frozen=True, eq=False)
class RayClass:
    """A maximal set of basis positions whose qubit factors share one ray."""

    representative: np.ndarray
    member_indices: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class PairBlock:
    """One antipodal block of the decomposition.

    The qubit pair (a, a_perp) spans C^2; group_A and group_Aperp are the
    qudit factors attached to each side, both orthonormal bases of the same
    `subspace` of C^n with `multiplicity` elements.
    """

    a: np.ndarray
    a_perp: np.ndarray
    group_A: tuple[np.ndarray, ...]
    group_Aperp: tuple[np.ndarray, ...]
    subspace: Subspace
    multiplicity: int
    a_indices: tuple[int, ...] = ()
    a_perp_indices: tuple[int, ...] = ()
    groups_coincide: bool = False


@dataclass(frozen=True, eq=False)
class StructureReport:
    """Outcome of `classify`: the block decomposition or the first failure."""

    valid: bool
    gram_residual: float
    blocks: tuple[PairBlock, ...] = ()
    right_type: Partition | None = None
    basis_B1n: tuple[np.ndarray, ...] = ()
    basis_B2n: tuple[np.ndarray, ...] = ()
    is_direct_product: bool = False
    diagnostics: tuple[str, ...] = ()

    @property
    def r(self) -> int:
        return len(self.blocks)


def factorize_all(basis: ProductBasis, tol: Tolerances = DEFAULT_TOL) -> list:
    """Factorize every basis vector; cache on the basis when all succeed.

    Caching does not require orthonormality: a set of genuine product vectors
    that fails to be a basis still gets its factors attached, so the grouping
    checks below stay runnable on it.
    """
    if basis.factored is not None:
        return list(basis.factored)
    results = [factorize(v, tol) for v in basis.vectors]
    if all(results):
        basis.factored = tuple(results)
    return results


def verify_orthonormal(basis: ProductBasis, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether the 2n vectors are orthonormal; also returns the Gram residual."""
    residual = gram_residual(basis.vectors)
    return (residual <= tol.eps_orth, residual)


def verify_product_basis(basis: ProductBasis, tol: Tolerances = DEFAULT_TOL):
    """Orthonormality plus product-ness of every vector.

    Returns (ok, per_vector_results) where each result is a ProductVector or
    a NotAProduct marker carrying the measured sigma_2.
    """
    ok_orth, _ = verify_orthonormal(basis, tol)
    results = factorize_all(basis, tol)
    return (ok_orth and all(results), results)


def _require_factored(basis: ProductBasis) -> tuple[ProductVector, ...]:
    if basis.factored is None or not all(basis.factored):
        raise ValueError("factorize-first: run factorize_all/verify_product_basis before this check")
    return basis.factored


def check_pairwise_condition(basis: ProductBasis, tol: Tolerances = DEFAULT_TOL) -> bool:
    """For every pair i != j, at least one factor overlap vanishes."""
    factored = _require_factored(basis)
    d = len(factored)
    for i in range(d):
        for j in range(i + 1, d):
            oa = abs(inner(factored[i].a, factored[j].a))
            ob = abs(inner(factored[i].b, factored[j].b))
            if min(oa, ob) > tol.eps_orth:
                return False
    return True


def _orthogonality_matrix(vectors, tol: Tolerances) -> list[list[bool]]:
    d = len(vectors)
    return [
        [abs(inner(vectors[i], vectors[j])) <= tol.eps_orth for j in range(d)]
        for i in range(d)
    ]


def _qubits_pairable(adj: list[list[bool]]) -> bool:
    """Perfect matching on the qubit orthogonality graph.

    Two near-orthogonal neighbours of one qubit ray are themselves nearly
    parallel, so at tolerances below 1e-3 this graph has no odd cycles and a
    2-coloring always exists; Kuhn's augmenting-path matching then decides
    perfect matchability exactly.
    """
    d = len(adj)
    color = [-1] * d
    for start in range(d):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in range(d):
                if not adj[u][v] or v == u:
                    continue
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    raise ValueError("orthogonality graph has an odd cycle; tolerances are inconsistent")
    left = [v for v in range(d) if color[v] == 0]
    right = [v for v in range(d) if color[v] == 1]
    if len(left) != len(right):
        return False
    match: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for v in right:
            if not adj[u][v] or v in seen:
                continue
            seen.add(v)
            if v not in match or augment(match[v], seen):
                match[v] = u
                return True
        return False

    matched = sum(1 for u in left if augment(u, set()))
    return matched == len(left)


def _qudits_two_bases(adj: list[list[bool]], n: int) -> bool:
    """Exact cover of the 2n qudit factors by two orthonormal size-n groups."""
    d = len(adj)
    if d != 2 * n:
        return False
    groups: tuple[list[int], list[int]] = ([], [])

    def place(i: int) -> bool:
        if i == d:
            return True
        for g in (0, 1):
            members = groups[g]
            if len(members) < n and all(adj[i][j] for j in members):
                members.append(i)
                if place(i + 1):
                    return True
                members.pop()
            if i == 0:
                break  # vector 0 pinned to group 0: group labels are symmetric
        return False

    return place(0)


def check_groupable(basis: ProductBasis, tol: Tolerances = DEFAULT_TOL) -> bool:
    """The grouping condition alone: qubit factors split into n orthonormal
    pairs and qudit factors into 2 orthonormal bases of C^n.

    This is strictly weaker than being a product basis; sets exist that group
    cleanly yet are not orthonormal in C^(2n).
    """
    factored = _require_factored(basis)
    qubit_adj = _orthogonality_matrix([pv.a for pv in factored], tol)
    if not _qubits_pairable(qubit_adj):
        return False
    qudit_adj = _orthogonality_matrix([pv.b for pv in factored], tol)
    return _qudits_two_bases(qudit_adj, basis.n)


def _ray_classes(qubits: list[np.ndarray], tol: Tolerances) -> list[RayClass] | str:
    """Union-find clustering of qubit factors by ray equality.

    Returns a diagnostic string instead when a cluster is internally
    inconsistent (transitivity degraded beyond 2*eps_ray).
    """
    d = len(qubits)
    parent = list(range(d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(d):
        for j in range(i + 1, d):
            if abs(inner(qubits[i], qubits[j])) >= 1.0 - tol.eps_ray:
                parent[find(i)] = find(j)
    clusters: dict[int, list[int]] = {}
    for i in range(d):
        clusters.setdefault(find(i), []).append(i)
    classes = []
    for members in sorted(clusters.values(), key=lambda ms: ms[0]):
        for u in members:
            for v in members:
                if u < v and 1.0 - abs(inner(qubits[u], qubits[v])) >= 2.0 * tol.eps_ray:
                    return (
                        f"ray class {members} is internally inconsistent: "
                        f"vectors {u} and {v} differ by more than 2*eps_ray"
                    )
        classes.append(RayClass(canonical_phase(qubits[members[0]]), tuple(members)))
    return classes


def _same_ray_sets(group1, group2, tol: Tolerances) -> bool:
    """Whether two orthonormal families coincide as sets of rays."""
    if len(group1) != len(group2):
        return False
    used = [False] * len(group2)
    for u in group1:
        hits = [
            j
            for j, v in enumerate(group2)
            if not used[j] and abs(inner(u, v)) >= 1.0 - tol.eps_ray
        ]
        if len(hits) != 1:
            return False
        used[hits[0]] = True
    return True


def classify(basis: ProductBasis, tol: Tolerances = DEFAULT_TOL) -> StructureReport:
    """Full structural decomposition of a candidate product basis.

    On a verified product basis this clusters the qubit factors into ray
    classes, pairs each class with its unique orthogonal partner, checks that
    paired classes carry equally many qudit factors spanning one common
    subspace, and reports the blocks sorted by decreasing multiplicity
    together with the induced partition of n.  Any violated condition yields
    valid=False with a diagnostic for the first failing step; the Gram
    residual is reported either way.
    """
    ok_orth, residual = verify_orthonormal(basis, tol)
    factored = factorize_all(basis, tol)
    diags: list[str] = []

    def failed() -> StructureReport:
        return StructureReport(valid=False, gram_residual=residual, diagnostics=tuple(diags))

    if not ok_orth:
        diags.append(f"not orthonormal: Gram residual {residual:.6e} exceeds eps_orth")
        return failed()
    for k, res in enumerate(factored):
        if not res:
            diags.append(f"vector {k} is not a product state (sigma2 {res.sigma2:.6e})")
            return failed()

    qubits = [pv.a for pv in factored]
    qudits = [pv.b for pv in factored]

    classes = _ray_classes(qubits, tol)
    if isinstance(classes, str):
        diags.append(classes)
        return failed()

    k = len(classes)
    overlap = [[abs(inner(classes[i].representative, classes[j].representative)) for j in range(k)] for i in range(k)]
    partner = [-1] * k
    for c in range(k):
        candidates = [e for e in range(k) if e != c and overlap[c][e] <= tol.eps_orth]
        if not candidates:
            diags.append(
                f"ray class {classes[c].member_indices} has no orthogonal partner class"
            )
            return failed()
        if len(candidates) > 1:
            diags.append(
                f"ambiguous partner for ray class {classes[c].member_indices}: "
                f"{len(candidates)} classes are orthogonal within eps_orth"
            )
            return failed()
        partner[c] = candidates[0]
    for c in range(k):
        if partner[partner[c]] != c:
            diags.append("partner assignment is not a perfect matching on ray classes")
            return failed()

    blocks: list[PairBlock] = []
    for c in range(k):
        e = partner[c]
        if c > e:
            continue
        cls_a, cls_p = classes[c], classes[e]
        if cls_p.member_indices[0] < cls_a.member_indices[0]:
            cls_a, cls_p = cls_p, cls_a
        if len(cls_a.member_indices) != len(cls_p.member_indices):
            diags.append(
                f"paired ray classes {cls_a.member_indices} and {cls_p.member_indices} "
                f"have unequal cardinalities"
            )
            return failed()
        group_a = [qudits[i] for i in cls_a.member_indices]
        group_p = [qudits[i] for i in cls_p.member_indices]
        for name, group in (("A", group_a), ("A-perp", group_p)):
            res = gram_residual(group)
            if res > tol.eps_orth:
                diags.append(
                    f"qudit group {name} of block {cls_a.member_indices} is not "
                    f"orthonormal (residual {res:.6e})"
                )
                return failed()
        span_a = orthonormalize(group_a, tol)
        span_p = orthonormalize(group_p, tol)
        if span_a.dim != len(group_a) or not subspace_equal(span_a, span_p, tol):
            diags.append(
                f"qudit groups of block {cls_a.member_indices} do not span one "
                f"common subspace of dimension {len(group_a)}"
            )
            return failed()
        blocks.append(
            PairBlock(
                a=cls_a.representative,
                a_perp=cls_p.representative,
                group_A=tuple(group_a),
                group_Aperp=tuple(group_p),
                subspace=span_a,
                multiplicity=len(group_a),
                a_indices=cls_a.member_indices,
                a_perp_indices=cls_p.member_indices,
                groups_coincide=_same_ray_sets(group_a, group_p, tol),
            )
        )

    blocks.sort(key=lambda blk: (-blk.multiplicity, blk.a_indices[0]))
    if sum(blk.multiplicity for blk in blocks) != basis.n:
        diags.append("block multiplicities do not sum to n")
        return failed()
    basis_b1 = tuple(v for blk in blocks for v in blk.group_A)
    basis_b2 = tuple(v for blk in blocks for v in blk.group_Aperp)
    for name, family in (("B1(n)", basis_b1), ("B2(n)", basis_b2)):
        res = gram_residual(family)
        if res > tol.eps_orth:
            diags.append(f"{name} is not an orthonormal basis of C^n (residual {res:.6e})")
            return failed()
    right_type = Partition(tuple(blk.multiplicity for blk in blocks))
    return StructureReport(
        valid=True,
        gram_residual=residual,
        blocks=tuple(blocks),
        right_type=right_type,
        basis_B1n=basis_b1,
        basis_B2n=basis_b2,
        is_direct_product=(len(blocks) == 1 and blocks[0].groups_coincide),
        diagnostics=tuple(diags),
    )


def swap_factors(basis: ProductBasis, tol: Tolerances = DEFAULT_TOL) -> ProductBasis:
    """The same vectors with qubit and qudit factors exchanged (n = 2 only)."""
    if basis.n != 2:
        raise ValueError("factor swap is only defined for 2 x 2")
    swapped = [v.reshape(2, 2).T.reshape(4).copy() for v in basis.vectors]
    return ProductBasis(2, swapped, tol=tol)


def left_classify(basis: ProductBasis, tol: Tolerances = DEFAULT_TOL) -> Partition | None:
    """Partition type of the factor-swapped basis; None means undefined.

    Swapping the two factors only yields a space of the same 2 x n shape when
    n = 2, so the swapped-side type is computed there and is undefined for
    every other n.
    """
    if basis.n != 2:
        return None
    report = classify(swap_factors(basis, tol), tol)
    return report.right_type if report.valid else None


def mu_check(basis1, basis2, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether two orthonormal bases are mutually unbiased.

    Returns (ok, dev) with dev the max over all pairs of
    | |<a_i|b_j>|^2 - 1/d |; ok when dev <= 10 * eps_orth.
    """
    va = [as_vector(v) for v in basis1]
    vb = [as_vector(v) for v in basis2]
    d = len(va)
    if d == 0 or len(vb) != d:
        raise ValueError("not-a-basis: the two families have different sizes")
    if any(v.size != d for v in va) or any(v.size != d for v in vb):
        raise ValueError("not-a-basis: vector count must equal the dimension")
    for name, fam in (("first", va), ("second", vb)):
        res = gram_residual(fam)
        if res > tol.eps_orth:
            raise ValueError(f"not-a-basis: {name} family has Gram residual {res:.6e}")
    A = np.column_stack(va)
    B = np.column_stack(vb)
    overlaps = np.abs(A.conj().T @ B) ** 2
    dev = float(np.max(np.abs(overlaps - 1.0 / d)))
    return (dev <= 10.0 * tol.eps_orth, dev)
