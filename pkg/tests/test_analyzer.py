import itertools
import math

import numpy as np
import pytest

from prodbase.analyzer import (
    ProductBasis,
    check_groupable,
    check_pairwise_condition,
    classify,
    factorize_all,
    left_classify,
    mu_check,
    swap_factors,
    verify_orthonormal,
    verify_product_basis,
)
from prodbase.generator import FamilyParams, TypeSpec, generate_from_type, named_family
from prodbase.numerics import inner, orthonormalize, subspace_equal
from prodbase.partitions import Partition
from prodbase.product_space import NotAProduct, kron

RT2 = math.sqrt(2.0)
KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
PLUS = np.array([1.0, 1.0], dtype=complex) / RT2
MINUS = np.array([1.0, -1.0], dtype=complex) / RT2


def computational_basis(n):
    eye = np.eye(2 * n, dtype=complex)
    return ProductBasis(n, [eye[:, k] for k in range(2 * n)])


def bell_completion_basis():
    """Orthonormal basis of C^4 containing one entangled vector."""
    vecs = [
        np.array([1, 0, 0, 1], dtype=complex) / RT2,
        np.array([1, 0, 0, -1], dtype=complex) / RT2,
        np.array([0, 1, 1, 0], dtype=complex) / RT2,
        np.array([0, 1, -1, 0], dtype=complex) / RT2,
    ]
    return ProductBasis(2, vecs)


def d4_two_pair_instance():
    """{|0>|0>, |1>|0>, |+>|1>, |->|1>}: two antipodal pairs, two line subspaces."""
    vecs = [kron(KET0, KET0), kron(KET1, KET0), kron(PLUS, KET1), kron(MINUS, KET1)]
    return ProductBasis(2, vecs)


def test_verify_orthonormal_computational():
    ok, residual = verify_orthonormal(computational_basis(2))
    assert ok
    assert residual == 0.0


def test_verify_orthonormal_duplicate_vector():
    eye = np.eye(4, dtype=complex)
    basis = ProductBasis(2, [eye[:, 0], eye[:, 0], eye[:, 2], eye[:, 3]])
    ok, residual = verify_orthonormal(basis)
    assert not ok
    assert abs(residual - 1.0) < 1e-15


def test_counterexample_residual_is_half():
    basis = named_family(FamilyParams("counterexample_1_4"))
    ok, residual = verify_orthonormal(basis)
    assert not ok
    assert abs(residual - 0.5) < 1e-12


def test_verify_product_basis_computational():
    basis = computational_basis(3)
    ok, results = verify_product_basis(basis)
    assert ok
    assert len(results) == 6
    assert all(results)
    assert basis.factored is not None


def test_verify_product_basis_bell_completion():
    basis = bell_completion_basis()
    ok, results = verify_product_basis(basis)
    assert not ok
    assert isinstance(results[0], NotAProduct)
    assert abs(results[0].sigma2 - 1.0 / RT2) < 1e-12


def test_check_pairwise_on_product_bases():
    for basis in (computational_basis(3), computational_basis(5)):
        verify_product_basis(basis)
        assert check_pairwise_condition(basis)


def test_check_pairwise_counterexample_false():
    basis = named_family(FamilyParams("counterexample_1_4"))
    assert not check_pairwise_condition(basis)
    # the violating pair: both overlaps 1/sqrt(2)
    f = basis.factored
    assert abs(abs(inner(f[0].a, f[3].a)) - 1 / RT2) < 1e-12
    assert abs(abs(inner(f[0].b, f[3].b)) - 1 / RT2) < 1e-12


def test_checks_require_factored():
    basis = computational_basis(2)
    with pytest.raises(ValueError, match="factorize-first"):
        check_pairwise_condition(basis)
    with pytest.raises(ValueError, match="factorize-first"):
        check_groupable(basis)


def test_check_groupable_valid_basis():
    basis = computational_basis(3)
    factorize_all(basis)
    assert check_groupable(basis)


def test_check_groupable_counterexample_true():
    # groupability does not imply basis
    basis = named_family(FamilyParams("counterexample_1_4"))
    ok_orth, _ = verify_orthonormal(basis)
    assert check_groupable(basis) and not ok_orth


def test_check_groupable_repeated_vector_false():
    v = kron(PLUS, KET0)
    basis = ProductBasis(2, [v.copy() for _ in range(4)])
    factorize_all(basis)
    assert not check_groupable(basis)


def test_groupable_follows_from_valid_basis():
    # necessity direction: every verified product basis also groups cleanly
    for n, parts, seed in ((4, (2, 1, 1), 0), (5, (3, 2), 1), (6, (2, 2, 2), 2)):
        basis = generate_from_type(TypeSpec(n=n, partition=Partition(parts), seed=seed))
        clean = ProductBasis(n, basis.vectors)
        ok, _ = verify_product_basis(clean)
        assert ok
        assert check_groupable(clean)


def test_classify_computational_2x3():
    report = classify(computational_basis(3))
    assert report.valid
    assert report.r == 1
    assert report.right_type == Partition((3,))
    assert report.is_direct_product


def test_classify_d4_two_pair_instance():
    basis = d4_two_pair_instance()
    # exhaustive oracle: every pair of distinct vectors orthogonal, all unit
    for i, j in itertools.combinations(range(4), 2):
        assert abs(inner(basis.vectors[i], basis.vectors[j])) < 1e-15
    for v in basis.vectors:
        assert abs(inner(v, v) - 1) < 1e-15
    report = classify(basis)
    assert report.valid
    assert report.right_type == Partition((1, 1))
    assert not report.is_direct_product


def test_classify_d6_B1_explicit():
    basis = named_family(FamilyParams("d6_B1", unitary_params=(1 / RT2, 1 / RT2)))
    # exhaustive Gram oracle
    for i, j in itertools.combinations(range(6), 2):
        assert abs(inner(basis.vectors[i], basis.vectors[j])) < 1e-15
    report = classify(basis)
    assert report.valid
    assert report.right_type == Partition((2, 1))


def test_classify_reports_not_orthonormal():
    basis = named_family(FamilyParams("counterexample_1_4"))
    report = classify(basis)
    assert not report.valid
    assert abs(report.gram_residual - 0.5) < 1e-12
    assert any("not orthonormal" in d for d in report.diagnostics)


def test_classify_reports_non_product_vector_index():
    report = classify(bell_completion_basis())
    assert not report.valid
    assert any("vector 0" in d and "not a product" in d for d in report.diagnostics)


def test_classify_blocks_satisfy_pairing_properties():
    spec = TypeSpec(n=6, partition=Partition((3, 2, 1)), seed=11)
    basis = generate_from_type(spec)
    report = classify(basis)
    assert report.valid
    assert sum(b.multiplicity for b in report.blocks) == 6
    for blk in report.blocks:
        assert abs(inner(blk.a, blk.a_perp)) <= 1e-9
        assert len(blk.group_A) == len(blk.group_Aperp) == blk.multiplicity
        assert blk.subspace.dim == blk.multiplicity
        span_a = orthonormalize(blk.group_A)
        span_p = orthonormalize(blk.group_Aperp)
        assert subspace_equal(span_a, span_p)
    # blocks' subspaces are mutually orthogonal
    for b1, b2 in itertools.combinations(report.blocks, 2):
        cross = b1.subspace.basis.conj().T @ b2.subspace.basis
        assert np.max(np.abs(cross)) < 1e-9


def test_classify_invariant_under_permutation_and_phase():
    rng = np.random.Generator(np.random.Philox(42))
    spec = TypeSpec(n=5, partition=Partition((2, 2, 1)), seed=3)
    base = generate_from_type(spec)
    ref = classify(ProductBasis(5, base.vectors))
    assert ref.valid
    for _ in range(5):
        perm = rng.permutation(10)
        phases = np.exp(2j * np.pi * rng.random(10))
        vecs = [phases[k] * base.vectors[perm[k]] for k in range(10)]
        report = classify(ProductBasis(5, vecs))
        assert report.valid
        assert report.right_type == ref.right_type
        for blk, blk_ref in zip(report.blocks, ref.blocks):
            assert blk.multiplicity == blk_ref.multiplicity
        # same multiset of block subspaces
        for blk in report.blocks:
            assert any(
                blk.multiplicity == other.multiplicity
                and subspace_equal(blk.subspace, other.subspace)
                for other in ref.blocks
            )


def test_left_classify_d4_families():
    b0 = named_family(FamilyParams("d4_B0"))
    assert left_classify(b0) == Partition((2,))
    b1 = named_family(FamilyParams("d4_B1"))
    assert left_classify(b1) == Partition((1, 1))


def test_left_classify_undefined_beyond_n2():
    assert left_classify(named_family(FamilyParams("d6_B0"))) is None
    assert left_classify(computational_basis(3)) is None


def test_swap_factors_roundtrip_preserves_right_type():
    basis = named_family(FamilyParams("d4_B1"))
    double = swap_factors(swap_factors(basis))
    assert classify(double).right_type == classify(basis).right_type


def test_mu_check_pauli_product_pair():
    triple = named_family(FamilyParams("d4_mupb_triple"))
    ok, dev = mu_check(list(triple[0].vectors), list(triple[1].vectors))
    assert ok
    assert dev < 1e-12


def test_mu_check_basis_against_itself():
    basis = computational_basis(2)
    ok, dev = mu_check(list(basis.vectors), list(basis.vectors))
    assert not ok
    assert abs(dev - (1 - 1 / 4)) < 1e-15


def test_mu_check_rejects_non_basis():
    eye = np.eye(3, dtype=complex)
    good = [eye[:, k] for k in range(3)]
    bad = [eye[:, 0], eye[:, 0], eye[:, 2]]
    with pytest.raises(ValueError, match="not-a-basis"):
        mu_check(good, bad)
    with pytest.raises(ValueError, match="not-a-basis"):
        mu_check(good[:2], good[:2])


def test_product_basis_validation():
    eye = np.eye(4, dtype=complex)
    with pytest.raises(ValueError):
        ProductBasis(2, [eye[:, 0]])
    with pytest.raises(ValueError, match="not-normalized"):
        ProductBasis(2, [2 * eye[:, 0], eye[:, 1], eye[:, 2], eye[:, 3]])
