"""Fock-space bookkeeping and ladder-operator construction."""

import itertools

import numpy as np
import pytest

from oponet.fock import (
    FockSpace,
    annihilation,
    creation,
    embed,
    number_op,
    parity_op,
    single_mode_annihilation,
)


class TestFockSpace:
    def test_joint_dim(self):
        assert FockSpace(2, 3).joint_dim == 9
        assert FockSpace(3, 4).joint_dim == 64

    def test_n_max(self):
        assert FockSpace(1, 13).n_max == 12

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            FockSpace(0, 3)
        with pytest.raises(ValueError):
            FockSpace(2, 1)

    def test_flat_index_origin(self):
        space = FockSpace(2, 14)
        assert space.flat_index((0, 0)) == 0

    def test_flat_index_mode1_most_significant(self):
        space = FockSpace(2, 14)
        assert space.flat_index((1, 0)) == 14
        assert space.flat_index((0, 1)) == 1

    def test_round_trip_all_indices(self):
        space = FockSpace(3, 4)
        for flat in range(space.joint_dim):
            assert space.flat_index(space.unflatten(flat)) == flat
        for occ in itertools.product(range(4), repeat=3):
            assert space.unflatten(space.flat_index(occ)) == occ

    def test_out_of_range(self):
        space = FockSpace(2, 3)
        with pytest.raises(ValueError):
            space.flat_index((3, 0))
        with pytest.raises(ValueError):
            space.flat_index((0, -1))
        with pytest.raises(ValueError):
            space.unflatten(9)


class TestLadderOperators:
    def test_single_mode_elements(self):
        a = single_mode_annihilation(3).toarray()
        assert a[0, 1] == 1.0
        assert a[1, 2] == pytest.approx(np.sqrt(2))
        assert np.count_nonzero(a) == 2

    def test_real_in_fock_basis(self):
        a = annihilation(FockSpace(2, 5), 1)
        assert np.abs(np.asarray(a.todense()).imag).max() == 0.0

    def test_creation_is_real_transpose(self):
        space = FockSpace(2, 4)
        a = annihilation(space, 2).toarray()
        ad = creation(space, 2).toarray()
        assert np.array_equal(ad, a.T)

    def test_embedding_mode2_d2(self):
        space = FockSpace(2, 2)
        a2 = annihilation(space, 2).toarray()
        nz = {(i, j) for i, j in zip(*np.nonzero(a2))}
        assert nz == {
            (space.flat_index((0, 0)), space.flat_index((0, 1))),
            (space.flat_index((1, 0)), space.flat_index((1, 1))),
        }
        assert a2[space.flat_index((0, 0)), space.flat_index((0, 1))] == 1.0

    def test_number_op_diagonal(self):
        space = FockSpace(1, 6)
        n = number_op(space, 1).toarray()
        assert np.allclose(np.diag(n), np.arange(6))
        assert np.count_nonzero(n - np.diag(np.diag(n))) == 0

    def test_truncated_commutator(self):
        # [a, a†] = I except the (n_max, n_max) element, which is -n_max
        d = 6
        a = single_mode_annihilation(d).toarray()
        comm = a @ a.T - a.T @ a
        expected = np.eye(d)
        expected[d - 1, d - 1] = -(d - 1)
        assert np.allclose(comm, expected, atol=1e-14)

    def test_quadratic_products_vs_dense(self):
        d = 8
        a = single_mode_annihilation(d).toarray()
        a_direct = np.diag(np.sqrt(np.arange(1, d)), 1)
        assert np.allclose(a, a_direct)
        assert np.allclose(a @ a, a_direct @ a_direct)
        assert np.allclose(a.T @ a, a_direct.T @ a_direct)


class TestEmbed:
    def test_embed_identity(self):
        import scipy.sparse as sp

        space = FockSpace(3, 3)
        out = embed(sp.identity(3, format="csr"), space, 2)
        assert (out != sp.identity(space.joint_dim)).nnz == 0

    def test_embed_number_op_eigenvalue(self):
        space = FockSpace(2, 4)
        n1 = number_op(space, 1)
        v = np.zeros(space.joint_dim)
        v[space.flat_index((2, 0))] = 1.0
        assert np.allclose(n1 @ v, 2 * v)

    def test_distinct_modes_commute(self):
        space = FockSpace(2, 4)
        a1 = annihilation(space, 1)
        ad2 = creation(space, 2)
        diff = (a1 @ ad2 - ad2 @ a1).toarray()
        assert np.abs(diff).max() == 0.0

    def test_dimension_mismatch(self):
        import scipy.sparse as sp

        with pytest.raises(ValueError):
            embed(sp.identity(4, format="csr"), FockSpace(2, 3), 1)
        with pytest.raises(ValueError):
            annihilation(FockSpace(2, 3), 3)


def test_parity_diagonal():
    space = FockSpace(2, 3)
    P = parity_op(space).toarray()
    for flat in range(space.joint_dim):
        occ = space.unflatten(flat)
        assert P[flat, flat] == (-1.0) ** sum(occ)
