# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Test the cochain.py file."""

import itertools
import logging
import random

import numpy as np
import pytest

from heislift.cohomology import cochain
from heislift.cohomology.cochain import CochainComplex
from heislift.cohomology.cochain import GradedActionPair
from heislift.cohomology.cochain import ToyPhiGammaModule
from heislift.cohomology.nilpotent2 import BlockRealization
from heislift.cohomology.nilpotent2 import Class2Algebra
from heislift.errors import NonCommutingOperators
from heislift.errors import NotACocycle
from heislift.errors import NotEquivariant
from heislift.errors import SearchSpaceTooLarge

HEISLIFT_TEST_LOG = logging.getLogger("heislift_test")
logging.basicConfig(level=logging.DEBUG)
logging.getLogger("flake8").setLevel(logging.ERROR)

ANTIDIAGONAL = [[[0, 1], [-1, 0]]]


def explicit_pair(prime, f_1, g_1, f_0=1, g_0=1, structure=None):
    """GradedActionPair: Two-dimensional gr¹, one-dimensional gr⁰, antidiagonal bracket by default."""
    m1 = ToyPhiGammaModule.from_lists(prime, f_1, g_1)
    m0 = ToyPhiGammaModule.from_lists(prime, [[f_0]], [[g_0]])
    algebra = Class2Algebra.from_structure(prime, ANTIDIAGONAL if structure is None else structure, dim1=2)
    return GradedActionPair(m1, m0, algebra)


def torus_pair():
    """GradedActionPair: F = diag(2, 3), G = diag(3, 2) over F_5, both of determinant one."""
    return explicit_pair(5, [[2, 0], [0, 3]], [[3, 0], [0, 2]])


def dims(module):
    """tuple: (h⁰, h¹, h²)."""
    return tuple(cochain.cohomology(module, degree).dimension for degree in (0, 1, 2))


def test_module_rejects_non_commuting():
    """F·G != G·F."""
    with pytest.raises(NonCommutingOperators):
        ToyPhiGammaModule.from_lists(5, [[1, 1], [0, 1]], [[1, 0], [1, 1]])


def test_complex_squares_to_zero():
    """d1·d0 = 0 for commuting operators over Z/7^2."""
    module = ToyPhiGammaModule.from_lists(7, [[2, 1], [0, 2]], [[3, 5], [0, 3]], precision=2)
    complex_ = CochainComplex(module)
    assert complex_.dims == (2, 4, 2)
    assert not np.any(complex_.d1.dot(complex_.d0) % 49)


def test_cohomology_over_f_p():
    """Trivial, unipotent and invertible (F − 1) examples over F_5."""
    assert dims(ToyPhiGammaModule.from_lists(5, [[1]], [[1]])) == (1, 2, 1)
    assert dims(ToyPhiGammaModule.from_lists(5, [[1, 1], [0, 1]], [[1, 0], [0, 1]])) == (1, 2, 1)
    h0, _, h2 = dims(ToyPhiGammaModule.from_lists(5, [[2]], [[1]]))
    assert (h0, h2) == (0, 0)


def test_cohomology_representatives_are_cocycles():
    """Representatives are closed and independent modulo coboundaries."""
    module = ToyPhiGammaModule.from_lists(5, [[1, 1], [0, 1]], [[1, 0], [0, 1]])
    complex_ = CochainComplex(module)
    reps = cochain.cohomology(module, 1).representatives
    assert len(reps) == 2
    for rep in reps:
        assert complex_.is_cocycle(1, rep)
    assert cochain.class_coordinates(module, 1, reps[1]) == (0, 1)
    boundary = complex_.apply_d0([3, 4])
    assert cochain.class_coordinates(module, 1, boundary) == (0, 0)


def test_cohomology_over_z_mod_p_power():
    """F = 1 + 5 on Z/125: every group is Z/5."""
    module = ToyPhiGammaModule.from_lists(5, [[6]], [[1]], precision=3)
    assert cochain.cohomology(module, 0).exponents == (1,)
    assert cochain.cohomology(module, 1).exponents == (1, 1)
    assert cochain.cohomology(module, 2).exponents == (1,)
    assert cochain.cohomology(module, 1).length == 2


def test_class_coordinates_needs_cocycle():
    """(0, 1) is not closed when F − 1 is invertible."""
    module = ToyPhiGammaModule.from_lists(5, [[2]], [[1]])
    with pytest.raises(NotACocycle):
        cochain.class_coordinates(module, 1, [0, 1])


def test_pair_equivariance():
    """F₁ must scale the bracket by F₀."""
    with pytest.raises(NotEquivariant):
        explicit_pair(5, [[2, 0], [0, 1]], [[1, 0], [0, 1]])


def test_q_map_hand_expansion():
    """With F = 1 and G unipotent, Q(x, y) = ½[x, Gx] = −x₂²/2."""
    pair = explicit_pair(5, [[1, 0], [0, 1]], [[1, 1], [0, 1]])
    assert cochain.q_map(pair, [0, 0, 0, 0]).tolist() == [0]
    assert cochain.q_map(pair, [0, 1, 3, 3]).tolist() == [2]
    assert cochain.q_map(pair, [1, 2, 0, 0]).tolist() == [3]


def test_cup_polarises_q():
    """c ∪ 0 = 0, c ∪ c = Q(c) and symmetry."""
    pair = torus_pair()
    left, right = [1, 1, 2, 3], [2, 4, 4, 2]
    assert cochain.cup(pair, left, [0, 0, 0, 0]).tolist() == [0]
    assert cochain.cup(pair, left, left).tolist() == cochain.q_map(pair, left).tolist()
    assert cochain.cup(pair, left, right).tolist() == cochain.cup(pair, right, left).tolist()


def test_cup_on_cohomology():
    """The zero class cups to zero; non-cocycles are rejected."""
    pair = explicit_pair(5, [[1, 1], [0, 1]], [[1, 2], [0, 1]])
    assert cochain.cup_on_cohomology(pair, [0, 0, 0, 0], [1, 1, 0, 2]) == (0,)
    assert cochain.cup_on_cohomology(pair, [0, 1, 0, 2], [0, 1, 0, 2]) == (1,)
    with pytest.raises(NotACocycle):
        cochain.cup_on_cohomology(pair, [0, 1, 0, 0], [0, 0, 0, 0])
    assert len(cochain.cup_pairing_matrix(pair)) == 2


def check_cup_independent_of_representatives(pair):
    """Shifting both cocycles by every pair of coboundaries leaves the class of the cup unchanged.

    Returns:
        int: Number of representative pairs with a non-zero cup class
    """
    prime = pair.prime
    complex1 = CochainComplex(pair.m1)
    shifts = [complex1.apply_d0(v) for v in itertools.product(range(prime), repeat=pair.m1.dim)]
    reps = [np.array(rep, dtype=object) for rep in cochain.cohomology(pair.m1.reduced(), 1).representatives]
    nonzero = 0
    for left in reps:
        for right in reps:
            expected = cochain.cup_on_cohomology(pair, list(left), list(right))
            nonzero += any(expected)
            for left_shift in shifts:
                for right_shift in shifts:
                    moved = cochain.cup_on_cohomology(pair, list((left + left_shift) % prime),
                                                      list((right + right_shift) % prime))
                    assert moved == expected
    return nonzero


def test_cup_independent_of_representatives():
    """Unipotent and trivial actions on a two-dimensional gr¹ over F_3."""
    assert check_cup_independent_of_representatives(explicit_pair(3, [[1, 1], [0, 1]], [[1, 2], [0, 1]])) > 0
    assert check_cup_independent_of_representatives(explicit_pair(3, [[1, 0], [0, 1]], [[1, 0], [0, 1]])) == 0
    check_cup_independent_of_representatives(explicit_pair(3, [[2, 0], [0, 2]], [[1, 1], [0, 1]]))


@pytest.mark.slow
def test_cup_independent_of_representatives_three_dimensional():
    """A unipotent Levi pair on the 1+1+2 realization, where gr¹ is three-dimensional."""
    realization = BlockRealization(1, 1, 2, 3)
    f_levi = np.identity(4, dtype=object)
    f_levi[3, 2] = 1
    g_levi = f_levi.dot(f_levi) % 3
    check_cup_independent_of_representatives(GradedActionPair.from_levi(realization, f_levi, g_levi))


def test_classify_abelian():
    """Zero bracket: solutions are Z¹(M1) x Z¹(M0)."""
    algebra = Class2Algebra.from_structure(3, [[[0]]], dim1=1)
    trivial = ToyPhiGammaModule.from_lists(3, [[1]], [[1]])
    pair = GradedActionPair(trivial, trivial, algebra)
    result = cochain.classify_extensions(pair)
    assert result.count == 3 ** 2 * 3 ** 2
    assert result.extendable == 9
    assert result.class_count == 9
    assert result.h1_dimension == 2
    assert result.oracle_agrees is None


def test_classify_trivial_actions_with_oracle():
    """Trivial actions on the 1+1+1 realization: every pair solves, and the matrix relation agrees."""
    realization = BlockRealization(1, 1, 1, 3)
    identity = np.identity(3, dtype=object)
    pair = GradedActionPair.from_levi(realization, identity, identity)
    result = cochain.classify_extensions(pair, oracle=True)
    assert result.count == 3 ** 4 * 3 ** 2
    assert result.oracle_count == result.count
    assert result.oracle_agrees


def test_classify_torus_with_oracle():
    """f = diag(1, 2, 1): only x-type cocycles survive, and brute force over the matrix relation agrees."""
    realization = BlockRealization(1, 1, 1, 3)
    pair = GradedActionPair.from_levi(realization, np.diag([1, 2, 1]).astype(object),
                                      np.identity(3, dtype=object))
    result = cochain.classify_extensions(pair, oracle=True, workers=2)
    assert result.count == 81
    assert result.oracle_agrees
    assert result.h1_dimension == 0
    assert all(cochain.is_heisenberg_cocycle(pair, c) for c in result.cocycles)


def block_levi_pairs(rng, realization, count):
    """Commuting Levi pairs (f, g) with g a block scalar times a power of f."""
    prime = realization.prime
    pairs = []
    for _ in range(count):
        f_levi = np.zeros((realization.size, realization.size), dtype=object)
        g_scalars = []
        start = 0
        for block in (realization.a, realization.b, realization.c):
            for i in range(block):
                f_levi[start + i, start + i] = rng.randrange(1, prime)
                for j in range(i):
                    f_levi[start + i, start + j] = rng.randrange(prime)
            g_scalars.extend([rng.randrange(1, prime)] * block)
            start += block
        g_levi = np.diag(g_scalars).astype(object)
        for _ in range(rng.randrange(3)):
            g_levi = g_levi.dot(f_levi) % prime
        pairs.append((f_levi, g_levi))
    return pairs


def check_oracle_family(rng, shapes, per_shape):
    """Classification and brute force over the matrix relation agree on random Levi pairs."""
    for blocks in shapes:
        realization = BlockRealization(*blocks, 3)
        for f_levi, g_levi in block_levi_pairs(rng, realization, per_shape):
            pair = GradedActionPair.from_levi(realization, f_levi, g_levi)
            result = cochain.classify_extensions(pair, budget=3 ** 12, workers=2, oracle=True)
            HEISLIFT_TEST_LOG.debug("blocks %s: %d solutions, h1 = %d", blocks, result.count, result.h1_dimension)
            assert result.oracle_agrees


def test_classify_oracle_family():
    """Random commuting Levi pairs on the 1+1+1 realization, a search over 3^6 pairs."""
    check_oracle_family(random.Random(51), [(1, 1, 1)], 8)


@pytest.mark.slow
def test_classify_oracle_family_acceptance():
    """Every realization whose oracle search has dimension at most 12 over F_3."""
    check_oracle_family(random.Random(52), [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2)], 3)


def test_classify_budget():
    """The candidate count is checked before enumerating."""
    realization = BlockRealization(1, 1, 1, 3)
    identity = np.identity(3, dtype=object)
    pair = GradedActionPair.from_levi(realization, identity, identity)
    with pytest.raises(SearchSpaceTooLarge):
        cochain.classify_extensions(pair, budget=100)


def test_hl_predicates():
    """HL1 on the zero class, HL3 failing on a trivial H², and an instance where all three hold."""
    pair = torus_pair()
    h_basis = [[1, 1, 2, 3]]
    report = cochain.hl_predicates(pair, h_basis, [0, 0, 0, 0])
    assert report.as_tuple() == (True, True, True)
    assert report.all
    assert not cochain.hl_predicates(pair, [], [1, 0, 0, 0]).hl1

    realization = BlockRealization(1, 1, 1, 5)
    scaled = GradedActionPair.from_levi(realization, np.diag([2, 1, 1]).astype(object),
                                        np.identity(3, dtype=object))
    assert not cochain.hl_predicates(scaled, [], [0, 0, 0, 0]).hl3


def test_truncated_heisenberg_system():
    """Σ records the cups of the cocycle basis; Q of a combination is the quadratic form."""
    pair = explicit_pair(5, [[1, 1], [0, 1]], [[1, 2], [0, 1]])
    complex1 = CochainComplex(pair.m1)
    xs = [list(row) for row in complex1.cocycles(1)]
    system = cochain.truncated_heisenberg_system(pair)
    assert (system.r, system.s, system.t) == (len(xs), 1, 2)
    assert not np.any(system.d.array())
    sigma = system.sigma[0].array()
    assert not np.any((sigma - sigma.T) % 5)
    coeffs = np.array([1, 2, 3][:len(xs)], dtype=object)
    combination = coeffs.dot(np.array(xs, dtype=object)) % 5
    assert int(coeffs.dot(sigma).dot(coeffs)) % 5 == int(cochain.q_map(pair, combination)[0])


def test_pair_documents():
    """Explicit and realization documents round trip."""
    pair = torus_pair()
    assert cochain.pair_from_document(pair.to_document()) == pair
    realization = BlockRealization(1, 1, 1, 3)
    levi_pair = GradedActionPair.from_levi(realization, np.diag([1, 2, 1]).astype(object),
                                           np.identity(3, dtype=object))
    parsed = cochain.pair_from_document(levi_pair.to_document())
    assert parsed == levi_pair
    assert parsed.realization is not None
