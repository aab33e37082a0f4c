# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Test the delta_cup.py file."""

import collections
import itertools
import logging
import random

import numpy as np
import pytest

from heislift.atlas import atlas
from heislift.atlas.atlas import ClassicalGroupSpec
from heislift.cohomology import cochain
from heislift.cohomology import delta_cup
from heislift.cohomology import ff_linalg
from heislift.cohomology.cochain import CochainComplex
from heislift.cohomology.cochain import GradedActionPair
from heislift.cohomology.cochain import ToyPhiGammaModule
from heislift.cohomology.delta_cup import BilinearPairingSpace
from heislift.cohomology.delta_cup import DeltaAction
from heislift.cohomology.nilpotent2 import BlockRealization
from heislift.cohomology.nilpotent2 import Class2Algebra
from heislift.errors import DegeneratePairing
from heislift.errors import DoesNotDescend
from heislift.errors import InvariantViolation
from heislift.errors import NotACocycle
from heislift.errors import NotAnInvolution
from heislift.errors import NotOrthogonal

HEISLIFT_TEST_LOG = logging.getLogger("heislift_test")
logging.basicConfig(level=logging.DEBUG)
logging.getLogger("flake8").setLevel(logging.ERROR)

SWAP = [[0, 1], [1, 0]]


def levi_pair(prime, f_diag, g_diag=(1, 1, 1)):
    """GradedActionPair: 1+1+1 realization with diagonal Levi elements."""
    realization = BlockRealization(1, 1, 1, prime)
    return GradedActionPair.from_levi(realization, np.diag(f_diag).astype(object), np.diag(g_diag).astype(object))


def unipotent_pair(f_1, g_1, structure=None):
    """GradedActionPair: Explicit pair over F_5 with trivial gr⁰."""
    algebra = Class2Algebra.from_structure(5, [[[0, 1], [-1, 0]]] if structure is None else structure, dim1=2)
    return GradedActionPair(ToyPhiGammaModule.from_lists(5, f_1, g_1), ToyPhiGammaModule.from_lists(5, [[1]], [[1]]),
                            algebra)


def test_action_must_be_involution():
    """j² = 1 on both pieces."""
    with pytest.raises(NotAnInvolution):
        DeltaAction.from_matrices(levi_pair(5, (1, 1, 1)), [[2, 0], [0, 1]], [[1]])


def test_swap_is_classical():
    """Swapping the summands with j = −1 on gr⁰ over a symmetric torus."""
    pair = levi_pair(5, (2, 1, 3))
    action = DeltaAction.from_matrices(pair, SWAP, [[-1]])
    report = delta_cup.is_classical(action)
    assert report.classical
    assert report.witness is None


def test_identity_is_not_classical():
    """j = 1 keeps each summand."""
    report = delta_cup.is_classical(DeltaAction.from_matrices(levi_pair(5, (1, 1, 1)), [[1, 0], [0, 1]], [[1]]))
    assert not report.swap_holds
    assert not report.classical
    assert "summand 0" in report.witness


def test_sign_flip_is_not_classical():
    """j = diag(1, −1) fixes the first summand."""
    report = delta_cup.is_classical(DeltaAction.from_matrices(levi_pair(5, (1, 1, 1)), [[1, 0], [0, -1]], [[1]]))
    assert not report.classical


def test_descends():
    """A swap does not commute with f = diag(1, 2, 1), which scales the summands differently."""
    action = DeltaAction.from_matrices(levi_pair(5, (1, 2, 1)), SWAP, [[-1]])
    with pytest.raises(DoesNotDescend):
        delta_cup.is_classical(action)


def test_induced_on_cohomology():
    """The swap permutes the basis of H⁰ of the trivial module."""
    action = DeltaAction.from_matrices(levi_pair(5, (1, 1, 1)), SWAP, [[-1]])
    assert delta_cup.induced_on_cohomology(action, 0).tolist() == [[0, 1], [1, 0]]
    assert delta_cup.induced_on_cohomology(action, 2, piece=0).tolist() == [[4]]


def _random_summand_cocycle(rng, pair, index, sizes=(1, 1)):
    summand = delta_cup.restrict(pair.m1, delta_cup.summand_indices(sizes, index))
    basis = CochainComplex(summand).cocycles(1)
    coeffs = np.array([rng.randrange(pair.prime) for _ in range(basis.shape[0])], dtype=np.int64)
    return list(coeffs.dot(basis) % pair.prime) if basis.shape[0] else [0] * (2 * sizes[index])


def test_cup_block_identities():
    """Zeros on zero input and on random cocycles of each summand."""
    pair = levi_pair(7, (3, 1, 5), (2, 2, 4))
    residuals = delta_cup.cup_block_identities(pair, [0, 0], [0, 0], [0, 0], [0, 0])
    assert all(not np.any(r) for r in residuals)
    rng = random.Random(9)
    for _ in range(30):
        cocycles = [_random_summand_cocycle(rng, pair, index) for index in (0, 1, 0, 1)]
        residuals = delta_cup.cup_block_identities(pair, *cocycles)
        assert len(residuals) == 5
        assert all(not np.any(r % 7) for r in residuals)


def test_cup_block_identities_errors():
    """Non-cocycles and brackets that live inside one summand are rejected."""
    pair = levi_pair(7, (2, 1, 1))
    with pytest.raises(NotACocycle):
        delta_cup.cup_block_identities(pair, [1, 1], [0, 0], [0, 0], [0, 0])
    with pytest.raises(InvariantViolation):
        delta_cup.cup_block_identities(unipotent_pair([[1, 0], [0, 1]], [[1, 0], [0, 1]]), [0, 0, 0, 0], [],
                                       [0, 0, 0, 0], [], sizes=(2, 0))


def test_transfer_zero_bracket():
    """Without a bracket the cup vanishes everywhere."""
    pair = unipotent_pair([[1, 1], [0, 1]], [[1, 2], [0, 1]], structure=[[[0, 0], [0, 0]]])
    action = DeltaAction.from_matrices(pair, [[1, 0], [0, 1]], [[1]], summands=(1, 1))
    report = delta_cup.nontriviality_transfer_check(action)
    assert report.as_tuple()[:2] == (False, False)


def test_transfer_nonvanishing_cup():
    """F = U, G = U²: u ∪ u is non-zero, fixed by j = 1 and killed by j = −1."""
    pair = unipotent_pair([[1, 1], [0, 1]], [[1, 2], [0, 1]])
    fixed = DeltaAction.from_matrices(pair, [[1, 0], [0, 1]], [[1]], summands=(1, 1))
    assert delta_cup.nontriviality_transfer_check(fixed).as_tuple() == (True, True, True)
    negated = DeltaAction.from_matrices(pair, [[-1, 0], [0, -1]], [[1]], summands=(1, 1))
    assert delta_cup.nontriviality_transfer_check(negated).as_tuple() == (False, True, True)


ATLAS_GROUPS = (("gsp", 2, 1), ("go", 3, 1), ("go", 4, 1), ("go", 5, 2), ("unitary", 4, 1))


def atlas_actions(rng, count, prime):
    """Yield the atlas involutions acting on random commuting Levi pairs, cycling through ATLAS_GROUPS."""
    tables = [atlas.build_parabolic(ClassicalGroupSpec(family, n, k, prime)) for family, n, k in ATLAS_GROUPS]
    for index in range(count):
        data = tables[index % len(tables)]
        f_levi, g_levi = atlas.commuting_levi_pair(data.spec, rng)
        yield atlas.delta_action(data, atlas.graded_pair(data, f_levi, g_levi))


def direct_transfer_search(action):
    """(on_invariants, overall) by testing u ∪ u and ju − u against coboundaries for every class u."""
    pair = action.pair
    prime = pair.prime
    module = pair.m1.reduced()
    coboundaries = CochainComplex(module).coboundaries(1)
    boundaries2 = CochainComplex(pair.m0.reduced()).coboundaries(2)
    reps = cochain.cohomology(module, 1).representatives
    basis = np.array(reps, dtype=np.int64).reshape(len(reps), 2 * module.dim)
    overall = on_invariants = False
    for coeffs in itertools.product(range(prime), repeat=len(reps)):
        cocycle = np.array(coeffs, dtype=np.int64).dot(basis) % prime
        if ff_linalg.in_span(boundaries2, list(cochain.cup(pair, cocycle, cocycle) % prime), prime):
            continue
        overall = True
        moved = action.apply(cocycle) - cocycle
        if ff_linalg.in_span(coboundaries, list(moved % prime), prime):
            on_invariants = True
            break
    return on_invariants, overall


def check_transfer_on_atlas(rng, count):
    """The transfer check agrees with the direct search on classical atlas instances.

    Returns:
        collections.Counter: How often each (on_invariants, overall) outcome occurred
    """
    outcomes = collections.Counter()
    for action in atlas_actions(rng, count, 3):
        assert delta_cup.is_classical(action).classical
        report = delta_cup.nontriviality_transfer_check(action, budget=3 ** 8)
        direct = direct_transfer_search(action)
        assert report.as_tuple()[:2] == direct
        outcomes[direct] += 1
    HEISLIFT_TEST_LOG.debug("transfer outcomes: %s", dict(outcomes))
    return outcomes


def test_transfer_on_atlas():
    """Random commuting Levi pairs over F_3 on small parabolics."""
    assert sum(check_transfer_on_atlas(random.Random(61), 5).values()) == 5


@pytest.mark.slow
def test_transfer_on_atlas_acceptance():
    """50 random atlas instances."""
    assert sum(check_transfer_on_atlas(random.Random(62), 50).values()) == 50


def test_transfer_on_gsp4_levi_pairs():
    """f = diag(1, U, 1), g = f² on GSp_4 gives a cup that survives on j-fixed classes; trivial actions do not."""
    data = atlas.build_parabolic(ClassicalGroupSpec("gsp", 2, 1, 5))
    f_levi = np.identity(4, dtype=object)
    f_levi[1, 2] = 1
    action = atlas.delta_action(data, atlas.graded_pair(data, f_levi, f_levi.dot(f_levi) % 5))
    assert delta_cup.is_classical(action).classical
    assert delta_cup.nontriviality_transfer_check(action).as_tuple()[:2] == (True, True)
    assert direct_transfer_search(action) == (True, True)

    data = atlas.build_parabolic(ClassicalGroupSpec("go", 3, 1, 3))
    identity = np.identity(3, dtype=object)
    trivial = atlas.delta_action(data, atlas.graded_pair(data, identity, identity))
    assert delta_cup.nontriviality_transfer_check(trivial).as_tuple()[:2] == (False, False)
    assert direct_transfer_search(trivial) == (False, False)


def check_block_identities_on_atlas(rng, pairs, per_pair):
    """Block identities vanish and j is compatible with the cup on random summand cocycles."""
    for action in atlas_actions(rng, pairs, 5):
        pair, sizes = action.pair, action.summands
        for _ in range(per_pair):
            c1, c2, c1p, c2p = (_random_summand_cocycle(rng, pair, index, sizes) for index in (0, 1, 0, 1))
            residuals = delta_cup.cup_block_identities(pair, c1, c2, c1p, c2p)
            assert all(not np.any(r % 5) for r in residuals)
            first = delta_cup.embed_summand(sizes, 0, c1)
            second = delta_cup.embed_summand(sizes, 1, c2)
            lhs = action.apply(cochain.cup(pair, first, second), piece=0, degree=2)
            rhs = cochain.cup(pair, action.apply(first), action.apply(second))
            assert not np.any((lhs - rhs) % 5)


def test_cup_block_identities_on_atlas():
    """60 checks over atlas Levi pairs."""
    check_block_identities_on_atlas(random.Random(63), 6, 10)


@pytest.mark.slow
def test_cup_block_identities_on_atlas_acceptance():
    """500 checks over atlas Levi pairs."""
    check_block_identities_on_atlas(random.Random(64), 25, 20)


def test_orthogonal_subspace_bound_examples():
    """Standard pairing on F_5² with orthogonal lines, and the empty case."""
    space = BilinearPairingSpace.from_lists(5, [[1, 0], [0, 1]])
    assert delta_cup.orthogonal_subspace_bound(space, [[1, 0]], [[0, 1]])
    assert delta_cup.orthogonal_subspace_bound(space, [], [])
    with pytest.raises(NotOrthogonal):
        delta_cup.orthogonal_subspace_bound(space, [[1, 0]], [[1, 0]])
    with pytest.raises(DegeneratePairing):
        delta_cup.orthogonal_subspace_bound(BilinearPairingSpace.from_lists(5, [[1, 0], [0, 0]]), [], [])


def _random_orthogonal_instances(rng, count):
    produced = 0
    while produced < count:
        dim = rng.randint(1, 6)
        matrix = np.array([[rng.randrange(5) for _ in range(dim)] for _ in range(dim)], dtype=np.int64)
        if ff_linalg.rank(matrix, 5) != dim:
            continue
        hx = np.array([[rng.randrange(5) for _ in range(dim)] for _ in range(rng.randint(0, dim))],
                      dtype=np.int64).reshape(-1, dim)
        annihilator = ff_linalg.kernel(hx.dot(matrix) % 5, 5, cols=dim)
        picks = rng.randint(0, annihilator.shape[0])
        coeffs = np.array([[rng.randrange(5) for _ in range(annihilator.shape[0])] for _ in range(picks)],
                          dtype=np.int64).reshape(picks, annihilator.shape[0])
        hy = coeffs.dot(annihilator) % 5
        produced += 1
        yield BilinearPairingSpace.from_lists(5, matrix.tolist()), hx.tolist(), hy.tolist()


def test_orthogonal_subspace_bound_random():
    """Random orthogonal pairs never break the bound."""
    for space, hx, hy in _random_orthogonal_instances(random.Random(13), 60):
        assert delta_cup.orthogonal_subspace_bound(space, hx, hy)


@pytest.mark.slow
def test_orthogonal_subspace_bound_acceptance():
    """500 random non-degenerate pairings over F_5 of dimension at most 6."""
    for space, hx, hy in _random_orthogonal_instances(random.Random(14), 500):
        assert delta_cup.orthogonal_subspace_bound(space, hx, hy)


def test_dimension_count():
    """h¹ ≥ h⁰ + h² + d·a·b and the half-dimension check."""
    count = delta_cup.dimension_count(2, 1, 1, 0, 1)
    assert (count.h1_lower, count.h2_upper, count.may_fail) == (3, 1, False)
    assert delta_cup.dimension_count(1, 2, 3, 1, 0).may_fail
    with pytest.raises(ValueError):
        delta_cup.dimension_count(1, 0, 1, 0, 0)
