# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Involutions on graded cochain data: classicality, the two-summand cup identities, the non-triviality transfer
to invariants, and the orthogonal subspace bound for non-degenerate pairings.

Everything here is decided over F_p on the reduction of the graded pair.
"""

from dataclasses import dataclass
import itertools
import logging
from typing import Optional
from typing import Tuple

import numpy as np

from ..errors import DegeneratePairing
from ..errors import DimensionMismatch
from ..errors import DoesNotDescend
from ..errors import InvariantViolation
from ..errors import NotACocycle
from ..errors import NotAnInvolution
from ..errors import NotEquivariant
from ..errors import NotOrthogonal
from ..errors import SearchSpaceTooLarge
from ..heisenberg.heisenberg import DEFAULT_BUDGET
from ..padic.padic_core import check_prime
from . import ff_linalg
from .cochain import CochainComplex
from .cochain import ToyPhiGammaModule
from .cochain import class_coordinates
from .cochain import cohomology
from .cochain import cup
from .nilpotent2 import as_matrix

LOG = logging.getLogger("heislift")


def summand_sizes(pair):
    """tuple: (a·b, b·c) from the attached realization."""
    if pair.realization is None:
        raise DimensionMismatch("summand sizes are needed for a pair without a realization")
    real = pair.realization
    return real.a * real.b, real.b * real.c


def summand_indices(sizes, index):
    """range: gr¹ coordinates of summand 0 or 1."""
    return range(sizes[0]) if index == 0 else range(sizes[0], sizes[0] + sizes[1])


def restrict(module, indices):
    """The submodule on a stable set of coordinates.

    Args:
        module (ToyPhiGammaModule): The module
        indices (range): Coordinates of the summand

    Raises:
        NotEquivariant: If F or G mixes the summand with its complement

    Returns:
        ToyPhiGammaModule: The summand
    """
    indices = list(indices)
    others = [i for i in range(module.dim) if i not in indices]
    for name, operator in (("F", module.f_matrix()), ("G", module.g_matrix())):
        if np.any(operator[np.ix_(others, indices)] % module.modulus) or \
                np.any(operator[np.ix_(indices, others)] % module.modulus):
            raise NotEquivariant(f"{name} does not preserve the summand {indices[:1]}..{indices[-1:]}")
    return ToyPhiGammaModule.from_lists(module.prime, module.f_matrix()[np.ix_(indices, indices)],
                                        module.g_matrix()[np.ix_(indices, indices)], module.precision)


def embed_summand(sizes, index, cochain, degree=1):
    """Zero-pad a summand cochain to a cochain of gr¹.

    Args:
        sizes (tuple): Summand dimensions
        index (int): 0 or 1
        cochain (list): Cochain in summand coordinates
        degree (int): Degree of the cochain

    Returns:
        np.ndarray: Cochain in gr¹ coordinates
    """
    dim = sum(sizes)
    indices = list(summand_indices(sizes, index))
    copies = 2 if degree == 1 else 1
    cochain = list(cochain)
    if len(cochain) != copies * len(indices):
        raise DimensionMismatch(f"summand cochain of length {len(cochain)}, expected {copies * len(indices)}")
    full = np.zeros(copies * dim, dtype=object)
    for copy in range(copies):
        for pos, coord in enumerate(indices):
            full[copy * dim + coord] = cochain[copy * len(indices) + pos]
    return full


def project_summand(sizes, index, cochain, degree=1):
    """np.ndarray: The summand coordinates of a gr¹ cochain."""
    dim = sum(sizes)
    indices = list(summand_indices(sizes, index))
    copies = 2 if degree == 1 else 1
    cochain = np.array(cochain, dtype=object)
    return np.concatenate([cochain[[copy * dim + coord for coord in indices]] for copy in range(copies)]) \
        if indices else np.zeros(0, dtype=object)


@dataclass(frozen=True)
class DeltaAction:
    """j acting on gr¹ (j1) and gr⁰ (j0), diagonally on every cochain group, with gr¹ split in two summands."""
    pair: object
    j1: Tuple[Tuple[int, ...], ...]
    j0: Tuple[Tuple[int, ...], ...]
    summands: Tuple[int, int]

    def __post_init__(self):
        modulus = self.pair.modulus
        if sum(self.summands) != self.pair.m1.dim:
            raise DimensionMismatch(f"summands {self.summands} do not add up to dim gr1 = {self.pair.m1.dim}")
        checks = (("j1", self.j1_matrix(), self.pair.m1.dim), ("j0", self.j0_matrix(), self.pair.m0.dim))
        for name, matrix, dim in checks:
            if matrix.shape != (dim, dim):
                raise DimensionMismatch(f"{name} of shape {matrix.shape}, expected {dim}x{dim}")
            if np.any((matrix.dot(matrix) - np.identity(dim, dtype=object)) % modulus):
                raise NotAnInvolution(f"{name} does not square to the identity")

    @classmethod
    def from_matrices(cls, pair, j1, j0, summands=None):
        """Build an action, taking the summand sizes from the pair's realization when not given.

        Args:
            pair (GradedActionPair): The graded actions
            j1 (list): Involution on gr¹ coordinates
            j0 (list): Involution on gr⁰ coordinates
            summands (tuple): Sizes of the two gr¹ summands

        Returns:
            DeltaAction: The action
        """
        modulus = pair.modulus
        nested1 = tuple(tuple(int(x) % modulus for x in row) for row in j1)
        nested0 = tuple(tuple(int(x) % modulus for x in row) for row in j0)
        return cls(pair, nested1, nested0, tuple(summands) if summands is not None else summand_sizes(pair))

    def j1_matrix(self):
        """np.ndarray: j on gr¹."""
        return np.array(self.j1, dtype=object).reshape(self.pair.m1.dim, self.pair.m1.dim)

    def j0_matrix(self):
        """np.ndarray: j on gr⁰."""
        return np.array(self.j0, dtype=object).reshape(self.pair.m0.dim, self.pair.m0.dim)

    def check_descends(self):
        """Raise DoesNotDescend unless j commutes with F and G on both graded pieces."""
        modulus = self.pair.modulus
        for name, j_op, module in (("gr1", self.j1_matrix(), self.pair.m1), ("gr0", self.j0_matrix(), self.pair.m0)):
            for operator in (module.f_matrix(), module.g_matrix()):
                if np.any((j_op.dot(operator) - operator.dot(j_op)) % modulus):
                    raise DoesNotDescend(f"j does not commute with the differentials on {name}")

    def apply(self, cochain, piece=1, degree=1):
        """Apply j to a cochain of gr¹ (piece 1) or gr⁰ (piece 0).

        Args:
            cochain (list): Cochain coordinates
            piece (int): 1 or 0
            degree (int): Cochain degree, C¹ has two copies of the module

        Returns:
            np.ndarray: j(cochain)
        """
        modulus = self.pair.modulus
        j_op = self.j1_matrix() if piece == 1 else self.j0_matrix()
        dim = j_op.shape[0]
        cochain = as_matrix(cochain, modulus)
        copies = 2 if degree == 1 else 1
        if cochain.shape != (copies * dim,):
            raise DimensionMismatch(f"cochain of length {cochain.shape} for {copies} copies of dimension {dim}")
        parts = [j_op.dot(cochain[copy * dim:(copy + 1) * dim]) for copy in range(copies)]
        return (np.concatenate(parts) if parts else cochain) % modulus

    def to_document(self):
        """dict: {j1, j0, summands}."""
        return {"j1": [list(row) for row in self.j1], "j0": [list(row) for row in self.j0],
                "summands": list(self.summands)}


def action_from_document(pair, doc):
    """DeltaAction: Parse {j1, j0, summands} against a graded pair."""
    return DeltaAction.from_matrices(pair, doc["j1"], doc["j0"], doc.get("summands"))


@dataclass(frozen=True)
class ClassicalityReport:
    """Whether j swaps the summands in every degree and respects the cup product; witness names the first failure."""
    swap_holds: bool
    cup_compatible: bool
    witness: Optional[str] = None

    @property
    def classical(self):
        """bool: Both conditions hold."""
        return self.swap_holds and self.cup_compatible

    def to_document(self):
        """dict: Document form."""
        return {"classical": self.classical, "swap_holds": self.swap_holds, "cup_compatible": self.cup_compatible,
                "witness": self.witness}


def _swap_witness(action):
    """Find a cocycle of one summand whose image under j keeps a nonzero class in that summand."""
    pair = action.pair
    prime = pair.prime
    module = pair.m1.reduced()
    for index in (0, 1):
        summand = restrict(module, summand_indices(action.summands, index))
        if summand.dim == 0:
            continue
        complex_ = CochainComplex(summand)
        for degree in (0, 1, 2):
            coboundaries = complex_.coboundaries(degree)
            for cocycle in complex_.cocycles(degree):
                moved = action.apply(embed_summand(action.summands, index, cocycle, degree), 1, degree)
                back = ff_linalg.as_int(project_summand(action.summands, index, moved, degree), prime)
                if not ff_linalg.in_span(coboundaries, back.reshape(-1), prime):
                    return f"degree {degree}: j keeps {list(cocycle)} inside summand {index}"
    return None


def _cup_witness(action):
    """Check j(u ∪ v) = ju ∪ jv on cochain basis pairs, falling back to classes in H²."""
    pair = action.pair
    prime = pair.prime
    basis = CochainComplex(pair.m1.reduced()).cocycles(1)
    exact = True
    for left, right in itertools.combinations_with_replacement(list(basis), 2):
        lhs = action.apply(cup(pair, left, right), piece=0, degree=2)
        rhs = cup(pair, action.apply(left), action.apply(right))
        if np.any((lhs - rhs) % prime):
            exact = False
            break
    if exact:
        return None
    reps = cohomology(pair.m1.reduced(), 1).representatives
    for left, right in itertools.combinations_with_replacement(reps, 2):
        difference = action.apply(cup(pair, left, right), piece=0, degree=2) - \
            cup(pair, action.apply(left), action.apply(right))
        if any(class_coordinates(pair.m0, 2, difference % pair.modulus)):
            return f"j(u ∪ v) != ju ∪ jv for u={list(left)} v={list(right)}"
    return None


def is_classical(action):
    """Decide whether a descending involution is a classical structure.

    Args:
        action (DeltaAction): The involution

    Raises:
        DoesNotDescend: If j does not commute with the differentials

    Returns:
        ClassicalityReport: The verdict with a witness on failure
    """
    action.check_descends()
    swap = _swap_witness(action)
    cup_failure = _cup_witness(action)
    LOG.info("Swap condition %s, cup compatibility %s", swap is None, cup_failure is None)
    return ClassicalityReport(swap is None, cup_failure is None, swap or cup_failure)


def induced_on_cohomology(action, degree, piece=1):
    """Matrix of j on H^degree of the reduction of gr¹ (piece 1) or gr⁰ (piece 0).

    Args:
        action (DeltaAction): The involution
        degree (int): 0, 1 or 2
        piece (int): 1 or 0

    Returns:
        np.ndarray: Column i holds the coordinates of j(h_i)
    """
    action.check_descends()
    module = action.pair.m1 if piece == 1 else action.pair.m0
    reps = cohomology(module.reduced(), degree).representatives
    columns = [class_coordinates(module, degree, action.apply(rep, piece, degree) % action.pair.prime)
               for rep in reps]
    return np.array(columns, dtype=np.int64).reshape(len(reps), len(reps)).T


def _split_check(pair, sizes):
    modulus = pair.modulus
    structure = pair.algebra.structure()
    for index in (0, 1):
        inside = list(summand_indices(sizes, index))
        for mat in structure:
            if np.any(mat[np.ix_(inside, inside)] % modulus):
                raise InvariantViolation(f"the bracket does not vanish on summand {index}")


def cup_block_identities(pair, c1, c2, c1p, c2p, sizes=None):  # pylint: disable=too-many-arguments
    """The five residuals of the two-summand cup identities.

    (c1, 0) ∪ (c1, 0), (0, c2) ∪ (0, c2), (c1, 0) ∪ (0, c2) − ½ (c1, c2) ∪ (c1, c2), (c1, 0) ∪ (c1′, 0) and
    (0, c2) ∪ (0, c2′), each in C² of gr⁰.

    Args:
        pair (GradedActionPair): Graded actions whose bracket vanishes on each summand
        c1 (list): 1-cocycle of the first summand, in summand coordinates
        c2 (list): 1-cocycle of the second summand
        c1p (list): 1-cocycle of the first summand
        c2p (list): 1-cocycle of the second summand
        sizes (tuple): Summand dimensions, defaults to those of the attached realization

    Raises:
        NotACocycle: If an input is not closed

    Returns:
        tuple: Five residual vectors
    """
    sizes = tuple(sizes) if sizes is not None else summand_sizes(pair)
    _split_check(pair, sizes)
    modulus = pair.modulus
    complexes = [CochainComplex(restrict(pair.m1, summand_indices(sizes, index))) for index in (0, 1)]
    for name, index, cochain in (("c1", 0, c1), ("c2", 1, c2), ("c1'", 0, c1p), ("c2'", 1, c2p)):
        if not complexes[index].is_cocycle(1, cochain):
            raise NotACocycle(f"{name} is not a 1-cocycle of its summand")
    first, second = embed_summand(sizes, 0, c1), embed_summand(sizes, 1, c2)
    first_p, second_p = embed_summand(sizes, 0, c1p), embed_summand(sizes, 1, c2p)
    mixed = cup(pair, first, second) - cup(pair, first + second, first + second) * ((modulus + 1) // 2)
    return (cup(pair, first, first), cup(pair, second, second), mixed % modulus, cup(pair, first, first_p),
            cup(pair, second, second_p))


@dataclass(frozen=True)
class TransferReport:
    """Non-triviality of the cup product on j-invariant classes and on all classes."""
    on_invariants: bool
    overall: bool
    hypothesis_holds: bool

    def as_tuple(self):
        """tuple: (on_invariants, overall, hypothesis_holds)"""
        return self.on_invariants, self.overall, self.hypothesis_holds

    def to_document(self):
        """dict: Document form."""
        return {"on_invariants": self.on_invariants, "overall": self.overall,
                "hypothesis_holds": self.hypothesis_holds}


def nontriviality_transfer_check(action, budget=DEFAULT_BUDGET):
    """Search every class u of H¹(gr¹) for u ∪ u != 0, overall and among j-fixed classes.

    For odd p a symmetric pairing is non-trivial exactly when some u ∪ u is non-zero. The hypothesis is that H² of
    gr⁰ is one-dimensional with j acting trivially on it.

    The classes of h_i ∪ h_j on the representatives are computed once, and each class u is then tested through the
    resulting quadratic form.

    Args:
        action (DeltaAction): The involution
        budget (int): Maximum number of classes to enumerate

    Raises:
        SearchSpaceTooLarge: If p^dim H¹ exceeds the budget

    Returns:
        TransferReport: The two non-triviality verdicts and the hypothesis
    """
    pair = action.pair
    prime = pair.prime
    induced1 = induced_on_cohomology(action, 1)
    induced2 = induced_on_cohomology(action, 2, piece=0)
    hypothesis = induced2.shape == (1, 1) and int(induced2[0, 0]) % prime == 1

    reps = cohomology(pair.m1.reduced(), 1).representatives
    h1_dim = len(reps)
    if prime ** h1_dim > budget:
        raise SearchSpaceTooLarge(f"{prime}^{h1_dim} classes exceed the budget {budget}")
    h2_dim = cohomology(pair.m0.reduced(), 2).dimension
    pairing = np.array([[class_coordinates(pair.m0, 2, cup(pair, left, right)) for right in reps] for left in reps],
                       dtype=np.int64).reshape(h1_dim, h1_dim, h2_dim)
    unfixed = induced1 - np.identity(h1_dim, dtype=np.int64)
    overall = on_invariants = False
    for coeffs in itertools.product(range(prime), repeat=h1_dim):
        coeffs = np.array(coeffs, dtype=np.int64)
        if not np.any(np.einsum("i,ijk,j->k", coeffs, pairing, coeffs) % prime):
            continue
        overall = True
        if not np.any(unfixed.dot(coeffs) % prime):
            on_invariants = True
            break
    LOG.info("Cup non-trivial on invariants %s, overall %s, hypothesis %s", on_invariants, overall, hypothesis)
    return TransferReport(on_invariants, overall, hypothesis)


@dataclass(frozen=True)
class BilinearPairingSpace:
    """x ∪ y = x^t·M·y on F_p^dim_x × F_p^dim_y."""
    prime: int
    dim_x: int
    dim_y: int
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        check_prime(self.prime)
        if self.array().shape != (self.dim_x, self.dim_y):
            raise DimensionMismatch(f"pairing matrix of shape {self.array().shape}")

    @classmethod
    def from_lists(cls, prime, matrix):
        """BilinearPairingSpace: A pairing from a nested integer matrix."""
        nested = tuple(tuple(int(x) % prime for x in row) for row in matrix)
        return cls(prime, len(nested), len(nested[0]) if nested else 0, nested)

    def array(self):
        """np.ndarray: The pairing matrix."""
        return np.array(self.matrix, dtype=np.int64).reshape(self.dim_x, self.dim_y)


def orthogonal_subspace_bound(space, hx, hy):
    """Whether dim X >= 2 dim H_X or dim Y >= 2 dim H_Y for mutually orthogonal subspaces.

    Args:
        space (BilinearPairingSpace): Non-degenerate pairing
        hx (list): Rows spanning H_X
        hy (list): Rows spanning H_Y

    Raises:
        DegeneratePairing: If the pairing matrix is not square and invertible
        NotOrthogonal: If some x in H_X pairs non-trivially with some y in H_Y

    Returns:
        bool: The disjunction
    """
    prime = space.prime
    if space.dim_x != space.dim_y or ff_linalg.rank(space.array(), prime) != space.dim_x:
        raise DegeneratePairing(f"pairing of shape {space.dim_x}x{space.dim_y} is degenerate")
    hx = ff_linalg.as_int(hx, prime, space.dim_x)
    hy = ff_linalg.as_int(hy, prime, space.dim_y)
    if np.any(hx.dot(space.array()).dot(hy.T) % prime):
        raise NotOrthogonal("H_X and H_Y are not orthogonal")
    dim_hx, dim_hy = ff_linalg.rank(hx, prime), ff_linalg.rank(hy, prime)
    return space.dim_x >= 2 * dim_hx or space.dim_y >= 2 * dim_hy


@dataclass(frozen=True)
class DimensionCount:
    """Counting on declared inputs: lower bound for h¹, upper bound for h², and whether the half-dimension
    inequality may fail."""
    h1_lower: int
    h2_upper: int
    may_fail: bool

    def to_document(self):
        """dict: Document form."""
        return {"h1_lower": self.h1_lower, "h2_upper": self.h2_upper, "may_fail": self.may_fail}


def dimension_count(degree, a, b, h0, h2):  # pylint: disable=invalid-name
    """Euler characteristic and duality counting for Mat_{a×b} coefficients over a field of the given degree.

    Args:
        degree (int): Degree of the base field over Q_p
        a (int): Row count
        b (int): Column count
        h0 (int): Declared h⁰
        h2 (int): Declared h²

    Returns:
        DimensionCount: h1 >= h0 + h2 + degree·a·b, h2 <= a·b, and whether degree·a·b <= a·b
    """
    if min(degree, a, b, h0 + 1, h2 + 1) < 1:
        raise ValueError("degree, a and b must be positive, h0 and h2 non-negative")
    return DimensionCount(h0 + h2 + degree * a * b, a * b, degree * a * b <= a * b)
