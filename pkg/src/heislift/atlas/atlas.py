# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Parabolic structure tables for classical groups given by Gram matrices.

Families:
    gsp     -- GSp_2n, X^tJX = λJ with J = [[,,I_k],[,Ω,],[−I_k,,]], blocks (k, 2(n−k), k)
    go      -- GO_n, J = [[,,I_k],[,I_m,],[I_k,,]], blocks (k, n−2k, k)
    unitary -- isometries of the antidiagonal form w_n, blocks (k, n−2k, k)

The involution on the unipotent radical is X ↦ −J⁻¹X^tJ, whose fixed points form the Lie algebra of the radical of
the parabolic of the classical group.
"""

from dataclasses import dataclass
from dataclasses import replace
import logging
import random
from typing import Tuple

import numpy as np

from ..cohomology import ff_linalg
from ..cohomology.cochain import GradedActionPair
from ..cohomology.delta_cup import DeltaAction
from ..cohomology.delta_cup import is_classical
from ..cohomology.nilpotent2 import BlockRealization
from ..cohomology.nilpotent2 import as_matrix
from ..cohomology.nilpotent2 import half
from ..cohomology.nilpotent2 import inverse_mod
from ..cohomology.nilpotent2 import matrix_exp
from ..errors import DimensionMismatch
from ..errors import InvalidRank
from ..padic.padic_core import check_prime

LOG = logging.getLogger("heislift")

FAMILIES = ("gsp", "go", "unitary")


def antidiagonal(size):
    """np.ndarray: w_size, ones on the antidiagonal."""
    return np.fliplr(np.identity(size, dtype=object)) if size else np.zeros((0, 0), dtype=object)


def standard_symplectic(half_size):
    """np.ndarray: Ω = [[0, I], [−I, 0]] of size 2·half_size."""
    identity = np.identity(half_size, dtype=object)
    zero = np.zeros((half_size, half_size), dtype=object)
    return np.block([[zero, identity], [-identity, zero]]) if half_size else np.zeros((0, 0), dtype=object)


def block_antidiagonal(first, middle, last):
    """np.ndarray: [[0, 0, first], [0, middle, 0], [last, 0, 0]] for square blocks."""
    sizes = (len(first), len(middle), len(last))
    total = sum(sizes)
    matrix = np.zeros((total, total), dtype=object)
    matrix[:sizes[0], total - sizes[2]:] = first
    matrix[sizes[0]:sizes[0] + sizes[1], sizes[0]:sizes[0] + sizes[1]] = middle
    matrix[total - sizes[2]:, :sizes[0]] = last
    return matrix


@dataclass(frozen=True)
class ClassicalGroupSpec:
    """A classical group family with rank n, parabolic index k and coefficients in Z/p^precision."""
    family: str
    n: int  # pylint: disable=invalid-name
    k: int  # pylint: disable=invalid-name
    prime: int
    precision: int = 1

    def __post_init__(self):
        check_prime(self.prime)
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {', '.join(FAMILIES)}")
        limit = self.n if self.family == "gsp" else self.n // 2
        if not 1 <= self.k <= limit:
            raise InvalidRank(f"k={self.k} out of range 1..{limit} for {self.family} with n={self.n}")

    @property
    def modulus(self):
        """int: p^precision"""
        return self.prime ** self.precision

    @property
    def size(self):
        """int: Matrix size of the group."""
        return 2 * self.n if self.family == "gsp" else self.n

    @property
    def blocks(self):
        """tuple: (k, middle, k)"""
        return self.k, self.size - 2 * self.k, self.k

    def middle_form(self):
        """np.ndarray: The Gram matrix of the middle Levi block."""
        middle = self.blocks[1]
        if self.family == "gsp":
            return standard_symplectic(middle // 2)
        if self.family == "go":
            return np.identity(middle, dtype=object)
        return antidiagonal(middle)

    def gram(self):
        """np.ndarray: The defining form J."""
        k = self.k
        if self.family == "unitary":
            return antidiagonal(self.size) % self.modulus
        identity = np.identity(k, dtype=object)
        last = -identity if self.family == "gsp" else identity
        return block_antidiagonal(identity, self.middle_form(), last) % self.modulus

    def group_dimension(self):
        """int: Dimension of the group itself."""
        if self.family == "gsp":
            return _gsp_dim(self.n)
        if self.family == "go":
            return _orthogonal_dim(self.n) + 1
        return _orthogonal_dim(self.n)

    def levi_dimension(self):
        """int: dim GL_k + dim of the middle classical group."""
        middle = self.blocks[1]
        if self.family == "gsp":
            return self.k ** 2 + _gsp_dim(middle // 2)
        if self.family == "go":
            return self.k ** 2 + _orthogonal_dim(middle) + 1
        return self.k ** 2 + _orthogonal_dim(middle)

    def to_document(self):
        """dict: {family, n, k, prime, precision}."""
        return {"family": self.family, "n": self.n, "k": self.k, "prime": self.prime, "precision": self.precision}


def _gsp_dim(half_size):
    return half_size * (2 * half_size + 1) + 1


def _orthogonal_dim(size):
    return size * (size - 1) // 2


def membership(spec, matrix, lam=1):
    """Whether X^t·J·X = λ·J exactly.

    Args:
        spec (ClassicalGroupSpec): The group
        matrix (np.ndarray): Square matrix X
        lam (int): Similitude factor λ

    Raises:
        DimensionMismatch: If X has the wrong size

    Returns:
        bool: True if X is in the group with factor λ
    """
    modulus = spec.modulus
    matrix = as_matrix(matrix, modulus)
    if matrix.shape != (spec.size, spec.size):
        raise DimensionMismatch(f"matrix of shape {matrix.shape} for a group of size {spec.size}")
    gram = spec.gram()
    return not np.any((matrix.T.dot(gram).dot(matrix) - lam * gram) % modulus)


def expected_radical_dim(spec):
    """int: (dim G − dim M_k) / 2 from block counting."""
    difference = spec.group_dimension() - spec.levi_dimension()
    assert difference % 2 == 0
    return difference // 2


def _unit(dim, index):
    vector = [0] * dim
    vector[index] = 1
    return vector


def _coordinate_involution(realization, gram):
    """Matrices of X ↦ −J⁻¹X^tJ on gr¹ and gr⁰ coordinates."""
    modulus = realization.modulus
    gram_inv = inverse_mod(gram, realization.prime, realization.precision)
    dim1, dim0 = realization.dim1, realization.dim0

    def image(log1, log0):
        return realization.extract(-gram_inv.dot(realization.embed(log1, log0).T).dot(gram) % modulus)

    columns1 = [image(_unit(dim1, k), [0] * dim0)[0] for k in range(dim1)]
    columns0 = [image([0] * dim1, _unit(dim0, k))[1] for k in range(dim0)]
    return (np.array(columns1, dtype=object).reshape(dim1, dim1).T,
            np.array(columns0, dtype=object).reshape(dim0, dim0).T)


@dataclass(frozen=True)
class ParabolicData:
    """Graded pieces of the unipotent radical of P_k with bracket and involution in coordinates."""
    spec: ClassicalGroupSpec
    blocks: Tuple[int, int, int]
    gr1_dims: Tuple[int, int]
    gr0_dim: int
    bracket_structure: Tuple[Tuple[Tuple[int, ...], ...], ...]
    j1: Tuple[Tuple[int, ...], ...]
    j0: Tuple[Tuple[int, ...], ...]

    @property
    def realization(self):
        """BlockRealization: The block matrix model of Lie U."""
        return BlockRealization(*self.blocks, self.spec.prime, self.spec.precision)

    def j1_matrix(self):
        """np.ndarray: j on gr¹."""
        dim = sum(self.gr1_dims)
        return np.array(self.j1, dtype=object).reshape(dim, dim)

    def j0_matrix(self):
        """np.ndarray: j on gr⁰."""
        return np.array(self.j0, dtype=object).reshape(self.gr0_dim, self.gr0_dim)

    def involution_matrix(self):
        """np.ndarray: j on gr¹ ⊕ gr⁰."""
        dim1 = sum(self.gr1_dims)
        total = np.zeros((dim1 + self.gr0_dim, dim1 + self.gr0_dim), dtype=object)
        total[:dim1, :dim1] = self.j1_matrix()
        total[dim1:, dim1:] = self.j0_matrix()
        return total


def _nested(matrix):
    return tuple(tuple(int(x) for x in row) for row in matrix)


def build_parabolic(spec):
    """The structure table of P_k.

    Args:
        spec (ClassicalGroupSpec): The group and parabolic index

    Returns:
        ParabolicData: Dimensions, bracket and involution
    """
    a, b, c = spec.blocks  # pylint: disable=invalid-name
    realization = BlockRealization(a, b, c, spec.prime, spec.precision)
    j1, j0 = _coordinate_involution(realization, spec.gram())
    data = ParabolicData(spec, spec.blocks, (a * b, b * c), a * c, realization.algebra.bracket_structure,
                         _nested(j1), _nested(j0))
    LOG.debug("Built %s n=%d k=%d with gr1 %s and gr0 %d", spec.family, spec.n, spec.k, data.gr1_dims, data.gr0_dim)
    return data


def involution_blocks(spec, x_block, y_block, z_block):
    """The involution written blockwise, independently of the Gram matrix.

    Args:
        spec (ClassicalGroupSpec): The group
        x_block (np.ndarray): k x m block
        y_block (np.ndarray): m x k block
        z_block (np.ndarray): k x k block

    Returns:
        tuple: (jx, jy, jz)
    """
    modulus = spec.modulus
    x_block, y_block, z_block = (as_matrix(block, modulus) for block in (x_block, y_block, z_block))
    if spec.family == "gsp":
        omega = spec.middle_form()
        return y_block.T.dot(omega) % modulus, omega.dot(x_block.T) % modulus, z_block.T % modulus
    if spec.family == "go":
        return -y_block.T % modulus, -x_block.T % modulus, -z_block.T % modulus
    w_k, w_m = antidiagonal(spec.k), antidiagonal(spec.blocks[1])
    return (-w_k.dot(y_block.T).dot(w_m) % modulus, -w_m.dot(x_block.T).dot(w_k) % modulus,
            -w_k.dot(z_block.T).dot(w_k) % modulus)


def fixed_subspace(data):
    """Spanning set of the j-fixed part of gr¹ ⊕ gr⁰, the columns of the projector (1 + j)/2.

    Args:
        data (ParabolicData): The structure table

    Returns:
        tuple: (spanning vectors as rows, dimension over F_p)
    """
    modulus = data.spec.modulus
    involution = data.involution_matrix()
    projector = (np.identity(len(involution), dtype=object) + involution) * half(modulus) % modulus
    return projector.T, ff_linalg.rank(projector, data.spec.prime)


@dataclass(frozen=True)
class FixedPointReport:
    """Membership of exponentiated fixed points, rejection of non-fixed ones, and the dimension cross-check."""
    dimension: int
    expected: int
    members_ok: bool
    nonmembers_rejected: bool

    @property
    def passed(self):
        """bool: All checks hold."""
        return self.members_ok and self.nonmembers_rejected and self.dimension == self.expected

    def to_document(self):
        """dict: Document form."""
        return {"dimension": self.dimension, "expected": self.expected, "members_ok": self.members_ok,
                "nonmembers_rejected": self.nonmembers_rejected, "passed": self.passed}


def verify_fixed_points(data, samples=8, seed=0):
    """Check that exp of j-fixed Lie elements lies in the group, that exp of sampled non-fixed ones does not, and
    that the fixed dimension equals (dim G − dim M_k) / 2.

    Args:
        data (ParabolicData): The structure table
        samples (int): Random combinations tried in each direction
        seed (int): Seed of the sampler

    Returns:
        FixedPointReport: The verdicts
    """
    spec = data.spec
    modulus, prime = spec.modulus, spec.prime
    realization = data.realization
    dim1 = sum(data.gr1_dims)
    spanning, dimension = fixed_subspace(data)
    rng = random.Random(seed)

    def group_element(vector):
        return matrix_exp(realization.embed(list(vector[:dim1]), list(vector[dim1:])), modulus)

    candidates = list(spanning)
    for _ in range(samples):
        coeffs = np.array([rng.randrange(modulus) for _ in spanning], dtype=object)
        candidates.append(coeffs.dot(spanning) % modulus if len(spanning) else coeffs)
    members_ok = all(membership(spec, group_element(vector), 1) for vector in candidates)

    involution = data.involution_matrix()
    nonmembers_rejected = True
    tried = 0
    for _ in range(20 * samples):
        if tried == samples or not len(involution):
            break
        vector = np.array([rng.randrange(modulus) for _ in range(len(involution))], dtype=object)
        if not np.any((involution.dot(vector) - vector) % prime):
            continue
        tried += 1
        if membership(spec, group_element(vector), 1):
            nonmembers_rejected = False
            break

    report = FixedPointReport(dimension, expected_radical_dim(spec), members_ok, nonmembers_rejected)
    LOG.info("%s n=%d k=%d: fixed dimension %d, expected %d, members %s, non-members rejected %s", spec.family,
             spec.n, spec.k, dimension, report.expected, members_ok, nonmembers_rejected)
    return report


def corrupted(data):
    """ParabolicData: The same table with the sign of j on gr⁰ flipped."""
    modulus = data.spec.modulus
    return replace(data, j0=_nested(-data.j0_matrix() % modulus))


def _random_unit(rng, spec):
    while True:
        value = rng.randrange(1, spec.modulus)
        if value % spec.prime:
            return value


def _random_invertible(rng, spec, size):
    while True:
        matrix = np.array([[rng.randrange(spec.modulus) for _ in range(size)] for _ in range(size)], dtype=object)
        if ff_linalg.rank(matrix, spec.prime) == size:
            return matrix


def _middle_isometry(rng, spec):
    """Product of two transvections (gsp) or reflections (go, unitary) preserving the middle form."""
    modulus = spec.modulus
    form = spec.middle_form()
    size = len(form)
    product = np.identity(size, dtype=object)
    if not size:
        return product
    for _ in range(2):
        vector = np.array([[rng.randrange(modulus)] for _ in range(size)], dtype=object)
        if spec.family == "gsp":
            factor = np.identity(size, dtype=object) + rng.randrange(modulus) * vector.dot(vector.T).dot(form)
        else:
            norm = int(vector.T.dot(form).dot(vector)[0, 0]) % modulus
            if norm % spec.prime == 0:
                continue
            factor = np.identity(size, dtype=object) - 2 * pow(norm, -1, modulus) * vector.dot(vector.T).dot(form)
        product = product.dot(factor) % modulus
    return product


def random_levi_element(spec, rng):
    """A random block diagonal element of the Levi M_k with its similitude factor.

    Args:
        spec (ClassicalGroupSpec): The group
        rng (random.Random): Source of randomness

    Returns:
        tuple: (matrix, λ)
    """
    modulus = spec.modulus
    k, middle, _ = spec.blocks
    first = _random_invertible(rng, spec, k)
    first_inv_t = inverse_mod(first, spec.prime, spec.precision).T
    if spec.family == "unitary":
        scale, lam = 1, 1
        last = antidiagonal(k).dot(first_inv_t).dot(antidiagonal(k)) % modulus
    else:
        scale = _random_unit(rng, spec)
        lam = scale * scale % modulus
        last = lam * first_inv_t % modulus
    element = np.zeros((spec.size, spec.size), dtype=object)
    element[:k, :k] = first
    element[k:k + middle, k:k + middle] = scale * _middle_isometry(rng, spec) % modulus
    element[k + middle:, k + middle:] = last
    assert membership(spec, element, lam)
    return element, lam


def commuting_levi_pair(spec, rng):
    """Two commuting Levi elements f and g = f^e with e in {2, 3}.

    Args:
        spec (ClassicalGroupSpec): The group
        rng (random.Random): Source of randomness

    Returns:
        tuple: (f, g)
    """
    f_levi, _ = random_levi_element(spec, rng)
    g_levi = f_levi
    for _ in range(rng.choice((2, 3)) - 1):
        g_levi = g_levi.dot(f_levi) % spec.modulus
    return f_levi, g_levi


def graded_pair(data, f_levi, g_levi):
    """GradedActionPair: The conjugation actions of f and g on the graded pieces of the radical."""
    return GradedActionPair.from_levi(data.realization, f_levi, g_levi)


def delta_action(data, pair):
    """DeltaAction: The involution of the table acting on a graded pair built from it."""
    return DeltaAction.from_matrices(pair, data.j1_matrix(), data.j0_matrix(), data.gr1_dims)


@dataclass(frozen=True)
class InvolutionReport:
    """Structural properties of j and, with a Levi pair attached, the classicality verdict."""
    squares_to_identity: bool
    swaps_summands: bool
    bracket_compatible: bool
    classical: bool

    @property
    def passed(self):
        """bool: All checks hold."""
        return self.squares_to_identity and self.swaps_summands and self.bracket_compatible and self.classical

    def to_document(self):
        """dict: Document form."""
        return {"squares_to_identity": self.squares_to_identity, "swaps_summands": self.swaps_summands,
                "bracket_compatible": self.bracket_compatible, "classical": self.classical, "passed": self.passed}


def involution_properties(data, seed=0):
    """Check j² = 1, the summand swap, j[u, v] = [ju, jv] on basis pairs, and classicality on a Levi pair.

    Args:
        data (ParabolicData): The structure table
        seed (int): Seed for the commuting Levi pair

    Returns:
        InvolutionReport: The verdicts
    """
    spec = data.spec
    modulus = spec.modulus
    j1, j0 = data.j1_matrix(), data.j0_matrix()
    dim1 = len(j1)
    squares = not np.any((data.involution_matrix().dot(data.involution_matrix()) -
                          np.identity(dim1 + data.gr0_dim, dtype=object)) % modulus)

    first = list(range(data.gr1_dims[0]))
    second = list(range(data.gr1_dims[0], dim1))
    swaps = not (np.any(j1[np.ix_(first, first)] % modulus) or np.any(j1[np.ix_(second, second)] % modulus))

    algebra = data.realization.algebra
    compatible = True
    for u_idx in range(dim1):
        for v_idx in range(u_idx + 1, dim1):
            left = np.zeros(dim1, dtype=object)
            right = np.zeros(dim1, dtype=object)
            left[u_idx] = right[v_idx] = 1
            lhs = j0.dot(algebra.bracket(left, right)) % modulus
            rhs = algebra.bracket(j1.dot(left) % modulus, j1.dot(right) % modulus)
            if np.any((lhs - rhs) % modulus):
                compatible = False

    classical = False
    if squares:
        f_levi, g_levi = commuting_levi_pair(spec, random.Random(seed))
        pair = graded_pair(data, f_levi, g_levi)
        classical = is_classical(delta_action(data, pair)).classical
    return InvolutionReport(squares, swaps, compatible, classical)


def iota_twist(rho, w_matrix, prime, precision=1):
    """w·ρ^{-t}·w⁻¹.

    Args:
        rho (np.ndarray): Invertible matrix
        w_matrix (np.ndarray): Invertible matrix
        prime (int): Residue characteristic
        precision (int): Coefficients live in Z/p^precision

    Returns:
        np.ndarray: The twisted matrix
    """
    modulus = prime ** precision
    rho_inv_t = inverse_mod(as_matrix(rho, modulus), prime, precision).T
    w_inv = inverse_mod(as_matrix(w_matrix, modulus), prime, precision)
    return as_matrix(w_matrix, modulus).dot(rho_inv_t).dot(w_inv) % modulus


def iota_twist_blocks(rho, blocks, w_blocks, prime, precision=1):  # pylint: disable=too-many-locals
    """Blocks of w·ρ^{-t}·w⁻¹ for block upper triangular ρ = [[A, B, *], [0, D, E], [0, 0, F]] and
    w = [[0, 0, J1], [0, J2, 0], [J3, 0, 0]].

    Args:
        rho (np.ndarray): Block upper triangular matrix
        blocks (tuple): (a, b, c) block sizes of ρ
        w_blocks (tuple): (J1, J2, J3)
        prime (int): Residue characteristic
        precision (int): Coefficients live in Z/p^precision

    Returns:
        dict: Blocks keyed (1, 1), (1, 2), (2, 2), (2, 3), (3, 3)
    """
    modulus = prime ** precision
    rho = as_matrix(rho, modulus)
    a, b, _ = blocks  # pylint: disable=invalid-name

    def inv_t(matrix):
        return inverse_mod(matrix, prime, precision).T

    def inv(matrix):
        return inverse_mod(as_matrix(matrix, modulus), prime, precision)

    top, mid, bottom = slice(0, a), slice(a, a + b), slice(a + b, None)
    first, b_blk, d_blk = rho[top, top], rho[top, mid], rho[mid, mid]
    e_blk, last = rho[mid, bottom], rho[bottom, bottom]
    j_1, j_2, j_3 = (as_matrix(block, modulus) for block in w_blocks)
    result = {
        (1, 1): j_1.dot(inv_t(last)).dot(inv(j_1)),
        (1, 2): -j_1.dot(inv_t(last)).dot(e_blk.T).dot(inv_t(d_blk)).dot(inv(j_2)),
        (2, 2): j_2.dot(inv_t(d_blk)).dot(inv(j_2)),
        (2, 3): -j_2.dot(inv_t(d_blk)).dot(b_blk.T).dot(inv_t(first)).dot(inv(j_3)),
        (3, 3): j_3.dot(inv_t(first)).dot(inv(j_3)),
    }
    return {key: value % modulus for key, value in result.items()}


def parabolic_to_document(data):
    """dict: The atlas dump of a structure table, readable by the graded pair and action loaders."""
    return {
        "family": data.spec.family,
        "n": data.spec.n,
        "k": data.spec.k,
        "prime": data.spec.prime,
        "precision": data.spec.precision,
        "blocks": list(data.blocks),
        "gr1_dims": list(data.gr1_dims),
        "gr0_dim": data.gr0_dim,
        "gram": [[int(x) for x in row] for row in data.spec.gram()],
        "bracket_structure": [[list(row) for row in mat] for mat in data.bracket_structure],
        "j1": [list(row) for row in data.j1],
        "j0": [list(row) for row in data.j0],
        "summands": list(data.gr1_dims),
    }
