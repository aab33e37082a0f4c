# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Graded Lie algebras of nilpotency class 2 over Z/p^N and their unipotent groups.

An element is stored through its logarithm, split into gr¹ and gr⁰ coordinates. Products follow the class-2
Baker-Campbell-Hausdorff formula log(ab) = log a + log b + ½[log a, log b].
"""

from dataclasses import dataclass
import logging
from typing import Tuple

import numpy as np
from sympy import Matrix

from ..errors import DimensionMismatch
from ..errors import NotAntisymmetric
from ..errors import NotUnipotent
from ..padic.padic_core import check_prime

LOG = logging.getLogger("heislift")


def half(modulus):
    """int: The inverse of 2 modulo an odd modulus."""
    return (modulus + 1) // 2


def as_matrix(values, modulus):
    """np.ndarray: An object-dtype integer array reduced mod modulus."""
    return np.array(values, dtype=object) % modulus


@dataclass(frozen=True)
class Class2Algebra:
    """gr¹ ⊕ gr⁰ with [u, v]_k = u^t·B_k·v for u, v in gr¹ and gr⁰ central."""
    prime: int
    precision: int
    dim1: int
    dim0: int
    bracket_structure: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def __post_init__(self):
        check_prime(self.prime)
        structure = self.structure()
        if structure.shape != (self.dim0, self.dim1, self.dim1):
            raise DimensionMismatch(f"bracket structure of shape {structure.shape}")
        if np.any((structure + structure.transpose(0, 2, 1)) % self.modulus):
            raise NotAntisymmetric("bracket structure matrices must be antisymmetric")

    @classmethod
    def from_structure(cls, prime, structure, precision=1, dim1=None):
        """Build an algebra from dim0 structure matrices of size dim1 x dim1.

        Args:
            prime (int): Residue characteristic
            structure (list): Nested integers [dim0][dim1][dim1]
            precision (int): Coefficients live in Z/p^precision
            dim1 (int): Size of gr¹, required when structure is empty

        Returns:
            Class2Algebra: The algebra
        """
        dim0 = len(structure)
        if dim1 is None:
            dim1 = len(structure[0]) if dim0 else 0
        modulus = prime ** precision
        nested = tuple(tuple(tuple(int(x) % modulus for x in row) for row in mat) for mat in structure)
        return cls(prime, precision, dim1, dim0, nested)

    @property
    def modulus(self):
        """int: p^precision"""
        return self.prime ** self.precision

    def structure(self):
        """np.ndarray: The dim0 x dim1 x dim1 structure array."""
        if not self.dim0:
            return np.zeros((0, self.dim1, self.dim1), dtype=object)
        return np.array(self.bracket_structure, dtype=object).reshape(self.dim0, self.dim1, self.dim1)

    def bracket(self, left, right):
        """[left, right] in gr⁰ for left, right in gr¹.

        Args:
            left (list): dim1 coordinates
            right (list): dim1 coordinates

        Returns:
            np.ndarray: dim0 coordinates
        """
        left = as_matrix(left, self.modulus)
        right = as_matrix(right, self.modulus)
        if left.shape != (self.dim1,) or right.shape != (self.dim1,):
            raise DimensionMismatch(f"bracket of vectors of length {left.shape} and {right.shape}")
        return np.array([left.dot(mat).dot(right) for mat in self.structure()], dtype=object) % self.modulus

    def to_document(self):
        """dict: {dim1, dim0, bracket_structure}."""
        return {
            "prime": self.prime,
            "precision": self.precision,
            "dim1": self.dim1,
            "dim0": self.dim0,
            "bracket_structure": [[list(row) for row in mat] for mat in self.bracket_structure],
        }


@dataclass(frozen=True)
class Class2Element:
    """The group element exp(log1 + log0)."""
    log1: Tuple[int, ...]
    log0: Tuple[int, ...]

    @classmethod
    def from_vectors(cls, algebra, log1, log0):
        """Class2Element: Element with coordinates reduced mod p^N."""
        log1 = tuple(int(x) % algebra.modulus for x in log1)
        log0 = tuple(int(x) % algebra.modulus for x in log0)
        if len(log1) != algebra.dim1 or len(log0) != algebra.dim0:
            raise DimensionMismatch(f"element with ({len(log1)}, {len(log0)}) coordinates")
        return cls(log1, log0)


def identity_element(algebra):
    """Class2Element: exp(0)."""
    return Class2Element((0,) * algebra.dim1, (0,) * algebra.dim0)


def group_multiply(algebra, left, right):
    """Class-2 BCH product: gr¹ parts add, gr⁰ parts add plus ½[left₁, right₁].

    Args:
        algebra (Class2Algebra): The algebra
        left (Class2Element): a
        right (Class2Element): b

    Returns:
        Class2Element: a·b
    """
    correction = algebra.bracket(left.log1, right.log1) * half(algebra.modulus)
    log1 = as_matrix(left.log1, algebra.modulus) + as_matrix(right.log1, algebra.modulus)
    log0 = as_matrix(left.log0, algebra.modulus) + as_matrix(right.log0, algebra.modulus) + correction
    return Class2Element.from_vectors(algebra, log1, log0)


def group_inverse(algebra, element):
    """Class2Element: Negate both graded parts."""
    return Class2Element.from_vectors(algebra, [-x for x in element.log1], [-x for x in element.log0])


def matrix_exp(matrix, modulus):
    """Truncated exponential 1 + X + X²/2 of a matrix with X³ = 0.

    Args:
        matrix (np.ndarray): Nilpotent matrix
        modulus (int): Odd modulus

    Raises:
        NotUnipotent: If X³ does not vanish

    Returns:
        np.ndarray: exp(X)
    """
    matrix = as_matrix(matrix, modulus)
    square = matrix.dot(matrix) % modulus
    if np.any(square.dot(matrix) % modulus):
        raise NotUnipotent("X^3 does not vanish, the truncated exponential is not exact")
    return (np.identity(matrix.shape[0], dtype=object) + matrix + square * half(modulus)) % modulus


def matrix_log(unipotent, modulus):
    """Truncated logarithm (u − 1) − (u − 1)²/2 of a matrix with (u − 1)³ = 0.

    Args:
        unipotent (np.ndarray): Unipotent matrix
        modulus (int): Odd modulus

    Raises:
        NotUnipotent: If (u − 1)³ does not vanish

    Returns:
        np.ndarray: log(u)
    """
    offset = (as_matrix(unipotent, modulus) - np.identity(len(unipotent), dtype=object)) % modulus
    square = offset.dot(offset) % modulus
    if np.any(square.dot(offset) % modulus):
        raise NotUnipotent("(u - 1)^3 does not vanish")
    return (offset - square * half(modulus)) % modulus


class BlockRealization:
    """gr¹ = Mat_{a×b} ⊕ Mat_{b×c} and gr⁰ = Mat_{a×c} inside the (a+b+c)-square matrices [[0,x,z],[0,0,y],[0,0,0]].

    gr¹ coordinates are x row-major followed by y row-major, gr⁰ coordinates are z row-major. The induced bracket
    is [(x, y), (x', y')] = x·y' − x'·y.

    Args:
        a (int): First block size
        b (int): Middle block size
        c (int): Last block size
        prime (int): Residue characteristic
        precision (int): Coefficients live in Z/p^precision
    """

    def __init__(self, a, b, c, prime, precision=1):  # pylint: disable=invalid-name,too-many-arguments
        self.a, self.b, self.c = a, b, c  # pylint: disable=invalid-name
        self.prime = check_prime(prime)
        self.precision = precision
        self.modulus = prime ** precision
        self.size = a + b + c
        self.algebra = Class2Algebra.from_structure(prime, self._structure(), precision, dim1=self.dim1)

    @property
    def dim1(self):
        """int: a·b + b·c"""
        return self.a * self.b + self.b * self.c

    @property
    def dim0(self):
        """int: a·c"""
        return self.a * self.c

    def _structure(self):
        structure = np.zeros((self.dim0, self.dim1, self.dim1), dtype=int)
        offset = self.a * self.b
        for i in range(self.a):
            for k in range(self.c):
                for j in range(self.b):
                    # coefficient of x_ij·y'_jk, and its antisymmetric partner
                    structure[i * self.c + k, i * self.b + j, offset + j * self.c + k] += 1
                    structure[i * self.c + k, offset + j * self.c + k, i * self.b + j] -= 1
        return structure.tolist()

    def split(self, log1):
        """tuple: The (x, y) blocks of a gr¹ coordinate vector."""
        log1 = as_matrix(log1, self.modulus)
        offset = self.a * self.b
        return log1[:offset].reshape(self.a, self.b), log1[offset:].reshape(self.b, self.c)

    def embed(self, log1, log0):
        """Place graded coordinates into a strictly block upper triangular matrix.

        Args:
            log1 (list): gr¹ coordinates
            log0 (list): gr⁰ coordinates

        Returns:
            np.ndarray: The Lie algebra matrix
        """
        if len(log1) != self.dim1 or len(log0) != self.dim0:
            raise DimensionMismatch(f"({len(log1)}, {len(log0)}) coordinates for ({self.dim1}, {self.dim0})")
        x_block, y_block = self.split(log1)
        matrix = np.zeros((self.size, self.size), dtype=object)
        matrix[:self.a, self.a:self.a + self.b] = x_block
        matrix[self.a:self.a + self.b, self.a + self.b:] = y_block
        matrix[:self.a, self.a + self.b:] = as_matrix(log0, self.modulus).reshape(self.a, self.c)
        return matrix

    def extract(self, matrix):
        """Inverse of embed.

        Args:
            matrix (np.ndarray): Strictly block upper triangular matrix

        Returns:
            tuple: (gr¹ coordinates, gr⁰ coordinates)
        """
        matrix = as_matrix(matrix, self.modulus)
        x_block = matrix[:self.a, self.a:self.a + self.b].reshape(-1)
        y_block = matrix[self.a:self.a + self.b, self.a + self.b:].reshape(-1)
        z_block = matrix[:self.a, self.a + self.b:].reshape(-1)
        return tuple(x_block) + tuple(y_block), tuple(z_block)

    def to_group(self, element):
        """np.ndarray: exp of the embedded logarithm."""
        return matrix_exp(self.embed(element.log1, element.log0), self.modulus)

    def from_group(self, unipotent):
        """Class2Element: The element whose exponential is the given matrix."""
        log1, log0 = self.extract(matrix_log(unipotent, self.modulus))
        return Class2Element.from_vectors(self.algebra, log1, log0)

    def levi_action(self, levi):
        """Conjugation by a block diagonal diag(A, B, C) on graded coordinates.

        Ad acts as x ↦ A·x·B⁻¹, y ↦ B·y·C⁻¹, z ↦ A·z·C⁻¹; the matrices are returned in coordinates.

        Args:
            levi (np.ndarray): Invertible block diagonal matrix

        Returns:
            tuple: (action on gr¹, action on gr⁰) as integer matrices
        """
        levi = as_matrix(levi, self.modulus)
        levi_inv = inverse_mod(levi, self.prime, self.precision)
        columns1 = []
        for k in range(self.dim1):
            basis = [0] * self.dim1
            basis[k] = 1
            moved = levi.dot(self.embed(basis, [0] * self.dim0)).dot(levi_inv) % self.modulus
            columns1.append(self.extract(moved)[0])
        columns0 = []
        for k in range(self.dim0):
            basis = [0] * self.dim0
            basis[k] = 1
            moved = levi.dot(self.embed([0] * self.dim1, basis)).dot(levi_inv) % self.modulus
            columns0.append(self.extract(moved)[1])
        return (np.array(columns1, dtype=object).reshape(self.dim1, self.dim1).T,
                np.array(columns0, dtype=object).reshape(self.dim0, self.dim0).T)


def inverse_mod(matrix, prime, precision):
    """Inverse of a square matrix over Z/p^precision through sympy's modular inverse.

    Args:
        matrix (np.ndarray): Invertible matrix
        prime (int): Residue characteristic
        precision (int): Exponent of the modulus

    Raises:
        ValueError: If the matrix is singular mod p

    Returns:
        np.ndarray: The inverse
    """
    modulus = prime ** precision
    size = len(matrix)
    if size == 0:
        return np.zeros((0, 0), dtype=object)
    try:
        inverse = Matrix(as_matrix(matrix, modulus).tolist()).inv_mod(modulus)
    except ValueError as ex:
        raise ValueError("matrix is singular mod p") from ex
    return np.array([[int(entry) for entry in row] for row in inverse.tolist()], dtype=object)


def cocycle_equations_split(algebra, x_elt, y_elt, actions):
    """Residuals of the gr¹ and gr⁰ equations for (exp(x)·f, exp(y)·g).

    With F_i, G_i the actions of f and g on gr^i:
        (1 − G₁)x₁ − (1 − F₁)y₁
        (1 − G₀)x₀ − (1 − F₀)y₀ − ½[x₁, G₁x₁] + ½[y₁, F₁y₁]

    Args:
        algebra (Class2Algebra): The algebra
        x_elt (Class2Element): log of the f-component
        y_elt (Class2Element): log of the g-component
        actions (tuple): (F₁, G₁, F₀, G₀) as square matrices

    Raises:
        DimensionMismatch: If the operator sizes do not match the algebra

    Returns:
        tuple: (degree-1 residual, degree-0 residual)
    """
    modulus = algebra.modulus
    f_1, g_1, f_0, g_0 = (as_matrix(op, modulus) for op in actions)
    if f_1.shape != (algebra.dim1, algebra.dim1) or g_1.shape != f_1.shape:
        raise DimensionMismatch("gr¹ operators do not match the algebra")
    if f_0.shape != (algebra.dim0, algebra.dim0) or g_0.shape != f_0.shape:
        raise DimensionMismatch("gr⁰ operators do not match the algebra")
    x_1, x_0 = as_matrix(x_elt.log1, modulus), as_matrix(x_elt.log0, modulus)
    y_1, y_0 = as_matrix(y_elt.log1, modulus), as_matrix(y_elt.log0, modulus)

    degree1 = (x_1 - g_1.dot(x_1)) - (y_1 - f_1.dot(y_1))
    twist = algebra.bracket(x_1, g_1.dot(x_1) % modulus) - algebra.bracket(y_1, f_1.dot(y_1) % modulus)
    degree0 = (x_0 - g_0.dot(x_0)) - (y_0 - f_0.dot(y_0)) - twist * half(modulus)
    return degree1 % modulus, degree0 % modulus


def levi_inverses(realization, f_levi, g_levi):
    """tuple: (f⁻¹, g⁻¹) over the coefficient ring of the realization."""
    return (inverse_mod(f_levi, realization.prime, realization.precision),
            inverse_mod(g_levi, realization.prime, realization.precision))


def intertwining_holds(realization, x_elt, y_elt, f_levi, g_levi, inverses=None):  # pylint: disable=too-many-arguments
    """The matrix relation u_f·(g·u_f⁻¹·g⁻¹) = u_g·(f·u_g⁻¹·f⁻¹) with u_f = exp(x), u_g = exp(y).

    For commuting f, g this is [φ]·g·[φ]⁻¹·g⁻¹ = [γ]·f·[γ]⁻¹·f⁻¹ with [φ] = u_f·f, [γ] = u_g·g, and it reduces to
    [φ][γ] = [γ][φ] when U is abelian.

    Args:
        realization (BlockRealization): Matrix realization of U
        x_elt (Class2Element): log u_f
        y_elt (Class2Element): log u_g
        f_levi (np.ndarray): Block diagonal f
        g_levi (np.ndarray): Block diagonal g
        inverses (tuple): (f⁻¹, g⁻¹) when already known

    Returns:
        bool: True if the relation holds exactly
    """
    modulus = realization.modulus
    f_levi, g_levi = as_matrix(f_levi, modulus), as_matrix(g_levi, modulus)
    if inverses is None:
        inverses = levi_inverses(realization, f_levi, g_levi)
    f_inv, g_inv = inverses
    u_f = realization.to_group(x_elt)
    u_g = realization.to_group(y_elt)
    u_f_inv = realization.to_group(group_inverse(realization.algebra, x_elt))
    u_g_inv = realization.to_group(group_inverse(realization.algebra, y_elt))
    lhs = u_f.dot(g_levi).dot(u_f_inv).dot(g_inv) % modulus
    rhs = u_g.dot(f_levi).dot(u_g_inv).dot(f_inv) % modulus
    return not np.any((lhs - rhs) % modulus)
