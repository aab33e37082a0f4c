# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Exact matrix algebra over Z_p: Smith normal form, cokernels, adapted bases and floored preimages.

Vectors are columns, so the image of d is its column span.
"""

from dataclasses import dataclass
import logging
from typing import Optional
from typing import Tuple

import numpy as np
from sympy import mod_inverse
from sympy import multiplicity

from ..errors import DegenerateInput
from ..errors import DimensionMismatch
from ..errors import FloorInfeasible
from ..errors import NonCyclicCokernel
from ..errors import NotInImage
from ..errors import PrecisionExhausted
from .padic_core import DEFAULT_PRECISION
from .padic_core import PadicScalar
from .padic_core import check_prime

LOG = logging.getLogger("heislift")


@dataclass(frozen=True)
class DvrMatrix:
    """A rows x cols matrix over Z_p, stored as row-major residues with a common known precision."""
    prime: int
    precision: int
    rows: int
    cols: int
    residues: Tuple[int, ...]
    known_prec: int

    def __post_init__(self):
        check_prime(self.prime)
        if len(self.residues) != self.rows * self.cols:
            raise DimensionMismatch(f"{len(self.residues)} entries for a {self.rows}x{self.cols} matrix")
        modulus = self.prime ** self.known_prec
        object.__setattr__(self, "residues", tuple(int(x) % modulus for x in self.residues))

    @classmethod
    def from_rows(cls, prime, rows, cols=None, precision=DEFAULT_PRECISION, known_prec=None):
        """Build a matrix from nested integer rows.

        Args:
            prime (int): Residue characteristic
            rows (list): List of rows of integers
            cols (int): Column count, needed only when there are no rows or the rows are empty
            precision (int): Absolute precision N
            known_prec (int): Precision of the entries, defaults to N

        Returns:
            DvrMatrix: The matrix
        """
        rows = [list(row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(row) != cols for row in rows):
            raise DimensionMismatch("ragged rows")
        return cls(prime, precision, len(rows), cols, tuple(x for row in rows for x in row),
                   precision if known_prec is None else known_prec)

    @classmethod
    def from_array(cls, prime, array, precision=DEFAULT_PRECISION, known_prec=None):
        """Build a matrix from a 2-d numpy array.

        Args:
            prime (int): Residue characteristic
            array (np.ndarray): Integer array
            precision (int): Absolute precision N
            known_prec (int): Precision of the entries, defaults to N

        Returns:
            DvrMatrix: The matrix
        """
        rows, cols = array.shape
        return cls(prime, precision, rows, cols, tuple(int(x) for x in array.reshape(-1)),
                   precision if known_prec is None else known_prec)

    @classmethod
    def identity(cls, prime, size, precision=DEFAULT_PRECISION):
        """DvrMatrix: The size x size identity."""
        return cls.from_array(prime, np.identity(size, dtype=object), precision)

    @property
    def modulus(self):
        """int: p^known_prec"""
        return self.prime ** self.known_prec

    def array(self):
        """np.ndarray: The residues as an object-dtype array of Python ints."""
        return np.array(self.residues, dtype=object).reshape(self.rows, self.cols)

    def entry(self, i, j):
        """PadicScalar: Entry (i, j)."""
        return PadicScalar(self.prime, self.precision, self.residues[i * self.cols + j], self.known_prec)

    @property
    def entries(self):
        """tuple: All entries as PadicScalar, row-major."""
        return tuple(PadicScalar(self.prime, self.precision, x, self.known_prec) for x in self.residues)

    def column(self, j):
        """tuple: Column j as PadicScalar entries."""
        return tuple(self.entry(i, j) for i in range(self.rows))

    def apply(self, vector):
        """Multiply by a column vector of base or extension scalars.

        Args:
            vector (list): cols scalars

        Returns:
            list: rows scalars
        """
        if len(vector) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vector)} against {self.cols} columns")
        result = []
        for i in range(self.rows):
            total = PadicScalar(self.prime, self.precision, 0, self.known_prec)
            for j in range(self.cols):
                if self.residues[i * self.cols + j]:
                    total = self.entry(i, j) * vector[j] + total
            result.append(total)
        return result

    def transpose(self):
        """DvrMatrix: The transpose."""
        return DvrMatrix.from_array(self.prime, self.array().T, self.precision, self.known_prec)

    def to_document(self):
        """dict: Header plus nested residues."""
        return {
            "prime": self.prime,
            "precision": self.precision,
            "known_prec": self.known_prec,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [list(self.residues[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)],
        }

    @classmethod
    def from_document(cls, doc):
        """Inverse of to_document.

        Args:
            doc (dict): Serialized matrix

        Returns:
            DvrMatrix: The matrix
        """
        return cls.from_rows(doc["prime"], doc["entries"], doc.get("cols"), doc["precision"],
                             doc.get("known_prec"))


def matmul(left, right):
    """Product of two matrices at the smaller known precision.

    Args:
        left (DvrMatrix): m x k
        right (DvrMatrix): k x n

    Returns:
        DvrMatrix: m x n
    """
    if left.cols != right.rows:
        raise DimensionMismatch(f"{left.rows}x{left.cols} times {right.rows}x{right.cols}")
    known_prec = min(left.known_prec, right.known_prec)
    if left.cols == 0:
        product = np.zeros((left.rows, right.cols), dtype=object)
    else:
        product = left.array().dot(right.array())
    return DvrMatrix.from_array(left.prime, product % left.prime ** known_prec, left.precision, known_prec)


@dataclass(frozen=True)
class SnfDecomposition:
    """m = S·D·T with S, T unimodular and D diagonal p^e_1 | p^e_2 | ...; S_inv, T_inv are their inverses."""
    S: DvrMatrix  # pylint: disable=invalid-name
    D: DvrMatrix  # pylint: disable=invalid-name
    T: DvrMatrix  # pylint: disable=invalid-name
    S_inv: DvrMatrix  # pylint: disable=invalid-name
    T_inv: DvrMatrix  # pylint: disable=invalid-name
    exponents: Tuple[int, ...]
    precision_limited: bool

    @property
    def rank(self):
        """int: Number of pivots resolved at the working precision."""
        return len(self.exponents)


def _valuation(value, prime, modulus):
    if value % modulus == 0:
        return None
    return int(multiplicity(prime, value % modulus))


def smith_normal_form(matrix):  # pylint: disable=too-many-locals
    """Smith normal form by minimal-valuation pivoting with lexicographic (row, col) tie-break.

    Entries that vanish to the known precision are treated as zero and flag the result as precision-limited when
    they leave part of the diagonal unresolved.

    Args:
        matrix (DvrMatrix): The matrix m

    Raises:
        PrecisionExhausted: If the matrix carries no known digits

    Returns:
        SnfDecomposition: S, D, T with S·D·T = m
    """
    prime, known_prec = matrix.prime, matrix.known_prec
    if known_prec == 0:
        raise PrecisionExhausted("matrix entries carry no digits")
    modulus = prime ** known_prec
    rows, cols = matrix.rows, matrix.cols
    work = matrix.array()
    s_fwd = np.identity(rows, dtype=object)
    s_inv = np.identity(rows, dtype=object)
    t_fwd = np.identity(cols, dtype=object)
    t_inv = np.identity(cols, dtype=object)
    exponents = []

    for step in range(min(rows, cols)):
        pivot = None
        for i in range(step, rows):
            for j in range(step, cols):
                val = _valuation(work[i, j], prime, modulus)
                if val is not None and (pivot is None or val < pivot[0]):
                    pivot = (val, i, j)
        if pivot is None:
            break
        val, i, j = pivot
        LOG.debug("SNF pivot %d: (%d, %d) with valuation %d", step, i, j, val)
        if i != step:
            work[[step, i]] = work[[i, step]]
            s_inv[[step, i]] = s_inv[[i, step]]
            s_fwd[:, [step, i]] = s_fwd[:, [i, step]]
        if j != step:
            work[:, [step, j]] = work[:, [j, step]]
            t_inv[:, [step, j]] = t_inv[:, [j, step]]
            t_fwd[[step, j]] = t_fwd[[j, step]]

        scale = prime ** val
        unit = work[step, step] // scale
        unit_inv = int(mod_inverse(unit, modulus))
        work[step] = work[step] * unit_inv % modulus
        s_inv[step] = s_inv[step] * unit_inv % modulus
        s_fwd[:, step] = s_fwd[:, step] * unit % modulus

        for i in range(step + 1, rows):
            factor = work[i, step] // scale
            if factor:
                work[i] = (work[i] - factor * work[step]) % modulus
                s_inv[i] = (s_inv[i] - factor * s_inv[step]) % modulus
                s_fwd[:, step] = (s_fwd[:, step] + factor * s_fwd[:, i]) % modulus
        for j in range(step + 1, cols):
            factor = work[step, j] // scale
            if factor:
                work[:, j] = (work[:, j] - factor * work[:, step]) % modulus
                t_inv[:, j] = (t_inv[:, j] - factor * t_inv[:, step]) % modulus
                t_fwd[step] = (t_fwd[step] + factor * t_fwd[j]) % modulus
        exponents.append(val)

    def wrap(array):
        return DvrMatrix.from_array(prime, array, matrix.precision, known_prec)

    return SnfDecomposition(wrap(s_fwd), wrap(work), wrap(t_fwd), wrap(s_inv), wrap(t_inv), tuple(exponents),
                            len(exponents) < min(rows, cols))


@dataclass(frozen=True)
class CokernelInvariants:
    """coker(d) ≅ ⊕ Λ/p^e ⊕ Λ^free_rank."""
    exponents: Tuple[int, ...]
    free_rank: int
    precision_limited: bool


def cokernel_invariants(d):
    """Elementary divisors of coker(d: Λ^t → Λ^s).

    Args:
        d (DvrMatrix): s x t matrix

    Returns:
        CokernelInvariants: Positive exponents and the free rank
    """
    snf = smith_normal_form(d)
    return CokernelInvariants(tuple(e for e in snf.exponents if e > 0), d.rows - snf.rank, snf.precision_limited)


@dataclass(frozen=True)
class AdaptedBasis:
    """Basis x_1..x_s (the columns of basis) with N = span(p^n x_1, x_2, ..., x_s)."""
    basis: DvrMatrix
    exponent: int


@dataclass(frozen=True)
class AdaptedCoordinates:
    """Coordinate change P (columns x_1..x_s) making Im(d) = span(p^n e_1, e_2, ...) or span(e_2, ...).

    exponent is None when coker(d) is free of rank one.
    """
    change: DvrMatrix
    change_inv: DvrMatrix
    exponent: Optional[int]

    @property
    def is_free(self):
        """bool: True when coker(d) ≅ Λ."""
        return self.exponent is None


def _cyclic_frame(snf, size):
    """Move the last SNF direction to the front: returns (P, P^-1)."""
    order = [size - 1] + list(range(size - 1))
    change = snf.S.array()[:, order]
    change_inv = snf.S_inv.array()[order, :]
    return (DvrMatrix.from_array(snf.S.prime, change, snf.S.precision, snf.S.known_prec),
            DvrMatrix.from_array(snf.S.prime, change_inv, snf.S.precision, snf.S.known_prec))


def adapted_coordinates(d):
    """Coordinates in which the image of d is span(p^n e_1, e_2, ..., e_s), or span(e_2, ..., e_s).

    Args:
        d (DvrMatrix): s x t matrix

    Returns:
        AdaptedCoordinates: The change of basis, or None if coker(d) is not Λ or Λ/p^n
    """
    snf = smith_normal_form(d)
    exponents = [e for e in snf.exponents if e > 0]
    free_rank = d.rows - snf.rank
    if free_rank == 1 and not exponents:
        change, change_inv = _cyclic_frame(snf, d.rows)
        return AdaptedCoordinates(change, change_inv, None)
    if free_rank == 0 and len(exponents) == 1:
        change, change_inv = _cyclic_frame(snf, d.rows)
        return AdaptedCoordinates(change, change_inv, exponents[0])
    return None


def adapt_basis(rank, gens):
    """Basis x_1..x_s of Λ^s with span(gens) = span(p^n x_1, x_2, ..., x_s).

    Args:
        rank (int): s, the rank of the ambient free module
        gens (DvrMatrix): s x g matrix whose columns generate N

    Raises:
        DimensionMismatch: If gens does not have s rows
        DegenerateInput: If N is all of Λ^s
        NonCyclicCokernel: If Λ^s / N is not Λ/p^n

    Returns:
        AdaptedBasis: The basis and n
    """
    if gens.rows != rank:
        raise DimensionMismatch(f"generators have {gens.rows} rows, expected {rank}")
    snf = smith_normal_form(gens)
    exponents = [e for e in snf.exponents if e > 0]
    free_rank = rank - snf.rank
    if free_rank == 0 and not exponents:
        raise DegenerateInput("the submodule is the whole module")
    if free_rank or len(exponents) != 1:
        raise NonCyclicCokernel(f"cokernel invariants {exponents} with free rank {free_rank}")
    change, _ = _cyclic_frame(snf, rank)
    return AdaptedBasis(change, exponents[0])


def constrained_preimage(d, w, floor=0):
    """Solve d·z = w with every coordinate of z of valuation at least floor.

    Free coordinates are set to zero, so the returned z is one representative; d·z ≡ w holds exactly modulo
    p^K where K is the smaller of the precisions of d and w, and z is reported at precision K.

    Args:
        d (DvrMatrix): s x t matrix
        w (list): s PadicScalar entries
        floor (int): Valuation floor

    Raises:
        NotInImage: If w is not in the column span of d
        FloorInfeasible: If the diagonal solve forces a coordinate below the floor

    Returns:
        tuple: t PadicScalar entries
    """
    if len(w) != d.rows:
        raise DimensionMismatch(f"right-hand side of length {len(w)} for {d.rows} rows")
    prime = d.prime
    known_prec = min([d.known_prec] + [x.known_prec for x in w])
    modulus = prime ** known_prec
    snf = smith_normal_form(d)
    rhs = snf.S_inv.array().dot(np.array([x.residue for x in w], dtype=object)) % modulus \
        if d.rows else np.zeros(0, dtype=object)

    solution = np.zeros(d.cols, dtype=object)
    for i, exponent in enumerate(snf.exponents):
        scale = prime ** exponent
        if rhs[i] % scale:
            raise NotInImage(f"coordinate {i} of the transformed vector is not divisible by {prime}^{exponent}")
        solution[i] = rhs[i] // scale
        if solution[i] and multiplicity(prime, solution[i]) < floor:
            raise FloorInfeasible(f"coordinate {i} has valuation {multiplicity(prime, solution[i])} < {floor}")
    if any(rhs[i] % modulus for i in range(snf.rank, d.rows)):
        raise NotInImage("vector has a component outside the column span")

    z_vec = snf.T_inv.array().dot(solution) % modulus if d.cols else solution
    return tuple(PadicScalar(prime, d.precision, int(x), known_prec) for x in z_vec)


def image_membership(d, w):
    """Whether w lies in the column span of d.

    Args:
        d (DvrMatrix): s x t matrix
        w (list): s PadicScalar entries

    Returns:
        bool: True if d·z = w is solvable
    """
    try:
        constrained_preimage(d, w)
    except NotInImage:
        return False
    return True
