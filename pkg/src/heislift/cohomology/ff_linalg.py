# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Linear algebra over F_p on plain integer arrays, backed by galois.
"""

from functools import lru_cache
import logging

import galois
import numpy as np

LOG = logging.getLogger("heislift")


@lru_cache(maxsize=None)
def field(prime):
    """galois.FieldArray: The class of GF(prime)."""
    return galois.GF(prime)


def as_int(values, prime, cols=None):
    """Reduce integers mod p into an int64 2-D array.

    Args:
        values (list): Nested integers, or a numpy array
        prime (int): Residue characteristic
        cols (int): Column count to use when values is empty

    Returns:
        np.ndarray: Entries in [0, p)
    """
    array = np.array(values, dtype=object)
    if array.size == 0:
        rows = array.shape[0] if array.ndim == 2 else 0
        width = array.shape[1] if array.ndim == 2 and array.shape[1] else (cols or 0)
        return np.zeros((rows, width), dtype=np.int64)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    return (array % prime).astype(np.int64)


def to_field(values, prime):
    """galois.FieldArray: values reduced into GF(p)."""
    return field(prime)(as_int(values, prime))


def from_field(array):
    """np.ndarray: int64 view of a field array."""
    return array.view(np.ndarray).astype(np.int64)


def rref(matrix, prime):
    """Reduced row echelon form.

    Args:
        matrix (np.ndarray): Integer matrix
        prime (int): Residue characteristic

    Returns:
        tuple: (nonzero rows of the echelon form, pivot column list)
    """
    matrix = as_int(matrix, prime)
    if matrix.size == 0:
        return np.zeros((0, matrix.shape[1]), dtype=np.int64), []
    reduced = from_field(field(prime)(matrix).row_reduce())
    pivots = []
    rows = []
    for row in reduced:
        nonzero = np.flatnonzero(row)
        if nonzero.size:
            pivots.append(int(nonzero[0]))
            rows.append(row)
    if not rows:
        return np.zeros((0, matrix.shape[1]), dtype=np.int64), []
    return np.array(rows, dtype=np.int64), pivots


def rank(matrix, prime):
    """int: Rank over F_p."""
    matrix = as_int(matrix, prime)
    if matrix.size == 0:
        return 0
    return int(np.linalg.matrix_rank(field(prime)(matrix)))


def kernel(matrix, prime, cols=None):
    """Basis of {x : matrix·x = 0}.

    Args:
        matrix (np.ndarray): m x n integer matrix
        prime (int): Residue characteristic
        cols (int): n, needed when m = 0

    Returns:
        np.ndarray: k x n array whose rows form a basis
    """
    matrix = as_int(matrix, prime, cols)
    cols = matrix.shape[1]
    reduced, pivots = rref(matrix, prime) if matrix.shape[0] else (np.zeros((0, cols), dtype=np.int64), [])
    free = [col for col in range(cols) if col not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, col in enumerate(free):
        basis[k, col] = 1
        for row, pivot in enumerate(pivots):
            basis[k, pivot] = (-reduced[row, col]) % prime
    return basis


def row_basis(vectors, prime, cols=None):
    """np.ndarray: Echelon basis of the span of the given rows."""
    vectors = as_int(vectors, prime, cols)
    if vectors.shape[0] == 0:
        return vectors
    return rref(vectors, prime)[0]


def column_image(matrix, prime, rows=None):
    """np.ndarray: Row basis of the column space of a matrix."""
    matrix = as_int(matrix, prime, rows)
    return row_basis(matrix.T, prime, matrix.shape[0])


def solve(matrix, target, prime):
    """One solution of matrix·x = target, or None.

    Args:
        matrix (np.ndarray): m x n integer matrix
        target (list): Length m vector
        prime (int): Residue characteristic

    Returns:
        np.ndarray: A length n solution, or None if target is outside the image
    """
    matrix = as_int(matrix, prime)
    target = as_int(target, prime).reshape(-1)
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return np.zeros(cols, dtype=np.int64)
    augmented = np.hstack([matrix, target.reshape(-1, 1)])
    reduced, pivots = rref(augmented, prime)
    if cols in pivots:
        return None
    solution = np.zeros(cols, dtype=np.int64)
    for row, pivot in enumerate(pivots):
        solution[pivot] = reduced[row, cols]
    return solution


def in_span(vectors, target, prime):
    """bool: True if target is an F_p combination of the rows."""
    vectors = as_int(vectors, prime, len(target))
    if vectors.shape[0] == 0:
        return not np.any(as_int(target, prime))
    return rank(np.vstack([vectors, as_int(target, prime)]), prime) == rank(vectors, prime)


def extend_basis(subspace, candidates, prime):
    """Pick candidates that extend subspace to a basis of their joint span.

    Args:
        subspace (np.ndarray): Rows spanning the subspace
        candidates (np.ndarray): Rows to choose from, in order
        prime (int): Residue characteristic

    Returns:
        np.ndarray: The chosen candidate rows, a basis of the quotient
    """
    candidates = as_int(candidates, prime)
    cols = candidates.shape[1]
    current = as_int(subspace, prime, cols)
    current_rank = rank(current, prime)
    chosen = []
    for vector in candidates:
        trial = np.vstack([current, vector.reshape(1, -1)])
        trial_rank = rank(trial, prime)
        if trial_rank > current_rank:
            chosen.append(vector)
            current, current_rank = trial, trial_rank
    return np.array(chosen, dtype=np.int64).reshape(len(chosen), cols)


def inverse(matrix, prime):
    """np.ndarray: Inverse of an invertible square matrix over F_p."""
    return from_field(np.linalg.inv(to_field(matrix, prime)))


def quotient_coordinates(basis, subspace, target, prime):
    """Coordinates of target modulo subspace with respect to quotient representatives.

    Args:
        basis (np.ndarray): Quotient representatives as rows
        subspace (np.ndarray): Rows spanning the subspace
        target (list): Vector in span(basis) + span(subspace)
        prime (int): Residue characteristic

    Returns:
        np.ndarray: Coefficients on basis, or None if target is not in the joint span
    """
    basis = as_int(basis, prime, len(target))
    subspace = as_int(subspace, prime, len(target))
    stacked = np.vstack([basis, subspace])
    solution = solve(stacked.T, target, prime)
    if solution is None:
        return None
    return solution[:basis.shape[0]] % prime


def normal_form(vector, echelon, prime):
    """Reduce a vector against the rows of a reduced echelon basis.

    Args:
        vector (list): Vector to reduce
        echelon (np.ndarray): Rows in reduced echelon form, as returned by rref
        prime (int): Residue characteristic

    Returns:
        np.ndarray: The unique representative with zeros in every pivot column
    """
    vector = np.array(vector, dtype=object).reshape(-1) % prime
    for row in as_int(echelon, prime, len(vector)):
        pivot = int(np.flatnonzero(row)[0])
        vector = (vector - vector[pivot] * row) % prime
    return vector.astype(np.int64)
