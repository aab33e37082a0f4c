# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Three-term complexes V -> V+V -> V of commuting operator pairs, their cohomology, the quadratic map Q and its
polarised cup product, and the cocycle description of extensions by a class-2 unipotent group.

A 1-cochain of a module of dimension n is a flat vector (x, y) of length 2n, with x paired against F and y against G:
d0(v) = ((F - 1)v, (G - 1)v) and d1(x, y) = (G - 1)x - (F - 1)y.
"""

from dataclasses import dataclass
from dataclasses import field
import itertools
import logging
from typing import Any
from typing import Optional
from typing import Tuple

import numpy as np

from ..errors import DimensionMismatch
from ..errors import NonCommutingOperators
from ..errors import NotACocycle
from ..errors import NotEquivariant
from ..errors import SearchSpaceTooLarge
from ..errors import VerificationFailure
from ..heisenberg.heisenberg import DEFAULT_BUDGET
from ..heisenberg.heisenberg import HeisenbergSystem
from ..padic.dvr_linalg import DvrMatrix
from ..padic.dvr_linalg import smith_normal_form
from ..padic.padic_core import check_prime
from ..util.fork_join import fork_join
from ..util.fork_join import merge_sorted
from . import ff_linalg
from .nilpotent2 import BlockRealization
from .nilpotent2 import Class2Algebra
from .nilpotent2 import Class2Element
from .nilpotent2 import as_matrix
from .nilpotent2 import half
from .nilpotent2 import intertwining_holds
from .nilpotent2 import levi_inverses

LOG = logging.getLogger("heislift")


def _nested(matrix, modulus):
    return tuple(tuple(int(x) % modulus for x in row) for row in matrix)


@dataclass(frozen=True)
class ToyPhiGammaModule:
    """A free Z/p^N-module of rank dim with two commuting operators F and G."""
    prime: int
    dim: int
    F: Tuple[Tuple[int, ...], ...]  # pylint: disable=invalid-name
    G: Tuple[Tuple[int, ...], ...]  # pylint: disable=invalid-name
    precision: int = 1

    def __post_init__(self):
        check_prime(self.prime)
        f_op, g_op = self.f_matrix(), self.g_matrix()
        if f_op.shape != (self.dim, self.dim) or g_op.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"operators of shape {f_op.shape} and {g_op.shape} for dimension {self.dim}")
        if np.any((f_op.dot(g_op) - g_op.dot(f_op)) % self.modulus):
            raise NonCommutingOperators("F·G != G·F, the complex would not square to zero")

    @classmethod
    def from_lists(cls, prime, F, G, precision=1):  # pylint: disable=invalid-name
        """Build a module from nested integer matrices.

        Args:
            prime (int): Residue characteristic
            F (list): Square matrix
            G (list): Square matrix commuting with F
            precision (int): Coefficients live in Z/p^precision

        Returns:
            ToyPhiGammaModule: The module
        """
        modulus = prime ** precision
        return cls(prime, len(F), _nested(F, modulus), _nested(G, modulus), precision)

    @property
    def modulus(self):
        """int: p^precision"""
        return self.prime ** self.precision

    def f_matrix(self):
        """np.ndarray: F as an object-dtype array."""
        return np.array(self.F, dtype=object).reshape(self.dim, self.dim)

    def g_matrix(self):
        """np.ndarray: G as an object-dtype array."""
        return np.array(self.G, dtype=object).reshape(self.dim, self.dim)

    def reduced(self):
        """ToyPhiGammaModule: The reduction mod p."""
        return ToyPhiGammaModule.from_lists(self.prime, self.f_matrix(), self.g_matrix(), 1)

    def to_document(self):
        """dict: {prime, precision, dim, F, G}."""
        return {
            "prime": self.prime,
            "precision": self.precision,
            "dim": self.dim,
            "F": [list(row) for row in self.F],
            "G": [list(row) for row in self.G],
        }

    @classmethod
    def from_document(cls, doc):
        """ToyPhiGammaModule: Inverse of to_document."""
        module = cls.from_lists(doc["prime"], doc["F"], doc["G"], doc.get("precision", 1))
        if module.dim != doc.get("dim", module.dim):
            raise DimensionMismatch(f"declared dim {doc['dim']} but operators have size {module.dim}")
        return module


class CochainComplex:
    """C0 = V, C1 = V ⊕ V, C2 = V with the differentials of a ToyPhiGammaModule.

    Args:
        module (ToyPhiGammaModule): The module
    """

    def __init__(self, module):
        self.module = module
        self.modulus = module.modulus
        dim = module.dim
        identity = np.identity(dim, dtype=object)
        f_minus, g_minus = module.f_matrix() - identity, module.g_matrix() - identity
        self.d0 = np.vstack([f_minus, g_minus]) % self.modulus if dim else np.zeros((0, 0), dtype=object)
        self.d1 = np.hstack([g_minus, -f_minus]) % self.modulus if dim else np.zeros((0, 0), dtype=object)
        assert not np.any(self.d1.dot(self.d0) % self.modulus)

    @property
    def dims(self):
        """tuple: (dim C0, dim C1, dim C2)"""
        return self.module.dim, 2 * self.module.dim, self.module.dim

    def differential(self, degree):
        """np.ndarray: d0 or d1."""
        return (self.d0, self.d1)[degree]

    def apply_d0(self, vector):
        """np.ndarray: d0(v)."""
        return self.d0.dot(as_matrix(vector, self.modulus)) % self.modulus

    def apply_d1(self, cochain):
        """np.ndarray: d1(x, y)."""
        return self.d1.dot(as_matrix(cochain, self.modulus)) % self.modulus

    def cocycles(self, degree):
        """np.ndarray: Echelon basis of Z^degree over F_p, as rows."""
        prime, dims = self.module.prime, self.dims
        if degree == 2:
            return np.identity(dims[2], dtype=np.int64)
        return ff_linalg.row_basis(ff_linalg.kernel(self.differential(degree), prime, dims[degree]), prime,
                                   dims[degree])

    def coboundaries(self, degree):
        """np.ndarray: Echelon basis of B^degree over F_p, as rows."""
        prime, dims = self.module.prime, self.dims
        if degree == 0:
            return np.zeros((0, dims[0]), dtype=np.int64)
        return ff_linalg.column_image(self.differential(degree - 1), prime, dims[degree])

    def is_cocycle(self, degree, cochain):
        """bool: True if the cochain is closed over Z/p^N."""
        if degree == 2:
            return True
        return not np.any(self.differential(degree).dot(as_matrix(cochain, self.modulus)) % self.modulus)


@dataclass(frozen=True)
class Cohomology:
    """H^degree as ⊕ Z/p^e over the exponents; representatives are only produced over F_p."""
    degree: int
    prime: int
    precision: int
    exponents: Tuple[int, ...]
    representatives: Tuple[Tuple[int, ...], ...] = ()

    @property
    def dimension(self):
        """int: Minimal number of generators, the F_p dimension when precision is 1."""
        return len(self.exponents)

    @property
    def length(self):
        """int: Sum of the exponents."""
        return sum(self.exponents)

    def to_document(self):
        """dict: Document form."""
        return {
            "degree": self.degree,
            "dimension": self.dimension,
            "exponents": list(self.exponents),
            "representatives": [list(rep) for rep in self.representatives],
        }


def _snf_exponents(matrix, prime, precision, free):
    snf = smith_normal_form(DvrMatrix.from_array(prime, matrix, precision))
    return [e for e in snf.exponents if e > 0] + [precision] * (free - snf.rank)


def _h1_exponents(complex_, prime, precision):
    """Invariant factors of ker(d1) / im(d0) over Z/p^N, through the lattice of the kernel."""
    modulus = prime ** precision
    size = complex_.dims[1]
    snf = smith_normal_form(DvrMatrix.from_array(prime, complex_.d1 % modulus, 2 * precision))
    scales = [prime ** (precision - min(e, precision)) for e in snf.exponents] + [1] * (size - snf.rank)
    generators = np.hstack([complex_.d0, np.identity(size, dtype=object) * modulus])
    transformed = snf.T.array().dot(generators) % prime ** (2 * precision)
    coordinates = np.zeros_like(transformed)
    for i, scale in enumerate(scales):
        assert not any(x % scale for x in transformed[i])
        coordinates[i] = transformed[i] // scale
    return _snf_exponents(coordinates % modulus, prime, precision, size)


def cohomology(module, degree):
    """H^degree of the complex of a module.

    Over F_p the representatives are echelon-reduced cocycles chosen greedily from the echelon basis of the
    cocycles, each in normal form modulo the coboundaries. Over Z/p^N only the invariant factors are returned.

    Args:
        module (ToyPhiGammaModule): The module
        degree (int): 0, 1 or 2

    Returns:
        Cohomology: Exponents and representatives
    """
    if degree not in (0, 1, 2):
        raise ValueError(f"degree must be 0, 1 or 2, got {degree}")
    complex_ = CochainComplex(module)
    prime, precision = module.prime, module.precision
    if module.dim == 0:
        return Cohomology(degree, prime, precision, ())
    if precision > 1:
        if degree == 0:
            exponents = _snf_exponents(complex_.d0, prime, precision, module.dim)
        elif degree == 2:
            exponents = _snf_exponents(complex_.d1, prime, precision, module.dim)
        else:
            exponents = _h1_exponents(complex_, prime, precision)
        LOG.debug("H^%d over Z/%d^%d has exponents %s", degree, prime, precision, exponents)
        return Cohomology(degree, prime, precision, tuple(sorted(exponents)))

    coboundaries = complex_.coboundaries(degree)
    chosen = ff_linalg.extend_basis(coboundaries, complex_.cocycles(degree), prime)
    reps = tuple(tuple(int(x) for x in ff_linalg.normal_form(rep, coboundaries, prime)) for rep in chosen)
    LOG.debug("H^%d over F_%d has dimension %d", degree, prime, len(reps))
    return Cohomology(degree, prime, 1, (1,) * len(reps), reps)


def class_coordinates(module, degree, cochain):
    """Coordinates of the class of a cocycle against the representatives of cohomology(module.reduced(), degree).

    Args:
        module (ToyPhiGammaModule): The module
        degree (int): 0, 1 or 2
        cochain (list): A cocycle

    Raises:
        NotACocycle: If the cochain is not closed mod p

    Returns:
        tuple: Coefficients over F_p
    """
    reduced = module.reduced()
    complex_ = CochainComplex(reduced)
    if not complex_.is_cocycle(degree, cochain):
        raise NotACocycle(f"cochain is not a {degree}-cocycle")
    reps = cohomology(reduced, degree).representatives
    coords = ff_linalg.quotient_coordinates(np.array(reps, dtype=np.int64).reshape(len(reps), complex_.dims[degree]),
                                            complex_.coboundaries(degree), cochain, module.prime)
    assert coords is not None
    return tuple(int(x) for x in coords)


@dataclass(frozen=True)
class GradedActionPair:
    """The actions of f and g on gr¹ (m1) and gr⁰ (m0), with the bracket gr¹ × gr¹ -> gr⁰.

    A realization and the Levi pair it came from are attached when the pair is built from_levi.
    """
    m1: ToyPhiGammaModule
    m0: ToyPhiGammaModule
    algebra: Class2Algebra
    realization: Optional[Any] = field(default=None, compare=False)
    levi: Optional[Tuple[Any, Any]] = field(default=None, compare=False)

    def __post_init__(self):
        rings = {(m.prime, m.precision) for m in (self.m1, self.m0)} | {(self.algebra.prime, self.algebra.precision)}
        if len(rings) != 1:
            raise DimensionMismatch(f"modules and bracket over different rings: {sorted(rings)}")
        if (self.algebra.dim1, self.algebra.dim0) != (self.m1.dim, self.m0.dim):
            raise DimensionMismatch(f"bracket on ({self.algebra.dim1}, {self.algebra.dim0}) for modules of "
                                    f"dimension ({self.m1.dim}, {self.m0.dim})")
        modulus = self.modulus
        structure = self.algebra.structure()
        for op1, op0, name in ((self.m1.f_matrix(), self.m0.f_matrix(), "F"),
                               (self.m1.g_matrix(), self.m0.g_matrix(), "G")):
            for k in range(self.m0.dim):
                moved = sum((op0[k, l] * structure[l] for l in range(self.m0.dim)),
                            np.zeros((self.m1.dim, self.m1.dim), dtype=object))
                if np.any((op1.T.dot(structure[k]).dot(op1) - moved) % modulus):
                    raise NotEquivariant(f"bracket is not {name}-equivariant in coordinate {k}")

    @classmethod
    def from_levi(cls, realization, f_levi, g_levi):
        """Conjugation actions of two commuting block diagonal Levi elements.

        Args:
            realization (BlockRealization): The unipotent radical
            f_levi (np.ndarray): Block diagonal matrix
            g_levi (np.ndarray): Block diagonal matrix commuting with f_levi

        Returns:
            GradedActionPair: The pair, with the realization attached
        """
        prime, precision = realization.prime, realization.precision
        f_1, f_0 = realization.levi_action(f_levi)
        g_1, g_0 = realization.levi_action(g_levi)
        m1 = ToyPhiGammaModule.from_lists(prime, f_1, g_1, precision)
        m0 = ToyPhiGammaModule.from_lists(prime, f_0, g_0, precision)
        levi = (_nested(f_levi, realization.modulus), _nested(g_levi, realization.modulus))
        return cls(m1, m0, realization.algebra, realization, levi)

    @property
    def prime(self):
        """int: Residue characteristic"""
        return self.m1.prime

    @property
    def precision(self):
        """int: Coefficients live in Z/p^precision"""
        return self.m1.precision

    @property
    def modulus(self):
        """int: p^precision"""
        return self.m1.modulus

    def to_document(self):
        """dict: {M1, M0, bracket_structure}, plus the realization blocks and Levi pair when attached."""
        doc = {
            "M1": self.m1.to_document(),
            "M0": self.m0.to_document(),
            "bracket_structure": self.algebra.to_document()["bracket_structure"],
        }
        if self.realization is not None:
            doc["realization"] = {
                "blocks": [self.realization.a, self.realization.b, self.realization.c],
                "prime": self.prime,
                "precision": self.precision,
                "f": [list(row) for row in self.levi[0]],
                "g": [list(row) for row in self.levi[1]],
            }
        return doc


def pair_from_document(doc):
    """Parse a graded pair, either explicit {M1, M0, bracket_structure} or {realization: {blocks, f, g}}.

    Args:
        doc (dict): Document

    Returns:
        GradedActionPair: The pair
    """
    if "realization" in doc:
        real = doc["realization"]
        realization = BlockRealization(*real["blocks"], real["prime"], real.get("precision", 1))
        return GradedActionPair.from_levi(realization, np.array(real["f"], dtype=object),
                                          np.array(real["g"], dtype=object))
    m1 = ToyPhiGammaModule.from_document(doc["M1"])
    m0 = ToyPhiGammaModule.from_document(doc["M0"])
    algebra = Class2Algebra.from_structure(m1.prime, doc["bracket_structure"], m1.precision, dim1=m1.dim)
    return GradedActionPair(m1, m0, algebra)


def _split(cochain, dim):
    cochain = list(cochain)
    if len(cochain) != 2 * dim:
        raise DimensionMismatch(f"1-cochain of length {len(cochain)} for dimension {dim}")
    return cochain[:dim], cochain[dim:]


def q_map(pair, cochain):
    """Q(x, y) = ½[x, G₁x] − ½[y, F₁y] in C² of m0.

    Args:
        pair (GradedActionPair): The graded actions
        cochain (list): (x, y) in C¹ of m1

    Returns:
        np.ndarray: dim0 coordinates
    """
    modulus = pair.modulus
    x_part, y_part = (as_matrix(v, modulus) for v in _split(cochain, pair.m1.dim))
    g_x = pair.m1.g_matrix().dot(x_part) % modulus
    f_y = pair.m1.f_matrix().dot(y_part) % modulus
    return (pair.algebra.bracket(x_part, g_x) - pair.algebra.bracket(y_part, f_y)) * half(modulus) % modulus


def cup(pair, left, right):
    """Symmetric bilinear polarisation ½(Q(c + c′) − Q(c) − Q(c′)).

    Args:
        pair (GradedActionPair): The graded actions
        left (list): c in C¹ of m1
        right (list): c′ in C¹ of m1

    Returns:
        np.ndarray: dim0 coordinates
    """
    modulus = pair.modulus
    total = as_matrix(left, modulus) + as_matrix(right, modulus)
    polar = q_map(pair, total) - q_map(pair, left) - q_map(pair, right)
    return polar * half(modulus) % modulus


def cup_on_cohomology(pair, left, right):
    """The class of c ∪ c′ in H² of the reduction of m0.

    Args:
        pair (GradedActionPair): The graded actions
        left (list): 1-cocycle of m1
        right (list): 1-cocycle of m1

    Raises:
        NotACocycle: If either argument is not closed

    Returns:
        tuple: Coordinates against the representatives of cohomology(m0.reduced(), 2)
    """
    complex_ = CochainComplex(pair.m1)
    for name, cochain in (("left", left), ("right", right)):
        if not complex_.is_cocycle(1, cochain):
            raise NotACocycle(f"{name} argument is not a 1-cocycle")
    return class_coordinates(pair.m0, 2, cup(pair, left, right))


def cup_pairing_matrix(pair):
    """∪_H on the representatives of H¹ of the reduction of m1.

    Args:
        pair (GradedActionPair): The graded actions

    Returns:
        list: [i][j] coordinates of h_i ∪ h_j in H² of m0
    """
    reps = cohomology(pair.m1.reduced(), 1).representatives
    return [[cup_on_cohomology(pair, left, right) for right in reps] for left in reps]


@dataclass(frozen=True)
class HeisenbergCocycle:
    """(x1, y1) in C¹ of m1 and (x0, y0) in C¹ of m0."""
    x1: Tuple[int, ...]
    y1: Tuple[int, ...]
    x0: Tuple[int, ...]
    y0: Tuple[int, ...]

    def elements(self, algebra):
        """tuple: (Class2Element exp(x), Class2Element exp(y))."""
        return (Class2Element.from_vectors(algebra, self.x1, self.x0),
                Class2Element.from_vectors(algebra, self.y1, self.y0))

    def to_document(self):
        """dict: {x1, y1, x0, y0}."""
        return {"x1": list(self.x1), "y1": list(self.y1), "x0": list(self.x0), "y0": list(self.y0)}


def is_heisenberg_cocycle(pair, cocycle):
    """bool: d(x1, y1) = 0 and d(x0, y0) + Q(x1, y1) = 0."""
    if not CochainComplex(pair.m1).is_cocycle(1, cocycle.x1 + cocycle.y1):
        return False
    value = CochainComplex(pair.m0).apply_d1(cocycle.x0 + cocycle.y0) + q_map(pair, cocycle.x1 + cocycle.y1)
    return not np.any(value % pair.modulus)


@dataclass(frozen=True)
class Classification:
    """All solutions of the extension equations over F_p."""
    cocycles: Tuple[HeisenbergCocycle, ...]
    count: int
    extendable: int
    class_count: int
    h1_dimension: int
    oracle_count: Optional[int] = None

    @property
    def oracle_agrees(self):
        """bool: None without an oracle run, else whether the counts match."""
        return None if self.oracle_count is None else self.oracle_count == self.count

    def to_document(self):
        """dict: Document form."""
        return {
            "count": self.count,
            "extendable": self.extendable,
            "class_count": self.class_count,
            "h1_dimension": self.h1_dimension,
            "oracle_count": self.oracle_count,
            "oracle_agrees": self.oracle_agrees,
            "cocycles": [cocycle.to_document() for cocycle in self.cocycles],
        }


def _combinations(basis, prime, first=None):
    """Yield every F_p combination of the rows of basis, optionally with a fixed first coefficient."""
    count = basis.shape[0]
    if count == 0:
        yield np.zeros(basis.shape[1], dtype=np.int64)
        return
    heads = range(prime) if first is None else (first,)
    for head in heads:
        for tail in itertools.product(range(prime), repeat=count - 1):
            coeffs = np.array((head,) + tail, dtype=np.int64)
            yield coeffs.dot(basis) % prime


def _classify_partition(task):
    """Solve the extension equations for the cocycles of m1 with a fixed first coefficient."""
    pair, first = task
    prime = pair.prime
    dim1, dim0 = pair.m1.dim, pair.m0.dim
    complex1, complex0 = CochainComplex(pair.m1), CochainComplex(pair.m0)
    z0 = complex0.cocycles(1)
    found = []
    extendable = 0
    for c1 in _combinations(complex1.cocycles(1), prime, first):
        particular = ff_linalg.solve(complex0.d1, (-q_map(pair, c1)) % prime, prime) if dim0 else \
            np.zeros(0, dtype=np.int64)
        if particular is None:
            continue
        extendable += 1
        for c0 in _combinations(z0, prime):
            c0 = (particular + c0) % prime
            found.append((tuple(int(x) for x in c1[:dim1]), tuple(int(x) for x in c1[dim1:]),
                          tuple(int(x) for x in c0[:dim0]), tuple(int(x) for x in c0[dim0:])))
    return extendable, sorted(found)


def _oracle_partition(task):
    """Count pairs (x, y) in Lie U satisfying the intertwining relation, with a fixed first coordinate."""
    pair, first = task
    realization = pair.realization
    f_levi, g_levi = (np.array(m, dtype=object) for m in pair.levi)
    dim1, dim0 = pair.m1.dim, pair.m0.dim
    inverses = levi_inverses(realization, f_levi, g_levi)
    size = 2 * (dim1 + dim0)
    count = 0
    for tail in itertools.product(range(pair.prime), repeat=size - 1):
        coords = (first,) + tail
        x_elt = Class2Element.from_vectors(pair.algebra, coords[:dim1], coords[dim1:dim1 + dim0])
        rest = coords[dim1 + dim0:]
        y_elt = Class2Element.from_vectors(pair.algebra, rest[:dim1], rest[dim1:])
        if intertwining_holds(realization, x_elt, y_elt, f_levi, g_levi, inverses):
            count += 1
    return count


def classify_extensions(pair, budget=DEFAULT_BUDGET, workers=1, oracle=False):
    """Every solution (x1, y1, x0, y0) of d(x1, y1) = 0 and d(x0, y0) + Q(x1, y1) = 0 over F_p.

    Cocycles of m1 are enumerated exhaustively, each completed by the affine fibre over the cocycles of m0. With a
    realization attached, every solution is converted to (exp(x)f, exp(y)g) and checked against the matrix
    relation.

    Args:
        pair (GradedActionPair): Graded actions over F_p
        budget (int): Maximum number of solutions to list, and of candidates for the oracle
        workers (int): Worker processes
        oracle (bool): Also count solutions by brute force over all of Lie U x Lie U

    Raises:
        SearchSpaceTooLarge: If the enumeration exceeds the budget
        VerificationFailure: If a solution violates the matrix relation

    Returns:
        Classification: Solutions, counts and the oracle result
    """
    if pair.precision != 1:
        raise ValueError("extensions are classified over F_p only")
    prime = pair.prime
    k1 = CochainComplex(pair.m1).cocycles(1).shape[0]
    k0 = CochainComplex(pair.m0).cocycles(1).shape[0]
    if prime ** (k1 + k0) > budget:
        raise SearchSpaceTooLarge(f"{prime}^{k1 + k0} candidate cocycles exceed the budget {budget}")

    tasks = [(pair, first) for first in range(prime)] if k1 else [(pair, None)]
    results = fork_join(workers, _classify_partition, tasks)
    extendable = sum(result[0] for result in results)
    cocycles = tuple(HeisenbergCocycle(*entry) for entry in merge_sorted([result[1] for result in results]))
    b1_dim = CochainComplex(pair.m1).coboundaries(1).shape[0]
    LOG.info("%d extension cocycles from %d of %d^%d cocycles of gr1", len(cocycles), extendable, prime, k1)

    if pair.realization is not None:
        f_levi, g_levi = (np.array(m, dtype=object) for m in pair.levi)
        inverses = levi_inverses(pair.realization, f_levi, g_levi)
        for cocycle in cocycles:
            x_elt, y_elt = cocycle.elements(pair.algebra)
            if not intertwining_holds(pair.realization, x_elt, y_elt, f_levi, g_levi, inverses):
                raise VerificationFailure(f"cocycle {cocycle} does not satisfy the matrix relation")

    oracle_count = None
    if oracle:
        if pair.realization is None:
            raise ValueError("the brute-force oracle needs a realization, build the pair with from_levi")
        size = 2 * (pair.m1.dim + pair.m0.dim)
        if prime ** size > budget:
            raise SearchSpaceTooLarge(f"{prime}^{size} oracle candidates exceed the budget {budget}")
        oracle_count = sum(fork_join(workers, _oracle_partition, [(pair, first) for first in range(prime)])) \
            if size else 1
        LOG.info("Brute force over the matrix relation found %d pairs", oracle_count)

    return Classification(cocycles, len(cocycles), extendable, extendable // prime ** b1_dim,
                          cohomology(pair.m1, 1).dimension, oracle_count)


@dataclass(frozen=True)
class HLReport:
    """Decisions of the three lifting hypotheses."""
    hl1: bool
    hl2: bool
    hl3: bool

    @property
    def all(self):
        """bool: True if all three hold."""
        return self.hl1 and self.hl2 and self.hl3

    def as_tuple(self):
        """tuple: (hl1, hl2, hl3)"""
        return self.hl1, self.hl2, self.hl3


def hl_predicates(pair, h_basis, barcocycle):
    """Decide the three lifting hypotheses for a pair over Z/p^N.

    HL1: the reduction of barcocycle lies in span(H) + B¹ over F_p.
    HL2: the cups h_i ∪ h_j together with B² span C² of the reduction of m0, i.e. ∪ restricted to H is onto H².
    HL3: H² of m0 is exactly Z/p.

    Args:
        pair (GradedActionPair): The graded actions
        h_basis (list): Cocycles of m1 spanning H
        barcocycle (list): A 1-cochain of m1

    Returns:
        HLReport: The three booleans
    """
    prime = pair.prime
    reduced1 = CochainComplex(pair.m1.reduced())
    reduced0 = CochainComplex(pair.m0.reduced())
    dim1 = reduced1.dims[1]
    h_rows = ff_linalg.as_int([list(h) for h in h_basis], prime, dim1)
    for row in h_rows:
        if not reduced1.is_cocycle(1, row):
            raise NotACocycle("elements of H must be 1-cocycles")
    span = np.vstack([h_rows, reduced1.coboundaries(1)])
    hl1 = ff_linalg.in_span(span, ff_linalg.as_int(barcocycle, prime).reshape(-1), prime)

    cups = [cup(pair, left, right) for left, right in itertools.combinations_with_replacement(list(h_rows), 2)]
    image = np.vstack([reduced0.coboundaries(2), ff_linalg.as_int(cups, prime, pair.m0.dim)])
    hl2 = ff_linalg.rank(image, prime) == pair.m0.dim

    hl3 = cohomology(pair.m0, 2).exponents == (1,)
    LOG.info("HL1=%s HL2=%s HL3=%s", hl1, hl2, hl3)
    return HLReport(bool(hl1), bool(hl2), bool(hl3))


def truncated_heisenberg_system(pair, xs=None, ys=None, precision=None):
    """The system 𝔵∪𝔵 + d𝔶 = 0 in W = C² of m0 for 𝔵 = Σ x_i X_i and 𝔶 = Σ y_j Y_j.

    Args:
        pair (GradedActionPair): The graded actions
        xs (list): Cocycles X_i of m1, defaults to the F_p cocycle basis
        ys (list): Cochains Y_j in C¹ of m0, defaults to the standard basis
        precision (int): Precision of the system, defaults to that of the pair

    Returns:
        HeisenbergSystem: Σ_k[i][j] = (X_i ∪ X_j)_k and d = (d1 Y_1 | ... | d1 Y_t)
    """
    complex1, complex0 = CochainComplex(pair.m1), CochainComplex(pair.m0)
    if xs is None:
        xs = [list(row) for row in complex1.cocycles(1)]
    if ys is None:
        ys = [list(row) for row in np.identity(complex0.dims[1], dtype=int)]
    for x_vec in xs:
        if not complex1.is_cocycle(1, x_vec):
            raise NotACocycle("variables X must be 1-cocycles of gr1")
    cups = [[cup(pair, left, right) for right in xs] for left in xs]
    sigma = [[[int(cups[i][j][k]) for j in range(len(xs))] for i in range(len(xs))] for k in range(pair.m0.dim)]
    columns = [complex0.apply_d1(y_vec) for y_vec in ys]
    d_rows = [[int(column[k]) for column in columns] for k in range(pair.m0.dim)]
    LOG.debug("Truncated system with r=%d s=%d t=%d", len(xs), pair.m0.dim, len(ys))
    return HeisenbergSystem.from_lists(pair.prime, sigma, d_rows, t=len(ys),
                                       precision=pair.precision if precision is None else precision)
