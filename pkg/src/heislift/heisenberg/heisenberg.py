# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Heisenberg quadratic systems x^tΣx + d·y = 0 over Z_p.

Checks the two Heisenberg conditions, enumerates solutions mod p and lifts a solution mod p to Z_p, or to a
quadratic extension of it when the Newton polygon of the lifting quadratic asks for one.
"""

from dataclasses import dataclass
import itertools
import logging
from typing import Optional
from typing import Tuple

import numpy as np

from ..errors import DimensionMismatch
from ..errors import InvalidModPSolution
from ..errors import NotHeisenbergH1
from ..errors import NotHeisenbergH2
from ..errors import SearchSpaceTooLarge
from ..padic.dvr_linalg import AdaptedCoordinates
from ..padic.dvr_linalg import CokernelInvariants
from ..padic.dvr_linalg import DvrMatrix
from ..padic.dvr_linalg import adapted_coordinates
from ..padic.dvr_linalg import cokernel_invariants
from ..padic.dvr_linalg import constrained_preimage
from ..padic.dvr_linalg import matmul
from ..padic.padic_core import DEFAULT_PRECISION
from ..padic.padic_core import RAMIFIED
from ..padic.padic_core import AtLeast
from ..padic.padic_core import FieldDescriptor
from ..padic.padic_core import PadicScalar
from ..padic.padic_core import QuadExtScalar
from ..padic.padic_core import QuadraticPolynomial
from ..padic.padic_core import newton_polygon_roots
from ..padic.padic_core import valuation_lower_bound
from ..util import fork_join

LOG = logging.getLogger("heislift")

DEFAULT_BUDGET = 10 ** 7


def bilinear(matrix, left, right):
    """Evaluate left^t·M·right over base or extension scalars.

    Args:
        matrix (DvrMatrix): Square matrix
        left (list): Scalars
        right (list): Scalars

    Returns:
        object: The scalar
    """
    total = PadicScalar(matrix.prime, matrix.precision, 0, matrix.known_prec)
    for i, j in itertools.product(range(matrix.rows), range(matrix.cols)):
        if matrix.residues[i * matrix.cols + j]:
            total = matrix.entry(i, j) * left[i] * right[j] + total
    return total


@dataclass(frozen=True)
class HeisenbergSystem:
    """The coefficient data (Σ_1, ..., Σ_s, d) of x^tΣx + d·y = 0."""
    prime: int
    precision: int
    r: int  # pylint: disable=invalid-name
    s: int  # pylint: disable=invalid-name
    t: int  # pylint: disable=invalid-name
    sigma: Tuple[DvrMatrix, ...]
    d: DvrMatrix  # pylint: disable=invalid-name

    def __post_init__(self):
        if self.r < 1 or self.s < 1 or self.t < 0:
            raise DimensionMismatch(f"need r, s >= 1 and t >= 0, got r={self.r} s={self.s} t={self.t}")
        if len(self.sigma) != self.s:
            raise DimensionMismatch(f"{len(self.sigma)} quadratic forms for s={self.s}")
        for form in self.sigma:
            if (form.rows, form.cols) != (self.r, self.r):
                raise DimensionMismatch(f"quadratic form of shape {form.rows}x{form.cols}, "
                                        f"expected {self.r}x{self.r}")
        if (self.d.rows, self.d.cols) != (self.s, self.t):
            raise DimensionMismatch(f"d of shape {self.d.rows}x{self.d.cols}, expected {self.s}x{self.t}")
        for matrix in self.sigma + (self.d,):
            if (matrix.prime, matrix.precision) != (self.prime, self.precision):
                raise DimensionMismatch("coefficients over different rings")

    @classmethod
    def from_lists(cls, prime, sigma, d, t=None, precision=DEFAULT_PRECISION):
        """Build a system from nested integer lists.

        Args:
            prime (int): Residue characteristic
            sigma (list): s matrices of size r x r
            d (list): s rows of t integers
            t (int): Number of y variables, needed when d has empty rows
            precision (int): Absolute precision N

        Returns:
            HeisenbergSystem: The system
        """
        forms = tuple(DvrMatrix.from_rows(prime, form, precision=precision) for form in sigma)
        d_matrix = DvrMatrix.from_rows(prime, d, cols=t, precision=precision)
        return cls(prime, precision, forms[0].rows, len(forms), d_matrix.cols, forms, d_matrix)

    def quadratic_values(self, x):
        """list: x^tΣ_k x for k = 1..s."""
        return [bilinear(form, x, x) for form in self.sigma]

    def residual(self, x, y):
        """Evaluate x^tΣx + d·y coordinate-wise.

        Args:
            x (list): r scalars
            y (list): t scalars

        Returns:
            list: s scalars
        """
        if len(x) != self.r or len(y) != self.t:
            raise DimensionMismatch(f"solution of shape ({len(x)}, {len(y)}), expected ({self.r}, {self.t})")
        return [q + dy for q, dy in zip(self.quadratic_values(x), self.d.apply(y))]

    def mod_p_arrays(self):
        """tuple: (Σ mod p as an s x r x r array, d mod p as an s x t array)."""
        sigma = np.array([np.array(form.array() % self.prime, dtype=np.int64) for form in self.sigma])
        d_mod_p = np.array(self.d.array() % self.prime, dtype=np.int64).reshape(self.s, self.t)
        return sigma, d_mod_p


@dataclass(frozen=True)
class ModPSolution:
    """(x̄, ȳ) ∈ F_p^(r+t) with x̄^tΣx̄ + d·ȳ ≡ 0 mod p."""
    xbar: Tuple[int, ...]
    ybar: Tuple[int, ...]

    def as_tuple(self):
        """tuple: The concatenated coordinates."""
        return self.xbar + self.ybar


@dataclass(frozen=True)
class H1Report:
    """Outcome of the cokernel test on d."""
    holds: bool
    invariants: CokernelInvariants
    coordinates: Optional[AdaptedCoordinates]

    @property
    def kind(self):
        """str: "free", "torsion" or None."""
        if not self.holds:
            return None
        return "free" if self.coordinates.is_free else "torsion"


@dataclass(frozen=True)
class LiftResult:
    """A solution over Z_p or Z_p[θ] lifting a solution mod p."""
    x: tuple  # pylint: disable=invalid-name
    y: tuple  # pylint: disable=invalid-name
    field_descriptor: FieldDescriptor
    achieved_prec: int
    witness: Tuple[int, ...]
    lam: object


@dataclass(frozen=True)
class VerifyReport:
    """Valuations of x^tΣx + d·y, one per equation."""
    valuations: tuple

    @property
    def minimum(self):
        """object: Smallest valuation, the sentinel if every residual vanished."""
        return min(self.valuations, key=valuation_lower_bound)

    @property
    def exact(self):
        """bool: True when every residual is an indeterminate zero."""
        return all(isinstance(val, AtLeast) for val in self.valuations)


def check_h1(system):
    """Test whether coker d is Λ or Λ/p^n and, if so, return the adapted coordinate change.

    Args:
        system (HeisenbergSystem): The system

    Returns:
        H1Report: Verdict, cokernel invariants and adapted coordinates
    """
    invariants = cokernel_invariants(system.d)
    coordinates = adapted_coordinates(system.d)
    LOG.info("H1: coker d has invariants %s and free rank %d", invariants.exponents, invariants.free_rank)
    return H1Report(coordinates is not None, invariants, coordinates)


def adapted_system(system, coordinates):
    """Rewrite the system in adapted coordinates: Σ'_k = Σ_i P⁻¹[k, i]·Σ_i and d' = P⁻¹·d.

    Args:
        system (HeisenbergSystem): The system
        coordinates (AdaptedCoordinates): Output of check_h1

    Returns:
        HeisenbergSystem: The same solution set, with Im(d') = span(p^n e_1, e_2, ...) or span(e_2, ...)
    """
    change_inv = coordinates.change_inv.array()
    modulus = system.prime ** system.precision
    forms = []
    for k in range(system.s):
        combined = sum(change_inv[k, i] * system.sigma[i].array() for i in range(system.s)) % modulus
        forms.append(DvrMatrix.from_array(system.prime, combined, system.precision))
    return HeisenbergSystem(system.prime, system.precision, system.r, system.s, system.t, tuple(forms),
                            matmul(coordinates.change_inv, system.d))


def _find_witness(system, budget):
    if system.prime ** system.r > budget:
        raise SearchSpaceTooLarge(f"{system.prime}^{system.r} witness candidates exceed the budget {budget}")
    sigma, _ = system.mod_p_arrays()
    for candidate in itertools.product(range(system.prime), repeat=system.r):
        vector = np.array(candidate, dtype=np.int64)
        if int(vector.dot(sigma[0]).dot(vector)) % system.prime:
            return candidate
    return None


def check_h2(system, budget=DEFAULT_BUDGET):
    """Search F_p^r lexicographically for f with f^tΣ'_1 f a unit, Σ' in adapted coordinates.

    Args:
        system (HeisenbergSystem): The system
        budget (int): Largest admissible p^r

    Raises:
        NotHeisenbergH1: If the cokernel test fails
        SearchSpaceTooLarge: If p^r exceeds the budget

    Returns:
        tuple: The witness f, or None when the exhausted search found none
    """
    report = check_h1(system)
    if not report.holds:
        raise NotHeisenbergH1("coker d is neither free of rank one nor cyclic torsion")
    witness = _find_witness(adapted_system(system, report.coordinates), budget)
    LOG.info("H2 witness: %s", witness)
    return witness


def _enumerate_partition(task):
    """Solutions mod p whose first coordinate is fixed, in lexicographic order."""
    prime, sigma, d_mod_p, lead = task
    rank = sigma.shape[1]
    rest = sigma.shape[1] + d_mod_p.shape[1] - 1
    if rest:
        grid = np.indices((prime,) * rest, dtype=np.int64).reshape(rest, -1).T
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    xbar = np.hstack([np.full((grid.shape[0], 1), lead, dtype=np.int64), grid[:, :rank - 1]])
    ybar = grid[:, rank - 1:]
    values = np.einsum("mi,kij,mj->mk", xbar, sigma, xbar) + ybar.dot(d_mod_p.T)
    hits = np.flatnonzero(~np.any(values % prime, axis=1))
    return [(tuple(int(v) for v in xbar[i]), tuple(int(v) for v in ybar[i])) for i in hits]


def enumerate_mod_p(system, budget=DEFAULT_BUDGET, workers=1):
    """All solutions of x̄^tΣx̄ + d·ȳ ≡ 0 mod p, sorted lexicographically on (x̄, ȳ).

    The search is partitioned by the first coordinate of x̄; the merged output does not depend on workers.

    Args:
        system (HeisenbergSystem): The system
        budget (int): Largest admissible p^(r+t)
        workers (int): Number of worker processes

    Raises:
        SearchSpaceTooLarge: If p^(r+t) exceeds the budget

    Returns:
        list: ModPSolution entries
    """
    size = system.prime ** (system.r + system.t)
    if size > budget:
        raise SearchSpaceTooLarge(f"{size} candidates exceed the budget {budget}")
    sigma, d_mod_p = system.mod_p_arrays()
    tasks = [(system.prime, sigma, d_mod_p, lead) for lead in range(system.prime)]
    found = fork_join.merge_sorted(fork_join.fork_join(workers, _enumerate_partition, tasks))
    LOG.info("%d solutions mod %d among %d candidates", len(found), system.prime, size)
    return [ModPSolution(xbar, ybar) for xbar, ybar in found]


def _floored_preimage(d, w, field):
    """Solve d·z = w with z ≡ 0 modulo the uniformizer of the working ring."""
    if not field.is_extension:
        return constrained_preimage(d, w, 1)
    minpoly = field.minpoly
    lifted = [QuadExtScalar.embed(x, minpoly) if isinstance(x, PadicScalar) else x for x in w]
    z_base = constrained_preimage(d, [x.a0 for x in lifted], 1)
    # v(θ) = 1/2 when ramified, so the θ-coordinate needs no extra power of p.
    z_theta = constrained_preimage(d, [x.a1 for x in lifted], 0 if field.kind == RAMIFIED else 1)
    return tuple(QuadExtScalar(u, v, minpoly) for u, v in zip(z_base, z_theta))


def _check_solution(system, solution):
    if len(solution.xbar) != system.r or len(solution.ybar) != system.t:
        raise InvalidModPSolution(f"solution of shape ({len(solution.xbar)}, {len(solution.ybar)}), "
                                  f"expected ({system.r}, {system.t})")
    sigma, d_mod_p = system.mod_p_arrays()
    xbar = np.array(solution.xbar, dtype=np.int64) % system.prime
    ybar = np.array(solution.ybar, dtype=np.int64).reshape(system.t) % system.prime
    values = np.einsum("i,kij,j->k", xbar, sigma, xbar) + d_mod_p.dot(ybar)
    if np.any(values % system.prime):
        raise InvalidModPSolution(f"residual {list(values % system.prime)} mod {system.prime}")


def lift(system, solution, budget=DEFAULT_BUDGET):  # pylint: disable=too-many-locals
    """Lift a solution mod p.

    In adapted coordinates the first equation becomes a quadratic in λ along the witness direction f; a root of
    positive valuation zeroes that coordinate, and the remaining residual lies in p·Im(d') and is absorbed by
    y ← y − z.

    Args:
        system (HeisenbergSystem): The system
        solution (ModPSolution): Solution mod p
        budget (int): Witness search budget

    Raises:
        NotHeisenbergH1: If coker d is not Λ or Λ/p^n
        NotHeisenbergH2: If no witness exists

    Returns:
        LiftResult: The lift
    """
    prime, precision = system.prime, system.precision
    _check_solution(system, solution)
    report = check_h1(system)
    if not report.holds:
        raise NotHeisenbergH1("coker d is neither free of rank one nor cyclic torsion")
    adapted = adapted_system(system, report.coordinates)
    witness = _find_witness(adapted, budget)
    if witness is None:
        raise NotHeisenbergH2("f^tΣ'_1 f vanishes mod p for every f")

    def embed(values):
        return [PadicScalar.lift_int(prime, v, precision) for v in values]

    x, y, f = embed(solution.xbar), embed(solution.ybar), embed(witness)
    first = adapted.sigma[0]
    quadratic = QuadraticPolynomial(bilinear(first, f, f),
                                    bilinear(first, x, f) + bilinear(first, f, x),
                                    bilinear(first, x, x) + adapted.d.apply(y)[0])
    lam, field = newton_polygon_roots(quadratic)
    LOG.debug("λ = %s in the %s ring", lam, field.kind)
    if field.is_extension:
        x = [QuadExtScalar.embed(v, field.minpoly) for v in x]
        y = [QuadExtScalar.embed(v, field.minpoly) for v in y]
    x = [xi + lam * fi for xi, fi in zip(x, f)]

    z_vec = _floored_preimage(adapted.d, adapted.residual(x, y), field)
    y = [yi - zi for yi, zi in zip(y, z_vec)]

    achieved = min(value.known_prec for value in system.residual(x, y))
    LOG.info("lifted %s to precision %d over the %s ring", solution.as_tuple(), achieved, field.kind)
    return LiftResult(tuple(x), tuple(y), field, achieved, witness, lam)


def verify(system, result):
    """Recompute x^tΣx + d·y in the original coordinates.

    Args:
        system (HeisenbergSystem): The system
        result (LiftResult): A lift

    Returns:
        VerifyReport: Residual valuations
    """
    return VerifyReport(tuple(value.valuation() for value in system.residual(list(result.x), list(result.y))))


def system_from_document(doc):
    """Parse {prime, precision, r, s, t, Sigma, d}.

    Args:
        doc (dict): Document

    Returns:
        HeisenbergSystem: The system
    """
    system = HeisenbergSystem.from_lists(doc["prime"], doc["Sigma"], doc["d"], t=doc["t"],
                                         precision=doc.get("precision", DEFAULT_PRECISION))
    if (system.r, system.s) != (doc["r"], doc["s"]):
        raise DimensionMismatch(f"declared r={doc['r']} s={doc['s']} but got r={system.r} s={system.s}")
    return system


def system_to_document(system):
    """dict: The document form of a system."""
    return {
        "prime": system.prime,
        "precision": system.precision,
        "r": system.r,
        "s": system.s,
        "t": system.t,
        "Sigma": [form.to_document()["entries"] for form in system.sigma],
        "d": system.d.to_document()["entries"],
    }


def lift_result_to_document(result):
    """dict: The document form of a lift."""
    return {
        "x": [value.to_document() for value in result.x],
        "y": [value.to_document() for value in result.y],
        "field": result.field_descriptor.to_document(),
        "achieved_prec": result.achieved_prec,
        "witness": list(result.witness),
        "lambda": result.lam.to_document(),
    }
