# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Error classes shared by the heislift modules.

Every error carries the process exit code the command line front end reports for it.
"""


class HeisliftError(Exception):
    """Base error class of heislift."""
    exit_code = 1


class NotHeisenberg(HeisliftError):
    """The quadratic system violates one of the Heisenberg conditions."""
    exit_code = 2


class NotHeisenbergH1(NotHeisenberg):
    """coker d is neither free of rank 1 nor cyclic torsion."""


class NotHeisenbergH2(NotHeisenberg):
    """No quadratic witness f with f^t Sigma_1 f a unit exists."""


class InvalidModPSolution(HeisliftError):
    """The supplied reduction does not solve the system mod p."""
    exit_code = 3


class SearchSpaceTooLarge(HeisliftError):
    """An exhaustive search would exceed the configured budget."""
    exit_code = 4


class PrecisionExhausted(HeisliftError):
    """No p-adic digits of the requested quantity are known any more."""
    exit_code = 5


class InvariantViolation(HeisliftError):
    """An input object violates a structural invariant."""
    exit_code = 6


class NonUnitInverse(InvariantViolation):
    """Inversion of an element of positive valuation."""


class NonResidue(InvariantViolation):
    """The unit part is not a square mod p."""


class OddValuation(InvariantViolation):
    """Square root requested of an element of odd valuation."""


class NonCyclicCokernel(InvariantViolation):
    """The cokernel is not of the form Lambda / p^n."""


class DegenerateInput(InvariantViolation):
    """The input is a boundary case the operation does not accept."""


class NotInImage(InvariantViolation):
    """The vector is not in the column span of the matrix."""


class FloorInfeasible(InvariantViolation):
    """No preimage meets the requested valuation floor."""


class NotUnipotent(InvariantViolation):
    """(u - 1)^3 does not vanish."""


class DimensionMismatch(InvariantViolation):
    """Operand shapes do not agree."""


class NotACocycle(InvariantViolation):
    """A cochain expected to be closed is not."""


class NonCommutingOperators(InvariantViolation):
    """F and G do not commute."""


class NotAntisymmetric(InvariantViolation):
    """A bracket structure matrix is not antisymmetric."""


class NotEquivariant(InvariantViolation):
    """The bracket does not intertwine the operator pairs."""


class NotAnInvolution(InvariantViolation):
    """j squared is not the identity."""


class DoesNotDescend(InvariantViolation):
    """The involution does not commute with the differentials."""


class DegeneratePairing(InvariantViolation):
    """The bilinear pairing has a non-trivial kernel."""


class NotOrthogonal(InvariantViolation):
    """The supplied subspaces do not pair to zero."""


class InvalidRank(InvariantViolation):
    """The parabolic rank k is outside the family's range."""


class VerificationFailure(HeisliftError):
    """A verifier found the structure data inconsistent."""
    exit_code = 7
