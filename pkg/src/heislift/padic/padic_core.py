# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Fixed-precision arithmetic in Z_p and in quadratic extensions of it.

Elements are residues modulo p^known_prec. known_prec is the absolute precision actually guaranteed and is
propagated as the minimum over the operands of every ring operation.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import logging
from typing import Optional
from typing import Tuple
from typing import Union

from sympy import is_quad_residue
from sympy import isprime
from sympy import mod_inverse
from sympy import multiplicity
from sympy import sqrt_mod

from ..errors import DegenerateInput
from ..errors import NonResidue
from ..errors import NonUnitInverse
from ..errors import OddValuation
from ..errors import PrecisionExhausted

LOG = logging.getLogger("heislift")

DEFAULT_PRECISION = 32

BASE = "base"
RAMIFIED = "ramified"
UNRAMIFIED = "unramified"


@lru_cache(maxsize=None)
def check_prime(prime):
    """Validate the residue characteristic.

    Args:
        prime (int): Candidate prime

    Raises:
        ValueError: If the number is not an odd prime

    Returns:
        int: The prime
    """
    if prime <= 2 or not isprime(prime):
        raise ValueError(f"p must be an odd prime, got {prime}")
    return prime


@dataclass(frozen=True)
class AtLeast:
    """Valuation of an indeterminate zero: only a lower bound is known."""
    bound: Union[int, Fraction]

    def __str__(self):
        return f"≥{self.bound}"


def valuation_lower_bound(value):
    """Numeric lower bound of a valuation that may be the indeterminate-zero sentinel.

    Args:
        value (object): An int, Fraction or AtLeast

    Returns:
        int: The exact valuation, or the sentinel's bound
    """
    return value.bound if isinstance(value, AtLeast) else value


@dataclass(frozen=True)
class PadicScalar:
    """An element of Z_p known modulo p^known_prec."""
    prime: int
    precision: int
    residue: int
    known_prec: int

    def __post_init__(self):
        check_prime(self.prime)
        if not 0 <= self.known_prec <= self.precision:
            raise ValueError(f"known_prec {self.known_prec} outside [0, {self.precision}]")
        object.__setattr__(self, "residue", self.residue % self.prime ** self.known_prec)

    @classmethod
    def from_int(cls, prime, value, precision=DEFAULT_PRECISION):
        """Embed an integer at full precision.

        Args:
            prime (int): Residue characteristic
            value (int): Integer to embed
            precision (int): Absolute precision N

        Returns:
            PadicScalar: value + O(p^N)
        """
        return cls(prime, precision, value, precision)

    @classmethod
    def lift_int(cls, prime, residue, precision=DEFAULT_PRECISION):
        """Canonical lift of a class mod p: its representative in [0, p), at full precision.

        Args:
            prime (int): Residue characteristic
            residue (int): Any integer of the class
            precision (int): Absolute precision N

        Returns:
            PadicScalar: The lift
        """
        return cls.from_int(prime, residue % prime, precision)

    @property
    def modulus(self):
        """int: p^known_prec"""
        return self.prime ** self.known_prec

    def _like(self, residue, known_prec):
        if known_prec <= 0:
            raise PrecisionExhausted(f"no {self.prime}-adic digits left")
        return PadicScalar(self.prime, self.precision, residue, known_prec)

    def _coerce(self, other):
        if isinstance(other, int):
            return PadicScalar.from_int(self.prime, other, self.precision)
        if isinstance(other, PadicScalar):
            if (other.prime, other.precision) != (self.prime, self.precision):
                raise ValueError(f"operands from Z_{other.prime} mod {other.precision} and Z_{self.prime} "
                                 f"mod {self.precision} mixed")
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._like(self.residue + other.residue, min(self.known_prec, other.known_prec))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._like(self.residue - other.residue, min(self.known_prec, other.known_prec))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._like(self.residue * other.residue, min(self.known_prec, other.known_prec))

    __rmul__ = __mul__

    def __neg__(self):
        return self._like(-self.residue, self.known_prec)

    def inverse(self):
        """Multiplicative inverse at full known precision.

        Raises:
            NonUnitInverse: If the element has positive valuation

        Returns:
            PadicScalar: The inverse
        """
        if self.valuation() != 0:
            raise NonUnitInverse(f"{self} is not a unit")
        return self._like(int(mod_inverse(self.residue, self.modulus)), self.known_prec)

    def is_zero(self):
        """bool: True for an indeterminate zero."""
        return self.residue == 0

    def valuation(self):
        """p-adic valuation, or AtLeast(known_prec) for an indeterminate zero.

        Returns:
            object: int or AtLeast
        """
        if self.residue == 0:
            return AtLeast(self.known_prec)
        return int(multiplicity(self.prime, self.residue))

    def unit_part(self):
        """Return u with self = p^v u; the division costs v digits of precision.

        Returns:
            PadicScalar: The unit part
        """
        val = self.valuation()
        if isinstance(val, AtLeast):
            raise PrecisionExhausted(f"unit part of an indeterminate zero mod {self.prime}^{self.known_prec}")
        return self.divide_by_p_power(val)

    def divide_by_p_power(self, k):
        """Exact division by p^k.

        Args:
            k (int): Exponent

        Raises:
            ValueError: If p^k does not divide the residue

        Returns:
            PadicScalar: self / p^k, known to k fewer digits
        """
        if self.residue % self.prime ** k:
            raise ValueError(f"{self.prime}^{k} does not divide {self.residue}")
        return self._like(self.residue // self.prime ** k, self.known_prec - k)

    def shift(self, k):
        """Multiplication by p^k; k more digits are known, up to the absolute precision.

        Args:
            k (int): Non-negative exponent

        Returns:
            PadicScalar: p^k·self
        """
        assert k >= 0
        return self._like(self.residue * self.prime ** k, min(self.known_prec + k, self.precision))

    def reduce(self):
        """int: The residue mod p."""
        return self.residue % self.prime

    def residue_digits(self):
        """Base-p digits, little-endian, one per known digit.

        Returns:
            list: known_prec digits
        """
        digits = []
        value = self.residue
        for _ in range(self.known_prec):
            value, digit = divmod(value, self.prime)
            digits.append(digit)
        return digits

    def to_document(self):
        """dict: Serializable form."""
        return {
            "prime": self.prime,
            "precision": self.precision,
            "residue_digits": self.residue_digits(),
            "known_prec": self.known_prec,
        }

    @classmethod
    def from_document(cls, doc):
        """Inverse of to_document.

        Args:
            doc (dict): Serialized scalar

        Returns:
            PadicScalar: The scalar
        """
        residue = sum(digit * doc["prime"] ** i for i, digit in enumerate(doc["residue_digits"]))
        return cls(doc["prime"], doc["precision"], residue, doc["known_prec"])

    def __str__(self):
        return f"{self.residue} + O({self.prime}^{self.known_prec})"


@dataclass(frozen=True)
class QuadExtScalar:
    """a0 + a1·θ in Z_p[θ] with θ² + bθ + c = 0, minpoly = (b, c)."""
    a0: PadicScalar
    a1: PadicScalar
    minpoly: Tuple[PadicScalar, PadicScalar]

    @classmethod
    def embed(cls, value, minpoly):
        """Embed a base scalar.

        Args:
            value (PadicScalar): Base element
            minpoly (tuple): (b, c) of the extension

        Returns:
            QuadExtScalar: value + 0·θ
        """
        return cls(value, PadicScalar.from_int(value.prime, 0, value.precision), minpoly)

    @property
    def prime(self):
        """int: Residue characteristic."""
        return self.a0.prime

    @property
    def precision(self):
        """int: Absolute precision N."""
        return self.a0.precision

    @property
    def known_prec(self):
        """int: Precision guaranteed on both coordinates."""
        return min(self.a0.known_prec, self.a1.known_prec)

    def _coerce(self, other):
        if isinstance(other, (int, PadicScalar)):
            return QuadExtScalar.embed(self.a0._coerce(other), self.minpoly)  # pylint: disable=protected-access
        if isinstance(other, QuadExtScalar):
            if other.minpoly != self.minpoly:
                raise ValueError("operands live in different quadratic extensions")
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadExtScalar(self.a0 + other.a0, self.a1 + other.a1, self.minpoly)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadExtScalar(self.a0 - other.a0, self.a1 - other.a1, self.minpoly)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        b, c = self.minpoly
        top = self.a1 * other.a1
        return QuadExtScalar(self.a0 * other.a0 - c * top,
                             self.a0 * other.a1 + self.a1 * other.a0 - b * top,
                             self.minpoly)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadExtScalar(-self.a0, -self.a1, self.minpoly)

    def conjugate(self):
        """QuadExtScalar: Image under θ ↦ −b − θ."""
        b, _ = self.minpoly
        return QuadExtScalar(self.a0 - b * self.a1, -self.a1, self.minpoly)

    def norm(self):
        """PadicScalar: a0² − b·a0·a1 + c·a1²."""
        b, c = self.minpoly
        return self.a0 * self.a0 - b * self.a0 * self.a1 + c * self.a1 * self.a1

    def inverse(self):
        """Multiplicative inverse through the norm.

        Raises:
            NonUnitInverse: If the norm is not a unit

        Returns:
            QuadExtScalar: The inverse
        """
        norm = self.norm()
        if norm.valuation() != 0:
            raise NonUnitInverse("element of positive valuation in the extension")
        return self.conjugate() * norm.inverse()

    def is_zero(self):
        """bool: True when both coordinates are indeterminate zeros."""
        return self.a0.is_zero() and self.a1.is_zero()

    def valuation(self):
        """Valuation in (1/2)Z, read off the norm.

        Returns:
            object: Fraction or AtLeast
        """
        if self.is_zero():
            return AtLeast(self.known_prec)
        norm_val = self.norm().valuation()
        if isinstance(norm_val, AtLeast):
            return AtLeast(Fraction(norm_val.bound, 2))
        return Fraction(norm_val, 2)

    def components(self):
        """tuple: (a0, a1)."""
        return self.a0, self.a1

    def to_document(self):
        """dict: Serializable form."""
        b, c = self.minpoly
        return {
            "prime": self.prime,
            "precision": self.precision,
            "known_prec": self.known_prec,
            "a0": self.a0.to_document(),
            "a1": self.a1.to_document(),
            "minpoly": [b.to_document(), c.to_document()],
        }

    def __str__(self):
        return f"({self.a0}) + ({self.a1})·θ"


@dataclass(frozen=True)
class FieldDescriptor:
    """Which ring a root lives in: the base Z_p, or Z_p[θ] with θ² + bθ + c = 0."""
    kind: str = BASE
    minpoly: Optional[Tuple[PadicScalar, PadicScalar]] = None

    @property
    def is_extension(self):
        """bool: True unless the field is the base."""
        return self.kind != BASE

    def to_document(self):
        """dict: Serializable form."""
        doc = {"kind": self.kind}
        if self.minpoly is not None:
            doc["minpoly"] = [self.minpoly[0].residue, self.minpoly[1].residue]
        return doc


@dataclass(frozen=True)
class QuadraticPolynomial:
    """a·λ² + b·λ + c."""
    a: PadicScalar
    b: PadicScalar
    c: PadicScalar

    def evaluate(self, lam):
        """Evaluate at a base or extension scalar.

        Args:
            lam (object): PadicScalar or QuadExtScalar

        Returns:
            object: a·λ² + b·λ + c
        """
        return self.a * lam * lam + self.b * lam + self.c

    def derivative(self, lam):
        """Evaluate 2aλ + b.

        Args:
            lam (object): PadicScalar or QuadExtScalar

        Returns:
            object: The derivative at λ
        """
        return 2 * self.a * lam + self.b


def hensel_sqrt(x):
    """Square root in Z_p by Newton iteration from a root mod p.

    Of the two roots, the one whose lowest digit lies in [1, (p-1)/2] is returned. Halving the valuation v costs
    v/2 digits: the root is known to x.known_prec − v/2, and an indeterminate zero has a root known to half its
    digits, rounded up.

    Args:
        x (PadicScalar): Element of even valuation with a quadratic residue as unit part

    Raises:
        OddValuation: If the valuation is odd
        NonResidue: If the unit part is not a square mod p

    Returns:
        PadicScalar: The root
    """
    prime = x.prime
    val = x.valuation()
    if isinstance(val, AtLeast):
        return x._like(0, (x.known_prec + 1) // 2)  # pylint: disable=protected-access
    if val % 2:
        raise OddValuation(f"valuation {val} is odd")
    unit = x.divide_by_p_power(val)
    if not is_quad_residue(unit.reduce(), prime):
        raise NonResidue(f"{unit.reduce()} is not a square mod {prime}")

    root = int(sqrt_mod(unit.reduce(), prime))
    if root > (prime - 1) // 2:
        root = prime - root
    digits = 1
    while digits < unit.known_prec:
        digits = min(2 * digits, unit.known_prec)
        modulus = prime ** digits
        root = (root + unit.residue * int(mod_inverse(root, modulus))) * (modulus + 1) // 2 % modulus
    LOG.debug("sqrt of %s: %s (valuation %s)", x, root, val)
    return PadicScalar(prime, x.precision, root, unit.known_prec).shift(val // 2)


def _newton_root(quadratic):
    """Hensel refinement of the positive-valuation root when v(b) = 0, seeded at −c/b."""
    lam = -(quadratic.c * quadratic.b.inverse())
    for _ in range(quadratic.c.precision.bit_length() + 2):
        value = quadratic.evaluate(lam)
        if value.is_zero():
            break
        lam = lam - value * quadratic.derivative(lam).inverse()
    assert quadratic.evaluate(lam).is_zero()
    return lam


def newton_polygon_roots(quadratic):
    """Extract a root of positive valuation of aλ² + bλ + c with v(a) = 0 < v(c).

    When v(b) = 0 the Newton polygon has slopes 0 and v(c) and the root lies in Z_p. Otherwise the square is
    completed, λ = −B/2 ± √D with B = b/a, C = c/a, D = B²/4 − C, and either D is a square in Z_p or a quadratic
    extension is built with an exact minpoly: θ² = p·u (ramified) when v(D) is odd, θ² = u (unramified) when u is a
    non-residue unit.

    Args:
        quadratic (QuadraticPolynomial): The polynomial

    Raises:
        DegenerateInput: If a is not a unit or c is a unit
        PrecisionExhausted: If no digit of c is known

    Returns:
        tuple: (root, FieldDescriptor)
    """
    a, b, c = quadratic.a, quadratic.b, quadratic.c
    prime, precision = a.prime, a.precision
    if a.valuation() != 0:
        raise DegenerateInput("leading coefficient must be a unit")
    known_prec = min(a.known_prec, b.known_prec, c.known_prec)
    if known_prec == 0:
        raise PrecisionExhausted("coefficients carry no digits")

    val_c = c.valuation()
    if isinstance(val_c, AtLeast):
        LOG.debug("constant term is an indeterminate zero, λ = 0")
        return PadicScalar(prime, precision, 0, known_prec), FieldDescriptor(BASE)
    if val_c == 0:
        raise DegenerateInput("constant term must have positive valuation")

    if b.valuation() == 0:
        return _newton_root(quadratic), FieldDescriptor(BASE)

    half = PadicScalar.from_int(prime, (prime ** precision + 1) // 2, precision)
    half_b = b * a.inverse() * half
    disc = half_b * half_b - c * a.inverse()
    val_d = disc.valuation()
    if isinstance(val_d, AtLeast):
        LOG.debug("discriminant vanishes to precision %s, returning the double root", val_d.bound)
        return -half_b, FieldDescriptor(BASE)

    unit = disc.divide_by_p_power(val_d)
    if val_d % 2 == 0 and is_quad_residue(unit.reduce(), prime):
        # any representative of √D squares to D modulo p^known_prec
        root = -half_b + hensel_sqrt(disc)
        return PadicScalar(prime, precision, root.residue, known_prec), FieldDescriptor(BASE)

    if val_d % 2:
        kind = RAMIFIED
        theta_squared = prime * unit.residue
    else:
        kind = UNRAMIFIED
        theta_squared = unit.residue
    minpoly = (PadicScalar.from_int(prime, 0, precision), PadicScalar.from_int(prime, -theta_squared, precision))
    root = QuadExtScalar(-half_b, PadicScalar.from_int(prime, 1, precision).shift(val_d // 2), minpoly)
    LOG.debug("%s extension θ² = %s, λ = %s", kind, theta_squared, root)
    return root, FieldDescriptor(kind, minpoly)
