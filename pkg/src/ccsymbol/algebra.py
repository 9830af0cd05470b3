"""Exact arithmetic in a local artinian Q-algebra.

The coefficient ring everywhere in this package is

    A = Q[e_1, ..., e_g] / (e_1**k_1, ..., e_g**k_g),   k_i >= 2,

a finite-dimensional local Q-algebra whose maximal ideal I is generated by
the nilpotent generators e_i.  Elements are stored as sparse maps from a
generator multi-index (a_1, ..., a_g), a_i < k_i, to an exact Fraction.

An element is a unit iff its constant term is nonzero, and lies in I iff
the constant term is zero.  Every element of I to the power
sum(k_i - 1) + 1 vanishes, which makes all the series below terminate.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction

try:  # gmpy2 rationals are drop-in and considerably faster
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover
    _RAT = Fraction

_RAT_TYPES = (Fraction, int) if _RAT is Fraction else (Fraction, int, type(_RAT(1)))


class AlgebraError(ValueError):
    pass


class NotAUnitError(AlgebraError):
    pass


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Shape of the algebra: one nilpotency order per generator."""

    generator_orders: tuple[int, ...]

    @property
    def num_generators(self):
        return len(self.generator_orders)

    def basis_size(self):
        n = 1
        for k in self.generator_orders:
            n *= k
        return n

    def nilpotency_index(self):
        """Smallest K with I**K = 0."""
        return sum(k - 1 for k in self.generator_orders) + 1

    def zero_alpha(self):
        return (0,) * len(self.generator_orders)

    def basis(self):
        """All monomial multi-indices, lexicographically sorted."""
        alphas = [()]
        for k in self.generator_orders:
            alphas = [a + (i,) for a in alphas for i in range(k)]
        return sorted(alphas)


def algebra_new(generator_orders) -> AlgebraDescriptor:
    """Create a descriptor; an empty order list gives the base field Q."""
    orders = tuple(int(k) for k in generator_orders)
    for k in orders:
        if k <= 1:
            raise AlgebraError("generator order must be >= 2, got %d" % k)
    return AlgebraDescriptor(orders)


def _as_fraction(x):
    if isinstance(x, _RAT_TYPES):
        return _RAT(x)
    if isinstance(x, numbers.Rational):
        return _RAT(int(x.numerator), int(x.denominator))
    raise TypeError("expected int or Fraction, got %r" % (x,))


class AlgebraElement:
    """Immutable element of an AlgebraDescriptor's algebra."""

    __slots__ = ("descriptor", "coeffs")

    def __init__(self, descriptor, coeffs):
        self.descriptor = descriptor
        clean = {}
        for alpha, c in coeffs.items():
            c = _as_fraction(c)
            if c == 0:
                continue
            if len(alpha) != descriptor.num_generators:
                raise AlgebraError("multi-index %r has wrong length" % (alpha,))
            for a, k in zip(alpha, descriptor.generator_orders):
                if a < 0 or a >= k:
                    raise AlgebraError("multi-index %r out of range" % (alpha,))
            clean[tuple(alpha)] = c
        self.coeffs = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def scalar(descriptor, value):
        return AlgebraElement(descriptor, {descriptor.zero_alpha(): _as_fraction(value)})

    @staticmethod
    def zero(descriptor):
        return AlgebraElement(descriptor, {})

    @staticmethod
    def one(descriptor):
        return AlgebraElement.scalar(descriptor, 1)

    @staticmethod
    def generator(descriptor, index):
        alpha = [0] * descriptor.num_generators
        alpha[index] = 1
        return AlgebraElement(descriptor, {tuple(alpha): _RAT(1)})

    # -- predicates ---------------------------------------------------

    def constant_term(self):
        return self.coeffs.get(self.descriptor.zero_alpha(), _RAT(0))

    def is_zero(self):
        return not self.coeffs

    def is_unit(self):
        return self.constant_term() != 0

    def in_ideal(self):
        return self.constant_term() == 0

    def nilpotent_part(self):
        return self - AlgebraElement.scalar(self.descriptor, self.constant_term())

    # -- ring operations ----------------------------------------------

    def _check(self, other):
        if self.descriptor != other.descriptor:
            raise AlgebraError("descriptor mismatch")

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        return AlgebraElement.scalar(self.descriptor, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for alpha, c in other.coeffs.items():
            out[alpha] = out.get(alpha, _RAT(0)) + c
        return AlgebraElement(self.descriptor, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.descriptor, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        orders = self.descriptor.generator_orders
        out = {}
        for alpha, x in self.coeffs.items():
            for beta, y in other.coeffs.items():
                gamma = tuple(a + b for a, b in zip(alpha, beta))
                # monomials past a generator order are zero
                if any(g >= k for g, k in zip(gamma, orders)):
                    continue
                out[gamma] = out.get(gamma, _RAT(0)) + x * y
        return AlgebraElement(self.descriptor, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _RAT_TYPES):
            q = _RAT(other)
            if q == 0:
                raise ZeroDivisionError
            return self * (1 / q)
        return self * self._coerce(other).invert()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.invert() ** (-n)
        result = AlgebraElement.one(self.descriptor)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, _RAT_TYPES):
            other = AlgebraElement.scalar(self.descriptor, other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.descriptor == other.descriptor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.descriptor, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for alpha in sorted(self.coeffs):
            c = self.coeffs[alpha]
            mono = "*".join(
                "e%d" % i if a == 1 else "e%d^%d" % (i, a)
                for i, a in enumerate(alpha)
                if a
            )
            parts.append(str(c) if not mono else "%s*%s" % (c, mono))
        return " + ".join(parts)

    # -- unit group / exponentials --------------------------------------

    def invert(self):
        """Exact inverse of a unit via the terminating geometric series."""
        c = self.constant_term()
        if c == 0:
            raise NotAUnitError("element with zero constant term has no inverse")
        n = self.nilpotent_part() * (1 / c)
        # 1/(c(1+n)) = (1/c) * sum (-n)^k, finite by nilpotency
        acc = AlgebraElement.one(self.descriptor)
        term = AlgebraElement.one(self.descriptor)
        for _ in range(self.descriptor.nilpotency_index()):
            term = term * (-n)
            if term.is_zero():
                break
            acc = acc + term
        return acc * (1 / c)

    def log_principal(self):
        """log of a principal unit 1 + n, n in I: sum (-1)^(k+1) n^k / k."""
        if self.constant_term() != 1:
            raise AlgebraError("log_principal needs constant term 1")
        n = self.nilpotent_part()
        acc = AlgebraElement.zero(self.descriptor)
        term = AlgebraElement.one(self.descriptor)
        k = 0
        while True:
            k += 1
            term = term * n
            if term.is_zero():
                break
            acc = acc + term * _RAT((-1) ** (k + 1), k)
        return acc

    def exp_nil(self):
        """exp of a nilpotent element: sum n^k / k!, a finite sum."""
        if self.constant_term() != 0:
            raise AlgebraError("exp_nil needs constant term 0")
        acc = AlgebraElement.one(self.descriptor)
        term = AlgebraElement.one(self.descriptor)
        k = 0
        while True:
            k += 1
            term = term * self
            if term.is_zero():
                break
            acc = acc + term * _RAT(1, math.factorial(k))
        return acc


# module-level aliases matching the operation names used elsewhere

def invert(u: AlgebraElement) -> AlgebraElement:
    return u.invert()


def log_principal(u: AlgebraElement) -> AlgebraElement:
    return u.log_principal()


def exp_nil(n: AlgebraElement) -> AlgebraElement:
    return n.exp_nil()


# -- JSON encoding ------------------------------------------------------

def descriptor_to_json(d: AlgebraDescriptor):
    return {"orders": list(d.generator_orders)}


def descriptor_from_json(obj) -> AlgebraDescriptor:
    return algebra_new(obj["orders"])


def element_to_json(e: AlgebraElement):
    return [
        {"alpha": list(alpha), "num": str(c.numerator), "den": str(c.denominator)}
        for alpha, c in sorted(e.coeffs.items())
    ]


def element_from_json(descriptor, obj) -> AlgebraElement:
    coeffs = {}
    for item in obj:
        alpha = tuple(int(a) for a in item["alpha"])
        coeffs[alpha] = _RAT(int(item["num"]), int(item["den"]))
    return AlgebraElement(descriptor, coeffs)
