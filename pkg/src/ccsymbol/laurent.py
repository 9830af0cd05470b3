"""Truncated Laurent series over a local artinian Q-algebra.

A 1D series is a sparse map exponent -> AlgebraElement together with a
truncation order ``trunc``: all equalities are claims modulo t^(trunc+1).
Support is always bounded below and stored exactly; only the positive
direction is truncated.

A 2D series over A((t1))((t2)) nests 1D series (inner variable t1) under
outer exponents of t2, with a rectangular truncation (trunc1, trunc2).

Truncation bookkeeping for products.  Multiplying by a factor whose lowest
exponent is d > 0 shifts knowledge up by d; multiplying by a factor with
negative support in principle costs precision at the top.  When every
negative-exponent coefficient of a factor lies in the ideal I, the
corruption at trunc - s sits in I^(1 + floor(s / depth)) and dies after
nilpotency_index * depth indices; the decomposition entry points pad their
working truncation accordingly instead of eroding ``trunc`` here.  Only a
negative-exponent *unit* coefficient (a genuine monomial shift) lowers the
recorded truncation.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraDescriptor, AlgebraElement, AlgebraError, _RAT, _RAT_TYPES


class NotInGammaError(AlgebraError):
    """The series has no unit coefficient, so no valuation exists."""


class TruncationError(AlgebraError):
    pass


# truncation assigned to series that are exact (finitely many terms known
# in full); min() against any honest finite truncation does the right thing
EXACT_TRUNC = 1 << 30


def _eff_shift(series):
    """Lowest exponent that genuinely limits product precision.

    Pure-positive support shifts precision up; negative exponents with
    nilpotent coefficients are treated as harmless (see module docstring);
    a negative exponent with a unit coefficient costs its full depth.
    """
    if not series.coeffs:
        return 0
    lo = min(series.coeffs)
    if lo > 0:
        return lo
    unit_lows = [k for k, c in series.coeffs.items() if k < 0 and c.is_unit()]
    return min(unit_lows) if unit_lows else 0


class LaurentSeries1D:
    __slots__ = ("algebra", "coeffs", "trunc")

    def __init__(self, algebra, coeffs, trunc):
        self.algebra = algebra
        self.trunc = int(trunc)
        clean = {}
        for k, v in coeffs.items():
            if k > self.trunc or v.is_zero():
                continue
            clean[int(k)] = v
        self.coeffs = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(algebra, trunc):
        return LaurentSeries1D(algebra, {}, trunc)

    @staticmethod
    def one(algebra, trunc):
        return LaurentSeries1D(algebra, {0: AlgebraElement.one(algebra)}, trunc)

    @staticmethod
    def monomial(algebra, exponent, coeff, trunc):
        return LaurentSeries1D(algebra, {exponent: coeff}, trunc)

    @staticmethod
    def from_scalar_coeffs(algebra, coeffs, trunc):
        """Build from a map exponent -> int/Fraction."""
        return LaurentSeries1D(
            algebra,
            {k: AlgebraElement.scalar(algebra, v) for k, v in coeffs.items()},
            trunc,
        )

    # -- basic access ----------------------------------------------------

    def coeff(self, k):
        return self.coeffs.get(k, AlgebraElement.zero(self.algebra))

    def min_support(self):
        return min(self.coeffs) if self.coeffs else None

    def is_zero(self):
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries1D):
            return NotImplemented
        t = min(self.trunc, other.trunc)
        keys = set(self.coeffs) | set(other.coeffs)
        return self.algebra == other.algebra and all(
            self.coeff(k) == other.coeff(k) for k in keys if k <= t
        )

    def __hash__(self):
        raise TypeError("unhashable")

    def __repr__(self):
        if not self.coeffs:
            return "O(t^%d)" % (self.trunc + 1)
        parts = ["(%r)*t^%d" % (self.coeffs[k], k) for k in sorted(self.coeffs)]
        return " + ".join(parts) + " + O(t^%d)" % (self.trunc + 1)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.algebra != other.algebra:
            raise AlgebraError("algebra mismatch")

    def __add__(self, other):
        self._check(other)
        trunc = min(self.trunc, other.trunc)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, AlgebraElement.zero(self.algebra)) + v
        return LaurentSeries1D(self.algebra, out, trunc)

    def __neg__(self):
        return LaurentSeries1D(self.algebra, {k: -v for k, v in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, _RAT_TYPES + (AlgebraElement,)):
            if isinstance(other, AlgebraElement):
                s = other
            else:
                s = AlgebraElement.scalar(self.algebra, other)
            return LaurentSeries1D(
                self.algebra, {k: v * s for k, v in self.coeffs.items()}, self.trunc
            )
        self._check(other)
        trunc = min(self.trunc + _eff_shift(other), other.trunc + _eff_shift(self))
        out = {}
        zero = AlgebraElement.zero(self.algebra)
        for i, x in self.coeffs.items():
            for j, y in other.coeffs.items():
                k = i + j
                if k > trunc:
                    continue
                p = x * y
                if p.is_zero():
                    continue
                out[k] = out.get(k, zero) + p
        return LaurentSeries1D(self.algebra, out, trunc)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.invert() ** (-n)
        result = LaurentSeries1D.one(self.algebra, self.trunc)
        base = self
        first = True
        while n:
            if n & 1:
                result = base if first else result * base
                first = False
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, n):
        """Multiply by t^n exactly (adjusts truncation honestly)."""
        return LaurentSeries1D(
            self.algebra, {k + n: v for k, v in self.coeffs.items()}, self.trunc + n
        )

    def truncate(self, trunc):
        if trunc > self.trunc:
            raise TruncationError("cannot extend truncation %d to %d" % (self.trunc, trunc))
        return LaurentSeries1D(self.algebra, self.coeffs, trunc)

    def positive_part(self):
        """Coefficients at exponents >= 0."""
        return LaurentSeries1D(
            self.algebra, {k: v for k, v in self.coeffs.items() if k >= 0}, self.trunc
        )

    def negative_part(self):
        """Coefficients at exponents < 0 (stored exactly, trunc kept)."""
        return LaurentSeries1D(
            self.algebra, {k: v for k, v in self.coeffs.items() if k < 0}, self.trunc
        )

    # -- Gamma structure -----------------------------------------------------

    def gamma_valuation(self):
        """Index of the first unit coefficient, or None if not a member.

        All lower coefficients automatically lie in I because the algebra is
        local, and negative support is finite by construction.
        """
        units = [k for k, c in self.coeffs.items() if c.is_unit()]
        return min(units) if units else None

    def invert(self):
        """Inverse in Gamma, exact modulo the truncation."""
        w = self.gamma_valuation()
        if w is None:
            raise NotInGammaError("series has no unit coefficient")
        aw = self.coeff(w)
        u = self.shift(-w) * aw.invert()  # 1 + s with s_neg nilpotent
        target = u.trunc
        s = u - LaurentSeries1D.one(self.algebra, target)
        K = self.algebra.nilpotency_index()
        lo = s.min_support()
        depth = max(0, -(lo if lo is not None else 0))
        bound = max(target, 0) + (K + 1) * (depth + 1) + 4
        acc = LaurentSeries1D.one(self.algebra, target)
        term = LaurentSeries1D.one(self.algebra, target)
        for _ in range(bound):
            # clamp back to the target window so purely-positive tails die
            term = LaurentSeries1D(self.algebra, (term * (-s)).coeffs, target)
            if term.is_zero():
                break
            acc = acc + term
        else:
            raise TruncationError("geometric inversion failed to terminate")
        return acc.shift(-w) * aw.invert()


def series_mul(f, g):
    return f * g


def series_invert(f):
    return f.invert()


def gamma_valuation(f: LaurentSeries1D):
    return f.gamma_valuation()


# -- two variables ---------------------------------------------------------


class LaurentSeries2D:
    """Outer variable t2 over inner 1D series in t1.

    Each outer level keeps its own inner truncation: negative inner
    exponents with unit coefficients only ever occur on factors that carry
    positive outer degree, so inner precision genuinely decays level by
    level, not uniformly.  ``trunc1`` records the nominal inner truncation
    used for levels that are absent (exactly zero within that window).
    """

    __slots__ = ("algebra", "coeffs", "trunc1", "trunc2")

    def __init__(self, algebra, coeffs, trunc1, trunc2):
        self.algebra = algebra
        self.trunc1 = int(trunc1)
        self.trunc2 = int(trunc2)
        clean = {}
        for i, s in coeffs.items():
            if i > self.trunc2 or s.is_zero():
                continue
            clean[int(i)] = s
        self.coeffs = clean

    @staticmethod
    def zero(algebra, trunc1, trunc2):
        return LaurentSeries2D(algebra, {}, trunc1, trunc2)

    @staticmethod
    def one(algebra, trunc1, trunc2):
        return LaurentSeries2D(
            algebra, {0: LaurentSeries1D.one(algebra, trunc1)}, trunc1, trunc2
        )

    @staticmethod
    def monomial(algebra, exp1, exp2, coeff, trunc1, trunc2):
        """coeff * t1^exp1 * t2^exp2."""
        inner = LaurentSeries1D.monomial(algebra, exp1, coeff, trunc1)
        return LaurentSeries2D(algebra, {exp2: inner}, trunc1, trunc2)

    def level(self, i):
        return self.coeffs.get(i, LaurentSeries1D.zero(self.algebra, self.trunc1))

    def is_zero(self):
        return not self.coeffs

    def min_support2(self):
        return min(self.coeffs) if self.coeffs else None

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries2D):
            return NotImplemented
        t2 = min(self.trunc2, other.trunc2)
        keys = set(self.coeffs) | set(other.coeffs)
        return self.algebra == other.algebra and all(
            self.level(i) == other.level(i) for i in keys if i <= t2
        )

    def __hash__(self):
        raise TypeError("unhashable")

    def __repr__(self):
        parts = ["(%r)*t2^%d" % (self.coeffs[i], i) for i in sorted(self.coeffs)]
        body = " + ".join(parts) if parts else "0"
        return body + " + O(t1^%d, t2^%d)" % (self.trunc1 + 1, self.trunc2 + 1)

    def _check(self, other):
        if self.algebra != other.algebra:
            raise AlgebraError("algebra mismatch")

    def __add__(self, other):
        self._check(other)
        trunc1 = min(self.trunc1, other.trunc1)
        trunc2 = min(self.trunc2, other.trunc2)
        out = dict(self.coeffs)
        for i, s in other.coeffs.items():
            if i in out:
                out[i] = out[i] + s
            else:
                out[i] = s
        return LaurentSeries2D(self.algebra, out, trunc1, trunc2)

    def __neg__(self):
        return LaurentSeries2D(
            self.algebra, {i: -s for i, s in self.coeffs.items()}, self.trunc1, self.trunc2
        )

    def __sub__(self, other):
        return self + (-other)

    def _eff_shift2(self):
        if not self.coeffs:
            return 0
        lo = min(self.coeffs)
        if lo > 0:
            return lo
        unit_lows = [
            i for i, s in self.coeffs.items() if i < 0 and s.gamma_valuation() is not None
        ]
        return min(unit_lows) if unit_lows else 0

    def __mul__(self, other):
        if isinstance(other, _RAT_TYPES + (AlgebraElement,)):
            return LaurentSeries2D(
                self.algebra,
                {i: s * other for i, s in self.coeffs.items()},
                self.trunc1,
                self.trunc2,
            )
        if isinstance(other, LaurentSeries1D):
            # multiply every level by a fixed inner series
            out = {i: s * other for i, s in self.coeffs.items()}
            t1 = min(
                [self.trunc1 + _eff_shift(other)] + [s.trunc for s in out.values()]
            )
            return LaurentSeries2D(self.algebra, out, t1, self.trunc2)
        self._check(other)
        trunc2 = min(self.trunc2 + other._eff_shift2(), other.trunc2 + self._eff_shift2())
        out = {}
        for i, s in self.coeffs.items():
            for j, t in other.coeffs.items():
                k = i + j
                if k > trunc2:
                    continue
                p = s * t
                if p.is_zero():
                    continue
                out[k] = out[k] + p if k in out else p
        t1 = min(
            [min(self.trunc1, other.trunc1)] + [s.trunc for s in out.values()]
        )
        return LaurentSeries2D(self.algebra, out, t1, trunc2)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.invert() ** (-n)
        result = LaurentSeries2D.one(self.algebra, self.trunc1, self.trunc2)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift2(self, n):
        """Multiply by t2^n exactly."""
        return LaurentSeries2D(
            self.algebra,
            {i + n: s for i, s in self.coeffs.items()},
            self.trunc1,
            self.trunc2 + n,
        )

    def shift1(self, n):
        """Multiply by t1^n exactly."""
        return LaurentSeries2D(
            self.algebra,
            {i: s.shift(n) for i, s in self.coeffs.items()},
            self.trunc1 + n,
            self.trunc2,
        )

    def truncate_to(self, trunc1, trunc2):
        """Restrict claims to the (trunc1, trunc2) window."""
        out = {}
        for i, s in self.coeffs.items():
            if i > trunc2:
                continue
            out[i] = s if s.trunc <= trunc1 else s.truncate(trunc1)
        return LaurentSeries2D(self.algebra, out, min(self.trunc1, trunc1), trunc2)

    def positive_part2(self):
        return LaurentSeries2D(
            self.algebra,
            {i: s for i, s in self.coeffs.items() if i >= 0},
            self.trunc1,
            self.trunc2,
        )

    def negative_part2(self):
        return LaurentSeries2D(
            self.algebra,
            {i: s for i, s in self.coeffs.items() if i < 0},
            self.trunc1,
            self.trunc2,
        )

    def gamma_valuation_2d(self):
        """(omega1, omega2) or None.

        omega2 is the first outer level whose coefficient is invertible in
        A((t1)); omega1 the inner valuation of that level.  Lower outer
        levels automatically lie in I((t1)).
        """
        unit_levels = [i for i, s in self.coeffs.items() if s.gamma_valuation() is not None]
        if not unit_levels:
            return None
        w2 = min(unit_levels)
        w1 = self.coeffs[w2].gamma_valuation()
        return (w1, w2)

    def invert(self):
        val = self.gamma_valuation_2d()
        if val is None:
            raise NotInGammaError("2D series has no invertible level")
        _, w2 = val
        u0 = self.level(w2)
        u0_inv = u0.invert()
        shifted = self.shift2(-w2)
        u = shifted * u0_inv  # level 0 becomes 1
        t1, t2 = u.trunc1, u.trunc2
        s = u - LaurentSeries2D.one(self.algebra, t1, t2)
        K = self.algebra.nilpotency_index()
        lo = s.min_support2()
        depth = max(0, -(lo if lo is not None else 0))
        bound = max(t2, 0) + (K + 1) * (depth + 1) + 4
        acc = LaurentSeries2D.one(self.algebra, t1, t2)
        term = LaurentSeries2D.one(self.algebra, t1, t2)
        for _ in range(bound):
            # clamp the outer window so purely-positive outer tails die;
            # inner tails die inside the per-level 1D arithmetic
            p = term * (-s)
            term = LaurentSeries2D(
                self.algebra,
                {i: sl for i, sl in p.coeffs.items() if i <= t2},
                p.trunc1,
                t2,
            )
            if term.is_zero():
                break
            acc = acc + term
        else:
            raise TruncationError("2D geometric inversion failed to terminate")
        return (acc * u0_inv).shift2(-w2)


def series_mul_2d(f, g):
    return f * g


def series_invert_2d(f):
    return f.invert()


def gamma_valuation_2d(f: LaurentSeries2D):
    return f.gamma_valuation_2d()


# -- local expansions of factored rational functions ------------------------

INFINITY = "inf"


def local_expansion(algebra, zeros, leading, at, trunc):
    """Laurent expansion of  leading * prod (t - alpha_i)^(m_i)  at a point.

    zeros: list of (alpha, multiplicity) with alpha an AlgebraElement whose
    constant part identifies the point on the projective line; multiplicities
    may be negative (poles).  ``at`` is a Fraction/int (finite point, local
    uniformizer u = t - at) or INFINITY (uniformizer u = 1/t).

    Two zeros sharing a constant part are rejected: the expansion logic
    assumes each finite point carries at most one vanishing factor.
    """
    consts = [alpha.constant_term() for alpha, _ in zeros]
    if len(set(consts)) != len(consts):
        raise AlgebraError("two zeros share a constant part")
    if not leading.is_unit():
        raise AlgebraError("leading coefficient must be a unit")

    out = LaurentSeries1D.monomial(algebra, 0, leading, trunc)
    if at == INFINITY:
        total = sum(m for _, m in zeros)
        for alpha, m in zeros:
            # t - alpha = u^(-1) (1 - alpha u)
            factor = LaurentSeries1D(
                algebra,
                {0: AlgebraElement.one(algebra), 1: -alpha},
                trunc,
            )
            out = out * factor ** m
        return out.shift(-total)

    p = _RAT(at)
    for alpha, m in zeros:
        beta = alpha - AlgebraElement.scalar(algebra, p)
        # t - alpha = u - beta in the local coordinate u = t - p
        factor = LaurentSeries1D(
            algebra,
            {0: -beta, 1: AlgebraElement.one(algebra)},
            trunc,
        )
        out = out * factor ** m
    return out


# -- JSON ----------------------------------------------------------------

from .algebra import element_from_json, element_to_json  # noqa: E402


def series1d_to_json(f: LaurentSeries1D):
    return {
        "trunc": f.trunc,
        "coeffs": [
            {"exp": k, "value": element_to_json(f.coeffs[k])} for k in sorted(f.coeffs)
        ],
    }


def series1d_from_json(algebra, obj) -> LaurentSeries1D:
    coeffs = {
        int(item["exp"]): element_from_json(algebra, item["value"])
        for item in obj["coeffs"]
    }
    return LaurentSeries1D(algebra, coeffs, int(obj["trunc"]))


def series2d_to_json(f: LaurentSeries2D):
    return {
        "trunc": f.trunc2,
        "coeffs": [
            {"exp": i, "value": series1d_to_json(f.coeffs[i])} for i in sorted(f.coeffs)
        ],
    }


def series2d_from_json(algebra, obj) -> LaurentSeries2D:
    levels = {
        int(item["exp"]): series1d_from_json(algebra, item["value"])
        for item in obj["coeffs"]
    }
    trunc1 = min([s.trunc for s in levels.values()], default=0)
    return LaurentSeries2D(algebra, levels, trunc1, int(obj["trunc"]))
