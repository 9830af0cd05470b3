"""Witt-parameter factorizations of Laurent series in one and two variables.

Every invertible series factors uniquely as a leading unit times a monomial
times a product of elementary factors (1 - a_i t^i) (and (1 - a_{ij} t1^j
t2^i) in two variables).  The algorithms here are the constructive peeling
procedures: split off the polynomial-below-zero part, then remove one
elementary factor per exponent, ascending for positive exponents and
descending (-1, -2, ...) for negative ones.  Negative-side parameters are
nilpotent, which makes every loop terminate; all loops carry explicit
bounds and fail loudly rather than spin.

Working truncations: peeling against factors with negative exponents can
corrupt the top coefficients of a truncated series (see laurent module
docstring), so callers should build inputs with the truncation returned by
``recommended_trunc_1d`` / ``recommended_truncs_2d`` when they need the
full nominal window to be exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgebraElement, AlgebraError
from .laurent import (
    EXACT_TRUNC,
    LaurentSeries1D,
    LaurentSeries2D,
    NotInGammaError,
    TruncationError,
)


class PeelError(AlgebraError):
    """A peeling loop exceeded its termination bound."""


# ---------------------------------------------------------------------------
# 1D
# ---------------------------------------------------------------------------


@dataclass
class WittDecomposition1D:
    """f = leading * t^omega * prod_i (1 - a_i t^i) * prod_i (1 - a_{-i} t^-i).

    plus_params maps i >= 1 to a_i; minus_params maps i >= 1 to a_{-i},
    which always lies in the ideal I and has finite support.
    """

    algebra: object
    leading: AlgebraElement
    omega: int
    plus_params: dict = field(default_factory=dict)
    minus_params: dict = field(default_factory=dict)

    def param(self, i):
        if i > 0:
            return self.plus_params.get(i, AlgebraElement.zero(self.algebra))
        if i < 0:
            return self.minus_params.get(-i, AlgebraElement.zero(self.algebra))
        raise IndexError("no parameter at index 0")


def _geom_factor_inverse_1d(algebra, a, i, trunc):
    """(1 - a t^i)^(-1) as an explicit geometric series, exact."""
    coeffs = {0: AlgebraElement.one(algebra)}
    power = AlgebraElement.one(algebra)
    k = 0
    K = algebra.nilpotency_index()
    while True:
        k += 1
        power = power * a
        if power.is_zero():
            break
        if i > 0 and k * i > trunc:
            break
        if i < 0 and k > K:  # nilpotent a, cannot happen
            raise PeelError("non-terminating inverse of a negative-exponent factor")
        coeffs[k * i] = power
    return LaurentSeries1D(algebra, coeffs, trunc)


def split_plus_minus(f: LaurentSeries1D):
    """Unique f = g * h with g in A[[t]]^x and h in 1 + t^-1 I[t^-1].

    Requires omega(f) = 0.  After normalizing by the positive part g0, the
    whole error f/g0 - 1 has coefficients in I; stripping its negative part
    and dividing raises the I-grade of the remaining negative error by one
    per pass, so the loop is bounded by the nilpotency index.  Every pass
    multiplies only by a small nilpotent correction.
    """
    algebra = f.algebra
    if f.gamma_valuation() != 0:
        raise NotInGammaError("split requires valuation 0")
    one = LaurentSeries1D.one(algebra, f.trunc)
    g0 = f.positive_part()
    h = one
    r = f * g0.invert()
    bound = algebra.nilpotency_index() + 2
    for _ in range(bound):
        delta_minus = (r - one).negative_part()
        if delta_minus.is_zero():
            break
        v = one + delta_minus
        h = h * v
        r = r * v.invert()
    else:
        raise PeelError("plus/minus split did not converge")
    return g0 * r, h


def witt_plus(g: LaurentSeries1D, T: int):
    """Peel g in A[[t]]^x into (g(0), {a_i}) with g = g(0) prod (1 - a_i t^i).

    At step i the t^i coefficient of the remainder is -a_i; division by
    (1 - a_i t^i) clears it without touching lower exponents.
    """
    algebra = g.algebra
    g0 = g.coeff(0)
    if not g0.is_unit():
        raise NotInGammaError("constant term must be a unit")
    if g.min_support() is not None and g.min_support() < 0:
        raise AlgebraError("witt_plus input has negative exponents")
    r = g * g0.invert()
    params = {}
    top = min(T, g.trunc)
    for i in range(1, top + 1):
        c = r.coeff(i)
        if c.is_zero():
            continue
        a = -c
        params[i] = a
        r = r * _geom_factor_inverse_1d(algebra, a, i, r.trunc)
    return g0, params


def _peel_minus_1d(h: LaurentSeries1D):
    """Peel h in 1 + t^-1 I[t^-1] into {i >= 1: a_{-i}}, exact."""
    algebra = h.algebra
    K = algebra.nilpotency_index()
    lo = h.min_support()
    depth0 = max(0, -(lo if lo is not None else 0))
    params = {}
    one = LaurentSeries1D.one(algebra, h.trunc)
    bound = depth0 * K + K + 4
    i = 0
    while not (h == one):
        i += 1
        if i > bound:
            raise PeelError("minus peeling exceeded its nilpotency bound")
        c = h.coeff(-i)
        if c.is_zero():
            continue
        if not c.in_ideal():
            raise AlgebraError("negative-side parameter with nonzero constant term")
        a = -c
        params[i] = a
        h = h * _geom_factor_inverse_1d(algebra, a, -i, h.trunc)
    return params


def witt_decompose_1d(f: LaurentSeries1D, T: int) -> WittDecomposition1D:
    w = f.gamma_valuation()
    if w is None:
        raise NotInGammaError("series is not invertible")
    if f.trunc - w < T:
        raise TruncationError(
            "need trunc >= omega + T (%d < %d + %d)" % (f.trunc, w, T)
        )
    shifted = f.shift(-w)
    g, h = split_plus_minus(shifted)
    leading, plus = witt_plus(g, T)
    minus = _peel_minus_1d(h)
    return WittDecomposition1D(f.algebra, leading, w, plus, minus)


def reconstruct_1d(d: WittDecomposition1D, T: int) -> LaurentSeries1D:
    """Multiply the stored factors back out; result truncated at omega + T."""
    algebra = d.algebra
    out = LaurentSeries1D.monomial(algebra, 0, d.leading, T)
    one_elt = AlgebraElement.one(algebra)
    for i in sorted(d.plus_params):
        a = d.plus_params[i]
        out = out * LaurentSeries1D(algebra, {0: one_elt, i: -a}, T)
    for i in sorted(d.minus_params):
        a = d.minus_params[i]
        out = out * LaurentSeries1D(algebra, {0: one_elt, -i: -a}, out.trunc)
    return out.shift(d.omega)


def recommended_trunc_1d(algebra, T, minus_depth, omega=0):
    """Input truncation that keeps indices <= omega + T exact through
    decomposition despite negative-side peeling."""
    K = algebra.nilpotency_index()
    return omega + T + K * max(1, minus_depth) + 2


# ---------------------------------------------------------------------------
# 2D
# ---------------------------------------------------------------------------


@dataclass
class WittDecomposition2D:
    """f = leading * t1^omega1 * t2^omega2 * prod (1 - a_{ij} t1^j t2^i).

    params maps (i, j) -> a_{ij}; all parameters with i < 0 lie in I.
    """

    algebra: object
    leading: AlgebraElement
    omega1: int
    omega2: int
    params: dict = field(default_factory=dict)

    def rows(self):
        out = {}
        for (i, j), a in self.params.items():
            out.setdefault(i, {})[j] = a
        return out


def _factor_2d(algebra, a, j, i, trunc1, trunc2):
    """(1 - a t1^j t2^i) as a 2D series; the two terms are exact."""
    one = LaurentSeries1D.one(algebra, EXACT_TRUNC)
    inner = LaurentSeries1D.monomial(algebra, j, -a, EXACT_TRUNC)
    if i == 0:
        return LaurentSeries2D(algebra, {0: one + inner}, trunc1, trunc2)
    return LaurentSeries2D(algebra, {0: one, i: inner}, trunc1, trunc2)


def _geom_factor_inverse_2d(algebra, a, j, i, trunc1, trunc2):
    """(1 - a t1^j t2^i)^(-1), i != 0, as an explicit geometric series.

    Every level is a single exact monomial, so the levels carry EXACT_TRUNC
    and precision bookkeeping is driven entirely by the other factor.
    """
    K = algebra.nilpotency_index()
    levels = {0: LaurentSeries1D.one(algebra, EXACT_TRUNC)}
    power = AlgebraElement.one(algebra)
    k = 0
    while True:
        k += 1
        power = power * a
        if power.is_zero():
            break
        if i > 0 and k * i > trunc2:
            break
        if i < 0 and k > K:
            raise PeelError("non-terminating inverse of a negative-level factor")
        levels[k * i] = LaurentSeries1D.monomial(algebra, k * j, power, EXACT_TRUNC)
    return LaurentSeries2D(algebra, levels, trunc1, trunc2)


def split_plus_minus_2d(f: LaurentSeries2D):
    """Outer-variable analogue of split_plus_minus over the ring A((t1)).

    Same linear iteration as the 1D split: one inversion of the positive
    part, then small nilpotent corrections whose I-grade rises every pass.
    Intermediates are capped to the input's window to keep inner supports
    from growing past what the caller asked for.
    """
    algebra = f.algebra
    val = f.gamma_valuation_2d()
    if val is None or val[1] != 0:
        raise NotInGammaError("2D split requires outer valuation 0")
    W1, W2 = f.trunc1, f.trunc2
    one = LaurentSeries2D.one(algebra, W1, W2)
    g0 = f.positive_part2()
    h = one
    r = (f * g0.invert()).truncate_to(W1, W2)
    bound = algebra.nilpotency_index() + 2
    for _ in range(bound):
        delta_minus = (r - one).negative_part2()
        if delta_minus.is_zero():
            break
        v = one + delta_minus
        h = (h * v).truncate_to(W1, W2)
        r = (r * v.invert()).truncate_to(W1, W2)
    else:
        raise PeelError("2D plus/minus split did not converge")
    return (g0 * r).truncate_to(W1, W2), h


def witt_plus_2d(f: LaurentSeries2D, T1: int, T2: int):
    """Level-by-level peeling of f in 1 + t2 A((t1))[[t2]].

    Returns {(i, j): a_{ij}} for i >= 1.  The t2^i coefficient of the
    remainder is the negated parameter row; clearing it cannot disturb
    lower levels because every correction carries t2^(2i) or more.
    """
    algebra = f.algebra
    if not (f.level(0) == LaurentSeries1D.one(algebra, f.trunc1)):
        raise AlgebraError("witt_plus_2d input must have constant level 1")
    if f.min_support2() is not None and f.min_support2() < 0:
        raise AlgebraError("witt_plus_2d input has negative levels")
    W1, W2 = f.trunc1, f.trunc2
    params = {}
    r = f
    top = min(T2, W2)
    for i in range(1, top + 1):
        row = r.level(i)
        if row.is_zero():
            continue
        if row.trunc < T1:
            raise TruncationError(
                "row %d known only to t1^%d < %d; enlarge the working truncation"
                % (i, row.trunc, T1)
            )
        # divide out the whole level in one pass: multiply the small
        # per-factor inverses together first, then hit the remainder once
        level_inv = None
        for j in sorted(row.coeffs):
            a = -row.coeffs[j]
            params[(i, j)] = a
            inv = _geom_factor_inverse_2d(algebra, a, j, i, W1, W2)
            level_inv = inv if level_inv is None else level_inv * inv
        r = (r * level_inv).truncate_to(W1, W2)
        if not r.level(i).is_zero():
            raise PeelError("level %d failed to clear" % i)
    return params


def witt_minus_2d(f: LaurentSeries2D):
    """Peeling of f in 1 - t2^-1 I((t1))[t2^-1], descending levels.

    Each division extends the negative tail but raises the ideal power of
    everything below, so nilpotency terminates the loop; the bound below is
    the initial tail length times the nilpotency index.
    """
    algebra = f.algebra
    K = algebra.nilpotency_index()
    W1, W2 = f.trunc1, f.trunc2
    one = LaurentSeries2D.one(algebra, W1, W2)
    lo = f.min_support2()
    depth0 = max(0, -(lo if lo is not None else 0))
    bound = depth0 * K + K + 4
    params = {}
    r = f
    i = 0
    while not (r == one):
        i += 1
        if i > bound:
            raise PeelError("2D minus peeling exceeded its nilpotency bound")
        row = r.level(-i)
        if row.is_zero():
            continue
        level_inv = None
        for j in sorted(row.coeffs):
            c = row.coeffs[j]
            if not c.in_ideal():
                raise AlgebraError("negative-level parameter with nonzero constant term")
            a = -c
            params[(-i, j)] = a
            inv = _geom_factor_inverse_2d(algebra, a, j, -i, W1, W2)
            level_inv = inv if level_inv is None else level_inv * inv
        r = (r * level_inv).truncate_to(W1, r.trunc2)
        if not r.level(-i).is_zero():
            raise PeelError("level %d failed to clear" % (-i))
    return params


def witt_decompose_2d(f: LaurentSeries2D, T1: int, T2: int) -> WittDecomposition2D:
    """Full 2D decomposition.

    Strips t2^omega2, splits plus/minus at the outer level, reads the
    leading unit / t1 direction off the constant level's 1D decomposition
    (the i = 0 row), and peels both outer directions.
    """
    algebra = f.algebra
    val = f.gamma_valuation_2d()
    if val is None:
        raise NotInGammaError("2D series is not invertible")
    w1, w2 = val
    if f.trunc2 - w2 < T2:
        raise TruncationError("need trunc2 >= omega2 + T2")
    shifted = f.shift2(-w2)
    # cap the working window: enough inner room for the staircase decay of
    # unit coefficients at negative inner exponents, enough outer room for
    # the nilpotent-graded corruption of the minus tail
    K = algebra.nilpotency_index()
    inner_lows = [s.min_support() for s in shifted.coeffs.values() if not s.is_zero()]
    n_neg = max([0] + [-lo for lo in inner_lows if lo is not None and lo < 0])
    lo2 = shifted.min_support2()
    m0 = max(0, -(lo2 if lo2 is not None else 0))
    W2 = min(shifted.trunc2, T2 + K * max(1, m0) + 2)
    W1 = min(
        shifted.trunc1,
        abs(w1) + T1 + max(1, n_neg) * (W2 + 2) + K * max(1, n_neg) + 2,
    )
    shifted = shifted.truncate_to(W1, W2)
    g, h = split_plus_minus_2d(shifted)
    v = g.level(0)
    g1 = g * v.invert()
    plus = witt_plus_2d(g1, T1, T2)
    minus = witt_minus_2d(h)
    d0 = witt_decompose_1d(v, min(T1, v.trunc - w1))
    if d0.omega != w1:
        raise AlgebraError("inner valuation mismatch")
    params = dict(plus)
    params.update(minus)
    for j, a in d0.plus_params.items():
        params[(0, j)] = a
    for j, a in d0.minus_params.items():
        params[(0, -j)] = a
    return WittDecomposition2D(algebra, d0.leading, w1, w2, params)


def reconstruct_2d(d: WittDecomposition2D, T1: int, T2: int) -> LaurentSeries2D:
    """Multiply the stored factors back out.

    The factors are exact polynomials, so inner precision stays exact; the
    outer variable is truncated at T2 before the monomial shift (T1 is
    accepted for signature symmetry and as a floor on the nominal window).
    """
    algebra = d.algebra
    out = LaurentSeries2D.monomial(algebra, 0, 0, d.leading, EXACT_TRUNC, T2)
    for (i, j) in sorted(d.params):
        a = d.params[(i, j)]
        out = out * _factor_2d(algebra, a, j, i, EXACT_TRUNC, T2)
    if out.trunc1 < T1:
        raise TruncationError("reconstruction lost the nominal inner window")
    return out.shift1(d.omega1).shift2(d.omega2)


def recommended_truncs_2d(algebra, T1, T2, params_hint=None, omega1=0, omega2=0):
    """Working truncations that keep the nominal (T1, T2) window exact.

    params_hint, when given, is an iterable of (i, j) exponent pairs of the
    elementary factors expected in the data; unit coefficients at j < 0 on
    levels i > 0 are the expensive direction (each peeling division can cost
    |j| inner indices per outer level crossed).
    """
    K = algebra.nilpotency_index()
    max_neg_j = 1
    max_depth2 = 1
    if params_hint:
        for (i, j) in params_hint:
            if j < 0:
                max_neg_j = max(max_neg_j, -j)
            if i < 0:
                max_depth2 = max(max_depth2, -i)
    pad2 = K * max_depth2 + 2
    pad1 = max_neg_j * (T2 + pad2 + 2) + K * max_neg_j + 2
    return (abs(omega1) + T1 + pad1, abs(omega2) + T2 + pad2)


# -- JSON ----------------------------------------------------------------

from .algebra import element_from_json, element_to_json  # noqa: E402


def decomposition1d_to_json(d: WittDecomposition1D):
    params = []
    for i in sorted(d.plus_params):
        params.append({"i": i, "value": element_to_json(d.plus_params[i])})
    for i in sorted(d.minus_params):
        params.append({"i": -i, "value": element_to_json(d.minus_params[i])})
    return {
        "leading": element_to_json(d.leading),
        "omega": d.omega,
        "params": params,
    }


def decomposition1d_from_json(algebra, obj) -> WittDecomposition1D:
    plus, minus = {}, {}
    for item in obj["params"]:
        i = int(item["i"])
        value = element_from_json(algebra, item["value"])
        if i > 0:
            plus[i] = value
        else:
            minus[-i] = value
    return WittDecomposition1D(
        algebra, element_from_json(algebra, obj["leading"]), int(obj["omega"]), plus, minus
    )


def decomposition2d_to_json(d: WittDecomposition2D):
    return {
        "leading": element_to_json(d.leading),
        "omega1": d.omega1,
        "omega2": d.omega2,
        "params": [
            {"i": i, "j": j, "value": element_to_json(d.params[(i, j)])}
            for (i, j) in sorted(d.params)
        ],
    }


def decomposition2d_from_json(algebra, obj) -> WittDecomposition2D:
    params = {
        (int(item["i"]), int(item["j"])): element_from_json(algebra, item["value"])
        for item in obj["params"]
    }
    return WittDecomposition2D(
        algebra,
        element_from_json(algebra, obj["leading"]),
        int(obj["omega1"]),
        int(obj["omega2"]),
        params,
    )
