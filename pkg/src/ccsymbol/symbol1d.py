"""One-dimensional Contou-Carrere symbol, tame symbol, and reciprocity.

For f, g invertible Laurent series with Witt parameters {a_i}, {b_i},
leading units a0, b0 and valuations nu_f, nu_g, the pairing is

                           a0^nu_g  prod_{j,k>=1} (1 - a_j^(k/d) b_{-k}^(j/d))^d
  <f, g> = (-1)^(nu_f nu_g) -----------------------------------------------------,
                           b0^nu_f  prod_{j,k>=1} (1 - a_{-j}^(k/d) b_k^(j/d))^d

with d = gcd(j, k).  Negative-index parameters are nilpotent with finite
support, so only finitely many factors differ from 1: a factor can be
nonzero only while the nilpotent participant's power survives, which keeps
j below (nilpotency - 1) * k.  The symbol is therefore exact and
independent of the truncation once the truncation covers that range; the
computation re-decomposes internally at exactly that depth.

The tame symbol is the nilpotent-free specialization, computed here by an
independent route (series power and constant term) so the two can be
cross-checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .algebra import AlgebraElement, AlgebraError
from .laurent import (
    INFINITY,
    LaurentSeries1D,
    NotInGammaError,
    TruncationError,
    local_expansion,
)
from .witt import recommended_trunc_1d, witt_decompose_1d


@dataclass
class SymbolValue1D:
    value: AlgebraElement
    sign_exponent: int  # nu_f * nu_g mod 2
    numerator_factors: list = field(default_factory=list)  # (j, k, factor value)
    denominator_factors: list = field(default_factory=list)
    leading_num: AlgebraElement = None  # a0^nu_g
    leading_den: AlgebraElement = None  # b0^nu_f


def _pairing_factors(plus_params, minus_params, algebra):
    """Factors (1 - plus_j^(k/d) * minus_k^(j/d))^d over the finite range."""
    K = algebra.nilpotency_index()
    one = AlgebraElement.one(algebra)
    out = []
    for k, b in sorted(minus_params.items()):
        for j in sorted(plus_params):
            a = plus_params[j]
            d = gcd(j, k)
            mixed = (a ** (k // d)) * (b ** (j // d))
            if mixed.is_zero():
                continue
            out.append((j, k, (one - mixed) ** d))
    return out


def cc_symbol_1d(f: LaurentSeries1D, g: LaurentSeries1D) -> SymbolValue1D:
    """Contou-Carrere pairing of two invertible series, exact.

    A mixed factor (1 - a_j^(k/d) b_{-k}^(j/d)) can be nonzero only for
    j <= (K-1) * k with K the nilpotency index, so the result is exact as
    soon as each input's truncation covers that depth plus the peeling pad
    for its own negative tail; otherwise TruncationError asks the caller to
    rebuild the inputs deeper.
    """
    algebra = f.algebra
    if algebra != g.algebra:
        raise AlgebraError("algebra mismatch")
    K = algebra.nilpotency_index()

    wf = f.gamma_valuation()
    wg = g.gamma_valuation()
    if wf is None or wg is None:
        raise NotInGammaError("both arguments must be invertible series")
    df = witt_decompose_1d(f, f.trunc - wf)
    dg = witt_decompose_1d(g, g.trunc - wg)
    kmax_f = max(df.minus_params, default=0)
    kmax_g = max(dg.minus_params, default=0)
    # exact plus-parameters needed to depth (K-1)*k_other; the top K*k_own
    # indices of a truncated input may be corrupted by the peeling
    need_f = (K - 1) * kmax_g + K * kmax_f
    need_g = (K - 1) * kmax_f + K * kmax_g
    if f.trunc - wf < need_f or g.trunc - wg < need_g:
        raise TruncationError(
            "inputs truncated below the pairing depth; rebuild them with "
            "recommended_trunc_1d(algebra, %d, %d)" % (max(need_f, need_g), max(kmax_f, kmax_g))
        )

    nu_f, nu_g = df.omega, dg.omega
    num_factors = _pairing_factors(df.plus_params, dg.minus_params, algebra)
    den_factors = _pairing_factors(dg.plus_params, df.minus_params, algebra)

    leading_num = df.leading ** nu_g
    leading_den = dg.leading ** nu_f
    num = leading_num
    for _, _, val in num_factors:
        num = num * val
    den = leading_den
    for _, _, val in den_factors:
        den = den * val
    value = num * den.invert()
    if (nu_f * nu_g) % 2:
        value = -value
    return SymbolValue1D(
        value, (nu_f * nu_g) % 2, num_factors, den_factors, leading_num, leading_den
    )


def tame_symbol(f: LaurentSeries1D, g: LaurentSeries1D) -> AlgebraElement:
    """(-1)^(nu_f nu_g) times the constant term of f^nu_g / g^nu_f.

    Only defined over the base field (all nilpotent parts zero); this is
    the independent cross-check for the pairing's orientation.
    """
    for series in (f, g):
        for c in series.coeffs.values():
            if not c.nilpotent_part().is_zero():
                raise AlgebraError("tame symbol needs nilpotent-free inputs")
    wf = f.gamma_valuation()
    wg = g.gamma_valuation()
    if wf is None or wg is None:
        raise NotInGammaError("both arguments must be invertible series")
    h = (f ** wg) * (g.invert() ** wf)
    value = h.coeff(0)
    if (wf * wg) % 2:
        value = -value
    return value


def steinberg_check(f: LaurentSeries1D) -> SymbolValue1D:
    """<f, 1-f>; the value is 1 whenever both arguments are invertible."""
    one = LaurentSeries1D.one(f.algebra, f.trunc)
    g = one - f
    if g.gamma_valuation() is None:
        raise NotInGammaError("1 - f is not invertible")
    return cc_symbol_1d(f, g)


@dataclass
class FactoredRational:
    """leading * prod (t - alpha_i)^(m_i) with distinct constant parts."""

    leading: AlgebraElement
    zeros: list  # (alpha: AlgebraElement, multiplicity: int)


def weil_product(f_spec: FactoredRational, g_spec: FactoredRational, algebra, trunc=None):
    """Product of the local pairings over every point of the projective line.

    The support is the set of constant parts of either function's zeros and
    poles together with infinity; everywhere else both functions are units
    and the local pairing is 1.  The product is returned as an exact unit
    (equal to 1 when reciprocity holds).
    """
    points = sorted(
        {alpha.constant_term() for alpha, _ in f_spec.zeros}
        | {alpha.constant_term() for alpha, _ in g_spec.zeros}
    )
    K = algebra.nilpotency_index()
    max_mult = max(
        [1]
        + [abs(m) for _, m in f_spec.zeros]
        + [abs(m) for _, m in g_spec.zeros]
    )
    if trunc is None:
        trunc = recommended_trunc_1d(algebra, (K - 1) * max_mult + 1, max_mult, abs(max_mult)) + 4

    total = AlgebraElement.one(algebra)
    contributions = []
    for at in list(points) + [INFINITY]:
        floc = local_expansion(algebra, f_spec.zeros, f_spec.leading, at, trunc)
        gloc = local_expansion(algebra, g_spec.zeros, g_spec.leading, at, trunc)
        sym = cc_symbol_1d(floc, gloc)
        contributions.append((at, sym))
        total = total * sym.value
    return total, contributions


# -- JSON ----------------------------------------------------------------

from .algebra import element_to_json  # noqa: E402


def symbol1d_to_json(s: SymbolValue1D):
    return {
        "value": element_to_json(s.value),
        "sign_exponent": s.sign_exponent,
        "factors": {
            "num": [
                {"j": j, "k": k, "value": element_to_json(v)}
                for j, k, v in s.numerator_factors
            ],
            "den": [
                {"j": j, "k": k, "value": element_to_json(v)}
                for j, k, v in s.denominator_factors
            ],
        },
    }
