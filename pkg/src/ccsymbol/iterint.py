"""Numeric Chen iterated integrals along polyline paths in the plane.

The order-n iterated integral of 1-forms w_1, ..., w_n along a path is the
integral of the pulled-back product over the ordered simplex
0 <= t_1 <= ... <= t_n <= 1.  Paths are polylines; on a single segment the
simplex integrals are computed with a spectral antiderivative built on
Gauss-Legendre nodes (exact for polynomial integrands of the quadrature
degree), and segments are chained with the composition rule

  I_{ab}[1..n] = sum_k I_a[1..k] * I_b[k+1..n],

so only single-segment integrals are ever quadratured directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


class PoleProximityError(ValueError):
    pass


DEFAULT_QUAD_ORDER = 32
POLE_DISTANCE = 1e-3


@dataclass(frozen=True)
class PathSpec:
    vertices: tuple

    def __init__(self, vertices):
        vs = tuple(complex(v) for v in vertices)
        if len(vs) < 2:
            raise ValueError("a path needs at least two vertices")
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise ValueError("consecutive vertices must be distinct")
        object.__setattr__(self, "vertices", vs)

    def reversed(self):
        return PathSpec(self.vertices[::-1])

    def concat(self, other):
        if self.vertices[-1] != other.vertices[0]:
            raise ValueError("paths do not share an endpoint")
        return PathSpec(self.vertices + other.vertices[1:])

    def segments(self):
        return list(zip(self.vertices, self.vertices[1:]))


def commutator_path(alpha: PathSpec, beta: PathSpec) -> PathSpec:
    """alpha beta alpha^-1 beta^-1 for two loops with a common base point."""
    if alpha.vertices[0] != alpha.vertices[-1] or beta.vertices[0] != beta.vertices[-1]:
        raise ValueError("commutator needs two loops")
    if alpha.vertices[0] != beta.vertices[0]:
        raise ValueError("loops must share the base point")
    return alpha.concat(beta).concat(alpha.reversed()).concat(beta.reversed())


@dataclass(frozen=True)
class FormSpec:
    """A rational 1-form.

    kind "dlog": sum of m * dz/(z - p) over (p, m) pairs (the logarithmic
    differential of prod (z - p)^m).  kind "rational": P(z)/Q(z) dz with
    polynomial coefficient lists in ascending degree.
    """

    kind: str
    data: tuple

    @staticmethod
    def dlog(zeros):
        return FormSpec("dlog", tuple((complex(p), int(m)) for p, m in zeros))

    @staticmethod
    def rational(num_coeffs, den_coeffs=(1,)):
        num = tuple(complex(c) for c in num_coeffs)
        den = tuple(complex(c) for c in den_coeffs)
        if not any(den):
            raise ValueError("denominator is identically zero")
        return FormSpec("rational", (num, den))

    def evaluate(self, z):
        """Value of the coefficient function at z (form = value * dz)."""
        if self.kind == "dlog":
            out = np.zeros_like(z, dtype=complex)
            for p, m in self.data:
                out = out + m / (z - p)
            return out
        num, den = self.data
        n = np.zeros_like(z, dtype=complex)
        for c in reversed(num):
            n = n * z + c
        d = np.zeros_like(z, dtype=complex)
        for c in reversed(den):
            d = d * z + c
        return n / d

    def poles(self):
        if self.kind == "dlog":
            return [p for p, _ in self.data]
        _, den = self.data
        if len(den) <= 1:
            return []
        return list(np.roots(list(reversed(den))))


def _segment_pole_distance(z0, z1, pole):
    """Distance from a pole to the segment [z0, z1]."""
    d = z1 - z0
    t = ((pole - z0) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z0 + t * d - pole)


def check_path_clearance(path: PathSpec, forms, delta=POLE_DISTANCE):
    poles = []
    for form in forms:
        poles.extend(form.poles())
    for z0, z1 in path.segments():
        for p in poles:
            dist = _segment_pole_distance(z0, z1, p)
            if dist < delta:
                raise PoleProximityError(
                    "path passes within %.2g of a pole (limit %.2g)" % (dist, delta)
                )


@lru_cache(maxsize=8)
def _quad_data(order):
    """Nodes/weights on [0, 1] and the spectral antiderivative matrix S,
    S[i, j] ~ integral of the j-th Lagrange basis poly from 0 to x_i."""
    x, w = roots_legendre(order)
    x = (x + 1) / 2
    w = w / 2
    # Lagrange basis integrated exactly: for each target node x_i use an
    # order-sized Gauss rule on [0, x_i]; polynomials of degree order-1 are
    # integrated exactly by order-point Gauss
    S = np.empty((order, order))
    for i in range(order):
        xi = x[i]
        sub_x = x * xi
        sub_w = w * xi
        # evaluate all Lagrange basis polynomials at the sub-nodes
        L = np.ones((order, order))  # L[j, q] = ell_j(sub_x[q])
        for j in range(order):
            num = np.ones_like(sub_x)
            den = 1.0
            for k in range(order):
                if k == j:
                    continue
                num *= sub_x - x[k]
                den *= x[j] - x[k]
            L[j] = num / den
        S[i] = L @ sub_w
    return x, w, S


def _segment_blocks(z0, z1, forms, quad_order):
    """All single-segment simplex integrals U[a][b] = I[w_a..w_b].

    Returns a dict (a, b) -> complex for 0 <= a <= b < n, built with the
    antiderivative recursion V_k = S (g_k * V_{k-1}).
    """
    x, w, S = _quad_data(quad_order)
    z = z0 + (z1 - z0) * x
    dz = z1 - z0
    g = [form.evaluate(z) * dz for form in forms]
    n = len(forms)
    blocks = {}
    for a in range(n):
        V = np.ones_like(x, dtype=complex)
        for b in range(a, n):
            gb = g[b] * V
            blocks[(a, b)] = w @ gb
            V = S @ gb
    return blocks


def iterated_integral(path: PathSpec, forms, quad_order=DEFAULT_QUAD_ORDER,
                      delta=POLE_DISTANCE):
    """Iterated integral of the given 1-forms along the polyline path."""
    if not forms:
        return 1.0 + 0j
    check_path_clearance(path, forms, delta)
    n = len(forms)
    # W[i] = iterated integral of forms[0..i-1] over the path so far
    W = np.zeros(n + 1, dtype=complex)
    W[0] = 1.0
    for z0, z1 in path.segments():
        blocks = _segment_blocks(z0, z1, forms, quad_order)
        newW = np.zeros_like(W)
        for i in range(n + 1):
            total = W[i]  # j = i term: empty block on the new segment
            for j in range(i):
                total += W[j] * blocks[(j, i - 1)]
            newW[i] = total
        W = newW
    return complex(W[n])


def _shuffles(m, n):
    """All (m, n)-shuffle permutations as index tuples of length m+n."""
    import itertools

    out = []
    for positions in itertools.combinations(range(m + n), m):
        perm = [None] * (m + n)
        left = iter(range(m))
        right = iter(range(m, m + n))
        pos_set = set(positions)
        for spot in range(m + n):
            perm[spot] = next(left) if spot in pos_set else next(right)
        out.append(tuple(perm))
    return out


def check_shuffle(path, forms_m, forms_n, quad_order=DEFAULT_QUAD_ORDER):
    """|product of the two integrals - shuffle sum|."""
    lhs = iterated_integral(path, forms_m, quad_order) * iterated_integral(
        path, forms_n, quad_order
    )
    combined = list(forms_m) + list(forms_n)
    rhs = 0j
    for perm in _shuffles(len(forms_m), len(forms_n)):
        # perm[spot] = which form sits at position spot
        rhs += iterated_integral(path, [combined[k] for k in perm], quad_order)
    return abs(lhs - rhs)


def check_reversal(path, forms, quad_order=DEFAULT_QUAD_ORDER):
    """|I(w_1..w_n, path) - (-1)^n I(w_n..w_1, reversed path)|."""
    lhs = iterated_integral(path, forms, quad_order)
    rhs = ((-1) ** len(forms)) * iterated_integral(
        path.reversed(), list(reversed(list(forms))), quad_order
    )
    return abs(lhs - rhs)


def check_composition(path1, path2, forms, quad_order=DEFAULT_QUAD_ORDER):
    """|I over the concatenation - sum_k I_1[..k] I_2[k..]|."""
    joined = path1.concat(path2)
    lhs = iterated_integral(joined, forms, quad_order)
    rhs = 0j
    n = len(forms)
    for k in range(n + 1):
        rhs += iterated_integral(path1, forms[:k], quad_order) * iterated_integral(
            path2, forms[k:], quad_order
        )
    return abs(lhs - rhs)


def check_commutator(alpha, beta, w1, w2, quad_order=DEFAULT_QUAD_ORDER):
    """|I(w1 w2, [alpha, beta]) - (I_a w1 I_b w2 - I_b w1 I_a w2)|."""
    loop = commutator_path(alpha, beta)
    lhs = iterated_integral(loop, [w1, w2], quad_order)
    a1 = iterated_integral(alpha, [w1], quad_order)
    a2 = iterated_integral(alpha, [w2], quad_order)
    b1 = iterated_integral(beta, [w1], quad_order)
    b2 = iterated_integral(beta, [w2], quad_order)
    return abs(lhs - (a1 * b2 - b1 * a2))


def fourier_moment(k, quad_order=DEFAULT_QUAD_ORDER):
    """integral of theta * exp(2 pi i k theta) over [0, 1], numerically.

    For k != 0 the exact value is 1 / (2 pi i k); composite panels keep the
    oscillation resolved for |k| up to a few dozen.
    """
    if k == 0:
        raise ValueError("k must be nonzero")
    x, w, _ = _quad_data(quad_order)
    panels = max(4, 2 * abs(int(k)))
    total = 0j
    width = 1.0 / panels
    for p in range(panels):
        theta = (p + x) * width
        total += (w * width) @ (theta * np.exp(2j * np.pi * k * theta))
    return complex(total)


def circle_path(center, radius, segments=24, base_angle=0.0):
    """Closed polyline approximating a circle, counterclockwise."""
    angles = base_angle + 2 * np.pi * np.arange(segments + 1) / segments
    pts = [complex(center) + radius * np.exp(1j * t) for t in angles]
    pts[-1] = pts[0]
    return PathSpec(pts)


def loop_through(center, base, segments=24):
    """Counterclockwise circular loop around center starting exactly at base."""
    center = complex(center)
    base = complex(base)
    r = abs(base - center)
    if r == 0:
        raise ValueError("base point coincides with the center")
    path = circle_path(center, r, segments, base_angle=np.angle(base - center))
    pts = list(path.vertices)
    pts[0] = base
    pts[-1] = base
    return PathSpec(pts)
