"""Lower bounds on K_{a,b} counts in m-edge subgraphs of K_{n,n}.

The plain bound applies Jensen's inequality twice to the truncated binomial;
the improved bound replaces both applications by the discrete version, which
splits a sum S over N terms into floor and ceiling parts. All arithmetic is in
integers or ``Fraction``; floats appear only in the ``*_approx`` report fields.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import TypeVar

import numpy as np

from src.models.bounds import BoundReport, EqualityReport, fraction_str
from src.models.errors import InvalidParameterError, VerificationError
from src.models.graph import BipartiteGraph, Side
from src.services.finite_field import prime_power

logger = logging.getLogger(__name__)

Num = TypeVar("Num", int, Fraction, float)


def trunc_binom(x: Num, k: int) -> Num:
    """Binomial coefficient C(x, k) extended to real x and truncated below k - 1.

    Returns prod_{i<k} (x - i) / k! for x >= k - 1 and 0 otherwise, in the
    numeric kind of ``x``.
    """
    if k < 0:
        raise InvalidParameterError(f"k must be non-negative, got {k}")
    if x < k - 1:
        return x * 0
    num = x * 0 + 1
    for i in range(k):
        num = num * (x - i)
    if isinstance(num, int):
        return num // math.factorial(k)  # type: ignore[return-value]
    return num / math.factorial(k)  # type: ignore[return-value]


@dataclass(frozen=True, slots=True)
class TruncatedBinomial:
    """``x -> trunc_binom(x, k)``: convex and nondecreasing on its support."""

    k: int

    def __call__(self, x: Num) -> Num:
        return trunc_binom(x, self.k)


def _check_args(n: int, m: int, a: int, b: int) -> None:
    if not (n >= a >= 1 and b >= 1):
        raise InvalidParameterError(f"need n >= a >= 1 and b >= 1, got n={n}, a={a}, b={b}")
    if not 0 <= m <= n * n:
        raise InvalidParameterError(f"edge count {m} outside [0, {n * n}]")


def plain_lower_bound(n: int, m: int, a: int, b: int) -> Fraction:
    """C(n, a) * C(n * C(m/n, a) / C(n, a), b) with truncated binomials."""
    _check_args(n, m, a, b)
    subsets = math.comb(n, a)
    inner = n * trunc_binom(Fraction(m, n), a) / subsets
    return subsets * trunc_binom(inner, b)


def discrete_jensen(total: int, count: int, f: TruncatedBinomial) -> int:
    """Least sum of f over ``count`` integers summing to ``total``.

    With lo = floor(total / count), beta terms take lo + 1 and alpha = count -
    beta take lo.
    """
    if count < 1 or total < 0:
        raise InvalidParameterError(f"need count >= 1 and total >= 0, got {count}, {total}")
    lo, beta = divmod(total, count)
    alpha = count - beta
    return alpha * f(lo) + beta * f(lo + 1)


def improved_lower_bound(n: int, m: int, a: int, b: int) -> int:
    """Discrete Jensen over the Y degrees, then over the a-subsets of X.

    The first stage bounds sum_y C(d(y), a), the total codegree of a-subsets;
    the second is nondecreasing in that total, so feeding it the bound keeps
    the result a valid lower bound.
    """
    _check_args(n, m, a, b)
    codegree_total = discrete_jensen(m, n, TruncatedBinomial(a))
    return discrete_jensen(codegree_total, math.comb(n, a), TruncatedBinomial(b))


def poly_c4_bound(n: int, m: int) -> Fraction:
    """max(0, m(m-n)(m(m-n) - n^2(n-1)) / (4 n^3 (n-1))); equals the plain bound for a = b = 2."""
    mm = m * (m - n)
    threshold = n * n * (n - 1)
    if mm <= threshold:
        return Fraction(0)
    return Fraction(mm * (mm - threshold), 4 * n**3 * (n - 1))


def c4_regime(n: int, m: int) -> BoundReport:
    """Bound report for C4 with the excess xi = m - n(sqrt(n) + 1/2) and its regime.

    Regimes: (i) xi <= sqrt(n); (iv) C = xi / (n sqrt(n)) > 10; (iii)
    C >= 1 / log n; (ii) otherwise. The tag is advisory; the bounds are exact.
    """
    if n < 2:
        raise InvalidParameterError(f"n must be at least 2, got {n}")
    report = bound_report(n, m, 2, 2)
    root = math.sqrt(n)
    xi = m - n * (root + 0.5)
    c = xi / (n * root)
    if xi <= root:
        regime, asymptote = "(i)", None
    elif c > 10:
        regime, asymptote = "(iv)", (m / n) ** 4 / 4
    elif c >= 1 / math.log(n):
        regime, asymptote = "(iii)", c * (c + 2) * (1 + c) ** 2 / 4 * n * n
    else:
        regime, asymptote = "(ii)", root * xi / 2
    poly = poly_c4_bound(n, m)
    return report.model_copy(
        update={
            "regime": regime,
            "below_threshold": xi < 0,
            "xi_approx": xi,
            "c_approx": c,
            "poly_bound": fraction_str(poly),
            "poly_bound_approx": float(poly),
            "asymptote_approx": asymptote,
            "quartic_asymptote_approx": (m / n) ** 4 / 4,
        }
    )


def bound_report(n: int, m: int, a: int, b: int) -> BoundReport:
    plain = plain_lower_bound(n, m, a, b)
    improved = improved_lower_bound(n, m, a, b)
    if improved < math.ceil(plain):
        raise VerificationError(f"improved bound {improved} below plain bound {plain}")
    return BoundReport(
        n=n,
        m=m,
        a=a,
        b=b,
        average_degree=fraction_str(Fraction(m, n)),
        plain_bound=fraction_str(plain),
        improved_bound=improved,
    )


def zarankiewicz_plane(q: int) -> tuple[int, int]:
    """(n, z) for the projective plane of order q: n = q^2 + q + 1, z = n(q + 1)."""
    prime_power(q)
    n = q * q + q + 1
    return n, n * (q + 1)


def _subset_codegrees(graph: BipartiteGraph, a: int) -> tuple[list[int], list[tuple[int, ...]]]:
    if a == 2:
        codeg = graph.codegree_matrix(Side.X)
        rows, cols = np.triu_indices(graph.n_x, k=1)
        return [int(v) for v in codeg[rows, cols]], [(int(r), int(c)) for r, c in zip(rows, cols, strict=True)]
    bits = graph.bit_rows(Side.X)
    values: list[int] = []
    subsets: list[tuple[int, ...]] = []
    for subset in combinations(range(graph.n_x), a):
        acc = bits[subset[0]]
        for v in subset[1:]:
            acc &= bits[v]
        values.append(acc.bit_count())
        subsets.append(subset)
    return values, subsets


def equality_conditions(graph: BipartiteGraph, improved: bool, a: int = 2) -> EqualityReport:
    """Check the equality conditions of the plain or improved bound.

    Plain: G is regular and all a-subsets of X have the same codegree.
    Improved: degrees differ by at most one and so do the a-subset codegrees.
    """
    if a < 1 or a > graph.n_x:
        raise InvalidParameterError(f"a must lie in [1, {graph.n_x}], got {a}")
    labelled = [("X", i, d) for i, d in enumerate(graph.degrees(Side.X))]
    labelled += [("Y", j, d) for j, d in enumerate(graph.degrees(Side.Y))]
    lo_v = min(labelled, key=lambda t: t[2])
    hi_v = max(labelled, key=lambda t: t[2])

    values, subsets = _subset_codegrees(graph, a)
    if values:
        lo_i = min(range(len(values)), key=values.__getitem__)
        hi_i = max(range(len(values)), key=values.__getitem__)
        c_min, c_max = values[lo_i], values[hi_i]
    else:
        lo_i = hi_i = -1
        c_min = c_max = 0

    slack = 1 if improved else 0
    degree_ok = hi_v[2] - lo_v[2] <= slack
    codegree_ok = c_max - c_min <= slack
    return EqualityReport(
        mode="improved" if improved else "plain",
        a=a,
        passed=degree_ok and codegree_ok,
        degree_min=lo_v[2],
        degree_max=hi_v[2],
        codegree_min=c_min,
        codegree_max=c_max,
        degree_witness=None if degree_ok else [list(lo_v), list(hi_v)],
        codegree_witness=None if codegree_ok else [list(subsets[lo_i]), list(subsets[hi_i])],
    )
