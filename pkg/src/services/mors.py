"""The finite-field bipartite graph G^(q,k) and its exact statistics.

Both classes are GF(q) x {1, ..., (q-1)/k}. Vertex (a, b) of V1 is adjacent
to (alpha, beta) of V2 iff s = g^beta * a + g^b * alpha is nonzero and lies in
the coset g^delta * H of the order-k subgroup H, tested as (s g^-delta)^k = 1.

Codegrees in V1 (and symmetrically V2):
  same b, a != a'                -> k - 1
  b != b', a' = g^(b'-b) * a     -> 0
  b != b', otherwise             -> k
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import comb

import numpy as np
import numpy.typing as npt

from src.models.bounds import fraction_str
from src.models.errors import InvalidParameterError
from src.models.graph import BipartiteGraph, Side
from src.models.mors import MorsCheck, MorsParams, MorsPrediction, MorsReport
from src.services.counting import codegree_histogram, count_k2t
from src.services.finite_field import FieldElement, FiniteField, galois_field

logger = logging.getLogger(__name__)


def _resolve(params: MorsParams) -> tuple[FiniteField, FieldElement, int]:
    """Field, primitive root and block count for ``params``.

    Raises:
        NotPrimePowerError: If q is not a prime power.
        InvalidParameterError: If k does not divide q - 1 or the root is not primitive.
    """
    field = galois_field(params.q)
    if (params.q - 1) % params.k:
        raise InvalidParameterError(f"k={params.k} does not divide q-1={params.q - 1}")
    if params.root_index is None:
        root = field.primitive_element()
    else:
        if params.root_index >= field.order:
            raise InvalidParameterError(f"root index {params.root_index} outside GF({params.q})")
        root = field[params.root_index]
        if not field.is_primitive(root):
            raise InvalidParameterError(f"element {params.root_index} is not a primitive root of GF({params.q})")
    return field, root, (params.q - 1) // params.k


def build_mors(params: MorsParams) -> BipartiteGraph:
    """Build G^(q,k); vertex a_index * B + (b - 1) is labelled (a_index, b)."""
    field, root, blocks = _resolve(params)
    q = field.order
    add, mul = field.tables()

    powers = np.empty(q - 1, dtype=np.int64)
    acc = field.one
    for e in range(q - 1):
        powers[e] = field.index(acc)
        acc = acc * root

    # Membership of each element in g^delta * H
    unshift = field.pow(root, -params.delta)
    in_coset = np.zeros(q, dtype=np.bool_)
    for i, elem in enumerate(field.elements()):
        if elem:
            in_coset[i] = field.pow(elem * unshift, params.k) == field.one

    a_idx = np.repeat(np.arange(q), blocks)
    b_val = np.tile(np.arange(1, blocks + 1), q)
    g_b = powers[b_val % (q - 1)]

    left = mul[g_b[None, :], a_idx[:, None]]  # g^beta * a
    right = mul[g_b[:, None], a_idx[None, :]]  # g^b * alpha
    adjacency = in_coset[add[left, right]]

    labels = [(int(a), int(b)) for a, b in zip(a_idx, b_val, strict=True)]
    graph = BipartiteGraph(adjacency, labels, labels)
    logger.info(
        "Built G^(q,k)",
        extra={"q": q, "k": params.k, "delta": params.delta, "n": graph.n_x, "m": graph.m},
    )
    return graph


def predicted_histogram(q: int, k: int) -> dict[int, int]:
    """Codegree histogram of one class of G^(q,k)."""
    n = q * (q - 1) // k
    blocks = (q - 1) // k
    hist: dict[int, int] = {}
    for codegree, pairs in (
        (k - 1, n * (q - 1) // 2),
        (k, n * (blocks - 1) * (q - 1) // 2),
        (0, n * (blocks - 1) // 2),
    ):
        if pairs:
            hist[codegree] = hist.get(codegree, 0) + pairs
    return dict(sorted(hist.items()))


def predicted_stats(q: int, k: int, t: int | None = None) -> MorsPrediction:
    """Closed-form statistics of G^(q,k).

    Args:
        q: Prime power.
        k: Divisor of q - 1.
        t: K_{2,t} size; defaults to max(k, 2).
    """
    _resolve(MorsParams(q=q, k=k))
    t = max(k, 2) if t is None else t
    if t < 2:
        raise InvalidParameterError(f"t must be at least 2, got {t}")
    n = q * (q - 1) // k
    hist = predicted_histogram(q, k)
    c4 = sum(cnt * comb(c, 2) for c, cnt in hist.items())
    k2t = sum(cnt * comb(c, t) for c, cnt in hist.items())
    c4_over_n2 = Fraction(c4, n * n)
    limit = Fraction(k * (k - 1), 4)
    uniform_pairs = q * (q - 1) ** 3 // (2 * k * k)
    return MorsPrediction(
        q=q,
        k=k,
        t=t,
        n=n,
        m=q * (q - 1) ** 2 // k,
        degree=q - 1,
        blocks=(q - 1) // k,
        codegree_histogram=hist,
        zero_partners=(q - 1) // k - 1,
        c4=c4,
        k2t_unordered=k2t,
        k2t_ordered=2 * k2t,
        c4_over_n2=fraction_str(c4_over_n2),
        limit=fraction_str(limit),
        ratio=fraction_str(c4_over_n2 / limit) if limit else None,
        c4_if_uniform=q * (q - 1) ** 3 * (k - 1) // (4 * k),
        k2t_if_uniform_unordered=uniform_pairs * comb(k, t),
        k2t_if_uniform_ordered=2 * uniform_pairs * comb(k, t),
    )


def _zero_partners(codeg: npt.NDArray[np.int64]) -> set[int]:
    zeros = (codeg == 0).sum(axis=1)
    return {int(z) for z in zeros}


def verify_mors(params: MorsParams) -> MorsReport:
    """Build G^(q,k) and compare every measured statistic with its prediction.

    Never raises on a mismatch; the report carries the first failing check.
    """
    _, root, _ = _resolve(params)
    graph = build_mors(params)
    pred = predicted_stats(params.q, params.k)
    hist_v1 = codegree_histogram(graph, Side.X)
    hist_v2 = codegree_histogram(graph, Side.Y)
    ts = range(2, params.k + 2)
    k2t_v1 = {t: count_k2t(graph, t, Side.X) for t in ts}
    k2t_v2 = {t: count_k2t(graph, t, Side.Y) for t in ts}
    c4 = k2t_v1[2]

    def expected_k2t(t: int) -> int:
        return sum(cnt * comb(c, t) for c, cnt in pred.codegree_histogram.items())

    checks = [
        MorsCheck(name="edges", passed=graph.m == pred.m, measured=str(graph.m), expected=str(pred.m)),
        MorsCheck(
            name="regular",
            passed=graph.is_regular() == pred.degree,
            measured=str(graph.is_regular()),
            expected=str(pred.degree),
        ),
        MorsCheck(
            name="codegrees_v1",
            passed=hist_v1 == pred.codegree_histogram,
            measured=str(hist_v1),
            expected=str(pred.codegree_histogram),
        ),
        MorsCheck(
            name="codegrees_v2",
            passed=hist_v2 == pred.codegree_histogram,
            measured=str(hist_v2),
            expected=str(pred.codegree_histogram),
        ),
    ]
    for side in (Side.X, Side.Y):
        codeg = graph.codegree_matrix(side)
        partners = _zero_partners(codeg)
        checks.append(
            MorsCheck(
                name=f"zero_partners_{'v1' if side is Side.X else 'v2'}",
                passed=partners == {pred.zero_partners},
                measured=str(sorted(partners)),
                expected=str(pred.zero_partners),
            )
        )
    checks.append(MorsCheck(name="c4", passed=c4 == pred.c4, measured=str(c4), expected=str(pred.c4)))
    for t in ts:
        want = expected_k2t(t)
        got = (k2t_v1[t], k2t_v2[t])
        checks.append(
            MorsCheck(name=f"k2{t}", passed=got == (want, want), measured=str(list(got)), expected=str(want))
        )

    failed = next((c for c in checks if not c.passed), None)
    if failed is not None:
        logger.warning(
            "G^(q,k) verification failed",
            extra={"q": params.q, "k": params.k, "delta": params.delta, "criterion": failed.name},
        )
    return MorsReport(
        q=params.q,
        k=params.k,
        delta=params.delta,
        root_index=int(root),
        n=graph.n_x,
        m=graph.m,
        codegree_histogram_v1=hist_v1,
        codegree_histogram_v2=hist_v2,
        c4=c4,
        k2t_unordered=k2t_v1,
        k2t_unordered_v2=k2t_v2,
        predicted=pred,
        checks=checks,
        passed=failed is None,
        counterexample=None if failed is None else f"{failed.name}: measured {failed.measured}, expected {failed.expected}",
    )
