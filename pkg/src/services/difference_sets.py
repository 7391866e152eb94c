"""Singer planar difference sets, difference profiles, completions and geometry."""

from __future__ import annotations

import logging
from itertools import combinations
from math import comb

import numpy as np

from src.models.difference import (
    CompletionReport,
    CyclicSubset,
    DesignParams,
    DifferenceClassification,
    DifferenceProfile,
    GeometryReport,
    StructureKind,
)
from src.models.errors import InvalidParameterError, VerificationError
from src.models.graph import BipartiteGraph
from src.services.finite_field import cubic_extension, galois_field, prime_power

logger = logging.getLogger(__name__)


def difference_counts(subset: CyclicSubset) -> DifferenceProfile:
    """Count ordered pairs (d, d') with d - d' = g for every nonzero g."""
    n = subset.n
    elems = np.array(subset.elements, dtype=np.int64)
    diffs = (elems[:, None] - elems[None, :]) % n
    off_diagonal = diffs[~np.eye(len(elems), dtype=np.bool_)]
    counts = np.bincount(off_diagonal, minlength=n)
    return DifferenceProfile(n=n, counts={g: int(counts[g]) for g in range(1, n)})


def classify_difference_structure(subset: CyclicSubset, relaxed: bool = False) -> DifferenceClassification:
    """Classify D as a difference set, an almost difference set, or neither.

    Args:
        subset: The subset to classify.
        relaxed: Treat counts within {lam, lam + 1} as almost even when only
            one of the two values occurs.
    """
    values = difference_counts(subset).values() or {0}
    low, high = min(values), max(values)
    if low == high:
        return DifferenceClassification(
            kind=StructureKind.DIFFERENCE_SET, lam=low, almost=True, relaxed=relaxed
        )
    if high == low + 1:
        return DifferenceClassification(
            kind=StructureKind.ALMOST_DIFFERENCE_SET, lam=low, almost=True, relaxed=relaxed
        )
    return DifferenceClassification(kind=StructureKind.NEITHER, almost=False, relaxed=relaxed)


def design_params(subset: CyclicSubset) -> DesignParams | None:
    """(v, k, lam) of the symmetric design developed from a difference set."""
    cls = classify_difference_structure(subset)
    if cls.kind is not StructureKind.DIFFERENCE_SET or cls.lam is None:
        return None
    return DesignParams(v=subset.n, k=subset.k, lam=cls.lam)


def _require_planar_odd(subset: CyclicSubset) -> None:
    if subset.n % 2 == 0:
        raise InvalidParameterError(f"group order {subset.n} is even; 2 is not invertible")
    cls = classify_difference_structure(subset)
    if cls.kind is not StructureKind.DIFFERENCE_SET or cls.lam != 1:
        raise InvalidParameterError(f"{subset.to_line()} is not a planar difference set mod {subset.n}")


def completing_elements(subset: CyclicSubset) -> list[int]:
    """All g outside D whose addition keeps every difference count in {lam, lam + 1}.

    Brute force over the candidates; works for any cyclic difference set.
    """
    base = classify_difference_structure(subset)
    if base.kind is not StructureKind.DIFFERENCE_SET or base.lam is None:
        raise InvalidParameterError(f"{subset.to_line()} is not a difference set mod {subset.n}")
    members = set(subset.elements)
    out: list[int] = []
    for g in range(subset.n):
        if g in members:
            continue
        values = difference_counts(subset.with_element(g)).values()
        if values <= {base.lam, base.lam + 1}:
            out.append(g)
    return out


def _halved_sums(subset: CyclicSubset) -> set[int]:
    half = pow(2, -1, subset.n)
    return {((d + e) * half) % subset.n for d, e in combinations(subset.elements, 2)}


def completion_elements(subset: CyclicSubset) -> list[int]:
    """Completion elements of a planar difference set of odd order.

    g is a completion iff g is outside D and 2g is not a sum of two distinct
    elements of D. The result is cross-checked against the brute-force search
    and the count n - k - C(k, 2).

    Raises:
        InvalidParameterError: If n is even or D is not planar.
        VerificationError: If the rule and the brute-force search disagree.
    """
    _require_planar_odd(subset)
    excluded = set(subset.elements) | _halved_sums(subset)
    result = [g for g in range(subset.n) if g not in excluded]

    expected = subset.n - subset.k - comb(subset.k, 2)
    if len(result) != expected:
        raise VerificationError(f"found {len(result)} completion elements, expected {expected}")
    brute = completing_elements(subset)
    if brute != result:
        raise VerificationError(f"completion rule gives {result}, direct search gives {brute}")
    logger.info("Completion elements verified", extra={"n": subset.n, "k": subset.k})
    return result


def completion_report(subset: CyclicSubset) -> CompletionReport:
    completions = completion_elements(subset)
    classified = {
        g: classify_difference_structure(subset.with_element(g), relaxed=True) for g in completions
    }
    passed = all(c.accepted_as_almost and c.lam in (1, 2) for c in classified.values())
    return CompletionReport(
        n=subset.n,
        D=list(subset.elements),
        classification=classify_difference_structure(subset).label,
        lam=1,
        completions=completions,
        expected_count=subset.n - subset.k - comb(subset.k, 2),
        completed_classifications={g: c.label for g, c in classified.items()},
        passed=passed,
    )


def non_completion_blocks(subset: CyclicSubset) -> list[CyclicSubset]:
    """Blocks d/2 + D/2 for d in D, in the order of D."""
    _require_planar_odd(subset)
    n = subset.n
    half = pow(2, -1, n)
    return [CyclicSubset.of(n, {((d + e) * half) % n for e in subset.elements}) for d in subset.elements]


def _translate_offset(block: CyclicSubset, line: CyclicSubset) -> int | None:
    """t with block = line + t, if any."""
    for t in range(block.n):
        if line.translate(t) == block:
            return t
    return None


def non_completion_structure(subset: CyclicSubset) -> tuple[list[CyclicSubset], GeometryReport]:
    """Blocks of non-completion elements and a report on their geometry.

    For q even every block is a line and together with D they form a dual
    hyperoval. For q odd every block is an oval (no three points on a line).
    """
    blocks = non_completion_blocks(subset)
    n = subset.n
    q = subset.k - 1
    completions = set(completion_elements(subset))

    union: set[int] = set().union(*(set(b.elements) for b in blocks))
    partition_ok = union.isdisjoint(completions) and len(union) + len(completions) == n

    block_sets = [set(b.elements) for b in blocks]
    pairwise_single = all(len(a & b) == 1 for a, b in combinations(block_sets, 2))
    multiplicity = np.zeros(n, dtype=np.int64)
    for s in block_sets:
        multiplicity[list(s)] += 1
    no_triple = bool(multiplicity.max(initial=0) <= 2)

    offsets = [_translate_offset(b, subset) for b in blocks]
    lines_ok = all(t is not None for t in offsets)

    hyperoval_ok: bool | None = None
    arcs_ok: bool | None = None
    if q % 2 == 0:
        # D and the q+1 blocks are q+2 lines; every point must lie on 0 or 2
        on_lines = multiplicity.copy()
        on_lines[list(subset.elements)] += 1
        hyperoval_ok = lines_ok and set(int(v) for v in on_lines) <= {0, 2}
        structure_ok = hyperoval_ok
    else:
        lines = [set(subset.translate(t).elements) for t in range(n)]
        arcs_ok = all(len(b) == q + 1 and all(len(b & ln) <= 2 for ln in lines) for b in block_sets)
        structure_ok = arcs_ok

    passed = partition_ok and pairwise_single and no_triple and structure_ok
    report = GeometryReport(
        q=q,
        n=n,
        parity="even" if q % 2 == 0 else "odd",
        blocks=[list(b.elements) for b in blocks],
        partition_ok=partition_ok,
        pairwise_single=pairwise_single,
        no_triple_points=no_triple,
        blocks_are_lines=lines_ok,
        line_translates=offsets,
        hyperoval_ok=hyperoval_ok,
        arcs_ok=arcs_ok,
        passed=passed,
    )
    if not passed:
        logger.warning("Non-completion geometry check failed", extra={"q": q, "n": n})
    return blocks, report


def development(subset: CyclicSubset) -> BipartiteGraph:
    """Incidence graph of Z_n points (X) against translates D + g (Y).

    Point i is adjacent to block g iff i - g lies in D.
    """
    n = subset.n
    idx = np.arange(n)
    diffs = (idx[:, None] - idx[None, :]) % n
    return BipartiteGraph(np.isin(diffs, subset.elements))


def singer_difference_set(q: int) -> CyclicSubset:
    """Planar (q^2+q+1, q+1, 1) difference set from GF(q^3).

    D = {i : theta^i in span(1, theta)} for the canonical primitive element
    theta of the cubic extension.

    Raises:
        NotPrimePowerError: If ``q`` is not a prime power.
        VerificationError: If the result is not planar.
    """
    prime_power(q)
    ext = cubic_extension(galois_field(q))
    theta = ext.primitive_element()
    plane = ext.span([ext.one, theta])
    n = q * q + q + 1
    members: list[int] = []
    power = ext.one
    for i in range(n):
        if power in plane:
            members.append(i)
        power = power * theta
    subset = CyclicSubset.of(n, members)
    cls = classify_difference_structure(subset)
    if subset.k != q + 1 or cls.kind is not StructureKind.DIFFERENCE_SET or cls.lam != 1:
        raise VerificationError(f"Singer construction for q={q} is not planar")
    logger.info("Built Singer difference set", extra={"q": q, "n": n})
    return subset


def cyclic_codegree(subset: CyclicSubset, shift: int) -> int:
    """|D ∩ (D + shift)|: the codegree of two points of the development at distance shift."""
    return len(set(subset.elements) & set(subset.translate(shift).elements))
