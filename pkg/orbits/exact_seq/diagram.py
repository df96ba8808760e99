"""
3×3 diagrams of a group B with two normal subgroups A and L.

Every node is a ConcreteGroup and every arrow an index array, so exactness
and commutativity are checked element-wise with numpy.
"""
import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np

from orbits.errors import HypothesisViolation, NotNormalError
from orbits.exact_seq.models import ShortExact, ThreeByThree
from orbits.group_arith.arith import element_to_json
from orbits.group_arith.concrete import ConcreteGroup
from orbits.reports import VerificationReport

logger = logging.getLogger(__name__)

DEFAULT_LABELS = [
    ["K", "A", "A/K"],
    ["L", "B", "B/L"],
    ["L/K", "B/A", "B/AL"],
]


def homomorphism_witness(f: np.ndarray, X: ConcreteGroup, Y: ConcreteGroup) -> Optional[Tuple[int, int]]:
    """A pair (x, y) with f(xy) ≠ f(x)f(y), or None."""
    bad = f[X.table] != Y.table[f[:, None], f[None, :]]
    if not bad.any():
        return None
    x, y = np.argwhere(bad)[0]
    return int(x), int(y)


def check_short_exact(seq: ShortExact, report: VerificationReport) -> bool:
    X, Y, Z = seq.groups
    f, g = seq.maps
    problems: List[str] = []
    witness = None
    for label, arrow, src, dst in (("first map", f, X, Y), ("second map", g, Y, Z)):
        pair = homomorphism_witness(arrow, src, dst)
        if pair is not None:
            problems.append(f"{label} is not a homomorphism")
            witness = witness or [src.elements[pair[0]], src.elements[pair[1]]]
    if len(np.unique(f)) != X.order:
        problems.append("first map is not injective")
    if len(np.unique(g)) != Z.order:
        problems.append("second map is not surjective")
    kernel = set(np.nonzero(g == Z.identity)[0].tolist())
    image = set(f.tolist())
    if kernel != image:
        problems.append("image of the first map differs from the kernel of the second")
        extra = sorted(kernel ^ image)
        witness = witness or [Y.elements[extra[0]]]
    ok = not problems
    report.add(
        f"{seq.name} exact",
        ok,
        f"{X.order} ↪ {Y.order} ↠ {Z.order} is short exact" if ok else "; ".join(problems),
        None if witness is None else [element_to_json(w) for w in witness],
    )
    return ok


def _first_representatives(labels: np.ndarray) -> np.ndarray:
    # coset labels are numbered in order of first appearance
    return np.unique(labels, return_index=True)[1]


def _require_normal(B: ConcreteGroup, subset: frozenset, name: str) -> None:
    if not B.is_subgroup(subset):
        raise HypothesisViolation(f"{name} is a subgroup of B")
    witness = B.normality_witness(subset)
    if witness is not None:
        g, s = witness
        raise NotNormalError(name, [element_to_json(B.elements[g]), element_to_json(B.elements[s])])


def build_3x3(
    B: ConcreteGroup,
    A: Iterable[int],
    L: Iterable[int],
    labels: Optional[List[List[str]]] = None,
) -> ThreeByThree:
    """
    Build the 3×3 diagram of A, L ◁ B with K = A ∩ L and verify it.

    Args:
        B: The ambient finite group
        A: Indices of the normal subgroup A
        L: Indices of the normal subgroup L
        labels: Node names, defaults to the K/A/L/B scheme

    Returns:
        The instantiated ThreeByThree; its report lists exactness of all six
        sequences and commutativity of the four squares.

    Raises:
        NotNormalError: A or L is not normal, with a conjugating witness
    """
    A, L = frozenset(A), frozenset(L)
    _require_normal(B, A, "A")
    _require_normal(B, L, "L")
    K = A & L
    AL = B.generated_subgroup(A | L)

    GK, K_members = B.subgroup_group(K, name="K")
    GA, A_members = B.subgroup_group(A, name="A")
    GL, L_members = B.subgroup_group(L, name="L")
    K_members, A_members, L_members = map(np.array, (K_members, A_members, L_members))

    local_A = np.full(B.order, -1, dtype=np.int64)
    local_A[A_members] = np.arange(len(A_members))
    local_L = np.full(B.order, -1, dtype=np.int64)
    local_L[L_members] = np.arange(len(L_members))

    AK, lab_A = GA.quotient(local_A[K_members], name="A/K")
    LK, lab_L = GL.quotient(local_L[K_members], name="L/K")
    BL, lab_BL = B.quotient(L, name="B/L")
    BA, lab_BA = B.quotient(A, name="B/A")
    BAL, lab_BAL = B.quotient(AL, name="B/AL")

    ak_to_bl = lab_BL[A_members[_first_representatives(lab_A)]]
    lk_to_ba = lab_BA[L_members[_first_representatives(lab_L)]]
    ba_to_bal = lab_BAL[_first_representatives(lab_BA)]
    bl_to_bal = lab_BAL[_first_representatives(lab_BL)]

    diagram = ThreeByThree(
        labels=labels or DEFAULT_LABELS,
        groups=[[GK, GA, AK], [GL, B, BL], [LK, BA, BAL]],
        row_maps=[[local_A[K_members], lab_A], [L_members, lab_BL], [lk_to_ba, ba_to_bal]],
        col_maps=[[local_L[K_members], lab_L], [A_members, lab_BA], [ak_to_bl, bl_to_bal]],
    )
    report = VerificationReport(target="3x3")
    for seq in diagram.rows() + diagram.columns():
        check_short_exact(seq, report)
    for i in range(2):
        for j in range(2):
            right_down = diagram.col_maps[j + 1][i][diagram.row_maps[i][j]]
            down_right = diagram.row_maps[i + 1][j][diagram.col_maps[j][i]]
            bad = np.nonzero(right_down != down_right)[0]
            source = diagram.groups[i][j]
            report.add(
                f"square ({i},{j}) commutes",
                bad.size == 0,
                f"square at {diagram.labels[i][j]} commutes on {source.order} elements",
                [element_to_json(source.elements[int(bad[0])])] if bad.size else None,
            )
    report.details["orders"] = [[node.order for node in row] for row in diagram.groups]
    diagram.report = report
    logger.info("3x3 diagram over |B| = %d: %s", B.order, "exact" if report.passed else "NOT exact")
    return diagram
