"""
Fixed-cell counting for cellular automorphisms of the projective-plane partition.

For a cellular map h isotopic to the identity,
    1 = c₀⁺ − (c₁⁺ − c₁⁻) + (c₂⁺ − c₂⁻),
where c_i^± counts the i-cells mapped onto themselves with preserved (+) or
reversed (−) orientation. The orientation double cover S² carries a lift h̃
that preserves every orientation, with 2 = c₀⁺(h̃) − c₁⁺(h̃) + c₂⁺(h̃).
"""
import logging
from random import Random
from typing import Dict, List, Optional, Tuple

from orbits.errors import ConstructionError, NonCellularError
from orbits.surface_decomp.cw_model import (
    check_edge_incidence,
    derive_vertices,
    invert_word,
    is_rotation,
)
from orbits.surface_decomp.models import (
    CwAutomorphism,
    CwComplex,
    KerSActReport,
    LefschetzReport,
    SphereLiftReport,
)

logger = logging.getLogger(__name__)


def _is_permutation(targets: List[int], size: int) -> bool:
    return sorted(targets) == list(range(size))


def require_cellular(w: CwAutomorphism) -> None:
    """
    Raise NonCellularError unless w permutes cells compatibly with incidence.

    Every edge must carry its endpoints to the endpoints of its image (swapped
    when the sign is −1), and every face word must map onto a rotation of its
    image face's word, inverted when the face sign is −1.
    """
    cx = w.complex
    V, E, F = cx.counts
    if (len(w.vertex_map), len(w.edge_map), len(w.face_map)) != (V, E, F):
        raise NonCellularError("cell maps do not match the cell counts", [V, E, F])
    if not _is_permutation(list(w.vertex_map), V):
        raise NonCellularError("vertex map is not a permutation")
    for dim, cell_map, size in (("edge", w.edge_map, E), ("face", w.face_map, F)):
        if not _is_permutation([t for t, _ in cell_map], size):
            raise NonCellularError(f"{dim} map is not a permutation")
        bad = next((i for i, (_, s) in enumerate(cell_map) if s not in (1, -1)), None)
        if bad is not None:
            raise NonCellularError(f"{dim} {bad} has sign {cell_map[bad][1]}", [bad])

    for e, (tail, head) in enumerate(cx.edges):
        target, sign = w.edge_map[e]
        target_tail, target_head = cx.edges[target]
        if sign < 0:
            target_tail, target_head = target_head, target_tail
        if w.vertex_map[tail] != target_tail or w.vertex_map[head] != target_head:
            raise NonCellularError(f"edge {e} is not carried onto the endpoints of edge {target}", [e, target])

    for f, word in enumerate(cx.faces):
        target, sign = w.face_map[f]
        image = [(w.edge_map[abs(x) - 1][0] + 1) * w.edge_map[abs(x) - 1][1] * (1 if x > 0 else -1) for x in word]
        expected = cx.faces[target] if sign > 0 else invert_word(cx.faces[target])
        if not is_rotation(image, expected):
            raise NonCellularError(f"boundary of face {f} does not map onto face {target} with sign {sign:+d}", [f, target])


def lefschetz_number(counts: Dict[str, int]) -> int:
    return counts["c0+"] - (counts["c1+"] - counts["c1-"]) + (counts["c2+"] - counts["c2-"])


def lefschetz_check(w: CwAutomorphism) -> LefschetzReport:
    """
    Count fixed cells and test 1 = c₀⁺ − (c₁⁺ − c₁⁻) + (c₂⁺ − c₂⁻).

    Raises:
        NonCellularError: w does not respect incidence
    """
    require_cellular(w)
    counts = w.fixed_counts()
    chi = w.complex.euler_characteristic
    number = lefschetz_number(counts)
    report = LefschetzReport(counts=counts, euler_characteristic=chi, lefschetz_number=number, holds=chi == 1 and number == 1)
    logger.debug("Lefschetz number %d (χ = %d) for η = %s", number, chi, w.eta)
    return report


def ker_s_act_probe(w: CwAutomorphism) -> KerSActReport:
    """
    Evaluate the seven equivalent descriptions of acting trivially.

    (a) every disk is fixed with orientation; (b) c₂⁺ = n + 1 and c₂⁻ = 0;
    (c) c₂⁺ ≥ 2; (d) every cell is fixed with orientation; (e) c₁⁺ = c₁ and
    c₁⁻ = 0; (f) every boundary edge of C₀ is fixed with orientation;
    (g) c₁⁺ > 0. On automorphisms coming from the geometric situation these
    are all true or all false.
    """
    cx = w.complex
    counts = w.fixed_counts()
    n = len(cx.faces) - 1

    def fixed_plus(cell_map, i):
        return tuple(cell_map[i]) == (i, 1)

    conditions = {
        "a": all(fixed_plus(w.face_map, f) for f in range(1, n + 1)),
        "b": counts["c2+"] == n + 1 and counts["c2-"] == 0,
        "c": counts["c2+"] >= 2,
        "d": (
            all(v == t for v, t in enumerate(w.vertex_map))
            and all(fixed_plus(w.edge_map, e) for e in range(len(w.edge_map)))
            and all(fixed_plus(w.face_map, f) for f in range(len(w.face_map)))
        ),
        "e": counts["c1+"] == counts["c1"] and counts["c1-"] == 0,
        "f": all(fixed_plus(w.edge_map, abs(x) - 1) for x in cx.faces[0]) if cx.faces else False,
        "g": counts["c1+"] > 0,
    }
    agree = len(set(conditions.values())) == 1
    eta_consistent = None
    if w.eta is not None and w.b:
        eta_consistent = conditions["f"] == (w.eta % w.b == 0)
    if not agree:
        logger.info("KerSAct conditions disagree: %s", conditions)
    return KerSActReport(conditions=conditions, agree=agree, eta_consistent=eta_consistent)


# --- orientation double cover ---

def _occurrences(cx: CwComplex) -> Dict[int, List[Tuple[int, int, int]]]:
    """edge -> [(face, position, sign)] in face order."""
    where: Dict[int, List[Tuple[int, int, int]]] = {e: [] for e in range(len(cx.edges))}
    for f, word in enumerate(cx.faces):
        for p, x in enumerate(word):
            where[abs(x) - 1].append((f, p, 1 if x > 0 else -1))
    return where


class SphereLift:
    """
    The orientation double cover of a partition and lifts of its automorphisms.

    Face F lifts to F₊ (index 2F) and F₋ (2F + 1), with words w and w⁻¹.
    Edge e lifts to e^λ (index 2e for λ = +1, 2e + 1 for −1). The occurrence
    of e in its first face F₁ is lifted to e^σ inside F₁,σ; the occurrence in
    the second face F₂,σ′ is lifted to e^λ with λ = −σ′·ε₁·ε₂, so adjacent
    lifted faces induce opposite orientations on every lifted edge.
    """

    def __init__(self, cx: CwComplex):
        if check_edge_incidence(cx.faces, len(cx.edges)) is not None:
            raise ConstructionError("the double cover needs every edge in exactly two distinct faces")
        self.base = cx
        self.where = _occurrences(cx)
        faces = []
        for f in range(len(cx.faces)):
            for sigma in (1, -1):
                faces.append(self._lifted_word(f, sigma))
        vertex_count, edges = derive_vertices(2 * len(cx.edges), faces)
        self.complex = CwComplex(edges=edges, faces=faces, vertex_count=vertex_count, mode=f"{cx.mode}-lift")

    def edge_sheet(self, f: int, p: int, sigma: int) -> int:
        """λ for the occurrence at position p of face f inside the sheet σ."""
        x = self.base.faces[f][p]
        (f1, p1, s1), (_, _, s2) = self.where[abs(x) - 1]
        if (f, p) == (f1, p1):
            return sigma
        return -sigma * s1 * s2

    @staticmethod
    def lift_index(cell: int, sheet: int) -> int:
        return 2 * cell + (0 if sheet > 0 else 1)

    def _lifted_word(self, f: int, sigma: int) -> List[int]:
        word = [
            (self.lift_index(abs(x) - 1, self.edge_sheet(f, p, sigma)) + 1) * (1 if x > 0 else -1)
            for p, x in enumerate(self.base.faces[f])
        ]
        return word if sigma > 0 else invert_word(word)

    def lift(self, w: CwAutomorphism) -> CwAutomorphism:
        """The orientation-preserving lift h̃ of w."""
        cx = self.base
        face_map = []
        for f in range(len(cx.faces)):
            target, sign = w.face_map[f]
            for sigma in (1, -1):
                face_map.append((self.lift_index(target, sigma * sign), 1))

        edge_map: List[Tuple[int, int]] = [(0, 1)] * (2 * len(cx.edges))
        for e in range(len(cx.edges)):
            f1, p1, _ = self.where[e][0]
            target_edge, edge_sign = w.edge_map[e]
            target_face, face_sign = w.face_map[f1]
            positions = [p for p, x in enumerate(cx.faces[target_face]) if abs(x) - 1 == target_edge]
            if len(positions) != 1:
                raise NonCellularError(f"edge {e} has no unique image inside face {target_face}", [e, target_face])
            for lam in (1, -1):
                sheet = self.edge_sheet(target_face, positions[0], lam * face_sign)
                edge_map[self.lift_index(e, lam)] = (self.lift_index(target_edge, sheet), edge_sign)

        vertex_map: List[Optional[int]] = [None] * self.complex.vertex_count
        for e, (tail, head) in enumerate(self.complex.edges):
            target, sign = edge_map[e]
            target_tail, target_head = self.complex.edges[target]
            if sign < 0:
                target_tail, target_head = target_head, target_tail
            for v, image in ((tail, target_tail), (head, target_head)):
                if vertex_map[v] not in (None, image):
                    raise NonCellularError(f"lifted vertex {v} has two images", [v])
                vertex_map[v] = image
        lifted = CwAutomorphism(
            complex=self.complex, vertex_map=vertex_map, edge_map=edge_map, face_map=face_map, eta=w.eta, b=w.b
        )
        require_cellular(lifted)
        return lifted


def sphere_lift_check(w: CwAutomorphism) -> SphereLiftReport:
    """
    Lift w to the sphere and compare fixed-cell counts.

    Checks χ(S²) = 2, c_i⁺(h̃) = 2c_i⁺(h̄) and c_i⁻(h̃) = 0 for i = 1, 2, and
    2 = c₀⁺(h̃) − c₁⁺(h̃) + c₂⁺(h̃).

    Raises:
        NonCellularError: w or its lift does not respect incidence
    """
    require_cellular(w)
    cover = SphereLift(w.complex)
    lifted = cover.lift(w)
    base_counts = w.fixed_counts()
    counts = lifted.fixed_counts()
    doubling = all(
        counts[f"c{i}+"] == 2 * base_counts[f"c{i}+"] and counts[f"c{i}-"] == 0 for i in (1, 2)
    )
    identity = counts["c0+"] - counts["c1+"] + counts["c2+"] == 2 and counts["c1-"] == counts["c2-"] == 0
    return SphereLiftReport(
        counts=counts,
        base_counts=base_counts,
        euler_characteristic=cover.complex.euler_characteristic,
        doubling_holds=doubling,
        identity_holds=identity,
    )


def tamper(w: CwAutomorphism, rng: Random) -> CwAutomorphism:
    """Flip the orientation sign of one random edge or face."""
    cells = [("edge", e) for e in range(len(w.edge_map))] + [("face", f) for f in range(len(w.face_map))]
    kind, index = rng.choice(cells)
    if kind == "edge":
        edge_map = list(w.edge_map)
        target, sign = edge_map[index]
        edge_map[index] = (target, -sign)
        return w.model_copy(update={"edge_map": edge_map})
    face_map = list(w.face_map)
    target, sign = face_map[index]
    face_map[index] = (target, -sign)
    return w.model_copy(update={"face_map": face_map})


def tamper_detected(w: CwAutomorphism) -> bool:
    """True when w is rejected as non-cellular or fails the Lefschetz identity."""
    try:
        return not lefschetz_check(w).holds
    except NonCellularError:
        return True
