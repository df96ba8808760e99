"""
Decomposition-to-CW constructor.

The projective plane is cut into the cylinder cell C₀ (a disk capping the
boundary) and the complement, an annulus whose inner circle is folded by the
half-turn t ↦ t + b/2. The annulus is split into b columns; the generator with
η = 1 rotates it by one column.

    b = 1              C₀ = PQ, the remaining disk PQ⁻¹ is fanned into d pieces
    b odd              d stacked T1 layers; the folded inner circle has b edges
    b even, d ≥ 1      d T1 layers above e arches per column; each T2 disk is the
                       union of the regions under arches U(k, r) and U(k, r + m)
    b even, d = 0      C₀ sits directly on the arches
    b even, e = 0      (parity-invalid) one folded inner edge per column pair

Faces are cyclic words of signed 1-based edge indices; face 0 is C₀ and face
i is disk i, oriented as the decomposition orients it.
"""
import logging
from dataclasses import dataclass, field
from random import Random
from typing import Dict, List, Optional, Sequence, Tuple

from orbits.errors import ConstructionError, InvalidDecompositionError
from orbits.group_core.grammar import parse_expr
from orbits.reports import CheckStatus
from orbits.surface_decomp.models import (
    CwAutomorphism,
    CwComplex,
    DiskRecord,
    MobiusDecomposition,
    OrbitRecord,
    OrbitType,
)
from orbits.surface_decomp.orbits import enumerate_orbits
from orbits.surface_decomp.validator import validate_decomposition

logger = logging.getLogger(__name__)

EdgeKey = Tuple
Occurrence = Tuple[EdgeKey, int]

# checks that must pass even when an invalid decomposition is built on purpose
STRUCTURAL_CHECKS = ("a divides c", "sigma entries", "sigma bijective", "free action")

DISK_GROUP_POOL = ("1", "Z", "Z x Z", "Wr(Z, 2)", "Wr(Z x Z, 3)", "Z x Wr(Z, 2)")


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in items}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x


# --- words ---

def invert_word(word: Sequence[int]) -> List[int]:
    return [-x for x in reversed(word)]


def canonical_rotation(word: Sequence[int]) -> Tuple[int, ...]:
    """Lexicographically least cyclic rotation."""
    if not word:
        return ()
    return min(tuple(word[i:]) + tuple(word[:i]) for i in range(len(word)))


def is_rotation(word: Sequence[int], other: Sequence[int]) -> bool:
    return len(word) == len(other) and canonical_rotation(word) == canonical_rotation(other)


def derive_vertices(edge_count: int, faces: Sequence[Sequence[int]]) -> Tuple[int, List[Tuple[int, int]]]:
    """
    Identify edge endpoints met at the corners of every face.

    Endpoint 2e is the tail and 2e + 1 the head of edge e. Vertices are
    numbered by first appearance over the endpoints.
    """
    uf = UnionFind(range(2 * edge_count))

    def start(x):
        e = abs(x) - 1
        return 2 * e if x > 0 else 2 * e + 1

    def end(x):
        e = abs(x) - 1
        return 2 * e + 1 if x > 0 else 2 * e

    for word in faces:
        for k, x in enumerate(word):
            uf.union(end(word[k - 1]), start(x))
    numbering: Dict[int, int] = {}
    for node in range(2 * edge_count):
        numbering.setdefault(uf.find(node), len(numbering))
    edges = [(numbering[uf.find(2 * e)], numbering[uf.find(2 * e + 1)]) for e in range(edge_count)]
    return len(numbering), edges


def check_edge_incidence(faces: Sequence[Sequence[int]], edge_count: int) -> Optional[int]:
    """First edge (0-based) not lying in exactly two distinct faces, or None."""
    where: Dict[int, List[int]] = {e: [] for e in range(edge_count)}
    for f, word in enumerate(faces):
        for x in word:
            where[abs(x) - 1].append(f)
    for e, owners in where.items():
        if len(owners) != 2 or owners[0] == owners[1]:
            return e
    return None


# --- the model ---

@dataclass
class CwModel:
    """A CwComplex together with the column labels needed to move it."""
    decomposition: MobiusDecomposition
    complex: CwComplex
    edge_keys: List[EdgeKey]
    b: int
    mode: str
    edge_index: Dict[EdgeKey, int] = field(default_factory=dict)

    def __post_init__(self):
        self.edge_index = {key: i for i, key in enumerate(self.edge_keys)}

    @property
    def m(self) -> int:
        return self.b // 2

    def translate(self, key: EdgeKey, j: int) -> EdgeKey:
        """The edge key after rotating the annulus by j columns."""
        kind, b = key[0], self.b
        if kind == "O":
            return (kind, (key[1] + j) % b, key[2])
        if kind in ("V", "H"):
            return (kind, key[1], (key[2] + j) % b)
        if kind == "U":
            return (kind, key[1], (key[2] + j) % b, key[3])
        if kind == "I":
            return (kind, (key[1] + 2 * j) % b)
        if kind == "W":
            return (kind, (key[1] + j) % self.m)
        # fan edges (b = 1): a full turn is the identity
        return key


class _ModelBuilder:
    def __init__(self, d: MobiusDecomposition, records: List[OrbitRecord]):
        self.d = d
        self.b = d.b
        self.t1 = [r for r in records if r.type == OrbitType.T1]
        self.t2 = [r for r in records if r.type == OrbitType.T2]
        self.mode = self._choose_mode()

    def _choose_mode(self) -> str:
        b, depth, e, a = self.b, len(self.t1), len(self.t2), self.d.a
        if self.d.n == 0:
            raise ConstructionError("the trivial decomposition (n = 0) has no disk cells to build")
        if b == 1:
            if a < max(2, depth):
                raise ConstructionError(f"the fan model needs c >= max(2, d), got c = {self.d.c}, d = {depth}")
            return "fan"
        if b % 2 == 1:
            if e:
                raise ConstructionError("T2 orbits need an even b")
            return "odd"
        if e == 0:
            return "folded"
        if depth == 0:
            if a < e:
                raise ConstructionError(f"arches under C₀ need a >= e, got a = {a}, e = {e}")
            return "arch"
        return "comb"

    # -- slots --

    def slot_words(self) -> Tuple[List[Occurrence], Dict[Tuple, List[Occurrence]]]:
        if self.mode == "fan":
            return self._fan()
        slots = {}
        for layer in range(1, len(self.t1) + 1):
            for i in range(self.b):
                slots[("D", layer, i)] = self._column_word(layer, i)
        for k in range(1, len(self.t2) + 1):
            for r in range(self.b // 2):
                slots[("E", k, r)] = self._t2_word(k, r)
        return self._c0_word(), slots

    def slot_of_disk(self) -> Dict[int, Tuple[Tuple, int]]:
        """disk -> (slot, orientation of the disk relative to the slot word)."""
        placement = {}
        for layer, record in enumerate(self.t1, start=1):
            for i, (disk, sign) in enumerate(zip(record.disks, record.signs)):
                placement[disk] = (("F", layer) if self.mode == "fan" else ("D", layer, i), sign)
        for k, record in enumerate(self.t2, start=1):
            for r, (disk, sign) in enumerate(zip(record.disks, record.signs)):
                placement[disk] = (("E", k, r), sign)
        return placement

    def _pieces(self, k: int) -> range:
        if self.mode == "arch" and k == 1:
            return range(self.d.a - len(self.t2) + 1)
        return range(1)

    def _c0_word(self) -> List[Occurrence]:
        if self.mode == "arch":
            word = []
            for i in range(self.b):
                for k in range(1, len(self.t2) + 1):
                    word.extend((("U", k, i, p), 1) for p in self._pieces(k))
            return word
        return [(("O", i, p), 1) for i in range(self.b) for p in range(self.d.a)]

    def _column_word(self, layer: int, i: int) -> List[Occurrence]:
        b, depth = self.b, len(self.t1)
        if layer < depth:
            bottom = [(("H", layer, i), 1)]
        elif self.mode == "odd":
            bottom = [(("I", (2 * i) % b), 1), (("I", (2 * i + 1) % b), 1)]
        elif self.mode == "folded":
            bottom = [(("W", i % (b // 2)), 1)]
        else:
            bottom = [(("U", k, i, 0), 1) for k in range(1, len(self.t2) + 1)]
        if layer == 1:
            top = [(("O", i, p), -1) for p in reversed(range(self.d.a))]
        else:
            top = [(("H", layer - 1, i), -1)]
        return bottom + [(("V", layer, (i + 1) % b), 1)] + top + [(("V", layer, i), -1)]

    def _t2_word(self, k: int, r: int) -> List[Occurrence]:
        m = self.b // 2
        pieces = self._pieces(k)
        return [(("U", k, r + m, p), 1) for p in pieces] + [(("U", k, r, p), -1) for p in reversed(pieces)]

    def _fan(self):
        c, depth = self.d.c, len(self.t1)
        half = c - c // 2
        P = [("P", p) for p in range(half)]
        Q = [("Q", q) for q in range(c - half)]
        c0 = [(key, 1) for key in P + Q]
        w = [(key, 1) for key in P] + [(key, -1) for key in reversed(Q)]
        slots = {}
        if depth == 1:
            slots[("F", 1)] = w
            return c0, slots
        slots[("F", 1)] = [w[0], (("C", 1), -1)]
        for piece in range(1, depth - 1):
            slots[("F", piece + 1)] = [(("C", piece), 1), w[piece], (("C", piece + 1), -1)]
        slots[("F", depth)] = [(("C", depth - 1), 1)] + w[depth - 1:]
        return c0, slots


def _invert_occurrences(word: List[Occurrence]) -> List[Occurrence]:
    return [(key, -sign) for key, sign in reversed(word)]


def _records_for(d: MobiusDecomposition, allow_invalid: bool) -> List[OrbitRecord]:
    report = validate_decomposition(d)
    if allow_invalid:
        structural = [report.check(name) for name in STRUCTURAL_CHECKS]
        if any(c is None or c.status != CheckStatus.PASS for c in structural):
            raise ConstructionError("even an invalid model needs b = c/a and a free bijective sigma")
    elif not report.passed:
        raise InvalidDecompositionError(report)
    return enumerate_orbits(d)


def build_cw_model(d: MobiusDecomposition, allow_invalid: bool = False) -> CwModel:
    """
    Synthesize the CW partition of the projective plane for d.

    Raises:
        InvalidDecompositionError: d is invalid and allow_invalid is False
        ConstructionError: the model preconditions fail (n = 0, c too small)
    """
    builder = _ModelBuilder(d, _records_for(d, allow_invalid))
    c0, slots = builder.slot_words()
    placement = builder.slot_of_disk()

    words = [c0]
    for disk in range(1, d.n + 1):
        slot, sign = placement[disk]
        words.append(slots[slot] if sign > 0 else _invert_occurrences(slots[slot]))

    keys: List[EdgeKey] = []
    index: Dict[EdgeKey, int] = {}
    faces = []
    for word in words:
        face = []
        for key, sign in word:
            if key not in index:
                index[key] = len(keys)
                keys.append(key)
            face.append(sign * (index[key] + 1))
        faces.append(face)

    bad_edge = check_edge_incidence(faces, len(keys))
    if bad_edge is not None:
        raise ConstructionError(f"edge {keys[bad_edge]} does not border exactly two distinct faces")
    vertex_count, edges = derive_vertices(len(keys), faces)
    complex_ = CwComplex(
        edges=edges,
        faces=faces,
        vertex_count=vertex_count,
        mode=builder.mode,
        edge_labels=["".join(str(part) for part in key) for key in keys],
    )
    if complex_.euler_characteristic != 1:
        raise ConstructionError(f"model has Euler characteristic {complex_.euler_characteristic}, expected 1")
    logger.debug("Built %s model: V, E, F = %s", builder.mode, complex_.counts)
    return CwModel(decomposition=d, complex=complex_, edge_keys=keys, b=d.b, mode=builder.mode)


def _face_lookup(faces: Sequence[Sequence[int]]) -> Dict[Tuple[int, ...], int]:
    return {canonical_rotation(word): f for f, word in enumerate(faces)}


def cw_automorphism(model: CwModel, j: int) -> CwAutomorphism:
    """
    The cellular automorphism realizing an element with η = j.

    Edges follow the column rotation with sign +1; vertex and face maps are
    read off the image words. The disk action is checked against sigma^j.

    Raises:
        ConstructionError: the rotation does not close up on the model
    """
    cx, d = model.complex, model.decomposition
    edge_map = []
    for key in model.edge_keys:
        target = model.translate(key, j)
        if target not in model.edge_index:
            raise ConstructionError(f"edge {key} has no image {target}")
        edge_map.append((model.edge_index[target], 1))

    lookup = _face_lookup(cx.faces)
    face_map = []
    for f, word in enumerate(cx.faces):
        image = [(edge_map[abs(x) - 1][0] + 1) * (1 if x > 0 else -1) for x in word]
        forward = lookup.get(canonical_rotation(image))
        if forward is not None:
            face_map.append((forward, 1))
            continue
        backward = lookup.get(canonical_rotation(invert_word(image)))
        if backward is None:
            raise ConstructionError(f"face {f} has no image under the shift by {j}")
        face_map.append((backward, -1))

    vertex_map: List[Optional[int]] = [None] * cx.vertex_count
    for e, (tail, head) in enumerate(cx.edges):
        target_tail, target_head = cx.edges[edge_map[e][0]]
        for v, w in ((tail, target_tail), (head, target_head)):
            if vertex_map[v] not in (None, w):
                raise ConstructionError(f"vertex {v} is sent to both {vertex_map[v]} and {w}")
            vertex_map[v] = w

    shift = j % model.b
    for disk in range(1, d.n + 1):
        expected = d.act_power(disk, 1, shift)
        if face_map[disk] != expected:
            raise ConstructionError(f"disk {disk} goes to {face_map[disk]} but sigma^{j} gives {expected}")
    return CwAutomorphism(
        complex=cx, vertex_map=vertex_map, edge_map=edge_map, face_map=face_map, eta=j, b=model.b
    )


# --- synthetic decompositions ---

def canonical_decomposition(
    b: int,
    t1_groups: Sequence,
    t2_groups: Sequence = (),
    a: int = 1,
    cylinder_group="Z",
    gamma: Optional[str] = None,
    name: Optional[str] = None,
) -> MobiusDecomposition:
    """
    Disks numbered orbit by orbit in right-shift order, all oriented alike.

    Each T1 orbit takes b consecutive disks, each T2 orbit b/2 of them; the
    last disk of a T2 orbit returns to the first reversed. Parity is not
    enforced, so (b even, no T2 orbits) gives the adversarial model.
    """
    disks, sigma = [], []
    for group in t1_groups:
        start = len(disks)
        for i in range(b):
            disks.append(DiskRecord(group=group))
            sigma.append((start + (i + 1) % b + 1, 1))
    m = b // 2
    for group in t2_groups:
        if b % 2:
            raise ConstructionError("T2 orbits need an even b")
        start = len(disks)
        for r in range(m):
            disks.append(DiskRecord(group=group))
            sigma.append((start + (r + 1) % m + 1, 1 if r < m - 1 else -1))
    return MobiusDecomposition(
        cylinder_group=cylinder_group, a=a, c=a * b, disks=disks, sigma=sigma, gamma=gamma, name=name
    )


def relabel(d: MobiusDecomposition, order: Sequence[int], flips: Sequence[int]) -> MobiusDecomposition:
    """
    Renumber disk i as order[i-1] and reorient it by flips[i-1].

    The signed action transforms as sigma'(y, +1) = (t', δ·ε_y·ε_t).
    """
    n = d.n
    new_disks: List[Optional[DiskRecord]] = [None] * n
    new_sigma: List[Optional[Tuple[int, int]]] = [None] * n
    for old in range(1, n + 1):
        target, delta = d.sigma[old - 1]
        new = order[old - 1]
        new_disks[new - 1] = d.disks[old - 1]
        new_sigma[new - 1] = (order[target - 1], delta * flips[old - 1] * flips[target - 1])
    return d.model_copy(update={"disks": new_disks, "sigma": new_sigma, "sigma_negative": None})


def random_decomposition(
    rng: Random, max_b: int = 6, max_orbits: int = 3, allow_invalid: bool = False
) -> MobiusDecomposition:
    """
    A random valid decomposition that the CW constructor accepts.

    With allow_invalid, even b may come without T2 orbits.
    """
    b = rng.randint(1, max_b)
    if b % 2:
        depth, e = rng.randint(1, max_orbits), 0
    elif allow_invalid and rng.random() < 0.5:
        depth, e = rng.randint(1, max_orbits), 0
    else:
        depth, e = rng.randint(0, max_orbits), rng.randint(1, max_orbits)
    if b == 1:
        lower = max(2, depth)
    elif b % 2 == 0 and depth == 0:
        lower = e
    else:
        lower = 1
    a = rng.randint(lower, lower + 2)

    def pick():
        return parse_expr(rng.choice(DISK_GROUP_POOL))

    d = canonical_decomposition(
        b,
        [pick() for _ in range(depth)],
        [pick() for _ in range(e)],
        a=a,
        cylinder_group=rng.choice(("Z", "Z x Z", "Wr(Z, 3)")),
    )
    order = list(range(1, d.n + 1))
    rng.shuffle(order)
    flips = [rng.choice((1, -1)) for _ in range(d.n)]
    return relabel(d, order, flips)
