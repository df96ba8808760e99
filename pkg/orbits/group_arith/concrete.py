"""
Finite groups given by an explicit multiplication table.

A ConcreteGroup is the oracle carrier for every exhaustive check: elements
are addressed by index, the table is a numpy array, and subgroup, quotient
and abelianization computations work directly on indices.
"""
import logging
from collections import deque
from random import Random
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from core import config
from orbits.errors import HypothesisViolation, NotNormalError

logger = logging.getLogger(__name__)


class ConcreteGroup:
    """
    Finite group on elements[0..n-1] with table[i, j] = index of elements[i]·elements[j].
    """

    def __init__(
        self,
        elements: Sequence[Hashable],
        table: np.ndarray,
        name: str = "",
        verify: bool = True,
        seed: Optional[int] = None,
    ):
        self.elements = list(elements)
        self.index: Dict[Hashable, int] = {x: i for i, x in enumerate(self.elements)}
        self.table = np.asarray(table, dtype=np.int64)
        self.order = len(self.elements)
        self.name = name
        if self.table.shape != (self.order, self.order):
            raise HypothesisViolation("table shape", [list(self.table.shape), self.order])
        self._check_latin_square()
        self.identity = self._find_identity()
        self.inverses = self._find_inverses()
        if verify:
            self.verify_associativity(seed=seed)

    # --- construction ---

    @classmethod
    def from_operation(
        cls,
        elements: Sequence[Hashable],
        op: Callable[[Hashable, Hashable], Hashable],
        name: str = "",
        verify: bool = True,
    ) -> "ConcreteGroup":
        index = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                product = op(x, y)
                if product not in index:
                    raise HypothesisViolation("closure", [x, y, product])
                table[i, j] = index[product]
        return cls(elements, table, name=name, verify=verify)

    @classmethod
    def cyclic(cls, m: int) -> "ConcreteGroup":
        r = np.arange(m)
        return cls(list(range(m)), (r[:, None] + r[None, :]) % m, name=f"Z{m}")

    # --- axioms ---

    def _check_latin_square(self):
        expected = np.arange(self.order)
        rows_ok = np.all(np.sort(self.table, axis=1) == expected)
        cols_ok = np.all(np.sort(self.table, axis=0) == expected[:, None])
        if not (rows_ok and cols_ok):
            raise HypothesisViolation("latin square")

    def _find_identity(self) -> int:
        expected = np.arange(self.order)
        for e in range(self.order):
            if np.array_equal(self.table[e], expected) and np.array_equal(self.table[:, e], expected):
                return e
        raise HypothesisViolation("identity")

    def _find_inverses(self) -> np.ndarray:
        inverses = np.argmax(self.table == self.identity, axis=1)
        if not np.all(self.table[inverses, np.arange(self.order)] == self.identity):
            raise HypothesisViolation("inverses")
        return inverses

    def verify_associativity(self, seed: Optional[int] = None) -> None:
        """Full check up to ORBITS_ASSOC_FULL_CAP, sampled triples above it."""
        t = self.table
        if self.order <= config.ASSOC_FULL_CAP:
            chunk = max(1, 4_000_000 // max(1, self.order * self.order))
            for start in range(0, self.order, chunk):
                rows = np.arange(start, min(self.order, start + chunk))
                left = t[t[rows]]           # (a·b)·c
                right = t[rows][:, t]       # a·(b·c)
                if not np.array_equal(left, right):
                    a, b, c = np.argwhere(left != right)[0]
                    raise HypothesisViolation("associativity", [int(rows[a]), int(b), int(c)])
            logger.debug("Associativity verified exhaustively for order %d", self.order)
            return
        rng = np.random.default_rng(config.SEED if seed is None else seed)
        a, b, c = rng.integers(0, self.order, size=(3, config.ASSOC_SAMPLES))
        bad = np.nonzero(t[t[a, b], c] != t[a, t[b, c]])[0]
        if bad.size:
            i = bad[0]
            raise HypothesisViolation("associativity", [int(a[i]), int(b[i]), int(c[i])])
        logger.debug("Associativity spot-checked on %d triples", config.ASSOC_SAMPLES)

    # --- element helpers ---

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def inv(self, i: int) -> int:
        return int(self.inverses[i])

    def power(self, i: int, n: int) -> int:
        if n < 0:
            i, n = self.inv(i), -n
        result, base = self.identity, i
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def power_map(self, n: int) -> np.ndarray:
        """x ↦ xⁿ for every element at once."""
        result = np.full(self.order, self.identity, dtype=np.int64)
        base = np.arange(self.order)
        while n:
            if n & 1:
                result = self.table[result, base]
            base = self.table[base, base]
            n >>= 1
        return result

    def element_order(self, i: int) -> int:
        current, n = i, 1
        while current != self.identity:
            current = self.mul(current, i)
            n += 1
        return n

    def conjugate(self, g: int, x: int) -> int:
        """g x g⁻¹."""
        return self.mul(self.mul(g, x), self.inv(g))

    # --- subgroups ---

    def generated_subgroup(self, generators: Iterable[int]) -> FrozenSet[int]:
        gens = list(generators)
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def normal_closure(self, generators: Iterable[int]) -> FrozenSet[int]:
        gens = np.array(sorted(set(generators)) or [self.identity])
        g = np.arange(self.order)[:, None]
        conjugates = self.table[self.table[g, gens[None, :]], self.inverses[g]]
        return self.generated_subgroup(np.unique(conjugates).tolist())

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        members = sorted(set(subset))
        if not members or self.identity not in members:
            return False
        idx = np.array(members)
        products = self.table[np.ix_(idx, self.inverses[idx])]
        return bool(np.isin(products, idx).all())

    def normality_witness(self, subset: Iterable[int]) -> Optional[Tuple[int, int]]:
        """(g, s) with g s g⁻¹ outside the subgroup, or None when normal."""
        members = np.array(sorted(set(subset)))
        for g in range(self.order):
            conj = self.table[self.table[g, members], self.inverses[g]]
            outside = ~np.isin(conj, members)
            if outside.any():
                return g, int(members[np.argmax(outside)])
        return None

    def is_normal(self, subset: Iterable[int]) -> bool:
        return self.normality_witness(subset) is None

    def commutator_subgroup(self) -> FrozenSet[int]:
        a = np.arange(self.order)[:, None]
        b = np.arange(self.order)[None, :]
        ab = self.table[a, b]
        comms = self.table[self.table[ab, self.inverses[a]], self.inverses[b]]
        return self.generated_subgroup(np.unique(comms).tolist())

    # --- quotients ---

    def coset_map(self, normal: Iterable[int]) -> Tuple[np.ndarray, List[int]]:
        """Coset id per element and one representative per coset, ids in order of first appearance."""
        members = sorted(set(normal))
        labels = np.full(self.order, -1, dtype=np.int64)
        reps: List[int] = []
        for x in range(self.order):
            if labels[x] >= 0:
                continue
            labels[self.table[x, members]] = len(reps)
            reps.append(x)
        return labels, reps

    def quotient(self, normal: Iterable[int], name: str = "") -> Tuple["ConcreteGroup", np.ndarray]:
        """G/N and the projection G → G/N as an index array."""
        normal = frozenset(normal)
        witness = self.normality_witness(normal)
        if witness is not None:
            raise NotNormalError(name or "N", list(witness))
        labels, reps = self.coset_map(normal)
        r = np.array(reps)
        table = labels[self.table[np.ix_(r, r)]]
        return ConcreteGroup(list(range(len(reps))), table, name=name, verify=False), labels

    def subgroup_group(self, subset: Iterable[int], name: str = "") -> Tuple["ConcreteGroup", List[int]]:
        """The subgroup as a ConcreteGroup, plus the inclusion as a list of parent indices."""
        members = sorted(set(subset))
        idx = np.array(members)
        lookup = np.full(self.order, -1, dtype=np.int64)
        lookup[idx] = np.arange(len(members))
        table = lookup[self.table[np.ix_(idx, idx)]]
        return ConcreteGroup(members, table, name=name, verify=False), members

    # --- abelian invariants ---

    def abelian_invariants(self) -> List[int]:
        """Invariant factors d₁ | d₂ | … of G/[G,G], trivial factors omitted."""
        abelian, _ = self.quotient(self.commutator_subgroup())
        return abelian._abelian_type()

    def _abelian_type(self) -> List[int]:
        primary: Dict[int, List[int]] = {}
        for p, k in factorint(self.order).items():
            omega = [1]
            for j in range(1, k + 1):
                omega.append(int(np.count_nonzero(self.power_map(p ** j) == self.identity)))
            # log_p |Ω_j| counts cyclic factors of order >= p^i summed over i <= j
            s = [round(np.log(w) / np.log(p)) if w > 1 else 0 for w in omega]
            at_least = [s[j] - s[j - 1] for j in range(1, k + 1)] + [0]
            exponents = []
            for j in range(1, k + 1):
                exponents.extend([j] * (at_least[j - 1] - at_least[j]))
            primary[p] = sorted(exponents, reverse=True)
        width = max((len(v) for v in primary.values()), default=0)
        factors = []
        for i in range(width):
            d = 1
            for p, exps in primary.items():
                if i < len(exps):
                    d *= p ** exps[i]
            factors.append(d)
        return sorted(f for f in factors if f > 1)

    def random_index(self, rng: Random) -> int:
        return rng.randrange(self.order)

    def __repr__(self) -> str:
        return f"ConcreteGroup({self.name or '?'}, order={self.order})"
