"""
Exact element arithmetic for every GroupExpr.

Element shapes mirror the expression:

    Unit            ()
    IntLine         k
    Cyclic(m)       r, 0 <= r < m
    Direct          (x_1, ..., x_s)
    WrZ(G, m)       ((a_0, ..., a_{m-1}), k)
    WrZm(G, m)      ((a_0, ..., a_{m-1}), r mod m)
    WrZZ(G, m, n)   (((a_00, ...), ..., (..., a_{m-1,n-1})), (k, l))
    WrZZmn(G, m, n) (matrix, (r mod m, s mod n))
    TwistedWrZ      ((c_0, ..., c_{2m-1}), (d_0, ..., d_{m-1}), k)
    TwistedWrZm     same with k reduced mod 2m

The ℤ generator acts on tuples by shifting coordinates to the left:
(a;k)(b;l) = (a_i * b_{i+k}; k+l).
"""
import logging
from functools import lru_cache
from itertools import product
from random import Random
from typing import Any, List, Union

from orbits.errors import ShapeMismatchError
from orbits.group_core.models import (
    Cyclic,
    Direct,
    FactorPermutation,
    IdentityInvolution,
    IntLine,
    TableInvolution,
    TwistedWrZ,
    TwistedWrZm,
    Unit,
    WrZ,
    WrZm,
    WrZZ,
    WrZZmn,
    factors_of,
    finite_order,
)

logger = logging.getLogger(__name__)

INFINITE_OR_EXCEEDS = "infinite-or-exceeds-bound"


# --- shape checking ---

def check_shape(G, u) -> None:
    """Raise ShapeMismatchError unless u is a well-formed element of G."""
    _check(G, u, "element")


def _fail(path: str, expected: str, got: Any):
    raise ShapeMismatchError(f"{path}: expected {expected}, got {got!r}")


def _check_tuple(u, length: int, path: str):
    if not isinstance(u, tuple) or len(u) != length:
        _fail(path, f"tuple of length {length}", u)


def _check(G, u, path: str) -> None:
    if isinstance(G, Unit):
        if u != ():
            _fail(path, "()", u)
    elif isinstance(G, IntLine):
        if not isinstance(u, int) or isinstance(u, bool):
            _fail(path, "integer", u)
    elif isinstance(G, Cyclic):
        if not isinstance(u, int) or isinstance(u, bool) or not 0 <= u < G.m:
            _fail(path, f"residue in 0..{G.m - 1}", u)
    elif isinstance(G, Direct):
        _check_tuple(u, len(G.factors), path)
        for i, (factor, x) in enumerate(zip(G.factors, u)):
            _check(factor, x, f"{path}[{i}]")
    elif isinstance(G, (WrZ, WrZm)):
        _check_tuple(u, 2, path)
        _check_tuple(u[0], G.m, f"{path}.tuple")
        for i, x in enumerate(u[0]):
            _check(G.base, x, f"{path}.tuple[{i}]")
        _check(IntLine() if isinstance(G, WrZ) else Cyclic(G.m), u[1], f"{path}.shift")
    elif isinstance(G, (WrZZ, WrZZmn)):
        _check_tuple(u, 2, path)
        _check_tuple(u[0], G.m, f"{path}.matrix")
        for i, row in enumerate(u[0]):
            _check_tuple(row, G.n, f"{path}.matrix[{i}]")
            for j, x in enumerate(row):
                _check(G.base, x, f"{path}.matrix[{i}][{j}]")
        _check_tuple(u[1], 2, f"{path}.shift")
        if isinstance(G, WrZZ):
            _check(IntLine(), u[1][0], f"{path}.shift[0]")
            _check(IntLine(), u[1][1], f"{path}.shift[1]")
        else:
            _check(Cyclic(G.m), u[1][0], f"{path}.shift[0]")
            _check(Cyclic(G.n), u[1][1], f"{path}.shift[1]")
    elif isinstance(G, (TwistedWrZ, TwistedWrZm)):
        _check_tuple(u, 3, path)
        _check_tuple(u[0], 2 * G.m, f"{path}.c")
        _check_tuple(u[1], G.m, f"{path}.d")
        for i, x in enumerate(u[0]):
            _check(G.g, x, f"{path}.c[{i}]")
        for j, x in enumerate(u[1]):
            _check(G.h, x, f"{path}.d[{j}]")
        _check(IntLine() if isinstance(G, TwistedWrZ) else Cyclic(2 * G.m), u[2], f"{path}.shift")
    else:
        raise TypeError(f"Not a group expression: {G!r}")


# --- involutions on elements ---

def apply_involution(gamma, H, x):
    """Evaluate γ(x) for x in H."""
    if isinstance(gamma, IdentityInvolution):
        return x
    if isinstance(gamma, FactorPermutation):
        parts = factors_of(H)
        if not parts:
            return x
        if not isinstance(H, Direct):
            return apply_involution(gamma.inner[0], H, x)
        return tuple(
            apply_involution(gamma.inner[i], parts[i], x[gamma.perm[i]]) for i in range(len(parts))
        )
    if isinstance(gamma, TableInvolution):
        elements = enumerate_elements(H)
        return elements[gamma.mapping[element_index(H)[x]]]
    raise TypeError(f"Not an involution: {gamma!r}")


# --- core law ---

def identity(G):
    """Neutral element of G."""
    if isinstance(G, Unit):
        return ()
    if isinstance(G, (IntLine, Cyclic)):
        return 0
    if isinstance(G, Direct):
        return tuple(identity(f) for f in G.factors)
    if isinstance(G, (WrZ, WrZm)):
        return (tuple(identity(G.base) for _ in range(G.m)), 0)
    if isinstance(G, (WrZZ, WrZZmn)):
        row = tuple(identity(G.base) for _ in range(G.n))
        return (tuple(row for _ in range(G.m)), (0, 0))
    if isinstance(G, (TwistedWrZ, TwistedWrZm)):
        return (
            tuple(identity(G.g) for _ in range(2 * G.m)),
            tuple(identity(G.h) for _ in range(G.m)),
            0,
        )
    raise TypeError(f"Not a group expression: {G!r}")


def shift_twisted(G, c: tuple, d: tuple, k: int):
    """
    β^k(c; d) by the closed form.

    With k' = k mod 2m, c-indices move by k' mod 2m and every wrap of a
    d-index past m applies γ once (γ² = id, so only the parity counts).
    """
    m = G.m
    kk = k % (2 * m)
    shifted_c = tuple(c[(i + kk) % (2 * m)] for i in range(2 * m))
    shifted_d = []
    for j in range(m):
        source = j + kk
        if kk < m:
            if source < m:
                shifted_d.append(d[source])
            else:
                shifted_d.append(apply_involution(G.gamma, G.h, d[source - m]))
        else:
            if source < 2 * m:
                shifted_d.append(apply_involution(G.gamma, G.h, d[source - m]))
            else:
                shifted_d.append(d[source - 2 * m])
    return shifted_c, tuple(shifted_d)


def _mul(G, u, v):
    if isinstance(G, Unit):
        return ()
    if isinstance(G, IntLine):
        return u + v
    if isinstance(G, Cyclic):
        return (u + v) % G.m
    if isinstance(G, Direct):
        return tuple(_mul(f, x, y) for f, x, y in zip(G.factors, u, v))
    if isinstance(G, (WrZ, WrZm)):
        (a, k), (b, l) = u, v
        m = G.m
        tup = tuple(_mul(G.base, a[i], b[(i + k) % m]) for i in range(m))
        shift = k + l if isinstance(G, WrZ) else (k + l) % m
        return (tup, shift)
    if isinstance(G, (WrZZ, WrZZmn)):
        (A, (k, l)), (B, (k2, l2)) = u, v
        m, n = G.m, G.n
        matrix = tuple(
            tuple(_mul(G.base, A[i][j], B[(i + k) % m][(j + l) % n]) for j in range(n))
            for i in range(m)
        )
        if isinstance(G, WrZZ):
            return (matrix, (k + k2, l + l2))
        return (matrix, ((k + k2) % m, (l + l2) % n))
    if isinstance(G, (TwistedWrZ, TwistedWrZm)):
        (a, b, k), (c, d, l) = u, v
        sc, sd = shift_twisted(G, c, d, k)
        new_c = tuple(_mul(G.g, x, y) for x, y in zip(a, sc))
        new_d = tuple(_mul(G.h, x, y) for x, y in zip(b, sd))
        shift = k + l if isinstance(G, TwistedWrZ) else (k + l) % (2 * G.m)
        return (new_c, new_d, shift)
    raise TypeError(f"Not a group expression: {G!r}")


def _inverse(G, u):
    if isinstance(G, Unit):
        return ()
    if isinstance(G, IntLine):
        return -u
    if isinstance(G, Cyclic):
        return (-u) % G.m
    if isinstance(G, Direct):
        return tuple(_inverse(f, x) for f, x in zip(G.factors, u))
    if isinstance(G, (WrZ, WrZm)):
        a, k = u
        m = G.m
        tup = tuple(_inverse(G.base, a[(j - k) % m]) for j in range(m))
        return (tup, -k if isinstance(G, WrZ) else (-k) % m)
    if isinstance(G, (WrZZ, WrZZmn)):
        A, (k, l) = u
        m, n = G.m, G.n
        matrix = tuple(
            tuple(_inverse(G.base, A[(i - k) % m][(j - l) % n]) for j in range(n)) for i in range(m)
        )
        if isinstance(G, WrZZ):
            return (matrix, (-k, -l))
        return (matrix, ((-k) % m, (-l) % n))
    if isinstance(G, (TwistedWrZ, TwistedWrZm)):
        a, b, k = u
        inv_a = tuple(_inverse(G.g, x) for x in a)
        inv_b = tuple(_inverse(G.h, x) for x in b)
        sc, sd = shift_twisted(G, inv_a, inv_b, -k)
        return (sc, sd, -k if isinstance(G, TwistedWrZ) else (-k) % (2 * G.m))
    raise TypeError(f"Not a group expression: {G!r}")


def mul(G, u, v):
    """u·v in G, checked against G's element shape."""
    check_shape(G, u)
    check_shape(G, v)
    return _mul(G, u, v)


def inverse(G, u):
    """u⁻¹ in G."""
    check_shape(G, u)
    return _inverse(G, u)


def power(G, u, n: int):
    """uⁿ by binary exponentiation; negative n uses the inverse."""
    check_shape(G, u)
    if n < 0:
        u, n = _inverse(G, u), -n
    result = identity(G)
    base = u
    while n:
        if n & 1:
            result = _mul(G, result, base)
        base = _mul(G, base, base)
        n >>= 1
    return result


def has_free_part(G, u) -> bool:
    """True when some ℤ-coordinate of u (leaf or shift) is nonzero."""
    if isinstance(G, IntLine):
        return u != 0
    if isinstance(G, (Unit, Cyclic)):
        return False
    if isinstance(G, Direct):
        return any(has_free_part(f, x) for f, x in zip(G.factors, u))
    if isinstance(G, (WrZ, WrZm)):
        if isinstance(G, WrZ) and u[1] != 0:
            return True
        return any(has_free_part(G.base, x) for x in u[0])
    if isinstance(G, (WrZZ, WrZZmn)):
        if isinstance(G, WrZZ) and u[1] != (0, 0):
            return True
        return any(has_free_part(G.base, x) for row in u[0] for x in row)
    if isinstance(G, (TwistedWrZ, TwistedWrZm)):
        if isinstance(G, TwistedWrZ) and u[2] != 0:
            return True
        return any(has_free_part(G.g, x) for x in u[0]) or any(has_free_part(G.h, x) for x in u[1])
    raise TypeError(f"Not a group expression: {G!r}")


def element_order(G, u, bound: int) -> Union[int, str]:
    """Least n <= bound with uⁿ = e, else INFINITE_OR_EXCEEDS."""
    check_shape(G, u)
    if has_free_part(G, u):
        return INFINITE_OR_EXCEEDS
    e = identity(G)
    current = u
    for n in range(1, bound + 1):
        if current == e:
            return n
        current = _mul(G, current, u)
    return INFINITE_OR_EXCEEDS


# --- enumeration of finite groups ---

@lru_cache(maxsize=256)
def enumerate_elements(G) -> tuple:
    """All elements of a finite G in the canonical itertools.product order."""
    if finite_order(G) is None:
        raise ValueError(f"Cannot enumerate the infinite group {G!r}")
    if isinstance(G, Unit):
        return ((),)
    if isinstance(G, Cyclic):
        return tuple(range(G.m))
    if isinstance(G, Direct):
        return tuple(product(*(enumerate_elements(f) for f in G.factors)))
    if isinstance(G, WrZm):
        base = enumerate_elements(G.base)
        return tuple(product(product(base, repeat=G.m), range(G.m)))
    if isinstance(G, WrZZmn):
        base = enumerate_elements(G.base)
        out = []
        for flat in product(base, repeat=G.m * G.n):
            matrix = tuple(tuple(flat[i * G.n:(i + 1) * G.n]) for i in range(G.m))
            for shift in product(range(G.m), range(G.n)):
                out.append((matrix, shift))
        return tuple(out)
    if isinstance(G, TwistedWrZm):
        gs = enumerate_elements(G.g)
        hs = enumerate_elements(G.h)
        return tuple(
            (c, d, k)
            for c in product(gs, repeat=2 * G.m)
            for d in product(hs, repeat=G.m)
            for k in range(2 * G.m)
        )
    raise ValueError(f"Cannot enumerate {G!r}")


@lru_cache(maxsize=256)
def element_index(G) -> dict:
    return {x: i for i, x in enumerate(enumerate_elements(G))}


# --- sampling and serialization ---

def random_element(G, rng: Random, max_shift: int = 8):
    """Uniform-ish random element; ℤ-coordinates drawn from [-max_shift, max_shift]."""
    if isinstance(G, Unit):
        return ()
    if isinstance(G, IntLine):
        return rng.randint(-max_shift, max_shift)
    if isinstance(G, Cyclic):
        return rng.randrange(G.m)
    if isinstance(G, Direct):
        return tuple(random_element(f, rng, max_shift) for f in G.factors)
    if isinstance(G, (WrZ, WrZm)):
        tup = tuple(random_element(G.base, rng, max_shift) for _ in range(G.m))
        shift = rng.randint(-max_shift, max_shift) if isinstance(G, WrZ) else rng.randrange(G.m)
        return (tup, shift)
    if isinstance(G, (WrZZ, WrZZmn)):
        matrix = tuple(
            tuple(random_element(G.base, rng, max_shift) for _ in range(G.n)) for _ in range(G.m)
        )
        if isinstance(G, WrZZ):
            shift = (rng.randint(-max_shift, max_shift), rng.randint(-max_shift, max_shift))
        else:
            shift = (rng.randrange(G.m), rng.randrange(G.n))
        return (matrix, shift)
    if isinstance(G, (TwistedWrZ, TwistedWrZm)):
        c = tuple(random_element(G.g, rng, max_shift) for _ in range(2 * G.m))
        d = tuple(random_element(G.h, rng, max_shift) for _ in range(G.m))
        if isinstance(G, TwistedWrZ):
            k = rng.randint(-max_shift, max_shift)
        else:
            k = rng.randrange(2 * G.m)
        return (c, d, k)
    raise TypeError(f"Not a group expression: {G!r}")


def element_to_json(u) -> Any:
    """Nested tuples become nested lists."""
    if isinstance(u, tuple):
        return [element_to_json(x) for x in u]
    return u


def element_from_json(G, data: Any):
    """Rebuild an element of G from its nested-array form and validate it."""
    element = _from_json(G, data)
    check_shape(G, element)
    return element


def _as_list(data: Any, path: str) -> List[Any]:
    if not isinstance(data, list):
        raise ShapeMismatchError(f"{path}: expected a JSON array, got {data!r}")
    return data


def _from_json(G, data: Any, path: str = "element"):
    if isinstance(G, Unit):
        _as_list(data, path)
        return ()
    if isinstance(G, (IntLine, Cyclic)):
        return data
    items = _as_list(data, path)
    if isinstance(G, Direct):
        if len(items) != len(G.factors):
            raise ShapeMismatchError(f"{path}: expected {len(G.factors)} components")
        return tuple(_from_json(f, x, f"{path}[{i}]") for i, (f, x) in enumerate(zip(G.factors, items)))
    if isinstance(G, (WrZ, WrZm)):
        tup, shift = items
        return (tuple(_from_json(G.base, x) for x in _as_list(tup, path)), shift)
    if isinstance(G, (WrZZ, WrZZmn)):
        matrix, shift = items
        rows = tuple(tuple(_from_json(G.base, x) for x in _as_list(row, path)) for row in _as_list(matrix, path))
        return (rows, tuple(_as_list(shift, path)))
    if isinstance(G, (TwistedWrZ, TwistedWrZm)):
        c, d, k = items
        return (
            tuple(_from_json(G.g, x) for x in _as_list(c, path)),
            tuple(_from_json(G.h, x) for x in _as_list(d, path)),
            k,
        )
    raise TypeError(f"Not a group expression: {G!r}")
