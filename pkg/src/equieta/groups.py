"""Finite groups, conjugacy classes, class functions, and character tables.

Groups are stored as explicit multiplication tables with elements indexed
``0 .. order-1`` (index 0 is the identity).  Supported families are cyclic
groups, products of cyclics, dihedral groups, and the symmetric group on
three letters; their character tables come from closed-form constructions,
not from a general algorithm.  All values are immutable after construction
and every operation is pure.
"""

from __future__ import annotations

import cmath
import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import GroupMismatch, UnsupportedFamily

MAX_ORDER = 256
DEFAULT_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mul[a, b]`` is the product a*b, ``inverse[a]`` the inverse of a.
    Conjugacy classes are sorted by their smallest element, so the class
    of the identity is always class 0.  ``inverse_class`` is the
    involution sending the class of g to the class of g^-1.
    """

    name: str
    mul: np.ndarray
    inverse: np.ndarray
    class_of: np.ndarray
    classes: tuple[tuple[int, ...], ...]
    inverse_class: np.ndarray

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.classes])

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def conjugate(self, g: int, h: int) -> int:
        """h g h^-1"""
        return int(self.mul[self.mul[h, g], self.inverse[h]])


def _conjugacy_data(mul: np.ndarray, inverse: np.ndarray):
    n = mul.shape[0]
    seen = np.full(n, -1)
    classes: list[tuple[int, ...]] = []
    for g in range(n):
        if seen[g] >= 0:
            continue
        orbit = sorted({int(mul[mul[h, g], inverse[h]]) for h in range(n)})
        idx = len(classes)
        for x in orbit:
            seen[x] = idx
        classes.append(tuple(orbit))
    # sort classes by smallest element; identity lands first
    order = sorted(range(len(classes)), key=lambda i: classes[i][0])
    relabel = {old: new for new, old in enumerate(order)}
    classes = [classes[i] for i in order]
    class_of = np.array([relabel[int(seen[g])] for g in range(n)])
    inv_class = np.array([class_of[inverse[c[0]]] for c in classes])
    return class_of, tuple(classes), inv_class


def _group_from_table(name: str, mul: np.ndarray) -> FiniteGroup:
    n = mul.shape[0]
    if not (np.all(mul[0, :] == np.arange(n)) and np.all(mul[:, 0] == np.arange(n))):
        raise ValueError("element 0 is not an identity for the given table")
    inverse = np.full(n, -1)
    for a in range(n):
        hits = np.nonzero(mul[a, :] == 0)[0]
        if len(hits) != 1:
            raise ValueError(f"element {a} has no unique inverse")
        inverse[a] = hits[0]
    # associativity spot-check on random triples
    rng = np.random.default_rng(0)
    for _ in range(min(200, n**3)):
        a, b, c = rng.integers(0, n, size=3)
        if mul[mul[a, b], c] != mul[a, mul[b, c]]:
            raise ValueError("multiplication table is not associative")
    class_of, classes, inv_class = _conjugacy_data(mul, inverse)
    return FiniteGroup(
        name=name,
        mul=_frozen(mul),
        inverse=_frozen(inverse),
        class_of=_frozen(class_of),
        classes=classes,
        inverse_class=_frozen(inv_class),
    )


@dataclass(frozen=True)
class ClassFunction:
    """A complex-valued function on conjugacy classes."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.group.n_classes,):
            raise ValueError("one value per conjugacy class required")
        object.__setattr__(self, "values", _frozen(v))

    def value_on_element(self, g: int) -> complex:
        return complex(self.values[self.group.class_of[g]])

    def is_k_real(self, tol: float = DEFAULT_TOL) -> bool:
        """True when value(c) = conj(value(c^-1)) for every class, the
        real structure pairing g with its inverse."""
        inv = self.group.inverse_class
        return bool(np.all(np.abs(self.values - np.conj(self.values[inv])) <= tol))

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        _same_group(self, other)
        return ClassFunction(self.group, self.values + other.values)

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        _same_group(self, other)
        return ClassFunction(self.group, self.values - other.values)

    def __mul__(self, scalar: complex) -> "ClassFunction":
        return ClassFunction(self.group, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "ClassFunction":
        return ClassFunction(self.group, -self.values)


def _same_group(a, b):
    ga = a.group if hasattr(a, "group") else a
    gb = b.group if hasattr(b, "group") else b
    if ga is not gb and (ga.name != gb.name or ga.order != gb.order):
        raise GroupMismatch(f"operands live on different groups: {ga.name} vs {gb.name}")


@dataclass(frozen=True)
class CharacterTable:
    """Ordered irreducible characters of a group.

    Row i of ``table`` holds the values of the i-th irreducible on the
    conjugacy classes; the first row is the trivial character.
    """

    group: FiniteGroup
    table: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        t = np.asarray(self.table, dtype=complex)
        object.__setattr__(self, "table", _frozen(t))

    @property
    def n_irreps(self) -> int:
        return self.table.shape[0]

    def irreducible(self, i: int) -> ClassFunction:
        return ClassFunction(self.group, self.table[i].copy())

    def validate(self, tol: float = 1e-12) -> None:
        g = self.group
        if self.n_irreps != g.n_classes:
            raise ValueError("number of irreducibles must equal number of classes")
        if sum(d * d for d in self.dims) != g.order:
            raise ValueError("sum of squared dimensions must equal the group order")
        if np.any(np.abs(self.table[0] - 1.0) > tol):
            raise ValueError("first table entry must be the trivial character")
        gram = np.empty((self.n_irreps, self.n_irreps), dtype=complex)
        for i in range(self.n_irreps):
            for j in range(self.n_irreps):
                gram[i, j] = inner_product(self.irreducible(i), self.irreducible(j))
        if np.max(np.abs(gram - np.eye(self.n_irreps))) > tol:
            raise ValueError("irreducibles are not orthonormal")


@dataclass(frozen=True)
class VirtualCharacter:
    """Integer combination of irreducible characters."""

    table: CharacterTable
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=int)
        if c.shape != (self.table.n_irreps,):
            raise ValueError("one integer coefficient per irreducible required")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def group(self) -> FiniteGroup:
        return self.table.group

    def as_class_function(self) -> ClassFunction:
        vals = self.coeffs.astype(complex) @ self.table.table
        return ClassFunction(self.group, vals)

    def __add__(self, other: "VirtualCharacter") -> "VirtualCharacter":
        _same_group(self, other)
        return VirtualCharacter(self.table, self.coeffs + other.coeffs)

    def __neg__(self) -> "VirtualCharacter":
        return VirtualCharacter(self.table, -self.coeffs)


# ---------------------------------------------------------------------------
# representation-ring operations


def inner_product(a: ClassFunction, b: ClassFunction) -> complex:
    """(1/|G|) sum_g a(g) conj(b(g)), computed through class sizes."""
    _same_group(a, b)
    sizes = a.group.class_sizes
    return complex(np.sum(sizes * a.values * np.conj(b.values)) / a.group.order)


def decompose(table: CharacterTable, f: ClassFunction) -> np.ndarray:
    """Coefficients of f in the orthonormal basis of irreducibles."""
    _same_group(table, f)
    return np.array([inner_product(f, table.irreducible(i)) for i in range(table.n_irreps)])


def reconstruct(table: CharacterTable, coeffs: Sequence[complex]) -> ClassFunction:
    vals = np.asarray(coeffs, dtype=complex) @ table.table
    return ClassFunction(table.group, vals)


def virtual_from_class_function(
    table: CharacterTable, f: ClassFunction, tol: float = DEFAULT_TOL
) -> VirtualCharacter:
    """Round the decomposition of f to integers, failing loudly when f is
    not a virtual character."""
    c = decompose(table, f)
    rounded = np.round(c.real).astype(int)
    if np.max(np.abs(c - rounded)) > tol:
        raise ValueError(f"class function is not integral: coefficients {c}")
    return VirtualCharacter(table, rounded)


def regular_character(group: FiniteGroup) -> ClassFunction:
    """|G| at the identity class, 0 elsewhere."""
    vals = np.zeros(group.n_classes, dtype=complex)
    vals[0] = group.order
    return ClassFunction(group, vals)


def dual(f: ClassFunction) -> ClassFunction:
    """dual(f)(g) = f(g^-1); the conjugate character for genuine characters."""
    return ClassFunction(f.group, f.values[f.group.inverse_class].copy())


def tensor(a: ClassFunction, b: ClassFunction) -> ClassFunction:
    """Pointwise product, the character of a tensor product."""
    _same_group(a, b)
    return ClassFunction(a.group, a.values * b.values)


# ---------------------------------------------------------------------------
# family constructors


def _cyclic(k: int):
    idx = np.arange(k)
    mul = (idx[:, None] + idx[None, :]) % k
    group = _group_from_table(f"cyclic{k}", mul)
    omega = np.exp(2j * np.pi / k)
    reps = np.array([c[0] for c in group.classes])  # classes are singletons
    table = np.array([[omega ** (j * m) for m in reps] for j in range(k)])
    return group, CharacterTable(group, table, tuple([1] * k))


def _product_of_cyclics(orders: Sequence[int]):
    orders = tuple(int(k) for k in orders)
    tuples = list(itertools.product(*[range(k) for k in orders]))
    pos = {t: i for i, t in enumerate(tuples)}
    n = len(tuples)
    mul = np.zeros((n, n), dtype=int)
    for i, a in enumerate(tuples):
        for j, b in enumerate(tuples):
            mul[i, j] = pos[tuple((x + y) % k for x, y, k in zip(a, b, orders))]
    name = "x".join(f"c{k}" for k in orders)
    group = _group_from_table(name, mul)
    reps = [tuples[c[0]] for c in group.classes]
    rows = []
    for js in itertools.product(*[range(k) for k in orders]):
        rows.append(
            [
                np.prod([np.exp(2j * np.pi * j * m / k) for j, m, k in zip(js, rep, orders)])
                for rep in reps
            ]
        )
    table = np.array(rows)
    return group, CharacterTable(group, table, tuple([1] * n))


def _dihedral(k: int):
    """Dihedral group of order 2k: elements r^j s^f indexed j + k*f."""
    n = 2 * k

    def idx(j, f):
        return j % k + k * (f % 2)

    mul = np.zeros((n, n), dtype=int)
    for j1 in range(k):
        for f1 in range(2):
            for j2 in range(k):
                for f2 in range(2):
                    j = j1 + (j2 if f1 == 0 else -j2)
                    mul[idx(j1, f1), idx(j2, f2)] = idx(j, f1 + f2)
    group = _group_from_table(f"dihedral{k}", mul)

    def decode(e):
        return e % k, e // k

    def one_dim(rot_sign, ref_sign):
        def chi(e):
            j, f = decode(e)
            return (rot_sign**j) * (ref_sign**f)

        return chi

    chars = [one_dim(1, 1), one_dim(1, -1)]
    dims = [1, 1]
    if k % 2 == 0:
        chars += [one_dim(-1, 1), one_dim(-1, -1)]
        dims += [1, 1]
    top = (k - 1) // 2 if k % 2 else k // 2 - 1
    for h in range(1, top + 1):
        def two_dim(e, h=h):
            j, f = decode(e)
            return 2 * math.cos(2 * math.pi * h * j / k) if f == 0 else 0.0

        chars.append(two_dim)
        dims.append(2)
    reps = [c[0] for c in group.classes]
    table = np.array([[complex(chi(e)) for e in reps] for chi in chars])
    return group, CharacterTable(group, table, tuple(dims))


_S3_PERMS = ((0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2))


def _symmetric3():
    pos = {p: i for i, p in enumerate(_S3_PERMS)}
    n = 6
    mul = np.zeros((n, n), dtype=int)
    for i, p in enumerate(_S3_PERMS):
        for j, q in enumerate(_S3_PERMS):
            mul[i, j] = pos[tuple(p[q[m]] for m in range(3))]
    group = _group_from_table("symmetric3", mul)

    def cycle_type(p):
        fixed = sum(1 for m in range(3) if p[m] == m)
        return fixed  # 3 identity, 1 transposition, 0 three-cycle

    values = {3: (1, 1, 2), 1: (1, -1, 0), 0: (1, 1, -1)}
    reps = [_S3_PERMS[c[0]] for c in group.classes]
    table = np.array([[values[cycle_type(p)][i] for p in reps] for i in range(3)], dtype=complex)
    return group, CharacterTable(group, table, (1, 1, 2))


def build_group(family: str, k: int | Sequence[int] | None = None):
    """Build a (group, character table) pair for a supported family.

    family is one of "cyclic", "product", "dihedral", "symmetric3";
    k is the cyclic order, the tuple of cyclic orders for a product, or
    the dihedral rotation order.  Group order is capped at 256.
    """
    if family == "cyclic":
        if not isinstance(k, int) or k < 1 or k > MAX_ORDER:
            raise UnsupportedFamily(f"cyclic order out of range: {k}")
        group, tab = _cyclic(k)
    elif family == "product":
        if k is None or isinstance(k, int) or not k:
            raise UnsupportedFamily("product family needs a sequence of cyclic orders")
        if any(int(m) < 1 for m in k) or int(np.prod([int(m) for m in k])) > MAX_ORDER:
            raise UnsupportedFamily(f"product orders out of range: {k}")
        group, tab = _product_of_cyclics(k)
    elif family == "dihedral":
        if not isinstance(k, int) or k < 2 or 2 * k > MAX_ORDER:
            raise UnsupportedFamily(f"dihedral order out of range: {k}")
        group, tab = _dihedral(k)
    elif family == "symmetric3":
        group, tab = _symmetric3()
    else:
        raise UnsupportedFamily(f"unknown family {family!r}")
    tab.validate()
    return group, tab


# ---------------------------------------------------------------------------
# export


def format_complex(z: complex, digits: int = 12) -> str:
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def table_to_csv(tab: CharacterTable) -> str:
    """Rows are irreducibles, columns are conjugacy classes, entries re+imi."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["irreducible", "dim"] + [f"class_{i}" for i in range(tab.group.n_classes)])
    for i in range(tab.n_irreps):
        writer.writerow([i, tab.dims[i]] + [format_complex(z) for z in tab.table[i]])
    return buf.getvalue()


def table_to_json(tab: CharacterTable) -> str:
    g = tab.group
    payload = {
        "group": {"name": g.name, "order": g.order},
        "classes": [
            {"representative": c[0], "size": len(c)} for c in g.classes
        ],
        "irreducibles": [
            {
                "dim": tab.dims[i],
                "values": [[z.real, z.imag] for z in tab.table[i]],
            }
            for i in range(tab.n_irreps)
        ],
    }
    return json.dumps(payload, indent=2)
