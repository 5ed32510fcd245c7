"""The representation torus: real irreducible coefficients modulo integers.

Odd-degree pushforwards and reduced eta invariants take values here.  An
element is a vector of real coefficients, one per irreducible, canonically
reduced into [0, 1); equality is circle distance below tolerance, so
coefficients near 0 and near 1 compare equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import NonRealCoefficient
from .groups import (
    DEFAULT_TOL,
    CharacterTable,
    ClassFunction,
    VirtualCharacter,
    _same_group,
    decompose,
    reconstruct,
    tensor,
)


@dataclass(frozen=True)
class TorusElement:
    table: CharacterTable
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.mod(np.asarray(self.coeffs, dtype=float), 1.0)
        c = np.where(np.isclose(c, 1.0, atol=1e-15), 0.0, c)
        if c.shape != (self.table.n_irreps,):
            raise ValueError("one coefficient per irreducible required")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def representative(self) -> ClassFunction:
        """A class function lifting this element (coefficients in [0,1))."""
        return reconstruct(self.table, self.coeffs.astype(complex))

    def __add__(self, other: "TorusElement") -> "TorusElement":
        return torus_add(self, other)

    def __neg__(self) -> "TorusElement":
        return TorusElement(self.table, -self.coeffs)

    def to_json(self) -> str:
        return json.dumps(
            {
                "group": self.table.group.name,
                "coefficients": [float(x) for x in self.coeffs],
            }
        )


def project(table: CharacterTable, f: ClassFunction, tol: float = DEFAULT_TOL) -> TorusElement:
    """Project a class function with real irreducible coefficients onto the
    torus, reducing each coefficient mod 1.

    Raises NonRealCoefficient when some coefficient has imaginary part above
    tolerance, signalling that f is not in the real span of the irreducibles.
    """
    _same_group(table, f)
    c = decompose(table, f)
    if np.max(np.abs(c.imag)) > tol:
        raise NonRealCoefficient(f"imaginary coefficient parts {c.imag} exceed {tol}")
    return TorusElement(table, c.real)


def zero_element(table: CharacterTable) -> TorusElement:
    return TorusElement(table, np.zeros(table.n_irreps))


def torus_add(s: TorusElement, t: TorusElement) -> TorusElement:
    _same_group(s.table, t.table)
    return TorusElement(s.table, s.coeffs + t.coeffs)


def torus_act(v: VirtualCharacter, t: TorusElement) -> TorusElement:
    """Module action of a virtual character: multiply the underlying class
    functions and re-project.  Acting by the trivial character is the
    identity; acting by a lattice vector on a lattice point stays zero."""
    _same_group(v.table, t.table)
    product = tensor(v.as_class_function(), t.representative())
    return project(t.table, product)


def torus_distance(s: TorusElement, t: TorusElement) -> float:
    """Max over irreducibles of the circle distance between coefficients."""
    _same_group(s.table, t.table)
    d = np.mod(s.coeffs - t.coeffs, 1.0)
    return float(np.max(np.minimum(d, 1.0 - d))) if len(d) else 0.0


def torus_equal(s: TorusElement, t: TorusElement, tol: float = DEFAULT_TOL) -> bool:
    return torus_distance(s, t) < tol


@dataclass(frozen=True)
class KPointDescription:
    """Answer to "what lives over a point" in each parity."""

    parity: str  # "even" | "odd"
    kind: str  # "lattice" | "torus"
    rank: int
    description: str


def k_point(i: int, table: CharacterTable) -> KPointDescription:
    """Even degrees see the virtual-character lattice R(G); odd degrees see
    the torus (R(G) tensor R)/R(G)."""
    rank = table.n_irreps
    if i % 2 == 0:
        return KPointDescription("even", "lattice", rank, f"R(G), free of rank {rank}")
    return KPointDescription("odd", "torus", rank, f"(R(G) (x) R)/R(G), a {rank}-torus")
