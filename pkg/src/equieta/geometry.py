"""Model geometries and their pushforward identities.

The circle of circumference 2 pi carries a rotation action of a cyclic
group of order k with quotient a circle of circumference 2 pi / k.  The
equivariant Dirac spectrum is built two independent ways: directly, by
letting the rotation act on explicit Fourier eigensections and matching
the resulting phases against the character table, and from below, by
assembling the spectra of the twisted quotient operators.  The convention
that reconciles the routes is recorded explicitly as an integer lift index
rather than inferred: the generator acts on eigensections with phase
exp(2 pi i (a + j0 + c)/k) where a is the total spectral offset upstairs,
j0 the lift index, and c the character twist.  Lift data descending from
a quotient spin structure with offset s_Y satisfies
spin_offset + j0 = k * s_Y  (mod k).

The sphere carries the rotation fixing two poles and a monopole line
bundle; its equivariant index is computed by localization at the poles and
by enumerating section weights, and the two must agree exactly.  Products,
boundary-style variation of the flat twist, and trivial-action assemblies
complete the checked identities.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RouteMismatch, SchemaViolation
from .eta import ArithmeticSpectrum, SpectrumFamily, spectral_flow, xi_reduced
from .groups import (
    DEFAULT_TOL,
    CharacterTable,
    VirtualCharacter,
    build_group,
    regular_character,
    virtual_from_class_function,
)
from .series import (
    FormSeries,
    fixed_point_contribution,
    series_exp_root,
    series_invert,
    series_mul,
)
from .torus import TorusElement, torus_act, torus_distance

_TRIVIAL_GROUP, _TRIVIAL_TABLE = build_group("cyclic", 1)


# ---------------------------------------------------------------------------
# circle


@dataclass(frozen=True)
class CircleGeometry:
    """Circle with cyclic rotation action, flat twists, and lift data.

    spin_offset is 0 or 1/2 (periodic or antiperiodic spectrum upstairs),
    beta in [0, 1) the holonomy parameter of the flat line bundle on the
    quotient, twist_index the irreducible character twisting the
    equivariant structure, lift_index the recorded spin-lift convention.
    """

    k: int
    spin_offset: float = 0.5
    beta: float = 0.0
    twist_index: int = 0
    lift_index: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("cyclic order must be at least 1")
        if self.spin_offset not in (0.0, 0.5):
            raise ValueError("spin offset must be 0 or 1/2")
        if not (0.0 <= self.beta < 1.0):
            raise ValueError("quotient twist must lie in [0, 1)")
        if not (0 <= self.twist_index < self.k):
            raise ValueError("character twist must index an irreducible")
        circle_spectrum(self)  # route agreement is checked at construction

    @property
    def table(self) -> CharacterTable:
        return _cyclic_table(self.k)

    @property
    def spectral_offset(self) -> float:
        """Offset of the upstairs spectrum: spin offset plus the pulled-back
        holonomy k * beta."""
        return self.spin_offset + self.k * self.beta

    def with_beta(self, beta: float) -> "CircleGeometry":
        return CircleGeometry(self.k, self.spin_offset, beta % 1.0, self.twist_index, self.lift_index)

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "spin_offset": self.spin_offset,
                "beta": self.beta,
                "twist_index": self.twist_index,
                "lift_index": self.lift_index,
            }
        )


_table_cache: dict[int, CharacterTable] = {}


def _cyclic_table(k: int) -> CharacterTable:
    if k not in _table_cache:
        _table_cache[k] = build_group("cyclic", k)[1]
    return _table_cache[k]


def circle_from_quotient(
    k: int, quotient_spin: float, beta: float = 0.0, twist_index: int = 0
) -> CircleGeometry:
    """Circle geometry whose lift data descends from a quotient spin
    structure with offset quotient_spin (0 or 1/2)."""
    if quotient_spin not in (0.0, 0.5):
        raise ValueError("quotient spin offset must be 0 or 1/2")
    upstairs = (k * quotient_spin) % 1.0
    lift = round(k * quotient_spin - upstairs) % k
    return CircleGeometry(k, upstairs, beta, twist_index, lift)


def quotient_offsets(geom: CircleGeometry) -> list[float]:
    """Offsets b_d of the unit-step spectra of the quotient operators
    twisted by each irreducible (index d); the twisted operator's actual
    eigenvalues are k (m + b_d)."""
    a = geom.spectral_offset
    return [
        (a + geom.lift_index + geom.twist_index + d) / geom.k for d in range(geom.k)
    ]


def _character_index_from_phases(table: CharacterTable, phases: np.ndarray, tol: float) -> int:
    k = table.n_irreps
    for d in range(k):
        row = np.array([cmath.exp(2j * math.pi * d * m / k) for m in range(k)])
        if np.max(np.abs(phases - row)) < tol:
            return d
    raise RouteMismatch(f"rotation phases {phases} do not match any character")


def circle_spectrum(geom: CircleGeometry, tol: float = DEFAULT_TOL) -> ArithmeticSpectrum:
    """Equivariant Dirac spectrum of the circle, built two ways.

    Route one rotates explicit eigensections: the generator sends the
    eigensection of eigenvalue n + a to itself times
    exp(2 pi i (a + j0 + c)/k) * exp(-2 pi i (n + a)/k), and the resulting
    phase vector is matched against the character table.  Route two
    reassembles the spectrum from the twisted quotient operators.  Any
    disagreement raises RouteMismatch (an inconsistent lift convention).
    """
    k = geom.k
    table = _cyclic_table(k)
    a = geom.spectral_offset
    eps_r = cmath.exp(2j * math.pi * (a + geom.lift_index + geom.twist_index) / k)
    weights: dict[int, tuple[int, ...]] = {}
    for n in range(k):
        lam = n + a
        phases = np.array(
            [eps_r**m * cmath.exp(-2j * math.pi * m * lam / k) for m in range(k)]
        )
        d = _character_index_from_phases(table, phases, tol)
        vec = [0] * k
        vec[d] = 1
        weights[n] = tuple(vec)
    direct = ArithmeticSpectrum(table, (SpectrumFamily(a, k, weights),))

    assembled: dict[int, list[int]] = {n: [0] * k for n in range(k)}
    for d, b in enumerate(quotient_offsets(geom)):
        # eigenvalues k (m + b_d) = n + a with n = k m + j0 + c + d, carrying
        # the dual character of the twisting irreducible
        residue = round(k * b - a) % k
        assembled[residue][(-d) % k] += 1
    if any(tuple(assembled[n]) != weights[n] for n in range(k)):
        raise RouteMismatch("quotient assembly disagrees with the rotation phases")
    return direct


def _ordinary_spectrum(offset: float) -> ArithmeticSpectrum:
    fam = SpectrumFamily(offset, 1, {0: (1,)})
    return ArithmeticSpectrum(_TRIVIAL_TABLE, (fam,))


def ordinary_xi_value(offset: float, tol: float = DEFAULT_TOL) -> float:
    """Reduced eta of the unit-step progression with the given offset, as a
    number mod 1."""
    return float(xi_reduced(_ordinary_spectrum(offset), tol).coeffs[0])


def free_pushforward(geom: CircleGeometry, tol: float = DEFAULT_TOL) -> TorusElement:
    """Equivariant pushforward of the circle class, assembled from ordinary
    reduced eta invariants of the quotient-twisted operators.

    The coefficient on the dual of the d-th irreducible is the ordinary
    reduced eta of the d-twisted quotient operator.  The result is checked
    against the directly computed equivariant invariant of the upstairs
    spectrum; disagreement beyond tolerance is an error.
    """
    table = _cyclic_table(geom.k)
    coeffs = np.zeros(geom.k)
    for d, b in enumerate(quotient_offsets(geom)):
        coeffs[(-d) % geom.k] += ordinary_xi_value(b, tol)
    assembled = TorusElement(table, coeffs)
    direct = xi_reduced(circle_spectrum(geom), tol)
    gap = torus_distance(assembled, direct)
    if gap > tol:
        raise RouteMismatch(f"free-case decomposition disagrees with direct route: gap {gap}")
    return assembled


def regular_window_characters(geom: CircleGeometry) -> bool:
    """Any k consecutive eigenvalues of the upstairs spectrum carry total
    character exactly the regular representation; the spectral shadow of
    pulling back and pushing forward along the free quotient."""
    spec = circle_spectrum(geom)
    fam = spec.families[0]
    total = np.zeros(geom.k, dtype=int)
    for r in range(geom.k):
        total += np.asarray(fam.weights.get(r, (0,) * geom.k))
    reg = virtual_from_class_function(_cyclic_table(geom.k), regular_character(spec.table.group))
    return bool(np.all(total == reg.coeffs))


def regular_action_identity(geom: CircleGeometry, tol: float = DEFAULT_TOL) -> float:
    """Acting by the regular character on the pushforward equals the sum of
    the pushforwards over all character twists.  Returns the torus gap."""
    table = _cyclic_table(geom.k)
    reg = virtual_from_class_function(table, regular_character(table.group))
    lhs = torus_act(reg, free_pushforward(geom, tol))
    total = TorusElement(table, np.zeros(geom.k))
    for c in range(geom.k):
        twisted = CircleGeometry(geom.k, geom.spin_offset, geom.beta, c, geom.lift_index)
        total = total + free_pushforward(twisted, tol)
    return torus_distance(lhs, total)


def trivial_component_identity(geom: CircleGeometry, tol: float = DEFAULT_TOL) -> float:
    """The trivial-isotypic coefficient of the equivariant pushforward is
    the ordinary pushforward of the untwisted descended class.  Returns the
    circle gap between the two numbers."""
    direct = xi_reduced(circle_spectrum(geom), tol)
    ordinary = ordinary_xi_value(quotient_offsets(geom)[0], tol)
    d = abs(float(direct.coeffs[0]) - ordinary) % 1.0
    return min(d, 1.0 - d)


# ---------------------------------------------------------------------------
# sphere


@dataclass(frozen=True)
class SphereGeometry:
    """Sphere with rotation action fixing two poles and a monopole bundle.

    degree is the monopole number; south_weight the equivariant lift weight
    of the fiber at the south pole; the north weight is forced to
    south_weight - degree * rotation_weight.  For k >= 2 the rotation
    weight must be coprime to k so the fixed-point set is the two poles.
    """

    k: int
    degree: int
    south_weight: int = 0
    rotation_weight: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("cyclic order must be at least 1")
        if self.k >= 2 and math.gcd(self.rotation_weight, self.k) != 1:
            raise ValueError("rotation weight must be coprime to k (isolated poles)")

    @property
    def north_weight(self) -> int:
        return self.south_weight - self.degree * self.rotation_weight

    @property
    def table(self) -> CharacterTable:
        return _cyclic_table(self.k)

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "degree": self.degree,
                "south_weight": self.south_weight,
                "rotation_weight": self.rotation_weight,
            }
        )


def sphere_section_weights(geom: SphereGeometry) -> tuple[list[int], list[int]]:
    """Oracle route: exponents of the rotation eigenvalues on the two
    cohomology spaces of the monopole bundle.

    Sections of the degree-n bundle are spanned by the n+1 monomials of
    degree at most n, the j-th carrying weight south_weight - j * w; for
    negative degree the dual count lands in the higher cohomology with
    weights south_weight + j * w, j = 1 .. -n-1.
    """
    n, w, ps = geom.degree, geom.rotation_weight, geom.south_weight
    if n >= 0:
        return [ps - j * w for j in range(n + 1)], []
    return [], [ps + j * w for j in range(1, -n)]


def _surface_index_series(degree: int, trunc: int = 6) -> float:
    """Surface evaluation of the index on the sphere: the degree-one
    coefficient of the Todd-type series times the exponential of the twist,
    with the tangent root equal to twice the hyperplane root."""
    # (1 - e^{-2h}) / (2h) has h^e coefficient (-2)^e / (e+1)!
    coeffs = {}
    for e in range(trunc + 1):
        coeffs[(e,)] = (-2.0) ** e / math.factorial(e + 1)
    todd = series_invert(FormSeries(1, trunc, coeffs))
    total = series_mul(todd, series_exp_root(1, trunc, 0, float(degree)))
    return float(total.coeffs.get((1,), 0.0).real)


def sphere_index_character(geom: SphereGeometry, tol: float = DEFAULT_TOL) -> VirtualCharacter:
    """Equivariant index of the twisted operator on the sphere, computed by
    localization and by weight enumeration, which must agree exactly.

    The localized route sums the isolated fixed-point contributions at the
    poles for nontrivial rotations and evaluates the characteristic series
    over the surface for the identity component.
    """
    k = geom.k
    table = _cyclic_table(k)
    zeta = cmath.exp(2j * math.pi / k)
    values = np.zeros(k, dtype=complex)
    for m in range(k):
        if m == 0:
            values[m] = _surface_index_series(geom.degree)
            continue
        theta = 2.0 * math.pi * ((m * geom.rotation_weight) % k) / k
        south = fixed_point_contribution([theta], zeta ** (m * geom.south_weight))
        north = fixed_point_contribution(
            [2.0 * math.pi - theta], zeta ** (m * geom.north_weight)
        )
        values[m] = south + north
    from .groups import ClassFunction  # local import to avoid cycle noise

    localized = virtual_from_class_function(table, ClassFunction(table.group, values), tol)

    plus, minus = sphere_section_weights(geom)
    oracle = np.zeros(k, dtype=int)
    for e in plus:
        oracle[e % k] += 1
    for e in minus:
        oracle[e % k] -= 1
    if not np.array_equal(localized.coeffs, oracle):
        raise RouteMismatch(
            f"localized index {localized.coeffs.tolist()} differs from weight count {oracle.tolist()}"
        )
    return localized


def index_kernel_split(index: VirtualCharacter) -> tuple[np.ndarray, np.ndarray]:
    """Split a virtual character into its positive and negative parts,
    the graded kernel of the even factor."""
    c = index.coeffs
    return np.maximum(c, 0), np.maximum(-c, 0)


# ---------------------------------------------------------------------------
# product


@dataclass(frozen=True)
class ProductGeometry:
    odd: CircleGeometry
    even: SphereGeometry

    def __post_init__(self):
        if self.odd.k != self.even.k:
            raise ValueError("factors must share the acting group")

    def to_json(self) -> str:
        return json.dumps({"circle": json.loads(self.odd.to_json()), "sphere": json.loads(self.even.to_json())})


def _tensor_weights(table: CharacterTable, w: Sequence[int], factor: Sequence[int]) -> tuple[int, ...]:
    """Coefficients of (character of w) * (character of factor)."""
    from .groups import reconstruct, tensor

    cf = tensor(reconstruct(table, np.asarray(w, dtype=complex)),
                reconstruct(table, np.asarray(factor, dtype=complex)))
    return tuple(virtual_from_class_function(table, cf).coeffs.tolist())


def product_spectrum(geom: ProductGeometry) -> ArithmeticSpectrum:
    """Graded product rule: nonzero even-factor modes pair into symmetric
    eigenvalues and cancel, so only the index-graded kernel of the even
    factor survives, tensoring the circle spectrum (positive chirality) and
    its reflection (negative chirality)."""
    table = _cyclic_table(geom.odd.k)
    circ = circle_spectrum(geom.odd)
    plus, minus = index_kernel_split(sphere_index_character(geom.even))
    families = []
    for fam in circ.families:
        if np.any(plus):
            weights = {
                r: _tensor_weights(table, w, plus) for r, w in fam.weights.items()
            }
            families.append(SpectrumFamily(fam.offset, fam.period, weights))
        if np.any(minus):
            weights = {
                (-r) % fam.period: _tensor_weights(table, w, minus)
                for r, w in fam.weights.items()
            }
            families.append(SpectrumFamily(-fam.offset, fam.period, weights))
    return ArithmeticSpectrum(table, tuple(families))


def product_pushforward(geom: ProductGeometry, tol: float = DEFAULT_TOL) -> TorusElement:
    """Pushforward of the product: the reduced eta of the product spectrum,
    checked against the even factor's index acting on the circle invariant."""
    table = _cyclic_table(geom.odd.k)
    spec = product_spectrum(geom)
    if spec.families:
        direct = xi_reduced(spec, tol)
    else:
        direct = TorusElement(table, np.zeros(table.n_irreps))
    index = sphere_index_character(geom.even)
    expected = torus_act(index, xi_reduced(circle_spectrum(geom.odd), tol))
    gap = torus_distance(direct, expected)
    if gap > tol:
        raise RouteMismatch(f"product rule disagrees with index action: gap {gap}")
    return direct


# ---------------------------------------------------------------------------
# variation of the flat twist (boundary-style check)


@dataclass(frozen=True)
class VariationReport:
    start: float
    end: float
    continuous_drift: np.ndarray  # per irreducible, unwrapped
    jump_intervals: tuple[tuple[float, float], ...]
    jump_characters: tuple[tuple[int, ...], ...]
    max_defect: float

    @property
    def jump_count(self) -> int:
        return len(self.jump_intervals)

    def to_json(self) -> str:
        return json.dumps(
            {
                "start": self.start,
                "end": self.end,
                "continuous_drift": [float(x) for x in self.continuous_drift],
                "jumps": [
                    {"interval": list(iv), "character": list(ch)}
                    for iv, ch in zip(self.jump_intervals, self.jump_characters)
                ],
            }
        )


def cylinder_variation(
    geom: CircleGeometry,
    a0: float,
    a1: float,
    steps: int = 10,
    alpha: float | None = None,
    tol: float = DEFAULT_TOL,
) -> VariationReport:
    """Vary the flat quotient twist from a0 to a1 and compare the change of
    the reduced invariant with the transgression of the interpolating
    connection: every irreducible coefficient drifts by -(a1 - a0) mod 1,
    with integer jumps located exactly at the spectral crossings of the cut.
    """
    if steps < 1 or steps < 2 * geom.k * abs(a1 - a0):
        raise ValueError("grid too coarse for the requested variation")
    grid = [a0 + (a1 - a0) * i / steps for i in range(steps + 1)]

    def at(beta: float) -> ArithmeticSpectrum:
        spec = circle_spectrum(geom.with_beta(beta % 1.0))
        # keep the family offset continuous across beta = 1: shifting by
        # k * floor(beta) moves eigenvalue labels by a multiple of the
        # period, so the residue weights are unchanged
        shift = geom.k * math.floor(beta)
        if shift == 0:
            return spec
        fam = spec.families[0]
        shifted = SpectrumFamily(fam.offset + shift, fam.period, dict(fam.weights))
        return ArithmeticSpectrum(spec.table, (shifted,))

    table = _cyclic_table(geom.k)
    if alpha is None:
        alpha = 0.2718281828  # fixed, off every grid spectrum in the tests
    flow = spectral_flow(at, grid, alpha, continuity_const=4.0 * geom.k, tol=tol)

    elements = [xi_reduced(at(b), tol) for b in grid]
    drift = np.zeros(geom.k)
    for prev, cur in zip(elements, elements[1:]):
        step = np.mod(cur.coeffs - prev.coeffs + 0.5, 1.0) - 0.5
        drift += step
    expected = -(a1 - a0)
    defect = float(np.max(np.abs(np.mod(drift - expected + 0.5, 1.0) - 0.5)))
    if defect > max(tol * steps, 1e-8):
        raise RouteMismatch(
            f"variation drift {drift} does not match the transgression {expected}"
        )
    return VariationReport(
        a0,
        a1,
        drift,
        tuple(iv for iv, _ in flow.jumps),
        tuple(tuple(vc.coeffs.tolist()) for _, vc in flow.jumps),
        defect,
    )


# ---------------------------------------------------------------------------
# trivial action


def trivial_action_decomposition(
    k: int,
    summands: Sequence[tuple[ArithmeticSpectrum, int]],
    tol: float = DEFAULT_TOL,
) -> tuple[TorusElement, TorusElement, float]:
    """Assemble an equivariant spectrum with trivial action from ordinary
    spectra tensored with irreducibles, and compare its reduced invariant
    with the sum of the ordinary invariants on the matching coefficients.

    Returns (equivariant value, coefficientwise value, torus gap); the gap
    exceeding tolerance raises.
    """
    table = _cyclic_table(k)
    families = []
    exceptional = []
    expected = np.zeros(k)
    for spec, idx in summands:
        if spec.table.n_irreps != 1:
            raise ValueError("summand spectra must live over the trivial group")
        if not (0 <= idx < k):
            raise ValueError("irreducible index out of range")
        for fam in spec.families:
            weights = {}
            for r, w in fam.weights.items():
                vec = [0] * k
                vec[idx] = w[0]
                weights[r] = tuple(vec)
            families.append(SpectrumFamily(fam.offset, fam.period, weights))
        for lam, w in spec.exceptional:
            vec = [0] * k
            vec[idx] = w[0]
            exceptional.append((lam, tuple(vec)))
        expected[idx] += float(xi_reduced(spec, tol).coeffs[0])
    assembled = ArithmeticSpectrum(table, tuple(families), tuple(exceptional))
    lhs = xi_reduced(assembled, tol)
    rhs = TorusElement(table, expected)
    gap = torus_distance(lhs, rhs)
    if gap > tol:
        raise RouteMismatch(f"trivial-action decomposition gap {gap}")
    return lhs, rhs, gap


# ---------------------------------------------------------------------------
# JSON input


def circle_from_json(payload) -> CircleGeometry:
    if isinstance(payload, str):
        payload = json.loads(payload)
    try:
        return CircleGeometry(
            int(payload["k"]),
            float(payload.get("spin_offset", 0.5)),
            float(payload.get("beta", 0.0)),
            int(payload.get("twist_index", 0)),
            int(payload.get("lift_index", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"circle geometry: {exc}") from exc


def sphere_from_json(payload) -> SphereGeometry:
    if isinstance(payload, str):
        payload = json.loads(payload)
    try:
        return SphereGeometry(
            int(payload["k"]),
            int(payload["degree"]),
            int(payload.get("south_weight", 0)),
            int(payload.get("rotation_weight", 1)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"sphere geometry: {exc}") from exc
