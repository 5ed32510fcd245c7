"""Truncated Chern-root power series.

A FormSeries is a complex polynomial in root variables of cohomological
degree two, truncated at a fixed total degree.  The degree-2k homogeneous
part implicitly carries the (-k)-th power of the periodicity class; only
block-level offsets of that power are tracked explicitly, as an integer
field.  On top of the raw arithmetic the module builds the equivariant
A-hat series with its inverse-Pfaffian block factors, Chern characters of
weight data, the spinor difference product, and the local fixed-point
contributions used by the sphere model.

Conventions pinned here and verified end-to-end by the model-geometry
tests: the square root giving a Pfaffian block factor is the branch
analytic at zero roots with constant term -2 sin(theta/2), which makes the
flat limit of the equivariant A-hat series equal to the exact reciprocal
of the supertrace factor computed by the clifford module.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DegenerateWeight, ZeroAngleInPerp, ZeroConstantTerm

DEFAULT_DEGREE = 10


@dataclass
class FormSeries:
    nvars: int
    degree: int
    coeffs: dict[tuple[int, ...], complex] = field(default_factory=dict)
    u_offset: int = 0

    def __post_init__(self):
        cleaned = {}
        for expo, c in self.coeffs.items():
            if len(expo) != self.nvars:
                raise ValueError(f"exponent {expo} has wrong arity")
            if sum(expo) > self.degree:
                raise ValueError(f"term {expo} exceeds truncation degree {self.degree}")
            if c != 0:
                cleaned[tuple(int(e) for e in expo)] = complex(c)
        self.coeffs = cleaned

    def constant_term(self) -> complex:
        return self.coeffs.get((0,) * self.nvars, 0j)

    def copy(self) -> "FormSeries":
        return FormSeries(self.nvars, self.degree, dict(self.coeffs), self.u_offset)


def series_const(nvars: int, degree: int, value: complex, u_offset: int = 0) -> FormSeries:
    return FormSeries(nvars, degree, {(0,) * nvars: complex(value)}, u_offset)


def series_monomial(nvars: int, degree: int, var: int, power: int = 1, coeff: complex = 1.0) -> FormSeries:
    expo = [0] * nvars
    expo[var] = power
    return FormSeries(nvars, degree, {tuple(expo): complex(coeff)})


def _compatible(a: FormSeries, b: FormSeries) -> None:
    if a.nvars != b.nvars or a.degree != b.degree:
        raise ValueError("series have mismatched variables or truncation degree")


def series_add(a: FormSeries, b: FormSeries) -> FormSeries:
    _compatible(a, b)
    if a.u_offset != b.u_offset:
        raise ValueError("cannot add series with different u-offsets")
    out = dict(a.coeffs)
    for expo, c in b.coeffs.items():
        out[expo] = out.get(expo, 0j) + c
    return FormSeries(a.nvars, a.degree, out, a.u_offset)


def series_scale(a: FormSeries, scalar: complex) -> FormSeries:
    return FormSeries(a.nvars, a.degree, {e: c * scalar for e, c in a.coeffs.items()}, a.u_offset)


def series_sub(a: FormSeries, b: FormSeries) -> FormSeries:
    return series_add(a, series_scale(b, -1.0))


def series_mul(a: FormSeries, b: FormSeries) -> FormSeries:
    _compatible(a, b)
    out: dict[tuple[int, ...], complex] = {}
    for ea, ca in a.coeffs.items():
        da = sum(ea)
        for eb, cb in b.coeffs.items():
            if da + sum(eb) > a.degree:
                continue
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0j) + ca * cb
    return FormSeries(a.nvars, a.degree, out, a.u_offset + b.u_offset)


def series_invert(s: FormSeries) -> FormSeries:
    """Multiplicative inverse up to the truncation degree."""
    c0 = s.constant_term()
    if abs(c0) < 1e-300:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    # geometric series in the nilpotent part
    n = series_scale(s, 1.0 / c0)
    n.u_offset = 0
    n = series_sub(n, series_const(s.nvars, s.degree, 1.0))
    out = series_const(s.nvars, s.degree, 1.0)
    power = series_const(s.nvars, s.degree, 1.0)
    for m in range(1, s.degree + 1):
        power = series_mul(power, n)
        if not power.coeffs:
            break
        out = series_add(out, series_scale(power, (-1.0) ** m))
    out = series_scale(out, 1.0 / c0)
    out.u_offset = -s.u_offset
    return out


def series_sqrt(s: FormSeries, root_of_constant: complex) -> FormSeries:
    """Square root with prescribed constant term (Newton iteration)."""
    c0 = s.constant_term()
    if abs(root_of_constant * root_of_constant - c0) > 1e-9 * max(1.0, abs(c0)):
        raise ValueError("prescribed constant is not a square root of the constant term")
    r = series_const(s.nvars, s.degree, root_of_constant)
    steps = max(1, math.ceil(math.log2(s.degree + 1)) + 1)
    for _ in range(steps):
        r = series_scale(series_add(r, series_mul(s, series_invert(r))), 0.5)
    return r


def series_exp_root(nvars: int, degree: int, var: int, coefficient: complex = 1.0) -> FormSeries:
    """exp(coefficient * x_var) truncated."""
    coeffs = {}
    expo = [0] * nvars
    term = 1.0 + 0j
    for m in range(degree + 1):
        expo[var] = m
        coeffs[tuple(expo)] = term
        term = term * coefficient / (m + 1)
    return FormSeries(nvars, degree, coeffs)


def series_eval(s: FormSeries, values: Sequence[complex]) -> complex:
    """Substitute numeric root values and sum."""
    if len(values) != s.nvars:
        raise ValueError("one value per root variable required")
    total = 0j
    for expo, c in s.coeffs.items():
        term = c
        for v, e in zip(values, expo):
            if e:
                term *= v**e
        total += term
    return total


def series_pretty(s: FormSeries, digits: int = 6) -> str:
    """Human-readable rendering with monomials sorted by degree."""
    if not s.coeffs:
        return "0"
    parts = []
    for expo in sorted(s.coeffs, key=lambda e: (sum(e), e)):
        c = s.coeffs[expo]
        mono = "*".join(
            f"x{i}" if p == 1 else f"x{i}^{p}" for i, p in enumerate(expo) if p
        )
        coeff = f"({c.real:.{digits}g}{c.imag:+.{digits}g}i)"
        parts.append(coeff if not mono else f"{coeff}*{mono}")
    head = " + ".join(parts)
    return head if s.u_offset == 0 else f"u^{s.u_offset} * ({head})"


def series_to_json(s: FormSeries) -> str:
    terms = [
        {"exponents": list(expo), "re": s.coeffs[expo].real, "im": s.coeffs[expo].imag}
        for expo in sorted(s.coeffs, key=lambda e: (sum(e), e))
    ]
    return json.dumps(
        {"nvars": s.nvars, "degree": s.degree, "u_offset": s.u_offset, "terms": terms}
    )


# ---------------------------------------------------------------------------
# weight data and Chern characters


@dataclass(frozen=True)
class ChernRoot:
    """One eigenbundle line: unit action weight, the root variables whose
    sum is its first Chern root, and a grading sign."""

    weight: complex
    roots: tuple[int, ...]
    sign: int = 1


@dataclass(frozen=True)
class ChernRootSpec:
    nvars: int
    degree: int
    entries: tuple[ChernRoot, ...]

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if abs(abs(entry.weight) - 1.0) > 1e-12:
                raise ValueError(f"action weight {entry.weight} is not on the unit circle")
            if entry.sign not in (1, -1):
                raise ValueError("grading sign must be +1 or -1")
            key = (entry.roots, entry.sign, entry.weight)
            if key in seen:
                raise ValueError(f"duplicate root entry {key}")
            seen.add(key)


def ch_series(spec: ChernRootSpec) -> FormSeries:
    """Sum over entries of sign * weight * exp(sum of roots)."""
    total = series_const(spec.nvars, spec.degree, 0.0)
    for entry in spec.entries:
        term = series_const(spec.nvars, spec.degree, 1.0)
        for var in entry.roots:
            term = series_mul(term, series_exp_root(spec.nvars, spec.degree, var))
        total = series_add(total, series_scale(term, entry.sign * entry.weight))
    return total


def spec_sum(a: ChernRootSpec, b: ChernRootSpec) -> ChernRootSpec:
    if a.nvars != b.nvars or a.degree != b.degree:
        raise ValueError("specs have mismatched variables or degree")
    return ChernRootSpec(a.nvars, a.degree, a.entries + b.entries)


def spec_tensor(a: ChernRootSpec, b: ChernRootSpec) -> ChernRootSpec:
    """Tensor product: weights multiply, roots add, signs multiply."""
    if a.nvars != b.nvars or a.degree != b.degree:
        raise ValueError("specs have mismatched variables or degree")
    entries = tuple(
        ChernRoot(ea.weight * eb.weight, ea.roots + eb.roots, ea.sign * eb.sign)
        for ea in a.entries
        for eb in b.entries
    )
    return ChernRootSpec(a.nvars, a.degree, entries)


# ---------------------------------------------------------------------------
# A-hat, Pfaffian blocks, spinor difference


def _sinh_half_over_root(nvars: int, degree: int, var: int) -> FormSeries:
    """(exp(x/2) - exp(-x/2)) / x, constant term 1."""
    coeffs = {}
    expo = [0] * nvars
    for m in range(degree + 1):
        expo[var] = m
        # coefficient of x^(m+1) in 2*sinh(x/2) is 2 / (2^(m+1) (m+1)!)
        if m % 2 == 0:
            coeffs[tuple(expo)] = 2.0 / (2.0 ** (m + 1) * math.factorial(m + 1))
    return FormSeries(nvars, degree, coeffs)


def a_hat_root_factor(nvars: int, degree: int, var: int) -> FormSeries:
    """x / (exp(x/2) - exp(-x/2)) for a single fixed root."""
    return series_invert(_sinh_half_over_root(nvars, degree, var))


def pfaffian_block(nvars: int, degree: int, theta: float, var: int | None) -> FormSeries:
    """The Pfaffian factor of one perpendicular 2-plane rotated through theta
    with Chern root x_var (or a flat block when var is None).

    This is the square root of (1 - e^{i theta} e^{x})(1 - e^{-i theta} e^{-x})
    that is analytic at x = 0 with constant term -2 sin(theta/2).
    """
    if abs(math.sin(theta / 2)) < 1e-12:
        raise ZeroAngleInPerp(f"zero-angle block (theta = {theta})")
    if var is None:
        return series_const(nvars, degree, -2.0 * math.sin(theta / 2))
    w = cmath.exp(1j * theta)
    plus = series_sub(
        series_const(nvars, degree, 1.0),
        series_scale(series_exp_root(nvars, degree, var, 1.0), w),
    )
    minus = series_sub(
        series_const(nvars, degree, 1.0),
        series_scale(series_exp_root(nvars, degree, var, -1.0), 1.0 / w),
    )
    square = series_mul(plus, minus)
    return series_sqrt(square, -2.0 * math.sin(theta / 2))


def a_hat_series(
    nvars: int,
    degree: int,
    fixed_roots: Sequence[int],
    blocks: Sequence[tuple[float, int | None]] = (),
    eps: int = 1,
) -> FormSeries:
    """Equivariant A-hat series: the product of x/(e^{x/2}-e^{-x/2}) over
    fixed roots times eps i^{-k} over the product of Pfaffian block factors,
    k being the number of perpendicular blocks.

    With no blocks this is the ordinary A-hat series; the empty input gives
    the constant series 1.  The flat limit (all block roots absent) is the
    exact reciprocal of the supertrace factor of the clifford module.
    """
    out = series_const(nvars, degree, complex(eps))
    for var in fixed_roots:
        out = series_mul(out, a_hat_root_factor(nvars, degree, var))
    if blocks:
        pf = series_const(nvars, degree, 1.0)
        for theta, var in blocks:
            pf = series_mul(pf, pfaffian_block(nvars, degree, theta, var))
        out = series_scale(series_mul(out, series_invert(pf)), (-1j) ** len(blocks))
    return out


def spinor_difference_series(nvars: int, degree: int, roots: Sequence[int]) -> FormSeries:
    """Product over roots of (exp(x/2) - exp(-x/2)); the empty product is 1.

    Equals the Euler product of the roots times the inverse ordinary A-hat
    series, which the test suite checks coefficient-wise.
    """
    out = series_const(nvars, degree, 1.0)
    for var in roots:
        out = series_mul(out, series_mul(_sinh_half_over_root(nvars, degree, var),
                                         series_monomial(nvars, degree, var)))
    return out


# ---------------------------------------------------------------------------
# isolated fixed points


def fixed_point_contribution(
    angles: Sequence[float], mu: complex, convention: str = "dolbeault"
) -> complex:
    """Local contribution of an isolated fixed point with tangent rotation
    angles and equivariant bundle weight mu.

    The "dolbeault" convention divides by (1 - t^{-1}) per plane, matching
    the section-counting oracle on the sphere; "spin" divides by
    (t^{1/2} - t^{-1/2}) with the half-angle branch cut at angle 0.
    """
    value = complex(mu)
    for theta in angles:
        t = cmath.exp(1j * theta)
        if abs(t - 1.0) < 1e-12:
            raise DegenerateWeight(f"rotation weight 1 at angle {theta}")
        if convention == "dolbeault":
            value /= 1.0 - 1.0 / t
        elif convention == "spin":
            half = cmath.exp(0.5j * theta)
            value /= half - 1.0 / half
        else:
            raise ValueError(f"unknown fixed-point convention {convention!r}")
    return value
