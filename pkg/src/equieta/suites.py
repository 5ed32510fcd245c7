"""Named verification suites.

Each suite assembles independent checks as thunks, runs them concurrently,
and collects the records in submission order so reports are deterministic
given a configuration (timings aside).
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import clifford, eta, geometry, series
from .groups import (
    ClassFunction,
    build_group,
    decompose,
    inner_product,
    regular_character,
    virtual_from_class_function,
)
from .report import CheckRecord, Report
from .torus import TorusElement, torus_act, torus_distance

SUITE_NAMES = (
    "orthogonality",
    "clifford",
    "forms",
    "eta",
    "free-case",
    "sphere-index",
    "fubini",
    "stokes",
)


@dataclass
class RunConfig:
    tolerance: float = 1e-9
    degree: int = 10
    quadrature: int = 32
    out_dir: str | None = None
    suites: tuple[str, ...] = ("all",)

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.degree % 2 or not (2 <= self.degree <= 16):
            raise ValueError("truncation degree must be even and at most 16")
        if self.quadrature < 2:
            raise ValueError("quadrature resolution must be at least 2")


def _record(name: str, inputs: dict, lhs, rhs, distance: float, tol: float) -> CheckRecord:
    return CheckRecord(name, inputs, lhs, rhs, float(distance), bool(distance <= tol))


def _run_checks(thunks: Sequence[Callable[[], CheckRecord]]) -> list[CheckRecord]:
    with ThreadPoolExecutor(max_workers=4) as pool:
        futures = [pool.submit(_guard, thunk) for thunk in thunks]
        return [f.result() for f in futures]


def _guard(thunk: Callable[[], CheckRecord]) -> CheckRecord:
    try:
        return thunk()
    except Exception as exc:  # a failed construction is a failed check
        return CheckRecord(
            getattr(thunk, "__name__", "check"), {}, None, f"{type(exc).__name__}: {exc}",
            math.inf, False,
        )


# ---------------------------------------------------------------------------
# individual suites


def suite_orthogonality(cfg: RunConfig) -> list[CheckRecord]:
    cases = [("cyclic", k) for k in range(1, 13)]
    cases += [("product", (2, 2)), ("symmetric3", None), ("dihedral", 4)]

    def make(family, k):
        def check() -> CheckRecord:
            _, tab = build_group(family, k)
            n = tab.n_irreps
            gram = np.array(
                [
                    [inner_product(tab.irreducible(i), tab.irreducible(j)) for j in range(n)]
                    for i in range(n)
                ]
            )
            dev = float(np.max(np.abs(gram - np.eye(n))))
            return _record(
                f"orthogonality[{family} {k}]", {"family": family, "k": str(k)},
                "gram matrix", "identity", dev, 1e-12,
            )

        return check

    return _run_checks([make(f, k) for f, k in cases])


def suite_clifford(cfg: RunConfig) -> list[CheckRecord]:
    rng = np.random.default_rng(20240517)

    def modulus_invariant() -> CheckRecord:
        worst = 0.0
        for _ in range(50):
            r = int(rng.integers(1, 5))
            angles = rng.uniform(0.05, 2 * math.pi - 0.05, size=r).tolist()
            a = clifford.element_factor(angles)
            expected = np.prod([2 * abs(math.sin(t / 2)) for t in angles])
            worst = max(worst, abs(abs(a) - expected))
        return _record("factor-modulus[50 random]", {"samples": 50}, "|supertrace|",
                       "prod 2|sin(theta/2)|", worst, 1e-12)

    def product_formula() -> CheckRecord:
        worst = 0.0
        for _ in range(25):
            r = int(rng.integers(1, 4))
            angles = rng.uniform(0.05, 2 * math.pi - 0.05, size=r).tolist()
            a = clifford.element_factor(angles)
            signed = np.prod([-2j * math.sin(t / 2) for t in angles])
            worst = max(worst, abs(a - signed))
        return _record("factor-phase[25 random]", {"samples": 25}, "supertrace",
                       "prod -2i sin(theta/2)", worst, 1e-12)

    def relations() -> CheckRecord:
        worst = max(clifford.clifford_residual(clifford.build_clifford(m)) for m in range(1, 7))
        return _record("clifford-relations[m<=6]", {}, "residual", 0.0, worst, 1e-12)

    def lift_contract() -> CheckRecord:
        worst = 0.0
        for _ in range(10):
            m = int(rng.integers(2, 7))
            planes = [(0, 1)] if m < 4 else [(0, 1), (2, 3)]
            angles = rng.uniform(0.1, 6.0, size=len(planes))
            mod = clifford.build_clifford(m)
            lift = clifford.spin_lift(mod, list(zip(planes, angles)))
            worst = max(worst, clifford.lift_residual(lift))
        return _record("lift-conjugation[10 random]", {}, "residual", 0.0, worst, 1e-12)

    def mq_anchor() -> CheckRecord:
        val = clifford.mq_thom_integral([], 2, resolution=cfg.quadrature)
        return _record("mq-unit-anchor[rank 2]", {"resolution": cfg.quadrature},
                       [val.real, val.imag], [1.0, 0.0], abs(val - 1.0), 1e-6)

    def make_mq(theta: float, fixed: int):
        def check() -> CheckRecord:
            val = clifford.mq_thom_integral([theta], fixed, resolution=cfg.quadrature)
            target = clifford.element_factor([theta])
            return _record(
                f"mq-vs-flat-ahat-inverse[theta={theta:.3f},fixed={fixed}]",
                {"theta": theta, "fixed_dim": fixed},
                [val.real, val.imag], [target.real, target.imag], abs(val - target), 1e-4,
            )

        return check

    thunks = [modulus_invariant, product_formula, relations, lift_contract, mq_anchor]
    thunks += [make_mq(t, f) for t in (math.pi, 2 * math.pi / 3, 1.0) for f in (0, 2)]
    return _run_checks(thunks)


def suite_forms(cfg: RunConfig) -> list[CheckRecord]:
    D = cfg.degree

    def _series_gap(a, b) -> float:
        keys = set(a.coeffs) | set(b.coeffs)
        return max((abs(a.coeffs.get(k, 0) - b.coeffs.get(k, 0)) for k in keys), default=0.0)

    def ahat_multiplicative() -> CheckRecord:
        both = series.a_hat_series(3, D, [0, 1], [(1.2, 2)])
        left = series.a_hat_series(3, D, [0], [(1.2, 2)])
        right = series.a_hat_series(3, D, [1], [])
        gap = _series_gap(both, series.series_mul(left, right))
        return _record("ahat-multiplicativity", {"degree": D}, "A(V1+V2)", "A(V1) A(V2)", gap, 1e-12)

    def ch_multiplicative() -> CheckRecord:
        s1 = series.ChernRootSpec(4, D, (series.ChernRoot(1.0, (0,)), series.ChernRoot(-1.0, (1,), -1)))
        s2 = series.ChernRootSpec(4, D, (series.ChernRoot(1j, (2,)), series.ChernRoot(1.0, (3,))))
        lhs = series.ch_series(series.spec_tensor(s1, s2))
        rhs = series.series_mul(series.ch_series(s1), series.ch_series(s2))
        return _record("ch-tensor-multiplicativity", {"degree": D}, "ch(V (x) W)",
                       "ch(V) ch(W)", _series_gap(lhs, rhs), 1e-12)

    def pfaffian_square() -> CheckRecord:
        worst = 0.0
        for theta in (0.7, math.pi, 5.1):
            pf = series.pfaffian_block(1, D, theta, 0)
            square = series.series_mul(pf, pf)
            import cmath

            w = cmath.exp(1j * theta)
            plus = series.series_sub(series.series_const(1, D, 1.0),
                                     series.series_scale(series.series_exp_root(1, D, 0, 1.0), w))
            minus = series.series_sub(series.series_const(1, D, 1.0),
                                      series.series_scale(series.series_exp_root(1, D, 0, -1.0), 1 / w))
            worst = max(worst, _series_gap(square, series.series_mul(plus, minus)))
        return _record("pfaffian-square-identity", {"degree": D}, "Pf^2", "block determinant",
                       worst, 1e-12)

    def spinor_difference() -> CheckRecord:
        roots = [0, 1]
        diff = series.spinor_difference_series(2, D, roots)
        euler = series.series_mul(series.series_monomial(2, D, 0), series.series_monomial(2, D, 1))
        ahat_inv = series.series_invert(series.a_hat_series(2, D, roots))
        gap = _series_gap(diff, series.series_mul(euler, ahat_inv))
        return _record("spinor-difference-euler", {"degree": D}, "prod(e^{x/2}-e^{-x/2})",
                       "Euler * A-hat inverse", gap, 1e-12)

    def flat_limit_vs_clifford() -> CheckRecord:
        worst = 0.0
        for angles in ([math.pi], [2 * math.pi / 3], [1.1, 2.2]):
            flat = series.a_hat_series(1, D, [], [(t, None) for t in angles])
            inv = 1.0 / clifford.element_factor(angles)
            worst = max(worst, abs(flat.constant_term() - inv))
        return _record("ahat-flat-vs-supertrace", {}, "flat A-hat", "1 / a_g", worst, 1e-12)

    def numeric_bridge() -> CheckRecord:
        theta, phi, x = 0.9, 0.07, 0.05
        ahat = series.a_hat_series(2, D, [0], [(theta, 1)])
        val = series.series_eval(ahat, [x, 1j * phi])
        # direct numerics: rotation blocks are the exact matrix exponentials
        # of the 2x2 skew blocks built from the roots
        pf = -2.0 * math.sin((theta + phi) / 2)
        direct = (x / (2.0 * math.sinh(x / 2))) * (-1j) / pf
        return _record("numeric-bridge", {"x": x, "theta": theta, "phi": phi},
                       [val.real, val.imag], [direct.real, direct.imag], abs(val - direct), 1e-10)

    return _run_checks([
        ahat_multiplicative, ch_multiplicative, pfaffian_square, spinor_difference,
        flat_limit_vs_clifford, numeric_bridge,
    ])


def suite_eta(cfg: RunConfig) -> list[CheckRecord]:
    _, trivial_table = build_group("cyclic", 1)

    def make_offset(a: float):
        def check() -> CheckRecord:
            spec = eta.ArithmeticSpectrum(
                trivial_table, (eta.SpectrumFamily(a, 1, {0: (1,)}),)
            )
            alpha = eta.admissible_cut(spec)
            closed = eta.xi_closed_form(spec, alpha)
            smoothed, err = eta.xi_smoothed_oracle(spec, alpha)
            gap_routes = float(np.max(np.abs(closed.values - smoothed.values)))
            reduced = eta.xi_reduced(spec)
            expected = (0.5 - a) % 1.0
            gap_closed = abs(float(reduced.coeffs[0]) - expected)
            gap_closed = min(gap_closed, 1.0 - gap_closed)
            return _record(
                f"eta-closed-vs-oracle[a={a}]", {"offset": a, "alpha": alpha, "oracle_err": err},
                float(closed.values[0].real), float(smoothed.values[0].real),
                max(gap_routes, 0.0 if gap_closed < 1e-12 else gap_closed), 1e-6,
            )

        return check

    def jumps() -> CheckRecord:
        _, tab = build_group("cyclic", 3)
        spec = eta.ArithmeticSpectrum(
            tab,
            (eta.SpectrumFamily(0.25, 3, {0: (1, 0, 0), 1: (0, 1, 0), 2: (0, 0, 1)}),),
        )
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(20):
            lo, hi = np.sort(rng.uniform(-4.0, 4.0, size=2))
            if spec.distance_to_spectrum(lo) < 1e-3 or spec.distance_to_spectrum(hi) < 1e-3:
                lo, hi = lo + 5e-3, hi + 5e-3
            diff = eta.xi_closed_form(spec, lo) - eta.xi_closed_form(spec, hi)
            expected = np.zeros(3, dtype=complex)
            for lam in spec.eigenvalues_between(lo, hi):
                expected += spec.character_at(lam)
            worst = max(worst, float(np.max(np.abs(diff.values - expected))))
        return _record("eta-jump-formula[20 random cuts]", {"samples": 20},
                       "xi(a) - xi(b)", "sum of crossing characters", worst, 1e-9)

    def equivariant_oracle() -> CheckRecord:
        _, tab = build_group("cyclic", 3)
        spec = eta.ArithmeticSpectrum(
            tab,
            (eta.SpectrumFamily(1.0 / 3.0, 3, {0: (1, 0, 0), 1: (0, 0, 1), 2: (0, 1, 0)}),),
        )
        alpha = eta.admissible_cut(spec)
        closed = eta.xi_closed_form(spec, alpha)
        smoothed, _ = eta.xi_smoothed_oracle(spec, alpha)
        gap = float(np.max(np.abs(closed.values - smoothed.values)))
        return _record("eta-equivariant-oracle[cyclic 3]", {"alpha": alpha},
                       "closed form", "smoothed sum", gap, 1e-6)

    thunks = [make_offset(a) for a in (0.1, 0.25, 0.5, 0.9)] + [jumps, equivariant_oracle]
    return _run_checks(thunks)


def suite_free_case(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tolerance
    thunks = []

    def make_free(k: int, beta: float, quotient_spin: float, twist: int):
        def check() -> CheckRecord:
            geom = geometry.circle_from_quotient(k, quotient_spin, beta, twist)
            assembled = geometry.free_pushforward(geom, tol)
            direct = eta.xi_reduced(geometry.circle_spectrum(geom), tol)
            gap = torus_distance(assembled, direct)
            return _record(
                f"free-case[k={k},beta={beta},sY={quotient_spin},twist={twist}]",
                {"k": k, "beta": beta, "quotient_spin": quotient_spin, "twist": twist},
                [float(x) for x in assembled.coeffs], [float(x) for x in direct.coeffs],
                gap, tol,
            )

        return check

    def make_regular(k: int, beta: float):
        def check() -> CheckRecord:
            geom = geometry.circle_from_quotient(k, 0.5, beta, 0)
            window_ok = geometry.regular_window_characters(geom)
            act_gap = geometry.regular_action_identity(geom, tol)
            proj_gap = geometry.trivial_component_identity(geom, tol)
            gap = max(act_gap, proj_gap, 0.0 if window_ok else math.inf)
            return _record(
                f"regular-representation[k={k},beta={beta}]",
                {"k": k, "beta": beta},
                "regular action / window / trivial component", "chi_reg identities",
                gap, tol,
            )

        return check

    for k in (1, 2, 3, 4, 6):
        for beta in (0.0, 0.2):
            for s_y in (0.0, 0.5):
                for twist in {0, 1 % k}:
                    thunks.append(make_free(k, beta, s_y, twist))
            thunks.append(make_regular(k, beta))

    def make_trivial(k: int):
        def check() -> CheckRecord:
            _, t1 = build_group("cyclic", 1)
            spec_a = eta.ArithmeticSpectrum(t1, (eta.SpectrumFamily(0.25, 1, {0: (1,)}),))
            spec_b = eta.ArithmeticSpectrum(t1, (eta.SpectrumFamily(0.4, 1, {0: (2,)}),))
            lhs, rhs, gap = geometry.trivial_action_decomposition(
                k, [(spec_a, 0), (spec_b, 1 % k)], tol
            )
            return _record(
                f"trivial-action[k={k}]", {"k": k},
                [float(x) for x in lhs.coeffs], [float(x) for x in rhs.coeffs], gap, tol,
            )

        return check

    thunks += [make_trivial(2), make_trivial(3)]
    return _run_checks(thunks)


def suite_sphere_index(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tolerance

    def make(k: int, n: int):
        def check() -> CheckRecord:
            geom = geometry.SphereGeometry(k, n)
            vc = geometry.sphere_index_character(geom, tol)
            plus, minus = geometry.sphere_section_weights(geom)
            oracle = np.zeros(k, dtype=int)
            for e in plus:
                oracle[e % k] += 1
            for e in minus:
                oracle[e % k] -= 1
            gap = float(np.max(np.abs(vc.coeffs - oracle)))
            return _record(
                f"sphere-index[k={k},n={n}]", {"k": k, "degree": n},
                vc.coeffs.tolist(), oracle.tolist(), gap, tol,
            )

        return check

    thunks = [make(k, n) for k in (1, 2, 3, 4) for n in (-1, 0, 1, 2, 3)]
    return _run_checks(thunks)


def suite_fubini(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tolerance

    def make(k: int, n: int):
        def check() -> CheckRecord:
            circle = geometry.circle_from_quotient(k, 0.5, 0.15, 0)
            sphere = geometry.SphereGeometry(k, n)
            product = geometry.ProductGeometry(circle, sphere)
            value = geometry.product_pushforward(product, tol)
            index = geometry.sphere_index_character(sphere, tol)
            expected = torus_act(index, eta.xi_reduced(geometry.circle_spectrum(circle), tol))
            gap = torus_distance(value, expected)
            return _record(
                f"fubini[k={k},n={n}]", {"k": k, "degree": n},
                [float(x) for x in value.coeffs], [float(x) for x in expected.coeffs],
                gap, tol,
            )

        return check

    return _run_checks([make(k, n) for k in (1, 2) for n in (0, 1, 2)])


def suite_stokes(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tolerance

    def short_path() -> CheckRecord:
        geom = geometry.CircleGeometry(1, 0.5, 0.2)
        rep = geometry.cylinder_variation(geom, 0.2, 0.3, steps=10)
        gap = abs(rep.continuous_drift[0] + 0.1)
        return _record("stokes-path[k=1, 0.2->0.3]", {"steps": 10},
                       float(rep.continuous_drift[0]), -0.1, gap, max(tol, 1e-9))

    def equivariant_path() -> CheckRecord:
        geom = geometry.circle_from_quotient(2, 0.5, 0.1, 0)
        rep = geometry.cylinder_variation(geom, 0.1, 0.35, steps=10)
        gap = float(np.max(np.abs(rep.continuous_drift + 0.25)))
        return _record("stokes-path[k=2, 0.1->0.35]", {"steps": 10},
                       [float(x) for x in rep.continuous_drift], -0.25, gap, max(tol, 1e-9))

    def full_loop() -> CheckRecord:
        geom = geometry.CircleGeometry(1, 0.0, 0.0)
        rep = geometry.cylinder_variation(geom, 0.0, 1.0, steps=16)
        net = np.mod(rep.continuous_drift[0] + 1.0 + 0.5, 1.0) - 0.5
        gap = abs(float(net)) + (0.0 if rep.jump_count == 1 else math.inf)
        return _record("stokes-full-loop[k=1]", {"steps": 16, "jumps": rep.jump_count},
                       float(rep.continuous_drift[0]), -1.0, gap, max(tol, 1e-9))

    return _run_checks([short_path, equivariant_path, full_loop])


_SUITES: dict[str, Callable[[RunConfig], list[CheckRecord]]] = {
    "orthogonality": suite_orthogonality,
    "clifford": suite_clifford,
    "forms": suite_forms,
    "eta": suite_eta,
    "free-case": suite_free_case,
    "sphere-index": suite_sphere_index,
    "fubini": suite_fubini,
    "stokes": suite_stokes,
}


def run_suite(name: str, cfg: RunConfig | None = None) -> Report:
    """Run one named suite (or "all"), returning the report and writing it
    as JSON when the configuration carries an output directory."""
    cfg = cfg or RunConfig()
    if name == "all":
        checks = []
        timings = {}
        for sub in SUITE_NAMES:
            t0 = time.perf_counter()
            checks.extend(_SUITES[sub](cfg))
            timings[sub] = time.perf_counter() - t0
        report = Report("all", checks, timings)
    elif name in _SUITES:
        t0 = time.perf_counter()
        checks = _SUITES[name](cfg)
        report = Report(name, checks, {name: time.perf_counter() - t0})
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES + ('all',)}")
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        path = os.path.join(cfg.out_dir, f"report_{name}.json")
        with open(path, "w") as fh:
            fh.write(report.to_json())
    return report
