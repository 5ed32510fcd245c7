"""Complex Clifford algebras, spin lifts of rotations, and the equivariant
factors attached to a group acting on a representation.

The spinor module for rank m lives on C^(2^ceil(m/2)) and is built by the
standard tensor recursion on Pauli blocks.  A rotation through angle theta
in the plane of two generators lifts to cos(theta/2) + sin(theta/2) g_a g_b,
and the per-element factor of a representation is the supertrace of the
lifted action on the spinors of the perpendicular part.  The Gaussian Thom
form of a representation is integrated over the fixed subspace by honest
quadrature, normalized so the plain rank-2 case integrates to one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import QuadratureNonConvergence, ZeroAngleInPerp
from .groups import FiniteGroup

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Gaussian normalization: pinned so that the identity-element rank-2 Thom
# integral is exactly 1 (each fixed 2-plane contributes a unit factor once
# the Koszul signs of the wedge ordering are accounted for).
GAUSSIAN_FORM_CONSTANT_SQ = -1j / (2.0 * math.pi)


@dataclass(frozen=True)
class CliffordModule:
    """Generators g_j with g_j g_k + g_k g_j = -2 delta_jk, plus the grading
    involution that anticommutes with every generator."""

    rank: int
    gammas: tuple[np.ndarray, ...]
    grading: np.ndarray

    @property
    def spinor_dim(self) -> int:
        return self.grading.shape[0]


def _kron_chain(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def build_clifford(m: int) -> CliffordModule:
    """Spinor module of rank m, 1 <= m <= 12 (rank 0 gives the trivial
    graded line, used internally for empty perpendicular parts)."""
    if not (0 <= m <= 12):
        raise ValueError(f"clifford rank out of range: {m}")
    pairs = (m + 1) // 2
    gammas = []
    for j in range(pairs):
        left = [_PAULI_Z] * j
        right = [np.eye(2, dtype=complex)] * (pairs - j - 1)
        gammas.append(1j * _kron_chain(left + [_PAULI_X] + right))
        gammas.append(1j * _kron_chain(left + [_PAULI_Y] + right))
    grading = _kron_chain([_PAULI_Z] * pairs)
    return CliffordModule(m, tuple(g.copy() for g in gammas[:m]), grading)


def supertrace(module: CliffordModule, matrix: np.ndarray) -> complex:
    return complex(np.trace(module.grading @ matrix))


def clifford_residual(module: CliffordModule) -> float:
    """Largest violation of the defining relations and of the grading
    anticommutation; used by validity tests."""
    worst = 0.0
    n = module.spinor_dim
    for j, gj in enumerate(module.gammas):
        for k, gk in enumerate(module.gammas):
            target = -2.0 * np.eye(n) if j == k else 0.0
            worst = max(worst, float(np.max(np.abs(gj @ gk + gk @ gj - target))))
        worst = max(worst, float(np.max(np.abs(module.grading @ gj + gj @ module.grading))))
    return worst


@dataclass(frozen=True)
class SpinLift:
    """Unitary lift of a block rotation to the spinor space."""

    module: CliffordModule
    planes: tuple[tuple[int, int], ...]
    angles: tuple[float, ...]
    sign: int
    matrix: np.ndarray

    def rotation_matrix(self) -> np.ndarray:
        """The SO rotation the lift covers."""
        rot = np.eye(self.module.rank)
        for (a, b), theta in zip(self.planes, self.angles):
            block = np.eye(self.module.rank)
            block[a, a] = block[b, b] = math.cos(theta)
            block[b, a] = math.sin(theta)
            block[a, b] = -math.sin(theta)
            rot = block @ rot
        return rot


def spin_lift(
    module: CliffordModule,
    planes_and_angles: Sequence[tuple[tuple[int, int], float]],
    sign: int = 1,
) -> SpinLift:
    """Product of exp((theta/2) g_a g_b) over disjoint planes, times sign.

    Conjugation by the result carries g_a to cos(theta) g_a + sin(theta) g_b
    and g_b to -sin(theta) g_a + cos(theta) g_b.
    """
    if sign not in (1, -1):
        raise ValueError("sign bit must be +1 or -1")
    used: set[int] = set()
    mat = sign * np.eye(module.spinor_dim, dtype=complex)
    planes = []
    angles = []
    for (a, b), theta in planes_and_angles:
        if a == b or a in used or b in used:
            raise ValueError(f"overlapping planes at indices ({a}, {b})")
        used.update((a, b))
        ga, gb = module.gammas[a], module.gammas[b]
        # (g_a g_b)^2 = -1, so the exponential closes in two terms
        factor = math.cos(theta / 2) * np.eye(module.spinor_dim) + math.sin(theta / 2) * (ga @ gb)
        mat = mat @ factor
        planes.append((a, b))
        angles.append(float(theta))
    return SpinLift(module, tuple(planes), tuple(angles), sign, mat)


def lift_residual(lift: SpinLift) -> float:
    """Check evenness and the conjugation contract against the rotation."""
    mod = lift.module
    inv = lift.matrix.conj().T
    worst = float(np.max(np.abs(lift.matrix @ mod.grading - mod.grading @ lift.matrix)))
    rot = lift.rotation_matrix()
    for j, gj in enumerate(mod.gammas):
        target = sum(rot[i, j] * mod.gammas[i] for i in range(mod.rank))
        worst = max(worst, float(np.max(np.abs(lift.matrix @ gj @ inv - target))))
    return worst


def power_sign(lift: SpinLift, k: int) -> int | None:
    """Return s with lift^k = s * id (s in {+1,-1}), or None otherwise."""
    p = np.linalg.matrix_power(lift.matrix, k)
    n = lift.module.spinor_dim
    for s in (1, -1):
        if np.max(np.abs(p - s * np.eye(n))) < 1e-9:
            return s
    return None


def cyclic_lift_exists(angles_numerators: Sequence[int], k: int) -> bool:
    """Whether rotations through 2 pi m_j / k admit a genuine lift of the
    cyclic group of order k: always for odd k, and iff sum(m_j) is even for
    even k."""
    total = sum(angles_numerators)
    return (k % 2 == 1) or (total % 2 == 0)


# ---------------------------------------------------------------------------
# equivariant factors


@dataclass(frozen=True)
class EquivFactorTable:
    """Per-element factor data for a group acting on a representation:
    the supertrace a_g of the lifted action on the perpendicular spinors,
    the half-rank k_g of the perpendicular part, and dim of the fixed part.
    """

    group: FiniteGroup
    a: np.ndarray  # complex per element
    k: np.ndarray  # int per element
    fixed_dim: np.ndarray  # int per element

    def validate(self, angle_data: Sequence[Sequence[float]], tol: float = 1e-12) -> None:
        if abs(self.a[0] - 1.0) > tol:
            raise ValueError("identity factor must be 1")
        for g, angles in enumerate(angle_data):
            expected = float(np.prod([2.0 * abs(math.sin(t / 2)) for t in angles])) if angles else 1.0
            if abs(abs(self.a[g]) - expected) > tol:
                raise ValueError(f"|a_g| mismatch at element {g}")


def _check_angles(angles: Sequence[float]) -> None:
    for t in angles:
        if not (0.0 < t < 2.0 * math.pi) or abs(math.sin(t / 2)) < 1e-12:
            raise ZeroAngleInPerp(
                f"angle {t} is a fixed direction; perpendicular angles must lie in (0, 2pi)"
            )


def element_factor(angles: Sequence[float], sign: int = 1) -> complex:
    """Supertrace of the lifted rotation on the spinors of the perpendicular
    part; 1 for an empty angle list (trivial graded line)."""
    _check_angles(angles)
    r = len(angles)
    if r == 0:
        return complex(sign)
    module = build_clifford(2 * r)
    lift = spin_lift(module, [((2 * j, 2 * j + 1), t) for j, t in enumerate(angles)], sign)
    return supertrace(module, lift.matrix)


def a_factor(
    group: FiniteGroup,
    angle_data: Sequence[Sequence[float]],
    fixed_dims: Sequence[int],
    signs: Sequence[int] | None = None,
) -> EquivFactorTable:
    """Assemble the factor table from per-element perpendicular angles and
    fixed dimensions.

    Odd-dimensional representations are handled by appending a trivial
    direction (which lands in every fixed subspace) before computing, so the
    stored fixed dimensions refer to the augmented representation.  The
    identity element must come with an empty angle list.
    """
    n = group.order
    if len(angle_data) != n or len(fixed_dims) != n:
        raise ValueError("need angle and fixed-dimension data for every element")
    if angle_data[0]:
        raise ValueError("identity element must have an empty perpendicular part")
    signs = list(signs) if signs is not None else [1] * n
    dims = [int(fixed_dims[g]) + 2 * len(angle_data[g]) for g in range(n)]
    if len(set(dims)) != 1:
        raise ValueError(f"inconsistent total dimensions {dims}")
    pad = dims[0] % 2  # parity handling: odd W gets one trivial direction
    a = np.zeros(n, dtype=complex)
    k = np.zeros(n, dtype=int)
    fixed = np.zeros(n, dtype=int)
    for g in range(n):
        a[g] = element_factor(angle_data[g], signs[g])
        k[g] = len(angle_data[g])
        fixed[g] = int(fixed_dims[g]) + pad
    table = EquivFactorTable(group, a, k, fixed)
    table.validate(angle_data)
    return table


# ---------------------------------------------------------------------------
# Gaussian Thom-form fiber integral
#
# Over a point with flat connection the superconnection squares to
# -|w|^2 + sum_j dw_j g_j, so the form to integrate over the fixed subspace
# is the supertrace of (lifted g) * exp of that element in the algebra of
# exterior forms with spinor-endomorphism coefficients.


def _wedge_sign(mask_a: int, mask_b: int) -> int:
    sign = 1
    for j in range(mask_b.bit_length()):
        if mask_b >> j & 1:
            higher = mask_a >> (j + 1)
            if bin(higher).count("1") % 2:
                sign = -sign
    return sign


def _ext_mul(a: dict, b: dict, grading: np.ndarray) -> dict:
    """Product in the graded tensor of the exterior algebra with End(S)."""
    out: dict[int, np.ndarray] = {}
    for ma, ca in a.items():
        even = 0.5 * (ca + grading @ ca @ grading)
        odd = ca - even
        for mb, cb in b.items():
            if ma & mb:
                continue
            koszul = -1 if bin(mb).count("1") % 2 else 1
            term = _wedge_sign(ma, mb) * ((even + koszul * odd) @ cb)
            key = ma | mb
            if key in out:
                out[key] = out[key] + term
            else:
                out[key] = term
    return out


def _ext_exp_nilpotent(n: dict, dim: int, grading: np.ndarray, order: int) -> dict:
    ident = {0: np.eye(dim, dtype=complex)}
    out = {0: np.eye(dim, dtype=complex)}
    power = ident
    fact = 1.0
    for m in range(1, order + 1):
        power = _ext_mul(power, n, grading)
        fact *= m
        for key, val in power.items():
            if key in out:
                out[key] = out[key] + val / fact
            else:
                out[key] = val / fact
    return out


def _gauss_legendre_exp(resolution: int, half_width: float) -> float:
    nodes, weights = np.polynomial.legendre.leggauss(resolution)
    x = nodes * half_width
    return float(np.sum(weights * half_width * np.exp(-x * x)))


def mq_thom_integral(
    angles: Sequence[float],
    fixed_dim: int,
    sign: int = 1,
    resolution: int = 32,
    half_width: float = 5.0,
    tol: float = 1e-6,
) -> complex:
    """Integrate the Gaussian Thom form of a representation, twisted by the
    lifted group element with the given perpendicular angles, over its fixed
    subspace.

    The normalization constant multiplying the one-form part is pinned by
    requiring the untwisted rank-2 integral to equal 1; with that choice the
    result equals the reciprocal of the flat equivariant A-hat factor (the
    supertrace convention recorded by a_factor).  A zero-dimensional fixed
    subspace reduces to evaluation at the origin.  Quadrature is accepted
    only when resolutions n and 2n agree within 10*tol.
    """
    _check_angles(angles)
    if fixed_dim < 0 or fixed_dim % 2:
        raise ValueError("fixed subspace must have even nonnegative dimension")
    if fixed_dim > 4:
        raise ValueError("fixed dimensions above 4 are not supported")
    d = int(fixed_dim)
    r = len(angles)
    module = build_clifford(d + 2 * r)
    lift_planes = [((d + 2 * j, d + 2 * j + 1), t) for j, t in enumerate(angles)]
    lift = spin_lift(module, lift_planes, sign)
    if d == 0:
        return supertrace(module, lift.matrix)

    b = cmath.sqrt(GAUSSIAN_FORM_CONSTANT_SQ)
    one_forms = {1 << j: b * module.gammas[j] for j in range(d)}
    nilpotent: dict[int, np.ndarray] = {}
    for key, val in one_forms.items():
        nilpotent[key] = np.array(val, dtype=complex)
    expo = _ext_exp_nilpotent(nilpotent, module.spinor_dim, module.grading, d)
    top = expo.get((1 << d) - 1)
    if top is None:
        raise QuadratureNonConvergence("exterior exponential produced no top form")
    coefficient = supertrace(module, lift.matrix @ top)

    coarse = _gauss_legendre_exp(resolution, half_width) ** d
    fine = _gauss_legendre_exp(2 * resolution, half_width) ** d
    if abs(fine - coarse) > 10.0 * tol:
        raise QuadratureNonConvergence(
            f"refinement gap {abs(fine - coarse):.3e} exceeds {10 * tol:.3e}"
        )
    return coefficient * fine
