"""Truncated q-oscillator pairs and their discrete-series combination.

Two commuting deformed oscillators act on a product Fock space
|n_A, n_B> with 0 <= n_A <= n_a_max, 0 <= n_B <= n_b_max:

    A-|n> = sqrt((1-q^n)/(1-q)) |n-1>,      A+|n> = sqrt((1-q^(n+1))/(1-q)) |n+1>
    B-|n> = sqrt((q^-n-1)/(1-q)) |n-1>,     B+|n> = sqrt((q^-(n+1)-1)/(1-q)) |n+1>

so that A-A+ - qA+A- = 1, [A-, A+] = q^A0 and qB-B+ - B+B- = 1,
[B-, B+] = q^(-B0-1).  Raising operators annihilate the top level of the
truncated space, which corrupts commutation relations only in the last
rows/columns; algebra checks therefore restrict to an interior block.

The combination

    J0 = (A0 + B0 + 1)/2,    J+- = q^((B0-A0+2)/2) A+- B+-

satisfies [J+, J-] = -(q^J0 - q^-J0)/(q^(1/2) - q^(-1/2)) and preserves
each sector spanned by |n>_beta = |n, n+beta-1>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import EmptySector, OutOfTruncation
from .qseries import QContext

__all__ = [
    "FockTruncation",
    "ProductBasis",
    "OperatorMatrix",
    "Oscillators",
    "JOperators",
    "SectorBasis",
    "ClassicalOperators",
    "build_oscillators",
    "build_J",
    "sector",
    "ladder_power_action",
    "build_classical",
    "interior_indices",
]


@dataclass(frozen=True)
class FockTruncation:
    """Caps on the two oscillator occupation numbers (inclusive)."""

    n_a_max: int
    n_b_max: int

    def __post_init__(self):
        if self.n_a_max < 1 or self.n_b_max < 1:
            raise ValueError("truncation caps must be >= 1")

    @property
    def dim(self) -> int:
        return (self.n_a_max + 1) * (self.n_b_max + 1)


class ProductBasis:
    """Row-major enumeration of |n_A, n_B>: index = n_A*(n_b_max+1) + n_B."""

    def __init__(self, trunc: FockTruncation):
        self.trunc = trunc
        self.dim = trunc.dim
        nb_span = trunc.n_b_max + 1
        self._nb_span = nb_span
        idx = np.arange(self.dim)
        self.na = idx // nb_span
        self.nb = idx % nb_span

    def index(self, n_a: int, n_b: int) -> int:
        if not (0 <= n_a <= self.trunc.n_a_max and 0 <= n_b <= self.trunc.n_b_max):
            raise OutOfTruncation(f"state ({n_a}, {n_b}) outside truncation")
        return n_a * self._nb_span + n_b

    def state(self, i: int) -> tuple[int, int]:
        return divmod(i, self._nb_span)


@dataclass
class OperatorMatrix:
    """Dense real matrix over a ProductBasis."""

    entries: np.ndarray
    basis: ProductBasis

    @property
    def dim(self) -> int:
        return self.basis.dim


class Oscillators(NamedTuple):
    a0: OperatorMatrix
    a_plus: OperatorMatrix
    a_minus: OperatorMatrix
    b0: OperatorMatrix
    b_plus: OperatorMatrix
    b_minus: OperatorMatrix


class JOperators(NamedTuple):
    j0: OperatorMatrix
    j_plus: OperatorMatrix
    j_minus: OperatorMatrix


class ClassicalOperators(NamedTuple):
    a0: OperatorMatrix
    a_plus: OperatorMatrix
    a_minus: OperatorMatrix
    b0: OperatorMatrix
    b_plus: OperatorMatrix
    b_minus: OperatorMatrix
    j0: OperatorMatrix
    j_plus: OperatorMatrix
    j_minus: OperatorMatrix


def _single_mode(levels: int, coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lowering/raising pair with <n-1|L|n> = coeffs[n-1]; raising = transpose."""
    lower = np.diag(coeffs, k=1)
    return lower, lower.T.copy()


def build_oscillators(t: FockTruncation, ctx: QContext) -> Oscillators:
    """Matrices of A0, A+-, B0, B+- on the product space (numbers as kron)."""
    q = ctx.q
    basis = ProductBasis(t)
    na_levels = np.arange(t.n_a_max + 1, dtype=float)
    nb_levels = np.arange(t.n_b_max + 1, dtype=float)

    a_coeff = np.sqrt((1.0 - q ** na_levels[1:]) / (1.0 - q))
    b_coeff = np.sqrt((q ** (-nb_levels[1:]) - 1.0) / (1.0 - q))
    a_lower_1, a_raise_1 = _single_mode(t.n_a_max + 1, a_coeff)
    b_lower_1, b_raise_1 = _single_mode(t.n_b_max + 1, b_coeff)

    eye_a = np.eye(t.n_a_max + 1)
    eye_b = np.eye(t.n_b_max + 1)

    def om(m: np.ndarray) -> OperatorMatrix:
        return OperatorMatrix(m, basis)

    return Oscillators(
        a0=om(np.kron(np.diag(na_levels), eye_b)),
        a_plus=om(np.kron(a_raise_1, eye_b)),
        a_minus=om(np.kron(a_lower_1, eye_b)),
        b0=om(np.kron(eye_a, np.diag(nb_levels))),
        b_plus=om(np.kron(eye_a, b_raise_1)),
        b_minus=om(np.kron(eye_a, b_lower_1)),
    )


def build_J(t: FockTruncation, ctx: QContext) -> JOperators:
    """J0 and J+- assembled from freshly built oscillators on t."""
    q = ctx.q
    osc = build_oscillators(t, ctx)
    basis = osc.a0.basis
    na = basis.na.astype(float)
    nb = basis.nb.astype(float)

    j0 = np.diag((na + nb + 1.0) / 2.0)
    # diagonal prefactor is evaluated on the output state; it commutes with
    # A+-B+- because both shift n_A and n_B together
    pref = q ** ((nb - na + 2.0) / 2.0)
    j_plus = pref[:, None] * (osc.a_plus.entries @ osc.b_plus.entries)
    j_minus = pref[:, None] * (osc.a_minus.entries @ osc.b_minus.entries)
    return JOperators(
        j0=OperatorMatrix(j0, basis),
        j_plus=OperatorMatrix(j_plus, basis),
        j_minus=OperatorMatrix(j_minus, basis),
    )


@dataclass(frozen=True)
class SectorBasis:
    """Indices of the sector |n>_beta = |n, n+beta-1>, ordered by n."""

    beta: int
    indices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.indices)


def sector(t: FockTruncation, beta: int) -> SectorBasis:
    """Enumerate the beta sector inside the truncated product space."""
    if beta < 1 or beta - 1 > t.n_b_max:
        raise EmptySector(f"beta={beta} has no states under truncation {t}")
    basis = ProductBasis(t)
    n_cap = min(t.n_a_max, t.n_b_max - (beta - 1))
    idx = tuple(basis.index(n, n + beta - 1) for n in range(n_cap + 1))
    return SectorBasis(beta=beta, indices=idx)


def ladder_power_action(
    which: str,
    power: int,
    state: tuple[int, int],
    t: FockTruncation,
    ctx: QContext,
) -> tuple[float, tuple[int, int] | None]:
    """Closed-form coefficient of (A-B-)^mu or (A+B+)^nu on |x>_beta.

    lower:  (A-B-)^mu |x>_beta = (1-q)^-mu
            sqrt( (q^-x;q)_mu (q^(1-x-beta);q)_mu q^(mu x - C(mu,2)) ) |x-mu>_beta
    raise:  (A+B+)^nu |y>_beta = (1-q)^-nu
            sqrt( (q^(y+1);q)_nu (q^(y+beta);q)_nu q^(-nu(y+beta) - C(nu,2)) ) |y+nu>_beta

    The radicand is accumulated in positive per-step pairs, so no negative
    intermediate products appear.  Lowering past the bottom returns
    coefficient 0 with target None; raising past the truncation raises
    OutOfTruncation.
    """
    if power < 0:
        raise ValueError("power must be >= 0")
    x, beta = state
    if x < 0 or beta < 1:
        raise ValueError("state must have x >= 0 and beta >= 1")
    q = ctx.q
    if which == "lower":
        if power > x:
            return 0.0, None
        rad = 1.0
        for j in range(power):
            rad *= (
                (1.0 - q ** (j - x))
                * (1.0 - q ** (j + 1 - x - beta))
                * q ** (x - j)
            )
        coeff = (1.0 - q) ** (-power) * np.sqrt(rad)
        return float(coeff), (x - power, beta)
    if which == "raise":
        y = x
        target = y + power
        if target > t.n_a_max or target + beta - 1 > t.n_b_max:
            raise OutOfTruncation(
                f"(A+B+)^{power} from ({y}, beta={beta}) leaves the truncation"
            )
        rad = 1.0
        for j in range(power):
            rad *= (
                (1.0 - q ** (y + 1 + j))
                * (1.0 - q ** (y + beta + j))
                * q ** (-(y + beta) - j)
            )
        coeff = (1.0 - q) ** (-power) * np.sqrt(rad)
        return float(coeff), (target, beta)
    raise ValueError(f"which must be 'lower' or 'raise', got {which!r}")


def build_classical(t: FockTruncation) -> ClassicalOperators:
    """Ordinary boson pair and su(1,1) generators (q -> 1 companions):

    A~-|n> = sqrt(n)|n-1>, J~0 = (A~0+B~0+1)/2, J~+- = A~+-B~+-,
    with [J~+, J~-] = -2 J~0 on the sectors |n, n+beta-1>.
    """
    basis = ProductBasis(t)
    na_levels = np.arange(t.n_a_max + 1, dtype=float)
    nb_levels = np.arange(t.n_b_max + 1, dtype=float)
    a_lower_1, a_raise_1 = _single_mode(t.n_a_max + 1, np.sqrt(na_levels[1:]))
    b_lower_1, b_raise_1 = _single_mode(t.n_b_max + 1, np.sqrt(nb_levels[1:]))
    eye_a = np.eye(t.n_a_max + 1)
    eye_b = np.eye(t.n_b_max + 1)

    a0 = np.kron(np.diag(na_levels), eye_b)
    b0 = np.kron(eye_a, np.diag(nb_levels))
    a_plus = np.kron(a_raise_1, eye_b)
    a_minus = np.kron(a_lower_1, eye_b)
    b_plus = np.kron(eye_a, b_raise_1)
    b_minus = np.kron(eye_a, b_lower_1)

    def om(m: np.ndarray) -> OperatorMatrix:
        return OperatorMatrix(m, basis)

    return ClassicalOperators(
        a0=om(a0),
        a_plus=om(a_plus),
        a_minus=om(a_minus),
        b0=om(b0),
        b_plus=om(b_plus),
        b_minus=om(b_minus),
        j0=om((a0 + b0 + np.eye(basis.dim)) / 2.0),
        j_plus=om(a_plus @ b_plus),
        j_minus=om(a_minus @ b_minus),
    )


def interior_indices(
    basis: ProductBasis, na_keep: int, nb_keep: int
) -> np.ndarray:
    """Boolean mask selecting states with n_A <= na_keep and n_B <= nb_keep."""
    return (basis.na <= na_keep) & (basis.nb <= nb_keep)
