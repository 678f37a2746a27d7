"""Scalar q-series primitives.

Conventions (0 < q < 1 throughout):

    (a; q)_n   = prod_{k=0}^{n-1} (1 - a q^k),          (a; q)_0 = 1
    (a; q)_oo  = prod_{k>=0}    (1 - a q^k)
    [n, k]_q   = (q;q)_n / ((q;q)_k (q;q)_{n-k})
    e_q(z)     = 1 / (z; q)_oo        (little q-exponential)
    E_q(z)     = (-z; q)_oo           (big q-exponential, entire)

and the basic hypergeometric series

    r_phi_s(a_1..a_r; b_1..b_s; q, z)
        = sum_n  (a_1;q)_n ... (a_r;q)_n / ((q;q)_n (b_1;q)_n ... (b_s;q)_n)
                 * [(-1)^n q^(n(n-1)/2)]^(1+s-r) * z^n.

Exact termination is only recognised when a numerator parameter is passed
as a `QPower`, i.e. as an integer exponent of the base.  Float parameters
are never pattern-matched against powers of q, so a float that merely
happens to be close to q^-N follows the ordinary convergence policy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DenominatorPole, NonConvergent, PoleHit

__all__ = [
    "QContext",
    "SeriesValue",
    "QPower",
    "CompensatedSum",
    "q_pochhammer",
    "q_pochhammer_inf",
    "q_binomial",
    "little_qexp",
    "big_qexp",
    "basic_hypergeometric",
]


@dataclass(frozen=True)
class QContext:
    """Evaluation context: the base q plus numerical policy knobs.

    q           base, strictly inside (0, 1)
    rel_tol     target relative accuracy of returned values
    tail_cutoff term-magnitude threshold for truncating infinite sums/products
    max_terms   hard budget before giving up with NonConvergent
    """

    q: float
    rel_tol: float = 1e-12
    tail_cutoff: float = 1e-18
    max_terms: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie strictly inside (0, 1), got {self.q}")
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")
        if self.tail_cutoff <= 0.0:
            raise ValueError("tail_cutoff must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


@dataclass(frozen=True)
class SeriesValue:
    """A numerically evaluated sum or product with truncation bookkeeping."""

    value: float
    terms_used: int
    tail_estimate: float


@dataclass(frozen=True)
class QPower:
    """Marker for a parameter that equals q**exponent exactly.

    Passing QPower(-n) as a numerator parameter makes the series terminate
    after n + 1 terms with the final factor evaluated exactly to zero.
    """

    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int):
            raise TypeError("QPower exponent must be an integer")

    def value(self, q: float) -> float:
        return q ** self.exponent


Param = Union[float, QPower]


class CompensatedSum:
    """Neumaier compensated accumulator: the running error of the plain
    floating-point sum is carried in a second word and folded back in
    `total`, so the result is accurate to ~1 ulp of the true sum."""

    __slots__ = ("_sum", "_comp")

    def __init__(self):
        self._sum = 0.0
        self._comp = 0.0

    def add(self, value: float) -> None:
        t = self._sum + value
        if abs(self._sum) >= abs(value):
            self._comp += (self._sum - t) + value
        else:
            self._comp += (value - t) + self._sum
        self._sum = t

    @property
    def total(self) -> float:
        return self._sum + self._comp


def _factor(p: Param, q: float, k: int) -> float:
    """One Pochhammer factor 1 - p q^k, exact for QPower parameters."""
    if isinstance(p, QPower):
        return 1.0 - q ** (p.exponent + k)
    return 1.0 - p * q ** k


def q_pochhammer(a: float, n: int, ctx: QContext) -> float:
    """Finite product (a; q)_n."""
    if n < 0:
        raise ValueError("q_pochhammer order n must be >= 0")
    q = ctx.q
    prod = 1.0
    for k in range(n):
        prod *= 1.0 - a * q ** k
    return prod


def q_pochhammer_inf(a: float, ctx: QContext, reciprocal: bool = False) -> SeriesValue:
    """Infinite product (a; q)_oo, truncated when |a q^k| < tail_cutoff.

    The tail estimate bounds the error from dropped factors:
    |log prod_{k>=K} (1 - a q^k)| <= |a q^K| / (1 - q) to first order.

    With reciprocal=True a factor vanishing within rel_tol raises PoleHit
    (the caller intends to divide by the result).
    """
    q = ctx.q
    prod = 1.0
    term = a
    k = 0
    while abs(term) >= ctx.tail_cutoff:
        f = 1.0 - term
        if reciprocal and abs(f) < ctx.rel_tol:
            raise PoleHit(f"(a; q)_oo factor vanished at k={k} for a={a}")
        prod *= f
        term *= q
        k += 1
        if k >= ctx.max_terms:
            raise NonConvergent(
                f"(a; q)_oo did not reach tail cutoff within {ctx.max_terms} factors"
            )
    tail = abs(prod) * abs(term) / (1.0 - q)
    return SeriesValue(prod, k, tail)


def q_binomial(n: int, k: int, ctx: QContext) -> float:
    """Gaussian binomial [n, k]_q by the stable product form.

    Computed as prod_{i=1}^{k} (1 - q^{n-k+i}) / (1 - q^i) with k replaced
    by min(k, n - k) first, so [n, k]_q == [n, n-k]_q follows the same
    product path and the symmetry holds exactly.
    """
    if k < 0 or k > n:
        return 0.0
    q = ctx.q
    k = min(k, n - k)
    prod = 1.0
    for i in range(1, k + 1):
        prod *= (1.0 - q ** (n - k + i)) / (1.0 - q ** i)
    return prod


def little_qexp(z: float, ctx: QContext) -> SeriesValue:
    """e_q(z) = 1 / (z; q)_oo, evaluated from the product form.

    Defined for any z off the pole set {q^-m : m >= 0}; arguments of any
    magnitude with z < 1 are safe.  For |z| < 1 the value agrees with the
    series sum_n z^n / (q; q)_n within rel_tol.
    """
    pinf = q_pochhammer_inf(z, ctx, reciprocal=True)
    value = 1.0 / pinf.value
    tail = pinf.tail_estimate / (pinf.value * pinf.value)
    return SeriesValue(value, pinf.terms_used, abs(tail))


def big_qexp(z: float, ctx: QContext) -> SeriesValue:
    """E_q(z) = (-z; q)_oo, entire in z; satisfies e_q(z) E_q(-z) = 1."""
    pinf = q_pochhammer_inf(-z, ctx)
    return SeriesValue(pinf.value, pinf.terms_used, pinf.tail_estimate)


def basic_hypergeometric(
    numerators: Sequence[Param],
    denominators: Sequence[Param],
    z: float,
    ctx: QContext,
) -> SeriesValue:
    """Evaluate r_phi_s(numerators; denominators; q, z).

    Termination: the smallest N with QPower(-N) among the numerators caps
    the sum at N + 1 exactly computed terms (tail_estimate 0).  Without such
    a marker the series must converge: any z when r <= s, |z| < 1 when
    r == s + 1, otherwise NonConvergent.  Terms are accumulated in
    increasing order with compensated summation.
    """
    q = ctx.q
    r = len(numerators)
    s = len(denominators)
    p = 1 + s - r

    terminate_at = None
    for a in numerators:
        if isinstance(a, QPower) and a.exponent <= 0:
            n_stop = -a.exponent
            if terminate_at is None or n_stop < terminate_at:
                terminate_at = n_stop

    if terminate_at is None:
        if r > s + 1:
            raise NonConvergent(
                f"{r}_phi_{s} with no terminating numerator parameter diverges"
            )
        if r == s + 1 and abs(z) >= 1.0:
            raise NonConvergent(
                f"{r}_phi_{s} requires |z| < 1 without termination, got {z}"
            )

    acc = CompensatedSum()
    acc.add(1.0)
    term = 1.0
    prev = 1.0
    n = 0
    sign_p = -1.0 if p % 2 else 1.0
    scale = 1.0

    while True:
        if terminate_at is not None and n >= terminate_at:
            return SeriesValue(acc.total, n + 1, 0.0)
        num = 1.0
        for a in numerators:
            num *= _factor(a, q, n)
        den = 1.0 - q ** (n + 1)
        for b in denominators:
            f = _factor(b, q, n)
            if f == 0.0:
                raise DenominatorPole(
                    f"denominator parameter hit a pole at term {n + 1}"
                )
            den *= f
        extra = sign_p * q ** (n * p) if p != 0 else 1.0
        prev = term
        term = term * (num / den) * z * extra
        n += 1
        if term == 0.0:
            # a numerator factor vanished: every later term vanishes too
            return SeriesValue(acc.total, n, 0.0)
        if terminate_at is None:
            mag = abs(acc.total)
            if mag > scale:
                scale = mag
            if abs(term) < ctx.tail_cutoff * scale:
                ratio = abs(term) / abs(prev) if prev != 0.0 else 0.0
                if ratio >= 1.0:
                    raise NonConvergent(
                        f"series terms stopped decreasing (ratio {ratio:.3g})"
                    )
                tail = abs(term) / (1.0 - ratio)
                return SeriesValue(acc.total, n, tail)
        acc.add(term)
        if n >= ctx.max_terms:
            raise NonConvergent(
                f"series did not converge within {ctx.max_terms} terms"
            )
