"""Exact rational error budgets for majority-vote self-correction.

The two budget functions of (q, n, eps) are

    A(q, n, e) = 2 (e + (q-1)/(q^(n+1)-1)) * ((q^(n+1)-q)/(q^(n+1)-1))^(-2)
                 - (q-1)^2 / (q^(n+1)-1)

    B(q, n, e) = 2 (q-1) * (q^(n+1)-1)/(q^(n+1)-q)
                   * (2e + 2A + 2 q^2 (q+1)^2 / (q^(n+1)-q))
                 + 2A + 2 q^2 (q+1)^2 / (q^(n+1)-q)

and the correction guarantee activates when

    hypothesis 1:  A + 2 q^2 (q+1)^2 / D < 1/2     (D = q^(n+1)-1 or q^(n+1)-q)
    hypothesis 2:  9B + q^(3-n) < 1

in which case the corrected map provably agrees with the input on at least
a 1 - 2e - 2A - 2 q^2 (q+1)^2 / (q^(n+1)-q) fraction of points.  The two
denominator variants of hypothesis 1 both appear in the source material;
we evaluate both and gate guarantees on the stricter (-q) form.

Everything here is exact `fractions.Fraction` arithmetic — the hypothesis
predicates are sharp inequalities, so no float ever enters a
guarantee-bearing path.  Float twins are provided as an independent
cross-check oracle only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .field import is_prime

RationalLike = Union[Fraction, int]

MAX_EPS_DENOMINATOR = 10**6


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    for p in range(2, q + 1):
        if p * p > q:
            return q >= 2 and is_prime(q)
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
    return False


def _validate(q: int, n: int, eps: RationalLike) -> Fraction:
    if not is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power >= 2")
    if n < 1:
        raise ValueError(f"n = {n} must be >= 1")
    e = Fraction(eps)
    if not 0 <= e <= 1:
        raise ValueError(f"eps = {e} must lie in [0, 1]")
    return e


def compute_A(q: int, n: int, eps: RationalLike) -> Fraction:
    """Exact value of the pair-level budget A(q, n, eps)."""
    e = _validate(q, n, eps)
    big = q ** (n + 1)
    ratio_inv_sq = Fraction(big - 1, big - q) ** 2
    return 2 * (e + Fraction(q - 1, big - 1)) * ratio_inv_sq - Fraction((q - 1) ** 2, big - 1)


def compute_B(q: int, n: int, eps: RationalLike) -> Fraction:
    """Exact value of the collinearity budget B(q, n, eps), built from A."""
    e = _validate(q, n, eps)
    big = q ** (n + 1)
    a = compute_A(q, n, e)
    crowding = Fraction(2 * q * q * (q + 1) ** 2, big - q)
    inner = 2 * e + 2 * a + crowding
    return 2 * (q - 1) * Fraction(big - 1, big - q) * inner + 2 * a + crowding


def compute_A_float(q: int, n: int, eps: float) -> float:
    """Independent floating-point evaluation of A, for cross-checking only."""
    big = float(q ** (n + 1))
    ratio = (big - q) / (big - 1.0)
    return 2.0 * (eps + (q - 1.0) / (big - 1.0)) / (ratio * ratio) - (q - 1.0) ** 2 / (big - 1.0)


def compute_B_float(q: int, n: int, eps: float) -> float:
    """Independent floating-point evaluation of B, for cross-checking only."""
    big = float(q ** (n + 1))
    a = compute_A_float(q, n, eps)
    crowding = 2.0 * q * q * (q + 1.0) ** 2 / (big - q)
    inner = 2.0 * eps + 2.0 * a + crowding
    return 2.0 * (q - 1.0) * (big - 1.0) / (big - q) * inner + 2.0 * a + crowding


@dataclass(frozen=True)
class BoundReport:
    """Exact hypothesis evaluation for one (q, n, eps)."""

    q: int
    n: int
    eps: Fraction
    A: Fraction
    B: Fraction
    hyp1_strict: bool    # A + 2q^2(q+1)^2/(q^(n+1)-q) < 1/2
    hyp1_theorem: bool   # A + 2q^2(q+1)^2/(q^(n+1)-1) < 1/2
    hyp2: bool           # 9B + q^(3-n) < 1
    guaranteed_agreement: Fraction

    @property
    def all_hypotheses(self) -> bool:
        """True when the guarantee activates (stricter hypothesis-1 variant)."""
        return self.hyp1_strict and self.hyp2

    def to_json_dict(self) -> dict:
        def frac(x: Fraction) -> dict:
            return {"num": x.numerator, "den": x.denominator}

        return {
            "q": self.q,
            "n": self.n,
            "eps": frac(self.eps),
            "A": frac(self.A),
            "B": frac(self.B),
            "hyp1_strict": self.hyp1_strict,
            "hyp1_theorem": self.hyp1_theorem,
            "hyp2": self.hyp2,
            "guaranteed_agreement": frac(self.guaranteed_agreement),
        }


def hypotheses(q: int, n: int, eps: RationalLike) -> BoundReport:
    """Evaluate both hypothesis variants and the agreement guarantee, exactly."""
    e = _validate(q, n, eps)
    big = q ** (n + 1)
    a = compute_A(q, n, e)
    b = compute_B(q, n, e)
    bulk = 2 * q * q * (q + 1) ** 2
    half = Fraction(1, 2)
    hyp1_strict = a + Fraction(bulk, big - q) < half
    hyp1_theorem = a + Fraction(bulk, big - 1) < half
    hyp2 = 9 * b + Fraction(1, q ** (n - 3)) < 1 if n >= 3 else 9 * b + Fraction(q ** (3 - n)) < 1
    guaranteed = 1 - 2 * e - 2 * a - Fraction(bulk, big - q)
    return BoundReport(
        q=q, n=n, eps=e, A=a, B=b,
        hyp1_strict=hyp1_strict, hyp1_theorem=hyp1_theorem, hyp2=hyp2,
        guaranteed_agreement=guaranteed,
    )


def max_eps(q: int, n: int) -> Fraction:
    """Largest eps = m / 10^6 satisfying both strict hypotheses; 0 if none.

    A and B are nondecreasing in eps (all eps coefficients are positive),
    so the predicate is monotone and bisection over m is exact.
    """

    def ok(m: int) -> bool:
        r = hypotheses(q, n, Fraction(m, MAX_EPS_DENOMINATOR))
        return r.hyp1_strict and r.hyp2

    if not ok(0):
        return Fraction(0)
    lo, hi = 0, MAX_EPS_DENOMINATOR
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid - 1
    return Fraction(lo, MAX_EPS_DENOMINATOR)


def parse_fraction(text: str) -> Fraction:
    """Parse 'NUM/DEN', 'NUM', or a decimal string into an exact Fraction."""
    return Fraction(text)
