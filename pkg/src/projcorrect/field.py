"""Exact arithmetic in GF(p^k) with explicit modulus polynomials.

Elements are residues of F_p[x] modulo a monic irreducible polynomial of
degree k, stored by their integer code sum(c_i * p^i) for coefficients
c_0..c_{k-1} (little-endian).  The code is a bijection onto [0, q) and is
the canonical serialization of an element.

Every automorphism of GF(p^k) is a Frobenius power a -> a^(p^j), so the
:class:`Frobenius` type is just an exponent j in [0, k).

The scope is desk-scale fields (q <= 128): irreducibility of the modulus is
checked eagerly by exhaustive trial division, and full q x q operation
tables are materialized lazily for the numeric kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

MAX_FIELD_ORDER = 128

# Monic irreducible moduli used when none is supplied, little-endian
# coefficient lists (constant term first).  k = 1 always uses x itself.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),        # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),     # x^3 + x + 1
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),        # x^2 + 1
    (3, 3): (1, 2, 0, 1),     # x^3 + 2x + 1
    (5, 1): (0, 1),
    (5, 2): (2, 0, 1),        # x^2 + 2
    (5, 3): (1, 1, 0, 1),     # x^3 + x + 1
    (7, 1): (0, 1),
    (7, 2): (1, 0, 1),        # x^2 + 1
}


def is_prime(n: int) -> bool:
    """Primality by trial division (inputs here are tiny)."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul_mod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    """(a * b) mod modulus over F_p, all little-endian coefficient lists."""
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_rem(prod, modulus, p)


def _poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """a mod b over F_p; b must be nonzero."""
    r = list(a)
    _poly_trim(r)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(r) - 1 >= db and r:
        coef = (r[-1] * inv_lead) % p
        shift = len(r) - 1 - db
        for i, bi in enumerate(b):
            r[i + shift] = (r[i + shift] - coef * bi) % p
        _poly_trim(r)
    return r


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by all monic polynomials of degree <= k/2."""
    k = len(modulus) - 1
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        # all monic divisor candidates of degree d
        for code in range(p**d):
            cand = [(code // p**i) % p for i in range(d)] + [1]
            if not _poly_rem(modulus, cand, p):
                return False
    return True


class FieldSpec:
    """The finite field GF(p^k) defined by an explicit monic modulus.

    Two specs compare equal iff (p, k, modulus) coincide.  Operation
    tables indexed by element code are built lazily and cached on the
    instance; use :func:`GF` to share instances (and tables) per field.
    """

    __slots__ = ("p", "k", "modulus", "_tables", "_scalar", "__weakref__")

    def __init__(self, p: int, k: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if k < 1:
            raise ValueError(f"extension degree k = {k} must be >= 1")
        if p**k > MAX_FIELD_ORDER:
            raise ValueError(f"field order {p**k} exceeds supported maximum {MAX_FIELD_ORDER}")
        if modulus is None:
            if (p, k) not in DEFAULT_MODULI:
                raise ValueError(f"no default modulus for (p, k) = ({p}, {k}); supply one")
            modulus = DEFAULT_MODULI[(p, k)]
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != k + 1:
            raise ValueError(f"modulus must have k+1 = {k + 1} coefficients, got {len(modulus)}")
        if any(not 0 <= c < p for c in modulus):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if not _is_irreducible(modulus, p):
            raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.modulus = modulus
        self._tables = None
        self._scalar = None

    @property
    def q(self) -> int:
        return self.p**self.k

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"

    # -- element construction -------------------------------------------------

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        if len(coeffs) != self.k:
            raise ValueError(f"expected exactly k = {self.k} coefficients")
        if any(not 0 <= c < self.p for c in coeffs):
            raise ValueError("coefficients must lie in [0, p)")
        return FieldElement(self, sum(c * self.p**i for i, c in enumerate(coeffs)))

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    # -- code-level arithmetic -----------------------------------------------
    #
    # The *_poly methods compute directly on polynomial coefficients and are
    # the ground truth; the public code ops are backed by scalar lookup
    # tables built from them (q <= 128, so at most 128x128 entries).

    def coeffs_of(self, code: int) -> tuple[int, ...]:
        return tuple((code // self.p**i) % self.p for i in range(self.k))

    def _code_of(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def add_codes_poly(self, a: int, b: int) -> int:
        ca, cb = self.coeffs_of(a), self.coeffs_of(b)
        return self._code_of([(x + y) % self.p for x, y in zip(ca, cb)])

    def neg_code_poly(self, a: int) -> int:
        return self._code_of([(-x) % self.p for x in self.coeffs_of(a)])

    def mul_codes_poly(self, a: int, b: int) -> int:
        prod = _poly_mul_mod(list(self.coeffs_of(a)), list(self.coeffs_of(b)), self.modulus, self.p)
        prod += [0] * (self.k - len(prod))
        return self._code_of(prod)

    def inv_code_poly(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return self._pow_code_poly(a, self.q - 2)  # a^(q-2) = a^(-1) in GF(q)*

    def frob_code_poly(self, j: int, a: int) -> int:
        out = a
        for _ in range(j % self.k):
            out = self._pow_code_poly(out, self.p)
        return out

    def _pow_code_poly(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_codes_poly(result, base)
            base = self.mul_codes_poly(base, base)
            e >>= 1
        return result

    def _scalar_tables(self):
        if self._scalar is None:
            q = self.q
            rng = range(q)
            add = [[self.add_codes_poly(a, b) for b in rng] for a in rng]
            mul = [[self.mul_codes_poly(a, b) for b in rng] for a in rng]
            neg = [self.neg_code_poly(a) for a in rng]
            inv = [0] + [self.inv_code_poly(a) for a in range(1, q)]
            frob = [[self.frob_code_poly(j, a) for a in rng] for j in range(self.k)]
            self._scalar = (add, mul, neg, inv, frob)
        return self._scalar

    def add_codes(self, a: int, b: int) -> int:
        return self._scalar_tables()[0][a][b]

    def sub_codes(self, a: int, b: int) -> int:
        s = self._scalar_tables()
        return s[0][a][s[2][b]]

    def neg_code(self, a: int) -> int:
        return self._scalar_tables()[2][a]

    def mul_codes(self, a: int, b: int) -> int:
        return self._scalar_tables()[1][a][b]

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return self._scalar_tables()[3][a]

    def frob_code(self, j: int, a: int) -> int:
        return self._scalar_tables()[4][j % self.k][a]

    def tables(self) -> "FieldTables":
        """Dense numpy operation tables indexed by element code (lazy)."""
        if self._tables is None:
            add, mul, neg, inv, frob = self._scalar_tables()
            self._tables = FieldTables(
                add=np.array(add, dtype=np.int16),
                mul=np.array(mul, dtype=np.int16),
                neg=np.array(neg, dtype=np.int16),
                inv=np.array(inv, dtype=np.int16),
                frob=np.array(frob, dtype=np.int16),
            )
        return self._tables

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "FieldSpec":
        return GF(int(d["p"]), int(d["k"]), tuple(int(c) for c in d["modulus"]))


@dataclass(frozen=True)
class FieldTables:
    """Numpy lookup tables for code-level field arithmetic."""

    add: np.ndarray   # (q, q)
    mul: np.ndarray   # (q, q)
    neg: np.ndarray   # (q,)
    inv: np.ndarray   # (q,), entry 0 unused
    frob: np.ndarray  # (k, q)


_FIELD_CACHE: dict[tuple[int, int, tuple[int, ...] | None], FieldSpec] = {}


def GF(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Interning factory for field specs; reuses cached operation tables."""
    resolved = tuple(modulus) if modulus is not None else DEFAULT_MODULI.get((p, k))
    key = (p, k, resolved)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldSpec(p, k, modulus)
    return _FIELD_CACHE[key]


class FieldElement:
    """An element of GF(p^k), identified by its integer code in [0, q)."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        if not 0 <= code < spec.q:
            raise ValueError(f"element code {code} out of range [0, {spec.q})")
        self.spec = spec
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coeffs_of(self.code)

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise ValueError(f"mismatched fields: {self.spec} vs {other.spec}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.add_codes(self.code, other.code))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.sub_codes(self.code, other.code))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.neg_code(self.code))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.mul_codes(self.code, other.code))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.mul_codes(self.code, self.spec.inv_code(other.code)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv_code(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.code == other.code

    def __hash__(self) -> int:
        return hash((self.spec, self.code))

    def __repr__(self) -> str:
        if self.spec.k == 1:
            return f"{self.code}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                x = "x" if i == 1 else f"x^{i}"
                terms.append(x if c == 1 else f"{c}{x}")
        return "+".join(reversed(terms)) if terms else "0"


@dataclass(frozen=True)
class Frobenius:
    """The field automorphism a -> a^(p^exponent) of GF(p^k)."""

    spec: FieldSpec
    exponent: int

    def __post_init__(self):
        if not 0 <= self.exponent < self.spec.k:
            raise ValueError(f"Frobenius exponent must lie in [0, {self.spec.k})")

    def __call__(self, a: FieldElement) -> FieldElement:
        return frobenius_apply(self, a)

    def compose(self, other: "Frobenius") -> "Frobenius":
        if other.spec != self.spec:
            raise ValueError("mismatched fields")
        return Frobenius(self.spec, (self.exponent + other.exponent) % self.spec.k)

    def is_identity(self) -> bool:
        return self.exponent == 0


# -- operation-style API -------------------------------------------------------


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Sum of two elements of the same field."""
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Product of two elements of the same field."""
    return a * b


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse; error on zero."""
    return a.inverse()


def frobenius_apply(frob: Frobenius, a: FieldElement) -> FieldElement:
    """Apply a -> a^(p^j)."""
    if a.spec != frob.spec:
        raise ValueError("element and automorphism belong to different fields")
    return FieldElement(a.spec, a.spec.frob_code(frob.exponent, a.code))


def enumerate_elements(spec: FieldSpec) -> tuple[FieldElement, ...]:
    """All q elements in increasing integer-code order."""
    return tuple(FieldElement(spec, c) for c in range(spec.q))


def iter_codes(spec: FieldSpec) -> Iterator[int]:
    return iter(range(spec.q))
