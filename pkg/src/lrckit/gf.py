"""Arithmetic in GF(p^t) with a canonical, reproducible element order.

Field elements are plain integers in [0, q).  The element with index
``a`` represents the polynomial ``c0 + c1*x + ... + c_{t-1}*x^{t-1}``
where ``(c0, ..., c_{t-1})`` are the base-p digits of ``a``, reduced
modulo a monic irreducible polynomial of degree t.  Index 0 is the zero
element and index 1 the multiplicative identity, so ascending index
order gives a deterministic enumeration of F_q.

When no modulus is supplied, the lexicographically smallest monic
irreducible of degree t over GF(p) is selected (scanning candidates by
the integer index of their coefficient vector), which makes every field
representation reproducible across runs.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegreeMismatch,
    FieldMismatch,
    InvalidParameters,
    NotPrime,
    ReducibleModulus,
    ZeroInverse,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(n: int) -> Optional[tuple[int, int]]:
    """Decompose n = p^s with p prime, or return None."""
    if n < 2:
        return None
    for p in range(2, n + 1):
        if p * p > n:
            return (n, 1) if is_prime(n) else None
        if n % p:
            continue
        if not is_prime(p):
            return None
        s = 0
        m = n
        while m % p == 0:
            m //= p
            s += 1
        return (p, s) if m == 1 else None
    return None


# -- polynomial arithmetic over GF(p), coefficients ascending ------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            f = (c * inv_lead) % p
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - f * mod[j]) % p
    del a[dm:]
    return a


def _poly_index(coeffs: Sequence[int], p: int) -> int:
    idx = 0
    for c in reversed(coeffs):
        idx = idx * p + c
    return idx


def _poly_from_index(idx: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(idx % p)
        idx //= p
    return out


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in range(p ** d):
            divisor = _poly_from_index(low, p, d) + [1]
            if not _poly_trim(list(_poly_mod(poly, divisor, p))):
                return False
    return True


def default_modulus(p: int, t: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree t over GF(p)."""
    for low in range(p ** t):
        cand = _poly_from_index(low, p, t) + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise ReducibleModulus(f"no irreducible of degree {t} over GF({p})")  # unreachable


class FieldTables:
    """Dense lookup tables for vectorized GF(q) arithmetic.

    ``add``/``mul`` are (q, q) arrays, ``neg``/``inv`` are (q,) arrays
    (``inv[0]`` is a 0 sentinel), and ``pow_`` rows hold a -> a^e for
    e = 0..4, the largest exponent the parity-check constructions use.
    """

    def __init__(self, field: "Field"):
        q = field.q
        dtype = np.uint8 if q <= 256 else np.int32
        self.dtype = dtype
        add = np.zeros((q, q), dtype=dtype)
        mul = np.zeros((q, q), dtype=dtype)
        for a in range(q):
            for b in range(a, q):
                s = field.add(a, b)
                m = field.mul(a, b)
                add[a, b] = add[b, a] = s
                mul[a, b] = mul[b, a] = m
        self.add = add
        self.mul = mul
        self.neg = np.array([field.neg(a) for a in range(q)], dtype=dtype)
        inv = [0] + [field.inv(a) for a in range(1, q)]
        self.inv = np.array(inv, dtype=dtype)
        self.pow_ = np.array(
            [[field.pow(a, e) for a in range(q)] for e in range(5)], dtype=dtype
        )


class Field:
    """The finite field GF(p^t) acting on integer element indices."""

    def __init__(self, p: int, t: int, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if t < 1:
            raise InvalidParameters(f"extension degree must be >= 1, got {t}")
        if modulus is None:
            modulus = default_modulus(p, t)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != t + 1 or modulus[-1] != 1:
                raise DegreeMismatch(
                    f"modulus must be monic of degree {t}, got {list(modulus)}"
                )
            if not _is_irreducible(modulus, p):
                raise ReducibleModulus(f"{list(modulus)} is reducible over GF({p})")
        self.p = p
        self.t = t
        self.modulus = tuple(modulus)
        self.q = p ** t
        self._tables: Optional[FieldTables] = None

    # -- identity ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Field)
            and (self.p, self.t, self.modulus) == (other.p, other.t, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.t, self.modulus))

    def __repr__(self) -> str:
        return f"Field(p={self.p}, t={self.t}, modulus={list(self.modulus)})"

    # -- element representation --------------------------------------------

    def check(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.q:
            raise FieldMismatch(f"{a!r} is not an element index of GF({self.q})")
        return int(a)

    def coeffs_of(self, a: int) -> tuple[int, ...]:
        """Base-p digits of the index: the polynomial-basis coordinates."""
        return tuple(_poly_from_index(self.check(a), self.p, self.t))

    def index_of(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.t:
            raise DegreeMismatch(f"need {self.t} coefficients, got {len(coeffs)}")
        return _poly_index([c % self.p for c in coeffs], self.p)

    def elements(self) -> list[int]:
        """All q elements in ascending index order."""
        return list(range(self.q))

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        if self.p == 2:
            return a ^ b
        if self.t == 1:
            return (a + b) % self.p
        ca, cb = self.coeffs_of(a), self.coeffs_of(b)
        return _poly_index([(x + y) % self.p for x, y in zip(ca, cb)], self.p)

    def neg(self, a: int) -> int:
        a = self.check(a)
        if self.p == 2:
            return a
        if self.t == 1:
            return (-a) % self.p
        return _poly_index([(-c) % self.p for c in self.coeffs_of(a)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        if a == 0 or b == 0:
            return 0
        if self.t == 1:
            return (a * b) % self.p
        prod = _poly_mul(self.coeffs_of(a), self.coeffs_of(b), self.p)
        red = _poly_mod(prod, self.modulus, self.p) if len(prod) > self.t else prod
        red = red + [0] * (self.t - len(red))
        return _poly_index(red, self.p)

    def inv(self, a: int) -> int:
        a = self.check(a)
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        """a^e by repeated squaring; e must be a nonnegative integer."""
        a = self.check(a)
        if e < 0:
            raise InvalidParameters(f"exponent must be >= 0, got {e}")
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- structure -----------------------------------------------------------

    def subfield(self, sub_q: int) -> list[int]:
        """Elements of the subfield GF(sub_q), ascending; needs sub_q = p^s, s | t."""
        pp = prime_power(sub_q)
        if pp is None or pp[0] != self.p or self.t % pp[1] != 0:
            raise InvalidParameters(
                f"GF({sub_q}) is not a subfield of GF({self.q})"
            )
        return [a for a in range(self.q) if self.pow(a, sub_q) == a]

    def tables(self) -> FieldTables:
        if self._tables is None:
            self._tables = FieldTables(self)
        return self._tables

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "t": self.t, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict) -> "Field":
        return cls(d["p"], d["t"], d["modulus"])


def make_field(p: int, t: int, modulus: Optional[Sequence[int]] = None) -> Field:
    """Validated GF(p^t); picks the canonical modulus when none is given."""
    return Field(p, t, modulus)
