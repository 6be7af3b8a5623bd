"""Parity-check construction for the distance-5 and distance-6 codes.

The check matrix H has one indicator row per block (1 on the block's
r+1 columns, 0 elsewhere) followed by d-2 power rows: the column for
element a of block i reads (0,..,1,..,0, a, a^2, .., a^{d-2})^T.  The
indicator rows give every coordinate an r-element repair set; the power
rows push the distance to d.

k = n - m - (d-2) whenever H has full row rank, which holds for every
valid design because the power rows restricted to a block form a
Vandermonde system on >= d-1 distinct points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from . import linalg
from .designs import BlockDesign, validate_design
from .errors import (
    CharacteristicNotTwo,
    DesignInvalid,
    InvalidParameters,
    LocalityTooSmall,
    RankDeficient,
)
from .gf import Field, prime_power


class ParityCheckMatrix:
    """(m + d - 2) x n check matrix with the block/power layout above."""

    def __init__(self, field: Field, design: BlockDesign, d_target: int, entries: np.ndarray):
        self.field = field
        self.design = design
        self.d_target = d_target
        self.entries = entries
        self.m = design.m
        self.w = design.w
        self.n = design.m * design.w
        self.rows = self.m + d_target - 2

    def block_of(self, col: int) -> tuple[int, int]:
        """(block index, index within block) of a column."""
        if not 0 <= col < self.n:
            raise InvalidParameters(f"column {col} out of range 0..{self.n - 1}")
        return divmod(col, self.w)

    def column_element(self, col: int) -> int:
        i, j = self.block_of(col)
        return self.design.blocks[i][j]

    def block_columns(self, i: int) -> range:
        return range(i * self.w, (i + 1) * self.w)

    @property
    def power_rows(self) -> np.ndarray:
        return self.entries[self.m:, :]

    def has_indicator_layout(self) -> bool:
        """True iff the top m rows are exactly the block indicator pattern.

        Columns then touch no indicator row outside their own block, so a
        submatrix on any column subset keeps its rank when restricted to
        the subset's block rows plus the power rows.  Hand-mutated entries
        (tests do that) can break this, in which case verifiers fall back
        to full-height submatrices.
        """
        expect = np.zeros((self.m, self.n), dtype=self.entries.dtype)
        for i in range(self.m):
            expect[i, i * self.w:(i + 1) * self.w] = 1
        return np.array_equal(self.entries[: self.m], expect)

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_dict(),
            "d_target": self.d_target,
            "design": self.design.to_dict(),
            "entries": [int(x) for x in self.entries.reshape(-1)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParityCheckMatrix":
        design = BlockDesign.from_dict(d["design"])
        dt = d["d_target"]
        rows = design.m + dt - 2
        entries = np.array(d["entries"], dtype=np.int32).reshape(rows, design.m * design.w)
        return cls(design.field, design, dt, entries)

    def to_text(self) -> str:
        """Plain-text dump: one row per line, space-separated indices."""
        return "\n".join(" ".join(str(int(x)) for x in row) for row in self.entries) + "\n"


def build_parity_check(design: BlockDesign, d_target: int, validate: bool = True) -> ParityCheckMatrix:
    """Assemble H for a design; columns follow block order, elements sorted.

    ``validate=False`` skips the design check so tests can build matrices
    from deliberately broken families.
    """
    if d_target not in (5, 6):
        raise InvalidParameters(f"d_target must be 5 or 6, got {d_target}")
    r = design.w - 1
    if d_target == 5 and r < 4:
        raise LocalityTooSmall(f"distance 5 needs locality r >= 4, got r={r}")
    if d_target == 6:
        if r < 5:
            raise LocalityTooSmall(f"distance 6 needs locality r >= 5, got r={r}")
        if design.field.p != 2:
            raise CharacteristicNotTwo(
                f"distance 6 needs characteristic 2, got p={design.field.p}"
            )
    if validate:
        report = validate_design(design, design.w, max_intersect=1)
        if not report.ok:
            raise DesignInvalid(f"design violations: {report.violations[:5]}")
    field = design.field
    m, w = design.m, design.w
    n = m * w
    entries = np.zeros((m + d_target - 2, n), dtype=np.int32)
    for i in range(m):
        entries[i, i * w:(i + 1) * w] = 1
    for col in range(n):
        a = design.blocks[col // w][col % w]
        for e in range(1, d_target - 1):
            entries[m + e - 1, col] = field.pow(a, e)
    return ParityCheckMatrix(field, design, d_target, entries)


@dataclass(eq=False)
class LrcCode:
    field: Field
    n: int
    k: int
    d_target: int
    r: int
    H: ParityCheckMatrix
    design: BlockDesign

    @cached_property
    def generator(self) -> np.ndarray:
        """k x n generator: basis of the right nullspace of H."""
        basis = linalg.nullspace(self.field, self.H.entries)
        return np.array(basis, dtype=np.int32).reshape(len(basis), self.n)

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_dict(),
            "n": self.n,
            "k": self.k,
            "d_target": self.d_target,
            "r": self.r,
            "design": self.design.to_dict(),
            "H": [int(x) for x in self.H.entries.reshape(-1)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LrcCode":
        design = BlockDesign.from_dict(d["design"])
        dt = d["d_target"]
        rows = design.m + dt - 2
        entries = np.array(d["H"], dtype=np.int32).reshape(rows, d["n"])
        H = ParityCheckMatrix(design.field, design, dt, entries)
        return cls(
            field=design.field, n=d["n"], k=d["k"], d_target=dt, r=d["r"],
            H=H, design=design,
        )


def code_params(H: ParityCheckMatrix) -> LrcCode:
    """Derive the code descriptor from H; requires full row rank.

    A rank below m + d - 2 means the construction's assumptions were
    violated (bad design or field); silently adding rows would change
    the code, so this raises instead.
    """
    rk = linalg.rank(H.field, H.entries)
    if rk != H.rows:
        raise RankDeficient(f"rank(H) = {rk}, expected {H.rows}")
    return LrcCode(
        field=H.field,
        n=H.n,
        k=H.n - rk,
        d_target=H.d_target,
        r=H.w - 1,
        H=H,
        design=H.design,
    )


def singleton_rhs(n: int, k: int, r: int) -> int:
    """Largest distance allowed for an [n, k] code with locality r:
    n - k - ceil(k/r) + 2."""
    if not (1 <= k <= n) or r < 1:
        raise InvalidParameters(f"need 1 <= k <= n and r >= 1, got ({n}, {k}, {r})")
    return n - k - math.ceil(k / r) + 2


def is_optimal(code: LrcCode, verified_distance: int) -> bool:
    """True iff the verified distance meets the locality Singleton bound
    with equality."""
    return verified_distance == singleton_rhs(code.n, code.k, code.r)


@dataclass
class BoundReport:
    """Exact length bounds for optimal codes at the given (q, r, d)."""

    q: int
    r: int
    d: int
    construction_applicable: bool
    construction_length: Optional[int]  # q(q-1)/r when applicable
    prior_lower_bound: int
    prior_upper_bound: Fraction
    n: Optional[int] = None
    k: Optional[int] = None
    singleton_rhs: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "r": self.r,
            "d": self.d,
            "construction_applicable": self.construction_applicable,
            "construction_length": self.construction_length,
            "prior_lower_bound": self.prior_lower_bound,
            "prior_upper_bound": [
                self.prior_upper_bound.numerator,
                self.prior_upper_bound.denominator,
            ],
            "n": self.n,
            "k": self.k,
            "singleton_rhs": self.singleton_rhs,
        }


def _is_power_of(q: int, base: int) -> bool:
    if base < 2:
        return False
    while q % base == 0:
        q //= base
    return q == 1


def bound_table(q: int, r: int, d: int) -> BoundReport:
    """Compare this construction's code length against the previously
    known lower/upper bounds, all evaluated exactly.

    The construction reaches n = q(q-1)/r when r+1 is a prime power
    (d=5) or a power of 2 >= 8 (d=6) and q is a power of r+1.  The prior
    lower bound is (r+1)*floor(q^2 / (2^10 (r+1)^3)) for d=5 and
    (r+1)*floor(q^2 / (2*5^5 (r+1)^3.5)) for d=6, the half power taken
    by exact integer square root; the prior upper bound is
    (r+1)/r * q/(q-1) * q^{d-3}.
    """
    if prime_power(q) is None or r < 2 or d not in (5, 6):
        raise InvalidParameters(f"need prime power q, r >= 2, d in {{5, 6}}, got ({q}, {r}, {d})")
    w = r + 1
    if d == 5:
        applicable = w >= 5 and prime_power(w) is not None and _is_power_of(q, w)
        prior_lower = w * (q * q // (2 ** 10 * w ** 3))
    else:
        applicable = w >= 8 and _is_power_of(w, 2) and _is_power_of(q, w)
        prior_lower = w * math.isqrt(q ** 4 // ((2 * 5 ** 5) ** 2 * w ** 7))
    prior_upper = Fraction(w, r) * Fraction(q, q - 1) * q ** (d - 3)
    report = BoundReport(
        q=q,
        r=r,
        d=d,
        construction_applicable=applicable,
        construction_length=q * (q - 1) // r if applicable else None,
        prior_lower_bound=prior_lower,
        prior_upper_bound=prior_upper,
    )
    if applicable:
        n = report.construction_length
        m = n // w
        k = n - m - (d - 2)
        report.n = n
        report.k = k
        report.singleton_rhs = singleton_rhs(n, k, r)
    return report
