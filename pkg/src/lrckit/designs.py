"""Families of (r+1)-subsets of F_q with pairwise intersections <= 1.

A ``BlockDesign`` is the combinatorial skeleton of every code built
here: m blocks of w = r+1 field elements, any two blocks sharing at
most one point.  Viewed as binary incidence vectors the blocks form a
constant-weight code of length q, weight w and distance >= 2w-2.

Two generators are provided: the lines of the affine space AG(t, l)
identified with GF(l^t) (a Steiner system S(2, l, l^t), so the family
size meets l^{t-1}(l^t-1)/(l-1) exactly), and a deterministic greedy
packer for fields where no algebraic family is available.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvalidParameters
from .gf import Field, make_field, prime_power


@dataclass(frozen=True)
class BlockDesign:
    field: Field
    w: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return len(self.blocks)

    def element_array(self) -> np.ndarray:
        """(m, w) array of element indices, blocks in order."""
        return np.array(self.blocks, dtype=np.int32).reshape(self.m, self.w)

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_dict(),
            "w": self.w,
            "blocks": [list(b) for b in self.blocks],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BlockDesign":
        return cls(
            field=Field.from_dict(d["field"]),
            w=d["w"],
            blocks=tuple(tuple(b) for b in d["blocks"]),
        )


def affine_lines(ell: int, t: int) -> BlockDesign:
    """All lines {a + s*b : s in GF(ell)} of GF(ell^t) as a GF(ell)-space.

    Every pair of distinct points lies on exactly one line, and the line
    count is ell^(t-1) * (ell^t - 1) / (ell - 1).
    """
    pp = prime_power(ell)
    if pp is None or ell < 2 or t < 1:
        raise InvalidParameters(f"need a prime power ell >= 2 and t >= 1, got ({ell}, {t})")
    p, s = pp
    K = make_field(p, s * t)
    tb = K.tables()
    scalars = np.array(K.subfield(ell), dtype=tb.dtype)
    points = np.arange(K.q, dtype=np.intp)
    seen: set[tuple[int, ...]] = set()
    for b in range(1, K.q):
        span = tb.mul[b, scalars]
        lines = np.sort(tb.add[points[:, None], span[None, :]], axis=1)
        for row in lines:
            seen.add(tuple(int(x) for x in row))
    return BlockDesign(field=K, w=ell, blocks=tuple(sorted(seen)))


def greedy_pack(
    field: Field,
    w: int,
    max_intersect: int = 1,
    max_blocks: Optional[int] = None,
) -> BlockDesign:
    """Greedy packing of w-subsets of F_q with bounded pairwise overlap.

    Scans all w-subsets in lexicographic element order and accepts a
    subset iff it meets every accepted block in <= max_intersect points;
    deterministic, so reruns are bit-identical.  ``max_blocks`` stops
    the scan early once that many blocks are accepted.
    """
    if not 2 <= w <= field.q:
        raise InvalidParameters(f"need 2 <= w <= q, got w={w}, q={field.q}")
    if max_intersect < 0:
        raise InvalidParameters("max_intersect must be >= 0")
    accepted: list[tuple[int, ...]] = []
    masks: list[int] = []
    for combo in itertools.combinations(range(field.q), w):
        mask = 0
        for c in combo:
            mask |= 1 << c
        if all((mask & m).bit_count() <= max_intersect for m in masks):
            accepted.append(combo)
            masks.append(mask)
            if max_blocks is not None and len(accepted) >= max_blocks:
                break
    return BlockDesign(field=field, w=w, blocks=tuple(accepted))


@dataclass
class DesignReport:
    violations: list[tuple] = dataclass_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_design(design: BlockDesign, w: int, max_intersect: int = 1) -> DesignReport:
    """Exhaustive check of block sizes and all pairwise intersections.

    Violations are data, not errors: tuples ("block_size", i),
    ("element_range", i, x) or ("intersection", i, j, shared elements).
    """
    report = DesignReport()
    sets = []
    for i, block in enumerate(design.blocks):
        elems = set(block)
        if len(block) != w or len(elems) != w:
            report.violations.append(("block_size", i))
        for x in block:
            if not 0 <= x < design.field.q:
                report.violations.append(("element_range", i, x))
        sets.append(elems)
    for i, j in itertools.combinations(range(len(sets)), 2):
        shared = sets[i] & sets[j]
        if len(shared) > max_intersect:
            report.violations.append(("intersection", i, j, tuple(sorted(shared))))
    return report


def steiner_size(n: int, w: int, delta: int) -> Fraction:
    """Block count of a Steiner system S(w-delta+1, w, n) when one exists:
    C(n, w-delta+1) / C(w, w-delta+1), as an exact rational."""
    if not 1 <= delta <= w <= n:
        raise InvalidParameters(f"need 1 <= delta <= w <= n, got ({n}, {w}, {delta})")
    k = w - delta + 1
    return Fraction(math.comb(n, k), math.comb(w, k))


def packing_lower_bound(q: int, w: int) -> Fraction:
    """Size guaranteed achievable by the best known packing of w-subsets
    with pairwise intersections <= 1: C(q, w) / (q^(w-2) - 1).

    Reported for comparison only; greedy_pack does not promise to reach it.
    """
    if w < 3 or prime_power(q) is None:
        raise InvalidParameters(f"need prime power q and w >= 3, got ({q}, {w})")
    return Fraction(math.comb(q, w), q ** (w - 2) - 1)
