"""Minimum-distance certification for the block parity-check codes.

Two independent verifiers:

* ``verify_distance_exhaustive`` checks every (d-1)-column subset for
  full column rank.  Subsets are enumerated in lexicographic order and
  rank-checked in vectorized batches; all-zero rows outside a subset's
  blocks are dropped first, which is rank-preserving whenever the
  matrix has the indicator layout (and the verifier falls back to
  full-height submatrices when it does not).

* ``verify_distance_structured`` runs the case analysis that makes the
  construction work.  In any dependency among columns, a column whose
  block appears exactly once in the subset has coefficient zero: its
  indicator row is zero on every other chosen column.  Dependencies
  therefore live entirely on subsets in which every participating block
  contributes at least two columns, so it suffices to rank-check

      d=5: within-block patterns (2), (3), (4) and the cross pattern
           (2,2) over every block pair;
      d=6: additionally (5) within-block and (3,2) over every ordered
           block pair.

Both report a ``VerificationReport`` with a re-checkable certificate:
a dependent column set on failure, check counts on success, plus a
within-block dependent d-set witnessing that the distance is not
larger than the target.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from . import linalg
from .codes import LrcCode, ParityCheckMatrix
from .errors import BudgetExceeded, InvalidParameters, UnknownStructure
from .gf import Field, FieldTables, prime_power
from .linalg import rank  # re-export: the scalar rank oracle

__all__ = [
    "VerificationReport",
    "rank",
    "verify_distance_exhaustive",
    "verify_distance_structured",
    "verify_distance_sampled",
    "moore_matrix",
    "moore_det",
    "search_cross_dependency",
]

DEFAULT_BUDGET = 10 ** 8
_CHUNK = 1 << 18


@dataclass
class VerificationReport:
    verdict: bool
    method: str  # "exhaustive" | "structured" | "sampled"
    d_checked: int
    certificate: dict
    equality_witness: Optional[list[int]] = None
    patterns: dict = dataclass_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "d_checked": self.d_checked,
            "patterns": self.patterns,
            "certificate": self.certificate,
            "equality_witness": self.equality_witness,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(
            verdict=d["verdict"],
            method=d["method"],
            d_checked=d["d_checked"],
            certificate=d["certificate"],
            equality_witness=d["equality_witness"],
            patterns=d.get("patterns", {}),
        )


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        env = os.environ.get("LRC_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def _map_chunks(fn, chunks: Iterable, threads: int) -> Iterator:
    """Apply fn to chunks preserving order, with a bounded thread window."""
    if threads <= 1:
        for ch in chunks:
            yield fn(ch)
        return
    chunks = iter(chunks)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending: deque = deque()
        for ch in itertools.islice(chunks, threads * 2):
            pending.append(pool.submit(fn, ch))
        while pending:
            result = pending.popleft().result()
            nxt = next(chunks, None)
            if nxt is not None:
                pending.append(pool.submit(fn, nxt))
            yield result


def _subset_chunks(n: int, size: int, chunk: int) -> Iterator[np.ndarray]:
    it = itertools.combinations(range(n), size)
    dt = np.dtype((np.int32, (size,)))
    while True:
        arr = np.fromiter(itertools.islice(it, chunk), dtype=dt)
        if arr.size == 0:
            return
        yield arr.reshape(-1, size)


def _compressed_submatrices(w: int, power: np.ndarray, cols: np.ndarray, dtype) -> np.ndarray:
    """Per-column block-indicator rows plus the power rows, (B, s + d - 2, s)."""
    blk = cols // w
    ind = (blk[:, :, None] == blk[:, None, :]).astype(dtype)
    pw = power[:, cols].transpose(1, 0, 2)
    return np.concatenate([ind, pw], axis=1)


def _minimize_dependent(field: Field, entries: np.ndarray, cols: Iterable[int]) -> list[int]:
    """Shrink a dependent column set to an inclusion-minimal one."""
    cols = [int(c) for c in cols]
    changed = True
    while changed:
        changed = False
        for c in list(cols):
            trial = [x for x in cols if x != c]
            if trial and linalg.rank(field, entries[:, trial]) < len(trial):
                cols = trial
                changed = True
                break
    return cols


def _equality_witness(pcm: ParityCheckMatrix, d: int) -> Optional[list[int]]:
    """Lexicographically first dependent d-column set inside one block.

    Any d columns of a block span at most d-1 dimensions (one indicator
    row plus d-2 power rows), so for well-formed matrices the first
    candidate already certifies that the distance is not above d.
    """
    if pcm.w < d:
        return None
    for i in range(pcm.m):
        base = i * pcm.w
        for combo in itertools.combinations(range(pcm.w), d):
            cols = [base + c for c in combo]
            if linalg.rank(pcm.field, pcm.entries[:, cols]) < d:
                return cols
    return None


def verify_distance_exhaustive(
    H: ParityCheckMatrix,
    d_target: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    threads: Optional[int] = None,
    chunk: int = _CHUNK,
) -> VerificationReport:
    """Certify distance >= d_target by rank-checking every (d-1)-subset.

    Enumerates all C(n, d-1) column subsets; refuses (BudgetExceeded)
    when that count exceeds the work budget.  The verdict-true
    certificate records the number of subsets checked; on failure the
    certificate holds a minimal dependent column set.
    """
    d = d_target if d_target is not None else H.d_target
    s = d - 1
    n = H.n
    total = math.comb(n, s)
    if total > budget:
        raise BudgetExceeded(
            f"C({n},{s}) = {total} subsets exceeds budget {budget}; "
            "use the structured verifier"
        )
    tb = H.field.tables()
    fast = H.has_indicator_layout()
    power = np.ascontiguousarray(H.entries[H.m:], dtype=tb.dtype)
    full = np.ascontiguousarray(H.entries, dtype=tb.dtype)
    w = H.w

    def process(cols: np.ndarray) -> tuple[int, Optional[tuple[int, ...]]]:
        if fast:
            mats = _compressed_submatrices(w, power, cols, tb.dtype)
        else:
            mats = full[:, cols].transpose(1, 0, 2)
        ok = linalg.batch_full_col_rank(tb, mats)
        bad = np.nonzero(~ok)[0]
        first = tuple(int(x) for x in cols[bad[0]]) if bad.size else None
        return cols.shape[0], first

    checked = 0
    first_bad: Optional[tuple[int, ...]] = None
    for count, bad in _map_chunks(process, _subset_chunks(n, s, chunk), _resolve_threads(threads)):
        checked += count
        if bad is not None:
            first_bad = bad
            break  # chunks are in lex order, so this is the smallest

    if first_bad is not None:
        certificate = {
            "dependent_columns": _minimize_dependent(H.field, H.entries, first_bad),
            "subsets_checked": checked,
        }
        return VerificationReport(False, "exhaustive", d, certificate)
    certificate = {"independent_subsets_checked": checked}
    return VerificationReport(
        True, "exhaustive", d, certificate,
        equality_witness=_equality_witness(H, d),
        patterns={"subsets": checked},
    )


def _as_pcm(code: Union[LrcCode, ParityCheckMatrix]) -> ParityCheckMatrix:
    return code.H if isinstance(code, LrcCode) else code


def verify_distance_structured(
    code: Union[LrcCode, ParityCheckMatrix],
    threads: Optional[int] = None,
    pair_chunk: int = 64,
) -> VerificationReport:
    """Certify the distance via the block-pattern case analysis.

    Only subsets in which every participating block contributes at
    least two columns can carry a dependency (see module docstring), so
    this checks the within-block patterns and all cross-block (2,2)
    (plus (3,2) for d=6) selections.  Counts per pattern are reported;
    any failing selection is returned as a minimal dependent column set.
    """
    pcm = _as_pcm(code)
    if not pcm.has_indicator_layout():
        raise UnknownStructure("matrix lacks the block indicator layout")
    d, w, m = pcm.d_target, pcm.w, pcm.m
    field = pcm.field
    tb = field.tables()
    elems = pcm.design.element_array()
    nthreads = _resolve_threads(threads)
    patterns: dict[str, int] = {}
    worst: Optional[tuple[int, ...]] = None

    def note_bad(cols: tuple[int, ...]) -> None:
        nonlocal worst
        if worst is None or cols < worst:
            worst = cols

    def power_stack(vals: np.ndarray) -> np.ndarray:
        # vals (B, c) of element indices -> (B, d-2, c) rows a^1..a^{d-2}
        return np.stack([tb.pow_[e][vals] for e in range(1, d - 1)], axis=1)

    # within-block patterns: sizes 2..d-1 inside each block
    for size in range(2, d):
        combos = np.array(list(itertools.combinations(range(w), size)), dtype=np.int32)
        nc = combos.shape[0]
        vals = elems[:, combos].reshape(m * nc, size)
        ones = np.ones((m * nc, 1, size), dtype=tb.dtype)
        mats = np.concatenate([ones, power_stack(vals.astype(np.intp))], axis=1)
        ok = linalg.batch_full_col_rank(tb, mats)
        patterns[f"within_{size}"] = m * nc
        for idx in np.nonzero(~ok)[0]:
            block, choice = divmod(int(idx), nc)
            note_bad(tuple(int(block * w + c) for c in combos[choice]))

    # cross-block patterns: (2,2) on unordered pairs, (3,2) on ordered pairs
    cross_shapes = [(2, 2)] if d == 5 else [(2, 2), (3, 2)]
    for ta, tb_sz in cross_shapes:
        if m < 2:
            patterns[f"cross_{ta}_{tb_sz}"] = 0
            continue
        pairs = (
            list(itertools.combinations(range(m), 2))
            if ta == tb_sz
            else list(itertools.permutations(range(m), 2))
        )
        ca = np.array(list(itertools.combinations(range(w), ta)), dtype=np.int32)
        cb = np.array(list(itertools.combinations(range(w), tb_sz)), dtype=np.int32)
        na, nb = ca.shape[0], cb.shape[0]
        per_pair = na * nb
        ind_a = np.array([1] * ta + [0] * tb_sz, dtype=tb.dtype)
        ind_b = np.array([0] * ta + [1] * tb_sz, dtype=tb.dtype)

        def process(group: list[tuple[int, int]]):
            i_arr = np.array([g[0] for g in group], dtype=np.intp)
            j_arr = np.array([g[1] for g in group], dtype=np.intp)
            ea = elems[i_arr][:, ca]  # (P, na, ta)
            eb = elems[j_arr][:, cb]  # (P, nb, tb_sz)
            ea = np.repeat(ea, nb, axis=1)
            eb = np.tile(eb, (1, na, 1))
            vals = np.concatenate([ea, eb], axis=2).reshape(-1, ta + tb_sz)
            B = vals.shape[0]
            ind = np.broadcast_to(
                np.stack([ind_a, ind_b]), (B, 2, ta + tb_sz)
            ).astype(tb.dtype)
            mats = np.concatenate([ind, power_stack(vals.astype(np.intp))], axis=1)
            ok = linalg.batch_full_col_rank(tb, mats)
            out = []
            for idx in np.nonzero(~ok)[0]:
                p_idx, rest = divmod(int(idx), per_pair)
                a_idx, b_idx = divmod(rest, nb)
                cols = tuple(int(i_arr[p_idx] * w + c) for c in ca[a_idx]) + tuple(
                    int(j_arr[p_idx] * w + c) for c in cb[b_idx]
                )
                out.append(tuple(sorted(cols)))
            return out

        groups = [pairs[i:i + pair_chunk] for i in range(0, len(pairs), pair_chunk)]
        for found in _map_chunks(process, groups, nthreads):
            for cols in found:
                note_bad(cols)
        patterns[f"cross_{ta}_{tb_sz}"] = len(pairs) * per_pair

    if worst is not None:
        certificate = {
            "dependent_columns": _minimize_dependent(field, pcm.entries, worst),
            "pattern_checks": sum(patterns.values()),
        }
        return VerificationReport(False, "structured", d, certificate, patterns=patterns)
    certificate = {"pattern_checks": sum(patterns.values())}
    return VerificationReport(
        True, "structured", d, certificate,
        equality_witness=_equality_witness(pcm, d),
        patterns=patterns,
    )


def verify_distance_sampled(
    H: ParityCheckMatrix,
    d_target: Optional[int] = None,
    samples: int = 10 ** 5,
    seed: int = 0,
) -> VerificationReport:
    """Spot-check random (d-1)-subsets.  Never certifying: a true verdict
    only means no dependency was sampled."""
    d = d_target if d_target is not None else H.d_target
    s = d - 1
    if samples < 1:
        raise InvalidParameters("samples must be >= 1")
    tb = H.field.tables()
    fast = H.has_indicator_layout()
    power = np.ascontiguousarray(H.entries[H.m:], dtype=tb.dtype)
    full = np.ascontiguousarray(H.entries, dtype=tb.dtype)
    rng = np.random.default_rng(seed)
    remaining = samples
    while remaining > 0:
        batch = min(remaining, _CHUNK)
        scores = rng.random((batch, H.n))
        cols = np.sort(np.argpartition(scores, s, axis=1)[:, :s], axis=1).astype(np.int32)
        if fast:
            mats = _compressed_submatrices(H.w, power, cols, tb.dtype)
        else:
            mats = full[:, cols].transpose(1, 0, 2)
        ok = linalg.batch_full_col_rank(tb, mats)
        bad = np.nonzero(~ok)[0]
        if bad.size:
            cert = {
                "dependent_columns": _minimize_dependent(
                    H.field, H.entries, cols[bad[0]]
                ),
                "sampled_subsets": samples - remaining + int(bad[0]) + 1,
                "certifying": False,
            }
            return VerificationReport(False, "sampled", d, cert)
        remaining -= batch
    cert = {"sampled_subsets": samples, "certifying": False}
    return VerificationReport(True, "sampled", d, cert)


# -- Moore matrices -----------------------------------------------------------


def moore_matrix(field: Field, base: int, elements: list[int]) -> list[list[int]]:
    """h x h matrix with rows (a_1^{base^e}, ..., a_h^{base^e}), e = 0..h-1."""
    h = len(elements)
    if h < 1:
        raise InvalidParameters("need at least one element")
    pp = prime_power(base)
    if pp is None or pp[0] != field.p or field.t % pp[1] != 0:
        raise InvalidParameters(f"base {base} does not define a subfield of GF({field.q})")
    elems = [field.check(a) for a in elements]
    return [[field.pow(a, base ** e) for a in elems] for e in range(h)]


def moore_det(field: Field, base: int, elements: list[int]) -> int:
    """Determinant of the Moore matrix, by elimination.

    Nonzero exactly when the elements are linearly independent over
    GF(base); equals the product of one representative linear
    combination per direction in GF(base)^h (the representative whose
    last nonzero coefficient is 1).
    """
    return linalg.det(field, moore_matrix(field, base, elements))


# -- odd-characteristic probe -------------------------------------------------


def search_cross_dependency(
    field: Field,
    w: int,
    take_a: int = 3,
    take_b: int = 2,
    d_target: int = 6,
    max_findings: int = 1,
) -> list[dict]:
    """Scan all block pairs with intersection <= 1 over F_q for a
    dependent cross selection under the distance-d layout.

    Over characteristic 2 with d_target=6 this provably finds nothing;
    over odd characteristic it documents whether the (3,2) pattern can
    break.  Findings are re-checkable: each lists the two blocks and the
    chosen elements whose compressed matrix is rank-deficient.
    """
    if not 2 <= w <= field.q or take_a + take_b > 2 * w:
        raise InvalidParameters(f"bad parameters w={w}, take={take_a}+{take_b}")
    tb = field.tables()
    blocks = list(itertools.combinations(range(field.q), w))
    masks = [sum(1 << c for c in b) for b in blocks]
    ca = np.array(list(itertools.combinations(range(w), take_a)), dtype=np.intp)
    cb = np.array(list(itertools.combinations(range(w), take_b)), dtype=np.intp)
    na, nb = ca.shape[0], cb.shape[0]
    ind = np.zeros((2, take_a + take_b), dtype=tb.dtype)
    ind[0, :take_a] = 1
    ind[1, take_a:] = 1
    findings: list[dict] = []
    for bi, bj in itertools.permutations(range(len(blocks)), 2):
        if (masks[bi] & masks[bj]).bit_count() > 1:
            continue
        ea = np.array(blocks[bi], dtype=np.intp)[ca]  # (na, take_a)
        eb = np.array(blocks[bj], dtype=np.intp)[cb]
        vals = np.concatenate(
            [np.repeat(ea, nb, axis=0), np.tile(eb, (na, 1))], axis=1
        )
        pw = np.stack([tb.pow_[e][vals] for e in range(1, d_target - 1)], axis=1)
        indb = np.broadcast_to(ind, (vals.shape[0], 2, take_a + take_b)).astype(tb.dtype)
        mats = np.concatenate([indb, pw], axis=1)
        ok = linalg.batch_full_col_rank(tb, mats)
        for idx in np.nonzero(~ok)[0]:
            a_idx, b_idx = divmod(int(idx), nb)
            findings.append(
                {
                    "block_a": blocks[bi],
                    "block_b": blocks[bj],
                    "chosen_a": tuple(int(blocks[bi][c]) for c in ca[a_idx]),
                    "chosen_b": tuple(int(blocks[bj][c]) for c in cb[b_idx]),
                }
            )
            if len(findings) >= max_findings:
                return findings
    return findings
