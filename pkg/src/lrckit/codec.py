"""Encoding, single-symbol local repair, and erasure decoding.

Words travel as sequences of element indices with ``None`` marking an
erased position (serialized as JSON ``null``).  Local repair reads only
the r block-mates of the erased coordinate; erasure decoding solves the
parity-check system restricted to the erased columns, which has a
unique solution for up to d-1 erasures.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import linalg
from .codes import LrcCode
from .errors import (
    FieldMismatch,
    InconsistentWord,
    LengthMismatch,
    LrcError,
    MatesUnavailable,
    TooManyErasures,
    WrongErasureCount,
)

Symbol = Optional[int]


def _check_message(code: LrcCode, message: Sequence[int]) -> list[int]:
    if len(message) != code.k:
        raise LengthMismatch(f"message length {len(message)} != k = {code.k}")
    return [code.field.check(x) for x in message]


def generator_matrix(code: LrcCode) -> np.ndarray:
    """k x n basis of the codeword space (right nullspace of H)."""
    return code.generator


def encode(code: LrcCode, message: Sequence[int]) -> list[int]:
    """message @ G; the result has zero syndrome by construction."""
    msg = _check_message(code, message)
    tb = code.field.tables()
    G = code.generator
    acc = np.zeros(code.n, dtype=tb.dtype)
    for i, mi in enumerate(msg):
        if mi:
            acc = tb.add[acc, tb.mul[G[i], mi]]
    return [int(x) for x in acc]


def _erasures(word: Sequence[Symbol]) -> list[int]:
    return [i for i, x in enumerate(word) if x is None]


def local_repair(code: LrcCode, word: Sequence[Symbol], erased: Optional[int] = None) -> int:
    """Recover one erased symbol from its r block-mates.

    Reads exactly the r symbols of the recover set.  When ``erased`` is
    not given, the erasure mask is scanned first (and exactly one
    erasure is required); passing it explicitly skips the scan.
    """
    if len(word) != code.n:
        raise LengthMismatch(f"word length {len(word)} != n = {code.n}")
    if erased is None:
        gaps = _erasures(word)
        if len(gaps) != 1:
            raise WrongErasureCount(f"need exactly 1 erasure, found {len(gaps)}")
        erased = gaps[0]
    field = code.field
    w = code.r + 1
    block = erased // w
    total = 0
    for j in range(block * w, (block + 1) * w):
        if j == erased:
            continue
        mate = word[j]
        if mate is None:
            raise MatesUnavailable(f"recover set position {j} is erased")
        total = field.add(total, field.check(mate))
    return field.neg(total)


def syndrome(code: LrcCode, word: Sequence[Symbol]) -> list[int]:
    """H w^T for a fully known word."""
    if len(word) != code.n:
        raise LengthMismatch(f"word length {len(word)} != n = {code.n}")
    if any(x is None for x in word):
        raise WrongErasureCount("syndrome needs a fully known word")
    vals = [code.field.check(x) for x in word]
    return [int(x) for x in linalg.mat_vec(code.field, code.H.entries, vals)]


def erasure_decode(code: LrcCode, word: Sequence[Symbol]) -> list[int]:
    """Fill in up to d-1 erased positions using the parity checks.

    Solves H_E x = -H_K c_K exactly; raises TooManyErasures beyond d-1
    and InconsistentWord when the known symbols already violate a parity
    row (corruption rather than loss).
    """
    if len(word) != code.n:
        raise LengthMismatch(f"word length {len(word)} != n = {code.n}")
    erased = _erasures(word)
    if len(erased) > code.d_target - 1:
        raise TooManyErasures(f"{len(erased)} erasures > d - 1 = {code.d_target - 1}")
    field = code.field
    if not erased:
        if any(syndrome(code, word)):
            raise InconsistentWord("known symbols violate the parity checks")
        return [field.check(x) for x in word]
    known = [i for i in range(code.n) if word[i] is not None]
    H = code.H.entries
    rhs_known = linalg.mat_vec(field, H[:, known], [field.check(word[i]) for i in known])
    rhs = [field.neg(int(x)) for x in rhs_known]
    try:
        solution = linalg.solve_unique(field, H[:, erased], rhs)
    except linalg.InconsistentSystem as exc:
        raise InconsistentWord(str(exc)) from None
    except linalg.UnderdeterminedSystem as exc:
        raise LrcError(
            f"erasure system underdetermined ({exc}); distance below d_target?"
        ) from None
    out = [0] * code.n
    for i in known:
        out[i] = field.check(word[i])
    for i, x in zip(erased, solution):
        out[i] = x
    return out
