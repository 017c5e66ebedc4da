"""Parity-constrained maxima of signed sums.

``s_odd(a)`` is the largest value of sum(+/- a_i) over sign choices with an
odd number of minus signs; ``s_even`` uses an even number.  Both have a closed
form: the sum of absolute values, less twice the smallest absolute value
whenever the sign of the product forces one entry to be taken "the wrong way".
"""
from __future__ import annotations

import itertools
from typing import Iterable, Literal

import numpy as np

from .errors import EmptyInput, TooLong

MAX_EXHAUSTIVE_LENGTH = 24
_BLOCK_BITS = 14

Parity = Literal["even", "odd"]


def _prepare(values: Iterable[float]) -> list[float]:
    values = [float(x) for x in values]
    if not values:
        raise EmptyInput("signed sums need at least one value")
    return values


def _product_sign(values: list[float]) -> int:
    # sign counting instead of a product: no underflow for long inputs
    if any(x == 0.0 for x in values):
        return 0
    return -1 if sum(x < 0.0 for x in values) % 2 else 1


def s_odd(values: Iterable[float]) -> float:
    values = _prepare(values)
    total = sum(abs(x) for x in values)
    if _product_sign(values) > 0:
        total -= 2.0 * min(abs(x) for x in values)
    return total


def s_even(values: Iterable[float]) -> float:
    values = _prepare(values)
    total = sum(abs(x) for x in values)
    if _product_sign(values) < 0:
        total -= 2.0 * min(abs(x) for x in values)
    return total


def s_parity_exhaustive(values: Iterable[float], parity: Parity) -> float:
    """Brute-force maximum over every sign vector of the requested parity."""
    values = _prepare(values)
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', not {parity!r}")
    n = len(values)
    if n > MAX_EXHAUSTIVE_LENGTH:
        raise TooLong(f"exhaustive enumeration capped at {MAX_EXHAUSTIVE_LENGTH} entries, got {n}")
    want = 1 if parity == "odd" else 0

    low = min(n, _BLOCK_BITS)
    head, tail = values[: n - low], np.asarray(values[n - low:])
    # all sign patterns of the tail block at once, then loop over the head
    minus = (np.arange(2**low)[:, None] >> np.arange(low)[::-1]) & 1
    tail_sums = (1 - 2 * minus) @ tail
    tail_parity = minus.sum(axis=1) % 2

    best = -np.inf
    for head_signs in itertools.product((1, -1), repeat=len(head)):
        head_sum = sum(s * x for s, x in zip(head_signs, head))
        head_parity = sum(s < 0 for s in head_signs) % 2
        mask = (tail_parity + head_parity) % 2 == want
        if mask.any():
            best = max(best, head_sum + tail_sums[mask].max())
    return float(best)
