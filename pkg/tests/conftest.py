"""Shared independent oracles for the test suite.

mpmath is the high-precision reference; integer floors are always taken by the
doubling loop (never from floating point), because near powers of two a float
floor is exactly the failure mode these tests exist to catch.
"""

from __future__ import annotations

import mpmath as mp
import pytest

ORACLE_PREC_BITS = 400


def floor_log2_doubling(a: int, j: int) -> int:
    """Reference floor(log2(a/j)): largest k with j * 2^k <= a."""
    k = 0
    x = j * 2
    while x <= a:
        k += 1
        x *= 2
    return k


def is_pow_ratio(a: int, j: int) -> bool:
    q, r = divmod(a, j)
    return r == 0 and q & (q - 1) == 0


def dyadic_to_mpf(d) -> mp.mpf:
    """Exact mpf image of a dyadic rational (inside a wide-enough context)."""
    return mp.mpf(d.mantissa) * mp.power(2, d.exponent)


def interval_contains(iv, value) -> bool:
    """Containment check against an mpmath reference value.

    ``value`` may be a digit string; it is parsed inside the wide context so
    frozen constants keep their full accuracy.
    """
    with mp.workprec(ORACLE_PREC_BITS + 64):
        if isinstance(value, str):
            value = mp.mpf(value)
        return dyadic_to_mpf(iv.lo) <= value <= dyadic_to_mpf(iv.hi)


def g_oracle(n: int) -> mp.mpf:
    """G(n) with exact integer floors and high-precision logs."""
    s = mp.mpf(0)
    for m in range(1, n + 1):
        if is_pow_ratio(n, m):
            continue
        k = floor_log2_doubling(n, m)
        s += (mp.log(n) - mp.log(m)) / mp.log(2) - k
    return s


@pytest.fixture(autouse=True)
def _oracle_precision():
    with mp.workprec(ORACLE_PREC_BITS):
        yield
