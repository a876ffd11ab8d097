"""Greedy normal U-representations and the prefix formulas they drive.

A representation is a tuple of digits, most significant first; ``()``
represents 0.
"""

from __future__ import annotations

import threading
from bisect import bisect_right
from typing import Sequence

from .errors import DigitRange
from .substitution import (
    ParrySubstitution,
    incidence_matrix,
    power_image,
    vec_mat,
)

Digits = tuple[int, ...]


class Numeration:
    """The U-sequence of a substitution, extended on demand.

    Alongside U_j it keeps the Parikh vector of phi^j(0) (row 0 of M^j),
    which is what :func:`prefix_parikh` sums.
    """

    def __init__(self, sub: ParrySubstitution):
        self.sub = sub
        self.alpha0 = sub.alpha0
        self._M = incidence_matrix(sub)
        self._rows = [tuple(1 if i == 0 else 0 for i in range(sub.size))]
        self._values = [1]
        self._lock = threading.Lock()

    def _extend_to(self, k):
        with self._lock:
            while len(self._values) <= k:
                row = vec_mat(self._rows[-1], self._M)
                self._rows.append(row)
                self._values.append(sum(row))

    def value(self, j: int) -> int:
        self._extend_to(j)
        return self._values[j]

    def row(self, j: int) -> tuple[int, ...]:
        self._extend_to(j)
        return self._rows[j]

    def values(self, k: int) -> tuple[int, ...]:
        self._extend_to(k)
        return tuple(self._values[: k + 1])

    def covering(self, n: int) -> tuple[int, ...]:
        """Shortest prefix U_0..U_k of the sequence with U_k > n."""
        if self._values[-1] <= n:
            with self._lock:
                while self._values[-1] <= n:
                    row = vec_mat(self._rows[-1], self._M)
                    self._rows.append(row)
                    self._values.append(sum(row))
        return tuple(self._values[: bisect_right(self._values, n) + 1])

    def top_index(self, n: int) -> int:
        """Largest k with U_k <= n (n >= 1)."""
        self.covering(n)
        return bisect_right(self._values, n) - 1


def greedy_urep(useq, n: int) -> Digits:
    """Normal U-representation of ``n``.

    ``useq`` is either a :class:`Numeration` (extended as needed) or an
    explicit increasing sequence U_0, U_1, ... which must contain a term
    larger than ``n``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return ()
    if isinstance(useq, Numeration):
        k = useq.top_index(n)
        us = useq._values
    else:
        us = useq
        if not us or us[-1] <= n:
            raise ValueError(f"U-sequence too short to represent {n}")
        k = bisect_right(us, n) - 1
    digits = []
    rest = n
    for j in range(k, -1, -1):
        d, rest = divmod(rest, us[j])
        digits.append(d)
    return tuple(digits)


def _check_digits(digits, alpha0):
    for d in digits:
        if d < 0 or d > alpha0:
            raise DigitRange(f"digit {d} outside 0..{alpha0}")


def urep_value(useq, digits: Sequence[int], alpha0: int | None = None) -> int:
    """Sum of d_j U_j.  Digits are range-checked when the digit bound is known."""
    if isinstance(useq, Numeration):
        alpha0 = useq.alpha0 if alpha0 is None else alpha0
        us = useq.values(max(len(digits) - 1, 0))
    else:
        us = useq
        if len(us) < len(digits):
            raise ValueError("U-sequence shorter than the digit string")
    if alpha0 is not None:
        _check_digits(digits, alpha0)
    elif any(d < 0 for d in digits):
        raise DigitRange("negative digit")
    k = len(digits) - 1
    return sum(d * us[k - i] for i, d in enumerate(digits))


def is_canonical(useq, digits: Sequence[int]) -> bool:
    """True iff ``digits`` is exactly the greedy representation of its value."""
    if digits and digits[0] == 0:
        return False
    value = urep_value(useq, digits)
    return greedy_urep(useq, value) == tuple(digits)


def prefix_from_digits(sub: ParrySubstitution, digits: Sequence[int]) -> bytes:
    """Concatenate (phi^k(0))^{d_k} ... (phi(0))^{d_1} 0^{d_0}."""
    _check_digits(digits, sub.alpha0)
    k = len(digits) - 1
    return b"".join(power_image(sub, 0, k - i) * d for i, d in enumerate(digits))


def prefix_parikh(sub_or_num, digits: Sequence[int]) -> tuple[int, ...]:
    """Parikh vector of the prefix encoded by ``digits``, without building it."""
    num = sub_or_num if isinstance(sub_or_num, Numeration) else Numeration(sub_or_num)
    _check_digits(digits, num.alpha0)
    out = [0] * num.sub.size
    k = len(digits) - 1
    for i, d in enumerate(digits):
        if d:
            for letter, x in enumerate(num.row(k - i)):
                out[letter] += d * x
    return tuple(out)


def format_digits(digits: Sequence[int], alpha0: int | None = None) -> str:
    """``"1010"`` when every digit fits in one character, ``"10,3,0"`` otherwise."""
    wide = (alpha0 is not None and alpha0 > 9) or any(d > 9 for d in digits)
    if wide:
        return ",".join(str(d) for d in digits)
    return "".join(str(d) for d in digits)


def parse_digits(text: str) -> Digits:
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    return tuple(int(ch) for ch in text)
