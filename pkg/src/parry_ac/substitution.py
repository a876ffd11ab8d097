"""Parry substitutions: parsing, validation, images, fixed point, spectra.

Words are ``bytes`` objects whose byte values are letters, so ``b"\\x00\\x01"``
is the word ``01``.  Use :func:`word` and :func:`show` to convert from and to
the usual digit notation.
"""

from __future__ import annotations

import enum
import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import _config
from .errors import (
    ConstraintViolation,
    ExponentRangeError,
    NumericalFailure,
    ResourceLimit,
    SpecSyntaxError,
)

SIMPLE = "simple"
NONSIMPLE = "nonsimple"


class Balance(enum.Enum):
    CERTIFIED = "Certified"
    INCONCLUSIVE = "Inconclusive"


def word(text: str | Sequence[int]) -> bytes:
    """Build a word from ``"01001"``, ``"10,3,0"`` or a sequence of letters."""
    if isinstance(text, (bytes, bytearray)):
        return bytes(text)
    if isinstance(text, str):
        if "," in text:
            return bytes(int(x) for x in text.split(","))
        return bytes(int(ch) for ch in text)
    return bytes(text)


def show(w: bytes) -> str:
    if any(x > 9 for x in w):
        return ",".join(str(x) for x in w)
    return "".join(str(x) for x in w)


@dataclass(frozen=True)
class ParrySubstitution:
    """Exponent data of a simple or non-simple Parry substitution.

    Simple, over ``{0, ..., m-1}``::

        l -> 0^alpha_l (l+1)   for l < m-1
        m-1 -> 0^alpha_{m-1}

    Non-simple, over ``{0, ..., m+p-1}``: the same rules for ``l < m+p-1``
    and ``m+p-1 -> 0^alpha_{m+p-1} m``.
    """

    kind: str
    m: int
    p: int
    alphas: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(int(a) for a in self.alphas))

    @classmethod
    def simple(cls, alphas: Sequence[int]) -> ParrySubstitution:
        return cls(SIMPLE, len(alphas), 0, tuple(alphas))

    @classmethod
    def nonsimple(cls, m: int, p: int, alphas: Sequence[int]) -> ParrySubstitution:
        return cls(NONSIMPLE, m, p, tuple(alphas))

    @property
    def size(self) -> int:
        """Alphabet size A."""
        return len(self.alphas)

    @property
    def alpha0(self) -> int:
        return self.alphas[0]

    @cached_property
    def images(self) -> tuple[bytes, ...]:
        A = self.size
        out = []
        for letter, alpha in enumerate(self.alphas):
            if letter < A - 1:
                tail = bytes([letter + 1])
            elif self.kind == SIMPLE:
                tail = b""
            else:
                tail = bytes([self.m])
            out.append(b"\x00" * alpha + tail)
        return tuple(out)

    @cached_property
    def image_lengths(self) -> tuple[int, ...]:
        return tuple(len(img) for img in self.images)

    def to_dict(self) -> dict:
        if self.kind == SIMPLE:
            return {"kind": SIMPLE, "alphas": list(self.alphas)}
        return {"kind": NONSIMPLE, "m": self.m, "p": self.p, "alphas": list(self.alphas)}

    def shorthand(self) -> str:
        alphas = ",".join(str(a) for a in self.alphas)
        if self.kind == SIMPLE:
            return f"simple:{alphas}"
        return f"nonsimple:m={self.m},p={self.p}:{alphas}"

    def __str__(self):
        return self.shorthand()


FIBONACCI = ParrySubstitution.simple((1, 1))
TRIBONACCI = ParrySubstitution.simple((1, 1, 1))


def _check_ints(alphas, m=None, p=None):
    for a in alphas:
        if isinstance(a, bool) or not isinstance(a, int):
            raise SpecSyntaxError(f"exponents must be integers, got {a!r}")
        if a < 0:
            raise ExponentRangeError(f"negative exponent {a}")
    for name, value in (("m", m), ("p", p)):
        if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
            raise SpecSyntaxError(f"{name} must be an integer, got {value!r}")
    if m is not None and m < 1:
        raise ExponentRangeError(f"m must be >= 1, got {m}")
    if p is not None and p < 0:
        raise ExponentRangeError(f"p must be >= 0, got {p}")


def _from_mapping(doc: Mapping) -> ParrySubstitution:
    kind = doc.get("kind")
    alphas = doc.get("alphas")
    if kind not in (SIMPLE, NONSIMPLE):
        raise SpecSyntaxError(f"kind must be 'simple' or 'nonsimple', got {kind!r}")
    if not isinstance(alphas, list) or not alphas:
        raise SpecSyntaxError("alphas must be a non-empty integer array")
    if kind == SIMPLE:
        _check_ints(alphas)
        return ParrySubstitution.simple(alphas)
    m, p = doc.get("m"), doc.get("p")
    if m is None or p is None:
        raise SpecSyntaxError("nonsimple spec needs both 'm' and 'p'")
    _check_ints(alphas, m, p)
    if m + p != len(alphas):
        raise SpecSyntaxError(f"m + p = {m + p} but {len(alphas)} exponents given")
    return ParrySubstitution.nonsimple(m, p, alphas)


def _from_shorthand(text: str) -> ParrySubstitution:
    head, _, rest = text.partition(":")
    head = head.strip().lower()

    def ints(chunk):
        try:
            return [int(x) for x in chunk.split(",") if x.strip() != ""]
        except ValueError:
            raise SpecSyntaxError(f"bad integer list {chunk!r}") from None

    if head == SIMPLE:
        return _from_mapping({"kind": SIMPLE, "alphas": ints(rest)})
    if head == NONSIMPLE:
        params, sep, alphas = rest.partition(":")
        if not sep:
            raise SpecSyntaxError("expected nonsimple:m=<m>,p=<p>:<alphas>")
        doc: dict = {"kind": NONSIMPLE, "alphas": ints(alphas)}
        for item in params.split(","):
            key, eq, value = item.partition("=")
            if not eq or key.strip() not in ("m", "p"):
                raise SpecSyntaxError(f"bad parameter {item!r}")
            try:
                doc[key.strip()] = int(value)
            except ValueError:
                raise SpecSyntaxError(f"bad parameter {item!r}") from None
        return _from_mapping(doc)
    raise SpecSyntaxError(f"unrecognised spec {text!r}")


def parse_spec(text) -> ParrySubstitution:
    """Parse a spec document (JSON text, mapping or CLI shorthand).

    Only the document shape is checked here; Parry constraints are the job
    of :func:`validate`.
    """
    if isinstance(text, ParrySubstitution):
        return text
    if isinstance(text, Mapping):
        return _from_mapping(text)
    if not isinstance(text, str):
        raise SpecSyntaxError(f"cannot parse spec from {type(text).__name__}")
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise SpecSyntaxError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise SpecSyntaxError("spec JSON must be an object")
        return _from_mapping(doc)
    return _from_shorthand(stripped)


def validate(sub: ParrySubstitution) -> None:
    """Raise :class:`ConstraintViolation` unless the printed Parry constraints hold.

    Deeper admissibility conditions on the exponents (the ones that make the
    substitution come from an actual Parry number) are not checked.
    """
    alphas = sub.alphas
    if sub.kind == SIMPLE and (sub.p != 0 or sub.m != len(alphas)):
        raise ConstraintViolation("shape", "simple substitution needs p=0 and m=len(alphas)")
    if sub.kind == NONSIMPLE and (sub.p < 1 or sub.m < 1 or sub.m + sub.p != len(alphas)):
        raise ConstraintViolation("shape", "nonsimple substitution needs m>=1, p>=1, m+p=len(alphas)")
    if alphas[0] < 1:
        raise ConstraintViolation("alpha_0>=1")
    for letter, a in enumerate(alphas):
        if a > alphas[0]:
            raise ConstraintViolation(
                "alpha_l<=alpha_0", f"alpha_{letter}={a} exceeds alpha_0={alphas[0]}"
            )
    if sub.kind == SIMPLE:
        if alphas[-1] < 1:
            raise ConstraintViolation("alpha_{m-1}>=1")
    elif not any(a >= 1 for a in alphas[sub.m:]):
        raise ConstraintViolation("alpha_l>=1 for some l in m..m+p-1")


def apply(sub: ParrySubstitution, w: bytes) -> bytes:
    images = sub.images
    return b"".join([images[x] for x in w])


_cache_lock = threading.Lock()
_power_cache: dict[tuple[ParrySubstitution, int], list[bytes]] = {}


def power_image(sub: ParrySubstitution, letter: int, k: int, cap: int | None = None) -> bytes:
    """Return phi^k(letter); images are memoized per (substitution, letter)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    cap = _config.max_prefix() if cap is None else cap
    with _cache_lock:
        chain = _power_cache.setdefault((sub, letter), [bytes([letter])])
        while len(chain) <= k:
            if len(chain[-1]) > cap:
                break
            chain.append(apply(sub, chain[-1]))
        if len(chain) > k and len(chain[k]) <= cap:
            return chain[k]
    raise ResourceLimit(f"|phi^{k}({letter})| exceeds the length cap {cap}")


_prefix_cache: dict[ParrySubstitution, bytes] = {}


def fixed_point_prefix(sub: ParrySubstitution, length: int, cap: int | None = None) -> bytes:
    """First ``length`` letters of the fixed point starting with 0."""
    if length < 0:
        raise ValueError("length must be non-negative")
    cap = _config.max_prefix() if cap is None else cap
    if length > cap:
        raise ResourceLimit(f"prefix length {length} exceeds the cap {cap}")
    with _cache_lock:
        w = _prefix_cache.get(sub, b"\x00")
        if len(w) < length:
            # phi(0) starts with 0, so phi(w) extends w
            while len(w) < length:
                w = apply(sub, w)
            _prefix_cache[sub] = w
    return w[:length]


def incidence_matrix(sub: ParrySubstitution) -> tuple[tuple[int, ...], ...]:
    """Row l is the Parikh vector of phi(l)."""
    A = sub.size
    rows = []
    for img in sub.images:
        row = [0] * A
        for x in img:
            row[x] += 1
        rows.append(tuple(row))
    return tuple(rows)


def vec_mat(v: Sequence[int], M: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Row vector times matrix in exact integers."""
    A = len(M[0])
    out = [0] * A
    for coef, row in zip(v, M):
        if coef:
            for i in range(A):
                out[i] += coef * row[i]
    return tuple(out)


def u_sequence(sub: ParrySubstitution, k: int) -> tuple[int, ...]:
    """U_0..U_k with U_j = |phi^j(0)|, computed exactly from powers of M."""
    if k < 0:
        raise ValueError("k must be non-negative")
    M = incidence_matrix(sub)
    row = tuple(1 if i == 0 else 0 for i in range(sub.size))
    out = [1]
    for _ in range(k):
        row = vec_mat(row, M)
        out.append(sum(row))
    return tuple(out)


def characteristic_polynomial(M: Sequence[Sequence[int]]) -> list[int]:
    """Integer coefficients of det(xI - M), leading coefficient first.

    Faddeev-LeVerrier recursion in exact rational arithmetic.
    """
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk <- A @ Mk + c_{k-1} I
        prod = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += coeffs[-1]
        Mk = prod
        AM = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(AM[i][i] for i in range(n)) / k)
    assert all(c.denominator == 1 for c in coeffs)
    return [int(c) for c in coeffs]


def eigenvalues(sub: ParrySubstitution) -> np.ndarray:
    poly = characteristic_polynomial(incidence_matrix(sub))
    roots = np.roots(np.array(poly, dtype=float))
    if roots.size != len(poly) - 1 or not np.all(np.isfinite(roots)):
        raise NumericalFailure(f"root finder failed on {poly}")
    return roots


def spectral_balance_check(sub: ParrySubstitution, tol: float = 1e-9) -> Balance:
    """Certify balancedness when every non-dominant eigenvalue lies strictly inside the unit disc.

    Moduli within ``tol`` of 1, and ties for the dominant modulus, give
    ``INCONCLUSIVE``.
    """
    moduli = np.sort(np.abs(eigenvalues(sub)))[::-1]
    if moduli.size == 1:
        return Balance.CERTIFIED
    if moduli[0] - moduli[1] <= tol:
        return Balance.INCONCLUSIVE
    if np.all(moduli[1:] < 1.0 - tol):
        return Balance.CERTIFIED
    return Balance.INCONCLUSIVE
