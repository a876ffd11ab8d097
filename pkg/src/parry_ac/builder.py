"""State construction for the abelian-complexity automaton.

A state is a set of triples ``(psi, a, window)``: the relative Parikh
vector of a length-n factor, its first letter, and the ``2L+1`` letters
centred on the letter right after the factor.  Appending a digit to the
representation of n maps the state of n to the state of the new number by
a purely local rewrite (:func:`step_transform`); closing the base states
under that rewrite gives the finite state space.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _config
from .errors import ConstantsTooSmall, IndexOverflow, ResourceLimit
from .substitution import ParrySubstitution, fixed_point_prefix, incidence_matrix, vec_mat

log = logging.getLogger(__name__)

Vector = tuple[int, ...]
Triple = tuple[Vector, int, bytes]
StateSet = tuple[Triple, ...]

EMPTY_STATE: StateSet = ()


@dataclass(frozen=True)
class Constants:
    c: int
    H: int
    L: int


@dataclass
class FixpointResult:
    """Output of :func:`fixpoint_enumerate`.

    ``states[0]`` is the empty set.  ``delta[j][d]`` is a state index, or
    ``sink`` when the image of state j under digit d failed the c-bound.
    ``sink`` is ``None`` when no transition needed it.
    """

    states: list[StateSet]
    delta: list[list[int]]
    sink: int | None
    mem2_sizes: list[int] = field(default_factory=list)
    mem1_sizes: list[int] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.mem2_sizes) - 1

    @property
    def mem2_size(self) -> int:
        return self.mem2_sizes[-1]


def canonical(triples: Iterable[Triple]) -> StateSet:
    return tuple(sorted(set(triples)))


def compute_H(sub: ParrySubstitution, c: int) -> int:
    """Max component sum of v·M over integer vectors v with entries in [-c, c].

    The component sum of v·M is sum(v_l |phi(l)|) and every |phi(l)| is
    positive, so the maximum sits at v = (c, ..., c).
    """
    return c * sum(sub.image_lengths)


def compute_H_enumerated(sub: ParrySubstitution, c: int) -> int:
    M = incidence_matrix(sub)
    rng = range(-c, c + 1)
    return max(sum(vec_mat(v, M)) for v in itertools.product(rng, repeat=sub.size))


def compute_L(sub: ParrySubstitution, c: int, H: int, cap: int | None = None) -> int:
    """Smallest n whose length-n prefix holds at least 2 + H/alpha_0 + c zeros."""
    cap = _config.max_prefix() if cap is None else cap
    alpha0 = sub.alpha0
    length = 64
    while True:
        u = fixed_point_prefix(sub, min(length, cap))
        zeros = 0
        for i, x in enumerate(u):
            if x == 0:
                zeros += 1
                # exact form of zeros >= 2 + H/alpha0 + c
                if zeros * alpha0 >= (2 + c) * alpha0 + H:
                    return i + 1
        if length >= cap:
            raise ResourceLimit(f"no prefix within {cap} letters reaches the zero threshold")
        length *= 2


def factors(sub: ParrySubstitution, n: int, start: int = 0, cap: int | None = None) -> frozenset[bytes]:
    """Length-n factors starting at index >= start, with doubling until stable twice."""
    cap = _config.max_prefix() if cap is None else cap
    length = start + 16 * n + 256
    found = None
    unchanged = 0
    while unchanged < 2:
        if length > cap:
            raise ResourceLimit(f"factors of length {n} not stable within {cap} letters")
        u = fixed_point_prefix(sub, length)
        got = frozenset(u[j : j + n] for j in range(start, length - n + 1))
        unchanged = unchanged + 1 if got == found else 0
        found = got
        length *= 2
    return found


def check_L(sub: ParrySubstitution, H: int, L: int) -> None:
    """Raise unless |phi(w)| - |w| >= 2 alpha_0 + H for every factor w of length L.

    Longer factors then satisfy it too, since every letter has a non-empty image.
    """
    need = 2 * sub.alpha0 + H
    lengths = sub.image_lengths
    for w in factors(sub, L):
        gain = sum(lengths[x] for x in w) - len(w)
        if gain < need:
            raise ConstantsTooSmall(f"factor of length {L} expands by only {gain} < {need}")


def make_constants(sub: ParrySubstitution, c: int) -> Constants:
    if c < 1:
        raise ValueError("balance bound c must be positive")
    H = compute_H(sub, c)
    if sub.size <= 4:
        enumerated = compute_H_enumerated(sub, c)
        if enumerated != H:
            raise AssertionError(f"closed-form H={H} disagrees with enumeration {enumerated}")
    L = compute_L(sub, c, H)
    check_L(sub, H, L)
    return Constants(c, H, L)


def scan_triples(sub: ParrySubstitution, L: int, n: int, length: int) -> set[Triple]:
    """Triples of every window start j >= L that fits in the first ``length`` letters."""
    u = fixed_point_prefix(sub, length)
    A = sub.size
    arr = np.frombuffer(u, dtype=np.uint8)
    onehot = np.zeros((length + 1, A), dtype=np.int64)
    onehot[np.arange(1, length + 1), arr] = 1
    cum = np.cumsum(onehot, axis=0)
    last = length - n - L - 1  # window end j+n+L must stay inside u
    if last < L:
        return set()
    js = np.arange(L, last + 1)
    rels = (cum[js + n] - cum[js] - cum[n]).tolist()
    out = set()
    for j, rel in zip(range(L, last + 1), rels):
        out.add((tuple(rel), u[j], u[j + n - L : j + n + L + 1]))
    return out


def base_state_set(sub: ParrySubstitution, consts: Constants, n: int, cap: int | None = None) -> StateSet:
    """S(n) by direct window scan, doubling the prefix until stable twice."""
    if n < 1:
        raise ValueError("n must be positive")
    cap = _config.max_prefix() if cap is None else cap
    L = consts.L
    length = 16 * (n + 2 * L) + 256
    found = None
    unchanged = 0
    while unchanged < 2:
        if length > cap:
            raise ResourceLimit(f"S({n}) not stable within {cap} letters")
        got = scan_triples(sub, L, n, length)
        unchanged = unchanged + 1 if got == found else 0
        found = got
        length *= 2
    return canonical(found)


class _Expander:
    """Per-window data for step_transform, cached across calls.

    For a window b_{-L}..b_L it stores Y = phi(b_{-L}..b_L), the index r0
    of y_1 (first letter of phi(b_0)) inside Y, and the cumulative Parikh
    vectors of Y.
    """

    def __init__(self, sub: ParrySubstitution, L: int):
        self.sub = sub
        self.L = L
        self.images = sub.images
        self.size = sub.size
        self.cache: dict[bytes, tuple[bytes, int, list[Vector]]] = {}

    def expand(self, window: bytes):
        got = self.cache.get(window)
        if got is not None:
            return got
        images, L, A = self.images, self.L, self.size
        left = b"".join([images[x] for x in window[:L]])
        Y = left + b"".join([images[x] for x in window[L:]])
        cum = [(0,) * A]
        counts = [0] * A
        for x in Y:
            counts[x] += 1
            cum.append(tuple(counts))
        got = (Y, len(left), cum)
        self.cache[window] = got
        return got


def step_candidates(
    sub: ParrySubstitution,
    consts: Constants,
    S: Sequence[Triple],
    d: int,
    *,
    M=None,
    expander: _Expander | None = None,
) -> Iterator[Triple]:
    """Every triple the digit-d rewrite produces, one per (source triple, offset t), duplicates included."""
    M = incidence_matrix(sub) if M is None else M
    expander = _Expander(sub, consts.L) if expander is None else expander
    L = consts.L
    images = sub.images
    A = sub.size
    for psi, a, window in S:
        psiM = vec_mat(psi, M)
        h = sum(psiM)
        Y, r0, cum = expander.expand(window)
        # y_i lives at Y[r0 + i - 1]; y_1 is the first letter of phi(b_0)
        base = cum[r0]
        x = images[a]
        for t in range(len(x)):
            e = t + d - h
            lo = r0 + e - L
            hi = r0 + e + L + 1
            if lo < 0 or hi > len(Y):
                raise IndexOverflow(
                    f"offset {e} needs letters y[{e + 1 - L}..{e + 1 + L}] outside the expanded window; "
                    "increase L"
                )
            # e > 0 adds Psi(y_1..y_e); e < 0 removes Psi(y_{e+1}..y_0); e == 0 adds nothing
            tail = cum[r0 + e]
            new_psi = list(psiM)
            new_psi[0] -= t + d
            for i in range(A):
                new_psi[i] += tail[i] - base[i]
            yield (tuple(new_psi), x[t], Y[lo:hi])


def step_transform(
    sub: ParrySubstitution,
    consts: Constants,
    S: Sequence[Triple],
    d: int,
    *,
    M=None,
    expander: _Expander | None = None,
) -> StateSet:
    """Rewrite the state of n into the state of N, where <N> = <n> followed by d."""
    return canonical(step_candidates(sub, consts, S, d, M=M, expander=expander))


def step_fanout(sub: ParrySubstitution, S: Sequence[Triple]) -> int:
    """Number of candidate triples step_transform emits before deduplication."""
    return sum(sub.image_lengths[a] for _, a, _ in S)


def is_bounded(S: Sequence[Triple], c: int) -> bool:
    return all(abs(x) <= c for psi, _, _ in S for x in psi)


def project_prel(S: Sequence[Triple]) -> frozenset[Vector]:
    return frozenset(psi for psi, _, _ in S)


def state_size_bound(sub: ParrySubstitution, consts: Constants) -> int:
    """Upper bound on the number of distinct triples over all states."""
    A = sub.size
    return (2 * consts.c + 1) ** A * A ** (2 * consts.L + 2)


def fixpoint_enumerate(
    sub: ParrySubstitution,
    consts: Constants,
    *,
    max_states: int | None = None,
    base_states: Sequence[StateSet] | None = None,
) -> FixpointResult:
    """Close the base states S(1)..S(alpha_0) under step_transform.

    Mem1 holds admitted states (psi entries bounded by c), Mem2 the pairs
    (image, digit).  Rounds process the states admitted in the previous
    round in index order; the loop ends on the first round in which Mem2
    does not grow.  Digit extensions are applied whether or not they form a
    valid greedy representation.
    """
    max_states = _config.max_states() if max_states is None else max_states
    alpha0 = sub.alpha0
    digits = range(alpha0 + 1)
    M = incidence_matrix(sub)
    expander = _Expander(sub, consts.L)

    if base_states is None:
        base_states = [base_state_set(sub, consts, n) for n in range(1, alpha0 + 1)]
    states: list[StateSet] = [EMPTY_STATE, *base_states]
    index: dict[StateSet, int] = {}
    for j, S in enumerate(states):
        index.setdefault(S, j)
    delta: list[list[int] | None] = [[0, *range(1, alpha0 + 1)]] + [None] * alpha0

    SINK = -1
    mem2 = {(S, d) for S in base_states for d in digits}
    mem2_sizes = [len(mem2)]
    mem1_sizes = [len(states) - 1]
    frontier = list(range(1, alpha0 + 1))
    while True:
        fresh = []
        for j in frontier:
            row = []
            for d in digits:
                image = step_transform(sub, consts, states[j], d, M=M, expander=expander)
                mem2.add((image, d))
                if not is_bounded(image, consts.c):
                    row.append(SINK)
                    continue
                k = index.get(image)
                if k is None:
                    k = len(states)
                    if k > max_states:
                        raise ResourceLimit(f"more than {max_states} states")
                    states.append(image)
                    index[image] = k
                    delta.append(None)
                    fresh.append(k)
                row.append(k)
            delta[j] = row
        mem2_sizes.append(len(mem2))
        mem1_sizes.append(len(states) - 1)
        log.info(
            "round %d: processed %d states, |Mem1|=%d, |Mem2|=%d",
            len(mem2_sizes) - 1, len(frontier), len(states) - 1, len(mem2),
        )
        if mem2_sizes[-1] == mem2_sizes[-2]:
            break
        frontier = fresh
    if any(row is None for row in delta):
        raise AssertionError("Mem2 stopped growing with unprocessed states")

    sink = None
    if any(SINK in row for row in delta):
        sink = len(states)
        delta = [[sink if k == SINK else k for k in row] for row in delta]
        delta.append([sink] * (alpha0 + 1))
    log.info("fixpoint: M=%d states after %d rounds", len(states) - 1, len(mem2_sizes) - 1)
    return FixpointResult(states, delta, sink, mem2_sizes, mem1_sizes)


def compute_outputs(states: Sequence[StateSet]) -> tuple[list[int], list[int]]:
    """Abelian complexity and balance read off each state; 0 marks the empty state."""
    tau_ac, tau_b = [], []
    for S in states:
        prel = project_prel(S)
        if not prel:
            tau_ac.append(0)
            tau_b.append(0)
            continue
        tau_ac.append(len(prel))
        # max over pairs of the sup-norm difference = widest coordinate range
        cols = list(zip(*prel))
        tau_b.append(max(max(col) - min(col) for col in cols))
    return tau_ac, tau_b


def reachable_greedy(fix: FixpointResult, num, limit: int = 100_000) -> set[int]:
    """States reached by the greedy representations of n = 0..limit."""
    from .numeration import greedy_urep

    seen = {0}
    for n in range(1, limit + 1):
        state = 0
        for d in greedy_urep(num, n):
            state = fix.delta[state][d]
            seen.add(state)
    return seen
