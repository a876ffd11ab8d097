"""Deterministic finite automaton with output: assembly, evaluation, minimization, I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from .builder import FixpointResult
from .errors import DigitRange, EmptyInput, ShapeMismatch
from .numeration import Numeration, greedy_urep

FORMAT_VERSION = 1
AC = "ac"
BALANCE = "balance"


@dataclass(frozen=True)
class Dfao:
    """Automaton reading normal U-representations, most significant digit first.

    State 0 is initial.  ``tau_ac`` and ``tau_b`` share ``delta``; the
    initial state and the sink (if any) carry the sentinel output 0.
    """

    delta: tuple[tuple[int, ...], ...]
    tau_ac: tuple[int, ...]
    tau_b: tuple[int, ...]
    alphabet_max_digit: int
    substitution: dict = field(default_factory=dict, compare=True)
    meta: dict = field(default_factory=dict, compare=True)

    @property
    def num_states(self) -> int:
        return len(self.delta)

    def output(self, which: str) -> tuple[int, ...]:
        if which == AC:
            return self.tau_ac
        if which == BALANCE:
            return self.tau_b
        raise ValueError(f"unknown output {which!r}; expected 'ac' or 'balance'")


def _check_shape(delta, tau_ac, tau_b, alpha0):
    n = len(delta)
    if len(tau_ac) != n or len(tau_b) != n:
        raise ShapeMismatch(f"{n} transition rows but {len(tau_ac)}/{len(tau_b)} outputs")
    for j, row in enumerate(delta):
        if len(row) != alpha0 + 1:
            raise ShapeMismatch(f"row {j} has {len(row)} entries, expected {alpha0 + 1}")
        for k in row:
            if not 0 <= k < n:
                raise ShapeMismatch(f"row {j} points to missing state {k}")


def assemble(fix: FixpointResult, outputs: tuple[Sequence[int], Sequence[int]], meta: dict) -> Dfao:
    """Package a fixpoint result and its output tables; the sink gets sentinel outputs."""
    tau_ac, tau_b = list(outputs[0]), list(outputs[1])
    if fix.sink is not None and len(tau_ac) == fix.sink:
        tau_ac.append(0)
        tau_b.append(0)
    alpha0 = len(fix.delta[0]) - 1
    meta = dict(meta)
    substitution = meta.pop("substitution", {})
    meta.setdefault("states", len(fix.states) - 1)
    meta.setdefault("sink", fix.sink)
    _check_shape(fix.delta, tau_ac, tau_b, alpha0)
    return Dfao(
        delta=tuple(tuple(row) for row in fix.delta),
        tau_ac=tuple(tau_ac),
        tau_b=tuple(tau_b),
        alphabet_max_digit=alpha0,
        substitution=dict(substitution),
        meta=meta,
    )


def run(dfao: Dfao, digits: Sequence[int]) -> list[int]:
    """States visited while reading ``digits``; one entry per transition plus the start."""
    delta = dfao.delta
    top = dfao.alphabet_max_digit
    state = 0
    path = [0]
    for d in digits:
        if not 0 <= d <= top:
            raise DigitRange(f"digit {d} outside 0..{top}")
        state = delta[state][d]
        path.append(state)
    return path


def eval_digits(dfao: Dfao, digits: Sequence[int], which: str = AC) -> int:
    table = dfao.output(which)
    if len(digits) == 0:
        raise EmptyInput("n = 0 has no value; the sequences start at n = 1")
    delta = dfao.delta
    top = dfao.alphabet_max_digit
    state = 0
    for d in digits:
        if not 0 <= d <= top:
            raise DigitRange(f"digit {d} outside 0..{top}")
        state = delta[state][d]
    return table[state]


def eval_n(dfao: Dfao, useq, n: int, which: str = AC) -> int:
    """Value at n from its greedy representation; O(log n) transitions."""
    if n < 1:
        raise EmptyInput("n must be at least 1")
    return eval_digits(dfao, greedy_urep(useq, n), which)


def _reachable(delta) -> list[int]:
    order = [0]
    seen = {0}
    i = 0
    while i < len(order):
        for k in delta[order[i]]:
            if k not in seen:
                seen.add(k)
                order.append(k)
        i += 1
    return order


def minimize(dfao: Dfao, outputs: Sequence[str] = (AC, BALANCE)) -> Dfao:
    """Moore minimization by partition refinement.

    Unreachable states are dropped.  The initial coloring uses the outputs
    named in ``outputs``; pass only one of them to minimize for that output
    alone.  States of the result are numbered in breadth-first order from 0.
    """
    delta = dfao.delta
    live = _reachable(delta)
    colors = {}
    for j in live:
        key = tuple(dfao.output(w)[j] for w in outputs)
        colors[j] = key
    # refine until the number of blocks stops changing
    blocks = {}
    block_of = {j: blocks.setdefault(colors[j], len(blocks)) for j in live}
    while True:
        sigs = {}
        new_block = {}
        for j in live:
            sig = (block_of[j], tuple(block_of[k] for k in delta[j]))
            new_block[j] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == len(blocks):
            break
        blocks = sigs
        block_of = new_block
    block_of = new_block

    rep = {}
    for j in live:
        rep.setdefault(block_of[j], j)
    # renumber blocks breadth-first from the block of state 0
    order = []
    number = {}
    queue = [block_of[0]]
    number[block_of[0]] = 0
    while queue:
        b = queue.pop(0)
        order.append(b)
        for k in delta[rep[b]]:
            nb = block_of[k]
            if nb not in number:
                number[nb] = len(number)
                queue.append(nb)
    new_delta = tuple(tuple(number[block_of[k]] for k in delta[rep[b]]) for b in order)
    meta = dict(dfao.meta)
    meta["states"] = len(order) - 1
    meta["minimized"] = True
    meta["sink"] = None
    return replace(
        dfao,
        delta=new_delta,
        tau_ac=tuple(dfao.tau_ac[rep[b]] for b in order),
        tau_b=tuple(dfao.tau_b[rep[b]] for b in order),
        meta=meta,
    )


def to_json(dfao: Dfao, indent: int | None = None) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "substitution": dfao.substitution,
        "meta": dfao.meta,
        "alphabet_max_digit": dfao.alphabet_max_digit,
        "delta": [list(row) for row in dfao.delta],
        "tau_ac": list(dfao.tau_ac),
        "tau_b": list(dfao.tau_b),
    }
    return json.dumps(doc, indent=indent, sort_keys=False)


def from_json(text: str | dict) -> Dfao:
    doc = json.loads(text) if isinstance(text, str) else text
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {doc.get('format_version')!r}")
    try:
        delta = [list(row) for row in doc["delta"]]
        tau_ac, tau_b = list(doc["tau_ac"]), list(doc["tau_b"])
        alpha0 = int(doc["alphabet_max_digit"])
    except KeyError as exc:
        raise ValueError(f"automaton JSON lacks field {exc}") from None
    _check_shape(delta, tau_ac, tau_b, alpha0)
    return Dfao(
        delta=tuple(tuple(row) for row in delta),
        tau_ac=tuple(tau_ac),
        tau_b=tuple(tau_b),
        alphabet_max_digit=alpha0,
        substitution=dict(doc.get("substitution", {})),
        meta=dict(doc.get("meta", {})),
    )


def to_dot(dfao: Dfao, name: str = "dfao") -> str:
    """Graphviz digraph; the initial state is drawn as a double circle."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for j in range(dfao.num_states):
        shape = "doublecircle" if j == 0 else "circle"
        label = f"{j} / τ={dfao.tau_ac[j]} τ_B={dfao.tau_b[j]}"
        lines.append(f'  {j} [shape={shape}, label="{label}"];')
    for j, row in enumerate(dfao.delta):
        for d, k in enumerate(row):
            lines.append(f'  {j} -> {k} [label="{d}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(dfao: Dfao, fmt: str = "json") -> str:
    fmt = fmt.lower()
    if fmt == "json":
        return to_json(dfao)
    if fmt == "dot":
        return to_dot(dfao)
    raise ValueError(f"unknown export format {fmt!r}")


def import_json(text: str) -> Dfao:
    return from_json(text)


def load(path) -> Dfao:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())


def save(dfao: Dfao, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(dfao))
        fh.write("\n")


def numeration_for(dfao: Dfao) -> Numeration:
    """Numeration system of the substitution recorded in the automaton's metadata."""
    from .substitution import parse_spec

    return Numeration(parse_spec(dfao.substitution))
