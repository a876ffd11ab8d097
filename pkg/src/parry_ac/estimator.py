"""End-to-end build and a scikit-learn style wrapper around it.

>>> model = ParryAutomaton().fit("simple:1,1")
>>> model.predict([1, 10, 10**6]).tolist()
[2, 2, 2]
"""

from __future__ import annotations

import logging
import time

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import builder, dfao as dfao_mod, oracle
from .numeration import Numeration, greedy_urep
from .substitution import ParrySubstitution, parse_spec, validate

log = logging.getLogger(__name__)


def build_automaton(
    sub: ParrySubstitution,
    c: int | None = None,
    c_margin: int = 0,
    *,
    minimize: bool = False,
    reproducible: bool = False,
    cap_len: int | None = None,
    max_states: int | None = None,
    prune: bool = False,
):
    """Validate ``sub``, pick constants, enumerate states and assemble the automaton.

    ``c`` defaults to the oracle's empirical estimate; ``c_margin`` is added
    on top.  Returns ``(dfao, fixpoint_result, constants)``.
    """
    validate(sub)
    estimate = None
    if c is None:
        estimate = oracle.estimate_c(sub, cap_len=cap_len)
        if estimate.status is not oracle.Growth.STABLE:
            log.warning("balance estimate still growing at %d letters (c=%d)", estimate.scan_len, estimate.c)
        c = estimate.c
    c += c_margin
    consts = builder.make_constants(sub, c)
    fix = builder.fixpoint_enumerate(sub, consts, max_states=max_states)
    if prune:
        fix = prune_unreachable(fix, Numeration(sub))
    outputs = builder.compute_outputs(fix.states)
    meta = {
        "substitution": sub.to_dict(),
        "c": consts.c,
        "H": consts.H,
        "L": consts.L,
        "states": len(fix.states) - 1,
        "c_estimate_status": estimate.status.value if estimate else "given",
        "mem2_sizes": fix.mem2_sizes,
        "built_at": 0 if reproducible else int(time.time()),
    }
    automaton = dfao_mod.assemble(fix, outputs, meta)
    if minimize:
        automaton = dfao_mod.minimize(automaton)
    return automaton, fix, consts


def prune_unreachable(fix: builder.FixpointResult, num: Numeration, limit: int = 100_000) -> builder.FixpointResult:
    """Drop states not visited while reading the representations of n <= ``limit``.

    Transitions into dropped states are sent to the sink.
    """
    keep = sorted(builder.reachable_greedy(fix, num, limit))
    if fix.sink is not None and fix.sink not in keep:
        keep.append(fix.sink)
    renum = {old: new for new, old in enumerate(keep)}
    states = [fix.states[j] for j in keep if j != fix.sink]
    sink = renum.get(fix.sink)
    need_sink = False
    delta = []
    for j in keep:
        row = []
        for k in fix.delta[j]:
            if k in renum:
                row.append(renum[k])
            else:
                need_sink = True
                row.append(None)
        delta.append(row)
    if need_sink and sink is None:
        sink = len(delta)
        delta.append([sink] * len(fix.delta[0]))
    delta = [[sink if k is None else k for k in row] for row in delta]
    return builder.FixpointResult(states, delta, sink, fix.mem2_sizes, fix.mem1_sizes)


class ParryAutomaton(BaseEstimator):
    """Abelian complexity and balance function of a Parry fixed point, by automaton.

    ``fit`` takes the substitution (a :class:`ParrySubstitution`, spec
    mapping, JSON text or shorthand like ``"simple:1,1"``) and builds the
    automaton; ``predict`` maps integers n >= 1 to AC(n) or B(n).

    Parameters
    ----------
    c : int or None
        Balance bound for the state filter; estimated from the word when None.
    c_margin : int
        Slack added to ``c``.  Larger values are safe but give more states.
    minimize : bool
        Minimize the automaton after construction.
    output : {"ac", "balance"}
        Default output of ``predict``.
    """

    def __init__(self, c=None, c_margin=0, minimize=False, output="ac", max_states=None):
        self.c = c
        self.c_margin = c_margin
        self.minimize = minimize
        self.output = output
        self.max_states = max_states

    def fit(self, X, y=None):
        sub = parse_spec(X)
        if self.output not in (dfao_mod.AC, dfao_mod.BALANCE):
            raise ValueError(f"output must be 'ac' or 'balance', got {self.output!r}")
        if self.c is not None and int(self.c) < 1:
            raise ValueError("c must be a positive integer")
        self.substitution_ = sub
        self.dfao_, self.fixpoint_, self.constants_ = build_automaton(
            sub,
            c=self.c,
            c_margin=self.c_margin,
            minimize=self.minimize,
            max_states=self.max_states,
        )
        self.numeration_ = Numeration(sub)
        self.n_states_ = self.dfao_.num_states
        return self

    @classmethod
    def from_dfao(cls, automaton: dfao_mod.Dfao, output="ac"):
        """Wrap an already built (e.g. loaded from JSON) automaton."""
        model = cls(output=output)
        model.substitution_ = parse_spec(automaton.substitution)
        model.dfao_ = automaton
        model.fixpoint_ = None
        model.constants_ = builder.Constants(
            automaton.meta.get("c", 0), automaton.meta.get("H", 0), automaton.meta.get("L", 0)
        )
        model.numeration_ = Numeration(model.substitution_)
        model.n_states_ = automaton.num_states
        return model

    def _check_n(self, X):
        values = np.asarray(X, dtype=object).ravel()
        out = []
        for v in values:
            if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
                raise ValueError(f"expected positive integers, got {v!r}")
            if v < 1:
                raise ValueError(f"n must be >= 1, got {v}")
            out.append(int(v))
        return out

    def transform(self, X):
        """Normal U-representations of the given integers."""
        check_is_fitted(self, "dfao_")
        return [greedy_urep(self.numeration_, n) for n in self._check_n(X)]

    def predict(self, X, output=None):
        check_is_fitted(self, "dfao_")
        which = output or self.output
        ns = self._check_n(X)
        values = [dfao_mod.eval_n(self.dfao_, self.numeration_, n, which) for n in ns]
        return np.asarray(values, dtype=np.int64)

    def predict_balance(self, X):
        return self.predict(X, output=dfao_mod.BALANCE)
