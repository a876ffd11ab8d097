import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import SUBS, built
from parry_ac import ParryAutomaton
from parry_ac.errors import ConstraintViolation, SpecSyntaxError
from parry_ac.oracle import ac_bruteforce, balance_bruteforce


def test_fit_predict_fibonacci():
    model = ParryAutomaton().fit("simple:1,1")
    assert model.constants_.c == 1
    out = model.predict([1, 2, 10, 10**6])
    assert out.dtype == np.int64
    assert out.tolist() == [2, 2, 2, 2]
    assert model.predict_balance([1, 5]).tolist() == [1, 1]
    assert model.transform([7]) == [(1, 0, 1, 0)]


def test_accepts_spec_forms():
    a = ParryAutomaton().fit({"kind": "simple", "alphas": [1, 1]})
    b = ParryAutomaton().fit('{"kind":"simple","alphas":[1,1]}')
    c = ParryAutomaton().fit(SUBS["fibonacci"])
    assert a.dfao_.delta == b.dfao_.delta == c.dfao_.delta
    assert a.dfao_.tau_ac == c.dfao_.tau_ac


def test_nonsimple_against_oracle():
    sub = SUBS["nonsimple"]
    model = ParryAutomaton(output="balance").fit(sub)
    ns = list(range(1, 120))
    assert model.predict(ns).tolist() == [balance_bruteforce(sub, n) for n in ns]
    assert model.predict(ns, output="ac").tolist() == [ac_bruteforce(sub, n) for n in ns]


def test_params_and_clone():
    model = ParryAutomaton(c=2, c_margin=1, minimize=True)
    params = model.get_params()
    assert params == {"c": 2, "c_margin": 1, "minimize": True, "output": "ac", "max_states": None}
    twin = clone(model)
    assert twin.get_params() == params and not hasattr(twin, "dfao_")
    model.set_params(output="balance")
    assert model.output == "balance"


def test_minimize_param():
    model = ParryAutomaton(minimize=True).fit("simple:1,1")
    assert model.n_states_ == 2
    assert model.predict(range(1, 50)).tolist() == [2] * 49


def test_explicit_c_and_margin():
    model = ParryAutomaton(c=1, c_margin=1).fit("simple:1,1")
    assert model.constants_.c == 2
    assert model.predict(range(1, 100)).tolist() == [2] * 99


def test_from_dfao():
    automaton, _, _ = built("tribonacci")
    model = ParryAutomaton.from_dfao(automaton)
    sub = SUBS["tribonacci"]
    assert model.predict([1, 2, 3]).tolist() == [ac_bruteforce(sub, n) for n in (1, 2, 3)]
    assert model.constants_.c == 2


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ParryAutomaton().predict([1])


@pytest.mark.parametrize("bad", [[0], [-3], [1.5], ["7"], [True]])
def test_bad_inputs(bad):
    model = ParryAutomaton().fit("simple:1,1")
    with pytest.raises(ValueError):
        model.predict(bad)


def test_bad_params_and_specs():
    with pytest.raises(ValueError):
        ParryAutomaton(output="nope").fit("simple:1,1")
    with pytest.raises(ValueError):
        ParryAutomaton(c=0).fit("simple:1,1")
    with pytest.raises(ConstraintViolation):
        ParryAutomaton().fit("simple:1,0")
    with pytest.raises(SpecSyntaxError):
        ParryAutomaton().fit("garbage")
