import random
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hvcanon import scenarios as S
from hvcanon.generate import random_hv_model
from hvcanon.measure import FiniteSpace, ProbTable
from hvcanon.models import HVModel, make_hv
from hvcanon.properties import (LAMBDA_INDEPENDENCE, LOCALITY, OUTCOME_INDEPENDENCE, PARAMETER_INDEPENDENCE,
                                PROPERTIES, STRONG_DETERMINISM, WEAK_DETERMINISM, check,
                                check_lambda_independence, check_locality, check_outcome_independence,
                                check_parameter_independence, check_strong_determinism, check_weak_determinism,
                                event_family, resolve, verdicts)

ALL_TRUE = dict.fromkeys(PROPERTIES, True)
CONSTRAINTS = [None, "L", "PI", "OI", "LI", "SD", "WD"]


def test_det_satisfies_everything():
    assert verdicts(S.det()) == ALL_TRUE


def test_coin_satisfies_everything():
    assert verdicts(S.coin()) == ALL_TRUE


def test_oi_violation_profile():
    v = verdicts(S.oi_violation())
    assert v == {LOCALITY: False, PARAMETER_INDEPENDENCE: True, OUTCOME_INDEPENDENCE: False,
                 LAMBDA_INDEPENDENCE: True, STRONG_DETERMINISM: False, WEAK_DETERMINISM: False}


def test_oi_violation_witness():
    r = check_locality(S.oi_violation())
    w = r.witnesses[0]
    # first violation in bitmask order is J_a={0}, J_b={0}: 1/2 vs 1/2 * 1/2
    assert dict(w.events) == {"J_a": ("0",), "J_b": ("0",)}
    assert (w.left, w.right) == (F(1, 2), F(1, 4))
    assert r.violations >= len(r.witnesses) > 0
    oi = check_outcome_independence(S.oi_violation()).witnesses[0]
    assert (oi.left, oi.right) == (F(1, 2), F(1, 4))


def test_strong_determinism_witness_value():
    w = check_strong_determinism(S.oi_violation()).witnesses[0]
    assert w.left == F(1, 2) and dict(w.events)["J_a"] == ("0",)
    assert check_weak_determinism(S.oi_violation()).witnesses[0].left == F(1, 2)


def test_ldep_profile():
    v = verdicts(S.ldep())
    assert not v[LAMBDA_INDEPENDENCE]
    assert v[STRONG_DETERMINISM] and v[WEAK_DETERMINISM]
    r = check_lambda_independence(S.ldep(), "iii")
    assert any(w.left == F(1, 2) and w.right == F(1, 4) for w in r.witnesses)


def test_signal_fails_parameter_independence():
    v = verdicts(S.signal())
    assert not v[PARAMETER_INDEPENDENCE]
    assert v[OUTCOME_INDEPENDENCE] and v[WEAK_DETERMINISM]
    assert not v[STRONG_DETERMINISM] and not v[LOCALITY]


def test_pi_trivial_with_single_settings():
    for seed in range(20):
        assert check_parameter_independence(random_hv_model(seed, (3, 2, 1, 1, 3))).holds


def test_pi_with_two_identical_bob_settings():
    assert check_parameter_independence(S.coin_two_bob_settings()).holds


def test_singleton_lambda_always_independent():
    for seed in range(30):
        p = random_hv_model(seed, (2, 2, 3, 2, 1))
        for form in ("i", "ii", "iii"):
            assert check_lambda_independence(p, form).holds


@given(st.integers(0, 10**6), st.sampled_from(CONSTRAINTS))
def test_lambda_forms_agree(seed, constraint):
    p = random_hv_model(seed, (2, 2, 2, 2, 3), constraint)
    hs = {check_lambda_independence(p, f).holds for f in ("i", "ii", "iii")}
    assert len(hs) == 1


@given(st.integers(0, 10**6))
def test_lambda_independence_depends_only_on_y_lambda_marginal(seed):
    p = random_hv_model(seed, (2, 2, 2, 2, 2), random.Random(seed).choice([None, "LI"]))
    rng = random.Random(seed + 1)
    # replace every outcome kernel by a random one, keeping marg_{Y x Lambda}
    myl = {}
    for cell, m in p.table.items():
        myl[cell[2:]] = myl.get(cell[2:], F(0)) + m
    mass = {}
    for (ya, yb, lam), m in myl.items():
        w = [rng.randint(1, 3) for _ in range(4)]
        for (xa, xb), wi in zip([("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")], w):
            mass[(xa, xb, ya, yb, lam)] = m * F(wi, sum(w))
    q = HVModel(ProbTable(p.spaces, mass))
    assert check_lambda_independence(q).holds == check_lambda_independence(p).holds


@given(st.integers(0, 10**6), st.sampled_from(CONSTRAINTS))
def test_known_implications(seed, constraint):
    v = verdicts(random_hv_model(seed, (2, 2, 2, 2, 2), constraint))
    assert v[LOCALITY] == (v[PARAMETER_INDEPENDENCE] and v[OUTCOME_INDEPENDENCE])
    if v[STRONG_DETERMINISM]:
        assert v[WEAK_DETERMINISM] and v[PARAMETER_INDEPENDENCE]
    if v[WEAK_DETERMINISM]:
        assert v[OUTCOME_INDEPENDENCE]


@given(st.integers(0, 10**6), st.sampled_from(CONSTRAINTS))
def test_verdicts_invariant_under_relabelling(seed, constraint):
    p = random_hv_model(seed, (2, 3, 2, 2, 2), constraint)
    rng = random.Random(seed)
    maps = []
    for space in p.spaces:
        new = [f"r{x}" for x in space.labels]
        rng.shuffle(new)
        maps.append(dict(zip(space.labels, new)))
    spaces = [FiniteSpace(sorted(m.values())) for m in maps]
    q = HVModel(ProbTable(spaces, {tuple(m[x] for m, x in zip(maps, c)): v for c, v in p.table.items()}))
    assert verdicts(q) == verdicts(p)


@pytest.mark.parametrize("name", PROPERTIES)
def test_generators_satisfy_their_constraint(name):
    for seed in range(25):
        assert check(random_hv_model(seed, (2, 3, 2, 2, 2), name), name).holds


def test_resolve_aliases():
    assert resolve("PI") == PARAMETER_INDEPENDENCE
    assert resolve("lambda-independence") == LAMBDA_INDEPENDENCE
    with pytest.raises(ValueError):
        resolve("nonsense")


def test_bad_lambda_form():
    with pytest.raises(ValueError):
        check_lambda_independence(S.det(), "iv")


def test_event_family_cap(monkeypatch):
    assert len(event_family(FiniteSpace("abc"))) == 8
    monkeypatch.setenv("HVCANON_CAP", "subsets=2")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fam = event_family(FiniteSpace("abc"))
    assert caught
    assert len(fam) == 8  # empty, 3 singletons, 3 complements, full
    assert ("a",) in fam and ("b", "c") in fam


def test_zero_mass_cells_never_violate():
    # the (y_b = 1) context carries no mass; an odd kernel there cannot exist
    p = make_hv("01", "01", "0", "01", ["l"], {("0", "1", "0", "0", "l"): 1})
    assert verdicts(p) == ALL_TRUE
