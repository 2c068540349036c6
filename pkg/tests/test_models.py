import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hvcanon import scenarios as S
from hvcanon.generate import random_hv_model
from hvcanon.measure import FiniteSpace, Partition, ValidationError, marginal
from hvcanon.models import (OBSERVABLE, EmpiricalModel, HVModel, RestrictionSpec, make_empirical, model_from_json,
                            model_to_json, realization_equivalent, realizes, restrict)
from hvcanon.properties import verdicts


def random_partition(rng, space):
    labels = list(space.labels)
    rng.shuffle(labels)
    k = rng.randint(1, len(labels))
    blocks = [[] for _ in range(k)]
    for i, x in enumerate(labels):
        blocks[i % k if i < k else rng.randrange(k)].append(x)
    return Partition(space, blocks)


def test_coin_realizes_correlated_coin():
    e = make_empirical("01", "01", "0", "0", {("0", "0", "0", "0"): F(1, 2), ("1", "1", "0", "0"): F(1, 2)})
    assert realizes(S.coin(), e)
    assert not realizes(S.coin(), S.product_coins())


def test_realizes_own_marginal():
    p = random_hv_model(3)
    assert realizes(p, EmpiricalModel(marginal(p.table, OBSERVABLE)))


def test_realizes_space_mismatch():
    with pytest.raises(ValidationError):
        realizes(S.coin(), S.pr_box())


def test_coin_and_oi_violation_are_equivalent():
    # same correlated coin, one with the coin hidden and one without
    assert realization_equivalent(S.coin(), S.oi_violation())
    assert not realization_equivalent(S.coin(), S.det())


def test_restrict_identity():
    p = S.coin()
    spec = RestrictionSpec(Partition.discrete(p.outcomes_a), Partition.discrete(p.outcomes_b))
    assert restrict(p, spec) == p


def test_restrict_coarsest_satisfies_everything_on_outcomes():
    p = random_hv_model(11, (3, 2, 2, 2, 2))
    spec = RestrictionSpec(Partition.trivial(p.outcomes_a), Partition.trivial(p.outcomes_b))
    r = restrict(p, spec)
    assert len(r.outcomes_a) == len(r.outcomes_b) == 1
    v = verdicts(r)
    outcome_props = {k: x for k, x in v.items() if k != "lambda_independence"}
    assert all(outcome_props.values())


def test_restrict_coin_merges_side_a():
    p = S.coin()
    spec = RestrictionSpec(Partition(p.outcomes_a, [("0", "1")]), Partition.discrete(p.outcomes_b))
    r = restrict(p, spec)
    assert r.outcomes_a.labels == ("0+1",)
    assert dict(r.table.mass) == {("0+1", "0", "0", "0", "l0"): F(1, 2), ("0+1", "1", "0", "0", "l1"): F(1, 2)}


def test_restrict_rejects_foreign_partition():
    p = S.coin()
    bad = Partition(FiniteSpace(["0", "1", "2"]), [("0", "1", "2")])
    with pytest.raises(ValidationError):
        restrict(p, RestrictionSpec(bad, Partition.discrete(p.outcomes_b)))


@given(st.integers(0, 10**6))
def test_restriction_preserves_properties(seed):
    rng = random.Random(seed)
    p = random_hv_model(seed, (3, 3, 2, 2, 2), rng.choice([None, "L", "SD", "PI", "OI", "WD", "LI"]))
    e = p.empirical()
    v = verdicts(p)
    for _ in range(3):
        spec = RestrictionSpec(random_partition(rng, p.outcomes_a), random_partition(rng, p.outcomes_b))
        r = restrict(p, spec)
        assert realizes(r, restrict(e, spec))
        # restriction commutes with the observable marginal
        assert r.empirical() == restrict(e, spec)
        rv = verdicts(r)
        for name, holds in v.items():
            if holds:
                assert rv[name], name


def test_restriction_reverse_via_discrete_partition():
    p = random_hv_model(5, (2, 3, 2, 2, 2))
    spec = RestrictionSpec(Partition.discrete(p.outcomes_a), Partition.discrete(p.outcomes_b))
    r = restrict(p, spec)
    assert verdicts(r) == verdicts(p)
    assert realizes(r, restrict(p.empirical(), spec))
    # a model that fails to realize e also fails on the discrete restriction
    other = S.oi_violation()
    assert not realizes(restrict(S.det(), spec_for(S.det())), restrict(other.empirical(), spec_for(other)))


def spec_for(m):
    return RestrictionSpec(Partition.discrete(m.outcomes_a), Partition.discrete(m.outcomes_b))


@pytest.mark.parametrize("name", sorted(S.SCENARIOS))
def test_json_round_trip(name):
    m = S.SCENARIOS[name]()
    data = json.loads(json.dumps(model_to_json(m)))
    assert model_from_json(data) == m


def test_json_rejects_bad_total():
    data = model_to_json(S.coin())
    data["p"]["0,0,0,0,l0"] = "1/4"
    with pytest.raises(ValidationError):
        model_from_json(data)


def test_json_accepts_e_key_for_hv_models_and_omitted_zeros():
    data = {"outcomes_a": ["0", "1"], "outcomes_b": ["0"], "measurements_a": ["0"], "measurements_b": ["0"],
            "lambda": ["l"], "e": {"0,0,0,0,l": "1/1"}}
    m = model_from_json(data)
    assert isinstance(m, HVModel)
    assert m.table[("1", "0", "0", "0", "l")] == 0


def test_json_rejects_bad_arity():
    data = {"outcomes_a": ["0"], "outcomes_b": ["0"], "measurements_a": ["0"], "measurements_b": ["0"],
            "e": {"0,0,0": "1/1"}}
    with pytest.raises(ValidationError):
        model_from_json(data)
