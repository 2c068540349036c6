import json

import pytest

from hvcanon.explore import (KNOWN_TRUE, PAIRS, explore_implications, fixture_name, load_counterexample,
                             shipped_fixtures, write_fixtures)
from hvcanon.generate import random_hv_model
from hvcanon.measure import ValidationError
from hvcanon.models import model_to_json
from hvcanon.properties import LAMBDA_INDEPENDENCE, OUTCOME_INDEPENDENCE, PARAMETER_INDEPENDENCE, WEAK_DETERMINISM
from hvcanon import scenarios as S


def test_random_model_is_valid_and_deterministic():
    a = random_hv_model(1, (2, 2, 1, 1, 2))
    b = random_hv_model(1, (2, 2, 1, 1, 2))
    assert a == b
    assert sum(a.table.mass.values()) == 1
    assert random_hv_model(2, (2, 2, 1, 1, 2)) != a


def test_random_model_rejects_bad_dims():
    with pytest.raises(ValidationError):
        random_hv_model(1, (2, 2, 0, 1, 2))
    with pytest.raises(ValidationError):
        random_hv_model(1, (2, 2, 1))


def test_small_exploration_is_deterministic():
    a = explore_implications(7, 20)
    b = explore_implications(7, 20)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    for pair in KNOWN_TRUE:
        assert a.entries[pair].counterexample is None
    assert a.joint_violations == 0


def test_write_and_reload_fixtures(tmp_path):
    m = explore_implications(3, 30)
    written = write_fixtures(m, tmp_path, date="2026-10-15")
    assert written
    for path in written:
        cx = load_counterexample(path)
        assert cx.provenance["date"] == "2026-10-15"
        # regenerate from provenance
        seed = cx.provenance["seed"]
        assert random_hv_model(seed, tuple(cx.provenance["dims"]), cx.holds) == cx.model


def test_tampered_fixture_is_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"holds": PARAMETER_INDEPENDENCE, "fails": OUTCOME_INDEPENDENCE,
                                "model": model_to_json(S.coin())}))
    with pytest.raises(ValidationError):
        load_counterexample(path)


def test_shipped_fixtures_reverify():
    paths = shipped_fixtures()
    pairs = set()
    for path in paths:
        cx = load_counterexample(path)
        assert (cx.holds, cx.fails) not in KNOWN_TRUE
        assert path.name == fixture_name(cx.holds, cx.fails)
        assert {"seed", "generator", "date"} <= set(cx.provenance)
        pairs.add((cx.holds, cx.fails))
    assert len(pairs) >= 6
    assert (OUTCOME_INDEPENDENCE, PARAMETER_INDEPENDENCE) in pairs
    assert (LAMBDA_INDEPENDENCE, OUTCOME_INDEPENDENCE) in pairs
    assert (LAMBDA_INDEPENDENCE, WEAK_DETERMINISM) in pairs
    assert len(pairs) == len(PAIRS) - len(KNOWN_TRUE)
