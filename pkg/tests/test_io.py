import json
import random
from math import comb

import pytest

import catalog as cat
from pedigree import experiment, points
from pedigree.core import PedigreeError
from pedigree.mi import check_membership
from pedigree.oracle import membership
from pedigree.sampling import MODES, sample


@pytest.mark.parametrize("mode", MODES)
def test_samples_lie_in_relaxation(mode):
    rng = random.Random(1)
    for n in (5, 6, 7):
        for _ in range(15):
            x = sample(rng, n, mode)
            assert x.n == n and check_membership(x).inside


def test_hull_samples_are_members():
    rng = random.Random(2)
    assert all(membership(sample(rng, 6, "hull")).member for _ in range(20))


def test_sampling_is_seeded():
    a = [sample(random.Random(9), 6, m) for m in MODES]
    b = [sample(random.Random(9), 6, m) for m in MODES]
    assert a == b


def test_unknown_mode():
    with pytest.raises(ValueError):
        sample(random.Random(0), 5, "grid")


def test_point_roundtrip(tmp_path):
    path = tmp_path / "p.json"
    points.save(path, cat.SIX_MEMBER, "six")
    x, label = points.load(path)
    assert x == cat.SIX_MEMBER and label == "six"
    assert all(isinstance(c, str) for c in json.loads(path.read_text())["coords"])


def test_point_with_base_coordinate():
    coords = ["1"] + [str(c) for c in cat.FIVE_MEMBER.coords]
    assert len(coords) == comb(5, 3)
    x, _ = points.from_json({"n": 5, "coords": coords})
    assert x == cat.FIVE_MEMBER
    with pytest.raises(PedigreeError, match="base triangle"):
        points.from_json({"n": 5, "coords": ["1/2"] + coords[1:]})


@pytest.mark.parametrize("data", [
    {"n": 5, "coords": ["1"] * 4},
    {"n": 3, "coords": []},
    {"coords": []},
    {"n": 5, "coords": [0.5] * 9},
])
def test_bad_point_files(data):
    with pytest.raises(PedigreeError):
        points.from_json(data)


def test_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(PedigreeError):
        points.load(path)


def test_experiment_small_run(tmp_path):
    rep = experiment.run([5], [12], seed=3)
    assert len(rep.records) == 12
    assert not rep.discrepancies() and not rep.violations()
    assert "agreement 12/12" in rep.summary()
    out = tmp_path / "d.json"
    rep.dump(out)
    assert json.loads(out.read_text()) == []


def test_seed_streams_differ():
    seeds = {experiment.seed_for(0, n, m) for n in (5, 6, 7) for m in MODES}
    assert len(seeds) == 9
