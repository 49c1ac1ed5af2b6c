import numpy as np
import pytest

import su11

PRIMITIVE = "modes a:2 b:1\nsq a1 b1 eta=0.4\nbs a2 a1 theta=pi/2 phi=pi\n"


def test_version():
    assert su11.__version__


def test_dimension_and_basis():
    assert su11.dimension(3, 4) == 64
    b = su11.basis(2, 3)
    assert b.shape == (9, 2)
    assert b[1].tolist() == [0, 1]


def test_parse_round_trip():
    doc = su11.parse(PRIMITIVE)
    assert doc["ok"]
    assert su11.parse(doc["canonical"])["canonical"] == doc["canonical"]
    bad = su11.parse("modes a:1 b:1\nsq a1 b3 eta=1\n")
    assert not bad["ok"]
    assert bad["errors"][0]["span"]["line"] == 2


def test_simulate_is_normalized():
    amps = su11.simulate(PRIMITIVE, cutoff=6)
    assert amps.shape == (216,)
    assert abs(np.vdot(amps, amps) - 1.0) < 1e-9


def test_simulate_bad_text_raises():
    with pytest.raises(ValueError):
        su11.simulate("sq a1 b1\n")


def test_capacity_error():
    with pytest.raises(su11.CapacityError):
        su11.simulate(PRIMITIVE, cutoff=6, input="7,0,0")


def test_reduce():
    assert su11.reduce(PRIMITIVE)["reducible"]
    doc = su11.reduce("modes a:1 b:2\nbs b1 b2 theta=0.3 phi=0\n")
    assert not doc["reducible"]
    assert doc["reason"]


def test_decompose_squeezed_vacuum():
    text = "modes a:1 b:1\nsq a1 b1 eta=0.3\n"
    amps = su11.simulate(text, cutoff=10)
    doc = su11.decompose(amps, 1, 1, 10)
    assert {t["two_k"] for t in doc["terms"]} == {1}
    assert doc["residual_norm"] < 1e-9


def test_verify_algebra():
    checks = su11.verify("algebra")
    assert checks and all(c["pass"] for c in checks)


def test_three_mode_identity_small():
    assert su11.three_mode_identity(0.2, 8, 2) < 1e-9
