from fractions import Fraction

import pytest

from surfalg import corpus, errors as E
from surfalg.quiver_core import (Quiver, WeightedQuiver, make_weights, parse_fraction,
                                 triangulation_quiver_from_json, uniform_weights,
                                 validate_triangulation_quiver)
from surfalg.surface import quiver_from_surface, validate_surface


def disc_doc():
    return corpus.load("disc.quiver.json")


def test_disc_orbits():
    tq = corpus.tq("disc")
    assert tq.f_orbits == (("alpha", "xi", "delta"), ("beta", "nu", "mu"), ("rho",), ("gamma",))
    assert tq.g_orbits == (("alpha", "beta", "gamma", "nu", "delta", "rho"), ("xi", "mu"))
    assert tq.bar["alpha"] == "rho" and tq.bar["xi"] == "beta"
    assert tq.g["alpha"] == tq.bar[tq.f["alpha"]]


def test_ex42_orbit_lengths():
    tq = corpus.tq("ex42")
    assert sorted(len(o) for o in tq.g_orbits) == [2, 3, 5]
    assert tq.orbit("alpha") == ("alpha", "beta", "gamma", "rho", "sigma")


def test_markov_quiver_from_torus():
    tq = quiver_from_surface(corpus.surface("torus"))
    assert len(tq.quiver.vertices) == 3 and len(tq.arrows) == 6
    assert [len(o) for o in tq.f_orbits] == [3, 3]
    assert [len(o) for o in tq.g_orbits] == [6]


def test_f_orbit_of_length_two_rejected():
    q = Quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1"), ("c", "1", "2"), ("d", "2", "1")])
    with pytest.raises(E.FCycleNotLength1Or3):
        validate_triangulation_quiver(q, {"a": "b", "b": "a", "c": "d", "d": "c"})


def test_f_not_following_arrows():
    doc = disc_doc()
    doc["f"]["alpha"], doc["f"]["beta"] = doc["f"]["beta"], doc["f"]["alpha"]
    with pytest.raises(E.FNotFollowingArrows):
        triangulation_quiver_from_json(doc)


def test_f_not_a_permutation():
    doc = disc_doc()
    doc["f"]["alpha"] = doc["f"]["beta"]
    with pytest.raises(E.FNotPermutation):
        triangulation_quiver_from_json(doc)


def test_f_unknown_arrow():
    doc = disc_doc()
    doc["f"]["zz"] = "alpha"
    with pytest.raises(E.UnknownArrow):
        triangulation_quiver_from_json(doc)


def test_not_two_regular():
    q = Quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])
    with pytest.raises(E.NotTwoRegular):
        validate_triangulation_quiver(q, {"a": "b", "b": "a"})


def test_disconnected_and_too_small():
    q = Quiver(["1", "2"], [("a", "1", "1"), ("b", "1", "1"), ("c", "2", "2"), ("d", "2", "2")])
    with pytest.raises(E.Disconnected):
        validate_triangulation_quiver(q, {x: x for x in "abcd"})
    q1 = Quiver(["1"], [("a", "1", "1"), ("b", "1", "1")])
    with pytest.raises(E.FewerThanTwoVertices):
        validate_triangulation_quiver(q1, {"a": "a", "b": "b"})


def test_malformed_quiver_documents():
    with pytest.raises(E.InvalidQuiver):
        Quiver(["1"], [("a", "1", "2")])
    with pytest.raises(E.InvalidQuiver):
        Quiver(["1"], [("a", "1", "1"), ("a", "1", "1")])
    doc = disc_doc()
    del doc["f"]
    with pytest.raises(E.InvalidQuiver):
        triangulation_quiver_from_json(doc)


def test_errors_are_validation_errors_with_codes():
    err = E.FNotFollowingArrows("x", arrow="a")
    assert isinstance(err, E.ValidationError)
    assert err.to_json() == {"error": "FNotFollowingArrows", "message": "x",
                             "context": {"arrow": "a"}}
    assert not isinstance(E.CapExceeded("x"), E.ValidationError)


def test_paths_compose_and_stationary_unit():
    q = corpus.tq("disc").quiver
    p = q.path("alpha", "xi")
    assert (p * q.path("delta")).arrows == ("alpha", "xi", "delta")
    assert p * q.path("alpha") is None
    e = q.stationary("1")
    assert e * p == p and p * q.stationary("4") == p
    with pytest.raises(E.InvalidQuiver):
        q.path("alpha", "alpha")


def test_parse_fraction():
    assert parse_fraction("3/2") == Fraction(3, 2)
    assert parse_fraction(-4) == -4
    with pytest.raises(E.InvalidWeights):
        parse_fraction(0.5)
    with pytest.raises(E.InvalidWeights):
        parse_fraction("1/0")


def test_make_weights_errors():
    tq = corpus.tq("disc")
    with pytest.raises(E.InvalidWeights):
        make_weights(tq, {"alpha": (1, 1)})
    with pytest.raises(E.InvalidWeights):
        make_weights(tq, {"alpha": (0, 1), "xi": (1, 1)})
    with pytest.raises(E.InvalidWeights):
        make_weights(tq, {"alpha": (1, 0), "xi": (1, 1)})
    with pytest.raises(E.InvalidWeights):
        make_weights(tq, [{"rep": "alpha"}, {"rep": "beta"}, {"rep": "xi"}])
    with pytest.raises(E.UnknownArrow):
        make_weights(tq, {"zz": (1, 1), "xi": (1, 1)})


def test_virtual_arrows_disc():
    wq = corpus.disc(2)
    assert wq.is_virtual("xi") and wq.is_virtual("mu")
    assert not wq.is_virtual("alpha")
    assert wq.virtual_arrows() == ("xi", "mu")


def test_loop_with_large_weight_not_virtual():
    wq = corpus.ex66(3)
    assert wq.n("t0.0") == 1 and not wq.is_virtual("t0.0")


def test_canonical_paths():
    wq = corpus.disc(1)
    assert wq.A("alpha").arrows == ("alpha", "beta", "gamma", "nu", "delta")
    assert wq.B("alpha").arrows == ("alpha", "beta", "gamma", "nu", "delta", "rho")
    assert wq.A("xi").arrows == ("xi",) and wq.B("xi").arrows == ("xi", "mu")
    loop = corpus.ex66(3)
    assert loop.A("t0.0").arrows == ("t0.0",) * 2
    assert loop.B("t0.0").arrows == ("t0.0",) * 3
    assert wq.A_prime("alpha").arrows == ("alpha", "beta", "gamma", "nu")
    with pytest.raises(E.APrimeUndefined):
        wq.A_prime("xi")


def test_assumption_ok_on_examples():
    for wq in (corpus.disc(1), corpus.disc(3), corpus.ex42(1), corpus.sphere(1, 2)):
        assert wq.assumption_report() == []
        wq.check_assumption()


def test_assumption_clause_one():
    wq = corpus.ex66(1)
    assert {cl for _, cl in wq.assumption_report()} == {1}
    with pytest.raises(E.AssumptionViolated):
        wq.check_assumption()


def test_assumption_clause_two():
    s = validate_surface({"edges": ["e0", "e1", "e2"],
                          "triangles": [["e2", "e0", "e1"], ["e1", "e0", "e2"]]})
    tq = quiver_from_surface(s)
    wq = WeightedQuiver(tq, uniform_weights(tq))
    assert ("t0.0", 2) in wq.assumption_report()


def test_assumption_clause_three_virtual_loop():
    s = validate_surface({"edges": ["e0", "e1"], "triangles": [["e1", "e1", "e0"]],
                          "boundary": ["e0"]})
    tq = quiver_from_surface(s)
    assert tq.quiver.arrow("t0.0").is_loop and tq.n("t0.0") == 1 and tq.n("t0.1") == 3
    ws = {tq.g_orbits[k][0]: (1, 1) for k in range(len(tq.g_orbits))}
    ws[tq.orbit("t0.0")[0]] = (2, 1)
    wq = WeightedQuiver(tq, make_weights(tq, ws))
    assert wq.is_virtual("t0.0")
    assert ("t0.1", 3) in wq.assumption_report()


def test_closed_form_dimension():
    assert corpus.disc(2).closed_form_dimension() == 76
    assert corpus.ex42(1).closed_form_dimension() == 38


def test_json_round_trip():
    tq = corpus.tq("ex42")
    again = triangulation_quiver_from_json(tq.to_json())
    assert again.f == tq.f and again.g_orbits == tq.g_orbits
