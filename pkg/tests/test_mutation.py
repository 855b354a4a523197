from fractions import Fraction

import pytest

from surfalg import corpus, errors as E, regress
from surfalg.mutation import (Mutation, mutate, mutation_identities, not_wta_witness,
                              short_orbit_identities, validate_mutation)
from surfalg.quiver_core import WeightedQuiver, make_weights
from surfalg.surface import quiver_from_surface, validate_surface


def disc_mut(m=1):
    return mutate(validate_mutation(corpus.disc(m, 3), ["xi"]))


def test_validation_errors():
    wq = corpus.disc(1)
    with pytest.raises(E.NotVirtualOrbit):
        validate_mutation(wq, ["alpha"])
    with pytest.raises(E.NotVirtualOrbit):
        validate_mutation(wq, [])
    with pytest.raises(E.OrbitRepeated):
        validate_mutation(wq, ["xi", "mu"])
    with pytest.raises(E.UnknownArrow):
        validate_mutation(wq, ["zz"])
    with pytest.raises(E.SingularSpherical):
        validate_mutation(corpus.sphere(1, 1, 2, Fraction(1, 2)), ["xi"])
    with pytest.raises(E.NotVirtualOrbit):
        validate_mutation(
            WeightedQuiver(wq.tq, make_weights(wq.tq, {"alpha": (1, 1), "xi": (2, 1)})), ["xi"])


def test_too_few_vertices():
    s = validate_surface({"edges": ["1", "2"], "triangles": [["1", "2", "2"]], "boundary": ["1"]})
    tq = quiver_from_surface(s)
    wq = WeightedQuiver(tq, make_weights(tq, {"t0.0": (2, 1), "t0.1": (2, 1)}))
    with pytest.raises(E.TooFewVertices):
        validate_mutation(wq, ["t0.1"])


def test_chosen_orbit_normalized_to_one():
    wq = corpus.disc(1)
    wq = WeightedQuiver(wq.tq, make_weights(wq.tq, {"alpha": (1, 2), "xi": (1, 5)}))
    spec = validate_mutation(wq, ["xi"])
    assert spec.base.c("xi") == 1 and spec.base.c("alpha") == 2
    assert spec.original.c("xi") == 5


def test_disc_mutation_star_data():
    alg = disc_mut()
    mut = alg.meta["mutation"]
    assert mut.orbits == (("delta", "rho", "tau.1", "gamma", "nu"),)
    assert set(mut.star_arrows) == {"delta", "nu", "rho", "gamma", "tau.1"}
    assert mut.B("tau.1").arrows == ("tau.1", "gamma", "nu", "delta", "rho")
    assert alg.cartan() == [[4, 2, 4, 2], [2, 2, 2, 0], [4, 2, 4, 2], [2, 0, 2, 2]]
    assert alg.dimension == 36


def test_surgery_arrow_count():
    for wq, xi in ((corpus.disc(1), ["xi"]), (corpus.sphere(1, 1), ["xi", "eta"])):
        alg = mutate(validate_mutation(wq, xi))
        assert len(alg.quiver.arrow_ids) == len(wq.quiver.arrow_ids) - len(xi)
        assert alg.quiver.vertices == wq.quiver.vertices


def test_f_star_axioms():
    for name in ("disc_xi", "ex42_mu", "sphere_xi_eta", "torus_def", "ex66_def"):
        mut = regress.algebra(name, 1 if name != "ex66_def" else 2, 1).meta["mutation"]
        fs, q = mut.fs, mut.quiver
        assert sorted(fs.values()) == sorted(fs)
        for eta in mut.star_arrows:
            assert fs[fs[fs[eta]]] == eta
            assert q.target(eta) == q.source(fs[eta])
            assert mut.mn(eta) >= 2


def test_virtual_star_orbit_paths():
    assert sorted(len(o) for o in regress.algebra("ex66_def", 3, 1).meta["mutation"].orbits) \
        == [2, 2, 3, 14]
    # at m = 1 the short orbits through the tau arrows are virtual
    mut = regress.algebra("ex66_def", 1, 1).meta["mutation"]
    virt = [o for o in mut.orbits if mut.is_virtual(o[0])]
    assert virt
    for o in virt:
        assert len(mut.B_word(o[0])) == 2 and len(mut.A_word(o[0])) == 1


def test_torus_deformation_orbit():
    mut = regress.algebra("torus_def").meta["mutation"]
    assert [(len(o), mut.n_nu(o[0])) for o in mut.orbits] == [(12, 2)]
    assert regress.algebra("torus_def").dimension == 12 * (12 + 2) + 2 * 14


def test_counting_report_all_ok():
    for name in ("disc_xi", "ex42_xi", "sphere_xi_zeta", "torus_def"):
        rows = regress.algebra(name).meta["mutation"].counting_report()
        assert rows and all(r["ok"] for r in rows)


def test_not_wta_witness():
    assert not_wta_witness(disc_mut()) == {"vertex": "1", "out": 2, "in": 3}
    w = not_wta_witness(regress.algebra("torus_def"))
    assert w is not None
    assert not_wta_witness(regress.algebra("ex42_mu")) is None
    assert not_wta_witness(regress.algebra("disc")) is None


def test_mutation_identities_hold():
    for name in ("disc_xi", "ex42_xi", "ex42_mu", "sphere_xi"):
        res = mutation_identities(regress.algebra(name))
        assert all(v == [] for v in res.values()), (name, res)


def test_short_orbit_identities_need_c_gamma():
    alg = regress.algebra("ex42_mu_cgamma")
    res = short_orbit_identities(alg)
    assert res and all(v == [] for v in res.values())
    lit = short_orbit_identities(alg, literal=True)
    bad = set().union(*lit.values())
    assert {"rho omega nu delta", "delta rho omega nu"} <= bad


def test_short_orbit_identities_refuse_wrong_branch():
    alg = disc_mut()
    with pytest.raises(E.UnknownArrow):
        short_orbit_identities(alg, only="alpha")
    with pytest.raises(E.AssumptionViolated):
        short_orbit_identities(alg, only="xi")


def test_sphere_chain_has_all_tau_orbit():
    for r in (2, 3):
        mut = Mutation(validate_mutation(corpus.sphere_T_weighted(r), corpus.sphere_T_xi(r)))
        assert mut.all_tau_orbit
        tau_orbit = [o for o in mut.orbits if all(a in mut.taus for a in o)]
        assert [len(o) for o in tau_orbit] == [r]
    from surfalg.gb_oracle import oracle_dimension
    alg = regress.algebra("sphere_T3")
    assert alg.dimension == oracle_dimension(alg.oracle())
