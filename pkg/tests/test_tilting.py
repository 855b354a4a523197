import pytest

from surfalg import errors as E, regress
from surfalg.tilting import (FiniteAlgebra, HomCalculator, TwoTerm, _summands_T_xi, cone,
                             end_data, approximation_ok, stalk, tilting_check)


def calc_for(alg):
    return HomCalculator(FiniteAlgebra(alg.oracle()))


def test_summand_shapes():
    mut = regress.algebra("disc_xi").meta["mutation"]
    S = _summands_T_xi(mut)
    assert sum(T.is_stalk for T in S.values()) == 3
    mut = regress.algebra("torus_def").meta["mutation"]
    S = _summands_T_xi(mut)
    assert sum(T.is_stalk for T in S.values()) == 7
    assert sum(not T.is_stalk for T in S.values()) == 2


def test_stalk_homs_are_cartan_entries():
    alg = regress.algebra("ex42")
    calc = calc_for(alg)
    C = alg.cartan()
    vs = list(alg.vertices)
    for i, x in enumerate(vs):
        for j, y in enumerate(vs):
            assert calc.hom(stalk(y), stalk(x)) == C[i][j]
            assert calc.hom(stalk(y), stalk(x), -1) == 0
            assert calc.hom(stalk(y), stalk(x), 1) == 0


def test_all_stalks_end_is_the_algebra():
    alg = regress.algebra("disc")
    calc = calc_for(alg)
    vs = list(alg.vertices)
    t1, C, ext = end_data(calc, {v: stalk(v) for v in vs}, vs)
    assert t1 and not ext and C == alg.cartan()


def test_cone_has_no_negative_self_extension():
    alg = regress.algebra("disc")
    calc = calc_for(alg)
    mut = regress.algebra("disc_xi").meta["mutation"]
    (L,) = mut.local
    T = cone(L.c, L.a, alg.quiver.path(L.alpha))
    assert calc.hom(T, T, -1) == 0
    assert calc.hom(T, T, 0) >= 1


def test_unsupported_shift_and_spec_mismatch():
    alg = regress.algebra("disc")
    calc = calc_for(alg)
    with pytest.raises(E.UnsupportedShift):
        calc.hom(stalk("1"), stalk("1"), 2)
    with pytest.raises(E.SpecMismatch):
        tilting_check(alg, regress.algebra("disc_xi"), which="T_bogus")
    with pytest.raises(E.SpecMismatch):
        tilting_check(regress.algebra("ex42"), regress.algebra("disc_xi"))


def test_zero_differential_breaks_approximation():
    alg = regress.algebra("disc")
    calc = calc_for(alg)
    mut = regress.algebra("disc_xi").meta["mutation"]
    S = _summands_T_xi(mut)
    vs = list(alg.vertices)
    assert approximation_ok(calc, S, vs)
    (L,) = mut.local
    S[L.c] = TwoTerm((L.c,), (L.a,), {}, label="zero")
    assert not approximation_ok(calc, S, vs)


def test_extra_projective_is_not_tilting():
    alg = regress.algebra("disc")
    calc = calc_for(alg)
    mut = regress.algebra("disc_xi").meta["mutation"]
    (L,) = mut.local
    T = cone(L.c, L.a, alg.quiver.path(L.alpha))
    # P_c maps to T[-1] through the identity on the degree one term
    assert calc.hom(stalk(L.c), T, -1) > 0


def test_disc_tilting_reports():
    base, mut = regress.algebra("disc"), regress.algebra("disc_xi")
    for which in ("T_xi", "That_xi"):
        rep = tilting_check(base, mut, which)
        assert rep.t1_holds and rep.cartan_match and rep.approximation_ok
        assert rep.dim_end == rep.dim_target


def test_ex66_deformation_approximation():
    base, mut = regress.algebra("ex66_blowup", 2), regress.algebra("ex66_def", 2)
    calc = calc_for(base)
    m = mut.meta["mutation"]
    assert approximation_ok(calc, _summands_T_xi(m), list(base.vertices))


def test_T_xi_mu_matches_only_under_swap():
    rep = tilting_check(regress.algebra("ex42"), regress.algebra("ex42_xi"), "T_xi_mu")
    assert rep.t1_holds and rep.cartan_match
    assert rep.correspondence
    assert not rep.details["cartan_match_identity"]
