from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from surfalg import corpus, errors as E
from surfalg.algebra import build_wta
from surfalg.gb_oracle import RewriteSystem, complete, oracle_cartan, oracle_dimension
from surfalg.mutation import mutate, validate_mutation
from surfalg.quiver_core import Quiver, elem


def test_single_loop_square_zero():
    q = Quiver(["1"], [("x", "1", "1")])
    rs = complete(q, [elem(q.path("x", "x"))], 6)
    assert [p.arrows for p in rs.standard_monomials()] == [(), ("x",)]
    assert rs.certificate() == (True, True)


def test_infinite_quotient_raises_cap_exceeded():
    q = Quiver(["1"], [("x", "1", "1")])
    with pytest.raises(E.CapExceeded):
        complete(q, [], 5)
    rs = RewriteSystem(q, [], degree_cap=5)
    assert rs.certificate() == (True, False)


def test_stationary_term_rejected():
    q = Quiver(["1"], [("x", "1", "1")])
    with pytest.raises(E.InconsistentRelations):
        RewriteSystem(q, [elem(q.stationary("1"), (-1, q.path("x")))])


def test_disc_oracle_dimension():
    alg = build_wta(corpus.disc(1))
    rs = complete(alg.quiver, [r.element for r in alg.relations], 14)
    assert oracle_dimension(rs) == 40
    assert oracle_cartan(rs) == alg.cartan()


def test_torus_deformation_oracle():
    _, wq, xi = corpus.torus_deformation_xi()
    alg = mutate(validate_mutation(wq, xi))
    rs = complete(alg.quiver, [r.element for r in alg.relations], 28)
    assert oracle_dimension(rs) == 196


def test_relations_reduce_to_zero():
    alg = build_wta(corpus.ex42(1, 2))
    rs = alg.oracle()
    for r in alg.relations:
        assert rs.is_zero(r.element), r.label


def test_alpha_tau_vanishes_after_mutation():
    alg = mutate(validate_mutation(corpus.disc(1), ["xi"]))
    rs = alg.oracle()
    mut = alg.meta["mutation"]
    for L in mut.spec.local:
        assert rs.reduces_to_zero(alg.quiver.path(L.alpha, L.tau))


def test_raising_cap_keeps_standard_monomials():
    alg = build_wta(corpus.disc(2))
    rels = [r.element for r in alg.relations]
    a = complete(alg.quiver, rels, 12)
    b = complete(alg.quiver, rels, 24)
    assert a.standard_monomials() == b.standard_monomials()
    assert a.certificate() == b.certificate() == (True, True)


def test_sphere_mutation_dimension():
    alg = mutate(validate_mutation(corpus.sphere(1, 2), ["xi"]))
    assert len(alg.oracle().standard_monomials()) == 63


_DISC = build_wta(corpus.disc(1, 3))
_RS = _DISC.oracle()
_WORDS = sorted({p for p in _DISC.basis if p.arrows} |
                {r for rel in _DISC.relations for r in rel.element},
                key=lambda p: (len(p), p.arrows))


@st.composite
def elements(draw):
    terms = draw(st.lists(st.tuples(st.integers(-3, 3), st.sampled_from(_WORDS)), max_size=5))
    return elem(*[(Fraction(c), p) for c, p in terms])


def _add(x, y, k=1):
    out = dict(x)
    for p, c in y.items():
        out[p] = out.get(p, 0) + k * c
    return {p: c for p, c in out.items() if c}


@given(elements())
def test_normal_form_idempotent(x):
    nf = _RS.normal_form(x)
    assert _RS.normal_form(nf) == nf


@given(elements(), elements(), st.integers(-4, 4))
def test_normal_form_linear(x, y, k):
    lhs = _RS.normal_form(_add(x, y, k))
    rhs = _add(_RS.normal_form(x), _RS.normal_form(y), k)
    assert lhs == rhs
