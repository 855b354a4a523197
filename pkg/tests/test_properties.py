import random

from hypothesis import given, settings, strategies as st

from surfalg import errors as E, fuzz
from surfalg.algebra import build_wta
from surfalg.mutation import mutate, validate_mutation
from surfalg.regress import _quiver_invariants
from surfalg.surface import blow_up, quiver_from_surface

seeds = st.integers(0, 2 ** 32 - 1)


def instance(seed):
    return fuzz.random_instance(random.Random(seed))


@given(seeds)
def test_quiver_invariants(seed):
    wq, _ = instance(seed)
    assert _quiver_invariants(wq.tq) is None
    assert len(wq.quiver.vertices) <= 12
    tq = wq.tq
    for a in tq.arrows:
        x = tq.bar[a]
        for _ in range(tq.n(tq.bar[a]) - 1):
            x = tq.g[x]
        assert tq.f[tq.f[a]] == x


@given(seeds)
def test_admissible_weights(seed):
    wq, _ = instance(seed)
    assert wq.assumption_report() == []
    assert all(wq.mn(a) >= 2 for a in wq.tq.arrows)


@settings(max_examples=40)
@given(seeds)
def test_cartan_symmetric_and_closed_form(seed):
    wq, _ = instance(seed)
    try:
        alg = build_wta(wq, allow_possibly_singular=True)
    except E.SingularSpherical:
        return
    C = alg.cartan()
    n = len(C)
    assert all(C[i][j] == C[j][i] for i in range(n) for j in range(n))
    assert alg.dimension == wq.closed_form_dimension()


@settings(max_examples=40)
@given(seeds, st.data())
def test_single_mutation_closed_form(seed, data):
    wq, cands = instance(seed)
    legal = []
    for x in cands:
        try:
            legal.append(validate_mutation(wq, [x]))
        except E.ValidationError:
            pass
    if not legal:
        return
    spec = data.draw(st.sampled_from(legal))
    alg = mutate(spec)
    assert alg.dimension == alg.meta["mutation"].closed_form_dimension()
    assert len(alg.quiver.arrow_ids) == len(wq.quiver.arrow_ids) - 1


@given(seeds, st.integers(2, 6))
def test_blow_up_counts(seed, k):
    rng = random.Random(seed)
    s = fuzz.random_surface(rng, k)
    e = rng.choice(list(s.edges))
    old = quiver_from_surface(s)
    new = quiver_from_surface(blow_up(s, [e]).surface)
    assert len(new.quiver.vertices) == len(old.quiver.vertices) + 3
    assert len(new.arrows) == len(old.arrows) + 6
    assert len(new.g_orbits) == len(old.g_orbits) + 1


@given(seeds, st.integers(3, 7))
def test_blow_ups_compose(seed, k):
    rng = random.Random(seed)
    s = fuzz.random_surface(rng, k)
    if len(s.edges) < 2:
        return
    I = rng.sample(list(s.edges), 2)
    once = blow_up(s, I).surface
    twice = blow_up(blow_up(s, I[:1]).surface, I[1:]).surface
    assert once.canonical() == twice.canonical()
