import random

import pytest
from hypothesis import given, settings, strategies as st

from groupnorms.errors import ConfigError, ResourceExceeded
from groupnorms.groups import (AbelianGroup, CosetTableGroup, FinitePresentation, FreeGroup,
                               FreeProduct, HnGroup, Lamplighter, MetabelianizedGroup,
                               ball_enumerate, britton_reduce, burnside_group,
                               conjugation_certificates, coset_enumerate, cyclic_group,
                               evaluate_word, fox_derivative, free_abelian,
                               free_product_normal_form, has_pinch, metabelian_is_trivial,
                               parse_group, schreier_is_trivial)
from groupnorms.words import commutator, inverse_word, power, reduce_word
from oracles import evaluate, heisenberg3_letter, heisenberg3_mul


def S3():
    return CosetTableGroup(FinitePresentation(("a", "b"), ((0, 0), (2, 2), (0, 2) * 3)))


B23 = burnside_group()
V4 = AbelianGroup([2, 2], ["a", "b"])

ENGINES = {
    "free": lambda: FreeGroup(2),
    "abelian": lambda: free_abelian(2),
    "z3": lambda: cyclic_group(3),
    "coset": S3,
    "burnside": lambda: B23,
    "freeproduct": lambda: FreeProduct([cyclic_group(3, "a"), cyclic_group(0, "x")]),
    "hn": lambda: HnGroup(1),
    "lamplighter": lambda: Lamplighter(1),
    "metabelian": lambda: MetabelianizedGroup(V4),
}


@pytest.mark.parametrize("name", sorted(ENGINES))
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_evaluation_is_a_homomorphism(name, data):
    G = ENGINES[name]()
    words = st.lists(st.integers(0, 2 * G.rank - 1), max_size=12)
    u, v = data.draw(words), data.draw(words)
    gu, gv = evaluate_word(G, u), evaluate_word(G, v)
    assert evaluate_word(G, u + v) == G.mul(gu, gv)
    assert evaluate_word(G, inverse_word(u)) == G.inv(gu)
    assert G.is_identity(G.mul(gu, G.inv(gu)))
    assert evaluate_word(G, reduce_word(u)) == gu
    assert G.encode(G.identity) == b""


@pytest.mark.parametrize("name", sorted(ENGINES))
def test_relators_hold(name):
    G = ENGINES[name]()
    for r in G.relators() or []:
        assert G.is_identity(evaluate_word(G, r))


def test_free_engine_canonical_form():
    F = FreeGroup(["x", "y"])
    assert evaluate_word(F, F.word("x y y^-1")) == (0,)
    prof = ball_enumerate(F, 2)
    assert len(prof) == 17 and all(sum(c) == 1 for c in prof.values())


def test_ball_counts_sum_to_reduced_word_totals():
    for G in (free_abelian(2), B23, HnGroup(1)):
        prof = ball_enumerate(G, 4)
        m2 = 2 * G.rank
        for k in range(1, 5):
            assert sum(c[k] for c in prof.values()) == m2 * (m2 - 1) ** (k - 1)
    assert len(ball_enumerate(free_abelian(2), 1)) == 5
    assert len(ball_enumerate(B23, None)) == 27


def test_coset_enumeration_examples():
    assert coset_enumerate(FinitePresentation(("x",), ((0, 0, 0),))).order == 3
    assert S3().order() == 6
    a5 = FinitePresentation(("a", "b"), ((0, 0), (2, 2, 2), (0, 2) * 5))
    assert coset_enumerate(a5).order == 60
    with pytest.raises(ResourceExceeded):
        coset_enumerate(FinitePresentation(("a", "b"), ((0, 2, 1, 3),)), bound=500)


def test_s3_matches_permutations():
    # a -> (0 1), b -> (1 2): an isomorphism onto S3
    perms = {0: (1, 0, 2), 2: (0, 2, 1)}
    perms[1], perms[3] = perms[0], perms[2]
    G = S3()
    image = {}
    for g in G.elements():
        p = (0, 1, 2)
        for c in G.word_of(g):
            p = tuple(perms[c][i] for i in p)
        image[g] = p
    assert len(set(image.values())) == 6


def test_burnside_27_against_heisenberg():
    assert B23.order() == 27
    assert all(B23.is_identity(B23.mul(B23.mul(g, g), g)) for g in B23.elements())
    ident = (0, 0, 0)
    img = {g: evaluate(B23.word_of(g), heisenberg3_mul, heisenberg3_letter, ident)
           for g in B23.elements()}
    assert len(set(img.values())) == 27
    rng = random.Random(1)
    for _ in range(200):
        g, h = rng.choice(B23.elements()), rng.choice(B23.elements())
        assert img[B23.mul(g, h)] == heisenberg3_mul(img[g], img[h])


def test_free_product_examples():
    P = FreeProduct([cyclic_group(3, "a"), cyclic_group(0, "x")])
    a = ((0, (1,)),)
    assert free_product_normal_form(P, P.word("a x a^-1 a x^-1")) == a
    assert free_product_normal_form(P, P.word("x a a^2 x^-1")) == ()
    nf = free_product_normal_form(P, P.word("a x a"))
    assert [k for k, _ in nf] == [0, 1, 0]
    assert evaluate_word(P, P.word_of(nf)) == nf


def test_hn_examples():
    H = HnGroup(1)
    assert H.generators == ("t", "a_-1", "a_0", "a_1")
    assert H.element("t^-1 a_-1 t") == H.element("a_0")
    form = britton_reduce(H, H.word("t^-1 a_1 t"))
    assert form.exponents == (-1, 1) and not form.is_identity()
    certs = conjugation_certificates(H)
    assert len(certs) == 7
    assert all(f.t_length > 0 and not has_pinch(H, f) for _, f in certs)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 7), max_size=20))
def test_britton_agrees_with_engine(w):
    H = HnGroup(1)
    form = britton_reduce(H, w)
    assert form.is_identity() == H.is_identity(evaluate_word(H, w))
    assert form.t_exponent_sum == sum(1 if c == 0 else -1 if c == 1 else 0 for c in w)
    assert not has_pinch(H, form)
    assert evaluate_word(H, form.to_word(H)) == evaluate_word(H, w)


def test_lamplighter_convention():
    L = Lamplighter(1)
    assert L.element("a_0 t a_0 t^-1") == ((-1, 0), 0)
    assert L.element("t^-1 a_0 t") == L.element("a_1")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hn_relators_hold_in_lamplighter(n):
    L = Lamplighter(n)
    for r in HnGroup(n).relators():
        assert L.is_identity(evaluate_word(L, r))


def test_fox_derivatives():
    a4 = power((0,), 4)
    assert fox_derivative((0,), 0, V4) == {V4.identity: 1}
    assert fox_derivative((1,), 0, V4) == {V4.generator(0): -1}
    assert fox_derivative(a4, 0, V4) == {(0, 0): 2, (1, 0): 2}


def test_metabelian_examples():
    M = MetabelianizedGroup(V4)
    assert metabelian_is_trivial(M, commutator(power((0,), 2), power((2,), 2)))
    assert not metabelian_is_trivial(M, power((0,), 4))
    assert not metabelian_is_trivial(M, (0,))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=16))
def test_fox_and_schreier_agree(w):
    M = MetabelianizedGroup(V4)
    w = reduce_word(w)
    fox = metabelian_is_trivial(M, w)
    assert fox == schreier_is_trivial(V4, w)
    if fox:
        assert V4.is_identity(evaluate_word(V4, w))


def test_metabelian_congruence():
    M = MetabelianizedGroup(V4)
    rng = random.Random(7)
    trivial = [commutator(power((0,), 2), power((2,), 2)), commutator(power((2,), 2), (0, 0, 2, 2))]
    for _ in range(100):
        u = tuple(rng.randrange(4) for _ in range(rng.randint(0, 6)))
        for t in trivial:
            assert metabelian_is_trivial(M, reduce_word(u + t + inverse_word(u)))
        assert metabelian_is_trivial(M, reduce_word(trivial[0] + trivial[1]))


# --- group files --------------------------------------------------------------

def test_group_file_engines(tmp_path):
    assert parse_group("engine = free\ngenerators = a b\n").rank == 2
    G = parse_group("# B(2,3)\nengine = coset-table\ngenerators = a b\n"
                    "relators = a^3, b^3, (a b)^3, (a b^-1)^3\n")
    assert G.order() == 27
    assert parse_group("engine = abelian\ngenerators = x\norders = 3\n").order() == 3
    assert parse_group("engine = hn\nhn_rank = 2\n").rank == 6
    (tmp_path / "v4.grp").write_text("engine = abelian\ngenerators = a b\norders = 2 2\n")
    (tmp_path / "m.grp").write_text("engine = metabelianized\nbase = v4.grp\n")
    from groupnorms.groups import load_group
    M = load_group(tmp_path / "m.grp")
    assert isinstance(M, MetabelianizedGroup)


@pytest.mark.parametrize("text,line,col", [
    ("engine = free\ngenerators = a b\ncolour = red\n", 3, 1),
    ("engine = banana\ngenerators = a\n", 1, 10),
    ("engine = coset-table\ngenerators = a b\nrelators = a^3, c\n", 3, 17),
    ("engine = free\nengine = free\n", 2, 1),
    ("engine free\n", 1, 1),
])
def test_group_file_errors(text, line, col):
    with pytest.raises(ConfigError) as exc:
        parse_group(text, source="x.grp")
    assert (exc.value.line, exc.value.column) == (line, col)
    assert str(exc.value).startswith(f"x.grp:{line}:{col}:")
