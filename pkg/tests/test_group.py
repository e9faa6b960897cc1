import random
from fractions import Fraction as F

import pytest

from conftest import OMEGA, random_affine_map
from hypertorus import _kernels
from hypertorus.errors import GridTooLarge, GroupNotClosed, UnknownSymbol
from hypertorus.exactmath import Mat
from hypertorus.group import (
    check_presentation,
    evaluate_word,
    find_fixed_point_on_grid,
    fixed_point_bruteforce,
    fixed_point_exists,
    format_word,
    functional_certifies,
    generate,
    is_translation,
    parse_word,
    verify_free_action,
)
from hypertorus.torus import AffineTorusMap, TorusSpec, compose, identity, translation_map

BACKENDS = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])


def test_group_orders(d4):
    assert d4.G.order == 8
    assert d4.G1.order == 16
    assert generate([identity(d4.A)]).order == 1


def test_identity_is_element_zero(d4):
    assert d4.G.elements[0].is_identity()
    assert d4.G.words[0] == ()
    for i in range(8):
        assert d4.G.mul(0, i) == i == d4.G.mul(i, 0)
        assert d4.G.mul(i, d4.G.inv(i)) == 0


def test_cayley_table_is_latin_square(d4):
    T = d4.G.cayley
    for i in range(8):
        assert sorted(T[i]) == list(range(8))
        assert sorted(T[:, i]) == list(range(8))
    assert not T.flags.writeable


def test_presentation(d4):
    assert check_presentation(d4.G, ["r^4", "s^2", "(r*s)^2"]) == [True] * 3
    assert check_presentation(d4.G, ["r^2", "s"]) == [False, False]
    upstairs = check_presentation(d4.G1, ["r^4", "s^2", "(r*s)^2"])
    assert upstairs == [True, False, True]


def test_unextended_closure_contains_omega_translation(d4):
    omega = translation_map(d4.A1, OMEGA)
    assert is_translation(omega)
    assert d4.G1.index_of(omega) == evaluate_word(d4.G1, "s^2")
    assert not any(is_translation(f) for f in d4.G.elements)


def test_words_evaluate_back(d4):
    for i, w in enumerate(d4.G.words):
        assert evaluate_word(d4.G, tuple((x, 1) for x in w)) == i


def test_element_orders(d4):
    orders = sorted(d4.G.element_order(i) for i in range(8))
    assert orders == [1, 2, 2, 2, 2, 2, 4, 4]


def test_parse_word():
    assert parse_word("r") == (("r", 1),)
    assert parse_word("(r*s)^2") == (("r", 1), ("s", 1), ("r", 1), ("s", 1))
    assert parse_word("(r*s)^-1") == (("s", -1), ("r", -1))
    assert parse_word(" r ^ 2 * s ") == (("r", 1), ("r", 1), ("s", 1))
    assert parse_word("r^0") == ()
    for bad in ("", "r*", "r^", "(r*s", "r s", "r$"):
        with pytest.raises(ValueError):
            parse_word(bad)


def test_format_word():
    assert format_word(()) == "1"
    assert format_word(("r", "r", "s")) == "r^2*s"
    assert format_word(("s", "r")) == "s*r"


def test_unknown_symbol(d4):
    with pytest.raises(UnknownSymbol):
        evaluate_word(d4.G, "t^2")
    with pytest.raises(UnknownSymbol):
        d4.G.generator("t")


def test_group_not_closed():
    shift = translation_map(TorusSpec.product(["tau"]), (F(1, 50), 0))
    with pytest.raises(GroupNotClosed):
        generate([shift], max_order=20)


def test_conjugacy_classes(d4):
    G = d4.G
    assert len(G.classes) == 5
    sizes = sorted(len(c) for c in G.classes)
    assert sizes == [1, 1, 2, 2, 2]
    central = [c for c in G.classes if len(c) == 1]
    assert {c[0] for c in central} == {0, evaluate_word(G, "r^2")}
    reflections = [c for c in G.classes if len(c) == 2 and G.element_order(c[0]) == 2]
    assert len(reflections) == 2
    s, r2s = evaluate_word(G, "s"), evaluate_word(G, "r^2*s")
    rs, sr = evaluate_word(G, "r*s"), evaluate_word(G, "s*r")
    assert tuple(sorted((s, r2s))) in G.classes
    assert tuple(sorted((rs, sr))) in G.classes


# --------------------------------------------------------------------------
# freeness


def test_s_certificate(d4):
    s = d4.G.generator("s")
    cert = fixed_point_exists(d4.s, element=s)
    assert cert.free and cert.verify(d4.s)
    assert cert.value_on_translation(d4.s) == F(1, 2)
    # sum of the first two real coordinates of each block-1 and block-2 pair
    phi = (1, 0, 1, 0, 0, 0)
    assert functional_certifies(d4.s, phi)
    for b in d4.LA.basis.columns():
        assert sum(a * x for a, x in zip(phi, b)).denominator == 1
    assert sum(a * x for a, x in zip(phi, d4.s.translation)) % 1 == F(1, 2)


def test_rs_certificate(d4):
    rs = compose(d4.r, d4.s)
    cert = fixed_point_exists(rs)
    assert cert.free and cert.verify(rs)
    assert functional_certifies(rs, cert.functional_ambient)


def test_linear_part_alone_has_fixed_point(d4):
    f = AffineTorusMap(d4.A, d4.S, (0,) * 6)
    cert = fixed_point_exists(f)
    assert not cert.free
    assert cert.witness == (0,) * 6
    assert cert.verify(f)


def test_certificate_rejects_tampering(d4):
    cert = fixed_point_exists(d4.s)
    shifted = AffineTorusMap(d4.A, d4.S, (0,) * 6)
    assert not cert.verify(shifted)
    assert not functional_certifies(d4.s, (1, 1, 0, 0, 0, 0))


def test_fixed_point_of_translation_free():
    spec = TorusSpec.product(["tau"])
    cert = fixed_point_exists(translation_map(spec, (F(1, 3), 0)))
    assert cert.free
    assert not fixed_point_exists(identity(spec)).free


def test_reflection_with_fixed_points():
    # z -> -z + 1/2 fixes 1/4
    spec = TorusSpec.product(["tau"])
    f = AffineTorusMap(spec, Mat([[-1, 0], [0, -1]]), (F(1, 2), 0))
    cert = fixed_point_exists(f)
    assert not cert.free
    z = cert.witness
    assert spec.lattice.contains(tuple(a - b for a, b in zip(f(z), z)))


@pytest.mark.parametrize("backend", BACKENDS)
def test_d4_bruteforce_agrees(d4, backend):
    for f in d4.G.elements[1:]:
        assert fixed_point_bruteforce(f, K=8, backend=backend) is False
        assert fixed_point_exists(f).free
    assert fixed_point_bruteforce(d4.G.elements[0], K=8, backend=backend)


def test_grid_too_large(d4):
    with pytest.raises(GridTooLarge):
        find_fixed_point_on_grid(d4.s, K=100)


def _random_maps(count, seed):
    rng = random.Random(seed)
    return [random_affine_map(rng, max_den=3) for _ in range(count)]


@pytest.mark.parametrize("backend", BACKENDS)
def test_oracle_equivalence_random(backend):
    maps = _random_maps(240, seed=2024)
    verdicts = []
    for f in maps:
        cert = fixed_point_exists(f)
        hit = find_fixed_point_on_grid(f, backend=backend)
        assert (hit is None) == cert.free
        if hit is not None:
            assert f.spec.lattice.contains(tuple(a - b for a, b in zip(f(hit), hit)))
        else:
            assert functional_certifies(f, cert.functional_ambient)
        verdicts.append(cert.free)
    assert any(verdicts) and not all(verdicts)


def test_backends_agree_on_index():
    for f in _random_maps(60, seed=9):
        assert find_fixed_point_on_grid(f, backend="numpy") == find_fixed_point_on_grid(f, backend=BACKENDS[-1])


def test_verify_free_action(d4):
    rep = verify_free_action(d4.G)
    assert rep.all_free and rep.hyperelliptic_valid
    assert rep.translations == ()
    assert len(rep.checked) == 4  # one per non-identity class
    full = verify_free_action(d4.G, use_classes=False)
    assert len(full.checked) == 7
    assert [e.free for e in rep.elements] == [e.free for e in full.elements]
    for v in full.elements[1:]:
        assert v.certificate.verify(d4.G.elements[v.index])


def test_unextended_action_is_not_valid(d4):
    rep = verify_free_action(d4.G1)
    assert rep.translations == (d4.G1.index_of(translation_map(d4.A1, OMEGA)),)
    assert not rep.hyperelliptic_valid


def test_freeness_constant_on_classes():
    rng = random.Random(31)
    checked = 0
    while checked < 8:
        g = rng.choice((1, 2))
        f, h = random_affine_map(rng, g=g), random_affine_map(rng, g=g)
        if f.spec != h.spec:
            continue
        try:
            G = generate([f, h], max_order=32)
        except GroupNotClosed:
            continue
        exhaustive = verify_free_action(G, use_classes=False)
        for cls in G.classes:
            assert len({exhaustive.elements[i].free for i in cls}) == 1
        assert [e.free for e in verify_free_action(G).elements] == [e.free for e in exhaustive.elements]
        checked += 1
