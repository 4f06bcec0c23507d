import random

import pytest

from veryfree.errors import FieldError, ScanBudgetExceeded
from veryfree.fields import (QQ, UPoly, cube_root, embed,
                             find_roots, join_field, make_field,
                             parse_field_spec, format_field_spec)

from helpers import F2, F3, F4, F5, F7


def test_make_field_prime_and_rational():
    assert make_field(7, 1).size == 7
    assert make_field(0, 1) is QQ
    assert QQ.is_rational


def test_make_field_rejects_bad_input():
    with pytest.raises(FieldError):
        make_field(6, 1)
    with pytest.raises(FieldError):
        make_field(7, 0)
    with pytest.raises(FieldError):
        make_field(0, 2)


def test_f16_modulus_is_first_irreducible_quartic():
    # oracle: enumerate monic quartics over F_2 in coefficient-vector lex
    # order and test irreducibility by exhaustive factor search
    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] ^= x & y
        return out

    def all_monic(deg):
        out = []
        for idx in range(2**deg):
            coeffs = [(idx >> i) & 1 for i in range(deg)] + [1]
            out.append(coeffs)
        return out

    nontrivial = [p for d in (1, 2, 3) for p in all_monic(d)]

    def reducible(m):
        for a in nontrivial:
            for b in nontrivial:
                if len(a) - 1 + len(b) - 1 != 4:
                    continue
                if poly_mul(a, b) == m:
                    return True
        return False

    expected = None
    import itertools
    for vec in itertools.product((0, 1), repeat=4):
        m = list(vec) + [1]
        if not reducible(m):
            expected = tuple(m)
            break
    assert make_field(2, 4).modulus == expected


def test_field_axioms_exhaustive_f4():
    for a in F4.elements():
        for b in F4.elements():
            for c in F4.elements():
                x, y, z = F4.from_raw(a), F4.from_raw(b), F4.from_raw(c)
                assert x + y == y + x
                assert x * (y + z) == x * y + x * z
                if a != 0:
                    assert x * x.inverse() == F4.one


def test_field_axioms_random():
    rng = random.Random(7)
    for field in (F7, make_field(5, 2), make_field(3, 3), QQ):
        for _ in range(25):
            if field.is_rational:
                from fractions import Fraction
                mk = lambda: field.scalar(Fraction(rng.randrange(-30, 30),
                                                   rng.randrange(1, 12)))
            else:
                mk = lambda: field.from_raw(rng.randrange(field.size))
            a, b, c = mk(), mk(), mk()
            assert a + b == b + a
            assert a * (b + c) == a * b + a * c
            if a:
                assert a * a.inverse() == field.one


def test_frobenius_stability():
    for field in (F4, make_field(2, 4), make_field(3, 2), F7):
        for raw in field.elements():
            x = field.from_raw(raw)
            assert x ** field.size == x


def test_scalar_canonical_strings_roundtrip():
    F16 = make_field(2, 4)
    from veryfree.poly import scalar_from_string
    for raw in F16.elements():
        x = F16.from_raw(raw)
        assert scalar_from_string(str(x), F16) == x
    assert str(QQ.scalar(3) / QQ.scalar(4)) == "3/4"


def test_embed_examples():
    F16 = make_field(2, 4)
    assert embed(F4.one, F16) == F16.one
    img = embed(F4.gen, F16)
    assert img * img + img + F16.one == F16.zero  # root of x^2 + x + 1


def test_embed_is_homomorphism():
    F16 = make_field(2, 4)
    rng = random.Random(3)
    for _ in range(10):
        a = F4.from_raw(rng.randrange(4))
        b = F4.from_raw(rng.randrange(4))
        assert embed(a * b, F16) == embed(a, F16) * embed(b, F16)
        assert embed(a + b, F16) == embed(a, F16) + embed(b, F16)


def test_embed_tower_compatibility():
    F16, F256 = make_field(2, 4), make_field(2, 8)
    for raw in F4.elements():
        x = F4.from_raw(raw)
        assert embed(embed(x, F16), F256) == embed(x, F256)


def test_embed_rejects_bad_targets():
    with pytest.raises(FieldError):
        embed(F4.gen, make_field(2, 3))
    with pytest.raises(FieldError):
        embed(F4.gen, make_field(3, 2))


def test_mixed_field_arithmetic_rejected():
    with pytest.raises(FieldError):
        F7.one + F5.one


def test_join_field():
    assert join_field(F4, make_field(2, 3)).k == 6
    assert join_field(F7, F7) is F7


def test_field_spec_strings():
    assert parse_field_spec("7") is F7
    assert parse_field_spec("2^4") is make_field(2, 4)
    assert parse_field_spec("Q") is QQ
    assert format_field_spec(make_field(2, 4)) == "2^4"


def test_find_roots_examples():
    f = UPoly.from_scalars(F7, [-1, 0, 1])          # x^2 - 1
    roots = find_roots(f, 1)
    assert {str(r.value) for r in roots} == {"1", "6"}

    g = UPoly.from_scalars(F3, [1, 0, 1])           # x^2 + 1
    roots = find_roots(g, 2)
    assert all(r.ext_degree == 2 for r in roots) and len(roots) == 2
    # oracle: scan all 9 elements of F_9 directly
    F9 = make_field(3, 2)
    direct = [x for x in F9.elements()
              if F9.radd(F9.rmul(x, x), 1) == 0]
    assert {r.value.raw for r in roots} == set(direct)


def test_find_roots_cube_root_minimal_field():
    # roots of x^3 - 2 exist over F_{7^k} iff 2 is a cube there;
    # oracle: cube every element of F_7 and F_49
    for k in (1, 2):
        K = make_field(7, k)
        cubes = {K.rpow(x, 3) for x in K.elements()}
        assert K.rfrom_int(2) not in cubes
    f = UPoly.from_scalars(F7, [-2, 0, 0, 1])
    roots = find_roots(f, 3)
    assert len(roots) == 3 and all(r.ext_degree == 3 for r in roots)


def test_find_roots_multiplicity_and_completeness():
    rng = random.Random(11)
    for _ in range(10):
        K = F5
        rs = [K.from_raw(rng.randrange(5)) for _ in range(3)]
        poly = UPoly.from_scalars(K, [1])
        for r in rs:
            poly = poly * UPoly.from_scalars(K, [-r, K.one])
        roots = find_roots(poly, 1)
        assert sum(r.multiplicity for r in roots) == 3
        assert {r.value for r in roots} == set(rs)


def test_find_roots_budget():
    f = UPoly.from_scalars(F7, [-2, 0, 0, 1])
    with pytest.raises(ScanBudgetExceeded):
        find_roots(f, 6, budget=100)


def test_cube_root_everywhere():
    for field in (F7, make_field(7, 2), F2, F4, make_field(5, 1)):
        for raw in list(field.elements())[:12]:
            a = field.from_raw(raw)
            r = cube_root(a)
            target = a if r.field is field else embed(a, r.field)
            assert r ** 3 == target
