"""Field arithmetic: exhaustive axiom checks for every prime power up
to 16, plus extension-field structure."""

import pytest

from cdckit.gf import FieldError, FieldSpec, ExtFieldSpec, ext_field, field_new, is_prime

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def _spec(q):
    p = q
    e = 1
    for cand in (2, 3, 5, 7, 11, 13):
        k = 0
        n = q
        while n % cand == 0:
            n //= cand
            k += 1
        if n == 1:
            p, e = cand, k
            break
    return field_new(p, e)


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_field_axioms_exhaustive(q):
    f = _spec(q)
    els = list(f.elements())
    assert len(els) == q
    for a in els:
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    for a in els:
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in els:
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_pow_matches_repeated_mul(q):
    f = _spec(q)
    for a in f.elements():
        acc = 1
        for n in range(5):
            assert f.pow(a, n) == acc
            acc = f.mul(acc, a)
    # multiplicative group has order q - 1
    for a in f.elements():
        if a:
            assert f.pow(a, q - 1) == 1


def test_is_prime():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23}
    for n in range(2, 25):
        assert is_prime(n) == (n in primes)


def test_field_spec_serialize_roundtrip():
    for q in PRIME_POWERS:
        f = _spec(q)
        g = FieldSpec.parse(f.serialize())
        assert g == f


def test_bad_field_rejected():
    with pytest.raises(FieldError):
        field_new(4, 1)  # p must be prime
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 is reducible over GF(2)


def test_ext_field_structure():
    base = field_new(2, 2)  # GF(4)
    ext = ext_field(base, 3)  # GF(64) over GF(4)
    assert ext.order == 64
    els = list(range(ext.order))
    for a in els[:16]:
        for b in els[:16]:
            assert ext.add(a, b) == ext.add(b, a)
            assert ext.mul(a, b) == ext.mul(b, a)
        if a:
            assert ext.mul(a, ext.inv(a)) == 1
    # frobenius x -> x^|base| is additive and fixes the base field
    for a in els[:32]:
        for b in els[:32]:
            assert ext.frobenius(ext.add(a, b)) == ext.add(ext.frobenius(a),
                                                           ext.frobenius(b))
    # vector coordinates round-trip
    for a in els[:40]:
        assert ext.vector_to_element(ext.element_to_vector(a)) == a
