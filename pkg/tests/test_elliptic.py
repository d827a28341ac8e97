import random

import pytest

from schurgate.elliptic import EllipticCurveQ, a_v, point_count
from schurgate.groups import is_prime

E_MINUS_X = EllipticCurveQ.from_list([0, 0, 0, -1, 0])  # y^2 = x^3 - x


def brute_count(E, v):
    """Independent recount by direct solution enumeration."""
    n = 1  # infinity
    for x in range(v):
        for y in range(v):
            lhs = (y * y + E.a1 * x * y + E.a3 * y) % v
            rhs = (x ** 3 + E.a2 * x * x + E.a4 * x + E.a6) % v
            if lhs == rhs:
                n += 1
    return n


def test_a5_is_minus_two():
    assert point_count(E_MINUS_X, 5) == 8
    assert a_v(E_MINUS_X, 5) == -2


def test_a3_is_zero():
    assert a_v(E_MINUS_X, 3) == 0


def test_small_primes_match_brute_force():
    for v in (3, 5, 7, 11, 13, 17, 19):
        assert point_count(E_MINUS_X, v) == brute_count(E_MINUS_X, v)


def test_general_weierstrass_matches_brute_force():
    E = EllipticCurveQ.from_list([1, -1, 1, -10, -20])
    for v in (3, 7, 13, 23):
        if E.discriminant % v:
            assert point_count(E, v) == brute_count(E, v)


def test_hasse_bound_on_random_curves():
    rng = random.Random(99)
    primes = [v for v in range(3, 400) if is_prime(v)]
    done = 0
    while done < 100:
        E_coeffs = [rng.randint(-5, 5) for _ in range(5)]
        try:
            E = EllipticCurveQ.from_list(E_coeffs)
        except ValueError:
            continue
        v = rng.choice(primes)
        if v == 2 or E.discriminant % v == 0:
            continue
        t = a_v(E, v)
        assert t * t <= 4 * v
        done += 1


def test_bad_prime_rejected():
    with pytest.raises(ValueError, match="bad prime"):
        a_v(E_MINUS_X, 2)
    E = EllipticCurveQ.from_list([0, 0, 0, 0, 1])  # disc = -432
    with pytest.raises(ValueError, match="bad prime"):
        a_v(E, 3)


def test_large_prime_capped():
    with pytest.raises(ValueError, match="cap"):
        a_v(E_MINUS_X, 10 ** 6 + 3)


def test_nonprime_rejected():
    with pytest.raises(ValueError, match="not prime"):
        a_v(E_MINUS_X, 15)


def test_singular_curve_rejected():
    with pytest.raises(ValueError, match="singular"):
        EllipticCurveQ.from_list([0, 0, 0, 0, 0])
