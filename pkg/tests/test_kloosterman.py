"""Kloosterman sums: exact evaluation, symmetries, characters, Weil-ratio
scan, delta term."""

import cmath
import math
import random
from fractions import Fraction

import pytest

from heckedist import (
    DirichletCharacter,
    Ideal,
    KloostermanError,
    KloostermanQuery,
    delta_term,
    evaluate,
    inverse_different,
    make_field,
    rational_kloosterman,
    symmetry_check,
    twisted_multiplicativity_gap,
    weil_scan,
)

Q = make_field("Q")
F5 = make_field(5)


def q_query(m, n, c, chi=None):
    chi = chi or DirichletCharacter.trivial(Q, Ideal.principal(Q.element(c)))
    return KloostermanQuery(Q.element(c), Q.element(m), Q.element(n), chi)


def brute_rational(m, n, c):
    # independent float-only oracle, no shared code with evaluate()
    total = 0.0 + 0.0j
    for a in range(1, abs(c)):
        if math.gcd(a, abs(c)) != 1:
            continue
        abar = pow(a, -1, abs(c))
        total += cmath.exp(2j * cmath.pi * (m * a + n * abar) / abs(c))
    return total


def test_classical_values():
    assert abs(rational_kloosterman(1, 1, 2) - 1.0) < 1e-12
    assert abs(rational_kloosterman(1, 1, 3) - (-1.0)) < 1e-12
    golden = (3 - math.sqrt(5)) / 2
    assert abs(rational_kloosterman(1, 1, 5) - golden) < 1e-12


def test_against_float_oracle():
    rng = random.Random(7)
    for _ in range(25):
        c = rng.randrange(2, 40)
        m = rng.randrange(-10, 11)
        n = rng.randrange(-10, 11)
        got = rational_kloosterman(m, n, c)
        want = brute_rational(m, n, c)
        assert abs(got - want) < 1e-9, (m, n, c)


def test_ramanujan_sum_special_case():
    # S(m, 0; c) is a Ramanujan sum; S(1, 0; p) = -1 for prime p
    for p in (3, 5, 7, 11):
        assert abs(rational_kloosterman(1, 0, p) - (-1.0)) < 1e-12


def test_multiplicative_structure():
    for (c1, c2) in ((3, 4), (5, 7), (4, 9), (3, 25)):
        assert twisted_multiplicativity_gap(1, 1, c1, c2) < 1e-10


def test_evaluate_matches_rational_helper():
    got = evaluate(q_query(2, 3, 7))
    want = brute_rational(2, 3, 7)
    assert abs(got - want) < 1e-10


def test_symmetry_rational():
    rng = random.Random(11)
    for _ in range(30):
        c = rng.randrange(2, 50)
        m = rng.randrange(-8, 9)
        n = rng.randrange(-8, 9)
        assert symmetry_check(q_query(m, n, c)) < 1e-12


def test_symmetry_quadratic():
    rng = random.Random(13)
    od = inverse_different(F5)
    basis = od.basis_elements()
    chi = DirichletCharacter.trivial(F5, Ideal.unit_ideal(F5))
    for _ in range(15):
        c = F5.element(rng.randrange(1, 5), rng.randrange(0, 3))
        if c.is_zero() or c.norm() == 0:
            continue
        r = basis[0] * rng.randrange(-3, 4) + basis[1] * rng.randrange(-3, 4)
        rp = basis[0] * rng.randrange(-3, 4) + basis[1] * rng.randrange(-3, 4)
        q = KloostermanQuery(c, r, rp, chi)
        assert symmetry_check(q) < 1e-12


def test_shift_invariance():
    # r -> r + c * (inverse-different shift) leaves every phase unchanged
    od = inverse_different(Q)
    base = q_query(1, 1, 5)
    shifted = KloostermanQuery(
        base.c, base.r + base.c * od.basis_elements()[0] * Q.element(3),
        base.rp, base.chi)
    assert abs(evaluate(base) - evaluate(shifted)) < 1e-12


def test_query_validation():
    chi = DirichletCharacter.trivial(Q, Ideal.principal(Q.element(6)))
    with pytest.raises(KloostermanError):
        KloostermanQuery(Q.element(0), Q.element(1), Q.element(1), chi)
    with pytest.raises(KloostermanError):
        # c = 5 is not inside the modulus ideal (6)
        KloostermanQuery(Q.element(5), Q.element(1), Q.element(1), chi)
    with pytest.raises(KloostermanError):
        # r must lie in the inverse different (here: integers)
        q_query(Fraction(1, 2), 1, 5)


def test_character_validation():
    mod5 = Ideal.principal(Q.element(5))
    chi = DirichletCharacter.cyclic(Q, mod5, Q.element(2))
    # 2 has order 4 mod 5: chi(2) = i
    assert chi.value(Q.element(2)) == pytest.approx(1j)
    assert chi.value(Q.element(4)) == pytest.approx(-1.0)
    assert chi.minus_one() == pytest.approx(-1.0)
    with pytest.raises(KloostermanError):
        # inconsistent phase table: chi(1) != 1
        DirichletCharacter(Q, mod5, {(1,): Fraction(1, 2),
                                     (2,): Fraction(0), (3,): Fraction(0),
                                     (4,): Fraction(0)})


def test_twisted_sum_pinned():
    # chi of order 4 mod 5: S_chi(1,1;5) is purely imaginary
    mod5 = Ideal.principal(Q.element(5))
    chi = DirichletCharacter.cyclic(Q, mod5, Q.element(2))
    q = KloostermanQuery(Q.element(5), Q.element(1), Q.element(1), chi)
    val = evaluate(q)
    # pairs (a,d) = (1,1),(3,2),(2,3),(4,4): e(2/5) - e(3/5) + i - i = 2 i sin(pi/5)
    assert abs(val.real) < 1e-12
    assert val.imag == pytest.approx(2 * math.sin(math.pi / 5), abs=1e-12)
    # conjugation symmetry survives the twist
    assert symmetry_check(q) < 1e-12


def test_weil_scan_rational():
    res = weil_scan(Q, Q.element(1), Q.element(1), max_norm=60)
    assert len(res.rows) == 60
    norms = [row.norm for row in res.rows]
    assert norms == sorted(norms)
    # prime rows satisfy the Weil bound |S(1,1;p)| <= 2 sqrt p
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59}
    for row in res.rows:
        if row.norm in primes:
            assert row.abs_k <= 2 * math.sqrt(row.norm) * (1 + 1e-9)
    assert res.running_max == max(
        row.ratio for row in res.rows if row.norm > 1)


def test_weil_scan_threaded_deterministic():
    one = Q.element(1)
    serial = weil_scan(Q, one, one, max_norm=40, threads=1)
    threaded = weil_scan(Q, one, one, max_norm=40, threads=4)
    assert [(r.c, r.norm, r.abs_k, r.ratio) for r in serial.rows] == \
           [(r.c, r.norm, r.abs_k, r.ratio) for r in threaded.rows]


def test_weil_scan_quadratic_enumerates_principal_ideals():
    level5 = Ideal.principal(F5.element(-1, 2))  # sqrt5, norm 5
    res = weil_scan(F5, F5.one(), F5.one(), max_norm=100,
                    s_primes=None, eps=0.1)
    assert all(row.norm <= 100 for row in res.rows)
    assert all(row.norm >= 1 for row in res.rows)


def test_weil_scan_work_budget():
    with pytest.raises(KloostermanError):
        weil_scan(Q, Q.element(1), Q.element(1), max_norm=10 ** 9,
                  work_budget=10 ** 4)


def test_delta_diagonal():
    chiQ = DirichletCharacter.trivial(Q, Ideal.unit_ideal(Q))
    assert delta_term(Q.element(1), Q.element(1), (0,), chiQ) == 1
    chi5 = DirichletCharacter.trivial(F5, Ideal.unit_ideal(F5))
    r = F5.element(2, 1)
    assert delta_term(r, r, (0, 0), chi5) == 1


def test_delta_unit_square_classes():
    chi5 = DirichletCharacter.trivial(F5, Ideal.unit_ideal(F5))
    eps = F5.unit_group().fundamental
    one = F5.one()
    # r/r' = eps^2: a unit square, delta survives
    assert delta_term(eps * eps, one, (0, 0), chi5) == 1
    # r/r' = eps: not a unit square
    assert delta_term(eps, one, (0, 0), chi5) == 0
    # r/r' not a unit at all
    assert delta_term(F5.element(3), one, (0, 0), chi5) == 0


def test_delta_sign_character():
    # odd parity at the single real place of Q: the two square roots
    # contribute sign(e) each, cancelling for trivial chi
    chiQ = DirichletCharacter.trivial(Q, Ideal.unit_ideal(Q))
    assert delta_term(Q.element(1), Q.element(1), (1,), chiQ) == 0
    # chi mod 4 with chi(-1) = -1 restores the diagonal
    mod4 = Ideal.principal(Q.element(4))
    chi4 = DirichletCharacter.cyclic(Q, mod4, Q.element(3))
    assert delta_term(Q.element(1), Q.element(1), (1,), chi4) == pytest.approx(1)
