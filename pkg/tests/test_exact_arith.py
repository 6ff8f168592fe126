"""Exact arithmetic over Q(i): scalars, polynomials, affine and quadratic solves."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ymbv import _purekernel
from ymbv.errors import Inconsistent, NotFound
from ymbv.exact_arith import (
    I,
    K,
    Q_BOX,
    GaussianRational,
    LinearSystem,
    PolyKP,
    find_instance,
    gr,
    gr_from_json,
    gr_to_json,
    solve_affine,
)


def _pair(z: GaussianRational):
    return (Fraction(z.re), Fraction(z.im))


def _pair_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _pair_div(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n)


def _rand_gr(rng):
    return GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 7)), Fraction(rng.randint(-9, 9), rng.randint(1, 7)))


def test_field_operations_match_fraction_pairs():
    rng = random.Random(11)
    for _ in range(500):
        a, b = _rand_gr(rng), _rand_gr(rng)
        assert _pair(a + b) == (_pair(a)[0] + _pair(b)[0], _pair(a)[1] + _pair(b)[1])
        assert _pair(a * b) == _pair_mul(_pair(a), _pair(b))
        if b:
            assert _pair(a / b) == _pair_div(_pair(a), _pair(b))
            assert a / b * b == a


def test_small_integer_arithmetic_matches_builtin_complex():
    rng = random.Random(3)
    for _ in range(200):
        x = complex(rng.randint(-5, 5), rng.randint(-5, 5))
        y = complex(rng.randint(-5, 5), rng.randint(-5, 5))
        assert gr(x) * gr(y) == gr(x * y)
        assert gr(x) - gr(y) == gr(x - y)


def test_imaginary_unit_and_conjugate():
    assert I * I == GaussianRational(-1)
    z = GaussianRational(Fraction(3, 2), -2)
    assert z * z.conjugate() == GaussianRational(Fraction(9, 4) + 4)


@pytest.mark.parametrize(
    "text,value",
    [
        ("1/2", GaussianRational(Fraction(1, 2))),
        ("I", GaussianRational(0, 1)),
        ("-I", GaussianRational(0, -1)),
        ("3/2*I", GaussianRational(0, Fraction(3, 2))),
        ("1-2*I", GaussianRational(1, -2)),
        ("-1/3+I", GaussianRational(Fraction(-1, 3), 1)),
    ],
)
def test_parse_scalar_strings(text, value):
    assert gr(text) == value


def test_str_round_trips_through_the_parser():
    rng = random.Random(5)
    for _ in range(200):
        z = _rand_gr(rng)
        assert gr(str(z)) == z
        assert gr_from_json(gr_to_json(z)) == z


def test_json_scalars_are_strings():
    assert gr_to_json(GaussianRational(Fraction(1, 2), -3)) == {"re": "1/2", "im": "-3"}


def test_polynomial_ring_laws():
    rng = random.Random(7)
    syms = list(K) + [PolyKP.symbol("a"), PolyKP.symbol("b")]

    def rand_poly():
        p = PolyKP()
        for _ in range(rng.randint(1, 4)):
            t = PolyKP.const(_rand_gr(rng))
            for _ in range(rng.randint(0, 2)):
                t = t * rng.choice(syms)
            p = p + t
        return p

    for _ in range(100):
        p, q, r = rand_poly(), rand_poly(), rand_poly()
        assert (p + q) * r == p * r + q * r
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p - p == PolyKP()


def test_substitute_then_evaluate_equals_direct_evaluation():
    rng = random.Random(9)
    vals = {n: _rand_gr(rng) for n in ("k0", "k1", "k2", "k3")}
    box = Q_BOX.evaluate(vals)
    expect = -vals["k0"] * vals["k0"] + vals["k1"] * vals["k1"] + vals["k2"] * vals["k2"] + vals["k3"] * vals["k3"]
    assert box == expect
    assert Q_BOX.substitute(vals).constant_value() == expect


def test_polynomial_json_round_trip():
    p = K[0] * K[1] * GaussianRational(0, Fraction(1, 2)) - PolyKP.symbol("h3_4") + 2
    assert PolyKP.from_json(p.to_json()) == p


def test_affine_solve_unique_and_free():
    x, y, z = (PolyKP.symbol(n) for n in ("x", "y", "z"))
    # x + y = 3, x - y = 1 (z free)
    sol = solve_affine(LinearSystem(["x", "y", "z"], [x + y - 3, x - y - 1]))
    assert sol.solution["x"] == PolyKP.const(2)
    assert sol.solution["y"] == PolyKP.const(1)
    assert sol.free == ["z"]
    assert sol.rank == 2


def test_affine_solve_splits_momentum_monomials():
    # (a - 1) k0 + (b + I) k1 = 0 for all k: a = 1, b = -I
    a, b = PolyKP.symbol("a"), PolyKP.symbol("b")
    sol = solve_affine(LinearSystem(["a", "b"], [(a - 1) * K[0] + (b + I) * K[1]]))
    assert sol.solution == {"a": PolyKP.const(1), "b": PolyKP.const(GaussianRational(0, -1))}


def test_affine_solve_inconsistent():
    x = PolyKP.symbol("x")
    with pytest.raises(Inconsistent):
        solve_affine(LinearSystem(["x"], [x - 1, x - 2]))


def test_affine_solve_rejects_nonlinear():
    x = PolyKP.symbol("x")
    with pytest.raises(ValueError):
        solve_affine(LinearSystem(["x"], [x * x - 1]))


def test_find_instance_solves_a_quadratic_system():
    u, v = PolyKP.symbol("u"), PolyKP.symbol("v")
    eqs = [u * v - 1, u - v]  # u = v = ±1; the candidate list tries 1 before -1
    sol = find_instance(eqs, ["u", "v"])
    assert sol == {"u": gr(1), "v": gr(1)}
    for e in eqs:
        assert not e.substitute(sol)


def test_find_instance_exhausted():
    u = PolyKP.symbol("u")
    with pytest.raises(NotFound):
        find_instance([u * u - 7], ["u"])


def test_rref_on_pure_kernel_matches_known_solution():
    # 2x + y = 5, x - I y = 0  ->  y = 5/(2I + 1) = 1 - 2I, x = I y = 2 + I
    rows = [{0: gr(2), 1: gr(1), 2: gr(-5)}, {0: gr(1), 1: -I, 2: gr(0)}]
    piv, bad = _purekernel.sparse_rref(rows, 2)
    assert bad is None
    assert -piv[0][2] == GaussianRational(2, 1)
    assert -piv[1][2] == GaussianRational(1, -2)
