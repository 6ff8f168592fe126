"""The compiled kernel and its pure-Python twin agree; the selection honours YMBV_PURE."""
from __future__ import annotations

import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from ymbv import _purekernel, kernel

compiled = pytest.importorskip("ymbv._kernel", reason="compiled kernel not built")


def _rand(rng, mod):
    return mod.GaussianRational(Fraction(rng.randint(-20, 20), rng.randint(1, 9)), Fraction(rng.randint(-20, 20), rng.randint(1, 9)))


def _key(z):
    return (Fraction(z.re), Fraction(z.im))


def test_default_backend_is_compiled_when_built():
    if os.environ.get("YMBV_PURE", "") not in ("", "0"):
        pytest.skip("YMBV_PURE is set")
    assert kernel.BACKEND == "cython"


@pytest.mark.parametrize("flag,backend", [("1", "python"), ("0", "cython"), ("", "cython")])
def test_environment_selects_backend(flag, backend):
    env = dict(os.environ, YMBV_PURE=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from ymbv import kernel; print(kernel.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == backend


def test_scalar_operations_agree():
    rng = random.Random(1)
    for _ in range(1000):
        seed = rng.random()
        ra, rb = random.Random(seed), random.Random(seed)
        pa, pb = _rand(ra, _purekernel), _rand(ra, _purekernel)
        ca, cb = _rand(rb, compiled), _rand(rb, compiled)
        assert _key(pa + pb) == _key(ca + cb)
        assert _key(pa - pb) == _key(ca - cb)
        assert _key(pa * pb) == _key(ca * cb)
        if pb:
            assert _key(pa / pb) == _key(ca / cb)
        assert _key(pa ** 3) == _key(ca ** 3)
        assert str(pa) == str(ca)
        assert (pa == pb) == (ca == cb)
        assert hash(pa) == hash(ca)


def test_mixed_int_and_fraction_operands():
    for mod in (_purekernel, compiled):
        z = mod.GaussianRational(Fraction(1, 2), 1)
        assert z + 1 == mod.GaussianRational(Fraction(3, 2), 1)
        assert 2 * z == mod.GaussianRational(1, 2)
        assert z * Fraction(2, 3) == mod.GaussianRational(Fraction(1, 3), Fraction(2, 3))
        assert 1 - z == mod.GaussianRational(Fraction(1, 2), -1)


def _random_system(rng, mod, nrows, ncols, density=0.4):
    rows = []
    for _ in range(nrows):
        row = {c: _rand(rng, mod) for c in range(ncols + 1) if rng.random() < density}
        rows.append(row)
    return rows


def test_rref_agrees_on_random_systems():
    rng = random.Random(2)
    for trial in range(60):
        nrows, ncols = rng.randint(1, 12), rng.randint(1, 10)
        seed = rng.random()
        pr = _random_system(random.Random(seed), _purekernel, nrows, ncols)
        cr = _random_system(random.Random(seed), compiled, nrows, ncols)
        p_piv, p_bad = _purekernel.sparse_rref(pr, ncols)
        c_piv, c_bad = compiled.sparse_rref(cr, ncols)
        assert sorted(p_piv) == sorted(c_piv)
        for col in p_piv:
            assert {k: _key(v) for k, v in p_piv[col].items()} == {k: _key(v) for k, v in c_piv[col].items()}
        assert (p_bad is None) == (c_bad is None)


def test_rref_result_solves_the_system():
    # independent check: plug the reduced solution back into the original rows
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(1, 6)
        x = [_rand(rng, compiled) for _ in range(n)]
        rows = []
        for _ in range(n + 2):
            coeffs = {c: _rand(rng, compiled) for c in range(n) if rng.random() < 0.7}
            const = compiled.GaussianRational(0)
            for c, v in coeffs.items():
                const = const - v * x[c]
            rows.append({**coeffs, n: const})
        piv, bad = compiled.sparse_rref(rows, n)
        assert bad is None
        if len(piv) == n:
            assert [-piv[c].get(n, compiled.GaussianRational(0)) for c in range(n)] == x


def test_axpy_agrees():
    rng = random.Random(6)
    for _ in range(200):
        seed = rng.random()
        ra, rb = random.Random(seed), random.Random(seed)
        t1 = {i: _rand(ra, _purekernel) for i in range(5) if ra.random() < 0.6}
        s1 = {i: _rand(ra, _purekernel) for i in range(5) if ra.random() < 0.6}
        k1 = _rand(ra, _purekernel)
        t2 = {i: _rand(rb, compiled) for i in range(5) if rb.random() < 0.6}
        s2 = {i: _rand(rb, compiled) for i in range(5) if rb.random() < 0.6}
        k2 = _rand(rb, compiled)
        _purekernel.axpy(t1, s1, k1)
        compiled.axpy(t2, s2, k2)
        assert {i: _key(v) for i, v in t1.items()} == {i: _key(v) for i, v in t2.items()}
