"""Plane-wave trees, S and θ₃ in the primal picture, BCJ sums and partial amplitudes."""
from __future__ import annotations

import itertools
import random

import pytest

from ymbv.amplitudes import (
    ExternalLeg,
    WaveCalculus,
    amplitude_checks,
    bcj_check,
    complex_null_pair,
    koszul_permutation_sign,
    null_kinematics,
    null_momentum,
    random_coords,
    symbolic_momentum,
    theta_primal_tensor,
)
from ymbv.bv_infinity import ThetaTable
from ymbv.errors import OnShellPole
from ymbv.exact_arith import GaussianRational
from ymbv.ym_complex import N, fiber_product


# -- kinematics ---------------------------------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_null_momenta(seed):
    rng = random.Random(seed)
    k = null_momentum(rng)
    assert not k.square() and not k.is_zero()
    k1, k2 = complex_null_pair(rng)
    assert not k1.square() and not k2.square() and not (k1 + k2).square()
    assert not (k1 + k2).is_zero()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_null_kinematics_are_generic(n):
    ks = null_kinematics(random.Random(n), n)
    total = ks[0]
    for k in ks[1:]:
        total = total + k
    assert all(not k.square() for k in ks)
    assert not total.square() and not total.is_zero()
    for r in range(2, n):
        for sub in itertools.combinations(ks, r):
            s = sub[0]
            for k in sub[1:]:
                s = s + k
            assert s.square()


def _bubble_sign(parities, perm):
    """Koszul sign by adjacent transpositions (oracle)."""
    seq = list(perm)
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                if parities[seq[j]] and parities[seq[j + 1]]:
                    sign = -sign
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
    return sign


def test_koszul_sign_matches_bubble_sort():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 5)
        par = [rng.randint(0, 1) for _ in range(n)]
        perm = list(range(n))
        rng.shuffle(perm)
        assert koszul_permutation_sign(par, perm) == _bubble_sign(par, perm)


# -- primal maps --------------------------------------------------------------


def test_primal_theta2_is_the_fiber_product(tables, ym3):
    t2 = theta_primal_tensor(tables, ym3.thetas[2])
    for a in range(N):
        for b in range(N):
            want = fiber_product(tables, {a: GaussianRational(1)}, {b: GaussianRational(1)})
            assert t2.get((a, b), {}) == want, (a + 1, b + 1)


def test_propagator_rejects_on_shell_momenta(waves):
    k = null_momentum(random.Random(3))
    x = waves.basis_wave(1, k.k)
    with pytest.raises(OnShellPole):
        waves.propagator(x)


def test_S_is_a_homotopy_for_theta3_on_sampled_triples(waves):
    rng = random.Random(0)
    p = [symbolic_momentum(s) for s in "pqr"]
    for _ in range(150):
        ws = [waves.basis_wave(rng.randrange(N), p[j]) for j in range(3)]
        assert not waves.homotopy_defect(waves.S, waves.theta3_map, ws).vec


def test_a_perturbed_theta3_is_not_a_homotopy(tables_h, ym3):
    entries = {i: list(lst) for i, lst in ym3.thetas[3].entries.items()}
    i = next(i for i in range(N) if entries[i])
    t, c = entries[i][0]
    entries[i][0] = (t, c * 2)
    bad = WaveCalculus(tables_h, ThetaTable(3, entries))
    p = [symbolic_momentum(s) for s in "pqr"]
    defects = [
        bad.homotopy_defect(bad.S, bad.theta3_map, [bad.basis_wave(j, p[r]) for r, j in enumerate(tt)]).vec
        for tt in itertools.permutations(t)
    ]
    assert any(defects)


def test_S_is_nonzero(waves):
    # the homotopy statement is not vacuous: h fails to be second order
    p = [symbolic_momentum(s) for s in "pqr"]
    assert any(
        waves.S(*(waves.basis_wave(j, p[r]) for r, j in enumerate(t))).vec
        for t in itertools.product(range(1, 5), repeat=3)
    )


# -- trees and BCJ ------------------------------------------------------------


def _leg_waves(wc, n, seed):
    rng = random.Random(seed)
    ks = null_kinematics(rng, n)
    return [wc.leg_wave(ExternalLeg(k, random_coords(rng))) for k in ks]


@pytest.mark.parametrize("seed", range(3))
def test_S_n_reproduces_S4_and_T4(waves, seed):
    ws = _leg_waves(waves, 4, seed)
    assert waves.S_n(*ws).vec == waves.S4(*ws).vec
    assert waves.T_n(*ws).vec == waves.T4(*ws).vec


def test_decompositions_count():
    for n in range(3, 7):
        assert len(list(WaveCalculus._decompositions(n))) == n * (n - 1) * (n - 2) // 6


@pytest.mark.parametrize("n", [3, 4, 5])
def test_bcj_projection_vanishes(waves, n):
    runs = bcj_check(waves, n, configs=2, seed=n)
    assert len(runs) == 2 and all(r["ok"] for r in runs)


def test_bcj_terms_cancel_rather_than_vanish(waves):
    ws = _leg_waves(waves, 4, 11)
    x, y, u, v = ws
    E = waves.E
    terms = [
        waves.S(E(x, y), u, v),
        waves.S(x, E(y, u), v),
        waves.S(x, y, E(u, v)),
        waves.S(y, u, E(v, x)),
    ]
    assert any(any(waves.project(t, 2)) for t in terms)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tree_sum_is_closed_and_lives_at_total_momentum(waves, n):
    rng = random.Random(40 + n)
    ks = null_kinematics(rng, n)
    legs = [ExternalLeg(k, random_coords(rng)) for k in ks]
    pre = waves.pre_amplitude(legs)
    assert not waves.d(pre).vec
    total, amp = waves.partial_amplitude(legs)
    assert len(amp) == 2
    s = ks[0]
    for k in ks[1:]:
        s = s + k
    assert total == s


def test_amplitude_checks_small_run(waves, waves_alt, ym3):
    rep = amplitude_checks(waves, waves_alt, ym3.thetas[2], configs=1, seed=2)
    assert all(v["ok"] for v in rep.values()), rep
    assert set(rep) == {
        "M2=p.theta2.i",
        "gauge_independence_M3",
        "gauge_independence_M4",
        "multilinearity",
        "momentum_conservation",
    }
