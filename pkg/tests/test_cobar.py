"""The truncated cobar algebra (A, d_A, h_A): strictness, second order and kinematic Jacobi."""
from __future__ import annotations

import math
import random

import pytest

from ymbv.cobar import (
    CobarModel,
    SignConvention,
    certify,
    inclusion_defects,
    random_configuration,
    seven_term,
    strictness_defects,
)
from ymbv.errors import LetterBudgetExceeded
from ymbv.ym_complex import N


@pytest.fixture(scope="module")
def model(ym3):
    return CobarModel(ym3, random_configuration(random.Random(0), 3))


def test_configuration_is_generic():
    ks = random_configuration(random.Random(5), 3)
    for k in ks:
        assert k.square()
    assert (ks[0] + ks[1]).square() and (ks[0] + ks[1] + ks[2]).square()


def test_basis_words_on_distinct_letters_count_permutations(model):
    # Σ over set partitions of Π (|block| − 1)! = n!
    for n in range(1, 4):
        letters = tuple((i + 1, (i + 1,)) for i in range(n))
        assert len(model.basis_words(letters)) == math.factorial(n)


def test_single_letter_has_empty_coproducts(model):
    word = (((3, (1,)),),)
    assert model.delta0(word) == []
    assert model.delta_m1(word) == []


def test_two_letter_coproducts(model):
    u, v = ((2, (1,)),), ((6, (2,)),)  # two atoms, each a single letter
    s, prod = model.GL.make_word([u, v])
    assert s
    splits = model.delta0(prod)
    assert {(a, b) for a, b, _ in splits} == {((u,), (v,)), ((v,), (u,))}


def test_repeated_labels_are_rejected(model):
    with pytest.raises(LetterBudgetExceeded):
        model.label_momentum((1, 1))
    with pytest.raises(LetterBudgetExceeded):
        model.random_element(random.Random(0), max_letters=4)


def test_inclusion_intertwines_d_and_h(model, tables_h):
    for label in (1, 2, 3):
        assert inclusion_defects(model, tables_h, label) == {"d": 0, "h": 0}


@pytest.mark.parametrize("seed", range(6))
def test_restricted_transposes_match_the_direct_route(model, seed):
    rng = random.Random(seed)
    labels = rng.sample([1, 2, 3], rng.randint(1, 3))
    word = model.random_coword(rng, labels)
    assert model.delta1_T(word) == model.delta1_T_direct(word)
    assert model.h_T(word) == model.h_T_direct(word)


@pytest.mark.parametrize("seed", range(6))
def test_strictness_on_random_elements(model, seed):
    x = model.random_element(random.Random(seed))
    for name, v in strictness_defects(model, x).items():
        assert not v, name


def test_seven_term_vanishes_on_primal_letters(model):
    A = model.A
    x, y, z = (model.primal_letter(i, lab) for i, lab in ((1, 1), (2, 2), (5, 3)))
    assert not seven_term(model, x, y, z)
    assert A.mul(A.mul(x, y), z)


def test_small_certification(ym3):
    rep = certify(ym3, samples=12, seed=1, max_letters=3, configurations=2)
    assert rep.ok, {k: v for k, v in rep.checks.items() if not v["ok"]}
    assert set(rep.checks) == {
        "dA^2",
        "hA^2",
        "[dA,hA]-box",
        "seven_term",
        "bracket",
        "kinematic_jacobi",
        "equivariance",
    }
    assert rep.checks["dA^2"]["samples"] == 12


def test_a_wrong_sign_convention_is_detected(ym3):
    rep = certify(ym3, samples=12, seed=1, max_letters=3, configurations=2, signs=SignConvention(0, False, 1, -1))
    assert not rep.ok
    assert not rep.checks["dA^2"]["ok"]
