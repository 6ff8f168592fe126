"""Shared, session-scoped fixtures: the tables, both homotopies and the θ tables."""
from __future__ import annotations

import pytest

from ymbv.amplitudes import WaveCalculus
from ymbv.bv_infinity import YMStructure
from ymbv.gerstenhaber import DecoratedLetters, FreeGerstenhaber
from ymbv.ym_complex import ALT_CANDIDATES, load_structure_tables, solve_h


@pytest.fixture(scope="session")
def tables():
    return load_structure_tables()


@pytest.fixture(scope="session")
def tables_h(tables):
    return solve_h(tables)


@pytest.fixture(scope="session")
def tables_alt(tables):
    return solve_h(tables, ALT_CANDIDATES)


@pytest.fixture(scope="session")
def ym3(tables_h):
    ym = YMStructure(tables_h)
    ym.build(3)
    return ym


@pytest.fixture(scope="session")
def waves(tables_h, ym3):
    return WaveCalculus(tables_h, ym3.thetas[3])


@pytest.fixture(scope="session")
def waves_alt(tables_alt):
    return WaveCalculus(tables_alt)


@pytest.fixture(scope="session")
def dual_algebra(tables):
    """The free Gerstenhaber algebra on the 16 dual generators (degrees negated)."""
    return FreeGerstenhaber(DecoratedLetters([-d for d in tables.basis.deg], tables.basis.names))
