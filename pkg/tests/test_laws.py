from __future__ import annotations

import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from symbolhomology.examples import load_fixture
from symbolhomology.fuzz import random_consistent_oracle
from symbolhomology.laws import check_all, generator_pool


@pytest.mark.parametrize("name", ["T_ml", "T_mm", "T_mm_w_in_B1", "triangle"])
def test_shipped_oracles_satisfy_laws(oracles, name):
    ran = Counter()
    assert check_all(oracles[name], random.Random(0), ran) == Counter()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_oracles_satisfy_laws(seed):
    rng = random.Random(seed)
    assert check_all(random_consistent_oracle(rng), rng) == Counter()


def test_pool_holds_generators_only(tri):
    pool = generator_pool(tri, random.Random(1))
    assert pool
    for x in pool:
        for w, _ in x.terms:
            (f,) = w
            assert len(f.gen.flow_out) == 1 and f.gen.flow_in


def test_corrupted_oracle_is_caught():
    o = load_fixture("corrupted.fixture")
    fails = Counter()
    for seed in range(20):
        fails.update(check_all(o, random.Random(seed)))
    assert fails
    assert {m.split(":")[0] for m in fails} == {"ev-of-boundary"}
