import random

import pytest

from movcat.errors import SizeOverflow
from movcat.fincat import is_subcategory, to_raw
from movcat.generate import (
    MAX_MORPHISMS,
    expansion_passes,
    gen_random,
    random_category,
    random_expansion,
    random_subcategory,
)
from movcat.prosys import validate_expansion
from movcat.workspace import print_workspace

from oracles import law_names


def test_same_seed_same_workspace():
    assert print_workspace(gen_random(1)) == print_workspace(gen_random(1))
    assert print_workspace(gen_random(1)) != print_workspace(gen_random(2))


def test_five_hundred_generated_categories_are_valid():
    rng = random.Random(500)
    for _ in range(500):
        cat = random_category(rng, rng.randint(1, 4), rng.choice([0.1, 0.3, 0.6]))
        raw = to_raw(cat)
        assert len(cat.morphisms) <= MAX_MORPHISMS
        assert law_names(raw.objects, raw.morphisms, raw.identities, raw.compose) == set()
        is_subcategory(cat, random_subcategory(rng, cat))


def test_size_bounds():
    with pytest.raises(SizeOverflow):
        random_category(random.Random(0), 3, 1.0, max_morphisms=3)
    with pytest.raises(ValueError):
        random_category(random.Random(0), 9)
    with pytest.raises(ValueError):
        random_category(random.Random(0), 2, density=0)


def test_expansion_filter_keeps_some_and_rejects_some():
    kept = rejected = 0
    rng = random.Random(7)
    for _ in range(200):
        cat = random_category(rng, rng.randint(1, 3), 0.4, 24)
        exp = random_expansion(rng, cat, sequence=rng.random() < 0.5)
        if exp is None:
            continue
        validate_expansion(exp)
        if expansion_passes(exp):
            kept += 1
        else:
            rejected += 1
    assert kept > 50 and rejected > 5
