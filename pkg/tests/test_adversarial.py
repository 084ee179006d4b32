from collections import Counter

import pytest

from movcat.errors import LawViolation
from movcat.fincat import validate_category

from mutations import KINDS, mutations

MUTATIONS = mutations()


def test_suite_is_balanced():
    counts = Counter(m.kind for m in MUTATIONS)
    assert len(MUTATIONS) == 200
    assert set(counts) == set(KINDS) and min(counts.values()) >= 66


@pytest.mark.parametrize("m", MUTATIONS, ids=[f"{i}-{m.kind}" for i, m in enumerate(MUTATIONS)])
def test_mutation_is_rejected_with_its_law(m):
    expected = m.oracle_laws()
    assert m.kind in expected
    with pytest.raises(LawViolation) as info:
        validate_category(m.raw)
    assert info.value.laws == expected
