import pytest

from submix.core import parse_substitution

RULES = {
    "fibonacci": "0->01;1->0",
    "mpd": "0->011;1->0",
    "period_doubling": "0->02;2->00",
    "dk1": "0->001;1->11100",
    "dk2": "0->001;1->11001",
    "gt1": "0->001;1->01111",
    "thue_morse": "0->01;1->10",
    "swap_start": "0->10;1->0",
}


@pytest.fixture(scope="session")
def subst():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = parse_substitution(RULES[name])
        return cache[name]
    return get
