from __future__ import annotations

import pytest

from zestlab.group import make_group
from zestlab.twisted_double import modular_data


@pytest.fixture(scope="session")
def G37():
    return make_group(3, 7)


@pytest.fixture(scope="session")
def G511():
    return make_group(5, 11)


@pytest.fixture(scope="session")
def md37(G37):
    return {u: modular_data(G37, u) for u in range(3)}


@pytest.fixture(scope="session")
def md511(G511):
    return {u: modular_data(G511, u) for u in range(5)}
