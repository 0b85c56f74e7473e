import math
import os

import pytest

from asymptotica import construct, monodromy, tubular


def base_seed():
    try:
        return int(os.environ.get("ASYMPTOTICA_SEED", "0"))
    except ValueError:
        return 0


@pytest.fixture(scope="session")
def seeds():
    s = base_seed()
    return (s, s + 1, s + 2)


@pytest.fixture(scope="session")
def t1_field():
    return construct.build_t1()


@pytest.fixture(scope="session")
def t1_chart(t1_field):
    return tubular.TubularChart(t1_field.curve)


@pytest.fixture(scope="session")
def t1_monodromy(t1_field, t1_chart):
    return monodromy.monodromy(t1_field, t1_chart, 2.0 * math.pi, checkpoints=16)
