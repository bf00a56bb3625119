import logging

import pytest

from spongedim import samples

logging.getLogger("spongedim").setLevel(logging.ERROR)


@pytest.fixture
def carpet():
    return samples.mcmullen_carpet()


@pytest.fixture
def cube():
    return samples.full_cube()


@pytest.fixture
def uniform():
    return samples.uniform_carpet()


@pytest.fixture
def golden():
    return samples.golden_mean()


@pytest.fixture
def golden_pair():
    return samples.golden_mean_pair()


@pytest.fixture
def sft_carpet():
    return samples.sft_carpet()


@pytest.fixture(params=sorted(samples.NAMED))
def named(request):
    return samples.NAMED[request.param]()
