import pytest
from hypothesis import settings

from matroid_fairdiv.audits import GeneratorConfig, random_instance

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

CUSTOM_CONCAVE = ["0", "2", "3", "7/2", "15/4", "31/8"]


def small_instance(seed, n=(2, 3), m=(3, 5), weights=("1", "1/2", "2", "3")):
    return random_instance(GeneratorConfig(seed=seed, n_range=n, m_range=m, weight_pool=weights))


@pytest.fixture
def abc():
    return ("a", "b", "c")
