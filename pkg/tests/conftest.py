import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from popbranch.generators import four_cycle_instance, random_instance, single_node_instance, star_instance
from popbranch.instance import augment_root, branching_from_edges, to_arborescence

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# the four mixed branchings whose uniform lottery is popular on the 4-cycle
QUARTER_MIX = (("ab", "bd", "dc"), ("ba", "ac", "cd"), ("cd", "db", "ba"), ("dc", "ca", "ab"))


def arb(rooted, *edges):
    """Arborescence of D from edges of G; uncovered nodes hang off the root."""
    return to_arborescence(rooted, branching_from_edges(rooted.base, edges))


@pytest.fixture
def fc():
    return augment_root(four_cycle_instance())


@pytest.fixture
def star():
    return augment_root(star_instance())


@pytest.fixture
def single():
    return augment_root(single_node_instance())


@st.composite
def instances(draw, max_n=5, models=("strict", "weak:2", "partial:0.5"), max_density=3):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, min(n * (n - 1), max_density * n)))
    model = draw(st.sampled_from(models))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(n, m, model, seed)


# -- acceptance report ----------------------------------------------------------

ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
