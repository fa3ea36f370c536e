import pytest

from sc3loop.config import load_config
from sc3loop.link import LinkBudget
from sc3loop.model import ComputeModel, ControlPlant, LoopBudget

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def ref_config():
    return load_config()


@pytest.fixture(scope="session")
def ref_plant():
    return ControlPlant(n=100, m=100, intrinsic_entropy_rate=50.0, lqr_scale=1.0, lqr_offset=1.0)


@pytest.fixture(scope="session")
def ref_links():
    ul = LinkBudget.from_path_loss(0.1, 2000, 1, -174)
    dl = LinkBudget.from_path_loss(1.0, 2000, 1, -174)
    return ul, dl


@pytest.fixture(scope="session")
def ref_compute():
    return ComputeModel(rho=0.01, alpha=100, f_max=1e9)


@pytest.fixture(scope="session")
def ref_budget():
    return LoopBudget(cycle_time=0.02, b_max=1e6)


@pytest.fixture(scope="session")
def ref_scenario(ref_plant, ref_compute, ref_links, ref_budget):
    ul, dl = ref_links
    return ref_plant, ref_compute, ul, dl, ref_budget


@pytest.fixture(scope="session")
def symmetric_links():
    link = LinkBudget(p_max=1.0, channel_gain=1e-10, n0=1e-20)
    return link, link


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(name, passed, detail=""):
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
