import pytest

from wsnsim.config import SimConfig
from wsnsim.topology import Topology

_acceptance = []


def line_topology(points, bs, radius=50.0, width=100.0, height=100.0, **cfg):
    """Hand-placed topology plus a matching config."""
    config = SimConfig(node_count=len(points), bs_x_m=bs[0], bs_y_m=bs[1], comm_radius_m=radius,
                       field_width_m=width, field_height_m=height, **cfg)
    return Topology.from_config(points, config), config


@pytest.fixture
def hand_topology():
    return line_topology


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
