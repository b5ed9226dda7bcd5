import sys
import time

import pytest

from deformkit.poly_core import LocalRing
from deformkit.stdbasis import ideal_intersect, minors
from deformkit.syzmod import ModuleMatrix
from helpers import ideal, vec


@pytest.fixture(scope="session")
def cone():
    R = LocalRing(("x", "y", "z", "u", "v"))
    M = ModuleMatrix.parse(R, 2, 4, "x,y,z,u,y,z,u,v".split(","))
    return minors(M, 2)


@pytest.fixture(scope="session")
def cone_reference_basis(cone):
    # deformation directions read off the linear terms of the reference equations,
    # in the generator order produced by minors()
    R = cone.ring
    return [vec(R, "x", "0", "0", "-z", "-u", "0"),
            vec(R, "0", "-x", "0", "-y", "0", "u"),
            vec(R, "y", "z", "u", "0", "0", "0"),
            vec(R, "0", "0", "z", "0", "u", "v")]


@pytest.fixture(scope="session")
def icis():
    R = LocalRing(("x1", "x2", "x3"))
    return ideal(R, "x1^2+x2^3", "x3^2+x2^3")


@pytest.fixture(scope="session")
def planes4():
    R = LocalRing(("x", "y", "u", "v"))
    return ideal_intersect(ideal(R, "x", "y"), ideal(R, "u", "v"))


def pytest_sessionstart(session):
    session.config._started = time.perf_counter()


def pytest_terminal_summary(terminalreporter, config):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
    total = time.perf_counter() - config._started
    verdict = "PASS" if total < 300 else "FAIL"
    terminalreporter.write_line(f"full suite: {verdict} ({total:.1f}s, budget 300s)")
