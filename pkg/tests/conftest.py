import numpy as np
import pytest

from oneway.model import Grid, RunConfig, ShotGeometry, VelocityModel, validate

VM1 = VelocityModel(layers=((2500.0, 2400.0),), delta=10.0, z_max=5000.0, c_sup=1600.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def small_plan(layers=(), c_sup=2000.0, receiver_depth=0.0, nx=64, nz=40, nt=256, dx=10.0, config=None, **grid):
    g = Grid(dx=dx, dz=dx, nx=nx, nz=nz, dt=grid.pop("dt", 1e-3), nt=nt, **grid)
    model = VelocityModel(layers=tuple(layers), z_max=nz * dx, c_sup=c_sup)
    shot = ShotGeometry(nx * dx / 2, receiver_depth)
    return validate(config or RunConfig(n_multiples=0), g, model, shot)


# -- acceptance report: one line per criterion at the end of the run ----------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[props["criterion"]] = (report.outcome, props.get("measured", ""))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        outcome, measured = _ACCEPTANCE[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {measured}")
