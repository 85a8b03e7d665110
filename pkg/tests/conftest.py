import itertools
import sys

import pytest

from rfso.channels import FsoHopParams, RfHopParams
from rfso.system import ImpairmentParams, LinkConfig

SEED = 12345
MU_15DB = 10 ** 1.5
GAMMA_TH_3DB = 10 ** 0.3

GRID_RHO = (0.0, 0.5, 1.0)
GRID_SIGMA_R = (0.3, 0.8, 1.5)
GRID_KAPPA = ((0.0, 0.0), (0.1, 0.1), (0.2, 0.3))


def grid_configs():
    """The 27-point cross-validation grid: N=3, m=2, both hops at 15 dB, threshold 3 dB."""
    out = []
    for rho, sr, (k1, k2) in itertools.product(GRID_RHO, GRID_SIGMA_R, GRID_KAPPA):
        cfg = LinkConfig(RfHopParams(3, 2, rho, MU_15DB), FsoHopParams.from_sigma_r(sr, MU_15DB),
                         ImpairmentParams(k1, k2), GAMMA_TH_3DB)
        out.append(((rho, sr, k1, k2), cfg))
    return out


@pytest.fixture(scope="session")
def grid():
    return grid_configs()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.REPORT, key=lambda s: int(s.split()[1][1:])):
        terminalreporter.write_line(line)
