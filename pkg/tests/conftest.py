import json
from pathlib import Path

import pytest

from catalog import catalog
from cohomology_engine import cartan_model, cohomology, cohomology_algebra

GOLDEN = Path(__file__).parent / "golden"


def _ring(name, top):
    M = catalog(name).obj
    res = cohomology(M, top)
    return M, res, cohomology_algebra(M, res, top)


@pytest.fixture(scope="session")
def su6():
    return _ring("su6_su3su3", 19)


@pytest.fixture(scope="session")
def yamaguchi():
    return _ring("yamaguchi14", 14)


@pytest.fixture(scope="session")
def bazaikin0():
    return _ring("bazaikin 0", 13)


@pytest.fixture(scope="session")
def su6_golden():
    return json.loads((GOLDEN / "su6_betti.json").read_text())


@pytest.fixture(scope="session")
def catalog_rings(su6, yamaguchi, bazaikin0):
    """Every finite algebra reachable from the catalog, keyed by entry."""
    rings = {
        "su6_su3su3": su6[2],
        "yamaguchi14": yamaguchi[2],
        "bazaikin 0": bazaikin0[2],
        "eschenburg": _ring("eschenburg", 7)[2],
    }
    for name in ("s3s5s7", "s3s3s10s11", "sphere 2", "sphere 5", "cpn 2", "cpn 3"):
        rings[name] = catalog(name).obj
    for name, top in (("su2_u1", 2), ("su3_s1", 7)):
        M = cartan_model(catalog(name).obj)
        rings[name] = cohomology_algebra(M, cohomology(M, top), top)
    return rings
