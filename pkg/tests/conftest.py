import json

import pytest
from hypothesis import settings

from src.core.spectra import CuspidalToken, SpehBlock, TokenRegistry

CHI = CuspidalToken("chi", 1, "chi")
ETA = CuspidalToken("eta", 1, "eta")
SIGMA = CuspidalToken("sigma", 2, "sigma")
A = CuspidalToken("a", 1, "b")
B = CuspidalToken("b", 1, "a")

settings.register_profile("bookkeeper", max_examples=200, deadline=None)
settings.load_profile("bookkeeper")


def speh(token: CuspidalToken, d: int = 1) -> SpehBlock:
    return SpehBlock(token, d)


@pytest.fixture
def chi_registry() -> TokenRegistry:
    return TokenRegistry([CHI])


@pytest.fixture
def self_dual_registry() -> TokenRegistry:
    return TokenRegistry([CHI, ETA, SIGMA])


@pytest.fixture
def dual_pair_registry() -> TokenRegistry:
    return TokenRegistry([A, B, CHI])


@pytest.fixture
def mixed_rank_registry() -> TokenRegistry:
    return TokenRegistry([A, B, SIGMA])


@pytest.fixture
def chi_sigma_registry() -> TokenRegistry:
    return TokenRegistry([CHI, SIGMA])


@pytest.fixture
def chi_registry_file(tmp_path):
    path = tmp_path / "chi.json"
    path.write_text(json.dumps([{"id": "chi", "rank": 1, "dual": "chi"}]), encoding="utf-8")
    return path
