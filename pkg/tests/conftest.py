import pytest

from ris_secrecy import Model, SystemParams


@pytest.fixture
def v2v_params():
    return SystemParams(model=Model.V2V_RIS_AP)


@pytest.fixture
def relay_params():
    return SystemParams(model=Model.VANET_RIS_RELAY, r_s=10.0)
