import pytest

from cqgkit import presets
from cqgkit.corep import IrrepRegistry, decompose
from cqgkit.haar import compute_haar


@pytest.fixture(scope="session")
def suq2():
    return presets.su_q_2()


@pytest.fixture(scope="session")
def suq2_haar6(suq2):
    return compute_haar(suq2.algebra, 6)


@pytest.fixture(scope="session")
def suq2_registry(suq2):
    # stable content: trivial, fundamental and the 3-dim irreducible; tests
    # that grow a registry further build their own
    from cqgkit.corep import tensor
    reg = IrrepRegistry(suq2.algebra)
    decompose(suq2.fundamental, reg, tensor_degree=1)
    decompose(tensor(suq2.fundamental, suq2.fundamental), reg, tensor_degree=2)
    return reg


@pytest.fixture(scope="session")
def cz2():
    return presets.load_preset("c_z2")


@pytest.fixture(scope="session")
def cz4():
    return presets.load_preset("c_z4")


@pytest.fixture(scope="session")
def cs3():
    return presets.load_preset("c_s3")


@pytest.fixture(scope="session")
def cs3_registry(cs3):
    reg = IrrepRegistry(cs3.algebra)
    decompose(cs3.fundamental, reg, tensor_degree=1)
    return reg


@pytest.fixture(scope="session")
def cs3_haar(cs3):
    return compute_haar(cs3.algebra, 2)
