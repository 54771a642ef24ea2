import numpy as np
import pytest

from dfpp.lattice import EdgeField, GridSpec


@pytest.fixture
def ones_field():
    return EdgeField(
        grid=GridSpec(4, 4),
        east=np.ones((4, 5)),
        north=np.ones((5, 4)),
        provenance=('{"atoms":[[1.0,1.0]]}', 0, 0),
    )


@pytest.fixture
def zeros_field():
    return EdgeField(
        grid=GridSpec(4, 4),
        east=np.zeros((4, 5)),
        north=np.zeros((5, 4)),
        provenance=('{"atoms":[[0.0,1.0]]}', 0, 0),
    )
