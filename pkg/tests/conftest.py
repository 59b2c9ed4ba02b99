import numpy as np
import pytest

from sqk3.geometry import SpaceForm

# chart-valid for both signatures
H_GRID = (-2.5, -1.0, 0.0, 1.0, 2.0, 2.9)


@pytest.fixture(params=[0, 1], ids=["riemannian", "lorentzian"])
def signature(request):
    return request.param


def space_forms(r):
    return [SpaceForm(r, H) for H in H_GRID]


def rel_err(a, b):
    scale = max(1.0, float(np.max(np.abs(b))))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / scale
