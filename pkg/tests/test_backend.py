"""Compiled and pure kernels must agree; selection honors the override."""

import os
import subprocess
import sys

import numpy as np
import pytest

from sqk3 import _kernels_py as pure

try:
    from sqk3 import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None,
                                    reason="compiled kernels not built")


@needs_compiled
class TestBackendAgreement:
    def test_metric(self):
        for r in (0, 1):
            for x1 in (0.3, 1.2, 2.8):
                assert np.allclose(pure.metric(r, 1.3, x1),
                                   compiled.metric(r, 1.3, x1), atol=1e-15)

    def test_frame(self):
        for r in (0, 1):
            for x1, x3 in ((0.4, 0.0), (1.1, 2.2), (2.6, 5.1)):
                assert np.allclose(pure.frame(r, 0.8, x1, x3),
                                   compiled.frame(r, 0.8, x1, x3), atol=1e-15)

    def test_christoffels(self):
        for r in (0, 1):
            a = pure.christoffels(r, 1.6, 1.2, 0.4, 2.0)
            b = compiled.christoffels(r, 1.6, 1.2, 0.4, 2.0)
            assert np.allclose(a, b, atol=1e-13)

    def test_integrator_trajectories_match(self):
        x0 = np.array([1.2, 0.4, 2.2])
        v0 = np.array([0.1, 0.5, 0.3])
        args = (0, 1.0, x0, v0, 0.25, 0.0, 0.0, 2.0, 1e-3, 500, 0.01, 3.13)
        xa, va, ea = pure.integrate_lorentz(*args)
        xb, vb, eb = compiled.integrate_lorentz(*args)
        assert ea == eb
        assert np.max(np.abs(xa - xb)) < 1e-13
        assert np.max(np.abs(va - vb)) < 1e-13


def test_backend_names():
    assert pure.BACKEND == "python"
    if compiled is not None:
        assert compiled.BACKEND == "compiled"


def test_env_override_selects_pure():
    code = ("import sqk3.backend as b; print(b.BACKEND)")
    env = dict(os.environ, SQK3_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.stdout.strip() == "python"
