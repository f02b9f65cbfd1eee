import os
import subprocess
import sys

import numpy as np
import pytest

from fracwave import kernels
from fracwave.mittag_leffler import _ray_table, _series_coeffs, mlf_array

needs_compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled extension not built")


@needs_compiled
@pytest.mark.parametrize("ab", [(1.25, 1.0), (1.5, 1.5), (1.5, 2.5), (1.9, 1.9), (1.75, 2.75)])
def test_ml_large_backends_agree(ab):
    x = np.geomspace(1.0001, 1e9, 3000)
    table = _ray_table(*ab)
    a = kernels.ml_large(x, table, backend="python")
    b = kernels.ml_large(x, table, backend="cython")
    np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-300)


@needs_compiled
def test_series_backends_agree():
    z = np.linspace(-1.0, 1.0, 513)
    c = _series_coeffs(1.5, 1.5)
    np.testing.assert_allclose(kernels.series_horner(z, c, "python"), kernels.series_horner(z, c, "cython"),
                               rtol=1e-14, atol=1e-16)


@needs_compiled
def test_weighted_history_backends_agree():
    rng = np.random.default_rng(4)
    prim = rng.standard_normal((40, 17))
    forcing = rng.standard_normal((40, 17))
    # the implicit last interval is excluded; forcing[0] never enters
    want = np.einsum("jk,jk->k", prim[:-2] - prim[1:-1], forcing[1:-1])
    for name in ("python", "cython"):
        np.testing.assert_allclose(kernels.weighted_history(prim, forcing, name), want, rtol=1e-12, atol=1e-13)
        np.testing.assert_array_equal(kernels.weighted_history(prim[:2], forcing[:2], name), np.zeros(17))


def test_threaded_split_matches_serial(monkeypatch):
    x = np.geomspace(2.0, 1e6, 9000)
    table = _ray_table(1.5, 1.0)
    monkeypatch.setenv("FRACWAVE_THREADS", "1")
    serial = kernels.ml_large(x, table)
    monkeypatch.setenv("FRACWAVE_THREADS", "4")
    assert kernels.thread_count() == 4
    np.testing.assert_array_equal(kernels.ml_large(x, table), serial)


def test_thread_count_defaults(monkeypatch):
    monkeypatch.setenv("FRACWAVE_THREADS", "bogus")
    assert kernels.thread_count() >= 1
    monkeypatch.delenv("FRACWAVE_THREADS")
    assert kernels.thread_count() >= 1


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_env_forces_pure_python():
    env = dict(os.environ, FRACWAVE_PURE_PYTHON="1")
    code = ("from fracwave import kernels\n"
            "from fracwave.mittag_leffler import mlf_array\n"
            "print(kernels.BACKEND, repr(float(mlf_array(1.5, 1.5, -2.0))))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    name, value = out.stdout.split()
    assert name == "python"
    assert float(value) == pytest.approx(float(mlf_array(1.5, 1.5, -2.0)), rel=1e-14)
