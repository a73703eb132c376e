import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chui_lab import _backend
from chui_lab import _kernels_py as pure
from chui_lab.weights import LogPower, PowerAlpha, interaction_kernel

compiled = _backend.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

angle_arrays = st.lists(st.floats(0, 2 * math.pi, allow_nan=False), min_size=1, max_size=24).map(np.array)


def test_backend_name():
    assert _backend.BACKEND in ("cython", "numpy")
    assert (_backend.BACKEND == "cython") == (compiled is not None)


def test_pure_flag_forces_fallback():
    code = "from chui_lab._backend import BACKEND; print(BACKEND)"
    env = dict(os.environ, CHUI_LAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


@needs_compiled
@settings(max_examples=30)
@given(angle_arrays, st.sampled_from([PowerAlpha(1.0), PowerAlpha(2.0), PowerAlpha(0.5), LogPower(2.0)]),
       st.booleans())
def test_pair_sums_agree(theta, g, mixed):
    ker = interaction_kernel(g)
    charge = np.where(np.arange(len(theta)) % 2 == 0, 1.0, -1.0) if mixed else np.ones(len(theta))
    if ker.kind == "binomial":
        args = (ker.poly, len(ker.coeffs) - 1, ker.phi0)
        e1, g1 = compiled.pair_sums_binom(theta, charge, *args, True)
        e2, g2 = pure.pair_sums_binom(theta, charge, *args, True)
    else:
        args = (ker.u, ker.s, ker.w, ker.phi0)
        e1, g1 = compiled.pair_sums_quad(theta, charge, *args, True)
        e2, g2 = pure.pair_sums_quad(theta, charge, *args, True)
    scale = len(theta) ** 2 * max(abs(ker.phi0), 1.0)
    assert abs(e1 - e2) <= 1e-12 * scale
    assert np.allclose(g1, g2, atol=1e-10 * scale)


@needs_compiled
@given(angle_arrays, st.lists(st.complex_numbers(max_magnitude=0.95), min_size=1, max_size=10).map(np.array))
def test_cauchy_sum_agrees(angles, z):
    v1, m1 = compiled.cauchy_sum(angles, z)
    v2, m2 = pure.cauchy_sum(angles, z)
    assert np.allclose(v1, v2, rtol=1e-12, atol=1e-12)
    assert m1 == pytest.approx(m2, rel=1e-12)


@needs_compiled
@given(angle_arrays, st.integers(1, 300))
def test_power_sums_agree(angles, J):
    # the compiled loop multiplies iteratively, so rounding grows with J
    assert np.allclose(compiled.power_sums(angles, J), pure.power_sums(angles, J),
                       atol=1e-13 * J * len(angles))


@needs_compiled
def test_local_sq_sum_agrees():
    rng = np.random.default_rng(3)
    angles = np.sort(rng.uniform(0, 2 * math.pi, 9))
    owner = rng.integers(0, 9, 50).astype(np.intp)
    x = rng.uniform(-1e-3, 1e-3, 50)
    d = 1e-4
    assert np.allclose(compiled.local_sq_sum(angles, owner, x, d), pure.local_sq_sum(angles, owner, x, d),
                       rtol=1e-11)
