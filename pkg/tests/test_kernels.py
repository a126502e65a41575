import math
import os
import subprocess
import sys

import pytest

from oracles import flt_quaternion
from so3zi import _kernels_py, kernels


def sample_points(rng, n):
    return [(rng.uniform(-8, 8), rng.uniform(-8, 8), 10 ** rng.uniform(-3, 1)) for _ in range(n)]


def test_mobius_matches_quaternion_oracle(kernel_module, rng):
    for _ in range(50):
        coef = tuple(rng.uniform(-3, 3) for _ in range(8))
        x1, x2, y = rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.1, 3)
        a, b, c, d = (complex(coef[i], coef[i + 1]) for i in range(0, 8, 2))
        # the oracle needs ad - bc = 1; rescale by a square root of the determinant
        s = (a * d - b * c) ** 0.5
        scaled = [v / s for v in (a, b, c, d)]
        flat = tuple(p for v in scaled for p in (v.real, v.imag))
        got = kernel_module.mobius(flat, x1, x2, y)
        ref = flt_quaternion(*scaled, x1, x2, y)
        assert all(math.isclose(g, r, rel_tol=1e-9, abs_tol=1e-9) for g, r in zip(got, ref))


def test_inversion_constants(kernel_module):
    p = (0.3, -0.2, 0.7)
    q = kernel_module.mobius(kernel_module.GINV, *kernel_module.mobius(kernel_module.GINV, *p))
    assert all(math.isclose(u, v, abs_tol=1e-12) for u, v in zip(p, q))
    # the real generator carries the circle of radius sqrt2 about 1 onto the one about -1
    for t in (0.3, 1.0, 2.2):
        x, x2, y = kernel_module.mobius(kernel_module.GINV_R, 1 + math.sqrt(2) * math.cos(t), 0.0,
                                        math.sqrt(2) * math.sin(t))
        assert x2 == 0.0 and math.isclose((x + 1) ** 2 + y ** 2, 2.0, rel_tol=1e-12)


def test_backends_agree(kernel_module, rng):
    for x1, x2, y in sample_points(rng, 200):
        assert kernel_module.walk_picard(x1, x2, y, 1e-9, 10000) == \
            _kernels_py.walk_picard(x1, x2, y, 1e-9, 10000)
        assert kernel_module.walk_gamma(x1, x2, y, 1e-9, 10000) == \
            _kernels_py.walk_gamma(x1, x2, y, 1e-9, 10000)
        assert kernel_module.walk_gamma_int(x1, y, 1e-9, 10000) == \
            _kernels_py.walk_gamma_int(x1, y, 1e-9, 10000)


def test_batch_matches_single_walk(kernel_module, rng):
    pts = sample_points(rng, 100)
    for (x1, x2, y), (_, _, by, bit, ok) in zip(pts, kernel_module.walk_gamma_batch(pts, 1e-9, 10000)):
        _, _, sy, _, sit, sok = kernel_module.walk_gamma(x1, x2, y, 1e-9, 10000)
        assert ok and sok and bit == sit and by == sy


def test_iteration_cap_reports_failure(kernel_module):
    *_, ok = kernel_module.walk_gamma_int(0.9, 1e-4, 1e-9, 1)
    assert not ok
    *_, ok = kernel_module.walk_picard(0.3, 0.2, 1e-4, 1e-9, 1)
    assert not ok


def test_backend_name():
    assert kernels.BACKEND in {"python", "cython"}
    try:
        import so3zi._kernels  # noqa: F401
    except ImportError:
        assert kernels.BACKEND == "python"
    else:
        assert kernels.BACKEND == "cython"


@pytest.mark.parametrize("flag,expected", [("1", "python"), ("0", None)])
def test_pure_override(flag, expected):
    env = dict(os.environ, SO3ZI_PURE=flag)
    out = subprocess.run([sys.executable, "-c", "from so3zi import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == (expected or kernels.BACKEND)
