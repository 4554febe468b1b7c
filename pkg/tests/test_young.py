import math

import numpy as np
import pytest

from ripoincare.young import YoungFunction, young_function


def test_registry_names():
    assert young_function("power(2)").name == "power(2)"
    assert young_function("exp_minus_one").name == "exp_minus_one"
    assert young_function("t_log_alpha(1.5)").name == "t_log_alpha(1.5)"
    with pytest.raises(KeyError, match="unknown Young function"):
        young_function("gaussian")


@pytest.mark.parametrize("name", ["power(1)", "power(2)", "power(4)", "exp_minus_one",
                                  "t_log_alpha(0)", "t_log_alpha(1)", "t_log_alpha(2)"])
def test_inverse_roundtrip(name):
    A = young_function(name)
    for t in np.logspace(-4, 2, 17):
        u = float(A(t))
        assert A.inverse(u) == pytest.approx(t, rel=1e-10)


def test_forward_values():
    A = young_function("t_log_alpha(2)")
    assert float(A(0.5)) == pytest.approx(0.5)  # identity below 1
    assert float(A(math.e)) == pytest.approx(math.e * 4.0)
    E = young_function("exp_minus_one")
    assert float(E(1.0)) == pytest.approx(math.e - 1.0)


def test_log_inverse_consistency():
    for name in ("power(3)", "exp_minus_one", "t_log_alpha(1.5)"):
        A = young_function(name)
        for v in (0.5, 2.0, 10.0, 100.0):
            direct = math.log(A.inverse(math.exp(v)))
            assert A.log_inverse(v) == pytest.approx(direct, rel=1e-9)


def test_log_inverse_huge_arguments():
    A = young_function("t_log_alpha(2)")
    x = A.log_inverse(1e12)  # solve x + 2 ln(1+x) = 1e12
    assert x + 2.0 * math.log1p(x) == pytest.approx(1e12, rel=1e-12)
    assert young_function("power(2)").log_inverse(1e300) == pytest.approx(5e299)


def test_missing_log_inverse_raises():
    A = YoungFunction("cubic", lambda t: np.asarray(t, dtype=float) ** 3)
    assert A.inverse(8.0) == pytest.approx(2.0, rel=1e-10)
    with pytest.raises(OverflowError, match="log-domain"):
        A.log_inverse(1e6)


def test_validation_rejects_nonconvex():
    with pytest.raises(ValueError, match="convexity"):
        YoungFunction("sqrt", lambda t: np.sqrt(np.abs(t)))
    with pytest.raises(ValueError, match="A\\(0\\)"):
        YoungFunction("affine", lambda t: np.asarray(t, dtype=float) + 1.0)
