import numpy as np
import pytest

from wavefronts import expr as ex
from wavefronts.errors import DomainError, NonFiniteValue
from wavefronts.fields import ScalarField, catalog, field_from_callable, field_from_expr

RNG = np.random.default_rng(42)


def test_expr_field_gradient_and_hessian():
    e = ex.parse_expr("q1^3 + q1*x1 + x1^2", ("q1", "x1"))
    f = field_from_expr(e, ("q1", "x1"))
    p = np.array([1.5, -0.5])
    assert f.value(p) == pytest.approx(1.5**3 - 0.75 + 0.25)
    assert f.grad(p) == pytest.approx([3 * 1.5**2 - 0.5, 1.5 - 1.0])
    assert np.allclose(f.hessian(p), [[9.0, 1.0], [1.0, 2.0]])


@pytest.mark.parametrize("name", sorted(catalog()))
def test_fd_matches_closed_form_catalog(name):
    fld = catalog()[name]
    fd = ScalarField(arity=fld.arity, fn=fld.fn)  # strip the closed forms
    for _ in range(100):
        p = RNG.uniform(-2, 2, fld.arity)
        assert np.allclose(fd.grad(p), fld.grad(p), rtol=1e-6, atol=1e-6)


def test_fd_hessian_symmetric():
    fd = field_from_callable(lambda p: np.sin(p[0]) * p[1] ** 2, 2)
    H = fd.hessian(np.array([0.7, 1.3]))
    assert H == pytest.approx(H.T)
    assert H[0, 1] == pytest.approx(2 * 1.3 * np.cos(0.7), rel=1e-5)


def test_box_violation_raises():
    fld = field_from_callable(lambda p: p[0] ** 2, 1, box=((-1.0, 1.0),))
    with pytest.raises(DomainError):
        fld.value([2.0])
    # FD probes need margin inside the box edge
    with pytest.raises(DomainError):
        fld.grad([1.0])


@pytest.mark.filterwarnings("ignore:divide by zero")
def test_non_finite_detected():
    fld = field_from_callable(lambda p: 1.0 / p[0], 1)
    with pytest.raises(NonFiniteValue):
        fld.value([0.0])
