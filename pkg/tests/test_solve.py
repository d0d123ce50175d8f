import numpy as np
import pytest

from wavefronts.errors import (
    MaxIterations,
    RankDeficientSeed,
    SeedNotOnCurve,
    SingularJacobian,
)
from wavefronts.solve import continue_curve, fd_jacobian, newton_solve


def circle(z):
    return np.array([z[0] ** 2 + z[1] ** 2 - 1.0])


def test_fd_jacobian_linear_system_exact():
    A = np.array([[2.0, -1.0], [0.5, 3.0]])
    J = fd_jacobian(lambda z: A @ z, np.array([0.3, -0.7]))
    assert J == pytest.approx(A, abs=1e-9)


def test_newton_quadratic():
    root = newton_solve(lambda z: np.array([z[0] ** 2 - 2.0]), np.array([1.0]))
    assert root[0] == pytest.approx(np.sqrt(2.0), abs=1e-10)


def test_newton_underdetermined_least_norm():
    # one equation, two unknowns: stays near the seed
    z = newton_solve(circle, np.array([2.0, 0.0]))
    assert circle(z)[0] == pytest.approx(0.0, abs=1e-10)
    assert abs(z[1]) < 1e-8


def test_newton_frozen_coordinates():
    z = newton_solve(
        lambda z: np.array([z[0] ** 2 - z[1]]), np.array([1.0, 4.0]), frozen=[1]
    )
    assert z[1] == 4.0
    assert z[0] == pytest.approx(2.0, abs=1e-9)


def test_newton_singular_jacobian():
    # residual 1 but identically-zero Jacobian row at the seed
    with pytest.raises(SingularJacobian):
        newton_solve(
            lambda z: np.array([z[0] ** 2 + z[1] ** 2 + 1.0]), np.array([0.0, 0.0])
        )


def test_newton_max_iterations():
    with pytest.raises((MaxIterations, SingularJacobian)):
        newton_solve(lambda z: np.array([z[0] ** 2 + 1.0]), np.array([1.0]), max_iter=8)


def test_continuation_traces_unit_circle():
    c = continue_curve(circle, np.array([1.0, 0.0]), step=0.05, max_points=500)
    assert c.closed
    radii = np.linalg.norm(c.points, axis=1)
    assert np.max(np.abs(radii - 1.0)) < 1e-8
    # about 2*pi / 0.05 ~ 126 points
    assert 100 <= len(c.points) <= 150


def test_continuation_residuals_small():
    c = continue_curve(circle, np.array([0.0, 1.0]), step=0.02, max_points=1000)
    res = np.array([circle(p)[0] for p in c.points])
    assert np.max(np.abs(res)) < 1e-8


def test_continuation_seed_not_on_curve():
    with pytest.raises(SeedNotOnCurve):
        continue_curve(circle, np.array([2.0, 2.0]), step=0.05, max_points=10)


def test_continuation_rank_deficient_seed():
    # gradient of z1^2 + z2^2 vanishes at the origin, which lies on the zero set
    sys = lambda z: np.array([z[0] ** 2 + z[1] ** 2])
    with pytest.raises(RankDeficientSeed):
        continue_curve(sys, np.array([0.0, 0.0]), step=0.05, max_points=10)


def test_continuation_stops_at_box():
    line = lambda z: np.array([z[1]])
    c = continue_curve(
        line,
        np.array([0.0, 0.0]),
        step=0.1,
        max_points=500,
        box=((-1.0, 1.0), (-1.0, 1.0)),
    )
    assert not c.closed
    assert np.all(np.abs(c.points[:, 0]) <= 1.0 + 1e-9)
    assert len(c.points) >= 15
