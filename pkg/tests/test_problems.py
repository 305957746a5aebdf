import numpy as np
import pytest

from homorq.operators import DomainError
from homorq.problems import (
    canonical_name,
    extended_rosenbrock,
    get_problem,
    gradient_check,
    quadratic,
    registry,
)

NAMES = sorted(registry())
SCALED = {"Generalized Rosenbrock", "Generalized White and Holst", "Extended Powell"}


def test_registry_has_fourteen_problems():
    assert len(NAMES) == 14


@pytest.mark.parametrize("name", NAMES)
def test_gradient_consistency(name):
    p = get_problem(name, 12)
    rng = np.random.default_rng(len(name))
    points = [p.start] + [p.start + 0.1 * rng.standard_normal(12) for _ in range(5)]
    for x in points:
        assert gradient_check(p, x) <= 1e-5


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("n", [100, 1000, 10000])
def test_start_point_finite(name, n):
    p = get_problem(name, n)
    assert p.dim == n and p.start.shape == (n,)
    assert np.isfinite(p.objective(p.start))
    assert np.all(np.isfinite(p.gradient(p.start)))
    assert p.scale_by_g0 == (name in SCALED)


@pytest.mark.parametrize("name", sorted(SCALED))
def test_scaled_problems_have_unit_initial_gradient(name):
    p = get_problem(name, 100)
    assert np.linalg.norm(p.gradient(p.start)) == pytest.approx(1.0, rel=1e-15)


def test_rosenbrock_minimum():
    p = extended_rosenbrock(100)
    assert p.objective(np.ones(100)) == 0.0
    assert not np.any(p.gradient(np.ones(100)))


@pytest.mark.parametrize("alias,canon", [
    ("Ext Beale", "Extended Beale"),
    ("ext-wh", "Extended White and Holst"),
    ("S Conv 2", "Strictly Convex 2"),
    ("FULL HESSIAN fh1", "Full Hessian FH1"),
    ("pert_quad", "Perturbed quadratic"),
])
def test_name_normalization(alias, canon):
    assert canonical_name(alias) == canon


def test_unknown_name_and_bad_dimension():
    with pytest.raises(KeyError):
        get_problem("Rastrigin", 10)
    with pytest.raises(DomainError):
        get_problem("Extended Powell", 10)
    with pytest.raises(DomainError):
        get_problem("Extended Beale", 7)


def test_gradient_check_on_quadratic_is_roundoff():
    A = np.diag(np.arange(1.0, 6.0))
    p = quadratic(A, np.ones(5))
    assert gradient_check(p, np.linspace(-1, 1, 5), h=1e-3) < 1e-10


def test_gradient_check_second_order():
    p = get_problem("Diagonal 1", 4)
    x = np.array([0.3, -0.2, 0.5, 0.1])
    ratio = gradient_check(p, x, h=1e-2) / gradient_check(p, x, h=5e-3)
    assert 3.5 < ratio < 4.5


def test_gradient_check_detects_corruption():
    base = get_problem("Hager", 10)
    bad = type(base)(base.name, base.dim, base.objective,
                     lambda x: base.gradient(x) * 1.01, base.start)
    assert gradient_check(bad, base.start) > 1e-3
