"""Point evaluators, component split, field assembly, and the Field container."""

import numpy as np
import pytest

from wentzell import (
    ENGINES,
    ExpDecay,
    Field,
    GaussianBump,
    InvalidPointError,
    NotSmoothError,
    Problem,
    QuadratureSpec,
    TableDatum,
    eval_field,
    eval_u_components,
    eval_u_density_oracle,
    eval_u_nonsmooth,
    eval_u_smooth,
)


def test_initial_time_returns_datum(showcase_problem, showcase_datum):
    for x in (0.0, 0.7, 2.5, 6.0):
        assert eval_u_smooth(showcase_problem, showcase_datum, 0.0, x) == \
            showcase_datum.f(x)


def test_smooth_frozen_values(showcase_problem, showcase_datum):
    # references from an independent 60-digit quadrature of the kernels, frozen
    assert eval_u_smooth(showcase_problem, showcase_datum, 1.0, 0.0) == pytest.approx(
        -0.6009434984464399223794, rel=1e-12)
    assert eval_u_smooth(showcase_problem, showcase_datum, 1.0, 1.0) == pytest.approx(
        0.5088939391840985428724, rel=1e-12)


def test_component_split(showcase_problem, showcase_datum):
    for t, x in [(0.25, 0.0), (1.0, 0.5), (2.0, 3.0)]:
        u1, u2 = eval_u_components(showcase_problem, showcase_datum, t, x)
        assert u1 > 0.0  # transition-density average of a positive datum
        total = eval_u_smooth(showcase_problem, showcase_datum, t, x)
        assert u1 - u2 == pytest.approx(total, abs=1e-13)
    u1, u2 = eval_u_components(showcase_problem, showcase_datum, 0.0, 1.5)
    assert (u1, u2) == (showcase_datum.f(1.5), 0.0)


@pytest.mark.parametrize("mu, nu", [(1.0, -0.5), (0.0, 0.5), (0.5, 0.5)])
def test_nonsmooth_matches_smooth(mu, nu, showcase_datum):
    p = Problem(mu, nu)
    for t in (0.25, 1.0):
        for x in (0.0, 0.5, 2.0):
            a = eval_u_smooth(p, showcase_datum, t, x)
            b = eval_u_nonsmooth(p, showcase_datum, t, x)
            assert b == pytest.approx(a, abs=1e-9)


def test_nonsmooth_boundary_term():
    # a datum with f(0) != 0 exercises the separate wall term of the
    # integration-by-parts form
    p = Problem(0.5, -0.2)
    d = ExpDecay(rate=1.0)
    assert d.f(0.0) == 1.0
    for t, x in [(0.4, 0.0), (1.5, 0.8)]:
        a = eval_u_smooth(p, d, t, x)
        b = eval_u_nonsmooth(p, d, t, x)
        assert b == pytest.approx(a, abs=1e-9)


def test_density_oracle_matches_smooth(showcase_problem, showcase_datum):
    for t, x in [(0.5, 0.0), (1.0, 1.5)]:
        a = eval_u_smooth(showcase_problem, showcase_datum, t, x)
        b = eval_u_density_oracle(showcase_problem, showcase_datum, t, x)
        assert b == pytest.approx(a, abs=1e-8)


def test_table_datum_through_nonsmooth(showcase_problem, showcase_datum):
    xs = np.linspace(0.0, 12.0, 1201)
    td = TableDatum(xs, showcase_datum.f(xs))
    for t, x in [(0.25, 0.0), (1.0, 1.0)]:
        a = eval_u_nonsmooth(showcase_problem, td, t, x)
        b = eval_u_smooth(showcase_problem, showcase_datum, t, x)
        assert a == pytest.approx(b, abs=1e-4)


def test_far_field_is_tiny(showcase_problem, showcase_datum):
    assert abs(eval_u_smooth(showcase_problem, showcase_datum, 0.5, 30.0)) < 1e-12


def test_quadrature_spec_override(showcase_problem, showcase_datum):
    loose = QuadratureSpec(abs_tol=1e-6, rel_tol=1e-6)
    a = eval_u_smooth(showcase_problem, showcase_datum, 1.0, 0.0, spec=loose)
    assert a == pytest.approx(-0.6009434984464399, abs=1e-6)


def test_point_evaluator_errors(showcase_problem, showcase_datum, table_csv):
    with pytest.raises(InvalidPointError):
        eval_u_smooth(showcase_problem, showcase_datum, -0.5, 1.0)
    with pytest.raises(InvalidPointError):
        eval_u_smooth(showcase_problem, showcase_datum, 1.0, -0.1)
    with pytest.raises(InvalidPointError):
        eval_u_nonsmooth(showcase_problem, showcase_datum, 0.0, 1.0)
    with pytest.raises(InvalidPointError):
        eval_u_density_oracle(showcase_problem, showcase_datum, 0.0, 1.0)
    td = TableDatum.from_csv(table_csv)
    with pytest.raises(NotSmoothError):
        eval_u_smooth(showcase_problem, td, 1.0, 0.0)


def test_field_container_validation():
    t = np.array([0.5, 1.0])
    x = np.array([0.0, 1.0, 2.0])
    vals = np.zeros((2, 3))
    f = Field(t_grid=t, x_grid=x, values=vals, engine="closed_smooth",
              problem=Problem(0.0, 0.0), datum=GaussianBump(center=1.0))
    assert f.values.shape == (2, 3)
    with pytest.raises(ValueError):
        Field(t_grid=np.array([0.0, 1.0]), x_grid=x, values=vals,
              engine="closed_smooth", problem=Problem(0.0, 0.0),
              datum=GaussianBump(center=1.0))  # t must be positive
    with pytest.raises(ValueError):
        Field(t_grid=np.array([1.0, 0.5]), x_grid=x, values=vals,
              engine="closed_smooth", problem=Problem(0.0, 0.0),
              datum=GaussianBump(center=1.0))  # t must increase
    with pytest.raises(ValueError):
        Field(t_grid=t, x_grid=x, values=np.zeros((3, 2)),
              engine="closed_smooth", problem=Problem(0.0, 0.0),
              datum=GaussianBump(center=1.0))  # shape mismatch
    with pytest.raises(ValueError):
        Field(t_grid=t, x_grid=x, values=vals, engine="psychic",
              problem=Problem(0.0, 0.0), datum=GaussianBump(center=1.0))
    bad = vals.copy()
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        Field(t_grid=t, x_grid=x, values=bad, engine="closed_smooth",
              problem=Problem(0.0, 0.0), datum=GaussianBump(center=1.0))


def test_field_minimum(showcase_problem, showcase_datum):
    f = eval_field(showcase_problem, showcase_datum, [0.5, 1.0], [0.0, 1.0, 2.0],
                   "closed_smooth")
    val, t_at, x_at = f.minimum()
    assert val == f.values.min()
    assert (t_at, x_at) == (1.0, 0.0)


def test_eval_field_matches_point_evaluator(showcase_problem, showcase_datum):
    t_grid = [0.25, 1.0]
    x_grid = [0.0, 0.5, 2.0]
    f = eval_field(showcase_problem, showcase_datum, t_grid, x_grid, "closed_smooth")
    for i, t in enumerate(t_grid):
        for j, x in enumerate(x_grid):
            assert f.values[i, j] == eval_u_smooth(showcase_problem, showcase_datum, t, x)


def test_eval_field_worker_invariance(showcase_problem, showcase_datum):
    ref = eval_field(showcase_problem, showcase_datum, [0.5, 1.0], [0.0, 1.0, 3.0],
                     "closed_smooth", workers=1)
    par = eval_field(showcase_problem, showcase_datum, [0.5, 1.0], [0.0, 1.0, 3.0],
                     "closed_smooth", workers=4)
    assert np.array_equal(ref.values, par.values)


def test_eval_field_monte_carlo(showcase_problem, showcase_datum):
    kw = dict(mc_samples=20000, mc_seed=5)
    a = eval_field(showcase_problem, showcase_datum, [0.5], [0.0, 1.0], "monte_carlo", **kw)
    b = eval_field(showcase_problem, showcase_datum, [0.5], [0.0, 1.0], "monte_carlo",
                   workers=3, **kw)
    assert a.std_errors is not None and a.std_errors.shape == a.values.shape
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.std_errors, b.std_errors)
    c = eval_field(showcase_problem, showcase_datum, [0.5], [0.0, 1.0], "monte_carlo",
                   mc_samples=20000, mc_seed=6)
    assert not np.array_equal(a.values, c.values)
    # distinct points use distinct sample streams
    assert a.values[0, 0] != a.values[0, 1]


def test_eval_field_pde_close_to_closed(showcase_problem, showcase_datum):
    t_grid = [0.25, 1.0]
    x_grid = [0.0, 0.5, 2.0]
    f_pde = eval_field(showcase_problem, showcase_datum, t_grid, x_grid, "pde")
    f_ref = eval_field(showcase_problem, showcase_datum, t_grid, x_grid, "closed_smooth")
    assert np.max(np.abs(f_pde.values - f_ref.values)) < 5e-3


def test_eval_field_engine_validation(showcase_problem, showcase_datum):
    assert set(ENGINES) == {"closed_smooth", "closed_nonsmooth", "monte_carlo",
                            "pde", "density_oracle"}
    with pytest.raises(ValueError):
        eval_field(showcase_problem, showcase_datum, [1.0], [0.0], "simpson")
    with pytest.raises(ValueError):
        eval_field(showcase_problem, showcase_datum, [], [0.0], "closed_smooth")
    with pytest.raises(ValueError):
        eval_field(showcase_problem, showcase_datum, [0.0, 1.0], [0.0], "closed_smooth")
