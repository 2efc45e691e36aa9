import random

import pytest
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_smith

from inertia.exceptions import CharacterError, LevelError
from inertia.localfield import make_base_field
from inertia.powerclasses import power_classes
from inertia.quadratics import quadratic_inventory
from inertia.smith import invariant_factors, smith_normal_form
from inertia.steps import error_count
from inertia.tables import Q4_QUADRATIC_TABLES, Q4_UNITS, Q9_QUADRATIC_TABLES, Q9_UNITS, table_elements
from inertia.unitgrp import (
    con_group,
    dlog,
    dlog_in_basis,
    norm_subgroup,
    projection_kernel,
    quotient_with_dlog,
    unit_quotient,
)
from inertia.verify import check_published_bases, check_unit_groups, primary_parts

Q9 = make_base_field(3, 2)
Q4 = make_base_field(2, 2)
Q25 = make_base_field(5, 2)

RELATIONS = [
    [[12, 6, 4], [3, 9, 6], [2, 16, 14]],
    [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
    [[4, 0], [0, 6], [2, 2]],
]


def _random_unit(K, rng):
    while True:
        x = K.random_element(rng, digits=12)
        if x.is_unit():
            return x


@pytest.mark.parametrize("rows", RELATIONS)
def test_invariant_factors_agree_with_sympy(rows):
    want = [abs(int(d)) for d in sympy_smith(Matrix(rows), domain=ZZ).diagonal() if abs(d) != 1]
    assert sorted(invariant_factors(rows, len(rows[0]))) == sorted(want)


@pytest.mark.parametrize("rows", RELATIONS)
def test_smith_transform_describes_the_row_lattice(rows):
    n = len(rows[0])
    snf = smith_normal_form(rows, n)
    for row in rows:
        image = [sum(row[j] * snf.V[j][i] for j in range(n)) for i in range(n)]
        assert all((x == 0) if d == 0 else x % d == 0 for x, d in zip(image, snf.diagonal))
    product = [[sum(snf.V[i][k] * snf.V_inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert product == [[int(i == j) for j in range(n)] for i in range(n)]


def test_primary_parts():
    assert primary_parts([24, 3]) == [3, 3, 8]
    assert primary_parts([6, 2]) == [2, 2, 3]
    assert primary_parts([]) == []


@pytest.mark.parametrize("F, table", [(Q9, Q9_UNITS), (Q4, Q4_UNITS)], ids=["Q9", "Q4"])
def test_unit_quotients_match_the_published_levels(F, table):
    for f, invariants in table.levels.items():
        group, ctx = unit_quotient(F, f)
        assert primary_parts(ctx.invariants) == primary_parts(invariants)
        assert group.order == (F.q - 1) * F.q ** (f - 1)


def test_dlog_is_a_homomorphism():
    _, ctx = unit_quotient(Q9, 2)
    x, y = 1 + Q9.gen, Q9(4)
    assert ctx.dlog(x * y) == ctx.add(ctx.dlog(x), ctx.dlog(y))
    assert ctx.order_of(ctx.dlog(Q9(-1))) == 2
    assert ctx.dlog(Q9(1)) == ctx.reduce([0] * len(ctx.invariants))


def test_dlog_of_representatives():
    _, ctx = unit_quotient(Q4, 3)
    for vec in ([1, 0, 0], [0, 1, 1], [2, 1, 0]):
        vec = vec[: len(ctx.invariants)]
        assert ctx.dlog(ctx.element(vec)) == ctx.reduce(vec)


LEVELS = [(Q9, 2), (Q9, 3), (Q4, 3), (Q4, 4), (Q25, 2)]


@pytest.mark.parametrize("F, f", LEVELS, ids=lambda v: getattr(v, "name", str(v)))
def test_random_units_are_rebuilt_from_their_dlog(F, f):
    rng = random.Random(100 * F.q + f)
    _, ctx = unit_quotient(F, f)
    for _ in range(20):
        u = _random_unit(F, rng)
        d = ctx.element(dlog(ctx, u)) / u - 1
        assert d.is_zero() or d.valuation() >= f


@pytest.mark.parametrize("F, f", LEVELS, ids=lambda v: getattr(v, "name", str(v)))
def test_dlog_is_a_homomorphism_on_random_pairs(F, f):
    rng = random.Random(200 * F.q + f)
    _, ctx = unit_quotient(F, f)
    for _ in range(20):
        x, y = _random_unit(F, rng), _random_unit(F, rng)
        assert ctx.dlog(x * y) == ctx.add(ctx.dlog(x), ctx.dlog(y))
        assert ctx.dlog(x.inverse()) == ctx.scale(-1, ctx.dlog(x))


def test_level_out_of_range():
    with pytest.raises(LevelError):
        unit_quotient(Q9, 100)


def test_quotient_by_the_norm_subgroup():
    K3 = quadratic_inventory(Q9)[2].field
    _, ctx = unit_quotient(K3, 2)
    group, q = quotient_with_dlog(ctx, norm_subgroup(K3, 2, Q9))
    assert primary_parts(group.invariants) == primary_parts([30, 3])
    rng = random.Random(3)
    for _ in range(5):
        u = _random_unit(K3, rng)
        assert not any(q.dlog(K3(u.norm(Q9))))
        assert q.dlog(q.element(q.dlog(u))) == q.dlog(u)
    with pytest.raises(LevelError):
        quotient_with_dlog(ctx, [(1,)])


@pytest.mark.parametrize("index, invariants", [(1, [18, 3, 3]), (2, [18, 9])])
def test_norm_quotients_of_the_ramified_quadratics(index, invariants):
    K = quadratic_inventory(Q9)[index - 1].field
    assert primary_parts(con_group(K, 4, Q9).invariants) == primary_parts(invariants)


def test_projection_kernel_between_levels():
    K3 = quadratic_inventory(Q9)[2].field
    ctx = con_group(K3, 2, Q9)
    group, _ = quotient_with_dlog(ctx, projection_kernel(ctx, 1))
    assert group.order == 10
    assert ctx.group.order // group.order == 9
    assert projection_kernel(ctx, 2) == []
    with pytest.raises(LevelError):
        projection_kernel(ctx, 3)


@pytest.mark.slow
def test_projection_kernel_holds_the_published_element():
    Q = quadratic_inventory(Q4)[0]
    ctx = con_group(Q.field, 6, Q4)
    g1, _, g3 = table_elements(Q4_QUADRATIC_TABLES[1], Q.field, Q.z)
    _, q = quotient_with_dlog(ctx, projection_kernel(ctx, 3))
    assert not any(q.dlog(g1 ** 2 / g3))


def test_unit_coordinates_on_the_published_generators():
    Q = quadratic_inventory(Q9)[0]
    table = Q9_QUADRATIC_TABLES[1]
    ctx = con_group(Q.field, 4, Q9)
    generators = table_elements(table, Q.field, Q.z)
    orders = table.levels[4]
    assert dlog_in_basis(ctx, Q.field(1 + Q9.gen), generators, orders) == (9, 0, 0)
    assert dlog_in_basis(ctx, generators[1], generators, orders) == (0, 1, 0)
    assert dlog_in_basis(ctx, Q.field.one(), generators, orders) == (0, 0, 0)
    with pytest.raises(CharacterError):
        dlog_in_basis(ctx, generators[0], [generators[0], generators[0], generators[2]], orders)


def test_q9_published_coordinates():
    assert error_count(check_published_bases(Q9)) == 0


@pytest.mark.slow
def test_q4_published_coordinates():
    assert error_count(check_published_bases(Q4)) == 0


def test_square_classes():
    assert power_classes(Q9, 2).dim == 2
    assert power_classes(Q4, 2).dim == 4
    assert len(power_classes(Q4, 2).reps()) == 16


@pytest.mark.parametrize("F", [Q9, Q4, Q25], ids=["Q9", "Q4", "Q25"])
def test_square_class_representatives_are_pairwise_inequivalent(F):
    space = power_classes(F, 2)
    reps = space.reps()
    assert len(reps) == 2 ** space.dim
    for i, x in enumerate(reps):
        for y in reps[i + 1:]:
            assert not space.is_power(x / y)
    rng = random.Random(11)
    for _ in range(10):
        u, x = _random_unit(F, rng), rng.choice(reps)
        assert space.coords(x * u * u) == space.coords(x)


def test_q9_quadratic_unit_tables():
    assert error_count(check_unit_groups(Q9)) == 0


@pytest.mark.slow
def test_q4_quadratic_unit_tables():
    assert error_count(check_unit_groups(Q4)) == 0
