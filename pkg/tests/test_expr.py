import math
from fractions import Fraction

import numpy as np
import pytest

from zetazeros.config import EvalConfig
from zetazeros.errors import ArityError, ExprSyntaxError, PoleProximity, UnknownFamily
from zetazeros.expr import (
    Add,
    Const,
    DirichletPoly,
    FamilyAtom,
    Mul,
    Neg,
    Pow,
    ZetaAtom,
    eval_expr,
    parse_expr,
    pole_set,
    to_text,
)


def test_parse_square_difference():
    e = parse_expr("zeta(s)^2 - zeta(2*s)")
    assert e == Add((
        Pow(ZetaAtom("zeta", Fraction(1), Fraction(0)), 2),
        Neg(ZetaAtom("zeta", Fraction(2), Fraction(0))),
    ))


def test_parse_taylor_combination():
    e = parse_expr("xi(s+1/2) - xi(s-1/2)")
    assert e == Add((
        ZetaAtom("xi", Fraction(1), Fraction(1, 2)),
        Neg(ZetaAtom("xi", Fraction(1), Fraction(-1, 2))),
    ))


def test_parse_hurwitz_plus_const():
    e = parse_expr("hurwitz(s, 1/4) + 3")
    assert e == Add((
        ZetaAtom("hurwitz", Fraction(1), Fraction(0), a=Fraction(1, 4)),
        Const(3 + 0j),
    ))


@pytest.mark.parametrize("text", [
    "zeta(s)^2 - zeta(2*s)",
    "xi(s+1/2) - xi(s-1/2)",
    "hurwitz(s, 1/4) + 3",
    "dirichlet[(1,0),(-1,0.6931471805599453)]",
    "barnes(2, 1/3) * sphere(2) + ezd(4)",
    "symmat(3, Ln*, +1, -1)",
    "2*zeta(2*s)",
    "-zeta(s) + 1",
    "(zeta(s) + 1)^3 * zeta(s-2)",
])
def test_round_trip(text):
    e = parse_expr(text)
    assert parse_expr(to_text(e)) == e


def test_syntax_errors_carry_position():
    with pytest.raises(ExprSyntaxError) as exc:
        parse_expr("zeta(s")
    assert exc.value.position == 6
    with pytest.raises(ExprSyntaxError):
        parse_expr("zeta(s) +")
    with pytest.raises(ExprSyntaxError):
        parse_expr("zeta(2)")      # affine must involve s
    with pytest.raises(ExprSyntaxError):
        parse_expr("zeta(s)^0")


def test_unknown_and_arity_errors():
    with pytest.raises(UnknownFamily):
        parse_expr("frobenius(s)")
    with pytest.raises(ArityError):
        parse_expr("hurwitz(s, 5/4)")     # shift outside (0, 1]
    with pytest.raises(ArityError):
        parse_expr("barnes(2, -1/2)")
    with pytest.raises(ArityError):
        parse_expr("symmat(3, Lx, +1, +1)")


def test_pole_sets():
    locs = pole_set(parse_expr("zeta(s) + zeta(2*s)")).locations()
    assert sorted(z.real for z in locs) == [0.5, 1.0]
    locs = pole_set(parse_expr("barnes(2, 0.3)")).locations()
    assert sorted(z.real for z in locs) == [1.0, 2.0]
    assert len(pole_set(parse_expr("dirichlet[(1,0),(-1,0.693147)]"))) == 0
    locs = pole_set(parse_expr("sphere(2)")).locations()
    assert sorted(z.real for z in locs) == [0.5, 1.0]
    locs = pole_set(parse_expr("xi(s+1/2)")).locations()
    assert sorted(z.real for z in locs) == [-0.5, 0.5]
    locs = pole_set(parse_expr("symmat(3, Ln, +1, +1)")).locations()
    assert sorted(z.real for z in locs) == [1.0, 1.5, 2.0]


def test_eval_examples():
    assert abs(eval_expr(parse_expr("2*zeta(2*s)"), 1).z - math.pi**2 / 3) < 1e-10
    assert abs(eval_expr(parse_expr("ezd(2)"), 2).z - math.pi**4 / 120) < 1e-10
    v = eval_expr(parse_expr("zeta(s)^2 - zeta(s)^2"), 1.7 + 3j)
    assert abs(v.z) <= 2 * v.abs_err + 1e-300


def test_eval_homomorphism():
    rng = np.random.default_rng(9)
    a = parse_expr("zeta(s)^2")
    b = parse_expr("zeta(2*s-1)")
    add = parse_expr("zeta(s)^2 + zeta(2*s-1)")
    mul = parse_expr("zeta(s)^2 * zeta(2*s-1)")
    for _ in range(6):
        s = complex(rng.uniform(1.2, 3), rng.uniform(-20, 20))
        va, vb = eval_expr(a, s), eval_expr(b, s)
        vadd, vmul = eval_expr(add, s), eval_expr(mul, s)
        assert abs(vadd.z - (va.z + vb.z)) <= vadd.abs_err + va.abs_err + vb.abs_err + 1e-14
        assert abs(vmul.z - va.z * vb.z) <= (
            vmul.abs_err + abs(va.z) * vb.abs_err + abs(vb.z) * va.abs_err + 1e-14
        )


def test_eval_conjugation():
    e = parse_expr("zeta(s)^2 - zeta(2*s) + dirichlet[(1,0),(-2,0.25)]")
    s = 0.8 + 11j
    assert eval_expr(e, s.conjugate()).z == eval_expr(e, s).z.conjugate()


def test_pole_guard_scaling():
    cfg = EvalConfig()
    guard = cfg.pole_guard
    for text, pole in [("zeta(s) + zeta(2*s)", 0.5),
                       ("barnes(2, 0.3)", 2.0),
                       ("sphere(2)", 1.0),
                       ("ezd(3)", 1 / 3),
                       ("hurwitz(2*s-1, 1/4)", 1.0),
                       ("xi(s)", 0.0),
                       ("symmat(3, Ln, +1, +1)", 1.5)]:
        e = parse_expr(text)
        eval_expr(e, pole + 10 * guard, cfg)          # must succeed
        with pytest.raises(PoleProximity):
            eval_expr(e, pole + guard / 10, cfg)


def test_dirichlet_poly_eval():
    e = parse_expr("dirichlet[(1,0),(-1,0.6931471805599453)]")
    v = eval_expr(e, 3.0)
    assert abs(v.z - (1 - 2.0**-3)) < 1e-14
