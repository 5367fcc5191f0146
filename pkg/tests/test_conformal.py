from __future__ import annotations

from fractions import Fraction

import pytest

from ccx.conformal import (
    ConformalAlgebra,
    ConformalModule,
    NotInCatalog,
    algebra_from_strings,
    builtin,
    catalog_names,
    check_algebra,
    check_jacobi,
    check_module,
    check_sesquilinearity,
    check_skew_symmetry,
    free_module,
    heisenberg_virasoro,
    heisenberg_virasoro_extended,
    jacobi_residual,
    scalar_module,
    skew_residual,
    virasoro,
)
from ccx.exactpoly import ZERO, Polynomial, parse

HV_TEXT = {("L", "L"): "(D+2*x)*L", ("L", "M"): "(D+x)*M", ("M", "L"): "x*M"}
HVEXT_TEXT = {
    ("L", "L"): "(D+2*x)*L + 1/12*x^3*C1",
    ("L", "M"): "(D+x)*M + x^2*C2",
    ("M", "L"): "x*M - x^2*C2",
    ("M", "M"): "x*C3",
}


def hv_with(**changes) -> ConformalAlgebra:
    text = dict(HV_TEXT)
    for key, value in changes.items():
        text[tuple(key)] = value
    return algebra_from_strings("HVmut", ["L", "M"], text)


def mutate(A: ConformalAlgebra, i: int, j: int, k: int, mono) -> ConformalAlgebra:
    table = [list(row) for row in A.bracket]
    elem = list(table[i][j])
    elem[k] = elem[k] + Polynomial({mono: 1})
    table[i][j] = tuple(elem)
    return ConformalAlgebra(A.name + "*", A.generators, tuple(tuple(r) for r in table), A.centrals)


@pytest.mark.parametrize("name", ["HV", "Vir", "HVext"])
def test_catalog_algebras_pass(name):
    for report in check_algebra(builtin(name)):
        assert report.passed, str(report)


def test_catalog_contents():
    A = builtin("HV")
    assert A.generators == ("L", "M")
    assert A.structure(0, 0) == (parse("D+2*x"), ZERO)
    E = builtin("HVext")
    assert E.generators == ("L", "M", "C1", "C2", "C3")
    assert E.structure(0, 0)[2] == parse("1/12*x^3")
    assert E.structure(1, 0) == (ZERO, parse("x"), ZERO, parse("-x^2"), ZERO)
    assert not any(builtin("Trivial").action)
    assert set(catalog_names()) >= {"HV", "Vir", "HVext", "Trivial", "Ca", "MDeltaAlpha"}
    with pytest.raises(NotInCatalog):
        builtin("Witt")


def test_sesquilinear_extension():
    A = heisenberg_virasoro()
    L, M = A.generator(0), A.generator(1)
    dL = (parse("D"), ZERO)
    # [D L _x L] = -x (D + 2x) L
    assert A.lam_bracket(dL, L) == (parse("-x*(D+2*x)"), ZERO)
    # [L _x D M] = (D + x)(D + x) M
    dM = (ZERO, parse("D"))
    assert A.lam_bracket(L, dM) == (ZERO, parse("(D+x)^2"))
    assert check_sesquilinearity(A).passed


def test_skew_symmetry_of_hv_pair():
    A = heisenberg_virasoro()
    assert skew_residual(A, 1, 0) == (ZERO, ZERO)
    assert check_skew_symmetry(virasoro()).passed


def test_skew_mutation_residual():
    # [M_x L] + [L_{-x-D} M] = 2xM + (D - x - D)M = xM
    A = hv_with(ML="2*x*M")
    assert skew_residual(A, 1, 0) == (ZERO, parse("x"))
    report = check_skew_symmetry(A)
    assert not report.passed
    assert ("(M,L)", "x*M") in report.failures


def test_jacobi_mutation_residual():
    # hand expansion on (M,M,M) with [M_x M] = xM:
    # [M_x [M_y M]] = yxM, [M_y [M_x M]] = xyM, [[M_x M]_{x+y} M] = x(x+y)M
    A = hv_with(MM="x*M")
    assert jacobi_residual(A, 1, 1, 1) == (ZERO, parse("-x^2-x*y"))
    report = check_jacobi(A)
    assert not report.passed
    assert report.witness is not None


def test_hvext_sign_flip_is_caught():
    text = dict(HVEXT_TEXT)
    text[("M", "L")] = "x*M + x^2*C2"
    A = algebra_from_strings("HVbad", ["L", "M", "C1", "C2", "C3"], text, centrals=["C1", "C2", "C3"])
    report = check_skew_symmetry(A)
    assert not report.passed
    # residual 2x^2 C2 on (M,L); central coefficients lose their D-dependence
    assert skew_residual(A, 1, 0)[3] == parse("2*x^2")
    assert ("(M,L)", "2*x^2*C2") in report.failures


def _stored_coefficients(A):
    for i in range(A.rank):
        for j in range(A.rank):
            for k, p in enumerate(A.structure(i, j)):
                for mono, _ in p.items():
                    yield i, j, k, mono


def test_every_single_coefficient_mutation_is_caught():
    A = heisenberg_virasoro()
    cases = list(_stored_coefficients(A))
    assert len(cases) == 5
    for i, j, k, mono in cases:
        B = mutate(A, i, j, k, mono)
        assert not all(r.passed for r in check_algebra(B)), (i, j, k, mono)


def test_modules_pass():
    A = heisenberg_virasoro()
    for V in (builtin("Trivial", A), scalar_module(A), free_module(A), free_module(A, with_beta=True)):
        report = check_module(A, V)
        assert report.passed, str(report)
    Vir = virasoro()
    assert check_module(Vir, free_module(Vir)).passed
    with pytest.raises(ValueError):
        free_module(Vir, with_beta=True)


def test_bad_modules_fail():
    A = heisenberg_virasoro()
    # M acting by a multiple of x is not compatible with [L_x M] = (D+x)M
    bad = ConformalModule("bad", A, (parse("D+alpha+Delta*x"), parse("x")))
    assert not check_module(A, bad).passed
    # a scalar module on which L acts nontrivially with the wrong weight
    line = ConformalModule("line", A, (parse("1"), ZERO), partial=parse("a"))
    assert not check_module(A, line).passed
    with pytest.raises(ValueError):
        check_module(virasoro(), free_module(A))


def test_validation():
    with pytest.raises(ValueError):
        ConformalAlgebra("bad", ("L", "L"), ((( ZERO, ZERO),) * 2,) * 2)
    with pytest.raises(ValueError):
        algebra_from_strings("bad", ["L"], {("L", "L"): "(D+x1)*L"})
    with pytest.raises(ValueError):
        algebra_from_strings("bad", ["L", "C"], {("L", "C"): "x*L"}, centrals=["C"])
    with pytest.raises(ValueError):
        algebra_from_strings("bad", ["L"], {("L", "L"): "L*L"})


def test_central_terms_drop_d():
    E = heisenberg_virasoro_extended()
    C2 = E.index("C2")
    elem = [ZERO] * E.rank
    elem[C2] = parse("D*x+x^2")
    assert E.normalize(elem)[C2] == parse("x^2")
    assert Fraction(1, 12) == E.structure(0, 0)[2].coefficient(parse("x^3").sorted_terms()[0][0])
