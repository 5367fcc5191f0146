from __future__ import annotations

from fractions import Fraction

import pytest

from ccx.calculus import apply_differential
from ccx.cochain import Cochain, from_names
from ccx.conformal import heisenberg_virasoro, heisenberg_virasoro_extended, trivial_module, virasoro
from ccx.exactpoly import ZERO, parse
from ccx.extension import (
    CocycleCheckFailed,
    ExtensionSpec,
    bracket_term,
    build_extension,
    center_dimension,
    hv_extension_spec,
    proportionality,
    trivializing_shift,
    verify_extension,
    vir_extension_spec,
)

A = heisenberg_virasoro()
V = trivial_module(A)


def structure_by_name(E):
    out = {}
    for i, gi in enumerate(E.generators):
        for j, gj in enumerate(E.generators):
            for k, p in enumerate(E.structure(i, j)):
                if p:
                    out[(gi, gj, E.generators[k])] = p
    return out


def test_bracket_terms_by_hand():
    # c(x, -x) for the three reduced classes
    assert bracket_term(from_names(V, {("L", "L"): "-x1^3+x2^3"}), 0, 0) == parse("-2*x^3")
    assert bracket_term(from_names(V, {("L", "M"): "x2^2"}), 0, 1) == parse("x^2")
    assert bracket_term(from_names(V, {("L", "M"): "x2^2"}), 1, 0) == parse("-x^2")
    assert bracket_term(from_names(V, {("M", "M"): "x1-x2"}), 1, 1) == parse("2*x")


def test_hv_extension_reproduces_catalog():
    spec = hv_extension_spec()
    assert spec.normalization == {"C1": Fraction(-1, 24), "C2": Fraction(1), "C3": Fraction(1, 2)}
    E = build_extension(spec, "HVext")
    assert E.generators == ("L", "M", "C1", "C2", "C3")
    assert structure_by_name(E) == structure_by_name(heisenberg_virasoro_extended())
    report = verify_extension(E, spec.normalization)
    assert report.passed, str(report)
    assert "scale C1 = -1/24" in str(report)


def test_virasoro_extension():
    E = build_extension(vir_extension_spec())
    assert E.structure(0, 0) == (parse("D+2*x"), parse("1/12*x^3"))
    assert verify_extension(E).passed


def test_zero_cocycle_gives_a_split_central_line():
    spec = ExtensionSpec(A, [("Z", Cochain(2, V, {}))])
    E = build_extension(spec)
    assert verify_extension(E).passed
    assert all(not E.structure(i, j)[2] for i in range(3) for j in range(3))
    assert center_dimension(A, [Cochain(2, V, {})]) == 0


def test_a_non_cocycle_breaks_jacobi():
    spec = vir_extension_spec()
    # bypass validation: x^5 on (L, L) is not a reduced cocycle
    spec.cocycles = [("C", from_names(trivial_module(virasoro()), {("L", "L"): "x1^5-x2^5"}))]
    report = verify_extension(build_extension(spec))
    assert not report.passed


def test_spec_validation():
    with pytest.raises(CocycleCheckFailed):
        ExtensionSpec(A, [("C", from_names(V, {("L", "M"): "x2^3"}))])
    with pytest.raises(CocycleCheckFailed):
        ExtensionSpec(A, [("C", from_names(V, {("L", "M", "M"): "x2-x3"}))])
    with pytest.raises(CocycleCheckFailed):
        ExtensionSpec(A, [("M", from_names(V, {("L", "M"): "x2^2"}))])


def test_trivializing_shift_on_a_coboundary():
    # d(b on M) = b*x2 on (L, M); the shift M -> M + f C removes it
    c = apply_differential(from_names(V, {("M",): "3"}))
    shift = trivializing_shift(A, c)
    assert shift is not None
    # the term c(x,-x) equals P_LMM(0,x) f_M
    assert bracket_term(c, 0, 1) - parse("x") * shift["M"] == ZERO
    assert center_dimension(A, [c]) == 0


def test_nontrivial_classes_have_no_shift():
    spec = hv_extension_spec()
    for _, c in spec.cocycles:
        assert trivializing_shift(A, c) is None
    assert center_dimension(A, [c for _, c in spec.cocycles]) == 3


def test_proportionality():
    c = from_names(V, {("M", "M"): "x1-x2"})
    assert proportionality(c, 1, 1, parse("x")) == Fraction(1, 2)
    assert proportionality(c, 1, 1, parse("x^2")) is None
    assert proportionality(c, 0, 0, parse("x")) is None
