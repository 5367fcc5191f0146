from __future__ import annotations

from fractions import Fraction

import pytest

from ccx.cochain import from_names
from ccx.conformal import builtin, free_module, heisenberg_virasoro, scalar_module, trivial_module
from ccx.specfile import (
    CocycleEntry,
    SpecError,
    dump_cocycles,
    dump_spec,
    load_module,
    load_spec,
    parse_cocycles,
    parse_spec,
)

HV_TOML = """
[algebra]
name = "HV"
generators = ["L", "M"]

[[bracket]]
left = "L"
right = "L"
value = "(D+2*x)*L"

[[bracket]]
left = "L"
right = "M"
value = "(D+x)*M"

[[bracket]]
left = "M"
right = "L"
value = "x*M"

[module]
name = "MDeltaAlpha"
partial = "D"
action = { L = "(D+alpha+Delta*x)*v" }

[params]
names = ["alpha", "Delta"]
"""


def test_parse_hand_written_file():
    spec = parse_spec(HV_TOML)
    A = heisenberg_virasoro()
    assert spec.algebra.bracket == A.bracket
    assert spec.module.free
    assert spec.module.action == free_module(A).action
    assert spec.params == ["alpha", "Delta"]


@pytest.mark.parametrize("name", ["HV", "Vir", "HVext"])
def test_algebra_round_trip(name):
    A = builtin(name)
    B = parse_spec(dump_spec(A)).algebra
    assert B.generators == A.generators
    assert B.bracket == A.bracket
    assert B.centrals == A.centrals


@pytest.mark.parametrize("make", [trivial_module, scalar_module, free_module,
                                  lambda A: free_module(A, with_beta=True)])
def test_module_round_trip(make):
    A = heisenberg_virasoro()
    V = make(A)
    W = parse_spec(dump_spec(A, V)).module
    assert W.action == V.action
    assert W.free == V.free
    assert W.is_trivial == V.is_trivial


def test_cocycle_round_trip():
    V = trivial_module(heisenberg_virasoro())
    entries = [CocycleEntry("C1", from_names(V, {("L", "L"): "-x1^3+x2^3"}), Fraction(-1, 24)),
               CocycleEntry("C3", from_names(V, {("M", "M"): "x1-x2"}), Fraction(1, 2))]
    back = parse_cocycles(dump_cocycles(entries), V)
    assert back == entries


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[algebra]\nname='x'\n", "generators"),
        ("[algebra]\ngenerators=['L']\n[[bracket]]\nleft='L'\nright='L'\nvalue='((D+2*x)*L'\n", "bracket L,L"),
        ("[algebra]\ngenerators=['L']\n[[bracket]]\nleft='L'\nright='Q'\nvalue='L'\n", "unknown generator Q"),
        ("[algebra]\ngenerators=['L']\n[[bracket]]\nleft='L'\nvalue='L'\n", "missing right"),
        ("[algebra\n", ""),
        ("[algebra]\ngenerators=['L']\n[module]\naction={ L='v*v' }\n", "not linear in v"),
    ],
)
def test_malformed_files(text, fragment):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert fragment in str(info.value)


def test_load_helpers(tmp_path):
    assert load_spec("builtin:HV").algebra.name == "HV"
    path = tmp_path / "hv.toml"
    path.write_text(HV_TOML, encoding="utf-8")
    spec = load_spec(str(path))
    A = spec.algebra
    assert load_module("trivial", A).is_trivial
    assert load_module("builtin:Ca", A).action == scalar_module(A).action
    assert load_module(str(path), A).free
    empty = tmp_path / "none.toml"
    empty.write_text("[algebra]\ngenerators=['L']\n", encoding="utf-8")
    with pytest.raises(SpecError):
        load_module(str(empty), A)
