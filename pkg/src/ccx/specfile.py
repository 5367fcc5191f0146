"""Reading and writing algebra, module and cocycle descriptions (TOML, UTF-8).

Example::

    [algebra]
    name = "HV"
    generators = ["L", "M"]

    [[bracket]]
    left = "L"
    right = "L"
    value = "(D+2*x)*L"

    [module]
    name = "MDeltaAlpha"
    partial = "D"
    action = { L = "(D+alpha+Delta*x)*v" }

    [params]
    names = ["alpha", "Delta"]

Every polynomial uses the exchange grammar of :mod:`ccx.exactpoly`.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cochain import Cochain, from_names
from .conformal import ConformalAlgebra, ConformalModule, algebra_from_strings, builtin, element_str
from .exactpoly import D, GEN_KIND, ZERO, ParseError, Polynomial, Var, parse

BUILTIN = "builtin:"


class SpecError(ValueError):
    """Malformed spec file; the message carries the location when known."""


@dataclass
class SpecFile:
    algebra: ConformalAlgebra
    module: Optional[ConformalModule] = None
    params: Optional[List[str]] = None


@dataclass
class CocycleEntry:
    central: str
    cochain: Cochain
    scale: Fraction = Fraction(1)


def _poly(text, where: str, symbols=None, params=None) -> Polynomial:
    if not isinstance(text, str):
        raise SpecError(f"{where}: expected a string, got {text!r}")
    try:
        return parse(text, symbols=symbols, params=params)
    except ParseError as e:
        raise SpecError(f"{where}: {e}") from e


def _load_toml(text: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise SpecError(str(e)) from e


def parse_spec(text: str) -> SpecFile:
    data = _load_toml(text)
    params = data.get("params", {}).get("names")
    alg = data.get("algebra")
    if not isinstance(alg, dict) or "generators" not in alg:
        raise SpecError("missing [algebra] section with generators")
    gens = list(alg["generators"])
    brackets = {}
    for n, entry in enumerate(data.get("bracket", []), 1):
        try:
            key = (entry["left"], entry["right"])
            value = entry["value"]
        except KeyError as e:
            raise SpecError(f"bracket #{n}: missing {e.args[0]}") from e
        for g in key:
            if g not in gens:
                raise SpecError(f"bracket #{n}: unknown generator {g}")
        if key in brackets:
            raise SpecError(f"bracket #{n}: duplicate pair {key}")
        _poly(value, f"bracket {key[0]},{key[1]}",
              symbols={g: Var(GEN_KIND, i) for i, g in enumerate(gens)}, params=params)
        brackets[key] = value
    try:
        A = algebra_from_strings(alg.get("name", "A"), gens, brackets, alg.get("centrals", []), params)
    except ParseError as e:
        raise SpecError(str(e)) from e
    module = None
    if "module" in data:
        module = parse_module(data["module"], A, params)
    return SpecFile(A, module, params)


def parse_module(mod: dict, A: ConformalAlgebra, params=None) -> ConformalModule:
    partial_text = str(mod.get("partial", "D"))
    partial = _poly(partial_text, "module partial", params=params)
    free = partial == Polynomial.var(D)
    vsym = {"v": Var(GEN_KIND, 0)}
    action = [ZERO] * A.rank
    for g, text in mod.get("action", {}).items():
        if g not in A.generators:
            raise SpecError(f"module action: unknown generator {g}")
        p = _poly(text, f"module action {g}", symbols=vsym, params=params)
        coeffs = p.coefficients_in([vsym["v"]])
        if any(mono != ((vsym["v"], 1),) for mono in coeffs):
            raise SpecError(f"module action {g}: {text} is not linear in v")
        action[A.index(g)] = coeffs.get(((vsym["v"], 1),), ZERO)
    return ConformalModule(mod.get("name", "V"), A, tuple(action), None if free else partial)


def load_spec(path: str) -> SpecFile:
    """A spec file path or a ``builtin:NAME`` URI."""
    if path.startswith(BUILTIN):
        return SpecFile(builtin(path[len(BUILTIN):]))
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def load_module(ref: str, A: ConformalAlgebra) -> ConformalModule:
    """``trivial``, a catalog module name, or a spec file with a [module] section."""
    if ref.lower() == "trivial":
        return builtin("Trivial", A)
    name = ref[len(BUILTIN):] if ref.startswith(BUILTIN) else ref
    try:
        return builtin(name, A)
    except KeyError:
        pass
    with open(ref, encoding="utf-8") as fh:
        data = _load_toml(fh.read())
    if "module" not in data:
        raise SpecError(f"{ref}: no [module] section")
    return parse_module(data["module"], A, data.get("params", {}).get("names"))


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dump_spec(A: ConformalAlgebra, module: ConformalModule | None = None,
              params: Sequence[str] | None = None) -> str:
    lines = ["[algebra]", f"name = {_q(A.name)}",
             "generators = [" + ", ".join(_q(g) for g in A.generators) + "]"]
    if A.centrals:
        lines.append("centrals = [" + ", ".join(_q(A.generators[c]) for c in sorted(A.centrals)) + "]")
    for i, left in enumerate(A.generators):
        for j, right in enumerate(A.generators):
            elem = A.structure(i, j)
            if any(elem):
                lines += ["", "[[bracket]]", f"left = {_q(left)}", f"right = {_q(right)}",
                          f"value = {_q(element_str(A, elem))}"]
    if module is not None:
        partial = "D" if module.free else str(module.partial)
        lines += ["", "[module]", f"name = {_q(module.name)}", f"partial = {_q(partial)}"]
        acts = [f"{g} = {_q('(' + str(p) + ')*v')}" for g, p in zip(A.generators, module.action) if p]
        lines.append("action = { " + ", ".join(acts) + " }")
    if params:
        lines += ["", "[params]", "names = [" + ", ".join(_q(p) for p in params) + "]"]
    return "\n".join(lines) + "\n"


def parse_cocycles(text: str, module: ConformalModule) -> List[CocycleEntry]:
    """``[[cocycle]]`` tables with ``central``, optional ``scale`` and ``values``.

    ``values`` is a list of ``{ args = ["L", "M"], value = "x2^2" }``.
    """
    data = _load_toml(text)
    out = []
    for n, entry in enumerate(data.get("cocycle", []), 1):
        if "central" not in entry:
            raise SpecError(f"cocycle #{n}: missing central")
        values = {}
        for v in entry.get("values", []):
            values[tuple(v["args"])] = _poly(v["value"], f"cocycle {entry['central']}")
        arity = len(next(iter(values))) if values else 2
        scale = Fraction(str(entry.get("scale", 1)))
        out.append(CocycleEntry(entry["central"], from_names(module, values, arity=arity), scale))
    return out


def dump_cocycles(entries: Sequence[CocycleEntry]) -> str:
    lines = []
    for e in entries:
        lines += ["[[cocycle]]", f"central = {_q(e.central)}", f"scale = {_q(str(e.scale))}", "values = ["]
        for args, value in e.cochain.to_pairs():
            lines.append("  { args = [" + ", ".join(_q(a) for a in args) + f"], value = {_q(value)} }},")
        lines += ["]", ""]
    return "\n".join(lines)
