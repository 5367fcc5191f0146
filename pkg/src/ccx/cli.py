"""``ccx``: command-line front end.

Exit codes: 0 all checks pass, 1 some check fails, 2 parse or usage error,
3 results unstable under the degree bound (raise ``--degree-bound``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence

from . import cohomology as coh
from .calculus import TAU, TAU2, TAU3, assemble_matrix, homotopy_residual
from .cochain import basis_of_slice, blocks, min_degree
from .conformal import ConformalAlgebra, NotInCatalog, builtin, check_algebra, check_module
from .extension import (
    CocycleCheckFailed,
    ExtensionSpec,
    build_extension,
    hv_extension_spec,
    verify_extension,
)
from .specfile import SpecError, dump_spec, load_module, load_spec, parse_cocycles

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_UNSTABLE = 0, 1, 2, 3

VANISHING_MAX_Q, VANISHING_DEGREE = 4, 6


def _emit(args, payload: dict, table: List[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(table))


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Ordered map, optionally over a process pool; output order never depends on ``jobs``."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --- check -------------------------------------------------------------------------

def cmd_check(args) -> int:
    spec = load_spec(args.spec)
    reports = check_algebra(spec.algebra)
    modules = []
    if spec.module is not None:
        modules.append(spec.module)
    if args.coeff:
        modules.append(load_module(args.coeff, spec.algebra))
    reports += [check_module(spec.algebra, V) for V in modules]
    ok = all(r.passed for r in reports)
    payload = {
        "algebra": spec.algebra.name,
        "passed": ok,
        "checks": [
            {"check": r.check, "passed": r.passed, "checked": r.checked,
             "failures": [list(f) for f in r.failures]}
            for r in reports
        ],
    }
    _emit(args, payload, [f"{spec.algebra.name}: {'PASS' if ok else 'FAIL'}"] + [f"  {r}" for r in reports])
    return EXIT_OK if ok else EXIT_FAIL


# --- cohomology ----------------------------------------------------------------------

def _basic_task(item):
    name, q, verify = item
    dim, profiles = coh.basic_dim(q, builtin(name), verify_bound=verify)
    return dim, [(p.slice, p.dim, p.rank_out, p.rank_in) for p in profiles]


def _direct_task(item):
    name, q, bound = item
    return coh.reduced_dim_direct(q, bound, builtin(name))


def _algebra_key(A: ConformalAlgebra) -> Optional[str]:
    """Catalog name when ``A`` is a catalog algebra (workers rebuild it by name)."""
    try:
        B = builtin(A.name)
    except NotInCatalog:
        return None
    same = B.generators == A.generators and all(
        A.structure(i, j) == B.structure(i, j) for i in range(A.rank) for j in range(A.rank))
    return A.name if same else None


def _trivial_cohomology(args, A: ConformalAlgebra) -> int:
    max_q = args.max_q
    bound = args.degree_bound if args.degree_bound is not None else max_q + 2
    key = _algebra_key(A)
    jobs = args.jobs if key is not None else 1
    if key is None:
        coh._ENGINES[A.name] = coh.TrivialComplex(A)
        key = A.name
    want_basic = args.basic or not args.reduced
    want_reduced = args.reduced or not args.basic
    payload = {"algebra": A.name, "coefficients": "trivial", "degree_bound": bound}
    table = []
    qs = list(range(max_q + 1))
    basic_q = list(range(max_q + 2)) if want_reduced else qs
    verify = bound if args.verify else None
    basics = _map(_basic_task, [(key, q, verify) for q in basic_q], jobs)
    basic = {q: basics[q][0] for q in basic_q}
    if want_basic:
        table.append("q  dim H~^q")
        rows = []
        for q in qs:
            table.append(f"{q:<2} {basic[q]}")
            rows.append({"q": q, "dim": basic[q],
                         "profiles": [{"slice": s, "dim": d, "rank_out": o, "rank_in": i}
                                      for s, d, o, i in basics[q][1]]})
        payload["basic"] = rows
    if want_reduced:
        les = {0: coh.reduced_dim_les(0, A)}
        les.update({q: basic[q] + basic[q + 1] for q in qs if q >= 1})
        direct_q = [q for q in qs if q + 2 <= bound]
        direct = dict(zip(direct_q, _map(_direct_task, [(key, q, bound) for q in direct_q], jobs)))
        table.append("q  dim H^q  direct")
        rows = []
        for q in qs:
            d = direct.get(q)
            table.append(f"{q:<2} {les[q]:<6} {'-' if d is None else d}")
            rows.append({"q": q, "dim": les[q], "direct": d})
        payload["reduced"] = rows
        if any(direct[q] != les[q] for q in direct):
            _emit(args, payload, table)
            print("error: direct and long-exact-sequence values disagree", file=sys.stderr)
            return EXIT_FAIL
    if args.dump_matrices:
        _dump_matrices(args.dump_matrices, A, qs)
    _emit(args, payload, table)
    return EXIT_OK


def _dump_matrices(directory: str, A: ConformalAlgebra, qs: Sequence[int]) -> None:
    os.makedirs(directory, exist_ok=True)
    V = builtin("Trivial", A)
    for q in qs:
        for b in blocks(q, A.rank):
            if min_degree(b) > b[0]:
                continue
            src = basis_of_slice(q, b, b[0], V)
            if not src.dim:
                continue
            M = assemble_matrix(src)
            name = "d_" + src.label.replace(" ", "_").replace(",", "-") + ".json"
            with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
                json.dump(M.to_json(), fh, indent=1, sort_keys=True)


def _reproduce_paper(args) -> int:
    """Every golden value for HV; exit 0 iff all match."""
    A = builtin("HV")
    lines, ok = [], True

    def record(label, good, detail=""):
        nonlocal ok
        ok = ok and good
        lines.append(f"{'PASS' if good else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))

    for q, want in coh.GOLDEN_BASIC.items():
        got = coh.basic_dim(q, A)[0]
        record(f"dim H~^{q} = {want}", got == want, f"got {got}")
    for q, want in coh.GOLDEN_REDUCED.items():
        got = coh.reduced_dim_les(q, A)
        record(f"dim H^{q} = {want}", got == want, f"got {got}")
        if q <= 4:
            d = coh.reduced_dim_direct(q, q + 2, A)
            record(f"dim H^{q} direct", d == want, f"got {d}")
    for q in (3, 4):
        certs: List[coh.Certificate] = []
        reps = coh.representatives(q, coh.BASIC, A, certs)
        record(f"named basic {q}-cocycles", all(c.passed for c in certs), ", ".join(n for n, _ in reps))
    certs = []
    reps = coh.representatives(2, coh.REDUCED, A, certs)
    record("reduced 2-classes", all(c.passed for c in certs), ", ".join(n for n, _ in reps))
    matches = coh.match_stated_reduced(A)
    record("stated reduced polynomials", all(matches.values()),
           ", ".join(f"{k}<-{'/'.join(v) or '?'}" for k, v in matches.items()))
    for m in ("Ca", "MDeltaAlpha"):
        r = coh.vanishing_certificate(builtin(m, A), VANISHING_MAX_Q, VANISHING_DEGREE)
        record(f"vanishing with {m} coefficients", r.passed, r.side_condition)
    spec = hv_extension_spec()
    E = build_extension(spec, "HVext")
    ref = builtin("HVext")
    same = all(E.structure(i, j) == ref.structure(i, j) for i in range(ref.rank) for j in range(ref.rank))
    record("universal central extension", verify_extension(E).passed and same,
           ", ".join(f"{k}: scale {v}" for k, v in spec.normalization.items()))
    _emit(args, {"passed": ok, "lines": lines}, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_cohomology(args) -> int:
    if args.reproduce_paper:
        return _reproduce_paper(args)
    spec = load_spec(args.spec)
    A = spec.algebra
    bad = [r for r in check_algebra(A) if not r.passed]
    if bad:
        print(f"error: {A.name} fails {bad[0]}", file=sys.stderr)
        return EXIT_FAIL
    coeff = args.coeff or "trivial"
    V = load_module(coeff, A)
    if V.is_trivial:
        return _trivial_cohomology(args, A)
    if not check_module(A, V).passed:
        print(f"error: {V.name} is not a module over {A.name}", file=sys.stderr)
        return EXIT_FAIL
    max_q = args.max_q if args.max_q_given else VANISHING_MAX_Q
    bound = args.degree_bound if args.degree_bound is not None else (
        max(VANISHING_DEGREE, max_q + 2) if not args.max_q_given else max_q + 2)
    r = coh.vanishing_certificate(V, max_q, bound)
    payload = {"algebra": A.name, "coefficients": V.name, "passed": r.passed, "refused": r.refused,
               "side_condition": r.side_condition, "checked": r.checked, "max_q": max_q,
               "degree_bound": bound, "conclusion": r.conclusion, "failures": r.failures}
    _emit(args, payload, [str(r)])
    return EXIT_OK if r.passed else EXIT_FAIL


# --- homotopy ----------------------------------------------------------------------

_DEFAULT_COEFF = {TAU: "trivial", TAU2: "Ca", TAU3: "MDeltaAlpha"}


def cmd_homotopy(args) -> int:
    spec = load_spec(args.spec)
    A = spec.algebra
    V = load_module(args.coeff or _DEFAULT_COEFF[args.op], A)
    max_q = args.max_q if args.max_q_given else (5 if args.op == TAU else 4)
    bound = args.degree_bound if args.degree_bound is not None else max_q
    powers = (0, 1) if V.free else (0,)
    checked, failures = 0, []
    for q in range(max_q + 1):
        for b in blocks(q, A.rank):
            for m in range(min_degree(b), bound + 1):
                for j in powers:
                    s = basis_of_slice(q, b, m, V, j)
                    for gamma in s.cochains():
                        checked += 1
                        if homotopy_residual(gamma, args.op):
                            failures.append(s.label)
    modulus = {TAU: "exact", TAU2: "mod (a+sum l)", TAU3: "mod (D+sum l)"}[args.op]
    ok = not failures
    payload = {"op": args.op, "coefficients": V.name, "passed": ok, "checked": checked,
               "modulus": modulus, "failures": sorted(set(failures))}
    line = f"{args.op} on {A.name} with {V.name} coefficients: {'PASS' if ok else 'FAIL'} {modulus}, {checked} basis cochains"
    _emit(args, payload, [line] + [f"  failing slice {f}" for f in sorted(set(failures))])
    return EXIT_OK if ok else EXIT_FAIL


# --- extend ----------------------------------------------------------------------------

def cmd_extend(args) -> int:
    spec = load_spec(args.spec)
    A = spec.algebra
    if args.cocycles:
        with open(args.cocycles, encoding="utf-8") as fh:
            entries = parse_cocycles(fh.read(), builtin("Trivial", A))
        ext = ExtensionSpec(A, [(e.central, e.cochain) for e in entries],
                            {e.central: e.scale for e in entries})
    elif A.name == "HV" and _algebra_key(A) == "HV":
        ext = hv_extension_spec()
    else:
        print("error: --cocycles is required for algebras other than HV", file=sys.stderr)
        return EXIT_PARSE
    E = build_extension(ext, args.name or f"{A.name}ext")
    report = verify_extension(E, ext.normalization)
    print(dump_spec(E), end="")
    print("\n".join("# " + line for line in str(report).splitlines()))
    return EXIT_OK if report.passed else EXIT_FAIL


# --- entry point -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ccx", description="Cohomology of Lie conformal algebras, exactly.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec_required=True):
        if spec_required:
            sp.add_argument("spec", help="spec file or builtin:NAME (HV, Vir, HVext)")
        sp.add_argument("--coeff", help="trivial, Ca, MDeltaAlpha, MDeltaAlphaBeta or a spec file with [module]")
        sp.add_argument("--max-q", type=int, default=None)
        sp.add_argument("--degree-bound", type=int, default=None)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("check", help="verify algebra and module axioms")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("cohomology", help="basic/reduced cohomology or vanishing certificate")
    sp.add_argument("spec", nargs="?", default="builtin:HV")
    common(sp, spec_required=False)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--basic", action="store_true")
    grp.add_argument("--reduced", action="store_true")
    sp.add_argument("--dump-matrices", metavar="DIR")
    sp.add_argument("--verify", action="store_true", help="also check every off-diagonal slice up to the bound")
    sp.add_argument("--reproduce-paper", action="store_true", help="compare every HV result with the golden table")
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("homotopy", help="verify a contracting homotopy identity on slice bases")
    common(sp)
    sp.add_argument("--op", choices=[TAU, TAU2, TAU3], default=TAU)
    sp.set_defaults(func=cmd_homotopy)

    sp = sub.add_parser("extend", help="central extension from reduced 2-cocycles")
    common(sp)
    sp.add_argument("--cocycles", help="TOML file of [[cocycle]] tables")
    sp.add_argument("--name")
    sp.set_defaults(func=cmd_extend)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.max_q_given = args.max_q is not None
    if args.max_q is None:
        args.max_q = 6
    if args.max_q < 0 or (args.degree_bound is not None and args.degree_bound < 0):
        print("error: --max-q and --degree-bound must be non-negative", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except (SpecError, NotInCatalog, CocycleCheckFailed) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except coh.Unstable as e:
        print(f"error: {e}; rerun with a larger --degree-bound", file=sys.stderr)
        return EXIT_UNSTABLE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
