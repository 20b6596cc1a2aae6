"""Command line front end: ``rhh {enumerate,build,classify,verify,suite}``.

Exit codes: 0 pass, 1 verification failure, 2 usage or spec error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .catalog import factor
from .errors import AdmissibilityError, NotApplicableError, SpecParseError, StructureError
from .holonomy import enumerate_admissible, enumeration_json, holonomy_from_brackets, isotropy_module_report
from .lie_core import DEFAULT_TOL
from .structure_builder import StructureSpec, build_structure, homogeneous_tensor, scale_phi
from .tv_classifier import classify, expected_label
from .verifier import check_ambrose_singer

SCHEMA = 1
MAX_N = 12
SCALES = (1.0, 0.5, 0.1, 0.0)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_tol() -> float:
    raw = os.environ.get("RHH_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"RHH_TOL is not a number: {raw!r}") from None


def _check_n(n: int, lo: int = 2) -> None:
    if not lo <= n <= MAX_N:
        raise UsageError(f"n must lie in [{lo}, {MAX_N}], got {n}")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def cmd_enumerate(n: int) -> dict:
    _check_n(n)
    doc = {"schema": SCHEMA}
    doc.update(enumeration_json(n))
    return doc


def structure_report(spec: StructureSpec, tol: float, parts=("holonomy", "type", "verification")) -> dict:
    H = build_structure(spec, tol=tol)
    doc: dict = {"schema": SCHEMA, "spec": spec.to_text()}
    doc["structure"] = {
        "n": H.n,
        "dim_h": H.p,
        "exact": H.exact,
        "symmetric": H.symmetric,
    }
    if "holonomy" in parts:
        doc["holonomy"] = holonomy_from_brackets(H).to_dict()
        try:
            doc["modules"] = [m._asdict() for m in isotropy_module_report(H)]
        except NotApplicableError:
            pass
    if "type" in parts:
        rep = classify(homogeneous_tensor(H))
        doc["type"] = rep.to_dict()
        doc["type"]["expected_label"] = list(expected_label(H))
    if "verification" in parts:
        doc["verification"] = check_ambrose_singer(H, tol).to_dict()
    return doc


def suite_specs(n_max: int, seed: int) -> list[tuple[str, StructureSpec, str]]:
    """(group, spec, variant) for every enumerated holonomy with n <= n_max."""
    out = []
    for n in range(3, n_max + 1):
        for e in enumerate_admissible(n):
            if e.so_n:
                out.append((f"n={n} so_n", StructureSpec(n=n, symmetric=True), "symmetric"))
                continue
            if any(not factor(s).constructible for s in e.ss):
                continue
            group = f"n={n} r={e.r} ss={','.join(e.ss) or 'none'}"
            base = StructureSpec(n=n, r=e.r, ss=e.ss, seed=seed)
            out.append((group, base, "canonical"))
            rnd = StructureSpec(n=n, r=e.r, ss=e.ss, phi="random", A1="random", phiA="random",
                                seed=seed)
            out.append((group, rnd, "random"))
    return out


def _run_one(spec: StructureSpec, tol: float, declared: tuple[int, int] | None):
    H = build_structure(spec, tol=tol)
    hol = holonomy_from_brackets(H)
    typ = classify(homogeneous_tensor(H))
    ver = check_ambrose_singer(H, tol)
    checks = {
        "verification": ver.passed,
        "holonomy_matches_prediction": hol.matched_prediction,
        "type_matches_holonomy": typ.label == expected_label(H),
    }
    if declared is not None:
        checks["declared_holonomy"] = (hol.center_dim, hol.ss_dim) == declared
    entry = {
        "spec": spec.to_text(),
        "hol_dim": hol.dim,
        "label": list(typ.label),
        "checks": checks,
        "passed": all(checks.values()),
    }
    if not ver.passed:
        entry["failed_residuals"] = ver.failures()
    return entry, H, hol


def cmd_suite(n_max: int, seed: int, tol: float) -> dict:
    _check_n(n_max, lo=3)
    runs = []
    groups = []
    for group, spec, variant in suite_specs(n_max, seed):
        if group not in groups:
            groups.append(group)
        if spec.symmetric:
            declared = None
        else:
            declared = (spec.r, spec.ss_dim)
        entry, H, hol = _run_one(spec, tol, declared)
        entry.update(group=group, variant=variant)
        runs.append(entry)
        if variant != "canonical":
            continue
        # scaling path towards phi = 0
        dims = []
        for t in SCALES:
            Ht = scale_phi(H, t)
            ver = check_ambrose_singer(Ht, tol)
            dims.append(holonomy_from_brackets(Ht).dim)
            runs.append({
                "spec": Ht.spec.to_text(),
                "group": group,
                "variant": f"scale t={t:g}",
                "hol_dim": dims[-1],
                "checks": {"verification": ver.passed},
                "passed": ver.passed,
            })
        path_ok = len(set(dims[:-1])) == 1 and dims[-1] == 0
        runs.append({
            "spec": spec.to_text(),
            "group": group,
            "variant": "scaling path",
            "hol_dims": dims,
            "checks": {"hol_dim_constant_then_zero": path_ok},
            "passed": path_ok,
        })
    runs.sort(key=lambda r: (r["spec"], r["variant"]))
    failures = [{"spec": r["spec"], "variant": r["variant"],
                 "failed": [k for k, v in r["checks"].items() if not v]}
                for r in runs if not r["passed"]]
    return {
        "schema": SCHEMA,
        "n_max": n_max,
        "seed": seed,
        "tol": tol,
        "structures": groups,
        "runs": runs,
        "passed": not failures,
        "failures": failures,
    }


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------


def _text_enumerate(doc: dict) -> str:
    lines = [f"admissible holonomy algebras on RH({doc['n']}):"]
    for e in doc["entries"]:
        if e.get("so_n"):
            lines.append(f"  so({doc['n']})  dim {e['dim']}")
        else:
            ss = "+".join(e["ss"]) or "-"
            lines.append(f"  r={e['r']} ss={ss}  dim {e['dim']}  3r+dim k_ss = {e['constraint']} <= {e['bound']}")
    return "\n".join(lines)


def _text_structure(doc: dict) -> str:
    lines = [doc["spec"]]
    if "holonomy" in doc:
        h = doc["holonomy"]
        lines.append(f"  holonomy  dim {h['dim']} (center {h['center_dim']}, semisimple {h['ss_dim']})"
                     f"  matches phi(n): {h['matched_prediction']}")
    if "type" in doc:
        t = doc["type"]
        norms = ", ".join(f"{x:.3g}" for x in t["norms"])
        lines.append(f"  type      {t['name']}  norms ({norms})")
    if "verification" in doc:
        v = doc["verification"]
        lines.append(f"  verify    {'pass' if v['passed'] else 'FAIL'}  K = {v['curvature_constant']:.6g}")
        for k, x in v["residuals"].items():
            flag = "" if x < v["thresholds"][k] else "  <-- fails"
            lines.append(f"    {k:<20} {x:.2e}{flag}")
    return "\n".join(lines)


def _text_suite(doc: dict) -> str:
    lines = []
    for r in doc["runs"]:
        lines.append(f"{'PASS' if r['passed'] else 'FAIL'}  {r['variant']:<14} {r['spec']}")
    lines.append(f"{len(doc['runs'])} runs over {len(doc['structures'])} holonomy types, "
                 f"{len(doc['failures'])} failures")
    return "\n".join(lines)


def emit(doc: dict, fmt: str, out: str | None, render) -> None:
    text = json.dumps(doc, indent=2) if fmt == "json" else render(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def spec_from_args(args) -> StructureSpec:
    if args.spec:
        return StructureSpec.parse(args.spec)
    if args.n is None:
        raise UsageError("give --spec or --n")
    toks = [f"n={args.n}"]
    if args.hol:
        toks.append(f"hol={args.hol}")
    else:
        toks += [f"r={args.r}", f"ss={args.ss if args.ss else 'none'}", f"phi={args.phi}",
                 f"A1={args.A1}", f"phiA={args.phiA}", f"seed={args.seed}"]
    if args.c is not None:
        toks.append(f"c={args.c}")
    if args.scalar:
        toks.append(f"scalar={args.scalar}")
    return StructureSpec.parse(" ".join(toks))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rhh", description="Homogeneous structures on real hyperbolic space.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--out", metavar="FILE")
        sp.add_argument("--tol", type=float, default=None, help="override RHH_TOL / 1e-9")

    e = sub.add_parser("enumerate", help="list admissible holonomy algebras")
    e.add_argument("--n", type=int, required=True)
    common(e)

    for name, helptext in (("build", "build, classify and verify"),
                           ("classify", "holonomy and type only"),
                           ("verify", "Ambrose-Singer and curvature checks")):
        b = sub.add_parser(name, help=helptext)
        b.add_argument("--spec", help='e.g. "n=7 r=1 ss=su2 phi=canonical A1=zero phiA=zero seed=42"')
        b.add_argument("--n", type=int)
        b.add_argument("--r", type=int, default=0)
        b.add_argument("--ss", default="", help="comma separated simple factors, e.g. su2,su2")
        b.add_argument("--phi", default="canonical", help="canonical | scaled(t) | random")
        b.add_argument("--A1", default="zero", choices=("zero", "random"))
        b.add_argument("--phiA", default="zero", choices=("zero", "random"))
        b.add_argument("--seed", type=int, default=0)
        b.add_argument("--hol", choices=("so_n",), help="the symmetric description")
        b.add_argument("--c", type=float, default=None, help="curvature scale, sec = -c")
        b.add_argument("--scalar", choices=("auto", "exact", "float"), default=None)
        common(b)

    s = sub.add_parser("suite", help="run the acceptance matrix")
    s.add_argument("--n-max", type=int, default=6)
    s.add_argument("--seed", type=int, default=0)
    common(s)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else default_tol()
        if not tol > 0:
            raise UsageError(f"tolerance must be positive, got {tol}")
        if args.command == "enumerate":
            emit(cmd_enumerate(args.n), args.format, args.out, _text_enumerate)
            return EXIT_OK
        if args.command == "suite":
            doc = cmd_suite(args.n_max, args.seed, tol)
            emit(doc, args.format, args.out, _text_suite)
            if not doc["passed"]:
                if args.format == "text":
                    sys.stderr.write(json.dumps({"failures": doc["failures"]}, indent=2) + "\n")
                return EXIT_FAIL
            return EXIT_OK
        spec = spec_from_args(args)
        spec.validate()
        _check_n(spec.n)
        parts = {"build": ("holonomy", "type", "verification"),
                 "classify": ("holonomy", "type"),
                 "verify": ("verification",)}[args.command]
        try:
            doc = structure_report(spec, tol, parts)
        except StructureError as exc:
            sys.stderr.write(f"verification failed: {exc}\n")
            return EXIT_FAIL
        emit(doc, args.format, args.out, _text_structure)
        ver = doc.get("verification")
        if ver is not None and not ver["passed"]:
            sys.stderr.write(f"verification failed: {', '.join(ver['failures'])}\n")
            return EXIT_FAIL
        return EXIT_OK
    except (UsageError, SpecParseError, AdmissibilityError) as exc:
        sys.stderr.write(f"rhh: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
