"""Command-line front end: ``toricmmp <command> FILE [options]``.

Every command prints one JSON document on standard output (``--pretty`` gives
a short human summary instead).  Exit codes: 0 success, 2 validation failure,
3 failed claim, 4 resource limit.
"""
import argparse
import logging
import sys
from pathlib import Path

from . import documents as docs
from .corpus import EXAMPLE_CLASSES
from .divisors import adjoint_support, box_of, kappa_adjoint, nef_certificate, nef_status, \
    terminality_report
from .errors import (ChamberSearchError, ClaimFailure, DocumentError, MaxStepsExceeded, ToricError)
from .fan import desingularize, is_complete, is_simplicial, is_smooth, validate_fan
from .mmp import mmp_run
from .puffing import construct_minimal_model

log = logging.getLogger("toricmmp")

EXIT_OK, EXIT_INVALID, EXIT_CLAIM, EXIT_LIMIT = 0, 2, 3, 4


def _is_pair(doc):
    return isinstance(doc, dict) and "class_coefficients" in doc


def cmd_validate(args):
    doc = docs.load(args.file)
    if _is_pair(doc):
        fan, coeffs = docs.pair_from_dict(doc)
    else:
        fan, coeffs = docs.fan_from_dict(doc), None
    validate_fan(fan)
    report = {"command": "validate", "valid": True, "rays": len(fan.rays), "maximal_cones": len(fan.cones),
              "complete": is_complete(fan), "simplicial": is_simplicial(fan), "smooth": is_smooth(fan)}
    if coeffs is not None:
        xc = docs.pair_class(fan, coeffs)
        report["x_nef"] = True
        if is_simplicial(fan):
            report["terminal"] = terminality_report(fan, xc).terminal
    return report


def cmd_resolve(args):
    doc = docs.load(args.file)
    fan = docs.pair_from_dict(doc)[0] if _is_pair(doc) else docs.fan_from_dict(doc)
    smooth = desingularize(fan)
    added = sorted(set(smooth.ray_set()) - set(fan.ray_set()))
    return {"command": "resolve", "fan": docs.fan_to_dict(smooth), "added_rays": [list(r) for r in added]}


def _pair(args, check=True):
    return docs.load_pair(args.file, check=check)


def cmd_box(args):
    fan, xc = _pair(args)
    h = adjoint_support(xc)
    return {"command": "box", "adjoint": docs.support_to_dict(h),
            "adjoint_polytope": docs.polytope_to_dict(box_of(h)), "nef_status": nef_status(h)}


def cmd_kappa(args):
    fan, xc = _pair(args)
    return {"command": "kappa", "kappa": docs.kappa_to_json(kappa_adjoint(fan, xc))}


def _puff_report(fan, xc, seed):
    r = construct_minimal_model(fan, xc, seed=seed)
    cert = r.certificate
    return {
        "command": "minimal-model", "method": "puff", "seed": seed, "kind": "minimal_model",
        "kappa": r.kappa,
        "fan": docs.fan_to_dict(r.sigma.canonical()),
        "adjoint": {str(list(p)): docs.format_rational(v) for p, v in sorted(r.k.as_dict().items())},
        "adjoint_polytope": docs.polytope_to_dict(r.box),
        "contributing": [[list(H.normal), docs.format_rational(H.level)] for H in r.contributing],
        "puffed_polytope": {"facets": len(r.puffed.facet_indices()), "vertices": len(r.puffed.vertices)},
        "chamber": {"epsilon": [docs.format_rational(e) for e in cert.epsilon.values],
                    "halvings": cert.halvings, "draws": cert.draws},
        "checks": r.checks,
        "certificate": nef_certificate(r.k),
    }


def _mmp_report(fan, xc, max_steps):
    out = mmp_run(fan, xc, max_steps=max_steps)
    trace = []
    for s in out.trace:
        entry = {"kind": s.kind}
        if s.extremal_ray is not None:
            entry["extremal_ray"] = list(s.extremal_ray)
            entry["wall_degrees"] = [docs.format_rational(d) for d in s.wall_degrees]
        if s.removed_ray is not None:
            entry["removed_ray"] = list(s.removed_ray)
        if s.discrepancy_pair is not None:
            entry["exceptional_ray"] = list(s.exceptional_ray)
            entry["discrepancy_pair"] = [docs.format_rational(a) for a in s.discrepancy_pair]
        trace.append(entry)
    box = box_of(out.adjoint) if out.kind == "minimal_model" else None
    report = {
        "command": "minimal-model", "method": "mmp", "kind": out.kind,
        "kappa": docs.kappa_to_json(out.kappa),
        "fan": docs.fan_to_dict(out.fan.canonical()),
        "adjoint": {str(list(p)): docs.format_rational(v) for p, v in sorted(out.adjoint.as_dict().items())},
        "adjoint_polytope": docs.polytope_to_dict(box) if box is not None else {"dimension": -1, "vertices": []},
        "steps": {"divisorial": out.divisorial_steps, "flip": out.flip_steps},
        "trace": trace,
    }
    if box is not None:
        report["certificate"] = nef_certificate(out.adjoint)
    if out.fibration:
        f = out.fibration
        xdeg = f.get("x_fiber_degree")
        report["fibration"] = {"fiber_dimension": f["fiber_dimension"], "base_dimension": f["base_dimension"],
                               "fiber_rays": [list(r) for r in f["fiber_rays"]],
                               "x_fiber_degree": None if xdeg is None else docs.format_rational(xdeg)}
    return report


def cmd_minimal_model(args):
    fan, xc = _pair(args)
    if args.method == "puff":
        return _puff_report(fan, xc, args.seed)
    return _mmp_report(fan, xc, args.max_steps)


def cmd_verify(args):
    """Cross-check: two report files, or one pair file run through both methods."""
    if len(args.files) == 2:
        a, b = (docs.load(f) for f in args.files)
    elif len(args.files) == 1:
        fan, xc = docs.load_pair(args.files[0])
        a = _puff_report(fan, xc, args.seed)
        b = _mmp_report(fan, xc, args.max_steps)
    else:
        raise DocumentError("verify takes one pair file or two report files")
    for d, name in ((a, "first"), (b, "second")):
        if "adjoint_polytope" not in d or "kappa" not in d:
            raise DocumentError(f"{name} document is not a minimal-model report", name)
    same_box = a["adjoint_polytope"] == b["adjoint_polytope"]
    same_kappa = a["kappa"] == b["kappa"]
    if not same_box:
        raise ClaimFailure("adjoint_polytopes_agree")
    if not same_kappa:
        raise ClaimFailure("kappa_agrees")
    return {"command": "verify", "agree": True, "kappa": a["kappa"], "adjoint_polytope": a["adjoint_polytope"]}


def cmd_examples(args):
    names = [args.name] if args.name else sorted(EXAMPLE_CLASSES)
    out = {name: docs.example_document(name) for name in names}
    if args.directory:
        d = Path(args.directory)
        d.mkdir(parents=True, exist_ok=True)
        for name, doc in out.items():
            docs.save(doc, d / f"{name}.json")
        return {"command": "examples", "written": [str(d / f"{n}.json") for n in out]}
    return out[names[0]] if args.name else out


def summarize(report):
    lines = []
    cmd = report.get("command")
    if cmd == "minimal-model":
        lines.append(f"{report['method']}: {report['kind']}, kappa = {report['kappa']}")
        lines.append(f"fan: {len(report['fan']['rays'])} rays, {len(report['fan']['maximal_cones'])} cones")
        lines.append("adjoint polytope vertices: " + ", ".join(
            "(" + ", ".join(v) + ")" for v in report["adjoint_polytope"]["vertices"]))
        if "steps" in report:
            lines.append(f"steps: {report['steps']['divisorial']} divisorial, {report['steps']['flip']} flips")
        if "checks" in report:
            lines.append("checks: " + ", ".join(f"{k}={'ok' if v else 'FAILED'}" for k, v in report["checks"].items()))
    elif cmd == "resolve":
        lines.append(f"fan: {len(report['fan']['rays'])} rays, {len(report['fan']['maximal_cones'])} cones")
        lines.append("added rays: " + (", ".join(str(tuple(r)) for r in report["added_rays"]) or "none"))
    else:
        for k, v in report.items():
            if k != "command" and not isinstance(v, (dict, list)):
                lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="toricmmp", description="Minimal models of toric pairs (V, X).")
    p.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human summary instead of JSON")
    common.add_argument("--output", "-o", help="also write the JSON report to this file")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check fan axioms (and the class of X)")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)
    s = sub.add_parser("resolve", parents=[common], help="smooth refinement by star subdivisions")
    s.add_argument("file")
    s.set_defaults(func=cmd_resolve)
    s = sub.add_parser("box", parents=[common], help="adjoint polytope Box_h")
    s.add_argument("file")
    s.set_defaults(func=cmd_box)
    s = sub.add_parser("kappa", parents=[common], help="Kodaira dimension of K + X")
    s.add_argument("file")
    s.set_defaults(func=cmd_kappa)
    s = sub.add_parser("minimal-model", parents=[common], help="minimal model by puffing up or by the MMP")
    s.add_argument("file")
    s.add_argument("--method", choices=["puff", "mmp"], default="puff")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-steps", type=int, default=None)
    s.set_defaults(func=cmd_minimal_model)
    s = sub.add_parser("verify", parents=[common], help="compare both methods' adjoint polytopes")
    s.add_argument("files", nargs="+", help="one pair file, or two minimal-model reports")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-steps", type=int, default=None)
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("examples", parents=[common], help="print or write the built-in example pairs")
    s.add_argument("--name", choices=sorted(EXAMPLE_CLASSES))
    s.add_argument("--directory", "-d", help="write one file per example here")
    s.set_defaults(func=cmd_examples)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        report = args.func(args)
    except ClaimFailure as e:
        print(f"claim: {e.claim}", file=sys.stderr)
        return EXIT_CLAIM
    except (MaxStepsExceeded, ChamberSearchError) as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (DocumentError, ToricError, OSError, ValueError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        docs.save(report, args.output)
    sys.stdout.write(summarize(report) if args.pretty else docs.dumps(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
