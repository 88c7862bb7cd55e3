"""Command-line front end: ``relulrich <subcommand> ...``.

Exit status: 0 success, 1 usage or input error, 2 verification failure,
3 branch section outside the multiplication-map image or cover infeasible.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from . import coverarith, ellmodel, gradedgeom, matfac
from .exactfield import ScalarParseError
from .gradedgeom import BaseVariety, NotInImage
from .polyring import ParseError, parse_poly

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NOT_IN_IMAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _load_json_arg(text: str) -> dict:
    """Inline JSON, or ``@path`` / a path to a JSON file."""
    try:
        if text.lstrip().startswith("{"):
            return json.loads(text)
        with open(text.lstrip("@"), encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {text!r}: {exc}") from None


def _parse_base(text: str):
    data = _load_json_arg(text)
    if data.get("kind") in ("elliptic", "E"):
        return ellmodel.WeierstrassCurve(Fraction(str(data["A"])), Fraction(str(data["B"])))
    return BaseVariety.from_json(data)


def _parse_branch(base: BaseVariety, text: str, order: int = 1):
    return parse_poly(text, base.num_vars, has_T=False, order=order)


def _parse_elliptic_element(c: ellmodel.WeierstrassCurve, text: str) -> dict:
    """Parse a polynomial in x and y and reduce it with the curve equation."""
    renamed = re.sub(r"\by\b", "x1", re.sub(r"\bx\b", "x0", text))
    p = parse_poly(renamed, 2, has_T=False)
    out: dict = {}
    for (a, b), coeff in p.terms.items():
        term = {(a, 0): coeff.to_fraction()}
        for _ in range(b):
            term = ellmodel.ell_multiply(c, term, {(0, 1): Fraction(1)})
        for mono, v in term.items():
            ellmodel._add_into(out, mono, v)
    return out


def _emit(data: dict, out_path: str | None, text: str, stdout: TextIO) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=False)
            fh.write("\n")
    stdout.write(text.rstrip("\n") + "\n")


def _cmd_check_multmap(args, out: TextIO) -> int:
    base = _parse_base(args.base)
    if isinstance(base, ellmodel.WeierstrassCurve):
        img = ellmodel.multmap_image_ell(base, args.n, args.m)
        data = {"format_version": "1", "base": {"kind": "elliptic", "A": str(base.A),
                                                "B": str(base.B)},
                "n": args.n, "m": args.m, "image_dim": img.image_dim,
                "target_dim": img.target_dim, "surjective": img.surjective,
                "cokernel": [ellmodel.format_element({mono: 1}) for mono in img.cokernel]}
    else:
        rep = gradedgeom.is_surjective(base, args.n, args.m)
        data = {"format_version": "1", "base": base.to_json(), "n": args.n, "m": args.m,
                "image_dim": rep.image_dim, "target_dim": rep.target_dim,
                "surjective": rep.surjective}
    text = (f"{args.m}-fold multiplication map in degree {args.n}: image dimension "
            f"{data['image_dim']} of {data['target_dim']} "
            f"({'surjective' if data['surjective'] else 'not surjective'})")
    if data.get("cokernel"):
        text += "\ncokernel spanned by " + ", ".join(data["cokernel"])
    _emit(data, args.out, text, out)
    return EXIT_OK


def _decomposition_document(base, n, d, s, dec) -> dict:
    return {"format_version": "1", "base": base.to_json(), "n": n, "d": d,
            "branch": str(s), "decomposition": dec.to_json()}


def _cmd_decompose(args, out: TextIO) -> int:
    base = _parse_base(args.base)
    if isinstance(base, ellmodel.WeierstrassCurve):
        s = _parse_elliptic_element(base, args.branch)
        terms = ellmodel.decompose_ell(base, s, args.n, args.d)
        lines = [" * ".join(f"({ellmodel.format_element(f)})" for f in t) for t in terms]
        data = {"format_version": "1", "n": args.n, "d": args.d,
                "branch": ellmodel.format_element(s), "terms": lines}
        _emit(data, args.out, "\n".join(["s = " + data["branch"]] + ["  + " + x for x in lines]),
              out)
        return EXIT_OK
    s = _parse_branch(base, args.branch)
    dec = gradedgeom.decompose_in_image(base, args.n, args.d, s)
    data = _decomposition_document(base, args.n, args.d, s, dec)
    lines = [f"s = {s}", f"{dec.num_terms} product term(s):"]
    lines += ["  " + " * ".join(f"({a})" for a in t) for t in dec.terms]
    _emit(data, args.out, "\n".join(lines), out)
    return EXIT_OK


def _cmd_build_root(args, out: TextIO) -> int:
    doc = _load_json_arg(args.cert)
    base = BaseVariety.from_json(doc["base"])
    dec = gradedgeom.ProductDecomposition.from_json(doc["decomposition"], base.num_vars)
    if not dec.terms:
        raise UsageError("decomposition has no terms")
    root = matfac.root_from_decomposition(dec, base.num_vars, specialize=not args.no_specialize)
    report = matfac.verify_root(root, seed=args.seed)
    data = root.to_json()
    text = (f"{root.construction} factorization of {root.target}: "
            f"{len(root.factors)} factor(s) of size {root.size}\n{report.summary()}")
    _emit(data, args.out, text, out)
    return report.exit_code


def _cmd_verify_root(args, out: TextIO) -> int:
    doc = _load_json_arg(args.root)
    cert = None
    if "root" in doc:
        cert = matfac.UlrichCertificate.from_json(doc)
        root = cert.root
    else:
        root = matfac.MatrixRoot.from_json(doc)
    lines = []
    if cert is not None:
        report, det, dec_ok = matfac.verify_certificate(cert, det_samples=args.det_samples,
                                                        seed=args.seed)
        if not dec_ok:
            lines.append("FAIL: decomposition does not match the branch section and target")
    else:
        report = matfac.verify_root(root, seed=args.seed)
        det = (matfac.determinant_check(root, args.det_samples, seed=args.seed)
               if report.ok and root.size <= matfac.DET_EVAL_MAX else None)
        dec_ok = True
    lines.append(report.summary())
    lines.extend(report.notes)
    if det is not None:
        lines.append(("PASS: " if det.ok else "FAIL: ") + "determinant " + det.detail)
    elif report.ok:
        lines.append(matfac.DET_IMPLIED)
    code = report.exit_code
    if code == EXIT_OK and ((det is not None and not det.ok) or not dec_ok):
        code = EXIT_VERIFY
    data = {"format_version": "1", "identity_ok": report.identity_ok,
            "shape_ok": report.shape_ok,
            "violations": [{"kind": v.kind, "row": v.row, "col": v.col, "factor": v.factor,
                            "detail": v.detail} for v in report.violations],
            "suspects": [list(p) for p in report.suspects],
            "determinant": det.to_json() if det is not None else None,
            "exit_status": code}
    _emit(data, args.out, "\n".join(lines), out)
    return code


def _cmd_ulrich(args, out: TextIO) -> int:
    base = _parse_base(args.base)
    if isinstance(base, ellmodel.WeierstrassCurve):
        s = _parse_elliptic_element(base, args.branch)
        matfac.ulrich_certificate(base, args.n, args.d, s)
    s = _parse_branch(base, args.branch)
    cert = matfac.ulrich_certificate(base, args.n, args.d, s,
                                     specialize=not args.no_specialize,
                                     det_samples=args.det_samples, seed=args.seed)
    text = "\n".join(cert.log + [f"VERIFIED: rank {cert.rank} (matrix size {cert.root.size})"])
    _emit(cert.to_json(), args.out, text, out)
    return EXIT_OK


def _cmd_cover_info(args, out: TextIO) -> int:
    spec = coverarith.AbelianCoverSpec.from_json(_load_json_arg(args.spec))
    summands = coverarith.pushforward_summands(spec)
    degrees = coverarith.summand_degrees(spec)
    data = {"format_version": "1", "stages": spec.to_json()["stages"],
            "total_degree": spec.total_degree,
            "summands": [list(e) for e in summands], "summand_degrees": degrees}
    lines = [f"abelian cover of total degree {spec.total_degree} with stage degrees "
             + " x ".join(str(d) for d in spec.degrees),
             f"pushforward of O splits into {len(summands)} line bundles:"]
    for exps, deg in zip(summands, degrees):
        name = " (x) ".join(f"M{i + 1}^{e}" for i, e in enumerate(exps) if e) or "O"
        lines.append(f"  {name}  (degree {deg} on a curve)")
    if args.terms:
        try:
            terms = [None if t in ("-", "none") else int(t) for t in args.terms.split(",")]
        except ValueError:
            raise UsageError(f"bad --terms {args.terms!r}") from None
        plan = coverarith.compose_abelian_plan(spec, terms, specialize=not args.no_specialize)
        data["plan"] = plan.to_json()
        lines += plan.notes + [f"composed bundle rank {plan.total_rank}"]
    _emit(data, args.out, "\n".join(lines), out)
    return EXIT_OK


def _cmd_feasibility(args, out: TextIO) -> int:
    if args.etale:
        branch = 0
    elif args.m_deg is not None:
        branch = coverarith.cyclic_branch_degree(args.d, args.m_deg)
    else:
        raise UsageError("feasibility needs --m-deg M or --etale")
    arith = coverarith.riemann_hurwitz(args.genus_base, args.d, branch)
    rep = coverarith.feasibility_report(arith, args.rank)
    _emit(rep.to_json(), args.out, f"{rep.verdict}: {rep.narrative}", out)
    return EXIT_OK if rep.feasible else EXIT_NOT_IN_IMAGE


def _cmd_elliptic_demo(args, out: TextIO) -> int:
    c = ellmodel.WeierstrassCurve(Fraction(args.A), Fraction(args.B))
    rep = ellmodel.elliptic_report(c)
    lines = [
        f"curve {c}",
        "degree-2 pole basis: " + ", ".join(rep["pole_basis_2"]),
        "degree-4 pole basis: " + ", ".join(rep["pole_basis_4"]),
        f"globally generated: {rep['globally_generated']}",
        f"2-fold multiplication image: dimension {rep['image_dim']} of {rep['target_dim']}",
        "cokernel spanned by " + ", ".join(rep["cokernel"]),
        f"branch section y: {rep['branch_y_verdict']}",
    ]
    _emit(dict(format_version="1", **rep), args.out, "\n".join(lines), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relulrich", description="Relatively Ulrich bundles on cyclic covers.")
    p.add_argument("--seed", type=int, default=0, help="seed for all random sampling")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    sp = sub.add_parser("check-multmap", help="image of the m-fold multiplication map")
    sp.add_argument("--base", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    common(sp)
    sp.set_defaults(func=_cmd_check_multmap)

    sp = sub.add_parser("decompose", help="write a branch section as a sum of products")
    sp.add_argument("--base", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--branch", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("build-root", help="matrix factorization from a decomposition file")
    sp.add_argument("--cert", required=True)
    sp.add_argument("--no-specialize", action="store_true")
    common(sp)
    sp.set_defaults(func=_cmd_build_root)

    sp = sub.add_parser("verify-root", help="re-check a matrix root or certificate")
    sp.add_argument("root")
    sp.add_argument("--det-samples", type=int, default=5)
    common(sp)
    sp.set_defaults(func=_cmd_verify_root)

    sp = sub.add_parser("ulrich", help="full certificate pipeline")
    sp.add_argument("--base", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--branch", required=True)
    sp.add_argument("--det-samples", type=int, default=5)
    sp.add_argument("--no-specialize", action="store_true")
    common(sp)
    sp.set_defaults(func=_cmd_ulrich)

    sp = sub.add_parser("cover-info", help="pushforward summands of an abelian cover")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--terms", help="comma-separated decomposition term counts per stage")
    sp.add_argument("--no-specialize", action="store_true")
    common(sp)
    sp.set_defaults(func=_cmd_cover_info)

    sp = sub.add_parser("feasibility", help="necessary conditions on a curve cover")
    sp.add_argument("--genus-base", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--m-deg", type=int)
    g.add_argument("--etale", action="store_true")
    sp.add_argument("--rank", type=int, default=1)
    common(sp)
    sp.set_defaults(func=_cmd_feasibility)

    sp = sub.add_parser("elliptic-demo", help="multiplication map on an elliptic curve")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_elliptic_demo)
    return p


_INPUT_ERRORS = (ParseError, ScalarParseError, gradedgeom.DegreeMismatch,
                 gradedgeom.DegreeNegative, gradedgeom.InvalidVariety, gradedgeom.MixedDegrees,
                 ellmodel.SingularCurve, coverarith.InvalidCoverSpec,
                 coverarith.NonIntegralGenus, coverarith.NegativeGenus,
                 coverarith.StageMissingCertificate, matfac.EmptyDecomposition,
                 matfac.UnsupportedBase, KeyError, ValueError)


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, stdout)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except NotInImage as exc:
        stdout.write(f"NotInImage: {exc}\n")
        return EXIT_NOT_IN_IMAGE
    except matfac.VerificationFailed as exc:
        stdout.write(f"verification failed:\n{exc}\n")
        return EXIT_VERIFY
    except matfac.AllSamplesSingular as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_VERIFY
    except _INPUT_ERRORS as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
