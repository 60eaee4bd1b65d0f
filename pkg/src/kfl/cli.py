"""Command-line front end.

Exit codes: 0 = a result was computed (NO and UNKNOWN verdicts included),
2 = invalid input (parse or validation failure, violations named on
stderr), 3 = a resource ceiling was hit before completion.  Results go to
stdout, diagnostics to stderr.  Every command takes --json, which wraps the
result payload as {"command", "result", "provenance", "timing_ms"}; apart
from timing_ms, identical invocations produce identical output.

The environment variable KFL_MAX_STATES caps the witness-search frontier.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

from . import io
from .io import parse_cover, parse_product  # re-exported: file-ingestion entry points
from .covers import genus, image_lattice, is_connected, is_purely_branched, make_cyclic, make_kfold, validate
from .covers import Branch, MonodromyRep
from .equivalence import decide, falsify_bounded, build_r, r_invertible_all_signs
from .errors import InvalidInputError, KflError, ResourceLimitError
from .finiteness import build_phi, build_psi, classify_products, finiteness_report
from .homology import H1Map, NotCanonical, canonical_form, induced_h1
from .perm import Permutation, parse_cycle_string


_CANONICAL_RE = re.compile(r"^\s*C\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def _h1_from_arg(text) -> H1Map:
    m = _CANONICAL_RE.match(text)
    if m:
        return canonical_form(int(m.group(1)), int(m.group(2)))
    return io.parse_h1(text)


def _fraction_arg(text):
    if "/" in text:
        num, den = text.split("/", 1)
        from fractions import Fraction

        return Fraction(int(num), int(den))
    return int(text)


def _max_states_from_env():
    raw = os.environ.get("KFL_MAX_STATES")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"KFL_MAX_STATES must be an integer, got {raw!r}")


def _rep_from_args(args) -> MonodromyRep:
    if args.file is not None:
        return io.parse_cover(args.file)
    if args.degree is None:
        raise InvalidInputError("give a cover file or --degree with --alpha/--beta/--branch")
    d = args.degree
    rep = MonodromyRep(
        degree=d,
        sigma_alpha=parse_cycle_string(args.alpha, d),
        sigma_beta=parse_cycle_string(args.beta, d),
        branches=tuple(
            Branch(f"b{i}", parse_cycle_string(s, d))
            for i, s in enumerate(args.branch or [], start=1)
        ),
    )
    violations = validate(rep)
    if violations:
        raise InvalidInputError("invalid cover: " + "; ".join(violations), violations)
    return rep


def _lattice_payload(lat):
    return {"rank": lat.rank, "full": lat.is_full(), "basis": [list(r) for r in lat.rows]}


# ---------------------------------------------------------------------------
# cover commands


def _cmd_cover_validate(args):
    data = io._load_json(args.file)
    rep, violations = io.cover_from_dict(data)
    payload = {"valid": not violations, "violations": violations}
    human = "valid" if not violations else "invalid:\n  " + "\n  ".join(violations)
    return payload, ["monodromy-invariants"], human


def _cmd_cover_genus(args):
    rep = io.parse_cover(args.file)
    g = genus(rep)
    return {"genus": g}, ["riemann-hurwitz"], f"genus: {g}"


def _cmd_cover_info(args):
    rep = _rep_from_args(args)
    violations = validate(rep)
    if violations:
        raise InvalidInputError("invalid cover: " + "; ".join(violations), violations)
    connected = is_connected(rep)
    payload = {
        "degree": rep.degree,
        "branch_points": len(rep.branches),
        "connected": connected,
        "purely_branched": is_purely_branched(rep),
    }
    provenance = ["monodromy-invariants"]
    if connected:
        payload["genus"] = genus(rep)
        lat = image_lattice(rep)
        payload["image_lattice"] = _lattice_payload(lat)
        h1 = induced_h1(rep)
        if isinstance(h1, NotCanonical):
            payload["h1"] = {"canonical": None}
        else:
            payload["h1"] = {"canonical": [h1.g, h1.canonical_k()]}
        provenance += ["riemann-hurwitz", "schreier-image-lattice", "purely-branched-classification"]
    lines = [f"degree: {rep.degree}", f"connected: {connected}"]
    if connected:
        lines.append(f"genus: {payload['genus']}")
    lines.append(f"purely_branched: {payload['purely_branched']}")
    if connected:
        lines.append(f"image_lattice: {image_lattice(rep).describe()}")
        c = payload["h1"]["canonical"]
        lines.append(f"h1: C({c[0]}, {c[1]})" if c else "h1: not canonical")
    return payload, provenance, "\n".join(lines)


def _cmd_cover_make(args):
    if args.kind == "cyclic":
        rep = make_cyclic(args.h)
    elif args.kind == "morse":
        rep = make_kfold(args.h, args.h)
    else:
        rep = make_kfold(args.g, args.k)
    text = io.serialize_cover(rep)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        human = f"wrote {args.output}"
    else:
        human = text.rstrip("\n")
    return io.cover_to_dict(rep), ["explicit-construction"], human


# ---------------------------------------------------------------------------
# product commands


def _cmd_product_make(args):
    genera = [int(x) for x in args.genera.split(",") if x.strip()]
    p = build_phi(genera) if args.kind == "phi" else build_psi(genera)
    text = io.serialize_product(p)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        human = f"wrote {args.output}"
    else:
        human = text.rstrip("\n")
    return io.product_to_dict(p), ["explicit-construction"], human


def _cmd_product_finiteness(args):
    p = io.parse_product(args.file)
    report = finiteness_report(p)
    d = report.to_dict()
    lines = [
        f"r: {report.r}",
        f"surjective: {report.surjective}",
        f"F_{report.r - 1} established: {report.f_lower}",
        f"not-F_{report.r} established: {report.f_upper}",
        report.statement(),
    ]
    for tag, missing in (("F-lower", report.missing_lower), ("F-upper", report.missing_upper)):
        for m in missing:
            lines.append(f"missing [{tag}]: {m}")
    return d, list(report.provenance) or ["hypothesis-check"], "\n".join(lines)


def _cmd_product_classify(args):
    p = io.parse_product(args.file_a)
    q = io.parse_product(args.file_b)
    verdict = classify_products(p, q)
    d = verdict.to_dict()
    human = json.dumps({**d, "provenance": ["purely-branched-classification"]}, sort_keys=True)
    return d, ["purely-branched-classification"], human


# ---------------------------------------------------------------------------
# equivalence commands


def _cmd_equiv_decide(args):
    left = _h1_from_arg(args.left)
    right = _h1_from_arg(args.right)
    verdict = decide(
        left,
        right,
        depth=args.depth,
        entry_cap=args.entry_cap,
        b_bound=args.b_bound,
        max_states=_max_states_from_env(),
    )
    provenance = (
        ["symplectic-word-search"]
        if verdict.stats is not None
        else ["purely-branched-classification"]
    )
    d = verdict.to_dict()
    human = json.dumps({**d, "provenance": provenance}, sort_keys=True)
    return d, provenance, human


def _cmd_equiv_falsify(args):
    report = falsify_bounded(
        args.g,
        args.kl,
        args.kr,
        args.bound,
        b_bound=args.b_bound,
        max_candidates=args.ceiling,
        column_constraints=args.prune_columns,
    )
    d = report.to_dict()
    human = (
        f"symplectic candidates: {report.num_symplectic}\n"
        f"B candidates: {report.num_b}\n"
        f"pairs tested: {report.pairs_tested}\n"
        f"solutions found: {report.solutions_found}"
    )
    return d, ["bounded-symplectic-enumeration"], human


def _cmd_lemma_r(args):
    k = _fraction_arg(args.k)
    dets = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            r = build_r(args.l, k, (s1, s2))
            dets[f"({s1:+d},{s2:+d})"] = str(r.matrix.det())
    invertible = r_invertible_all_signs(args.l, k)
    payload = {
        "l": args.l,
        "k": str(k),
        "invertible_all_signs": invertible,
        "determinants": dets,
    }
    return (
        payload,
        ["exact-rational-determinant"],
        f"invertible for all sign choices: {invertible}",
    )


def _cmd_verify_prop(args):
    report = falsify_bounded(args.g, args.kl, args.kr, args.bound, max_candidates=args.ceiling)
    holds = report.solutions_found == 0
    d = {"report": report.to_dict(), "no_solutions_in_slice": holds}
    human = (
        f"tested {report.pairs_tested} candidate pairs "
        f"(g={args.g}, k={args.kl} vs {args.kr}, bound {args.bound}): "
        + ("no solutions, as predicted" if holds else f"{report.solutions_found} solutions found")
    )
    return d, ["bounded-symplectic-enumeration"], human


# ---------------------------------------------------------------------------
# wiring


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kfl",
        description="Branched covers of the torus, their homology maps, and kernel finiteness reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="emit a JSON report")

    cover = sub.add_parser("cover", help="branched-cover commands")
    cover_sub = cover.add_subparsers(dest="subcommand", required=True)

    c_val = cover_sub.add_parser("validate", help="report invariant violations")
    c_val.add_argument("file")
    add_json(c_val)
    c_val.set_defaults(func=_cmd_cover_validate, echo="cover validate")

    c_gen = cover_sub.add_parser("genus", help="genus of a valid connected cover")
    c_gen.add_argument("file")
    add_json(c_gen)
    c_gen.set_defaults(func=_cmd_cover_genus, echo="cover genus")

    c_info = cover_sub.add_parser("info", help="full structural summary")
    c_info.add_argument("file", nargs="?", default=None)
    c_info.add_argument("--degree", type=int, default=None)
    c_info.add_argument("--alpha", default="id", help='cycle notation, e.g. "(0 1 2)" or "id"')
    c_info.add_argument("--beta", default="id")
    c_info.add_argument("--branch", action="append", help="repeatable; cycle notation")
    add_json(c_info)
    c_info.set_defaults(func=_cmd_cover_info, echo="cover info")

    c_make = cover_sub.add_parser("make", help="build one of the explicit constructions")
    make_sub = c_make.add_subparsers(dest="kind", required=True)
    m_cyc = make_sub.add_parser("cyclic", help="cyclic h-fold cover, two branch points")
    m_cyc.add_argument("--h", type=int, required=True)
    m_mor = make_sub.add_parser("morse", help="h-fold cover with order-two branch points")
    m_mor.add_argument("--h", type=int, required=True)
    m_kf = make_sub.add_parser("kfold", help="k-fold purely branched cover of genus g")
    m_kf.add_argument("--g", type=int, required=True)
    m_kf.add_argument("--k", type=int, required=True)
    for p in (m_cyc, m_mor, m_kf):
        p.add_argument("-o", "--output", default=None)
        add_json(p)
        p.set_defaults(func=_cmd_cover_make)
    m_cyc.set_defaults(kind="cyclic", echo="cover make cyclic")
    m_mor.set_defaults(kind="morse", echo="cover make morse")
    m_kf.set_defaults(kind="kfold", echo="cover make kfold")

    product = sub.add_parser("product", help="product-fibration commands")
    product_sub = product.add_subparsers(dest="subcommand", required=True)

    p_make = product_sub.add_parser("make", help="build a phi or psi product")
    p_make.add_argument("kind", choices=["phi", "psi"])
    p_make.add_argument("--genera", required=True, help="comma separated, e.g. 2,3,4")
    p_make.add_argument("-o", "--output", default=None)
    add_json(p_make)
    p_make.set_defaults(func=_cmd_product_make, echo="product make")

    p_fin = product_sub.add_parser("finiteness", help="finiteness-type report for the kernel")
    p_fin.add_argument("file")
    add_json(p_fin)
    p_fin.set_defaults(func=_cmd_product_finiteness, echo="product finiteness")

    p_cls = product_sub.add_parser("classify", help="compare two product kernels")
    p_cls.add_argument("file_a")
    p_cls.add_argument("file_b")
    add_json(p_cls)
    p_cls.set_defaults(func=_cmd_product_classify, echo="product classify")

    equiv = sub.add_parser("equiv", help="equivalence of H1 maps")
    equiv_sub = equiv.add_subparsers(dest="subcommand", required=True)

    e_dec = equiv_sub.add_parser("decide", help="oracle for canonical forms, search otherwise")
    e_dec.add_argument("--left", required=True, help='C(g,k) or an H1 map file')
    e_dec.add_argument("--right", required=True)
    e_dec.add_argument("--depth", type=int, default=6)
    e_dec.add_argument("--entry-cap", type=int, default=6, dest="entry_cap")
    e_dec.add_argument("--b-bound", type=int, default=None, dest="b_bound")
    add_json(e_dec)
    e_dec.set_defaults(func=_cmd_equiv_decide, echo="equiv decide")

    e_fal = equiv_sub.add_parser("falsify", help="bounded exhaustive check of the canonical equation")
    e_fal.add_argument("--g", type=int, required=True)
    e_fal.add_argument("--kl", type=int, required=True)
    e_fal.add_argument("--kr", type=int, required=True)
    e_fal.add_argument("--bound", type=int, required=True)
    e_fal.add_argument("--b-bound", type=int, default=None, dest="b_bound")
    e_fal.add_argument("--ceiling", type=int, default=50_000_000)
    e_fal.add_argument("--prune-columns", action="store_true", dest="prune_columns",
                       help="restrict each column to the sums the equation forces (same verdicts)")
    add_json(e_fal)
    e_fal.set_defaults(func=_cmd_equiv_falsify, echo="equiv falsify")

    lemma = sub.add_parser("lemma-r", help="invertibility of the residual block, exact rationals")
    lemma.add_argument("--l", type=int, required=True)
    lemma.add_argument("--k", required=True, help="integer or rational like 3/2")
    add_json(lemma)
    lemma.set_defaults(func=_cmd_lemma_r, echo="lemma-r")

    verify = sub.add_parser("verify", help="preconfigured verification runs")
    verify_sub = verify.add_subparsers(dest="subcommand", required=True)
    v_prop = verify_sub.add_parser("prop", help="desk-scale falsification slice")
    v_prop.add_argument("--g", type=int, default=2)
    v_prop.add_argument("--kl", type=int, default=1)
    v_prop.add_argument("--kr", type=int, default=2)
    v_prop.add_argument("--bound", type=int, default=2)
    v_prop.add_argument("--ceiling", type=int, default=50_000_000)
    add_json(v_prop)
    v_prop.set_defaults(func=_cmd_verify_prop, echo="verify prop")

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    t0 = time.perf_counter()
    try:
        payload, provenance, human = args.func(args)
    except InvalidInputError as e:
        print(f"error: {e}", file=sys.stderr)
        for v in e.violations:
            print(f"  violation: {v}", file=sys.stderr)
        return 2
    except ResourceLimitError as e:
        print(f"resource ceiling: {e}", file=sys.stderr)
        return 3
    except KflError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    elapsed_ms = round((time.perf_counter() - t0) * 1000.0, 3)
    if args.json:
        report = {
            "command": args.echo,
            "result": payload,
            "provenance": provenance,
            "timing_ms": elapsed_ms,
        }
        sys.stdout.write(io.canonical_json(report))
    else:
        print(human)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
