"""Command-line entry point: python -m app.cli <command> [flags]."""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .config import LOG_LEVELS, get_settings, invalid_variables
from .services.errors import SuperbridgeError, VerificationFailure
from .services.gordan_lp import (
    find_certificate,
    find_direction,
    load_certificate,
    serialize_certificate,
    verify_certificate,
)
from .services.poly_model import edge_vectors, load_polygon, sign_matrix
from .services.projection_diagram import format_pd, gauss_code, parse_pd, project, writhe
from .services.superbridge import bridge_count, witness_search
from .services.utils import parse_vector
from .services.verdict import conclude, find_homomorphism, reproduce_theorem1
from .services.wirtinger import (
    COMPLETE,
    TranspositionLabeling,
    canonical_form,
    fox_determinant,
    format_labeling,
    hom_search,
    load_strand_labels,
    presentation,
    replay_labels,
)

logger = logging.getLogger("app.cli")


def _vector(text: str):
    try:
        return parse_vector(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    ap = argparse.ArgumentParser(
        prog="gordan", description="Superbridge certificates for polygonal knots."
    )
    ap.add_argument(
        "--log-level",
        default=settings.log_level,
        type=str.upper,
        choices=sorted(LOG_LEVELS),
        help="logging level (stderr)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-cert", help="check E u = 0, u >= 0, u != 0 exactly")
    p.add_argument("--poly", required=True)
    p.add_argument("--cert", required=True)

    p = sub.add_parser("find-cert", help="search a Gordan certificate for the sign matrix")
    p.add_argument("--poly", required=True)
    p.add_argument("--out", help="write the certificate file here")

    p = sub.add_parser("witness", help="descent count for a direction, or the best one found")
    p.add_argument("--poly", required=True)
    p.add_argument("--direction", type=_vector, help="e.g. 1,0,0")
    p.add_argument("--seed", type=int, default=settings.seed)
    p.add_argument("--budget", type=int, default=settings.witness_budget)

    p = sub.add_parser("project", help="PD and Gauss code of a generic projection")
    p.add_argument("--poly", required=True)
    p.add_argument("--direction", type=_vector, help="first direction tried (default 0,0,1)")
    p.add_argument("--out", help="write the PD code here")

    p = sub.add_parser("hom-search", help="surjective transposition labelings onto S_m")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--diagram", help="PD code file")
    src.add_argument("--poly", help="project this polygon first")
    p.add_argument("--strands", help="replay generating strand labels instead of searching")
    p.add_argument("--m", type=int, default=settings.hom_degree)
    p.add_argument("--limit", type=int)

    p = sub.add_parser("conclude", help="bound ledger for one polygon")
    p.add_argument("--poly", required=True)
    p.add_argument("--diagram", help="reference PD code for --strands")
    p.add_argument("--strands", help="generating strand labels")
    p.add_argument("--search", action="store_true", help="search an S_m labeling on a projection")
    p.add_argument("--m", type=int, default=settings.hom_degree)
    p.add_argument("--seed", type=int, default=settings.seed)
    p.add_argument("--budget", type=int, default=settings.witness_budget)

    p = sub.add_parser("reproduce", help="machine-check the main theorem from the data directory")
    p.add_argument("--data", default=str(settings.data_dir))
    p.add_argument("--seed", type=int, default=settings.seed)
    p.add_argument("--budget", type=int, default=settings.witness_budget)
    p.add_argument("--m", type=int, default=settings.hom_degree)
    p.add_argument("--out", help="write the TSV report here")
    return ap


def _verify_cert(args) -> int:
    P = load_polygon(args.poly)
    report = verify_certificate(sign_matrix(edge_vectors(P)), load_certificate(args.cert))
    print(f"{P.name}: {report.describe()}")
    if not report.valid:
        raise VerificationFailure(P.name, f"residual {report.residual}")
    return 0


def _find_cert(args) -> int:
    P = load_polygon(args.poly)
    E = sign_matrix(edge_vectors(P))
    cert = find_certificate(E)
    if cert is None:
        v = find_direction(E)
        print(f"{P.name}: no certificate; direction {v.entries} attains {P.n // 2} maxima")
        return 1
    text = serialize_certificate(cert, P.name)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def _witness(args) -> int:
    P = load_polygon(args.poly)
    if args.direction is not None:
        w = bridge_count(edge_vectors(P), args.direction)
    else:
        w = witness_search(P, budget=args.budget, seed=args.seed)
    print(f"{P.name}: {w.describe()}")
    return 0


def _project(args) -> int:
    P = load_polygon(args.poly)
    D, pose = project(P, hint=args.direction)
    pd = format_pd(D)
    if args.out:
        Path(args.out).write_text(f"# {P.name} viewed along {pose.direction}\n{pd}\n", encoding="utf-8")
    print(f"{P.name}: direction {pose.direction}, {len(D.crossings)} crossings, writhe {writhe(D)}")
    print(f"determinant {fox_determinant(presentation(D))}")
    print(f"PD {pd}")
    print(f"Gauss {gauss_code(D)}")
    return 0


def _diagram(args):
    if args.diagram:
        return parse_pd(Path(args.diagram).read_text(encoding="utf-8"))
    return project(load_polygon(args.poly))[0]


def _hom_search(args) -> int:
    D = _diagram(args)
    if args.strands:
        result = replay_labels(D, load_strand_labels(args.strands), args.m)
        if result.status != COMPLETE:
            raise VerificationFailure(args.strands, f"propagation is {result.status}")
        print(format_labeling(D, result.labels))
        return 0
    homs = hom_search(presentation(D), m=args.m, limit=args.limit)
    print(f"{len(homs)} labeling(s) onto S_{args.m}")
    for k, h in enumerate(homs, start=1):
        print(f"# labeling {k}")
        print(format_labeling(D, h))
    return 0 if homs else 1


def _conclude(args) -> int:
    P = load_polygon(args.poly)
    homs = []
    if args.strands:
        if not args.diagram:
            raise SuperbridgeError("--strands needs --diagram")
        D = parse_pd(Path(args.diagram).read_text(encoding="utf-8"))
        result = replay_labels(D, load_strand_labels(args.strands), args.m)
        if result.status != COMPLETE:
            raise VerificationFailure(P.name, f"strand labels do not propagate ({result.status})")
        seq = tuple(result.labels[k] for k in range(1, len(D.arcs) + 1))
        homs.append(TranspositionLabeling(m=args.m, labels=canonical_form(seq, args.m)))
    elif args.search:
        hom, _ = find_homomorphism(Path(args.poly).parent, P, args.m)
        if hom is not None:
            homs.append(hom)
    witness = witness_search(P, budget=args.budget, seed=args.seed)
    print(conclude(P, homs=homs, witness=witness).summary())
    return 0


def _reproduce(args) -> int:
    report = reproduce_theorem1(args.data, budget=args.budget, seed=args.seed, m=args.m)
    if args.out:
        Path(args.out).write_text(report.tsv(), encoding="utf-8")
    print(report.text(), end="")
    print(report.tsv(), end="")
    return 0


COMMANDS = {
    "verify-cert": _verify_cert,
    "find-cert": _find_cert,
    "witness": _witness,
    "project": _project,
    "hom-search": _hom_search,
    "conclude": _conclude,
    "reproduce": _reproduce,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        ap = build_parser()
    except ValidationError as exc:
        names = ", ".join(invalid_variables(exc))
        sys.stderr.write(f"error: invalid environment setting {names}\n")
        return 2
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args)
    except VerificationFailure as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return 1
    except SuperbridgeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: cannot read {exc.filename}: {exc.strerror}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
