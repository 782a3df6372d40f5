"""Command-line interface: ``topofilt {compute,snapshot,stability,export}``.

Artifacts go to ``--output`` (or standard output), a one-line summary to
standard output, errors to standard error as ``error[Code]: message``.

Exit codes: 0 ok, 2 bad arguments, 3 invalid input, 4 complexity cap,
5 stability bound violated.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from .criteria import CriterionConfig
from .errors import TopofiltError
from .fields import FieldSpec, _is_prime
from .metric import distances_from_points, read_distance_csv, read_points_csv
from .persistence import PersistenceDiagram
from .pipeline import PipelineConfig, run, snapshot, stability_experiment, stage_at

EXIT_OK, EXIT_ARGS, EXIT_INPUT, EXIT_CAP, EXIT_UNSTABLE = 0, 2, 3, 4, 5


def _nonneg_float(s):
    v = float(s)
    if not v >= 0 or math.isinf(v):
        raise argparse.ArgumentTypeError(f"expected a finite value >= 0, got {s}")
    return v


def _pos_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {s}")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {s}")
    return v


def _prime(s):
    v = int(s)
    if not _is_prime(v) or v >= 2**20:
        raise argparse.ArgumentTypeError(f"expected a prime below 2**20, got {s}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error[InvalidArguments]: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ARGS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topofilt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, help="distance CSV (or point CSV with --points)")
    common.add_argument("--points", action="store_true", help="input rows are point coordinates")
    common.add_argument("--metric", default="euclidean", choices=["euclidean", "manhattan", "chebyshev"])
    common.add_argument("--k", type=_pos_int, default=2, help="neighbour order for sparsity")
    common.add_argument("--lambda", dest="lam", type=_nonneg_float, default=2.0, help="density-gap weight")
    common.add_argument("--field", type=_prime, default=2)
    common.add_argument("--max-degree", type=_nonneg_int, default=2)
    common.add_argument("--mode", choices=["order", "crosscut-auto"], default="order")
    common.add_argument("--parallel", type=_pos_int, default=None, help="worker processes (default: all cores)")
    common.add_argument("--output", help="artifact path (default: standard output)")
    common.add_argument("--verbose", action="store_true")

    p = sub.add_parser("compute", parents=[common], help="persistence diagrams")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("snapshot", parents=[common], help="one stage: poset, core, order vs crosscut Betti")
    p.add_argument("--t", type=_nonneg_float, required=True)

    p = sub.add_parser("stability", parents=[common], help="perturbation experiment")
    p.add_argument("--epsilon", type=_nonneg_float, required=True)
    p.add_argument("--trials", type=_pos_int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("export", parents=[common], help="DOT / facet list / SVG artifacts")
    p.add_argument("--t", type=_nonneg_float, default=None)
    p.add_argument("--what", choices=["poset", "core", "complex", "diagram-svg"], required=True)
    return parser


def _config(args) -> PipelineConfig:
    cap = os.environ.get("TOPOFILT_CAP_SIMPLICES")
    return PipelineConfig(
        criterion=CriterionConfig(args.k, args.lam),
        field=FieldSpec(args.field),
        max_degree=args.max_degree,
        mode=args.mode,
        simplex_cap=int(cap) if cap else None,
    )


def _load(args):
    path = Path(args.input)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from None
    if args.points:
        return distances_from_points(read_points_csv(text, args.metric))
    return read_distance_csv(text)


class _InputError(TopofiltError):
    code = "InputUnreadable"
    exit_status = EXIT_INPUT


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _say(args, line: str) -> None:
    print(line, file=sys.stdout if args.output else sys.stderr)


def run_compute(args) -> int:
    D = _load(args)
    res = run(D, _config(args))
    diag = res.diagram
    _emit(args, diag.to_json() if args.format == "json" else diag.to_csv())
    counts = " ".join(f"H{n}={sum(k for _, _, k in diag.degree(n))}" for n in diag.degrees)
    _say(args, f"stages={len(res.stages)} simplices={res.total_simplices} {counts}")
    return EXIT_OK


def run_snapshot(args) -> int:
    D = _load(args)
    rep = snapshot(D, _config(args), args.t)
    _emit(args, json.dumps(rep, indent=2, sort_keys=True) + "\n")
    _say(args, f"t={rep['grid_t']!r} poset={rep['poset']['size']} core={rep['core']['size']} "
               f"order_betti={rep['order_betti']} crosscut_valid={rep['crosscut']['valid']}")
    return EXIT_OK


def run_stability(args) -> int:
    D = _load(args)
    parallel = args.parallel or os.cpu_count() or 1
    rep = stability_experiment(D, _config(args), args.epsilon, args.trials, args.seed, parallel)
    _emit(args, rep.to_json())
    worst = " ".join(f"H{n}={v:.6g}" for n, v in sorted(rep.max_distance.items()))
    _say(args, f"bound={rep.bound:.6g} {worst} pass={rep.passed}")
    return EXIT_OK if rep.passed else EXIT_UNSTABLE


def poset_dot(P, name: str = "poset") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, tag in enumerate(P.element_tags):
        lines.append(f'  n{i} [label="{i}: {{{",".join(map(str, tag))}}}"];')
    for a, b in P.hasse_edges():
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def diagram_svg(diag: PersistenceDiagram, size: int = 400) -> str:
    pts = [(n, b, d, k) for n in diag.degrees for b, d, k in diag.degree(n)]
    finite = [v for _, b, d, _ in pts for v in (b, d) if not math.isinf(v)]
    hi = max(finite, default=0.0) or 1.0
    hi *= 1.1
    pad = 40
    span = size - 2 * pad

    def x(v):
        return pad + span * v / hi

    def y(v):
        return size - pad - span * (min(v, hi) / hi)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{x(0):.2f}" y1="{y(0):.2f}" x2="{x(hi):.2f}" y2="{y(hi):.2f}" stroke="#999" stroke-dasharray="4 3"/>',
        f'<line x1="{pad}" y1="{size - pad}" x2="{size - pad}" y2="{size - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{size - pad}" stroke="black"/>',
        f'<text x="{size / 2:.0f}" y="{size - 8}" text-anchor="middle" font-size="12">birth</text>',
        f'<text x="12" y="{size / 2:.0f}" font-size="12" transform="rotate(-90 12 {size / 2:.0f})">death</text>',
    ]
    for n, b, d, k in pts:
        cy = pad if math.isinf(d) else y(d)
        dstr = "inf" if math.isinf(d) else repr(d)
        out.append(f'<circle cx="{x(b):.2f}" cy="{cy:.2f}" r="4" fill="{colors[n % len(colors)]}">'
                   f'<title>H{n} ({b!r}, {dstr}) x{k}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def run_export(args) -> int:
    D = _load(args)
    cfg = _config(args)
    if args.what == "diagram-svg":
        _emit(args, diagram_svg(run(D, cfg).diagram))
        _say(args, "wrote diagram-svg")
        return EXIT_OK
    if args.t is None:
        raise _ArgError(f"--t is required for --what {args.what}")
    st = stage_at(D, cfg, args.t)
    if args.what == "poset":
        text = poset_dot(st.quotient.poset)
    elif args.what == "core":
        text = poset_dot(st.core.core, "core")
    else:
        text = "".join(" ".join(map(str, f)) + "\n" for f in st.complex.facets())
    _emit(args, text)
    _say(args, f"wrote {args.what} at t={st.t!r}")
    return EXIT_OK


class _ArgError(TopofiltError):
    code = "InvalidArguments"
    exit_status = EXIT_ARGS


COMMANDS = {"compute": run_compute, "snapshot": run_snapshot, "stability": run_stability, "export": run_export}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except TopofiltError as exc:
        print(f"error[{exc.code}]: {exc}".splitlines()[0], file=sys.stderr)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
