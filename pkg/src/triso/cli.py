"""Command-line front end.

Every library operation is reachable from here with either file input
(tensor JSON objects) or inline component flags.  JSON output prints floats
at 17 significant digits so values round-trip exactly; identical inputs and
seeds give byte-identical output.

Exit codes: 0 success, 1 bad usage or bad input, 2 optimizer
non-convergence, 3 reference-suite failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from .canonical_form import ConvergenceError, SphereOptConfig, canonicalize
from .independence import independence_report
from .invariants import smith_bao
from .orbit_oracle import (
    GROUPS,
    AlignmentConfig,
    best_alignment,
    invariant_distance,
    same_orbit,
)
from .reference_cases import run_report
from .tensor_core import (
    COMPONENT_NAMES,
    OrthogonalTransform3,
    SymTraceless3,
    act,
    compress,
    expand,
    random_orthogonal,
    random_tensor,
    tensor_from_json_obj,
    tensor_to_json_obj,
)

__all__ = ["CliConfig", "main"]


@dataclass(frozen=True)
class CliConfig:
    """Validated view of the parsed arguments common to all subcommands."""

    subcommand: str
    file: str | None = None
    seed: int | None = None
    tol: float | None = None
    output_format: str = "json"

    def __post_init__(self):
        if not self.subcommand:
            raise ValueError("a subcommand is required")
        if self.tol is not None and not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol!r}")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"format must be 'text' or 'json', got {self.output_format!r}")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, but 2 is reserved here for numerical
    # failure; remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _json_text(obj) -> str:
    """Serialize compactly with floats at 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite value {x!r}")
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(json.dumps(str(k)) + ":" + _json_text(v) for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return _json_text(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json_text(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _resolve_seed(explicit: int | None) -> int:
    """--seed beats TRISO_SEED beats 0."""
    if explicit is not None:
        return explicit
    env = os.environ.get("TRISO_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"TRISO_SEED must be an integer, got {env!r}") from None


def _load_tensor_file(path: str) -> SymTraceless3:
    with open(path) as fh:
        return tensor_from_json_obj(json.load(fh))


def _add_tensor_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", help="tensor as a JSON object of D components")
    for name in COMPONENT_NAMES:
        p.add_argument(f"--{name}", type=float, default=None, metavar="X",
                       help=f"component {name.upper()} (default 0)")


def _tensor_from_args(args) -> SymTraceless3:
    inline = {name: getattr(args, name) for name in COMPONENT_NAMES}
    given = {k: v for k, v in inline.items() if v is not None}
    if args.file is not None:
        if given:
            raise ValueError("give the tensor via --file or component flags, not both")
        return _load_tensor_file(args.file)
    return SymTraceless3(**{k: (0.0 if v is None else v) for k, v in inline.items()})


def _cmd_invariants(args) -> int:
    tup = smith_bao(_tensor_from_args(args))
    obj = tup.to_json_obj()
    if args.format == "text":
        for k, v in obj.items():
            print(f"{k} = {format(v, '.17g')}")
    else:
        print(_json_text(obj))
    return 0


def _cmd_canonicalize(args) -> int:
    t = _tensor_from_args(args)
    cfg = SphereOptConfig(
        starts=args.starts,
        max_iter=args.max_iter,
        tol=args.tol,
        seed=_resolve_seed(args.seed),
    )
    result = canonicalize(t, cfg)
    obj = {
        "params": result.params.to_json_obj(),
        "rotation": result.transform.m,
        "max_value": result.max_value,
        "residual": result.diagnostics["stationarity_residual"],
    }
    print(_json_text(obj))
    return 0


def _parse_matrix(args) -> OrthogonalTransform3:
    sources = [args.matrix is not None, args.matrix_file is not None, args.random]
    if sum(sources) != 1:
        raise ValueError("give exactly one of --matrix, --matrix-file, --random")
    if args.improper and not args.random:
        raise ValueError("--improper only applies to --random")
    if args.random:
        return random_orthogonal(_resolve_seed(args.seed), proper=not args.improper)
    if args.matrix is not None:
        tokens = [tok for tok in re.split(r"[,\s]+", args.matrix.strip()) if tok]
        if len(tokens) != 9:
            raise ValueError(f"--matrix needs 9 entries (row-major), got {len(tokens)}")
        m = np.array([float(tok) for tok in tokens]).reshape(3, 3)
        return OrthogonalTransform3.from_matrix(m)
    with open(args.matrix_file) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("matrix")
    m = np.asarray(data, dtype=float)
    if m.size != 9:
        raise ValueError(f"matrix file must hold 9 entries, got {m.size}")
    return OrthogonalTransform3.from_matrix(m.reshape(3, 3))


def _cmd_rotate(args) -> int:
    t = _tensor_from_args(args)
    g = _parse_matrix(args)
    rotated = compress(act(g, expand(t)))
    print(_json_text(tensor_to_json_obj(rotated)))
    return 0


def _cmd_orbit_compare(args) -> int:
    a = _load_tensor_file(args.a_file)
    b = _load_tensor_file(args.b_file)
    verdict = same_orbit(a, b, tol=args.tol)
    residual = None
    if args.align:
        cfg = AlignmentConfig(starts=args.starts, seed=_resolve_seed(args.seed))
        residual = best_alignment(a, b, group=args.group, cfg=cfg).residual
    obj = {
        "verdict": verdict,
        "invariant_distance": invariant_distance(a, b),
        "alignment_residual": residual,
    }
    print(_json_text(obj))
    return 0


def _cmd_independence(args) -> int:
    report = independence_report(sample_count=args.samples, seed=_resolve_seed(args.seed))
    print(_json_text(report.to_json_obj()))
    return 0


def _print_repro_text(report: dict) -> None:
    label_w = max(len(row["label"]) for row in report["cases"])
    header = f"{'case':<{label_w}}  {'I2':>12} {'I4':>12} {'I6':>12} {'I10':>12}  result"
    print(header)
    print("-" * len(header))
    for row in report["cases"]:
        c = row["computed"]
        status = "pass" if row["pass"] else "FAIL"
        print(
            f"{row['label']:<{label_w}}  "
            f"{c['I2']:>12.6g} {c['I4']:>12.6g} {c['I6']:>12.6g} {c['I10']:>12.6g}  {status}"
        )
    root = report["f_root"]
    print()
    print(f"f-root: t0 = {root['t0']:.17g}  f(t0) = {root['f_at_t0']:.3g}")
    print(f"        sin(3 t0) = {root['sin_3t0']:.17g}")
    print(f"        21 - sqrt(420) = {root['closed_form']:.17g}  "
          f"(deviation {root['deviation']:.3g})  {'pass' if root['pass'] else 'FAIL'}")
    gap = report["gap"]
    print(f"I6 gap: {gap['low']['I6']:.17g} < 104 < {gap['high']['I6']:.17g}  "
          f"{'pass' if gap['pass'] else 'FAIL'}")
    print()
    print("overall:", "pass" if report["pass"] else "FAIL")


def _cmd_repro(args) -> int:
    report = run_report()
    if args.format == "json":
        print(_json_text(report))
    else:
        _print_repro_text(report)
    return 0 if report["pass"] else 3


def _cmd_rand_tensor(args) -> int:
    t = random_tensor(_resolve_seed(args.seed), scale=args.scale)
    print(_json_text(tensor_to_json_obj(t)))
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="triso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("invariants", help="Smith-Bao invariants of a tensor")
    _add_tensor_args(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_invariants)

    p = sub.add_parser("canonicalize", help="rotate a tensor into canonical position")
    _add_tensor_args(p)
    p.add_argument("--starts", type=int, default=SphereOptConfig.starts)
    p.add_argument("--max-iter", type=int, default=SphereOptConfig.max_iter)
    p.add_argument("--tol", type=float, default=SphereOptConfig.tol)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=_cmd_canonicalize, format="json")

    p = sub.add_parser("rotate", help="apply an orthogonal transform to a tensor")
    _add_tensor_args(p)
    p.add_argument("--matrix", help="9 row-major entries, comma or space separated")
    p.add_argument("--matrix-file", help="JSON file with a 3x3 (or flat 9) matrix")
    p.add_argument("--random", action="store_true", help="Haar-random element")
    p.add_argument("--improper", action="store_true", help="draw from the det=-1 coset")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=_cmd_rotate, format="json")

    p = sub.add_parser("orbit-compare", help="decide whether two tensors share an orbit")
    p.add_argument("--a-file", required=True, help="first tensor (JSON)")
    p.add_argument("--b-file", required=True, help="second tensor (JSON)")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--align", action="store_true",
                   help="also run the brute-force alignment search")
    p.add_argument("--group", choices=GROUPS, default="O(3)")
    p.add_argument("--starts", type=int, default=AlignmentConfig.starts)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=_cmd_orbit_compare, format="json")

    p = sub.add_parser("independence", help="Jacobian rank evidence at random points")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=_cmd_independence, format="json")

    p = sub.add_parser("repro", help="run the fixed reference constructions")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=_cmd_repro)

    p = sub.add_parser("rand-tensor", help="draw a random tensor")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(handler=_cmd_rand_tensor, format="json")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    try:
        CliConfig(
            subcommand=args.subcommand,
            file=getattr(args, "file", None),
            seed=getattr(args, "seed", None),
            tol=getattr(args, "tol", None),
            output_format=getattr(args, "format", "json"),
        )
        return args.handler(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
