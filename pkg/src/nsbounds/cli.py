"""Command-line front end.

Exit codes: 0 certified (or verify passed), 2 not certified, 1 usage or
input error, 3 oracle failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from .config import ConfigError, RunConfig, load_config
from .forces import ForceError, force_certificate
from .geometry import GeometryError, conda_check
from .inflow import InflowError
from .report import certificate_to_dict, dumps, force_report_to_dict, num, write_or_print
from .verification import FAIL, format_table, run_suite
from .wellposedness import FluidParams, certify

EXIT_OK, EXIT_INPUT, EXIT_NOT_CERTIFIED, EXIT_ORACLE = 0, 1, 2, 3

SWEEP_COLUMNS = [
    "param", "phi", "threshold", "margin", "beta", "grad_bound_rough",
    "grad_bound_sharp", "drag_bound", "lift_bound", "status",
]


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nsbounds", description="Certified a priori bounds for channel flow past an obstacle.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, need_config=True, fmt="json"):
        p.add_argument("--config", required=need_config, help="flat key = value run configuration")
        p.add_argument("--out", help="output file (default: output.path from config, else stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=fmt)
        return p

    common(sub.add_parser("certify", help="existence/uniqueness certificate"))
    p = common(sub.add_parser("forces", help="drag and lift bounds (cubic box, cosine inflow)"))
    p.add_argument("--grad-bound", choices=("rough", "sharp"), default="rough")
    p = common(sub.add_parser("sweep", help="table over one parameter"), fmt="csv")
    p.add_argument("--grad-bound", choices=("rough", "sharp"), default="rough")
    p.add_argument("--workers", type=int, default=4, help="concurrent row evaluations")
    p = common(sub.add_parser("verify", help="run the numerical oracle suite"), need_config=False, fmt="csv")
    p.add_argument("--eig-n", type=int, help="interior points per axis for the eigenvalue check")
    return parser


def _out_path(args, cfg: RunConfig | None):
    if args.out:
        return args.out
    return cfg.output_path if cfg is not None else None


def _require_json(args):
    if args.format != "json":
        raise InputError(f"{args.command} writes JSON only")


def cmd_certify(args, cfg: RunConfig) -> int:
    _require_json(args)
    cert = certify(cfg.geometry, FluidParams(cfg.viscosity), cfg.inflow())
    write_or_print(dumps(certificate_to_dict(cert, cfg.stokes_forcing)), _out_path(args, cfg))
    return EXIT_OK if cert.certified else EXIT_NOT_CERTIFIED


def cmd_forces(args, cfg: RunConfig) -> int:
    _require_json(args)
    if cfg.inflow_type != "analytic":
        raise InputError("forces needs inflow.type = analytic (cosine profile)")
    rep = force_certificate(
        cfg.geometry, FluidParams(cfg.viscosity), cfg.amplitude, args.grad_bound, allow_uncertified=True
    )
    write_or_print(dumps(force_report_to_dict(rep)), _out_path(args, cfg))
    return EXIT_OK if rep.certificate.certified else EXIT_NOT_CERTIFIED


def sweep_row(cfg: RunConfig, base_datum, value: float, grad_bound: str = "rough") -> dict:
    """One sweep row; parameter values that break an input invariant give ``status=invalid``."""
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row["param"] = num(value)
    param = cfg.sweep.param
    try:
        if param == "amplitude" and cfg.inflow_type == "sampled":
            # for sampled data the swept value multiplies the file datum
            run, datum = cfg, base_datum.scaled(value)
        else:
            run = cfg.with_param(param, value)
            datum = run.inflow() if param == "amplitude" else base_datum
        fluid = FluidParams(run.viscosity)
        cert = certify(run.geometry, fluid, datum)
    except (GeometryError, InflowError, ValueError):
        row["status"] = "invalid"
        return row
    row.update(
        phi=num(cert.phi), threshold=num(cert.threshold), margin=num(cert.margin),
        beta=num(cert.beta), grad_bound_rough=num(cert.grad_bound_rough),
        grad_bound_sharp=num(cert.grad_bound_sharp) if cert.grad_bound_sharp is not None else "",
        status=cert.status.value,
    )
    g = run.geometry
    if run.inflow_type == "analytic" and g.is_cubic_box and conda_check(g):
        rep = force_certificate(g, fluid, datum.amplitude, grad_bound, allow_uncertified=True)
        if math.isfinite(rep.bounds.drag_bound):
            row["drag_bound"] = num(rep.bounds.drag_bound)
            row["lift_bound"] = num(rep.bounds.lift_bound)
    return row


def cmd_sweep(args, cfg: RunConfig) -> int:
    if cfg.sweep is None:
        raise InputError("config has no sweep block (sweep.param, sweep.lo, sweep.hi, sweep.steps)")
    base = cfg.inflow() if not (cfg.sweep.param == "amplitude" and cfg.inflow_type == "analytic") else None
    values = cfg.sweep.values()
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        rows = list(pool.map(lambda v: sweep_row(cfg, base, v, args.grad_bound), values))
    if args.format == "json":
        text = dumps({"param_name": cfg.sweep.param, "rows": rows})
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    write_or_print(text, _out_path(args, cfg))
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig | None) -> int:
    eig_n = args.eig_n or (cfg.eig_n if cfg is not None else 64)
    if eig_n < 8:
        raise InputError("--eig-n must be >= 8")
    rows = []
    for r in run_suite(eig_n=eig_n):
        rows.append(r)
        print(f"[{r.status}] {r.name} ({r.seconds:.1f}s)", file=sys.stderr, flush=True)
    if args.format == "json":
        text = dumps({"checks": [r.__dict__ | {"seconds": num(r.seconds)} for r in rows]})
    else:
        text = format_table(rows)
    write_or_print(text, _out_path(args, cfg))
    return EXIT_ORACLE if any(r.status == FAIL for r in rows) else EXIT_OK


_COMMANDS = {"certify": cmd_certify, "forces": cmd_forces, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config) if args.config else None
        return _COMMANDS[args.command](args, cfg)
    except (ConfigError, GeometryError, InflowError, ForceError, InputError, ValueError, OSError) as exc:
        print(f"nsbounds {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
