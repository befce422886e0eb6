"""
Command-line front end.

    qndsim verify [--json]
    qndsim analyze --scheme fig3_nopa --r 1.0 [--loss probe_out 0.9] ...
    qndsim analyze --config scheme.yaml
    qndsim sweep fig4_amplified 2 5 31 [-o table.csv] [--json]

Exit codes: 0 success, 1 a verification check failed, 2 usage, config or
internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from . import __version__
from .checks import run_all
from .config import SchemeConfig, StateSpec, load
from .errors import ConfigError, QndSimError
from .gaussian import apply, homodyne_stats
from .metrics import analyze, fmt, input_state, scheme_channel, sweep
from .schemes import SCHEME_NAMES, SchemeDescriptor, canonical_name

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _json_safe(obj):
    """Replace non-finite floats by ``None`` so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _dumps(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, allow_nan=False)


def cmd_verify(args) -> int:
    results = run_all(inject_fault=args.inject_fault)
    ok = all(res.passed for res in results)
    if args.json:
        print(_dumps({"passed": ok, "checks": [res.to_dict() for res in results]}))
    else:
        for res in results:
            status = "PASS" if res.passed else "FAIL"
            print(f"{status}  {res.name:<36} residual={res.residual:.3e}  tol={res.tolerance:.0e}")
        print("all checks passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def _config_from_args(args) -> SchemeConfig:
    if args.config:
        return load(args.config)
    if args.scheme is None or args.r is None:
        raise ConfigError("either --config or both --scheme and --r are required")

    def spec(pair):
        return StateSpec() if pair is None else StateSpec("coherent", *pair)

    return SchemeConfig(
        scheme=canonical_name(args.scheme),
        r=args.r,
        probe_state=spec(args.probe_coherent),
        signal_state=spec(args.signal_coherent),
        losses=tuple((port, float(eta)) for port, eta in args.loss or ()),
    )


def analysis_document(config: SchemeConfig) -> dict:
    """Full JSON payload of ``qndsim analyze`` for a configuration."""
    desc = SchemeDescriptor(config.scheme, config.r)
    probe = config.probe_state.to_state()
    signal = config.signal_state.to_state()
    report = analyze(desc, probe, signal, config.losses)
    out = apply(input_state(desc, probe, signal), scheme_channel(desc, config.losses))
    readout = {}
    for role, mode in (("probe", desc.probe), ("signal", desc.signal)):
        hd = homodyne_stats(out, mode, 0.0)
        readout[f"{role}_cosine"] = {"mode": mode, "mean": hd.mean, "variance": hd.variance}
    doc = report.to_dict()
    doc["readout"] = readout
    return doc


def cmd_analyze(args) -> int:
    config = _config_from_args(args)
    if args.dump_config:
        text = config.dump()
        if args.dump_config == "-":
            sys.stdout.write(text)
            return EXIT_OK
        with open(args.dump_config, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(_dumps(analysis_document(config)))
    return EXIT_OK


def cmd_sweep(args) -> int:
    args.scheme = canonical_name(args.scheme)
    if args.scheme not in SCHEME_NAMES:
        raise ConfigError(f"unknown scheme {args.scheme!r}; valid schemes: {', '.join(SCHEME_NAMES)}")
    if args.steps < 2:
        raise ConfigError(f"steps must be >= 2, got {args.steps}")
    table = sweep(args.scheme, args.r_min, args.r_max, args.steps)
    if args.json:
        text = _dumps(table.to_dict()) + "\n"
    else:
        header = f"qndsim {__version__} sweep {args.scheme} {fmt(args.r_min)} {fmt(args.r_max)} {args.steps}"
        text = replace(table, header_comment=header).to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qndsim", description="Quadrature QND scheme simulator"
    )
    parser.add_argument("--version", action="version", version=f"qndsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the built-in verification battery")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="print a JSON scheme report")
    p.add_argument("--config", help="YAML scheme configuration")
    p.add_argument("--scheme", help=f"one of {', '.join(SCHEME_NAMES)}")
    p.add_argument("--r", type=float, help="squeezing factor (gain G for 'ideal')")
    p.add_argument("--probe-coherent", nargs=2, type=float, metavar=("AC", "AS"))
    p.add_argument("--signal-coherent", nargs=2, type=float, metavar=("AC", "AS"))
    p.add_argument("--loss", nargs=2, action="append", metavar=("PORT", "ETA"),
                   help="pure loss at probe_in/signal_in/probe_out/signal_out")
    p.add_argument("--dump-config", metavar="PATH",
                   help="write the effective configuration as YAML ('-' for stdout only)")
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="sweep r and write a CSV table")
    p.add_argument("scheme", help="scheme name or alias fig1/fig3/fig4")
    p.add_argument("r_min", type=float)
    p.add_argument("r_max", type=float)
    p.add_argument("steps", type=int)
    p.add_argument("-o", "--out", help="output path (default stdout)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QndSimError, OSError) as exc:
        print(f"qndsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"qndsim {args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
