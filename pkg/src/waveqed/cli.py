"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 bad input (flags, parse or
validation errors), 3 numerical failure (ill-conditioned system or singular
node on a forced transfer solve), 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import transfer
from .errors import IllConditioned, ParseError, SingularNode, ValidationError
from .model import compute_gamma, parse_network
from .scattering import flux_report, solve
from .sweep import Axis, SweepError, SweepSpec, run_sweep, write_csv
from .verify import format_report, run_verify

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3, 4


def _err(msg: str) -> None:
    print(f"waveqed: {msg}", file=sys.stderr)


def _load_network(path: str):
    with open(path, "rb") as fh:
        return parse_network(fh.read())


def _fmt_complex(z: complex) -> str:
    return f"{z.real:+.12g}{z.imag:+.12g}j"


def _pretty(result) -> str:
    flux = flux_report(result)
    lines = [f"method: {result.method}"]
    for i, z in enumerate(result.transmitted, 1):
        lines.append(f"t[{i}] = {_fmt_complex(z)}   |t|^2 = {abs(z) ** 2:.12g}")
    for i, z in enumerate(result.reflected, 1):
        lines.append(f"r[{i}] = {_fmt_complex(z)}   |r|^2 = {abs(z) ** 2:.12g}")
    lines.append(f"flux in = {flux.incoming:.12g}, out = {flux.outgoing:.12g}, "
                 f"absorbed = {flux.absorbed:.12g}")
    return "\n".join(lines)


def cmd_solve(args) -> int:
    net = _load_network(args.network)
    result = solve(net, method=args.method)
    if args.output == "json":
        print(result.to_json())
    else:
        print(_pretty(result))
    return EXIT_OK


def cmd_dump_chain(args) -> int:
    net = _load_network(args.network)
    print(json.dumps(transfer.chain_to_json(transfer.build_chain(net))))
    return EXIT_OK


def _parse_gamma(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise SweepError(f"--gamma expects re,im; got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise SweepError(f"--gamma expects re,im; got {text!r}") from None


def _point_from_network(net) -> dict:
    """Interferometer parameters from a two-qubit, two-mode network file."""
    if net.modes != 2 or net.n_qubits != 2:
        raise SweepError("--network must describe 2 modes and 2 qubits")
    g1, g2 = (compute_gamma(q, net.k) for q in net.qubits)
    seg = net.segments[0]
    if g1 != g2 or seg.lengths[0] != seg.lengths[1] or seg.extra_phases[0] != 0:
        raise SweepError(
            "--network must have identical qubits, equal path lengths and no extra phase in mode 1"
        )
    return {
        "theta": net.k * seg.lengths[0],
        "phi": seg.extra_phases[1],
        "re_gamma": g1.real,
        "im_gamma": g1.imag,
    }


def cmd_sweep(args) -> int:
    fixed = {}
    if args.network is not None:
        fixed.update(_point_from_network(_load_network(args.network)))
    if args.gamma is not None:
        g = _parse_gamma(args.gamma)
        fixed["re_gamma"], fixed["im_gamma"] = g.real, g.imag
    if args.theta is not None:
        fixed["theta"] = args.theta
    if args.phi is not None:
        fixed["phi"] = args.phi

    axis1 = Axis.parse(args.axis1)
    axis2 = Axis.parse(args.axis2) if args.axis2 else None
    swept = {axis1.name} | ({axis2.name} if axis2 else set())
    explicit = {"re_gamma", "im_gamma"} if args.gamma is not None else set()
    explicit |= {n for n in ("theta", "phi") if getattr(args, n) is not None}
    clash = swept & explicit
    if clash:
        raise SweepError(f"parameter(s) {', '.join(sorted(clash))} both swept and fixed")
    for name in swept:
        fixed.pop(name, None)

    spec = SweepSpec(axis1=axis1, axis2=axis2, fixed=fixed)
    rows = run_sweep(spec, workers=args.workers)
    write_csv(rows, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_verify(grid=args.grid, seed=args.seed)
    sys.stdout.write(format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="waveqed",
        description="Single-photon scattering through qubits coupled to 1-D modes.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="scatter the drive through a network file")
    s.add_argument("network", help="network JSON file")
    s.add_argument("--method", choices=("transfer", "direct", "auto"), default="auto")
    s.add_argument("--output", choices=("json", "pretty"), default="json")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", help="grid sweep of the two-qubit interferometer to CSV")
    s.add_argument("--network", help="two-qubit interferometer network supplying the fixed point")
    s.add_argument("--gamma", help="identical-qubit gamma as re,im")
    s.add_argument("--theta", type=float, help="common path phase (rad)")
    s.add_argument("--phi", type=float, help="extra phase in mode 2 (rad)")
    s.add_argument("--axis1", required=True, help="name:from:to:steps")
    s.add_argument("--axis2", help="name:from:to:steps")
    s.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    s.set_defaults(func=cmd_sweep, workers=None)

    s = sub.add_parser("verify", help="run the built-in consistency checks")
    s.add_argument("--grid", choices=("coarse", "fine"), default="coarse")
    s.add_argument("--seed", type=int, default=42)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("dump-chain", help="print the transfer-matrix chain as JSON")
    s.add_argument("network", help="network JSON file")
    s.set_defaults(func=cmd_dump_chain)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except (ParseError, ValidationError, SweepError) as e:
        _err(str(e))
        return EXIT_INPUT
    except (IllConditioned, SingularNode) as e:
        _err(str(e))
        return EXIT_NUMERIC
    except OSError as e:
        _err(str(e))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
