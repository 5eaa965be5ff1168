"""Command-line front end.

Subcommands: evolve, truth-table, sweep, emit-circuit, oracle pulse, regress.
Results go to standard output (or the file named by --out for tabular data);
diagnostics go to standard error.  Exit codes: 0 success, 1 computation
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import metrics
from .cavity import CavityParams, integrate_pulse
from .circuits import (
    GateKind,
    build_gate,
    circuit_text,
    run_circuit,
    single_ket,
    truth_table,
)
from .literals import format_coefficient, format_state, parse_state_literal
from .state import AtomGround, Polarization, norm_squared


def _parse_range(text: str) -> tuple[float, float, int]:
    """lo:hi:steps with inclusive endpoints; steps=1 collapses to lo."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if steps < 1:
        raise argparse.ArgumentTypeError("steps must be >= 1")
    return lo, hi, steps


def _gate(args: argparse.Namespace) -> GateKind:
    n = args.n if args.n is not None else metrics.default_gate(args.gate).n
    return GateKind(args.gate, n)


def _cavity_params(args: argparse.Namespace) -> CavityParams:
    eta_h = args.eta_h if args.eta_h is not None else args.eta
    eta_v = args.eta_v if args.eta_v is not None else args.eta
    return CavityParams(args.kappa, args.gamma, eta_h, eta_v, args.omega)


def _write_table(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _add_mode_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=("ideal", "real"), default="ideal")
    parser.add_argument("--kappa", type=float, default=1.0, help="kappa/g")
    parser.add_argument("--gamma", type=float, default=0.0, help="gamma/g")
    parser.add_argument("--eta", type=float, default=1.0, help="eta/g for both modes")
    parser.add_argument("--eta-h", type=float, default=None)
    parser.add_argument("--eta-v", type=float, default=None)
    parser.add_argument("--omega", type=float, default=0.0, help="detuning omega/g")
    parser.add_argument(
        "--accounting",
        choices=metrics.ACCOUNTINGS,
        default="compensated",
        help="splitter reflection-phase convention for circuit runs",
    )


def _cmd_evolve(args: argparse.Namespace) -> int:
    gate = _gate(args)
    state, line = parse_state_literal(args.input, expected_atoms=gate.n)
    circuit = build_gate(gate)
    if line != circuit.input_line:
        raise ValueError(f"input must enter on line l{circuit.input_line}")
    params = _cavity_params(args) if args.mode == "real" else None
    out = run_circuit(circuit, state, params, args.accounting)
    print(format_state(out))
    print(f"norm_squared = {norm_squared(out):.10g}")
    return 0


def _cmd_truth_table(args: argparse.Namespace) -> int:
    gate = _gate(args)
    params = _cavity_params(args) if args.mode == "real" else None
    table = truth_table(gate, params, args.accounting)
    lines = []
    for row in table:
        one = single_ket(row.output)
        if one is not None:
            ket, amp = one
            lines.append(
                f"{row.input.label()} -> {format_coefficient(amp)} {ket.label()}"
            )
        else:
            lines.append(f"{row.input.label()} -> {format_state(row.output)}")
    _write_table("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    gate = _gate(args)
    cfg = metrics.MetricConfig(
        fidelity_convention=args.fidelity_convention,
        initial_state=args.input if args.input else "uniform",
        omega_over_g=args.omega,
        accounting=args.accounting,
        efficiency_input=args.efficiency_input,
    )
    result = metrics.sweep(gate, args.metric, args.kappa, args.gamma, cfg)
    _write_table(result.to_csv(), args.out)
    if args.out:
        print(result.summary_json())
    elif args.summary:
        with open(args.summary, "w") as handle:
            handle.write(result.summary_json() + "\n")
    return 0


def _cmd_emit_circuit(args: argparse.Namespace) -> int:
    circuit = build_gate(_gate(args))
    _write_table(circuit_text(circuit) + "\n", args.out)
    return 0


def _cmd_oracle_pulse(args: argparse.Namespace) -> int:
    params = _cavity_params(args)
    atom = AtomGround.GH if args.atom == "gh" else AtomGround.GV
    pol = Polarization.H if args.pol.upper() == "H" else Polarization.V
    result = integrate_pulse(params, atom, pol, args.sigma, args.dt)
    if args.out:
        stride = max(len(result.times) // args.csv_rows, 1)
        rows = ["t,re_in,im_in,re_out_h,im_out_h,re_out_v,im_out_v"]
        out_h = result.out_same if pol is Polarization.H else result.out_cross
        out_v = result.out_cross if pol is Polarization.H else result.out_same
        for i in range(0, len(result.times), stride):
            rows.append(
                f"{result.times[i]:.10g},"
                f"{result.pulse_in[i].real:.10g},{result.pulse_in[i].imag:.10g},"
                f"{out_h[i].real:.10g},{out_h[i].imag:.10g},"
                f"{out_v[i].real:.10g},{out_v[i].imag:.10g}"
            )
        _write_table("\n".join(rows) + "\n", args.out)
    summary = {
        "kind": result.effective["kind"],
        "atom": str(result.atom),
        "input_polarization": str(result.input_polarization),
        "energy_in": result.energy_in,
        "energy_out": result.energy_out,
    }
    for key, value in result.effective.items():
        if key == "kind":
            continue
        summary[key] = {"re": value.real, "im": value.imag}
    print(json.dumps(summary, sort_keys=True))
    return 0


def _cmd_regress(args: argparse.Namespace) -> int:
    sys.stdout.write(metrics.run_regression())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgs",
        description="Simulator for photon-atom hybrid gates in a single-sided cavity",
    )
    parser.add_argument(
        "--config",
        default=None,
        help="flat key=value file supplying flag defaults (flags win on conflict)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run one gate on a product-state literal")
    p.add_argument("--gate", choices=("cnot", "fredkin", "toffoli"), required=True)
    p.add_argument("--n", type=int, default=None, help="atom count")
    p.add_argument("--input", required=True, help="product-state literal")
    _add_mode_flags(p)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("truth-table", help="evaluate all basis inputs")
    p.add_argument("--gate", choices=("cnot", "fredkin", "toffoli"), required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out", default=None)
    _add_mode_flags(p)
    p.set_defaults(func=_cmd_truth_table)

    p = sub.add_parser("sweep", help="grid sweep of a metric over (kappa/g, gamma/g)")
    p.add_argument("--gate", choices=("cnot", "fredkin", "toffoli"), required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--metric", choices=("fidelity", "efficiency"), required=True)
    p.add_argument("--kappa", type=_parse_range, required=True, help="lo:hi:steps")
    p.add_argument("--gamma", type=_parse_range, required=True, help="lo:hi:steps")
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--fidelity-convention", choices=metrics.FIDELITY_CONVENTIONS,
                   default="normalized")
    p.add_argument("--efficiency-input", choices=metrics.EFFICIENCY_INPUTS,
                   default="active_branch")
    p.add_argument("--accounting", choices=metrics.ACCOUNTINGS,
                   default="interferometric")
    p.add_argument("--input", default=None, help="explicit initial-state literal")
    p.add_argument("--out", default=None, help="CSV destination")
    p.add_argument("--summary", default=None, help="summary JSON destination")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("emit-circuit", help="print a circuit's step list")
    p.add_argument("--gate", choices=("cnot", "fredkin", "toffoli"), required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_emit_circuit)

    p = sub.add_parser("oracle", help="time-domain consistency oracle")
    oracle_sub = p.add_subparsers(dest="oracle_command", required=True)
    q = oracle_sub.add_parser("pulse", help="scatter a Gaussian pulse off one cavity")
    q.add_argument("--kappa", type=float, required=True, help="kappa/g")
    q.add_argument("--gamma", type=float, default=0.0, help="gamma/g")
    q.add_argument("--eta", type=float, default=1.0)
    q.add_argument("--eta-h", type=float, default=None)
    q.add_argument("--eta-v", type=float, default=None)
    q.add_argument("--omega", type=float, default=0.0)
    q.add_argument("--sigma", type=float, required=True, help="pulse bandwidth sigma/g")
    q.add_argument("--dt", type=float, default=None, help="step in 1/g (default 0.001/kappa)")
    q.add_argument("--atom", choices=("gh", "gv"), default="gh")
    q.add_argument("--pol", choices=("H", "V", "h", "v"), default="H")
    q.add_argument("--out", default=None, help="CSV destination for the envelopes")
    q.add_argument("--csv-rows", type=int, default=2000)
    q.set_defaults(func=_cmd_oracle_pulse)

    p = sub.add_parser("regress", help="check the reference metric points")
    p.set_defaults(func=_cmd_regress)

    return parser


def _inject_config(argv: list[str]) -> list[str]:
    """Expand --config FILE into leading flags so explicit flags override them."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    if at + 1 >= len(argv):
        return argv  # argparse will report the missing value
    path = argv[at + 1]
    pairs = []
    with open(path) as handle:
        for raw in handle:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            pairs.extend([f"--{key.strip().replace('_', '-')}", value.strip()])
    rest = argv[:at] + argv[at + 2 :]
    # keep subcommand words in front of the injected flags
    head = 0
    while head < len(rest) and not rest[head].startswith("-"):
        head += 1
    return rest[:head] + pairs + rest[head:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _inject_config(argv)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
