"""``gauss-reduce`` command-line front end.

Exit codes: 0 success/equivalent, 1 constraint violation or not
equivalent, 2 input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import builtins as named
from .bogoliubov import GaussianTransform, transform_distance, validate
from .elements import Circuit, compile_circuit
from .errors import InvalidInput, NumericalFailure, UnsupportedInput
from .gaussian_state import verify_single_excitation_structure
from .interferometer import full_circuit, mixing_angle
from .kernels import ToleranceConfig
from .reduction import recompose, reduce, squeeze_spectrum, squeezer_count, squeezing_db
from .serialization import (
    circuit_to_dict,
    encode_complex,
    form_to_dict,
    load_circuit_or_transform,
    load_json,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2, 3

COMMANDS = ("validate", "reduce", "synthesize", "equiv", "spectrum", "nogo", "qnd-demo")


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, payload: dict, lines: list[str]) -> None:
        if self.fmt == "json":
            json.dump(payload, self.stream, indent=2)
            self.stream.write("\n")
        else:
            self.stream.write("\n".join(lines) + "\n")


def _fmt_complex_matrix(M, indent="  ") -> list[str]:
    rows = []
    for row in np.atleast_2d(M):
        rows.append(indent + "  ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row))
    return rows


def _fmt_vec(v, fmt="{:.6f}") -> str:
    return "[" + ", ".join(fmt.format(x) for x in v) + "]"


def _as_transform(obj) -> GaussianTransform:
    return compile_circuit(obj) if isinstance(obj, Circuit) else obj


def _load_inputs(args, count: int) -> list[GaussianTransform]:
    if args.builtin:
        if count == 2:
            return [compile_circuit(c) for c in named.builtin_pair(args.builtin)]
        return [compile_circuit(named.builtin_circuit(args.builtin, args.seed))]
    if len(args.inputs) != count:
        raise InvalidInput(f"{args.command} needs {count} input file(s) or --builtin, got {len(args.inputs)}")
    return [_as_transform(load_circuit_or_transform(load_json(p))) for p in args.inputs]


def _require_valid(T: GaussianTransform, tol: ToleranceConfig, out: Output) -> bool:
    report = validate(T, tol)
    if report.valid:
        return True
    out.emit({"valid": False, "validation": report.as_dict()},
             [f"invalid transform: max residual {report.max_residual:.3e} > {tol.structural_tol:.1e}"])
    return False


def cmd_validate(args, tol, out) -> int:
    (T,) = _load_inputs(args, 1)
    report = validate(T, tol)
    lines = [f"n_modes: {T.n_modes}"]
    lines += [f"{k}: {getattr(report, k):.3e}" for k in ("rel1", "rel2", "rel3", "rel4")]
    lines.append("valid" if report.valid else "INVALID")
    out.emit({"n_modes": T.n_modes, **report.as_dict()}, lines)
    return EXIT_OK if report.valid else EXIT_VIOLATION


def cmd_reduce(args, tol, out) -> int:
    (T,) = _load_inputs(args, 1)
    if not _require_valid(T, tol, out):
        return EXIT_VIOLATION
    form = reduce(T, tol)
    residual = transform_distance(recompose(form, tol), T)
    db = squeezing_db(form.r)
    squeezers = [{"mode": m, "r": float(r), "db": float(d)} for m, (r, d) in enumerate(zip(form.r, db)) if r > 0]
    payload = {**form_to_dict(form), "db": [float(x) for x in db], "squeezers": squeezers, "residual": residual}
    lines = [f"squeezers: {len(squeezers)}"]
    lines += [f"  mode {s['mode']}: r = {s['r']:.9f}  ({s['db']:.3f} dB)" for s in squeezers]
    lines += ["U ="] + _fmt_complex_matrix(form.U) + ["V ="] + _fmt_complex_matrix(form.V)
    lines += [f"beta = {encode_complex(form.beta)}", f"recomposition residual: {residual:.3e}"]
    out.emit(payload, lines)
    return EXIT_OK


def cmd_spectrum(args, tol, out) -> int:
    (T,) = _load_inputs(args, 1)
    if not _require_valid(T, tol, out):
        return EXIT_VIOLATION
    spec = squeeze_spectrum(T, tol)
    count = squeezer_count(T, tol.structural_tol, tol)
    out.emit({"spectrum": [float(x) for x in spec], "db": [float(x) for x in squeezing_db(spec)],
              "squeezer_count": count},
             [f"spectrum: {_fmt_vec(spec, '{:.9f}')}", f"dB: {_fmt_vec(squeezing_db(spec), '{:.3f}')}",
              f"squeezers required: {count}"])
    return EXIT_OK


def cmd_synthesize(args, tol, out) -> int:
    (T,) = _load_inputs(args, 1)
    if not _require_valid(T, tol, out):
        return EXIT_VIOLATION
    circuit = full_circuit(reduce(T, tol), tol)
    distance = transform_distance(compile_circuit(circuit), T)
    payload = {"circuit": circuit_to_dict(circuit), "recompile_distance": distance,
               "squeezer_count": circuit.count("squeezer")}
    lines = [f"{len(circuit.elements)} elements, {circuit.count('squeezer')} squeezers, "
             f"{circuit.count('beamsplitter')} beam splitters"]
    for el in circuit.elements:
        params = ", ".join(
            f"{k}={np.degrees(v):.4f} deg" if k in ("theta", "phi") else f"{k}={v}"
            for k, v in el.params.items()
        )
        lines.append(f"  {el.kind} {el.modes} {params}")
    lines.append(f"recompile distance: {distance:.3e}")
    out.emit(payload, lines)
    return EXIT_OK if distance <= 10 * tol.structural_tol else EXIT_NUMERICAL


def cmd_equiv(args, tol, out) -> int:
    T1, T2 = _load_inputs(args, 2)
    if T1.n_modes != T2.n_modes:
        raise InvalidInput(f"mode-count mismatch: {T1.n_modes} vs {T2.n_modes}")
    for T in (T1, T2):
        if not _require_valid(T, tol, out):
            return EXIT_VIOLATION
    payload = {"mode": args.mode}
    if args.mode == "exact":
        distance = transform_distance(T1, T2)
    else:
        s1, s2 = squeeze_spectrum(T1, tol), squeeze_spectrum(T2, tol)
        distance = float(np.max(np.abs(s1 - s2))) if s1.size else 0.0
        payload.update(spectrum_a=[float(x) for x in s1], spectrum_b=[float(x) for x in s2])
    equivalent = distance <= 10 * tol.structural_tol
    payload.update(distance=distance, equivalent=equivalent)
    lines = [f"mode: {args.mode}", f"distance: {distance:.3e}"]
    if args.mode == "spectrum":
        lines += [f"spectrum A: {_fmt_vec(payload['spectrum_a'])}", f"spectrum B: {_fmt_vec(payload['spectrum_b'])}"]
    lines.append("equivalent" if equivalent else "NOT equivalent")
    out.emit(payload, lines)
    return EXIT_OK if equivalent else EXIT_VIOLATION


def cmd_nogo(args, tol, out) -> int:
    (T,) = _load_inputs(args, 1)
    if not _require_valid(T, tol, out):
        return EXIT_VIOLATION
    click = T.n_modes - 1 if args.click is None else args.click
    report = verify_single_excitation_structure(T, args.vacuum, click, args.cutoff, tol=tol)
    payload = {"click_mode": click, "vacuum_modes": list(args.vacuum), **report.as_dict()}
    lines = [f"click mode {click}, vacuum on {list(args.vacuum)}, cutoff {args.cutoff}"]
    if report.null:
        lines.append("null click: no first-order single-photon amplitude")
    else:
        lines.append(f"conditioned modes: {list(report.modes)}")
        lines.append("coefficients c_m:")
        lines += _fmt_complex_matrix([report.coeffs])
        lines.append("base Gaussian matrix:")
        lines += _fmt_complex_matrix(report.base_matrix) if report.base_matrix.size else ["  (none)"]
        lines.append(f"one-photon weight: {report.one_photon_weight:.9f}")
    lines += [f"oracle discrepancy: {report.discrepancy:.3e}", f"span fit residual: {report.fit_residual:.3e}",
              "single-excitation structure confirmed" if report.confirmed else "structure NOT confirmed"]
    out.emit(payload, lines)
    return EXIT_OK if report.confirmed else EXIT_VIOLATION


def cmd_qnd_demo(args, tol, out) -> int:
    T = compile_circuit(named.qnd_circuit())
    form = reduce(T, tol)
    reduced_residual = transform_distance(recompose(form, tol), T)
    unbalanced = transform_distance(recompose(named.qnd_unbalanced_form(), tol), T)
    balanced = transform_distance(recompose(named.qnd_balanced_form(), tol), T)
    theta_u, theta_v = mixing_angle(form.U), mixing_angle(form.V)
    transmissions = [float(np.cos(theta_u) ** 2), float(np.cos(theta_v) ** 2)]
    db = squeezing_db(form.r)
    payload = {
        "A": encode_complex(T.A), "B": encode_complex(T.B),
        "r": [float(x) for x in form.r], "db": [float(x) for x in db],
        "theta": theta_v, "theta_U": theta_u, "theta_V": theta_v,
        "transmissions": transmissions,
        "U": encode_complex(form.U), "V": encode_complex(form.V),
        "residuals": {"reduction": reduced_residual, "unbalanced_witness": unbalanced,
                      "balanced_witness": balanced},
    }
    lines = ["QND coupling:", "A ="] + _fmt_complex_matrix(T.A) + ["B ="] + _fmt_complex_matrix(T.B)
    lines += [
        f"squeezing r = {_fmt_vec(form.r, '{:.9f}')}  ({_fmt_vec(db, '{:.3f}')} dB)",
        f"theta = {np.degrees(theta_v):.4f} deg",
        f"U mixing angle {np.degrees(theta_u):.4f} deg, transmission {100 * transmissions[0]:.2f}%",
        f"V mixing angle {np.degrees(theta_v):.4f} deg, transmission {100 * transmissions[1]:.2f}%",
        f"reduction residual: {reduced_residual:.3e}",
        f"unbalanced-splitter witness residual: {unbalanced:.3e}",
        f"50:50-splitter witness residual: {balanced:.3e}",
    ]
    out.emit(payload, lines)
    worst = max(reduced_residual, unbalanced, balanced)
    return EXIT_OK if worst <= 10 * tol.structural_tol else EXIT_NUMERICAL


HANDLERS = {
    "validate": cmd_validate,
    "reduce": cmd_reduce,
    "synthesize": cmd_synthesize,
    "equiv": cmd_equiv,
    "spectrum": cmd_spectrum,
    "nogo": cmd_nogo,
    "qnd-demo": cmd_qnd_demo,
}


def _mode_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated mode indices, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gauss-reduce",
                                     description="Bloch-Messiah reduction of linear optical circuits.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("inputs", nargs="*", help="circuit or transform JSON file(s)")
    parser.add_argument("--builtin", help="named circuit: qnd, d2, e4, fig2, fig3, random")
    parser.add_argument("--tol", type=float, help="structural tolerance (default 1e-10)")
    parser.add_argument("--degeneracy-tol", type=float, help="degeneracy tolerance (default 1e-8)")
    parser.add_argument("--cutoff", type=int, default=6, help="photon cutoff for Fock oracles")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--click", type=int, help="mode with the single-photon click (default: last)")
    parser.add_argument("--vacuum", type=_mode_list, default=[], help="modes detected in vacuum, e.g. 1,2")
    parser.add_argument("--mode", choices=("exact", "spectrum"), default="exact")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out = Output(args.format)
    try:
        if args.cutoff < 0:
            raise InvalidInput("cutoff must be non-negative")
        tol = ToleranceConfig.from_env(structural_tol=args.tol, degeneracy_tol=args.degeneracy_tol)
        return HANDLERS[args.command](args, tol, out)
    except NumericalFailure as exc:
        print(f"error: {exc} (achieved residual {exc.residual:.3e})", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidInput, UnsupportedInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
