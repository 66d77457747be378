#!/usr/bin/env python3
"""
Command-line front end for squeezelab.

Every subcommand reads a Hamiltonian spec (JSON or TOML), runs one stage of
the pipeline and writes a JSON report to ``--out`` or standard output:

    squeezelab diagonalize --spec h.json
    squeezelab state --spec h.json --kind scfs --alpha 0.3,0.1j --n 1,0 --fock-upto 4
    squeezelab verify --spec h.json --cutoff 40 --out verify.json
    squeezelab worked-example

Exit codes: 0 success, 1 a check failed, 2 bad input (including a bad
``SQUEEZELAB_*`` environment value), 3 a resource limit of the oracle.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from squeezelab import example_data
from squeezelab.bogoliubov import (
    BTMatrix,
    DiagonalizationResult,
    apply_phase,
    check_symplectic,
    diagonalize,
    ground_displacement,
    reconstruction_residual,
    stability_gap,
)
from squeezelab.common.helpers import (
    CArray,
    make_registry_decorator,
    matrix_to_pairs,
    max_abs,
    parse_complex_list,
    parse_index_list,
    vector_to_pairs,
)
from squeezelab.decompose import bloch_messiah, classify_special_case, mixed_boson_frame
from squeezelab.model import (
    BilinearHamiltonian,
    ensure_valid,
    load_spec,
    serialize_spec,
    validate,
)
from squeezelab.oracle import (
    TruncatedFockSpace,
    build_closed_form_state,
    build_hamiltonian,
    ground_state,
    numeric_moments,
    overlap,
)
from squeezelab.report import Report
from squeezelab.settings.config import Settings
from squeezelab.settings.custom_types import (
    BranchCutError,
    JSONType,
    ResourceLimitError,
    SpecInputError,
    SqueezeLabError,
    StateParameterError,
    TailMassTooLarge,
)
from squeezelab.settings.global_variables import (
    BT_ATOL,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_RESOURCE_ERROR,
    EXIT_VERIFICATION_FAILED,
    RECONSTRUCTION_RTOL,
)
from squeezelab.squeezeop import (
    disentangle,
    exponent_form,
    generator_invariance_residual,
    is_standard_two_mode,
    one_mode_reduce,
)
from squeezelab.states import (
    StateDescriptor,
    StateKind,
    covariance,
    fock_amplitudes,
    mean_photon,
    original_frame_displacement,
    photon_variance,
    wavefn_coherent,
    wavefn_coordinate,
)

logger = logging.getLogger(__name__)

Command = Callable[[argparse.Namespace, Settings], Report]

COMMANDS: dict[str, Command] = {}
command = make_registry_decorator(COMMANDS)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Golden comparisons of the worked example.
_GOLDEN_ATOL = 1e-10


def parse_real_list(text: str) -> list[float]:
    """Parse a comma-separated list of real numbers."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError("empty list")
    return [float(item) for item in items]


# -------------------- Shared stages --------------------


def _read_hamiltonian(path: str | None) -> BilinearHamiltonian:
    """
    Load and validate a spec file.

    On a failed invariant the full validation report goes to stderr before
    the first failure is raised.
    """
    if path is None:
        raise SpecInputError("--spec is required for this command")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecInputError(f"cannot read spec file {path}: {exc}") from exc
    fmt = "toml" if path.endswith(".toml") else None
    h = load_spec(text, fmt).to_hamiltonian()
    report = validate(h)
    if not report.ok:
        print(json.dumps(report.to_dict(), indent=2), file=sys.stderr)
        ensure_valid(h)
    logger.info("loaded %d-mode spec from %s", h.n_modes, path)
    return h


def _echo_input(h: BilinearHamiltonian, path: str | None) -> dict[str, JSONType]:
    echo: dict[str, JSONType] = json.loads(serialize_spec(h))
    if path is not None:
        echo["path"] = path
    return echo


def _diagonalization_sections(report: Report, h: BilinearHamiltonian) -> DiagonalizationResult:
    result = diagonalize(h)
    residuals = check_symplectic(result.bt)
    rec = reconstruction_residual(h, result)
    report.add_section("omega", [float(w) for w in result.omega])
    report.add_section("bt", result.bt.to_dict())
    report.add_section("symplectic_residuals", residuals.to_dict())
    report.add_section("ground_energy", result.ground_energy)
    report.add_section("stability_gap", stability_gap(h, result))
    if h.is_driven:
        report.add_section("alpha", vector_to_pairs(result.alpha))
        report.add_section("energy_shift", result.energy_shift)
        report.add_section("ground_displacement", vector_to_pairs(ground_displacement(result)))
    report.add_check("symplectic", residuals.max, BT_ATOL)
    report.add_check("reconstruction", rec, RECONSTRUCTION_RTOL)
    return result


def _align_rows(bt: BTMatrix, reference_u: CArray) -> BTMatrix:
    """Remove the row phases D of ``bt``, u = D·u_ref, using the first column."""
    ratio = bt.u[:, 0] / reference_u[:, 0]
    return apply_phase(bt, -np.angle(ratio))


def _state_statistics(s: StateDescriptor) -> dict[str, JSONType]:
    cov = covariance(s)
    return {
        "state": s.to_dict(),
        "mean_n": [float(x) for x in mean_photon(s)],
        "var_n": [float(x) for x in photon_variance(s)],
        "displacement": vector_to_pairs(original_frame_displacement(s)),
        "covariance": cov.to_dict(),
        "uncertainty_products": [float(x) for x in cov.uncertainty_products()],
    }


# -------------------- Subcommands --------------------


@command("diagonalize")
def cmd_diagonalize(args: argparse.Namespace, settings: Settings) -> Report:
    h = _read_hamiltonian(args.spec)
    report = Report("diagonalize", input=_echo_input(h, args.spec))
    _diagonalization_sections(report, h)
    return report


@command("squeeze-op")
def cmd_squeeze_op(args: argparse.Namespace, settings: Settings) -> Report:
    h = _read_hamiltonian(args.spec)
    report = Report("squeeze-op", input=_echo_input(h, args.spec))
    bt = _diagonalization_sections(report, h).bt

    so = disentangle(bt)
    disentangled = so.to_dict()
    disentangled["spectral_radius"] = so.spectral_radius
    report.add_section("disentangled", disentangled)
    scale = max(1.0, max_abs(bt.matrix))
    report.add_check(
        "disentangled_reconstruction", max_abs(so.reconstruct() - bt.matrix), RECONSTRUCTION_RTOL * scale
    )
    report.add_check("rho_spectral_radius", so.spectral_radius, 1.0)

    try:
        form = exponent_form(bt)
    except BranchCutError as exc:
        report.add_section("exponent", {"error": str(exc)})
    else:
        blocks = form.block_residual()
        report.add_section(
            "exponent",
            {
                "generator": matrix_to_pairs(form.generator),
                "log_m": matrix_to_pairs(form.log_m),
                "block_residuals": {k: float(v) for k, v in blocks.items()},
            },
        )
        report.add_check("exponent_round_trip", form.round_trip_residual(bt), RECONSTRUCTION_RTOL * scale)
        report.add_check("log_m_blocks", max(blocks.values()), RECONSTRUCTION_RTOL * scale)
        report.add_check(
            "generator_invariance", generator_invariance_residual(bt, form), RECONSTRUCTION_RTOL * scale**3
        )

    if bt.n_modes == 1:
        zeta = one_mode_reduce(bt)
        report.add_section("one_mode", {"zeta": [zeta.real, zeta.imag]})
    elif bt.n_modes == 2:
        report.add_section("two_mode", is_standard_two_mode(bt).to_dict())
    return report


@command("decompose")
def cmd_decompose(args: argparse.Namespace, settings: Settings) -> Report:
    h = _read_hamiltonian(args.spec)
    report = Report("decompose", input=_echo_input(h, args.spec))
    bt = _diagonalization_sections(report, h).bt

    factors = bloch_messiah(bt)
    frame = mixed_boson_frame(bt, factors)
    decomposition = factors.to_dict()
    decomposition["cosh_r"] = [float(c) for c in np.cosh(factors.r_vals)]
    decomposition["special_case"] = classify_special_case(factors)
    decomposition["frame_covariance"] = frame.cov_in_frame.to_dict()
    report.add_section("decomposition", decomposition)

    rebuilt = factors.reconstruct()
    scale = max(1.0, max_abs(bt.matrix))
    report.add_check(
        "decomposition_reconstruction",
        max(max_abs(rebuilt.u - bt.u), max_abs(rebuilt.v - bt.v)),
        RECONSTRUCTION_RTOL * scale,
    )
    report.add_check(
        "frame_minimum_uncertainty",
        float(np.max(np.abs(frame.cov_in_frame.uncertainty_products() - 1 / 16))),
        RECONSTRUCTION_RTOL * scale**4,
    )
    return report


def _build_state(args: argparse.Namespace) -> tuple[StateDescriptor, BilinearHamiltonian | None]:
    kind = StateKind(args.kind)
    if kind.displaced and args.alpha is None:
        raise StateParameterError(f"{kind.value} state needs --alpha")
    if kind.excited and args.n is None:
        raise StateParameterError(f"{kind.value} state needs --n")
    if not kind.displaced and args.alpha is not None:
        raise StateParameterError(f"{kind.value} state takes no --alpha")
    if not kind.excited and args.n is not None:
        raise StateParameterError(f"{kind.value} state takes no --n")

    h = _read_hamiltonian(args.spec) if (kind.squeezed or args.spec) else None
    if h is not None:
        n_modes = h.n_modes
    else:
        n_modes = len(args.alpha) if args.alpha is not None else len(args.n)
    bt = diagonalize(h).bt if (h is not None and kind.squeezed) else None
    return StateDescriptor.build(kind, n_modes, bt=bt, alpha=args.alpha, n=args.n), h


@command("state")
def cmd_state(args: argparse.Namespace, settings: Settings) -> Report:
    s, h = _build_state(args)
    report = Report("state", input=_echo_input(h, args.spec) if h is not None else {})
    report.add_section("statistics", _state_statistics(s))
    products = covariance(s).uncertainty_products()
    report.add_check("heisenberg_bound", float(1 / 16 - np.min(products)), 1e-12)

    if args.fock_upto is not None:
        amps = fock_amplitudes(s, args.fock_upto + 1)
        report.add_section(
            "fock_amplitudes",
            [{"m": list(m), "amplitude": [float(amps[m].real), float(amps[m].imag)]} for m in np.ndindex(amps.shape)],
        )
    samples: list[JSONType] = []
    for beta in args.coherent_at or []:
        if len(beta) != s.n_modes:
            raise StateParameterError(f"--coherent-at needs {s.n_modes} entries, got {len(beta)}")
        value = wavefn_coherent(s, beta)
        samples.append({"beta": vector_to_pairs(beta), "amplitude": [value.real, value.imag]})
    if samples:
        report.add_section("coherent_amplitudes", samples)
    coords: list[JSONType] = []
    for x in args.coord_at or []:
        value = wavefn_coordinate(s, x)
        coords.append({"x": [float(xi) for xi in x], "amplitude": [value.real, value.imag]})
    if coords:
        report.add_section("coordinate_amplitudes", coords)
    return report


@command("verify")
def cmd_verify(args: argparse.Namespace, settings: Settings) -> Report:
    """Closed forms against brute-force diagonalization in a truncated space."""
    h = _read_hamiltonian(args.spec)
    report = Report("verify", input=_echo_input(h, args.spec))
    result = diagonalize(h)
    tol = settings.tol

    space = TruncatedFockSpace(h.n_modes, args.cutoff)
    if h.is_driven:
        closed_state = StateDescriptor.scs(result.bt, ground_displacement(result))
    else:
        closed_state = StateDescriptor.svs(result.bt)
    closed = build_closed_form_state(closed_state, space, settings.tail_mass_limit)
    ground, energy = ground_state(build_hamiltonian(h, space))
    moments = numeric_moments(ground, space)

    report.add_section(
        "oracle",
        {
            "cutoff": args.cutoff,
            "dimension": space.dim,
            "tail_mass": closed.tail_mass,
            "closed_form_energy": result.ground_energy,
            "oracle_energy": energy,
            "closed_form_kind": closed_state.kind.value,
        },
    )
    report.add_check(
        "ground_energy", abs(energy - result.ground_energy), tol * max(1.0, abs(result.ground_energy))
    )
    report.add_check("ground_state_overlap", 1.0 - overlap(ground, closed), tol)

    mean_n, var_n = mean_photon(closed_state), photon_variance(closed_state)
    cov = covariance(closed_state).cov
    report.add_check("mean_photon", max_abs(moments.mean_n - mean_n), tol * max(1.0, max_abs(mean_n)))
    report.add_check("photon_variance", max_abs(moments.var_n - var_n), tol * max(1.0, max_abs(var_n)))
    report.add_check("covariance", max_abs(moments.cov.cov - cov), tol * max(1.0, max_abs(cov)))
    return report


@command("worked-example")
def cmd_worked_example(args: argparse.Namespace, settings: Settings) -> Report:
    """Run the embedded two-mode example through every stage against its golden values."""
    h = example_data.hamiltonian()
    report = Report("worked-example", input=json.loads(example_data.spec_text()))
    result = _diagonalization_sections(report, h)
    bt = result.bt

    def golden(name: str, got: object, want: object) -> None:
        residual = max_abs(np.asarray(got) - np.asarray(want))
        expected = matrix_to_pairs(want) if np.ndim(want) == 2 else vector_to_pairs(np.atleast_1d(want))
        report.add_check(name, residual, _GOLDEN_ATOL, expected=expected)

    golden("omega", result.omega, example_data.OMEGA)
    golden("abs_u", np.abs(bt.u), example_data.ABS_U)
    golden("abs_v", np.abs(bt.v), example_data.ABS_V)

    so = disentangle(bt)
    aligned = _align_rows(bt, example_data.REFERENCE_U)
    golden("u_up_to_row_phases", aligned.u, example_data.REFERENCE_U)
    golden("v_up_to_row_phases", aligned.v, example_data.REFERENCE_V)
    golden("rho", so.rho, example_data.RHO)
    golden("tau", disentangle(aligned).tau, example_data.TAU)
    golden("norm_magnitude", so.norm_magnitude, example_data.NORM_MAGNITUDE)
    golden("mean_photon", mean_photon(StateDescriptor.svs(bt)), example_data.MEAN_PHOTON)
    golden(
        "svs_amplitude_20",
        fock_amplitudes(StateDescriptor.svs(bt), 3)[2, 0],
        example_data.SVS_AMPLITUDE_20,
    )

    factors = bloch_messiah(bt)
    golden("cosh_r", np.cosh(factors.r_vals), example_data.COSH_R)
    golden("r_vals", factors.r_vals, example_data.R_VALS)
    golden("abs_s", np.abs(factors.s_rot), example_data.ABS_S)
    golden("abs_t", np.abs(factors.t_rot), example_data.ABS_T)

    pattern = example_data.LOG_M_PATTERN
    log_m = exponent_form(aligned).log_m
    report.add_check(
        "log_m_pattern", max_abs((np.linalg.inv(pattern) @ log_m @ pattern).imag), _GOLDEN_ATOL
    )
    two_mode = is_standard_two_mode(bt)
    report.add_flag("not_standard_two_mode", not two_mode.is_standard, two_mode.to_dict())

    report.add_section(
        "worked_example",
        {
            "rho": matrix_to_pairs(so.rho),
            "norm_magnitude": so.norm_magnitude,
            "decomposition": factors.to_dict(),
            "special_case": classify_special_case(factors),
        },
    )
    return report


# -------------------- Entry point --------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="Hamiltonian spec file (JSON, or TOML by .toml suffix)")
    common.add_argument("--out", help="write the report here instead of standard output")
    common.add_argument("--format", choices=["json"], default="json", help="report format")

    parser = argparse.ArgumentParser(prog="squeezelab", description="Multimode squeezing toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("diagonalize", "squeeze-op", "decompose"):
        sub.add_parser(name, parents=[common]).set_defaults(handler=name)

    state = sub.add_parser("state", parents=[common], help="statistics and amplitudes of a state")
    state.add_argument("--kind", required=True, choices=[k.value for k in StateKind])
    state.add_argument("--n", type=parse_index_list, help="occupation numbers, e.g. 1,0")
    state.add_argument("--alpha", type=parse_complex_list, help="displacement, e.g. 0.5,0.1+0.2j")
    state.add_argument("--fock-upto", type=int, help="report ⟨m|state⟩ for every mᵢ ≤ K")
    state.add_argument(
        "--coherent-at", type=parse_complex_list, action="append", help="coherent point β (repeatable)"
    )
    state.add_argument("--coord-at", type=parse_real_list, action="append", help="quadrature point X (repeatable)")
    state.set_defaults(handler="state")

    verify = sub.add_parser("verify", parents=[common], help="closed forms against the truncated oracle")
    verify.add_argument("--cutoff", type=int, default=30, help="Fock levels per mode")
    verify.set_defaults(handler="verify")

    example = sub.add_parser("worked-example", aliases=["paper-example"], parents=[common])
    example.set_defaults(handler="worked-example")
    return parser


def _write(report: Report, out: str | None) -> None:
    text = report.to_json()
    if out is None:
        print(text)
        return
    Path(out).write_text(text + "\n", encoding="utf-8")
    logger.info("report written to %s", out)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = Settings()
    except ValidationError as exc:
        print(f"error: invalid SQUEEZELAB_* setting: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    logging.basicConfig(level=settings.log_level, format=LOG_FORMAT, stream=sys.stderr)

    try:
        report = COMMANDS[args.handler](args, settings)
    except SpecInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except TailMassTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"suggested cutoff: {exc.suggested_cutoff}", file=sys.stderr)
        return EXIT_RESOURCE_ERROR
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE_ERROR
    except SqueezeLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILED

    _write(report, args.out)
    if not report.passed:
        logger.warning("failed checks: %s", ", ".join(report.failures))
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
