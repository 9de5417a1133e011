"""Batch command-line front end: parameter sweeps and CSV/JSON emission.

Configs are flat key=value files (``#`` comments allowed); ``--set`` flags
override individual keys. Every run writes the data table plus a sidecar
manifest recording the resolved parameters, and identical resolved specs
produce byte-identical primary output (floats at 17 significant digits,
``\\n`` line endings; the manifest timestamp lives only in the sidecar).

Exit codes: 0 success, 1 computation failure, 2 usage/configuration error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .channel_qlm import (ChannelPotentialParams, QlmConfig, default_qlm_grid,
                          harmonic_reference_potential, qlm_spectrum)
from .gates import (BELL_LABELS, CNOT, SWAP, Gate4, TwoQubitState, apply,
                    bell_state, cnot_from_sqrt_swap, concurrence,
                    exchange_evolution_expm, gate_fidelity, matrix_rows,
                    u_swap_alpha)
from .numerics import Grid1D
from .source_spectrum import SourceParams, build_hmatrix, chart_delta_e, spin_split
from .twoqubit_channel import TwoQubitParams, build_matrix, claimed_vs_numeric, expectations

__all__ = ["SweepSpec", "RunManifest", "ConfigError", "parse_config", "run", "main"]

STDOUT_MARKER = "-"

TARGET_SOURCE = "source_delta_e"
TARGET_CHANNEL = "channel_qlm"
TARGET_TWOQUBIT = "twoqubit_eigen"
TARGET_GATES = "gate_check"

_SUBCOMMANDS = {
    "source": TARGET_SOURCE,
    "channel": TARGET_CHANNEL,
    "twoqubit": TARGET_TWOQUBIT,
    "gates": TARGET_GATES,
}

# key -> (parser, default, help); defaults are authoritative and documented
# in --help. Enums parse as strings and are validated by the executors.
_SCHEMAS: dict[str, dict[str, tuple]] = {
    TARGET_SOURCE: {
        "m_eff": (float, 1.0, "effective mass ratio"),
        "omega": (float, 1.0, "confinement frequency"),
        "beta": (float, 0.5, "log-Coulomb strength"),
        "r_coulomb": (float, 1.0, "Coulomb length scale"),
        "alpha_r": (float, 0.2, "Rashba strength"),
        "l_x": (float, math.pi, "transverse width"),
        "k": (float, 1.0, "propagation wavenumber"),
        "reg_delta": (float, 1e-3, "log-singularity exclusion half-width"),
        "x_count": (int, 5, "number of interior x cross-sections in the chart"),
        "y_min": (float, -2.0, "chart y range start"),
        "y_max": (float, 2.0, "chart y range end"),
        "y_points": (int, 21, "chart y points"),
    },
    TARGET_CHANNEL: {
        "m_eff": (float, 1.0, "effective mass ratio"),
        "omega": (float, 1.0, "confinement frequency"),
        "a": (float, 1.0, "harmonic length"),
        "coulomb_k": (float, 0.0, "screened Coulomb strength"),
        "fermi_l": (float, 1.0, "Fermi length"),
        "include_vc": (int, 0, "1 to add the screened Coulomb term"),
        "potential": (str, "quartic", "quartic | harmonic (validation preset)"),
        "g": (float, 0.0, "zero-iterate slope; 0 means m_eff * omega"),
        "n_points": (int, 4001, "grid points on the half line"),
        "iterations": (int, 3, "quasilinearization iterations"),
        "dump_l": (str, "", "optional path for the final (y, l) samples"),
    },
    TARGET_TWOQUBIT: {
        "m_eff": (float, 1.0, "effective mass ratio"),
        "omega": (float, 1.0, "confinement frequency"),
        "a_b": (float, 1.0, "transverse harmonic length"),
        "lambda": (float, 1.0, "longitudinal Gaussian width"),
        "k": (float, 1.0, "plane-wave number"),
        "alpha_r": (float, 0.2, "Rashba strength"),
        "coulomb_k": (float, 0.0, "screened Coulomb strength"),
        "fermi_l": (float, 1.0, "Fermi length"),
        "wave_direction": (str, "along_y", "along_y | along_x"),
    },
    TARGET_GATES: {
        "alpha": (float, math.pi, "integrated exchange angle"),
        "dump_matrix": (str, "", "optional path for the U_SWAP^alpha matrix "
                                 "as (re, im) pairs"),
    },
}

_SWEEPABLE = {
    TARGET_SOURCE: ("m_eff", "omega", "beta", "alpha_r", "l_x", "k"),
    TARGET_CHANNEL: ("omega", "coulomb_k", "g"),
    TARGET_TWOQUBIT: ("omega", "k", "alpha_r", "coulomb_k", "lambda"),
    TARGET_GATES: ("alpha",),
}

_COLUMNS = {
    TARGET_SOURCE: ("x", "y", "e_up", "e_down", "delta_e"),
    TARGET_CHANNEL: ("n", "e_n"),
    TARGET_GATES: ("alpha", "swap_matches", "sqrt_swap_matches",
                   "projector_max_dev", "exp_phase_fidelity", "cnot_fidelity",
                   "cnot_bell_concurrence", "bell_concurrence_min"),
}


class ConfigError(ValueError):
    """Unusable configuration; maps to exit code 2."""


@dataclass
class SweepSpec:
    target: str
    parameter_overrides: dict = field(default_factory=dict)
    sweep_key: str | None = None
    sweep_range: tuple[float, float, int] | None = None
    output_format: str = "csv"
    output_path: str = STDOUT_MARKER


@dataclass
class RunManifest:
    tool_version: str
    timestamp: str
    resolved_parameters: dict
    input_hash: str


def _parse_sweep_range(text: str) -> tuple[float, float, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"sweep_range must be start,stop,steps; got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad sweep_range {text!r}: {exc}") from None
    if steps < 1:
        raise ConfigError("sweep_range steps must be >= 1")
    if start > stop:
        raise ConfigError("sweep_range start must be <= stop")
    return start, stop, steps


def parse_config(text: str) -> SweepSpec:
    """Parse a flat key=value config into a SweepSpec.

    The target key is required; parameter keys are validated against the
    target's schema and unknown keys are rejected with the valid list.
    """
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        pairs[key.strip()] = value.strip()

    target = pairs.pop("target", None)
    if target is None:
        raise ConfigError("target is required")
    if target not in _SCHEMAS:
        raise ConfigError(
            f"unknown target {target!r}; valid targets: {sorted(_SCHEMAS)}")

    spec = SweepSpec(target=target)
    if "format" in pairs:
        spec.output_format = pairs.pop("format")
    if "out" in pairs:
        spec.output_path = pairs.pop("out")
    if "sweep_key" in pairs:
        spec.sweep_key = pairs.pop("sweep_key")
    if "sweep_range" in pairs:
        spec.sweep_range = _parse_sweep_range(pairs.pop("sweep_range"))
    spec.parameter_overrides = pairs
    _resolve(spec)  # fail fast on unknown keys or bad values
    return spec


def _resolve(spec: SweepSpec) -> dict:
    """Full resolved parameter map (defaults plus overrides), typed."""
    schema = _SCHEMAS[spec.target]
    resolved = {key: default for key, (_, default, _) in schema.items()}
    for key, raw in spec.parameter_overrides.items():
        if key not in schema:
            raise ConfigError(
                f"unknown key {key!r} for target {spec.target!r}; "
                f"valid keys: {sorted(schema)}")
        caster = schema[key][0]
        try:
            resolved[key] = caster(raw)
        except (TypeError, ValueError):
            raise ConfigError(
                f"bad value {raw!r} for key {key!r} (expected {caster.__name__})"
            ) from None
    if spec.output_format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {spec.output_format!r}")
    if spec.sweep_key is not None:
        if spec.sweep_key not in _SWEEPABLE[spec.target]:
            raise ConfigError(
                f"sweep_key {spec.sweep_key!r} not valid for {spec.target!r}; "
                f"valid: {list(_SWEEPABLE[spec.target])}")
        if spec.sweep_range is None:
            raise ConfigError("sweep_key requires sweep_range")
    return resolved


def _sweep_values(spec: SweepSpec) -> list[float]:
    start, stop, steps = spec.sweep_range
    if steps == 1:
        return [start]
    return [start + (stop - start) * i / (steps - 1) for i in range(steps)]


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _execute_source(spec: SweepSpec, resolved: dict):
    params = {k: resolved[k] for k in
              ("m_eff", "omega", "beta", "r_coulomb", "alpha_r", "l_x", "k",
               "reg_delta")}
    if spec.sweep_key:
        columns = (spec.sweep_key, "e_up", "e_down", "delta_e")
        rows = []
        for value in _sweep_values(spec):
            p = SourceParams(**{**params, spec.sweep_key: value})
            s = spin_split(build_hmatrix(p))
            rows.append((value, s.e_up, s.e_down, s.delta_e))
        return columns, rows
    p = SourceParams(**params)
    n = resolved["x_count"]
    x_values = [p.l_x * (i + 1) / (n + 1) for i in range(n)]
    grid = Grid1D(resolved["y_min"], resolved["y_max"], resolved["y_points"])
    return _COLUMNS[TARGET_SOURCE], chart_delta_e(p, x_values, grid)


def _execute_channel(spec: SweepSpec, resolved: dict):
    kind = resolved["potential"]
    if kind not in ("quartic", "harmonic"):
        raise ConfigError("potential must be quartic or harmonic")

    def one(resolved_point: dict):
        p = ChannelPotentialParams(
            m_eff=resolved_point["m_eff"], omega=resolved_point["omega"],
            a=resolved_point["a"], coulomb_k=resolved_point["coulomb_k"],
            fermi_l=resolved_point["fermi_l"],
            include_vc=bool(resolved_point["include_vc"]))
        g = resolved_point["g"] or p.m_eff * p.omega
        cfg = QlmConfig(g=g, grid=default_qlm_grid(g, resolved_point["n_points"]),
                        max_iterations=resolved_point["iterations"])
        potential = None
        if kind == "harmonic":
            potential = lambda y: harmonic_reference_potential(p, y)
        return cfg, qlm_spectrum(p, cfg, potential=potential)

    if spec.sweep_key:
        columns = (spec.sweep_key, "n", "e_n")
        rows = []
        for value in _sweep_values(spec):
            _, iterates = one({**resolved, spec.sweep_key: value})
            rows.extend((value, it.n, it.e_n) for it in iterates)
        return columns, rows
    cfg, iterates = one(resolved)
    if resolved["dump_l"]:
        last = iterates[-1]
        lines = ["y,l"]
        lines += [f"{_fmt(y)},{_fmt(l)}"
                  for y, l in zip(cfg.grid.points(), last.l_n)]
        with open(resolved["dump_l"], "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    return _COLUMNS[TARGET_CHANNEL], [(it.n, it.e_n) for it in iterates]


def _twoqubit_params(resolved: dict) -> TwoQubitParams:
    return TwoQubitParams(
        m_eff=resolved["m_eff"], omega=resolved["omega"], a_b=resolved["a_b"],
        lam=resolved["lambda"], k=resolved["k"], alpha_r=resolved["alpha_r"],
        coulomb_k=resolved["coulomb_k"], fermi_l=resolved["fermi_l"],
        wave_direction=resolved["wave_direction"])


def _execute_twoqubit(spec: SweepSpec, resolved: dict):
    if spec.sweep_key:
        columns = (spec.sweep_key, "h0", "hr_re", "hr_im",
                   "e1_re", "e1_im", "e2_re", "e2_im",
                   "e3_re", "e3_im", "e4_re", "e4_im")
        rows = []
        for value in _sweep_values(spec):
            p = _twoqubit_params({**resolved, spec.sweep_key: value})
            h0, hr = expectations(p)
            report = claimed_vs_numeric(build_matrix(h0, hr))
            ev = report.numeric.eigenvalues
            rows.append((value, h0, hr.real, hr.imag,
                         ev[0].real, ev[0].imag, ev[1].real, ev[1].imag,
                         ev[2].real, ev[2].imag, ev[3].real, ev[3].imag))
        return columns, rows
    p = _twoqubit_params(resolved)
    h0, hr = expectations(p)
    report = claimed_vs_numeric(build_matrix(h0, hr))
    return report.to_json_dict(), None


def _gate_report(alpha: float) -> dict:
    u = u_swap_alpha(alpha)
    bells = [bell_state(label) for label in BELL_LABELS]
    projector = sum(
        phase * np.outer(b.amplitudes, b.amplitudes.conj())
        for b, phase in zip(bells, [1.0, 1.0, 1.0, np.exp(1j * alpha)]))
    exp_gate = exchange_evolution_expm(alpha)
    circuit, cnot = cnot_from_sqrt_swap()
    s = 1.0 / math.sqrt(2.0)
    plus_control = TwoQubitState(np.array([s, 0, s, 0], dtype=complex))
    return {
        "alpha": alpha,
        "swap_matches": bool(np.abs(u.matrix - SWAP).max() <= 1e-13),
        "sqrt_swap_matches": bool(
            np.abs(u.matrix - u_swap_alpha(math.pi / 2).matrix).max() <= 1e-13),
        "projector_max_dev": float(np.abs(u.matrix - projector).max()),
        "exp_phase_fidelity": gate_fidelity(u, exp_gate),
        "cnot_fidelity": gate_fidelity(cnot, Gate4(CNOT)),
        "cnot_bell_concurrence": concurrence(apply(cnot, plus_control)),
        "bell_concurrence_min": min(concurrence(b) for b in bells),
    }


def _execute_gates(spec: SweepSpec, resolved: dict):
    if spec.sweep_key:
        values = _sweep_values(spec)
    else:
        values = [resolved["alpha"]]
    if resolved["dump_matrix"]:
        _dump_gate_matrix(u_swap_alpha(values[0]), resolved["dump_matrix"],
                          spec.output_format)
    rows = [tuple(_gate_report(a)[c] for c in _COLUMNS[TARGET_GATES])
            for a in values]
    return _COLUMNS[TARGET_GATES], rows


def _dump_gate_matrix(gate, path: str, output_format: str) -> None:
    rows = matrix_rows(gate)
    if output_format == "json":
        entries = [[[row[2 * j], row[2 * j + 1]] for j in range(4)]
                   for row in rows]
        text = _emit_json_value({"matrix": entries}) + "\n"
    else:
        header = ",".join(f"re{j + 1},im{j + 1}" for j in range(4))
        text = "\n".join([header] + [",".join(_fmt(v) for v in row)
                                     for row in rows]) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


_EXECUTORS = {
    TARGET_SOURCE: _execute_source,
    TARGET_CHANNEL: _execute_channel,
    TARGET_TWOQUBIT: _execute_twoqubit,
    TARGET_GATES: _execute_gates,
}


def _canonical_text(spec: SweepSpec, resolved: dict) -> str:
    items = {"target": spec.target, "format": spec.output_format}
    if spec.sweep_key:
        items["sweep_key"] = spec.sweep_key
        start, stop, steps = spec.sweep_range
        items["sweep_range"] = f"{_fmt(start)},{_fmt(stop)},{steps}"
    for key in sorted(resolved):
        value = resolved[key]
        items[key] = _fmt(value) if isinstance(value, (int, float)) else str(value)
    return "".join(f"{k}={v}\n" for k, v in sorted(items.items()))


def _make_manifest(spec: SweepSpec, resolved: dict) -> RunManifest:
    text = _canonical_text(spec, resolved)
    params = {}
    for line in text.splitlines():
        key, value = line.split("=", 1)
        params[key] = value
    return RunManifest(
        tool_version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        resolved_parameters=params,
        input_hash=hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )


def _json_number(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _emit_json_value(v) -> str:
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (bool, int, float, np.integer, np.floating)):
        return _json_number(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_emit_json_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(
            f"{json.dumps(k)}: {_emit_json_value(val)}" for k, val in v.items()) + "}"
    raise TypeError(f"cannot emit {type(v)}")


def _render_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _render_json(manifest: RunManifest, columns, rows, report=None) -> str:
    manifest_obj = {
        "input_hash": manifest.input_hash,
        "resolved_parameters": dict(sorted(manifest.resolved_parameters.items())),
        "tool_version": manifest.tool_version,
    }
    if report is not None:
        payload = {"manifest": manifest_obj, "report": report}
    else:
        payload = {"manifest": manifest_obj, "columns": list(columns),
                   "rows": [list(r) for r in rows]}
    return _emit_json_value(payload) + "\n"


def _write_outputs(spec: SweepSpec, manifest: RunManifest, primary: str) -> None:
    sidecar = {
        "input_hash": manifest.input_hash,
        "resolved_parameters": manifest.resolved_parameters,
        "timestamp": manifest.timestamp,
        "tool_version": manifest.tool_version,
    }
    sidecar_text = json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    if spec.output_path == STDOUT_MARKER:
        sys.stdout.write(primary)
        sys.stderr.write(sidecar_text)
        return
    with open(spec.output_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(primary)
    with open(spec.output_path + ".manifest.json", "w", encoding="utf-8",
              newline="") as fh:
        fh.write(sidecar_text)


def run(spec: SweepSpec) -> int:
    """Execute a spec: compute the table, then write output plus manifest.

    Nothing is written on failure; errors go to stderr with the target named.
    """
    try:
        resolved = _resolve(spec)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    try:
        result = _EXECUTORS[spec.target](spec, resolved)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except Exception as exc:  # computation failure inside a module
        sys.stderr.write(f"{spec.target}: computation failed: {exc}\n")
        return 1
    manifest = _make_manifest(spec, resolved)
    if spec.target == TARGET_TWOQUBIT and result[1] is None:
        report = result[0]
        if spec.output_format == "json":
            primary = _render_json(manifest, None, None, report=report)
        else:
            columns = ("h0", "hr_re", "hr_im", "max_residual",
                       "eigenvalue_set_distance", "hermitian", "degenerate")
            row = (report["h0"], report["hr"][0], report["hr"][1],
                   max(report["residuals"]),
                   _set_distance(report), report["hermitian"],
                   report["degenerate"])
            primary = _render_csv(columns, [row])
    else:
        columns, rows = result
        if spec.output_format == "json":
            primary = _render_json(manifest, columns, rows)
        else:
            primary = _render_csv(columns, rows)
    _write_outputs(spec, manifest, primary)
    return 0


def _set_distance(report: dict) -> float:
    claimed = [complex(re, im) for re, im in report["claimed_eigenvalues"]]
    numeric = [complex(re, im) for re, im in report["numeric_eigenvalues"]]
    fwd = max(min(abs(c - n) for n in numeric) for c in claimed)
    bwd = max(min(abs(n - c) for c in claimed) for n in numeric)
    return max(fwd, bwd)


def _schema_help(target: str) -> str:
    lines = [f"config keys for {target} (key=value, # comments allowed):"]
    for key, (caster, default, help_text) in _SCHEMAS[target].items():
        lines.append(f"  {key} ({caster.__name__}, default {default!r}): {help_text}")
    lines.append(f"sweepable keys: {', '.join(_SWEEPABLE[target])}")
    if target in _COLUMNS:
        lines.append(f"csv columns: {', '.join(_COLUMNS[target])}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="entangler",
        description="Batch driver for the two-qubit entangler toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, target in _SUBCOMMANDS.items():
        p = sub.add_parser(
            name, help=f"run the {target} target",
            epilog=_schema_help(target),
            formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", help="path to a key=value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key (repeatable)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--out", default=None,
                       help="output path, or - for standard output (default)")
    args = parser.parse_args(argv)
    target = _SUBCOMMANDS[args.command]

    text = ""
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            sys.stderr.write(f"config error: cannot read {args.config}: {exc}\n")
            return 2
    try:
        lines = list(text.splitlines())
        has_target = any(
            "=" in stripped and stripped.split("=", 1)[0].strip() == "target"
            for stripped in (line.split("#", 1)[0].strip() for line in lines))
        if not has_target:
            lines.insert(0, f"target={target}")
        for override in args.set:
            if "=" not in override:
                raise ConfigError(f"--set expects KEY=VALUE, got {override!r}")
            lines.append(override)
        spec = parse_config("\n".join(lines))
        if spec.target != target:
            raise ConfigError(
                f"config target {spec.target!r} conflicts with subcommand "
                f"{args.command!r} ({target})")
        if args.format:
            spec.output_format = args.format
        if args.out is not None:
            spec.output_path = args.out
        _resolve(spec)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
