"""Command-line front end producing deterministic CSV/JSON data artifacts.

Subcommands
-----------
potential   tabulate Re/Im of the complex potential on the spatial grid
frames      evolve a packet and tabulate densities and currents per time
wigner      phase-space maps and classicality reports for oscillator-limit
            packets (refuses any nonzero imaginary strength)
verify      run the self-check suites and report measured values

Every option can also be supplied through ``--config FILE`` holding
``key = value`` lines (same keys as the long flags); explicit flags override
file values.  Outputs are byte-identical for identical configurations,
independent of the worker count.

Exit codes: 0 success, 1 verification failure, 2 parameter-domain error,
3 resolution/size error, 4 unsupported-regime request.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import (BasisSizeError, ParameterDomainError, ResolutionError,
                     UnsupportedRegimeError)
from .eigenstates import SpatialGrid, build_basis, default_grid
from .potential import (PotentialParams, consistent_lambda, potential_value,
                        solvability_defect, validate)
from .states import (BinomialSpec, CoefficientVector, PoissonSpec,
                     binomial_coefficients, continuity_residuals,
                     density_current_frame, energy_expectation,
                     poisson_coefficients, spatial_derivative)
from .verify import SUITES, reference_params, run_suites
from .wigner import (PhaseSpaceGrid, classicality_report, marginals,
                     pacs_fidelity, wigner_by_closed_form)

FLOAT_FORMAT = "{:.17g}"


# ---------------------------------------------------------------------------
# option handling

def _float_list(text):
    return [float(part) for part in str(text).split(",") if part != ""]


def _int_list(text):
    return [int(part) for part in str(text).split(",") if part != ""]


def load_config(path):
    """Parse a ``key = value`` file; '#' starts a comment."""
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _resolve(args, config, key, convert, default):
    attr = "lambda_" if key == "lambda" else key.replace("-", "_")
    flag_value = getattr(args, attr, None)
    if flag_value is not None:
        return flag_value
    if key in config:
        return convert(config[key])
    return default


class Options:
    """Flag/config/default resolution shared by the subcommands."""

    def __init__(self, args):
        config = load_config(args.config) if args.config else {}
        get = lambda key, convert, default: _resolve(args, config, key, convert, default)
        self.params_given = any(
            getattr(args, key, None) is not None or key in config
            for key in ("a", "b", "c")) or getattr(args, "lambda_", None) is not None \
            or "lambda" in config
        self.a = get("a", float, 0.0)
        self.b = get("b", float, 0.0)
        self.c = get("c", float, 1.0)
        self.lam = get("lambda", float, None)
        self.lam_defaulted = self.lam is None
        if self.lam_defaulted:
            try:
                self.lam = consistent_lambda(self.a, self.b, self.c)
            except ParameterDomainError:
                self.lam = 0.0
        self.grid_extent = get("grid-extent", float, None)
        self.grid_step = get("grid-step", float, 0.01)
        self.state = get("state", str, "binomial")
        self.n = get("n", int, 30)
        self.p = get("p", _float_list, [0.1])
        self.r = get("r", _int_list, [0])
        self.z_re = get("z-re", _float_list, [1.0])
        self.z_im = get("z-im", float, 0.0)
        self.times = get("times", _float_list, [0.0])
        self.out = Path(get("out", str, "out"))
        self.format = get("format", str, "csv")
        self.workers = get("workers", int, 1)
        self.x_extent = get("x-extent", float, None)
        self.p_extent = get("p-extent", float, None)
        self.x_count = get("x-count", int, 201)
        self.p_count = get("p-count", int, 201)
        self.suites = get("suites", str, None)
        if self.format not in ("csv", "json"):
            raise ParameterDomainError(f"unknown output format {self.format!r}")

    def params(self):
        return validate(PotentialParams(a=self.a, b=self.b, c=self.c, lam=self.lam))

    def spatial_grid(self, max_index):
        if self.grid_extent is None:
            return default_grid(max_index, self.grid_step)
        return SpatialGrid.make(self.grid_extent, self.grid_step)

    def params_dict(self):
        return {"a": self.a, "b": self.b, "c": self.c, "lambda": self.lam,
                "lambda_defaulted": self.lam_defaulted,
                "solvability_defect": solvability_defect(self.params())}

    @staticmethod
    def grid_dict(grid):
        return {"extent": grid.extent, "step": grid.step,
                "node_count": grid.node_count}


# ---------------------------------------------------------------------------
# deterministic writers

def write_table(path_base, columns, rows, fmt):
    """Write a 2-D table as CSV or JSON with full round-trip precision."""
    path = Path(f"{path_base}.{fmt}")  # labels may contain dots; no with_suffix
    if fmt == "csv":
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(FLOAT_FORMAT.format(v) for v in row) + "\n")
    else:
        payload = {"columns": list(columns),
                   "rows": [[float(v) for v in row] for row in rows]}
        write_json(path, payload)
    return path


def write_json(path, payload):
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


# ---------------------------------------------------------------------------
# state specs

def _packet(opts, p=None, r=None, z=None):
    """Coefficient vector for the selected state family."""
    kind = opts.state
    if kind == "binomial":
        spec = BinomialSpec(n=opts.n, p=opts.p[0] if p is None else p,
                            r=opts.r[0] if r is None else r)
        return binomial_coefficients(spec), {"state": "binomial", "n": spec.n,
                                             "p": spec.p, "r": spec.r}
    if kind == "poisson":
        amplitude = complex(opts.z_re[0] if z is None else z, opts.z_im)
        spec = PoissonSpec(z=amplitude, r=opts.r[0] if r is None else r)
        return poisson_coefficients(spec), {
            "state": "poisson", "z_re": amplitude.real, "z_im": amplitude.imag,
            "r": spec.r, "truncation": spec.truncation}
    if kind == "eigenstate":
        index = opts.r[0] if r is None else r
        vector = CoefficientVector(offset=index, coefficients=np.ones(1, complex))
        return vector, {"state": "eigenstate", "r": index}
    raise ParameterDomainError(f"unknown state family {kind!r}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_potential(opts):
    params = opts.params()
    grid = opts.spatial_grid(max_index=0)
    values = potential_value(params, grid.nodes)
    opts.out.mkdir(parents=True, exist_ok=True)
    rows = np.column_stack([grid.nodes, values.real, values.imag])
    write_table(opts.out / "potential", ("x", "re_v", "im_v"), rows, opts.format)
    write_json(opts.out / "metadata.json",
               {"params": opts.params_dict(), "grid": opts.grid_dict(grid),
                "spec": {"artifact": "potential"}})
    return 0


def cmd_frames(opts):
    params = opts.params()
    coeffs, spec_info = _packet(opts)
    top_index = coeffs.offset + coeffs.size - 1
    grid = opts.spatial_grid(top_index)
    basis = build_basis(params, top_index, grid)
    opts.out.mkdir(parents=True, exist_ok=True)

    frame_stats = []
    for index, t in enumerate(opts.times):
        frame = density_current_frame(coeffs, basis, t)
        rows = np.column_stack([
            grid.nodes, frame.rho_b.real, frame.rho_b.imag,
            frame.current_b.real, frame.current_b.imag, frame.rho, frame.current])
        write_table(opts.out / f"frame_{index:03d}",
                    ("x", "re_rho_b", "im_rho_b", "re_current_b",
                     "im_current_b", "rho", "current"), rows, opts.format)
        residual_b, residual = continuity_residuals(coeffs, basis, t)
        binorm = np.sum(grid.weights * frame.rho_b)
        divergence = np.max(np.abs(spatial_derivative(frame.current_b, grid.step)))
        frame_stats.append({
            "time": t,
            "binorm_re": float(binorm.real),
            "binorm_im": float(binorm.imag),
            "im_rho_b_integral": float(np.sum(grid.weights * frame.rho_b.imag)),
            "residual_b_max": float(np.max(residual_b)),
            "residual_max": float(np.max(residual)),
            "current_divergence_max": float(divergence),
        })

    energy = energy_expectation(coeffs)
    write_json(opts.out / "summary.json", {
        "params": opts.params_dict(), "grid": opts.grid_dict(grid),
        "spec": spec_info,
        "derived": {"energy": energy,
                    "energy_without_offset": energy - 2.0 * coeffs.offset,
                    "binorm": frame_stats[0]["binorm_re"] if frame_stats else None,
                    "residuals": [s["residual_b_max"] for s in frame_stats],
                    "frames": frame_stats}})
    return 0


def _wigner_cells(opts):
    if opts.state == "binomial":
        return [(p, r, None) for p in opts.p for r in opts.r]
    if opts.state == "poisson":
        return [(None, r, z) for z in opts.z_re for r in opts.r]
    if opts.state == "eigenstate":
        return [(None, r, None) for r in opts.r]
    raise ParameterDomainError(f"unknown state family {opts.state!r}")


def _cell_label(opts, p, r, z):
    if opts.state == "binomial":
        return f"p{p:.3f}_r{r}"
    if opts.state == "poisson":
        if opts.z_im:
            return f"z{z:.3f}{opts.z_im:+.3f}j_r{r}"
        return f"z{z:.3f}_r{r}"
    return f"eigenstate_r{r}"


def cmd_wigner(opts):
    params = opts.params()
    if params.lam != 0.0:
        raise UnsupportedRegimeError(
            "phase-space maps are defined only in the oscillator limit; "
            "set lambda = 0 (and a = b = 0) to request them")
    cells = _wigner_cells(opts)
    packets = [_packet(opts, p=p, r=r, z=z) for p, r, z in cells]
    top_index = max(pk.offset + pk.size - 1 for pk, _ in packets)
    max_energy = 2.0 * top_index + 1.0
    extent = np.sqrt(2.0 * max_energy) + 3.0
    grid = PhaseSpaceGrid.regular(
        opts.x_extent if opts.x_extent is not None else extent,
        opts.p_extent if opts.p_extent is not None else extent,
        opts.x_count, opts.p_count)
    opts.out.mkdir(parents=True, exist_ok=True)

    cell_reports = []
    for (p, r, z), (packet, spec_info) in zip(cells, packets):
        label = _cell_label(opts, p, r, z)
        field = wigner_by_closed_form(packet, grid, workers=opts.workers)
        x_mesh = np.repeat(grid.x_nodes, grid.p_count)
        p_mesh = np.tile(grid.p_nodes, grid.x_count)
        rows = np.column_stack([x_mesh, p_mesh, field.values.ravel()])
        write_table(opts.out / f"wigner_{label}", ("x", "p", "w"), rows, opts.format)

        report = classicality_report(field)
        position, momentum = marginals(field)
        cell = {"label": label, "spec": spec_info,
                "classicality": report.as_dict(),
                "marginal_mass": float(np.sum(position)
                                       * (grid.x_nodes[1] - grid.x_nodes[0])),
                "position_variance": _variance(grid.x_nodes, position),
                "momentum_variance": _variance(grid.p_nodes, momentum)}
        if opts.state == "poisson":
            cell["pacs_fidelity"] = pacs_fidelity(
                PoissonSpec(z=complex(z, opts.z_im), r=r))
        write_json(opts.out / f"report_{label}.json", cell)
        cell_reports.append(cell)

    write_json(opts.out / "metadata.json", {
        "params": opts.params_dict(),
        "grid": {"x_extent": grid.x_extent, "p_extent": grid.p_extent,
                 "x_count": grid.x_count, "p_count": grid.p_count},
        "spec": {"state": opts.state, "cells": [c["label"] for c in cell_reports]},
        "derived": {"reports": cell_reports}})
    return 0


def _variance(nodes, marginal):
    step = nodes[1] - nodes[0]
    mass = np.sum(marginal) * step
    mean = np.sum(nodes * marginal) * step / mass
    return float(np.sum((nodes - mean) ** 2 * marginal) * step / mass)


def cmd_verify(opts):
    if opts.suites is None:
        names = list(SUITES)
    else:
        names = [s for s in opts.suites.split(",") if s]
        unknown = set(names) - set(SUITES)
        if unknown:
            raise ParameterDomainError(f"unknown suites: {sorted(unknown)}")
    params = opts.params() if opts.params_given else None
    grid = None
    if opts.grid_extent is not None or opts.grid_step != 0.01:
        extent = opts.grid_extent if opts.grid_extent is not None else 20.0
        grid = SpatialGrid.make(extent, opts.grid_step)
    report = run_suites(names, params=params, grid=grid)
    report["params"] = opts.params_dict() if params else \
        {"reference": True, **_reference_dict()}
    opts.out.mkdir(parents=True, exist_ok=True)
    write_json(opts.out / "verify_report.json", report)
    for check in report["checks"]:
        status = "pass" if check["passed"] else "FAIL"
        print(f"{check['name']}: measured {check['measured']:.3e} "
              f"(tolerance {check['tolerance']:.0e}) ... {status}")
    return 0 if report["all_passed"] else 1


def _reference_dict():
    params = reference_params()
    return {"a": params.a, "b": params.b, "c": params.c, "lambda": params.lam,
            "solvability_defect": solvability_defect(params)}


# ---------------------------------------------------------------------------
# entry point

def build_parser():
    parser = argparse.ArgumentParser(
        prog="cxosc",
        description="Deterministic data artifacts for complex oscillator "
                    "bi-orthogonal wavepacket dynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value option file")
        p.add_argument("--a", type=float)
        p.add_argument("--b", type=float)
        p.add_argument("--c", type=float)
        p.add_argument("--lambda", dest="lambda_", type=float)
        p.add_argument("--grid-extent", type=float)
        p.add_argument("--grid-step", type=float)
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=_float_list)
        p.add_argument("--r", type=_int_list)
        p.add_argument("--z-re", type=_float_list)
        p.add_argument("--z-im", type=float)
        p.add_argument("--times", type=_float_list)
        p.add_argument("--state", choices=("binomial", "poisson", "eigenstate"))
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--workers", type=int)

    p_potential = sub.add_parser("potential", help="tabulate the potential")
    add_common(p_potential)

    p_frames = sub.add_parser("frames", help="density/current time frames")
    add_common(p_frames)

    p_wigner = sub.add_parser("wigner", help="phase-space maps")
    add_common(p_wigner)
    p_wigner.add_argument("--x-extent", type=float)
    p_wigner.add_argument("--p-extent", type=float)
    p_wigner.add_argument("--x-count", type=int)
    p_wigner.add_argument("--p-count", type=int)

    p_verify = sub.add_parser("verify", help="run the self-check suites")
    add_common(p_verify)
    p_verify.add_argument("--suites")
    return parser


_HANDLERS = {
    "potential": cmd_potential,
    "frames": cmd_frames,
    "wigner": cmd_wigner,
    "verify": cmd_verify,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        opts = Options(args)
        return _HANDLERS[args.command](opts)
    except ParameterDomainError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except (ResolutionError, BasisSizeError) as exc:
        print(f"resolution error: {exc}", file=sys.stderr)
        return 3
    except UnsupportedRegimeError as exc:
        print(f"unsupported regime: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
