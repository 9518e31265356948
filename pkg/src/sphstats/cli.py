"""Batch command-line front end.

Subcommands: summary, fit, test-mean, project, wrapped-pdf, sample, and
reproduce-hospers. Outputs are deterministic given identical flags and seed
(suppress the timestamp header with --no-timestamp for byte-identical
reports); figures are static vector graphics rendered next to the delimited
tables they illustrate.

Exit codes: 0 success, 1 reproduction checks failed, 2 parse error,
3 degenerate data, 4 numeric non-convergence, 5 missing data bundle.
"""

import argparse
import json
import math
import pathlib
import sys
from types import SimpleNamespace

import numpy as np

from . import dataio, hospers
from .distributions import VmfParams
from .errors import ParseError, SphstatsError
from .estimation import (
    fit_axial_mle,
    fit_fisher_known_axis,
    fit_fisher_known_pole,
    fit_mle,
    fit_sme,
    summarize,
    test_mean_direction,
)
from .geometry import axis_representative, lambert_project, rotation_aligning, to_polar, unit_vector
from .report import emit_report
from .sampling import (
    SeededStream,
    sample_haar_so3,
    sample_uniform_sphere,
    sample_vmf,
    sample_wrapped_sphere,
)
from .wrapped import WrappedSpec, wrapped_colatitude_density

__all__ = ["main"]

_DEFAULTS = {
    "seed": 0,
    "tolerance": 1e-10,
    "no_timestamp": False,
    "format": None,
    "up_positive": False,
    "config": None,
    "output": None,
    "reference": None,
    "method": None,
    "mu0": None,
    "axis": None,
    "alpha": 0.05,
    "bootstrap": 0,
    "input": None,
    "output_table": None,
    "output_figure": None,
    "center_mean": False,
    "sigma2": None,
    "grid_points": 512,
    "output_prefix": "wrapped_pdf",
    "dist": None,
    "n": None,
    "kappa": 1.0,
    "mu": "0,0,1",
    "outdir": ".",
}

_ERROR_KINDS = {2: "parse-error", 3: "degenerate-data", 4: "non-convergence", 5: "missing-data-bundle"}


def _parse_vector(text) -> np.ndarray:
    if isinstance(text, (list, tuple, np.ndarray)):
        return np.asarray(text, dtype=float)
    try:
        return np.array([float(c) for c in str(text).split(",")])
    except ValueError:
        raise ParseError(f"cannot parse vector {text!r}; expected comma-separated reals") from None


def _require(ns, key: str, flag: str):
    value = getattr(ns, key)
    if value is None:
        raise ParseError(f"{flag} is required for this command")
    return value


def _load_input(ns) -> np.ndarray:
    path = _require(ns, "input", "--input")
    return dataio.ingest(path, fmt=ns.format, up_positive=ns.up_positive)


def _cmd_summary(ns) -> int:
    data = _load_input(ns)
    reference = None if ns.reference is None else unit_vector(_parse_vector(ns.reference))
    s = summarize(data, reference=reference)
    pairs = [
        ("command", "summary"),
        ("input", str(ns.input)),
        ("n", s.n),
        ("mean_vector", s.mean_vector),
        ("mean_resultant_length", s.mean_resultant_length),
    ]
    if s.mean_direction is None:
        pairs.append(("mean_direction_defined", False))
    else:
        pairs.append(("mean_direction", s.mean_direction))
    if s.suff_stat_x is not None:
        pairs.append(("suff_stat_x", s.suff_stat_x))
    emit_report(pairs, ns.output, timestamp=not ns.no_timestamp)
    return 0


def _cmd_fit(ns) -> int:
    data = _load_input(ns)
    method = _require(ns, "method", "--method")
    n = data.shape[0]
    pairs = [("command", "fit"), ("input", str(ns.input)), ("n", n), ("method", method)]
    tol = ns.tolerance
    if method == "mle":
        fit = fit_mle(data, tol=tol)
        pairs += [
            ("kappa_hat", fit.kappa_hat),
            ("mu_hat", fit.mu_hat),
            ("iterations", fit.iterations),
            ("residual", fit.residual),
        ]
    elif method == "sme":
        mu0 = unit_vector(_parse_vector(_require(ns, "mu0", "--mu0")))
        fit = fit_sme(data, mu0)
        pairs += [("kappa_hat", fit.kappa_hat), ("mu_known", fit.mu_hat)]
    elif method == "fisher-pole":
        mu0 = unit_vector(_parse_vector(_require(ns, "mu0", "--mu0")))
        x = float((data @ mu0).sum())
        pairs += [
            ("suff_stat_x", x),
            ("kappa_hat", fit_fisher_known_pole(x, n, tol=tol)),
            ("mu_known", mu0),
        ]
    elif method in ("fisher-axis", "axial-mle"):
        axis = unit_vector(_parse_vector(_require(ns, "axis", "--axis")))
        nu = axis_representative(axis)
        axial = fit_axial_mle(data, axis, tol=tol)
        x = float((data @ nu).sum())
        case2 = fit_fisher_known_axis(x, n, tol=tol)
        # the 1953 case-2 root and the axial MLE are reported side by side
        if method == "fisher-axis":
            pairs += [("suff_stat_x", x), ("kappa_hat", case2)]
            pairs += [("kappa_hat_axial_mle", axial.fit.kappa_hat), ("lambda_hat", axial.lambda_hat)]
        else:
            pairs += [("suff_stat_x", x), ("kappa_hat", axial.fit.kappa_hat)]
            pairs += [("lambda_hat", axial.lambda_hat), ("kappa_hat_case2", case2)]
            if axial.lambda_tie:
                pairs.append(("lambda_tie_break", True))
    else:
        raise ParseError(f"unknown fit method {method!r}")
    emit_report(pairs, ns.output, timestamp=not ns.no_timestamp)
    return 0


def _cmd_test_mean(ns) -> int:
    data = _load_input(ns)
    mu0 = unit_vector(_parse_vector(_require(ns, "mu0", "--mu0")))
    result = test_mean_direction(
        data,
        mu0,
        alpha=ns.alpha,
        n_bootstrap=ns.bootstrap,
        stream=SeededStream(seed=ns.seed, stream_id=0),
        tol=ns.tolerance,
    )
    pairs = [
        ("command", "test_mean"),
        ("input", str(ns.input)),
        ("n", data.shape[0]),
        ("mu0", mu0),
        ("statistic", result.statistic),
        ("df", result.df),
        ("p_value", result.p_value),
        ("alpha", result.alpha),
        ("decision", "reject" if result.reject else "accept"),
        ("kappa_null", result.kappa_null),
        ("kappa_alt", result.kappa_alt),
    ]
    if result.bootstrap_p is not None:
        pairs.append(("bootstrap_p", result.bootstrap_p))
        pairs.append(("bootstrap_decision", "reject" if result.bootstrap_p < result.alpha else "accept"))
    emit_report(pairs, ns.output, timestamp=not ns.no_timestamp)
    return 0


def _cmd_project(ns) -> int:
    from .plots import save_lambert_figure

    data = _load_input(ns)
    if ns.center_mean:
        s = summarize(data)
        if s.mean_direction is None:
            raise ParseError("--center-mean needs a defined mean direction")
        data = data @ rotation_aligning(s.mean_direction, np.array([0.0, 0.0, 1.0])).T
    projected = np.array([lambert_project(to_polar(v)) for v in data])
    table = _require(ns, "output_table", "--output-table")
    lines = ["u,v"] + [f"{u:.12g},{v:.12g}" for u, v in projected]
    pathlib.Path(table).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if ns.output_figure is not None:
        save_lambert_figure(projected, ns.output_figure)
    pairs = [
        ("command", "project"),
        ("input", str(ns.input)),
        ("n", projected.shape[0]),
        ("max_radius", float(np.hypot(projected[:, 0], projected[:, 1]).max())),
        ("output_table", str(table)),
    ]
    if ns.output_figure is not None:
        pairs.append(("output_figure", str(ns.output_figure)))
    emit_report(pairs, ns.output, timestamp=not ns.no_timestamp)
    return 0


def _cmd_wrapped_pdf(ns) -> int:
    from .plots import save_wrapped_pdf_figure

    sigma2_list = [float(s) for s in (ns.sigma2 if ns.sigma2 else (0.1, 1.0, 2.0))]
    m = int(ns.grid_points)
    if m < 2:
        raise ParseError("--grid-points must be at least 2")
    theta = math.pi * np.arange(1, m + 1) / (m + 1.0)
    prefix = pathlib.Path(ns.output_prefix)
    pairs = [("command", "wrapped_pdf"), ("grid_points", m)]
    curves = {}
    for sigma2 in sigma2_list:
        density = np.array([wrapped_colatitude_density(sigma2, t) for t in theta])
        curves[sigma2] = (theta, density)
        out = prefix.parent / f"{prefix.name}_s2_{sigma2:g}.csv"
        lines = ["theta,density"] + [f"{t:.12g},{d:.12g}" for t, d in zip(theta, density)]
        out.write_text("\n".join(lines) + "\n", encoding="utf-8")
        pairs.append((f"table_s2_{sigma2:g}".replace(".", "_"), str(out)))
    figure = prefix.parent / f"{prefix.name}.svg"
    save_wrapped_pdf_figure(curves, figure)
    pairs.append(("output_figure", str(figure)))
    emit_report(pairs, ns.output, timestamp=not ns.no_timestamp)
    return 0


def _cmd_sample(ns) -> int:
    dist = _require(ns, "dist", "--dist")
    if ns.n is None:
        raise ParseError("--n is required for this command")
    n = int(ns.n)
    out = _require(ns, "output", "--output")
    stream = SeededStream(seed=ns.seed, stream_id=0)
    if dist == "uniform":
        draws = sample_uniform_sphere(2, n, stream)
        dataio.write_xyz_csv(out, draws)
    elif dist == "vmf":
        params = VmfParams(mu=_parse_vector(ns.mu), kappa=float(ns.kappa))
        if params.mu.size != 3:
            raise ParseError("the sample command writes csv-xyz and needs a 3-component mu")
        draws = sample_vmf(params, n, stream)
        dataio.write_xyz_csv(out, draws)
    elif dist == "wrapped":
        sigma2 = float(ns.sigma2[0]) if ns.sigma2 else 1.0
        draws = sample_wrapped_sphere(WrappedSpec(q=3, sigma2=sigma2), n, stream)
        dataio.write_xyz_csv(out, draws)
    elif dist == "haar-so3":
        rotations = sample_haar_so3(n, stream)
        lines = ["qw,qx,qy,qz"]
        for rot in rotations:
            lines.append(",".join(format(c, ".17g") for c in rot.quat))
        pathlib.Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ParseError(f"unknown distribution {dist!r}")
    pairs = [("command", "sample"), ("dist", dist), ("n", n), ("seed", ns.seed), ("output", str(out))]
    emit_report(pairs, None, timestamp=not ns.no_timestamp)
    return 0


def _cmd_reproduce(ns) -> int:
    from .plots import save_lambert_figure

    outdir = pathlib.Path(ns.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    pairs, passed, extras = hospers.reproduce_checks()
    projected = extras["data1_projected"]
    table = outdir / "hospers_data1_lambert.csv"
    lines = ["u,v"] + [f"{u:.12g},{v:.12g}" for u, v in projected]
    table.write_text("\n".join(lines) + "\n", encoding="utf-8")
    figure = outdir / "hospers_data1_lambert.svg"
    save_lambert_figure(projected, figure, title="Remanent magnetism set 1 (reconstruction)")
    pairs = (
        [("command", "reproduce_hospers")]
        + pairs
        + [("output_table", str(table)), ("output_figure", str(figure))]
    )
    emit_report(pairs, ns.output, timestamp=not ns.no_timestamp)
    return 0 if passed else 1


def _add_common_io(sub, with_input: bool = True):
    if with_input:
        sub.add_argument("--input", help="input CSV (header x,y,z or dec,inc)")
    sub.add_argument("--output", help="write the key-value report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphstats",
        description="Directional statistics on the sphere: fitting, testing, projection, sampling.",
        argument_default=argparse.SUPPRESS,
    )
    parser.add_argument("--seed", type=int, help="base RNG seed (default 0)")
    parser.add_argument("--tolerance", type=float, help="root-finder residual tolerance")
    parser.add_argument("--no-timestamp", action="store_true", help="suppress the timestamp header")
    parser.add_argument("--format", choices=[dataio.FORMAT_XYZ, dataio.FORMAT_DECINC])
    parser.add_argument("--up-positive", action="store_true", help="dec/inc files use z = +sin(inc)")
    parser.add_argument("--config", help="JSON config file; explicit flags override it")

    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("summary", argument_default=argparse.SUPPRESS)
    _add_common_io(sub)
    sub.add_argument("--reference", help="direction for the sufficient statistic, as 'x,y,z'")
    sub.set_defaults(func=_cmd_summary)

    sub = commands.add_parser("fit", argument_default=argparse.SUPPRESS)
    _add_common_io(sub)
    sub.add_argument("--method", choices=["mle", "sme", "fisher-pole", "fisher-axis", "axial-mle"])
    sub.add_argument("--mu0", help="known mean direction 'x,y,z' (sme, fisher-pole)")
    sub.add_argument("--axis", help="known axis 'x,y,z' (fisher-axis, axial-mle)")
    sub.set_defaults(func=_cmd_fit)

    sub = commands.add_parser("test-mean", argument_default=argparse.SUPPRESS)
    _add_common_io(sub)
    sub.add_argument("--mu0", help="null mean direction 'x,y,z'")
    sub.add_argument("--alpha", type=float, help="test level (default 0.05)")
    sub.add_argument("--bootstrap", type=int, help="parametric bootstrap replicates (default 0)")
    sub.set_defaults(func=_cmd_test_mean)

    sub = commands.add_parser("project", argument_default=argparse.SUPPRESS)
    _add_common_io(sub)
    sub.add_argument("--output-table", help="CSV of projected (u, v) coordinates")
    sub.add_argument("--output-figure", help="vector-graphics scatter (.svg/.pdf)")
    sub.add_argument("--center-mean", action="store_true", help="rotate the mean direction to the pole first")
    sub.set_defaults(func=_cmd_project)

    sub = commands.add_parser("wrapped-pdf", argument_default=argparse.SUPPRESS)
    _add_common_io(sub, with_input=False)
    sub.add_argument("--sigma2", action="append", help="tangent variance; repeatable (default 0.1 1.0 2.0)")
    sub.add_argument("--grid-points", type=int, help="interior grid size (default 512)")
    sub.add_argument("--output-prefix", help="prefix for the emitted tables and figure")
    sub.set_defaults(func=_cmd_wrapped_pdf)

    sub = commands.add_parser("sample", argument_default=argparse.SUPPRESS)
    sub.add_argument("--dist", choices=["uniform", "vmf", "wrapped", "haar-so3"])
    sub.add_argument("--n", type=int, help="number of draws")
    sub.add_argument("--kappa", type=float, help="vMF concentration")
    sub.add_argument("--mu", help="vMF mean direction 'x,y,z'")
    sub.add_argument("--sigma2", action="append", help="wrapped tangent variance")
    sub.add_argument("--output", help="output CSV path")
    sub.set_defaults(func=_cmd_sample)

    sub = commands.add_parser("reproduce-hospers", argument_default=argparse.SUPPRESS)
    sub.add_argument("--outdir", help="directory for the projection table and figure")
    sub.add_argument("--output", help="write the report here instead of stdout")
    sub.set_defaults(func=_cmd_reproduce)

    return parser


def _merge_config(args: argparse.Namespace) -> SimpleNamespace:
    given = vars(args)
    config = {}
    config_path = given.get("config")
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                config = json.load(fh)
        except FileNotFoundError:
            raise ParseError(f"config file not found: {config_path}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(config, dict):
            raise ParseError("config file must hold a JSON object")
        unknown = set(config) - set(_DEFAULTS)
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}")
    merged = {**_DEFAULTS, **config, **{k: v for k, v in given.items() if k not in ("func", "command")}}
    merged["func"] = given["func"]
    merged["command"] = given["command"]
    return SimpleNamespace(**merged)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ns = _merge_config(args)
        return ns.func(ns)
    except SphstatsError as exc:
        kind = _ERROR_KINDS.get(exc.exit_code, "error")
        sys.stderr.write(f'error code={exc.exit_code} kind={kind} message="{exc}"\n')
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
