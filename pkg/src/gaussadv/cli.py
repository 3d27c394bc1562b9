"""Command-line front end.

Subcommands: ``eval``, ``sweep``, ``certify``, ``oracle`` and ``separability``.
Exit codes: 0 success, 1 a check failed, 2 bad input, 3 state out of the
oracle's range.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .advantage import (
    DB_CONVENTION,
    OneModeParams,
    SpecialFamilyParams,
    clean_gap,
    db_to_r,
    one_mode_ftql,
    one_mode_qfi,
    special_family_ftql,
    special_family_gap,
    special_family_qfi_opt,
)
from .fock import CutoffExhaustedError, UnconvergedStateError, cutoff_search, fock_build, fock_mean_photon, fock_purity, fock_qfi_jy
from .gaussian import IsotropicGaussianParams, build_state, mean_photon_number, purity
from .plo import apply_plo, optimize_qfi, theorem1_strategy
from .qfi import ftql, qfi_jy
from .separability import identity_residuals, partial_transpose_spectrum, two_photon_coefficients

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_RANGE = 0, 1, 2, 3

SWEEP_HEADER = ["varied", "value", "i_f_opt", "ftql", "advantage", "relative_advantage", "regime"]
SEP_HEADER = ["beta_abs", "beta_phase", "theta", "min_eig", "isolated_eig", "separable",
              "sum_residual", "pairs_residual", "product_residual"]
DEFAULT_THETAS = "0,0.3,0.6,0.9"
DEFAULT_BETAS = "0,0.5,1,2,5"
DEFAULT_PHASES = "0,1.0471975511965976"
IDENTITY_RTOL = 1e-9


class InputError(ValueError):
    """Bad command-line or config input (exit code 2)."""


def fmt(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return float(format(v, ".12g")) if math.isfinite(v) else str(v)
    if isinstance(x, np.integer):
        return int(x)
    return x


def emit(record: dict[str, Any], form: str, out=None) -> None:
    out = out or sys.stdout
    if form == "json":
        out.write(json.dumps(_jsonable(record), indent=2) + "\n")
        return
    for key, value in record.items():
        if isinstance(value, dict):
            for k, v in value.items():
                out.write(f"{key}.{k}: {fmt(v)}\n")
        elif isinstance(value, (list, tuple)):
            out.write(f"{key}: {' '.join(fmt(v) for v in value)}\n")
        else:
            out.write(f"{key}: {fmt(value)}\n")


def _csv_header(lines: Sequence[str]) -> str:
    head = [f"# gaussadv {__version__}", f"# {DB_CONVENTION}"]
    return "".join(f"{line}\n" for line in head + list(lines))


# -- state flags -------------------------------------------------------------

def add_state_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("state")
    g.add_argument("--family", choices=("general", "appendix_d", "one_mode"), default=None,
                   help="general two-mode state, displaced squeezed mode next to a thermal mode, or one mode")
    g.add_argument("--nu", type=float, help="symplectic eigenvalue (>= 1)")
    g.add_argument("--gamma", type=float, help="displacement magnitude |gamma|")
    g.add_argument("--alpha", type=float)
    g.add_argument("--phi-d1", type=float)
    g.add_argument("--phi-d2", type=float)
    g.add_argument("--phi1", type=float)
    g.add_argument("--phi2", type=float)
    g.add_argument("--theta", type=float, help="beam-splitter angle of the state decomposition")
    g.add_argument("--psi", type=float)
    g.add_argument("--phi-tilde", type=float,
                   help="displacement-squeezing angle (appendix_d and one_mode families)")
    for k in (1, 2):
        ex = g.add_mutually_exclusive_group()
        ex.add_argument(f"--r{k}", type=float, help=f"squeezing of mode {k}")
        ex.add_argument(f"--r{k}-db", type=float, help=f"squeezing of mode {k} in dB")
    g.add_argument("--variant", choices=("squared", "printed"), default=None,
                   help="one_mode displacement factor (default squared)")


EXCLUSIVE = {"r1": "r1_db", "r1_db": "r1", "r2": "r2_db", "r2_db": "r2"}


def _val(args, name: str, default: float = 0.0) -> float:
    v = getattr(args, name, None)
    return default if v is None else v


def _squeezing(args, k: int) -> float:
    db = getattr(args, f"r{k}_db")
    if db is not None:
        return db_to_r(db)
    return _val(args, f"r{k}")


def _family(args) -> str:
    return args.family or "general"


def general_params(args) -> IsotropicGaussianParams:
    if args.phi_tilde is not None:
        raise InputError("--phi-tilde applies to the appendix_d and one_mode families; use --phi-d1/--phi-d2")
    return IsotropicGaussianParams(
        nu=_val(args, "nu", 1.0), gamma_abs=_val(args, "gamma"), alpha=_val(args, "alpha"),
        phi_d1=_val(args, "phi_d1"), phi_d2=_val(args, "phi_d2"),
        phi_1=_val(args, "phi1"), phi_2=_val(args, "phi2"),
        theta=_val(args, "theta"), psi=_val(args, "psi"),
        r_1=_squeezing(args, 1), r_2=_squeezing(args, 2),
    )


def _check_reduced(args, family: str) -> None:
    extra = [n for n in ("alpha", "phi_d1", "phi_d2", "phi1", "phi2", "theta", "psi", "r2", "r2_db")
             if getattr(args, n, None) is not None]
    if extra:
        raise InputError(f"--family {family} does not take {', '.join('--' + e.replace('_', '-') for e in extra)}")


def evaluate(args) -> dict[str, Any]:
    """One RunRecord for the selected family."""
    family = _family(args)
    rec: dict[str, Any] = {"version": __version__, "db_convention": DB_CONVENTION, "family": family}
    if family == "general":
        p = general_params(args)
        opt = optimize_qfi(p)
        ref = ftql(p)
        cert = theorem1_strategy(p)
        rec["input"] = p.as_dict()
        i_opt, regime, gap = opt.i_f_opt, cert.case_tag, clean_gap(opt.i_f_opt - ref, ref)
        rec.update(qfi=qfi_jy(p), best_plo=opt.best.as_tuple(), optimizer_spread=opt.spread)
    elif family == "appendix_d":
        _check_reduced(args, family)
        p = SpecialFamilyParams(nu=_val(args, "nu", 1.0), gamma_abs=_val(args, "gamma"),
                                r1=_squeezing(args, 1), phi_tilde=_val(args, "phi_tilde"))
        rec["input"] = {"nu": p.nu, "gamma_abs": p.gamma_abs, "r1": p.r1, "phi_tilde": p.phi_tilde}
        i_opt, regime = special_family_qfi_opt(p)
        ref = special_family_ftql(p)
        gap, _ = special_family_gap(p)
    else:
        _check_reduced(args, family)
        p = OneModeParams(nu=_val(args, "nu", 1.0), gamma_abs=_val(args, "gamma"),
                          phi_d=_val(args, "phi_tilde"), r=_squeezing(args, 1))
        rec["input"] = {"nu": p.nu, "gamma_abs": p.gamma_abs, "r": p.r, "phi_tilde": p.phi_tilde}
        variant = args.variant or "squared"
        i_opt = one_mode_qfi(p, variant)
        ref = one_mode_ftql(p)
        regime, gap = variant, i_opt - ref
    adv = max(gap, 0.0)
    rec.update(
        i_f_opt=i_opt, ftql=ref, gap=gap, advantage=adv,
        relative_advantage=adv / ref if ref > 0 else float("nan"), regime=regime,
    )
    return rec


# -- subcommands ---------------------------------------------------------------

def cmd_eval(args) -> int:
    emit(evaluate(args), args.format)
    return EXIT_OK


def sweep_values(start: float, stop: float, points: int, scale: str) -> np.ndarray:
    if points < 2:
        raise InputError("--points must be >= 2")
    if not start < stop:
        raise InputError("--start must be smaller than --stop")
    if scale == "log":
        if start <= 0:
            raise InputError("log scale needs --start > 0")
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


def sweep_rows(args) -> list[list[str]]:
    field = {"gamma": "gamma", "nu": "nu", "r_db": "r1_db"}[args.vary]
    rows = []
    for value in sweep_values(args.start, args.stop, args.points, args.scale):
        point = argparse.Namespace(**vars(args))
        setattr(point, field, float(value))
        if field == "r1_db":
            point.r1 = None
        rec = evaluate(point)
        rows.append([args.vary, fmt(float(value))] + [
            fmt(rec[k]) for k in ("i_f_opt", "ftql", "advantage", "relative_advantage", "regime")
        ])
    return rows


def cmd_sweep(args) -> int:
    rows = sweep_rows(args)
    buf = io.StringIO()
    buf.write(_csv_header([f"# family={_family(args)} vary={args.vary} scale={args.scale}"]))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    writer.writerows(rows)
    _write_out(args.out, buf.getvalue())
    return EXIT_OK


def _write_out(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def cmd_certify(args) -> int:
    if _family(args) != "general":
        raise InputError("certify works on the general family")
    p = general_params(args)
    cert = theorem1_strategy(p)
    # independent recomputation through the phase-space route
    moved = apply_plo(p, cert.chosen_plo)
    recomputed = qfi_jy(moved) - ftql(p)
    scale = max(1.0, qfi_jy(moved), ftql(p))
    consistent = abs(recomputed - cert.achieved_gap) <= 1e-8 * scale
    emit({
        "version": __version__,
        "input": p.as_dict(),
        "case_tag": cert.case_tag,
        "chosen_plo": cert.chosen_plo.as_tuple(),
        "gamma_threshold": cert.gamma_threshold,
        "v_i": cert.v_i,
        "achieved_gap": cert.achieved_gap,
        "recomputed_gap": recomputed,
        "ftql_attained_not_surpassed": cert.ftql_attained_not_surpassed,
        "consistent": consistent,
    }, args.format)
    return EXIT_OK if consistent else EXIT_CHECK


def cmd_oracle(args) -> int:
    if _family(args) != "general":
        raise InputError("oracle works on the general family")
    p = general_params(args)
    try:
        if args.cutoff == "auto":
            d = cutoff_search(p, args.leakage, d_max=args.d_max)
        else:
            d = int(args.cutoff)
            if d < 2:
                raise InputError("--cutoff must be >= 2 or 'auto'")
        st = fock_build(p, d, leakage_cap=args.leakage)
        values = {
            "qfi": (qfi_jy(p), fock_qfi_jy(st)),
            "mean_photon": (mean_photon_number(build_state(p)), fock_mean_photon(st)),
            "purity": (purity(build_state(p)), fock_purity(st)),
        }
    except (CutoffExhaustedError, UnconvergedStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    rec: dict[str, Any] = {"version": __version__, "input": p.as_dict(), "cutoff": d, "leakage": st.leakage}
    ok = True
    for name, (closed, brute) in values.items():
        dev = abs(brute - closed)
        tol = max(1e-4, 1e-3 * abs(closed)) if name == "qfi" else 1e-5
        passed = dev <= tol
        ok &= passed
        rec[name] = {"closed_form": closed, "oracle": brute, "abs_dev": dev,
                     "rel_dev": dev / abs(closed) if closed else dev, "tolerance": tol, "pass": passed}
    emit(rec, args.format)
    return EXIT_OK if ok else EXIT_CHECK


def _floats(text: str, name: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"{name}: expected comma-separated numbers") from exc


def _complex(text: str, name: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise InputError(f"{name}: expected a complex number like 1+0.5j") from exc


def _separability_point(b1: complex, b2: complex, t1: float, t2: float):
    try:
        c = two_photon_coefficients(b1, b2, t1, t2)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep = partial_transpose_spectrum(c)
    residuals = None
    if rep.isolated_eigenvalue is not None:
        residuals = identity_residuals(c)
    return rep, residuals


def _symmetric_ok(rep, residuals) -> bool:
    if residuals is None:
        return True
    return rep.separable_in_n2 and all(v <= IDENTITY_RTOL for v in residuals.values())


def cmd_separability(args) -> int:
    if args.grid:
        thetas = _floats(args.thetas, "--thetas")
        betas = _floats(args.betas, "--betas")
        phases = _floats(args.phases, "--phases")
        buf = io.StringIO()
        buf.write(_csv_header(["# symmetric case: beta1 = beta2, theta1 = theta2"]))
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SEP_HEADER)
        ok = True
        for t in thetas:
            for b in betas:
                for ph in phases:
                    beta = b * complex(math.cos(ph), math.sin(ph))
                    rep, res = _separability_point(beta, beta, t, t)
                    ok &= _symmetric_ok(rep, res)
                    res = res or {}
                    writer.writerow([fmt(b), fmt(ph), fmt(t), fmt(rep.eigenvalues[0]),
                                     fmt(rep.isolated_eigenvalue), fmt(rep.separable_in_n2)]
                                    + [fmt(res.get(k)) for k in ("sum", "pairs", "product")])
        _write_out(args.out, buf.getvalue())
        return EXIT_OK if ok else EXIT_CHECK
    if args.beta is None or args.theta is None:
        raise InputError("give --beta and --theta, or --grid")
    b1 = _complex(args.beta, "--beta")
    b2 = _complex(args.beta2, "--beta2") if args.beta2 is not None else b1
    t1 = args.theta
    t2 = args.theta2 if args.theta2 is not None else t1
    rep, res = _separability_point(b1, b2, t1, t2)
    rec: dict[str, Any] = {
        "version": __version__,
        "input": {"beta1": str(b1), "beta2": str(b2), "theta1": t1, "theta2": t2},
        "eigenvalues": rep.eigenvalues,
        "min_eig": rep.eigenvalues[0],
        "trace": rep.trace,
        "separable_in_n2": rep.separable_in_n2,
        "symmetric": res is not None,
        "isolated_eig": rep.isolated_eigenvalue,
        "printed_pt_eigenvalues": rep.printed_eigenvalues,
    }
    if res is not None:
        rec["identity_residuals"] = res
    emit(rec, args.format)
    # asymmetric points are exploratory and never fail the check
    return EXIT_OK if _symmetric_ok(rep, res) else EXIT_CHECK


# -- parser and config ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussadv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key = value file; flags on the command line win")
        p.add_argument("--format", choices=("kv", "json"), default="kv")

    p = sub.add_parser("eval", help="evaluate one state")
    common(p)
    add_state_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    common(p)
    add_state_flags(p)
    p.add_argument("--vary", choices=("gamma", "r_db", "nu"), default=None)
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--scale", choices=("linear", "log"), default=None)
    p.add_argument("--out", help="output path (default standard output)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("certify", help="run the constructive advantage strategy")
    common(p)
    add_state_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("oracle", help="compare closed forms with a truncated Fock computation")
    common(p)
    add_state_flags(p)
    p.add_argument("--cutoff", default=None, help="'auto' or a total photon cutoff")
    p.add_argument("--leakage", type=float, default=None)
    p.add_argument("--d-max", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("separability", help="PPT test of the two-photon sector")
    common(p)
    p.add_argument("--beta", help="displacement of mode 1 (complex, e.g. 1+0.5j)")
    p.add_argument("--beta2", help="displacement of mode 2 (default: --beta)")
    p.add_argument("--theta", type=float, help="thermal ratio of mode 1, in [0, 1)")
    p.add_argument("--theta2", type=float, help="thermal ratio of mode 2 (default: --theta)")
    p.add_argument("--grid", action="store_true", help="scan the symmetric case on a grid")
    p.add_argument("--thetas", default=None)
    p.add_argument("--betas", default=None)
    p.add_argument("--phases", default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_separability)
    return parser


LATE_DEFAULTS = {
    "vary": "gamma", "scale": "linear", "cutoff": "auto", "leakage": 1e-8, "d_max": 64,
    "thetas": DEFAULT_THETAS, "betas": DEFAULT_BETAS, "phases": DEFAULT_PHASES,
}


def read_config(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser, config: dict[str, str]) -> None:
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    actions = {a.dest: a for a in sub.choices[args.command]._actions}
    for key, text in config.items():
        action = actions.get(key)
        if action is None or key in ("config", "help"):
            raise InputError(f"unknown config key {key!r}")
        if getattr(args, key) not in (None, False):
            continue
        partner = EXCLUSIVE.get(key)
        if partner and getattr(args, partner) is not None:
            continue
        if action.nargs == 0:
            value: Any = text.lower() in ("1", "true", "yes", "on")
        else:
            conv: Callable[[str], Any] = action.type or str
            try:
                value = conv(text)
            except ValueError as exc:
                raise InputError(f"config key {key!r}: bad value {text!r}") from exc
            if action.choices is not None and value not in action.choices:
                raise InputError(f"config key {key!r}: {text!r} not in {sorted(action.choices)}")
        setattr(args, key, value)
        if partner:
            setattr(args, partner, None)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_INPUT
    try:
        if args.config:
            apply_config(args, parser, read_config(args.config))
        for key, value in LATE_DEFAULTS.items():
            if hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, value)
        if args.command == "sweep":
            for key in ("start", "stop", "points"):
                if getattr(args, key) is None:
                    raise InputError(f"sweep needs --{key}")
        return args.func(args)
    except (InputError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
