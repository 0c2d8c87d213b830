"""Command-line interface.

Subcommands:
    tables     momentum -> label tables (digit or sign-magnitude binary)
    codeword   construct a codeword and dump its momentum amplitudes
    pe         one noncorrectable-error probability estimate
    sweep      p_e over a grid of approximant parameters
    roundtrip  encode / corrupt / diagnose / correct, with trial records
    check      operator-algebra invariant suite

Families are spelled trunc-gauss (--xi), cos-power (--gamma), gauss-env
(--sigma), grating (--slits), plus ideal where a perfect comb makes sense.

Options may come from a config file of key=value lines (--config); explicit
flags win over config values.  Output is CSV (default) or pretty text, to
stdout or --output.  Exit status: 0 success, 1 invalid input, 2 numerical
failure (including failed invariant checks).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Sequence

import numpy as np

from . import analysis, weyl_algebra
from .code_space import (
    Approximant,
    CodeParams,
    binary_table,
    default_window_half,
    encoding_table,
    logical_encode,
)
from .errors import NumericalError
from .noise_correction import ROUND_TRIP_COLUMNS, ErrorEvent, run_round_trip

FAMILY_BY_CLI = {
    "trunc-gauss": "truncated_gaussian",
    "cos-power": "cosine_power",
    "gauss-env": "gaussian_envelope",
    "grating": "grating",
}
CLI_BY_FAMILY = {v: k for k, v in FAMILY_BY_CLI.items()}
PARAM_FLAG = {
    "trunc-gauss": "xi",
    "cos-power": "gamma",
    "gauss-env": "sigma",
    "grating": "slits",
}
METHOD_BY_CLI = {
    "quadrature": "quadrature",
    "closed-form": "closed_form",
    "asymptotic": "asymptotic",
    "pure-guess": "pure_guess",
    "monte-carlo": "monte_carlo",
}

CHECK_TOL = 1e-12


class UsageError(ValueError):
    """Malformed command line or config: exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


def _cast_bool(raw: str) -> bool:
    low = str(raw).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def load_config(path: str) -> dict[str, str]:
    """key=value lines; blank lines and # comments ignored."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as ex:
        raise UsageError(f"cannot read config file {path}: {ex}") from ex
    cfg: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


class Settings:
    """Flag-over-config resolver that remembers what it handed out."""

    def __init__(self, args: argparse.Namespace, cfg: dict[str, str]):
        self.args = args
        self.cfg = cfg
        self.used: dict[str, object] = {}

    def get(self, name, cast=str, default=None, required=False):
        value = getattr(self.args, name, None)
        if value is None and name in self.cfg:
            raw = self.cfg[name]
            try:
                value = cast(raw)
            except (TypeError, ValueError) as ex:
                raise UsageError(f"config value {name}={raw!r}: {ex}") from ex
        if value is None:
            if required:
                raise UsageError(f"--{name.replace('_', '-')} is required")
            value = default
        if value is not None:
            self.used[name] = value
        return value

    def flag_is_set(self, name) -> bool:
        return getattr(self.args, name, None) is not None


def _code_params(s: Settings) -> CodeParams:
    return CodeParams(
        d=s.get("d", int, 2),
        N=s.get("N", int, 1),
        delta_L=s.get("delta_L", int, 0),
    )


def _resolve_approx(s: Settings, allow_ideal: bool) -> Approximant | None:
    fam = s.get("family", str, "ideal" if allow_ideal else None, required=not allow_ideal)
    if fam == "ideal":
        if not allow_ideal:
            raise UsageError("this command needs a normalizable family, not ideal")
        for other in PARAM_FLAG.values():
            if s.flag_is_set(other):
                raise UsageError(f"--{other} makes no sense with family ideal")
        return None
    if fam not in FAMILY_BY_CLI:
        raise UsageError(
            f"unknown family {fam!r}; choose from "
            f"{', '.join(list(FAMILY_BY_CLI) + ['ideal'])}"
        )
    flag = PARAM_FLAG[fam]
    for other in PARAM_FLAG.values():
        if other != flag and s.flag_is_set(other):
            raise UsageError(f"family {fam} takes --{flag}, not --{other}")
    value = s.get(flag, float, None)
    if value is None:
        raise UsageError(f"family {fam} needs --{flag}")
    return Approximant(FAMILY_BY_CLI[fam], value)


def _parse_int_range(value: str | Sequence[str]) -> tuple[int, int]:
    """Accept two tokens (``LO HI``) or a single ``LO:HI`` string."""
    tokens: list[str] = []
    for item in [value] if isinstance(value, str) else list(value):
        tokens.extend(str(item).replace(":", " ").split())
    if len(tokens) != 2:
        raise UsageError(f"expected LO HI or LO:HI, got {value!r}")
    try:
        lo, hi = int(tokens[0]), int(tokens[1])
    except ValueError as ex:
        raise UsageError(f"expected integers in the range, got {value!r}") from ex
    if hi < lo:
        raise UsageError(f"empty range {value!r}")
    return lo, hi


def _get_range(s: Settings, default: str) -> tuple[int, int]:
    lo, hi = _parse_int_range(s.get("range", str, default))
    s.used["range"] = f"{lo}:{hi}"
    return lo, hi


def parse_grid(text: str) -> list[float]:
    """A:B (11 points), A:B:COUNT, a comma list, or a single value."""
    text = text.strip()
    try:
        if "," in text:
            return [float(x) for x in text.split(",") if x.strip()]
        if ":" in text:
            parts = text.split(":")
            if len(parts) == 2:
                a, b, count = float(parts[0]), float(parts[1]), 11
            elif len(parts) == 3:
                a, b, count = float(parts[0]), float(parts[1]), int(parts[2])
            else:
                raise UsageError(f"expected A:B or A:B:COUNT, got {text!r}")
            if count < 1:
                raise UsageError("grid needs at least one point")
            if count == 1:
                return [a]
            return [float(v) for v in np.linspace(a, b, count)]
        return [float(text)]
    except ValueError as ex:
        raise UsageError(f"bad grid {text!r}: {ex}") from ex


def _fmt_cell(v: object) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _emit(
    s: Settings,
    command: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[object]],
    extra_comments: Sequence[str] = (),
) -> None:
    fmt = s.get("format", str, "csv")
    if fmt not in ("csv", "pretty"):
        raise UsageError(f"unknown format {fmt!r}; choose csv or pretty")
    out_path = s.get("output", str, None)

    config_items = " ".join(
        f"{k}={_fmt_cell(v)}"
        for k, v in sorted(s.used.items())
        if k not in ("format", "output")
    )
    lines: list[str] = []
    if fmt == "csv":
        lines.append(f"# config: command={command} {config_items}".rstrip())
        lines.extend(f"# {c}" for c in extra_comments)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])
        lines.extend(buf.getvalue().splitlines())
    else:
        cells = [[_fmt_cell(v) for v in row] for row in rows]
        widths = [
            max(len(col), *(len(row[i]) for row in cells)) if cells else len(col)
            for i, col in enumerate(columns)
        ]
        lines.append(f"[{command}] {config_items}".rstrip())
        lines.extend(str(c) for c in extra_comments)
        lines.append("  ".join(col.ljust(w) for col, w in zip(columns, widths)))
        for row in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_tables(s: Settings) -> int:
    binary = s.get("binary", _cast_bool, False)
    if binary:
        bits = s.get("bits", int, None)
        if bits is None:
            bits = s.get("N", int, 3)
        lo, hi = _get_range(s, "-8:8")
        rows_d = binary_table(lo, hi, bits)
        columns = ["l"] + [f"b{j}" for j in range(1, bits + 1)]
        rows = [[row["l"], *row["bits"]] for row in rows_d]
        _emit(s, "tables", columns, rows)
        return 0
    params = _code_params(s)
    lo, hi = _get_range(s, f"-{params.m}:{params.m}")
    rows_d = encoding_table(params, lo, hi)
    columns = ["l", "q"] + [f"p{j}" for j in range(1, params.N + 1)] + [
        "k",
        "rotor_index",
    ]
    rows = [
        [row["l"], row["q"], *row["digits"], row["k"], row["rotor_index"]]
        for row in rows_d
    ]
    _emit(s, "tables", columns, rows)
    return 0


def cmd_codeword(s: Settings) -> int:
    params = _code_params(s)
    approx = _resolve_approx(s, allow_ideal=True)
    k = s.get("k", int, 0)
    wh = s.get("window_half", int, None)
    if wh is None:
        state = logical_encode(params, k, approx)
    else:
        if wh < 1:
            raise UsageError("--window-half must be >= 1")
        state = logical_encode(params, k, approx, -wh, wh)
    rows = []
    for l in state.ls:
        a = state.amplitude_at(int(l))
        if a != 0:
            rows.append([int(l), a.real, a.imag, abs(a) ** 2])
    _emit(
        s,
        "codeword",
        ["l", "amplitude_re", "amplitude_im", "probability"],
        rows,
        extra_comments=[f"window: [{state.l_min}, {state.l_max}]"],
    )
    return 0


def _pe_rows(s: Settings, grid: list[float], command: str) -> int:
    params = _code_params(s)
    fam_cli = s.get("family", str, None, required=True)
    if fam_cli == "ideal":
        raise UsageError("p_e estimation needs a normalizable family, not ideal")
    if fam_cli not in FAMILY_BY_CLI:
        raise UsageError(f"unknown family {fam_cli!r}")
    method_cli = s.get("method", str, "quadrature")
    if method_cli not in METHOD_BY_CLI:
        raise UsageError(
            f"unknown method {method_cli!r}; choose from {', '.join(METHOD_BY_CLI)}"
        )
    method = METHOD_BY_CLI[method_cli]
    trials = s.get("trials", int, 100_000)
    seed = s.get("seed", int, None)
    if method == "monte_carlo" and seed is None:
        raise UsageError("--seed is required with --method monte-carlo")
    rng = np.random.default_rng(seed) if method == "monte_carlo" else None
    rows = []
    for p in grid:
        res = analysis.compute_pe(
            FAMILY_BY_CLI[fam_cli], p, params.m, method, trials=trials, rng=rng
        )
        rows.append(
            [
                fam_cli,
                params.N,
                params.d,
                params.delta_L,
                p,
                method_cli,
                res.value,
                res.log10_value,
                res.error_estimate,
                seed if method == "monte_carlo" else None,
            ]
        )
    _emit(s, command, list(analysis.SWEEP_COLUMNS), rows)
    return 0


def cmd_pe(s: Settings) -> int:
    fam_cli = s.get("family", str, None, required=True)
    if fam_cli in PARAM_FLAG:
        value = s.get(PARAM_FLAG[fam_cli], float, None)
        if value is None:
            raise UsageError(f"family {fam_cli} needs --{PARAM_FLAG[fam_cli]}")
        for other in PARAM_FLAG.values():
            if other != PARAM_FLAG[fam_cli] and s.flag_is_set(other):
                raise UsageError(f"family {fam_cli} takes --{PARAM_FLAG[fam_cli]}, not --{other}")
        return _pe_rows(s, [value], "pe")
    raise UsageError(f"unknown family {fam_cli!r}")


def cmd_sweep(s: Settings) -> int:
    grid = parse_grid(s.get("grid", str, None, required=True))
    fam_cli = s.get("family", str, None, required=True)
    if fam_cli not in FAMILY_BY_CLI:
        raise UsageError(f"unknown family {fam_cli!r}")
    for flag in PARAM_FLAG.values():
        if s.flag_is_set(flag):
            raise UsageError("sweep takes the parameter grid via --grid, not a family flag")
    return _pe_rows(s, grid, "sweep")


def cmd_roundtrip(s: Settings) -> int:
    params = _code_params(s)
    approx = _resolve_approx(s, allow_ideal=True)
    k = s.get("k", int, 0)
    epsilon = s.get("epsilon", float, 0.0)
    kick = s.get("kick", int, 0)
    trials = s.get("trials", int, 1000)
    seed = s.get("seed", int, None, required=True)
    syndrome_mode = s.get("syndrome", str, "sampled")
    if syndrome_mode not in ("sampled", "expected"):
        raise UsageError("--syndrome must be sampled or expected")
    wh = s.get("window_half", int, None)
    lo, hi = (-wh, wh) if wh is not None else (None, None)
    rng = np.random.default_rng(seed)
    summary = run_round_trip(
        params,
        k,
        ErrorEvent(epsilon, kick),
        trials,
        rng,
        approx=approx,
        l_lo=lo,
        l_hi=hi,
        syndrome_mode=syndrome_mode,
    )
    comment = (
        f"summary: trials={summary.trials} angle_errors={summary.angle_errors} "
        f"momentum_errors={summary.momentum_errors} errors={summary.errors} "
        f"error_rate={_fmt_cell(summary.error_rate)} "
        f"standard_error={_fmt_cell(summary.standard_error)} "
        f"state_fidelity={_fmt_cell(summary.state_fidelity)}"
    )
    rows = [
        [
            rec.trial,
            rec.u,
            rec.theta_outcome,
            rec.q_outcome,
            rec.wrap,
            rec.digit_shift,
            rec.angle_error,
            rec.momentum_error,
            rec.fidelity,
        ]
        for rec in summary.records
    ]
    if s.get("format", str, "csv") == "pretty":
        rows = []
    _emit(s, "roundtrip", list(ROUND_TRIP_COLUMNS), rows, extra_comments=[comment])
    return 0


def cmd_check(s: Settings) -> int:
    delta_L = s.get("delta_L", int, 0)
    probes = s.get("probes", int, 20)
    seed = s.get("seed", int, None, required=True)
    corrupt = s.get("corrupt", _cast_bool, False)
    r = 2 * delta_L + 1
    rng = np.random.default_rng(seed)
    checks = weyl_algebra.invariant_residuals(r, rng, probes=probes, corrupt=corrupt)
    rows = [
        [name, residual, "PASS" if residual < CHECK_TOL else "FAIL"]
        for name, residual in checks
    ]
    failures = sum(1 for row in rows if row[2] == "FAIL")
    _emit(
        s,
        "check",
        ["check", "residual", "status"],
        rows,
        extra_comments=[
            f"threshold: {CHECK_TOL:.0e}",
            f"failures: {failures}/{len(rows)}",
        ],
    )
    return 0 if failures == 0 else 2


def build_parser() -> _Parser:
    parser = _Parser(
        prog="rotorcode",
        description="Many qubits in one quantum rotor: tables, codewords, "
        "error probabilities, correction round trips.",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add_common(p: _Parser, code=True):
        p.add_argument("--config", help="key=value settings file (flags win)")
        p.add_argument("--format", choices=["csv", "pretty"], default=None)
        p.add_argument("--output", help="write to this file instead of stdout")
        if code:
            p.add_argument("--d", type=int, default=None, help="qudit dimension (default 2)")
            p.add_argument("--N", type=int, default=None, help="register size (default 1)")
            p.add_argument(
                "--delta-L",
                dest="delta_L",
                type=int,
                default=None,
                help="protected kick range (default 0)",
            )

    def add_family(p: _Parser, with_ideal=True):
        choices = list(FAMILY_BY_CLI)
        if with_ideal:
            choices.append("ideal")
        p.add_argument("--family", choices=choices, default=None)
        p.add_argument("--xi", type=float, default=None, help="trunc-gauss squeezing")
        p.add_argument("--gamma", type=float, default=None, help="cos-power exponent")
        p.add_argument("--sigma", type=float, default=None, help="gauss-env width")
        p.add_argument("--slits", type=float, default=None, help="grating half-width")

    p = sub.add_parser("tables", help="momentum -> label tables")
    add_common(p)
    p.add_argument("--range", nargs="+", default=None,
                   help="momentum range: LO HI or LO:HI")
    p.add_argument("--binary", action="store_true", default=None,
                   help="sign-magnitude binary labels instead of code digits")
    p.add_argument("--bits", type=int, default=None, help="bit count for --binary")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("codeword", help="dump codeword amplitudes")
    add_common(p)
    add_family(p)
    p.add_argument("--k", type=int, default=None, help="logical index")
    p.add_argument("--window-half", dest="window_half", type=int, default=None)
    p.set_defaults(func=cmd_codeword)

    p = sub.add_parser("pe", help="one noncorrectable-error probability")
    add_common(p)
    add_family(p, with_ideal=False)
    p.add_argument("--method", choices=list(METHOD_BY_CLI), default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_pe)

    p = sub.add_parser("sweep", help="p_e over a parameter grid")
    add_common(p)
    add_family(p, with_ideal=False)
    p.add_argument("--grid", help="A:B, A:B:COUNT, or comma list")
    p.add_argument("--method", choices=list(METHOD_BY_CLI), default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("roundtrip", help="encode / corrupt / correct")
    add_common(p)
    add_family(p)
    p.add_argument("--k", type=int, default=None, help="logical index")
    p.add_argument("--epsilon", type=float, default=None, help="angle drift")
    p.add_argument("--kick", type=int, default=None, help="momentum kick")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--syndrome", choices=["sampled", "expected"], default=None)
    p.add_argument("--window-half", dest="window_half", type=int, default=None)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("check", help="operator invariant suite")
    add_common(p, code=False)
    p.add_argument(
        "--delta-L", dest="delta_L", type=int, default=None,
        help="protected kick range fixing r = 2*delta_L + 1",
    )
    p.add_argument("--probes", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--corrupt", action="store_true", default=None,
                   help="deliberately break one operator; the suite must fail")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config) if getattr(args, "config", None) else {}
        settings = Settings(args, cfg)
        return args.func(settings)
    except UsageError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    except ValueError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    except NumericalError as ex:
        print(f"numerical failure: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
