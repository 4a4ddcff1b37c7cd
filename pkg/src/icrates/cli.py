"""Command-line front end.

Subcommands: ``classify``, ``rate``, ``sweep``, ``verify``, ``roots`` and
``region``.  Exit codes are 0 on success, 1 when a verification suite fails
and 2 for usage or domain errors.

The number of worker threads for sweeps and verification grids can be set
with the ``ICRATES_THREADS`` environment variable; output does not depend
on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from . import numerics
from ._parallel import THREADS_ENV, map_ordered, thread_count
from .channel import (
    Channel2Asym,
    Channel2Sym,
    ChannelKSym,
    Regime2,
    RegimeK,
    classify2asym,
    classify2sym,
    classifyKsym,
    ian_tdma_crossover,
    k_noisy_condition,
    noisy_boundary,
)
from .errors import DomainError
from .rates2 import (
    BOUND_LABELS,
    REGIONS,
    RateResult,
    rate_sym_etw,
    rate_sym_ian,
    rate_sym_p2p,
    rate_sym_tdma2,
    region_vertices,
    sum_rate_p2p_asym,
)
from .rates_k import (
    approx_etwK,
    approx_tdma,
    rate_sym_etwK_closed,
    rate_sym_etwK_oracle,
    rate_sym_p2p_combinedK,
    rate_sym_p2pK_oracle,
    rate_sym_tdmaK,
)
from .verify import CSV_FIELDS, SUITES, report_csv_row, run_suites

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

SCHEMES = ("ian", "tdma", "p2p", "etw", "approx-etw", "approx-tdma")
ORACLE_SCHEMES = ("p2p-oracle", "etw-oracle")
MODELS = ("two-sym", "two-asym", "k-sym")
SWEEPABLE = {
    "two-sym": ("P", "a"),
    "k-sym": ("P", "a"),
    "two-asym": ("P1", "P2", "a1", "a2"),
}
MODEL_SCHEMES = {
    "two-sym": SCHEMES,
    "k-sym": SCHEMES,
    "two-asym": ("p2p",),
}
CSV_BASE = ("model", "K", "P", "a", "P1", "P2", "a1", "a2", "regime")

CONFIG_HELP = """\
sweep configuration (JSON object, flat keys):
  model      "two-sym" | "two-asym" | "k-sym"
  K          number of users (k-sym only)
  P, a       fixed SNR and ISR (two-sym, k-sym); "snr_db" may replace P
  P1, P2, a1, a2   fixed parameters (two-asym)
  sweep      name of the swept parameter, e.g. "a"
  range      [min, max, points]
  spacing    "linear" (default) or "log"
  schemes    list drawn from ian, tdma, p2p, etw, approx-etw, approx-tdma
             (two-asym supports only p2p, the maximum sum rate)

CSV columns: model,K,P,a,P1,P2,a1,a2,regime then rate_<scheme>,bound_<scheme>
per requested scheme.  Numbers use 17 significant digits; a cell is empty
when the point lies outside a scheme's domain.  The approx-* columns are
high-SNR approximations and can be negative just inside their domain.

active_bound vocabulary:
""" + "\n".join(f"  {k:<24}{v}" for k, v in BOUND_LABELS.items()) + """
  ETW-common-interferers  K-user ETW bound on the K-1 interfering commons
  Noisy/Weak/Strong/VeryStrong  K-user Gaussian-p2p rate, by regime
  approx                  high-SNR approximation
"""


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(x, ".17g")


# --- channel arguments -----------------------------------------------------

def _add_channel_args(p: argparse.ArgumentParser, need_isr: bool = True) -> None:
    p.add_argument("--users", "--k", dest="K", type=int, default=2,
                   help="number of transceiver pairs (default 2)")
    snr = p.add_mutually_exclusive_group(required=True)
    snr.add_argument("--snr", type=float, help="SNR P, linear")
    snr.add_argument("--snr-db", type=float, help="SNR P in dB")
    if need_isr:
        p.add_argument("--isr", type=float, required=True, help="interference-to-signal ratio a")
    p.add_argument("--snr2", type=float, help="second user's SNR (asymmetric two-user channel)")
    p.add_argument("--snr2-db", type=float, help="second user's SNR in dB")
    p.add_argument("--isr2", type=float, help="cross gain at receiver 2 (asymmetric channel)")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _snr(args) -> float:
    return args.snr if args.snr is not None else db_to_linear(args.snr_db)


def _channel(args):
    P = _snr(args)
    asym = args.snr2 is not None or args.snr2_db is not None or args.isr2 is not None
    if asym:
        if args.K != 2:
            raise UsageError("the asymmetric channel has two users")
        if args.isr2 is None or (args.snr2 is None and args.snr2_db is None):
            raise UsageError("asymmetric channel needs --snr2/--snr2-db and --isr2")
        P2 = args.snr2 if args.snr2 is not None else db_to_linear(args.snr2_db)
        return Channel2Asym(P, P2, args.isr, args.isr2)
    if args.K == 2:
        return Channel2Sym(P, args.isr)
    return ChannelKSym(args.K, P, args.isr)


# --- classify --------------------------------------------------------------

def k_noisy_threshold(K: int, P: float) -> float:
    """``a`` at which the K-user noisy condition stops holding."""
    def cond(a):
        return 1.0 if k_noisy_condition(ChannelKSym(K, P, a)) else -1.0
    hi = numerics.grow_bracket(cond, 1e-300, 1.0)
    return numerics.bracketed_root(cond, 1e-300, hi, 1e-15).value


def k_very_strong_threshold(K: int, P: float) -> float:
    return (math.expm1(K * math.log1p(P)) - P) / ((K - 1) * P)


def describe_regime(ch) -> str:
    if isinstance(ch, Channel2Sym):
        r = classify2sym(ch)
        nb = noisy_boundary(ch.P)
        bounds = {
            Regime2.NOISY: f"a ≤ {nb:.5f}",
            Regime2.WEAK: f"{nb:.5f} < a ≤ 1",
            Regime2.STRONG: f"1 < a ≤ {1 + ch.P:.5f}",
            Regime2.VERY_STRONG: f"a > {1 + ch.P:.5f}",
        }[r]
        return f"{r} ({bounds})"
    if isinstance(ch, ChannelKSym):
        r = classifyKsym(ch)
        lo = k_noisy_threshold(ch.K, ch.P)
        hi = k_very_strong_threshold(ch.K, ch.P)
        bounds = {
            RegimeK.NOISY: f"a < {lo:.5g}",
            RegimeK.WEAK: f"{lo:.5g} ≤ a < 1",
            RegimeK.STRONG: f"1 ≤ a < {hi:.5g}",
            RegimeK.VERY_STRONG: f"a ≥ {hi:.5g}",
        }[r]
        return f"{r} ({bounds})"
    r = classify2asym(ch)
    lhs = [ch.a1 * (1 + ch.a2 * ch.P1), ch.a2 * (1 + ch.a1 * ch.P2)]
    return f"{r} (a1(1+a2P1)={lhs[0]:.5g}, a2(1+a1P2)={lhs[1]:.5g})"


def cmd_classify(args) -> int:
    print(describe_regime(_channel(args)))
    return EXIT_OK


# --- rate ------------------------------------------------------------------

class Approximation(NamedTuple):
    """High-SNR approximation; unlike a rate it may be negative near its domain edge."""

    value: float
    scheme: str
    active_bound: str


def compute_rate(ch, scheme: str) -> RateResult | Approximation:
    """Dispatch a scheme name to the rate function for the channel model."""
    if isinstance(ch, Channel2Asym):
        if scheme != "p2p":
            raise DomainError(f"asymmetric channel supports only the p2p sum rate, not {scheme!r}")
        return sum_rate_p2p_asym(ch)
    if isinstance(ch, Channel2Sym):
        if scheme == "ian":
            return rate_sym_ian(ch)
        if scheme == "tdma":
            return rate_sym_tdma2(ch.P)
        if scheme == "p2p":
            return rate_sym_p2p(ch)
        if scheme == "etw":
            return rate_sym_etw(ch)
        ch = ChannelKSym(2, ch.P, ch.a)
    K, P, a = ch.K, ch.P, ch.a
    if scheme == "ian":
        return RateResult(math.log2(1 + P / (1 + (K - 1) * a * P)), "IAN", "individual-IAN")
    if scheme == "tdma":
        return rate_sym_tdmaK(K, P)
    if scheme == "p2p":
        return rate_sym_p2p_combinedK(ch)
    if scheme == "etw":
        return rate_sym_etwK_closed(ch)
    if scheme == "approx-etw":
        return Approximation(approx_etwK(K, P, a), "ETW", "approx")
    if scheme == "approx-tdma":
        return Approximation(approx_tdma(K, P), "TDMA", "approx")
    if scheme == "p2p-oracle":
        return rate_sym_p2pK_oracle(ch)
    if scheme == "etw-oracle":
        return RateResult(rate_sym_etwK_oracle(ch), "ETW", "oracle")
    raise DomainError(f"unknown scheme {scheme!r}")


def cmd_rate(args) -> int:
    ch = _channel(args)
    r = compute_rate(ch, args.scheme)
    print(f"{r.value:.12g} bits/channel-use  scheme={r.scheme}  active_bound={r.active_bound}")
    return EXIT_OK


# --- sweep -----------------------------------------------------------------

@dataclass
class SweepSpec:
    model: str
    fixed: dict
    param: str
    lo: float
    hi: float
    points: int
    spacing: str = "linear"
    schemes: list = field(default_factory=list)

    def values(self) -> list[float]:
        n = self.points
        if self.spacing == "log":
            la, lb = math.log(self.lo), math.log(self.hi)
            vals = [math.exp(la + (lb - la) * i / (n - 1)) for i in range(n)]
        else:
            vals = [self.lo + (self.hi - self.lo) * i / (n - 1) for i in range(n)]
        vals[0], vals[-1] = self.lo, self.hi
        return vals

    def channel(self, value: float):
        params = dict(self.fixed)
        params[self.param] = value
        if self.model == "two-sym":
            return Channel2Sym(params["P"], params["a"])
        if self.model == "k-sym":
            return ChannelKSym(params["K"], params["P"], params["a"])
        return Channel2Asym(params["P1"], params["P2"], params["a1"], params["a2"])


def _config_error(path, msg) -> UsageError:
    return UsageError(f"{path}: {msg}")


def _number(cfg, key, path):
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise _config_error(path, f"field {key!r} must be a finite number, got {v!r}")
    return float(v)


def parse_sweep_config(text: str, path: str = "<config>") -> SweepSpec:
    """Parse and validate a JSON sweep configuration."""
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise _config_error(path, f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(cfg, dict):
        raise _config_error(path, "top level must be a JSON object")

    model = cfg.get("model")
    if model not in MODELS:
        raise _config_error(path, f"field 'model' must be one of {MODELS}, got {model!r}")
    param = cfg.get("sweep")
    if param not in SWEEPABLE[model]:
        raise _config_error(path, f"field 'sweep' must be one of {SWEEPABLE[model]} for {model}")
    rng = cfg.get("range")
    if (not isinstance(rng, list) or len(rng) != 3
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in rng)):
        raise _config_error(path, "field 'range' must be [min, max, points]")
    lo, hi, points = float(rng[0]), float(rng[1]), rng[2]
    if int(points) != points or points < 2:
        raise _config_error(path, f"field 'range': points must be an integer >= 2, got {points!r}")
    if not lo < hi:
        raise _config_error(path, f"field 'range': need min < max, got {lo!r}, {hi!r}")
    spacing = cfg.get("spacing", "linear")
    if spacing not in ("linear", "log"):
        raise _config_error(path, f"field 'spacing' must be 'linear' or 'log', got {spacing!r}")
    if spacing == "log" and lo <= 0:
        raise _config_error(path, "log spacing needs a positive range")

    schemes = cfg.get("schemes")
    if not isinstance(schemes, list) or not schemes:
        raise _config_error(path, "field 'schemes' must be a non-empty list")
    for s in schemes:
        if s not in MODEL_SCHEMES[model]:
            raise _config_error(path, f"scheme {s!r} not available for {model}; "
                                      f"choose from {MODEL_SCHEMES[model]}")
    if len(set(schemes)) != len(schemes):
        raise _config_error(path, "field 'schemes' has duplicates")

    fixed = {}
    if model in ("two-sym", "k-sym"):
        if "snr_db" in cfg and "P" in cfg:
            raise _config_error(path, "give either 'P' or 'snr_db', not both")
        if "snr_db" in cfg:
            fixed["P"] = db_to_linear(_number(cfg, "snr_db", path))
        needed = [k for k in ("P", "a") if k != param and k not in fixed]
        if model == "k-sym":
            K = cfg.get("K")
            if isinstance(K, bool) or not isinstance(K, int) or K < 2:
                raise _config_error(path, f"field 'K' must be an integer >= 2, got {K!r}")
            fixed["K"] = K
        if param == "P" and "P" in fixed:
            raise _config_error(path, "'snr_db' given but 'P' is swept")
    else:
        needed = [k for k in ("P1", "P2", "a1", "a2") if k != param]
    for k in needed:
        if k not in cfg:
            raise _config_error(path, f"missing field {k!r}")
        fixed[k] = _number(cfg, k, path)

    known = {"model", "sweep", "range", "spacing", "schemes", "K", "P", "a",
             "P1", "P2", "a1", "a2", "snr_db"}
    extra = sorted(set(cfg) - known)
    if extra:
        raise _config_error(path, f"unknown field(s) {extra}")

    spec = SweepSpec(model, fixed, param, lo, hi, int(points), spacing, list(schemes))
    try:
        spec.channel(lo)
        spec.channel(hi)
    except DomainError as e:
        raise _config_error(path, str(e)) from None
    return spec


def sweep_header(spec: SweepSpec) -> list[str]:
    cols = list(CSV_BASE)
    for s in spec.schemes:
        cols += [f"rate_{s}", f"bound_{s}"]
    return cols


def sweep_row(spec: SweepSpec, value: float) -> list[str]:
    ch = spec.channel(value)
    cells = dict.fromkeys(CSV_BASE, "")
    cells["model"] = spec.model
    if isinstance(ch, Channel2Sym):
        cells.update(K="2", P=_fmt(ch.P), a=_fmt(ch.a), regime=str(classify2sym(ch)))
    elif isinstance(ch, ChannelKSym):
        cells.update(K=str(ch.K), P=_fmt(ch.P), a=_fmt(ch.a), regime=str(classifyKsym(ch)))
    else:
        cells.update(K="2", P1=_fmt(ch.P1), P2=_fmt(ch.P2), a1=_fmt(ch.a1), a2=_fmt(ch.a2),
                     regime=str(classify2asym(ch)))
    row = [cells[c] for c in CSV_BASE]
    for s in spec.schemes:
        try:
            r = compute_rate(ch, s)
        except DomainError:
            row += ["", ""]
        else:
            row += [_fmt(r.value), r.active_bound]
    return row


def render_sweep(spec: SweepSpec, threads: int | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(sweep_header(spec))
    w.writerows(map_ordered(lambda v: sweep_row(spec, v), spec.values(), threads))
    return buf.getvalue()


def cmd_sweep(args) -> int:
    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e.strerror}") from None
    spec = parse_sweep_config(text, str(path))
    out = render_sweep(spec)
    try:
        Path(args.out).write_text(out)
    except OSError as e:
        raise UsageError(f"cannot write {args.out}: {e.strerror}") from None
    print(f"wrote {spec.points} rows ({spec.model}, {spec.param} from {spec.lo:g} to "
          f"{spec.hi:g}, schemes {','.join(spec.schemes)}) to {args.out}")
    return EXIT_OK


# --- verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    selector = args.suite_flag or args.suite or "all"
    if selector != "all" and selector not in SUITES:
        raise UsageError(f"unknown suite {selector!r}; choose from all, {', '.join(SUITES)}")
    reports = run_suites(selector)
    for r in reports:
        print(r.summary())
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                if args.out.endswith(".csv"):
                    w = csv.writer(fh, lineterminator="\n")
                    w.writerow(CSV_FIELDS)
                    w.writerows(report_csv_row(r) for r in reports)
                else:
                    fh.writelines(r.to_record() + "\n" for r in reports)
        except OSError as e:
            raise UsageError(f"cannot write {args.out}: {e.strerror}") from None
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# --- roots / region --------------------------------------------------------

def cmd_roots(args) -> int:
    P = _snr(args)
    if not (math.isfinite(P) and P > 0):
        raise DomainError(f"P must be positive, got {P!r}")
    print(f"P = {P!r}")
    print(f"a0 = {numerics.find_a0(P)!r}  (ETW individual/sum switch)")
    print(f"a1 = {numerics.a1_closed(P)!r}  (ETW sum term meets TDMA)")
    print(f"a2 = {numerics.a2_closed(P)!r}  (ETW sum term meets TDMA + 0.5)")
    print(f"noisy_boundary = {noisy_boundary(P)!r}")
    print(f"ian_tdma_crossover = {ian_tdma_crossover(P)!r}")
    print(f"g1_root = {numerics.g1_root(P)!r}  (K=3 approximate ETW switch)")
    return EXIT_OK


_PLOT_STYLE = {"C0": "lc rgb '#1f77b4'", "C1": "lc rgb '#d62728'",
               "C1prime": "lc rgb '#2ca02c'", "Capacity": "lc rgb '#000000' lw 2"}


def plot_script(ch: Channel2Sym, regions) -> str:
    """Self-contained gnuplot script drawing the given regions."""
    lines = [
        f"# rate regions, P={_fmt(ch.P)} a={_fmt(ch.a)}, regime {classify2sym(ch)}",
        "set size square",
        "set xlabel 'R_1 [bits/channel use]'",
        "set ylabel 'R_2 [bits/channel use]'",
        "set key top right",
    ]
    plots = []
    for rv in regions:
        block = f"${rv.region}"
        lines.append(f"{block} << EOD")
        for x, y in list(rv.vertices) + [rv.vertices[0]]:
            lines.append(f"{_fmt(x)} {_fmt(y)}")
        lines.append("EOD")
        plots.append(f"{block} with lines {_PLOT_STYLE[rv.region]} title '{rv.region}'")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def cmd_region(args) -> int:
    ch = _channel(args)
    if not isinstance(ch, Channel2Sym):
        raise UsageError("regions are available for the two-user symmetric channel only")
    names = REGIONS if args.which == "all" else (args.which,)
    regions = [region_vertices(ch, n) for n in names]
    for rv in regions:
        print(f"{rv.region}: " + " ".join(f"({_fmt(x)}, {_fmt(y)})" for x, y in rv.vertices))
    if args.plot_script:
        overlay = [region_vertices(ch, n) for n in ("C0", "C1", "C1prime")]
        if args.which == "Capacity":
            overlay += regions
        try:
            Path(args.plot_script).write_text(plot_script(ch, overlay))
        except OSError as e:
            raise UsageError(f"cannot write {args.plot_script}: {e.strerror}") from None
    return EXIT_OK


# --- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icrates",
        description="Achievable rates of simple schemes on Gaussian interference channels.",
        epilog=f"Set {THREADS_ENV}=N to evaluate sweeps and grids on N threads.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="interference regime of a channel")
    _add_channel_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("rate", help="symmetric (or asymmetric sum) rate of one scheme")
    _add_channel_args(p)
    p.add_argument("--scheme", required=True, choices=SCHEMES + ORACLE_SCHEMES)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("sweep", help="parameter sweep to CSV",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       epilog=CONFIG_HELP)
    p.add_argument("--config", required=True, help="JSON sweep configuration")
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", nargs="?", help=f"all (default) or one of: {', '.join(SUITES)}")
    p.add_argument("--suite", dest="suite_flag")
    p.add_argument("--out", help="write reports as JSON lines (or CSV if the name ends in .csv)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roots", help="crossover points and roots for a given SNR")
    snr = p.add_mutually_exclusive_group(required=True)
    snr.add_argument("--snr", type=float)
    snr.add_argument("--snr-db", type=float)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("region", help="rate-region vertices (two-user symmetric)")
    _add_channel_args(p)
    p.add_argument("--which", default="Capacity", choices=REGIONS + ("all",))
    p.add_argument("--plot-script", metavar="PATH", help="also write a gnuplot script")
    p.set_defaults(func=cmd_region)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_count()
        return args.func(args)
    except (UsageError, DomainError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
