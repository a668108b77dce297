"""Command-line front end.

Every subcommand produces a list of rows plus metadata, emitted either as
JSON (``"schema": 1``) or as CSV with a header.  Exit codes: 0 success,
1 failed invariant suite, 2 usage error, 3 numerical error, 4 I/O error.
Errors are reported on stderr as a single JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import HarperLabError
from .numtheory import Frequency, as_rational, cf_expand

SCHEMA = 1
EXIT_OK, EXIT_ASSERT, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    potential: str
    frequency: str | None
    params: dict = field(default_factory=dict)
    seed: int | None = None
    out: str = "json"
    output: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(kind):
    def conv(text):
        try:
            x = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if not x > 0:
            raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
        return x
    return conv


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--potential", default="amo:1.0",
                        help="amo:<lambda> or fourier:<csv path> (default amo:1.0)")
    common.add_argument("--out", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write to this file instead of stdout")

    parser = _Parser(prog="harperlab", description="Periodic-approximant spectral tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("butterfly", parents=[common], help="union spectra for all p/q, q <= qmax")
    p.add_argument("--qmax", type=_positive(int), default=10)
    p.add_argument("--mode", choices=("union", "intersection"), default="union")
    p.add_argument("--tol", type=_positive(float), default=1e-8)

    p = sub.add_parser("bands", parents=[common], help="Floquet bands at one phase")
    p.add_argument("--freq", required=True)
    p.add_argument("--theta", type=float, default=0.0)

    p = sub.add_parser("spectra", parents=[common], help="S+ or S- at a rational frequency")
    p.add_argument("--freq", required=True)
    p.add_argument("--mode", choices=("splus", "sminus", "union", "intersection"),
                   default="splus")
    p.add_argument("--tol", type=_positive(float), default=1e-8)

    p = sub.add_parser("spectra-limit", parents=[common],
                       help="S+ or S- along the convergents of alpha")
    p.add_argument("--alpha", required=True)
    p.add_argument("--depth", type=_positive(int), default=6)
    p.add_argument("--mode", choices=("splus", "sminus", "union", "intersection"),
                   default="sminus")
    p.add_argument("--tol", type=_positive(float), default=1e-8)

    p = sub.add_parser("le", parents=[common], help="Lyapunov exponent profile in eps")
    p.add_argument("--alpha", required=True)
    p.add_argument("--depth", type=_positive(int), default=8)
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--delta1", type=_positive(float), default=0.5)
    p.add_argument("--grid", type=_positive(int), default=41)

    p = sub.add_parser("acceleration", parents=[common], help="quantized acceleration")
    p.add_argument("--alpha", required=True)
    p.add_argument("--depth", type=_positive(int), default=8)
    p.add_argument("--energy", type=_float_list, required=True)
    p.add_argument("--eps0", type=_float_list, default=[0.05, 0.2, 0.4])
    p.add_argument("--h", type=_positive(float), default=0.01)

    p = sub.add_parser("chambers", parents=[common], help="phase dependence of the discriminant")
    p.add_argument("--freq", required=True)
    p.add_argument("--energy", type=_float_list, default=[0.0])

    p = sub.add_parser("polylevel", help="level-set suites")
    psub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    pv = psub.add_parser("verify", help="randomized level-set checks")
    pv.add_argument("--n", type=_positive(int), default=8)
    pv.add_argument("--trials", type=_positive(int), default=1000)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--out", choices=("json", "csv"), default="json")
    pv.add_argument("--output")

    p = sub.add_parser("duality", help="dual spectra")
    dsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    dc = dsub.add_parser("check", parents=[common], help="dual S+ against direct S+")
    dc.add_argument("--freq", required=True)
    dc.add_argument("--N", type=_positive(int), default=None)
    dc.add_argument("--xi", type=_positive(int), default=64)

    p = sub.add_parser("ids", parents=[common], help="integrated density of states")
    p.add_argument("--freq", required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--energy", type=_float_list, required=True)
    p.add_argument("--size", type=_positive(int), default=None)
    return parser


def parse(argv: Sequence[str] | None = None) -> RunConfig:
    """Validate arguments into a :class:`RunConfig`; raises :class:`UsageError`."""
    from .potential import parse_potential

    ns = _build_parser().parse_args(argv)
    command = ns.command
    if getattr(ns, "action", None):
        command = f"{ns.command} {ns.action}"
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "action", "potential", "out", "output", "seed")}
    potential = getattr(ns, "potential", "amo:1.0")
    if command != "polylevel verify":
        try:
            parse_potential(potential)
        except (ValueError, OSError) as exc:
            raise UsageError(f"bad --potential: {exc}") from None
    freq = None
    if "freq" in params:
        try:
            f = Frequency.parse(params.pop("freq"))
        except ValueError as exc:
            raise UsageError(f"bad --freq: {exc}") from None
        if not f.is_rational:
            raise UsageError("--freq must be rational p/q; use --alpha for irrationals")
        freq = f"{f.p}/{f.q}"
    elif "alpha" in params:
        alpha = params.pop("alpha")
        try:
            f = Frequency.parse(alpha)
        except ValueError as exc:
            raise UsageError(f"bad --alpha: {exc}") from None
        freq = f"{f.p}/{f.q}" if f.is_rational else alpha
        if "depth" in params:
            cf_expand(f, params["depth"])  # surfaces precision-exhausted before any work
    if command == "acceleration" and any(e <= 0 for e in params["eps0"]):
        raise UsageError("--eps0 values must be > 0")
    return RunConfig(command, potential, freq, params, getattr(ns, "seed", None),
                     ns.out, ns.output)


# subcommand bodies return (metadata, rows, status)

def _intervals(s) -> list[list[float]]:
    return [[a, b] for a, b in s.intervals]


def _cmd_butterfly(cfg, v):
    from .spectra import butterfly_table

    rows = []
    for (p, q), s in butterfly_table(v, cfg.params["qmax"], cfg.params["mode"],
                                     cfg.params["tol"]):
        rows.append({"p": p, "q": q, "alpha": p / q, "measure": s.measure,
                     "components": len(s), "intervals": _intervals(s)})
    return {"qmax": cfg.params["qmax"], "mode": cfg.params["mode"],
            "tol": cfg.params["tol"]}, rows, EXIT_OK


def _cmd_bands(cfg, v):
    from .spectra import band_edges, floquet_checks

    pq = as_rational(cfg.frequency)
    theta = cfg.params["theta"]
    bs = band_edges(v, pq, theta)
    rows = [{"band": i + 1, "lo": lo, "hi": hi, "width": hi - lo}
            for i, (lo, hi) in enumerate(bs.bands)]
    checks = floquet_checks(v, pq, theta)
    ok = all(v for v in checks.values() if isinstance(v, bool))
    return {"theta": theta, "checks": checks}, rows, EXIT_OK if ok else EXIT_ASSERT


def _cmd_spectra(cfg, v):
    from .spectra import spectral_set

    pq = as_rational(cfg.frequency)
    s = spectral_set(v, pq, cfg.params["mode"], tol=cfg.params["tol"])
    rows = [{"lo": a, "hi": b} for a, b in s.intervals]
    return {"mode": cfg.params["mode"], "tol": cfg.params["tol"],
            "measure": s.measure}, rows, EXIT_OK


def _cmd_spectra_limit(cfg, v):
    from .spectra import set_limit, spectral_set

    seq = cf_expand(cfg.frequency, cfg.params["depth"])
    sets = [spectral_set(v, pq, cfg.params["mode"], tol=cfg.params["tol"]) for pq in seq]
    rows = []
    for i, (pq, s) in enumerate(zip(seq, sets)):
        gap = set_limit(sets, i)[2] if i + 2 <= len(sets) else None
        step = (s ^ sets[i + 1]).measure if i + 1 < len(sets) else None
        rows.append({"n": i, "p": pq[0], "q": pq[1], "measure": s.measure,
                     "gap_measure": gap, "symdiff_next": step})
    return {"mode": cfg.params["mode"], "depth": cfg.params["depth"]}, rows, EXIT_OK


def _cmd_le(cfg, v):
    from .cocycle import lyapunov_profile

    prof = lyapunov_profile(v, _beta(cfg), cfg.params["energy"], cfg.params["delta1"],
                            grid=cfg.params["grid"], depth=cfg.params["depth"])
    rows = [{"eps": float(e), "L": float(L),
             "right_derivative": None if math.isnan(d) else float(d)}
            for e, L, d in zip(prof.eps, prof.L, prof.right_derivative)]
    return {"energy": prof.E, "approximant": f"{prof.pq[0]}/{prof.pq[1]}",
            "error_proxy": prof.error_proxy, "cutoff": prof.cutoff}, rows, EXIT_OK


def _cmd_acceleration(cfg, v):
    from .cocycle import acceleration, local_profile
    from .errors import GridTooCoarse

    rows, status = [], EXIT_OK
    h = cfg.params["h"]
    for E in cfg.params["energy"]:
        for eps0 in cfg.params["eps0"]:
            prof = local_profile(v, _beta(cfg), E, eps0, h, depth=cfg.params["depth"])
            try:
                acc = acceleration(prof, eps0)
                rows.append({"energy": E, "eps0": eps0, "omega": acc.omega,
                             "omega_raw": acc.omega_raw, "residual": acc.residual})
            except GridTooCoarse as exc:
                status = EXIT_ASSERT
                rows.append({"energy": E, "eps0": eps0, "omega": None,
                             "omega_raw": None, "residual": None, "error": str(exc)})
    return {"h": h, "depth": cfg.params["depth"]}, rows, status


def _cmd_chambers(cfg, v):
    from .chambers import chambers_report

    pq = as_rational(cfg.frequency)
    rows = []
    for E in cfg.params["energy"]:
        rep = chambers_report(v, pq, E)
        d = rep.to_dict()
        d["abs_coeffs"] = ";".join(repr(x) for x in rep.abs_coeffs) if cfg.out == "csv" \
            else list(rep.abs_coeffs)
        d["within_sandwich"] = bool(rep.lower * (1 - 1e-9) <= rep.deviation
                                    <= rep.upper * (1 + 1e-9) + 1e-300)
        rows.append(d)
    ok = all(r["within_sandwich"] for r in rows)
    return {}, rows, EXIT_OK if ok else EXIT_ASSERT


def _cmd_polylevel_verify(cfg, v):
    from .polylevel import verify

    rep = verify(cfg.params["n"], cfg.params["trials"], cfg.seed)
    rows = [{"check": k, "trials": rep.counts[k], "violations": rep.violations[k]}
            for k in rep.counts]
    meta = {"n": cfg.params["n"], "trials": rep.trials, "seed": cfg.seed,
            "failures": rep.failures}
    return meta, rows, EXIT_OK if rep.ok else EXIT_ASSERT


def _cmd_duality_check(cfg, v):
    from .duality import invariance_check

    pq = as_rational(cfg.frequency)
    res = invariance_check(v, pq, cfg.params["N"], cfg.params["xi"])
    N = cfg.params["N"] or 50 * pq[1]
    rows = [{"source": "dual", "lo": a, "hi": b} for a, b in res.dual.intervals]
    rows += [{"source": "direct", "lo": a, "hi": b} for a, b in res.direct.intervals]
    meta = {"N": N, "xi": cfg.params["xi"], "hausdorff": res.distance,
            "tolerance": res.tolerance, "passes": res.passes}
    return meta, rows, EXIT_OK if res.passes else EXIT_ASSERT


def _cmd_ids(cfg, v):
    from .spectra import ids_finite_section, ids_rational

    pq = as_rational(cfg.frequency)
    theta = cfg.params["theta"]
    E = np.array(sorted(cfg.params["energy"]))
    size = cfg.params["size"] or 100 * pq[1]
    fs = np.atleast_1d(ids_finite_section(v, pq, theta, E, size))
    rows = [{"energy": float(e), "ids": ids_rational(v, pq, theta, float(e)),
             "ids_finite_section": float(f)} for e, f in zip(E, fs)]
    vals = [r["ids"] for r in rows]
    ok = all(b >= a for a, b in zip(vals, vals[1:]))
    return {"theta": theta, "section_size": size}, rows, EXIT_OK if ok else EXIT_ASSERT


_COMMANDS = {
    "butterfly": _cmd_butterfly,
    "bands": _cmd_bands,
    "spectra": _cmd_spectra,
    "spectra-limit": _cmd_spectra_limit,
    "le": _cmd_le,
    "acceleration": _cmd_acceleration,
    "chambers": _cmd_chambers,
    "polylevel verify": _cmd_polylevel_verify,
    "duality check": _cmd_duality_check,
    "ids": _cmd_ids,
}


def _beta(cfg):
    f = Frequency.parse(cfg.frequency)
    return (f.p, f.q) if f.is_rational else f


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (list, tuple)):
        return ";".join(":".join(repr(float(y)) for y in item) if isinstance(item, (list, tuple))
                        else repr(item) for item in x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render(cfg: RunConfig, meta: dict, rows: list[dict]) -> str:
    if cfg.out == "json":
        doc = {"schema": SCHEMA, "command": cfg.command}
        if cfg.command != "polylevel verify":
            doc["potential"] = cfg.potential
        if cfg.frequency is not None:
            doc["frequency"] = cfg.frequency
        doc.update(meta)
        doc["rows"] = rows
        return json.dumps(_jsonable(doc), indent=2) + "\n"
    header: list[str] = []
    for r in rows:
        for k in r:
            if k not in header:
                header.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_cell(r.get(k)) for k in header])
    return buf.getvalue()


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"schema": SCHEMA, "error": kind, "message": message}) + "\n")
    return code


def run(cfg: RunConfig) -> int:
    from .potential import parse_potential

    try:
        v = parse_potential(cfg.potential) if cfg.command != "polylevel verify" else None
        meta, rows, status = _COMMANDS[cfg.command](cfg, v)
    except HarperLabError as exc:
        return _fail(EXIT_NUMERIC, exc.code, str(exc))
    except AssertionError as exc:
        return _fail(EXIT_ASSERT, "assertion-failed", str(exc))
    text = render(cfg, meta, rows)
    try:
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        return _fail(EXIT_IO, "io-error", str(exc))
    return status


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except HarperLabError as exc:
        return _fail(EXIT_NUMERIC, exc.code, str(exc))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
