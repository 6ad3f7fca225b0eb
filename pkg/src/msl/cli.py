"""Command-line front end.

Every subcommand is also a manifest step: the argparse layer normalizes
flags into a string-keyed parameter map and hands it to run_step, which is
what manifest execution calls directly. Exit codes: 0 success, 2 validation
error, 3 budget exceeded, 4 io/cache failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import (__version__, blockcache, characters, correlations, fourier,
               manifest as manifest_mod, pretentious, sieves, typical)
from .errors import BudgetError, CacheError, MslError, ValidationError


def _num(s: str) -> int:
    """Integer-valued sizes, accepting scientific notation like 1e6."""
    try:
        v = float(s)
    except ValueError:
        raise ValidationError(f"not a number: {s!r}") from None
    if v != int(v):
        raise ValidationError(f"expected an integer value, got {s!r}")
    return int(v)


def _alpha(s: str) -> float | Fraction:
    if s == "golden":
        return (math.sqrt(5) - 1) / 2
    if "/" in s:
        a, b = s.split("/", 1)
        return Fraction(int(a), int(b))
    return float(s)


def _interval(s: str) -> tuple[float, float]:
    try:
        a, b = s.split(":")
        return float(a), float(b)
    except ValueError:
        raise ValidationError(f"interval must look like lo:hi, got {s!r}") from None


def _int_list(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(",") if x != "")


def _profile_from(params: dict) -> typical.TypicalParams:
    mode = params.get("mode", "explicit")
    X = _num(params.get("X", "1000000"))
    H = _num(params.get("H", "64"))
    A = float(params.get("A", "6"))
    delta = float(params.get("delta", "0.05"))
    if mode == "explicit":
        if "i1" not in params or "i2" not in params:
            raise ValidationError("explicit profiles need i1 and i2 (lo:hi)")
        ivs = (_interval(params["i1"]), _interval(params["i2"]))
        return typical.derive_profile(X, H, A, delta, "explicit", ivs)
    return typical.derive_profile(X, H, A, delta, "paper-formula")


# ---------------------------------------------------------------- steps


def _step_sieve(params: dict, ctx: manifest_mod.RunContext) -> None:
    fn = params.get("fn", "mobius")
    lo = _num(params.get("lo", "1"))
    hi = _num(params.get("hi", "1048576"))
    block = _num(params.get("block", str(sieves.DEFAULT_BLOCK_SIZE)))
    if ctx.cache_dir is not None:
        tab = blockcache.cached_table(fn, lo, hi, ctx.cache_dir, block_size=block)
    else:
        tab = sieves.table(fn, lo, hi, block_size=block)
    out = ctx.out_path(f"sieve_{fn}.json", params.get("out"))
    ctx.write_json(out, {
        "function": fn, "lo": lo, "hi": hi, "block_size": block,
        "value_sum": float(np.asarray(tab.values, dtype=np.float64).sum()),
        "nonzero": int(np.count_nonzero(tab.values)),
        "cached": ctx.cache_dir is not None,
    })


def _step_typical(params: dict, ctx: manifest_mod.RunContext) -> None:
    prof = _profile_from(params)
    dens = typical.complement_density(prof)
    upto = _num(params.get("measure-upto", str(min(prof.X, 10 ** 6))))
    measured = typical.measured_outside_fraction(prof, upto=upto)
    out = ctx.out_path("density.json", params.get("report"))
    ctx.write_json(out, {
        "params": {k: getattr(prof, k) for k in
                   ("X", "H", "A", "delta", "psi", "W", "P1", "Q1", "P2", "Q2", "mode")},
        "log_convention": typical.LOG_CONVENTION_NOTE,
        "rho1": dens.rho1, "rho2": dens.rho2,
        "union_sum": dens.union_sum,
        "independent_estimate": dens.independent_estimate,
        "measured_fraction": measured, "measured_upto": upto,
    })


def _step_chars(params: dict, ctx: manifest_mod.RunContext) -> None:
    q = _num(params.get("q", "4"))
    chars = characters.character_group(q)
    e = chars[0].group.exponent
    payload = {"q": q, "phi": len(chars), "group_exponent": e, "characters": []}
    for c in chars:
        tab = [(None if c.value_index(n) is None else [e, int(c.value_index(n))])
               for n in range(q)]
        payload["characters"].append({
            "index": c.index, "exponents": list(c.exponent_vector),
            "order": c.order(), "values": tab,
        })
    out = ctx.out_path(f"chars_q{q}.json", params.get("dump"))
    ctx.write_json(out, payload)


def _step_correlate(params: dict, ctx: manifest_mod.RunContext) -> None:
    f = params.get("f", "mobius")
    X = _num(params.get("X", "1000000"))
    H = _num(params.get("H", "256"))
    method = params.get("method", "auto")
    base = params.get("base", "primes")
    rep = correlations.shifted_correlation(f, X, H, base=base, method=method)
    out = ctx.out_path("corr.csv", params.get("out"))
    rows = [(h + 1, float(rep.C[h]), float(rep.C[h] / rep.normalizer))
            for h in range(H)]
    ctx.write_rows(out, ["h", "C_h", "C_h_over_piX"], rows)
    summary = ctx.out_path(out.stem + "_summary.json")
    ctx.write_json(summary, {
        "f": f, "X": X, "H": H, "base": base, "method": rep.method,
        "normalizer": rep.normalizer, "aggregate": rep.aggregate,
        "fft_error_bound": rep.fft_error_bound, "C0": rep.C0,
    })


def _step_chowla(params: dict, ctx: manifest_mod.RunContext) -> None:
    X = _num(params.get("X", "1000000"))
    shifts = _int_list(params.get("shifts", "1,2"))
    value = correlations.chowla_sum(X, shifts)
    out = ctx.out_path("chowla.json", params.get("out"))
    ctx.write_json(out, {"X": X, "shifts": list(shifts), "value": value,
                         "normalized": value / X})


def _step_hl(params: dict, ctx: manifest_mod.RunContext) -> None:
    X = _num(params.get("X", "1000000"))
    tup = _int_list(params.get("tuple", "0,2"))
    pmax = _num(params.get("pmax", str(X)))
    res = correlations.hl_ktuple(X, tup, pmax)
    out = ctx.out_path("hl.json", params.get("out"))
    ctx.write_json(out, {
        "X": X, "tuple": list(tup), "p_max": pmax,
        "lambda_sum": res.lambda_sum, "prediction": res.prediction,
        "ratio": res.ratio, "ratio_defined": res.ratio is not None,
        "singular_series": res.series.value, "tail_bound": res.series.tail_bound,
    })


def _step_divcorr(params: dict, ctx: manifest_mod.RunContext) -> None:
    X = _num(params.get("X", "1000000"))
    H = _num(params.get("H", "64"))
    ks = _int_list(params.get("ks", "2"))
    tup = _int_list(params.get("tuple", "0"))
    rep = correlations.divisor_mobius_correlation(X, H, ks, tup)
    out = ctx.out_path("divcorr.csv", params.get("out"))
    ctx.write_rows(out, ["h", "C_h"], [(h + 1, float(rep.C[h])) for h in range(H)])
    summary = ctx.out_path(out.stem + "_summary.json")
    ctx.write_json(summary, {
        "X": X, "H": H, "ks": list(ks), "tuple": list(tup),
        "normalizer": rep.normalizer, "aggregate": rep.aggregate, "method": rep.method,
    })


def _step_arcs(params: dict, ctx: manifest_mod.RunContext) -> None:
    alpha = _alpha(params.get("alpha", "0.5"))
    W = float(params.get("W", "20"))
    Q1 = float(params.get("Q1", "10000"))
    label = fourier.classify_arc(float(alpha), W, Q1)
    out = ctx.out_path("arc.json", params.get("out"))
    ctx.write_json(out, {
        "alpha": label.alpha, "a": label.a, "q": label.q, "err": label.err,
        "class": label.klass, "W": W, "Q1": Q1,
    })


def _step_vino(params: dict, ctx: manifest_mod.RunContext) -> None:
    alpha = _alpha(params.get("alpha", "golden"))
    H = float(params.get("H", "10000"))
    P = _num(params.get("P", "1000"))
    res = fourier.vinogradov_sum(alpha, H, P)
    out = ctx.out_path("vino.json", params.get("out"))
    ctx.write_json(out, {
        "alpha": float(alpha), "H": H, "P": P,
        "value": res.value, "bound": res.bound, "ratio": res.ratio,
        "a": res.a, "q": res.q,
    })


def _fint_table(f: str, X: int, H: int, params: dict) -> sieves.ArithmeticTable:
    hi = X + H + 1
    if f.endswith("-typical"):
        base = f[:-len("-typical")]
        prof = _profile_from(params)
        tab = sieves.table(base, 1, hi)
        ind = typical.factor_condition_block(1, hi, prof)
        vals = np.where(ind, tab.values, 0).astype(tab.values.dtype)
        return sieves.ArithmeticTable(base, 1, hi, vals)
    return sieves.table(f, 1, hi)


def _step_fint(params: dict, ctx: manifest_mod.RunContext) -> None:
    f = params.get("f", "mobius")
    X = _num(params.get("X", "100000"))
    H = _num(params.get("H", "256"))
    q_max = _num(params.get("scan-q", "16"))
    grid = _num(params.get("grid", "64"))
    tab = _fint_table(f, X, H, params)
    cands = np.unique(np.concatenate((fourier.farey_fractions(q_max),
                                      np.arange(grid) / grid)))
    rows = []
    best = (-1.0, 0.0)
    for alpha in cands:
        v = fourier.fourier_integral(tab, X, H, float(alpha))
        rows.append((float(alpha), v))
        if v > best[0]:
            best = (v, float(alpha))
    out = ctx.out_path("fint.csv", params.get("out"))
    ctx.write_rows(out, ["alpha", "integral"], rows)
    label = fourier.classify_arc(best[1], W=q_max, Q1=max(grid, q_max * q_max + 1, q_max + 2))
    summary = ctx.out_path(out.stem + "_summary.json")
    ctx.write_json(summary, {
        "f": f, "X": X, "H": H, "scan_q": q_max, "grid": grid,
        "best_alpha": best[1], "best_value": best[0],
        "best_class": label.klass, "best_q": label.q,
        "note": "scan maximum is a lower bound for the true supremum",
    })


def _step_mvp(params: dict, ctx: manifest_mod.RunContext) -> None:
    prof = _profile_from(params)
    q = _num(params.get("q", "4"))
    chi_index = _num(params.get("chi", "1"))
    chars = characters.character_group(q)
    if not (0 <= chi_index < len(chars)):
        raise ValidationError(f"chi index {chi_index} outside group of size {len(chars)}")
    d = _num(params.get("d", "1"))
    Y = _num(params.get("Y", "100000"))
    T = float(params.get("T", "10000"))
    T0 = float(params["T0"]) if "T0" in params else None
    B = float(params["B"]) if "B" in params else None
    max_pairs = _num(params.get("max-pairs", str(1 << 27)))
    rep = fourier.twisted_mean_value_profile(prof, d, chars[chi_index], Y, T,
                                             T0=T0, B=B, max_pairs=max_pairs)
    out = ctx.out_path("mvp.json", params.get("out"))
    ctx.write_json(out, {
        "q": q, "chi": chi_index, "d": d, "Y": Y,
        "T0": rep.T0, "T": rep.T, "B": rep.B,
        "value": rep.value, "trivial_bound": rep.trivial_bound,
        "target_shape": rep.target_shape, "support_size": rep.support_size,
    })


def _step_pretend(params: dict, ctx: manifest_mod.RunContext) -> None:
    fid = params.get("f", "mobius")
    specs = {"mobius": pretentious.mobius_spec, "liouville": pretentious.liouville_spec,
             "one": pretentious.one_spec}
    if fid not in specs:
        raise ValidationError(f"unknown multiplicative function {fid!r}")
    X = _num(params.get("X", "10000"))
    Q = _num(params.get("Q", "4"))
    tres = float(params["tres"]) if "tres" in params else None
    res = pretentious.pretend_measure(specs[fid](), X, Q, t_resolution=tres)
    out = ctx.out_path("pretend.json", params.get("out"))
    ctx.write_json(out, {
        "f": fid, "X": X, "Q": Q,
        "value": res.value, "bracket": list(res.bracket),
        "witness_t": res.witness_t,
        "witness_chi": {"q": res.witness_chi[0], "index": res.witness_chi[1]},
        "grid": res.grid_meta,
    })


def _step_plotdata(params: dict, ctx: manifest_mod.RunContext) -> None:
    kind = params.get("kind", "corr-decay")
    run_path = params.get("run", str(ctx.output_dir / "runreport.json"))
    if Path(run_path).exists():
        report = manifest_mod.load_run_report(run_path)
    else:
        report = manifest_mod.RunReport(ctx.run_hash or "standalone", "adhoc",
                                        __version__, tuple())
    eps = None
    if "eps" in params:
        eps = [float(x) for x in params["eps"].split(",")]
    out = ctx.out_path(f"plot_{kind}.txt", params.get("out"))
    manifest_mod.emit_plotdata(report, kind, out, eps_list=eps)


_STEPS = {
    "sieve": _step_sieve,
    "typical": _step_typical,
    "chars": _step_chars,
    "correlate": _step_correlate,
    "chowla": _step_chowla,
    "hl": _step_hl,
    "divcorr": _step_divcorr,
    "arcs": _step_arcs,
    "vino": _step_vino,
    "fint": _step_fint,
    "mvp": _step_mvp,
    "pretend": _step_pretend,
    "plotdata": _step_plotdata,
}


def run_step(command: str, params: dict[str, str], ctx: manifest_mod.RunContext) -> None:
    if command not in _STEPS:
        raise ValidationError(f"unknown step command {command!r}")
    _STEPS[command](params, ctx)


# ---------------------------------------------------------------- argparse


def _add_passthrough(sub: argparse.ArgumentParser, names: list[str]) -> None:
    for n in names:
        sub.add_argument(f"--{n}")


_SUBCOMMAND_FLAGS = {
    "sieve": ["fn", "lo", "hi", "block", "out"],
    "typical": ["X", "H", "A", "delta", "mode", "i1", "i2", "report", "measure-upto"],
    "chars": ["q", "dump"],
    "correlate": ["f", "X", "H", "method", "base", "out"],
    "chowla": ["X", "shifts", "out"],
    "hl": ["X", "tuple", "pmax", "out"],
    "divcorr": ["X", "H", "ks", "tuple", "out"],
    "arcs": ["alpha", "W", "Q1", "out"],
    "vino": ["alpha", "H", "P", "out"],
    "fint": ["f", "X", "H", "scan-q", "grid", "out", "mode", "i1", "i2", "A", "delta"],
    "mvp": ["mode", "i1", "i2", "X", "H", "A", "delta", "q", "chi", "d", "Y",
            "T0", "T", "B", "max-pairs", "out"],
    "pretend": ["f", "X", "Q", "tres", "out"],
    "plotdata": ["run", "kind", "eps", "out"],
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msl",
                                description="shifted-prime correlation workbench")
    p.add_argument("--version", action="version", version=f"msl {__version__}")
    subs = p.add_subparsers(dest="command", required=True)
    for cmd, flags in _SUBCOMMAND_FLAGS.items():
        sp = subs.add_parser(cmd)
        _add_passthrough(sp, flags)
        sp.add_argument("--cache-dir")
        sp.add_argument("--output-dir", default=".")
        sp.add_argument("--seed", type=int, default=0)
    run = subs.add_parser("run")
    run.add_argument("manifest")
    run.add_argument("--cache-dir")
    gc = subs.add_parser("cache-gc")
    gc.add_argument("--cache-dir")
    gc.add_argument("--max-bytes", required=True)
    return p


def _cache_dir_from(args) -> Path | None:
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    env = os.environ.get("MSL_CACHE_DIR")
    return Path(env) if env else None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            man = manifest_mod.parse_manifest(args.manifest)
            override = _cache_dir_from(args)
            env = os.environ.get("MSL_CACHE_DIR")
            if override is None and env:
                override = Path(env)
            report = manifest_mod.run_manifest(man, cache_dir_override=override)
            print(f"run {report.name}: {len(report.steps)} steps, "
                  f"manifest {report.manifest_hash}")
            return 0
        if args.command == "cache-gc":
            cache_dir = _cache_dir_from(args)
            if cache_dir is None:
                raise ValidationError("cache-gc needs --cache-dir or MSL_CACHE_DIR")
            rep = blockcache.cache_gc(cache_dir, _num(args.max_bytes))
            print(f"evicted {len(rep.evicted)} blocks, "
                  f"{rep.bytes_before} -> {rep.bytes_after} bytes")
            return 0
        params = {}
        for name in _SUBCOMMAND_FLAGS[args.command]:
            val = getattr(args, name.replace("-", "_"), None)
            if val is not None:
                params[name] = val
        ctx = manifest_mod.RunContext(cache_dir=_cache_dir_from(args),
                                      output_dir=Path(args.output_dir),
                                      seed=args.seed)
        run_step(args.command, params, ctx)
        for out in ctx.outputs:
            print(out)
        return 0
    except ValidationError as exc:
        print(f"msl: validation error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"msl: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (CacheError, OSError) as exc:
        print(f"msl: io error: {exc}", file=sys.stderr)
        return 4
    except MslError as exc:
        print(f"msl: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
