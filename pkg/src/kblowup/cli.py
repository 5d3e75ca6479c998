"""Command-line interface: ``kblowup <command> [flags]``.

Exit codes: 0 success, 1 an asserted identity failed, 2 configuration
error, 3 cache error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .algebra.lamseries import LamSeries
from .algebra.ratfrac import RatFrac, frac_equal
from .blowup import zhat_inst
from .cache import SeriesCache, cache_root
from .errors import CacheCorrupt, KBlowupError, PoleDetected
from .identities import (DIRECTIONS, check_blowup_eq, check_sym, check_vanish_k, check_vanish_t,
                         compare_series, elementary_symmetric, extract_up, f0_tau_derivative, power_sum,
                         solve_recursive)
from .instanton import InsertionSpec, impose_traceless, z_inst
from .wallcross import example_blowup_coeff, example_closed_form

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CACHE = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    identity: str | None = None
    r: int = 1
    l: int = 0
    d: Fraction = Fraction(0)
    k: int = 0
    p: int | None = None
    pair: tuple = ()
    nf: int = 0
    max_order: int = 0
    taus: tuple = ()
    tau_degree: int = 1
    tau_mode: str = "scalar"
    directions: tuple = DIRECTIONS
    cache: str | None = None
    fmt: str = "text"
    threads: int = 1
    extra: dict = field(default_factory=dict)


class ConfigFailure(Exception):
    pass


def _frac_arg(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational number: {s}") from e


def _convention(s: str) -> str:
    key, _, val = s.partition("=")
    if key != "tau" or val not in ("scalar", "adams"):
        raise argparse.ArgumentTypeError("expected tau=scalar or tau=adams")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int, default=1, dest="r")
    common.add_argument("--cs", type=int, default=0, dest="l", help="Chern-Simons level")
    common.add_argument("-d", type=_frac_arg, default=Fraction(0))
    common.add_argument("-k", type=int, default=0)
    common.add_argument("-p", type=int, action="append", default=None,
                        help="Adams index of a tau insertion (repeatable where allowed)")
    common.add_argument("--max-order", type=int, default=0, help="truncation order in Lambda")
    common.add_argument("--tau-degree", type=int, default=1)
    common.add_argument("--format", choices=("text", "machine"), default="text", dest="fmt")
    common.add_argument("--cache", default=None, help="cache directory (overrides $KBLOWUP_CACHE)")
    common.add_argument("--convention", type=_convention, default="tau=scalar", dest="tau_mode")
    common.add_argument("--direction", type=_frac_arg, action="append", default=None,
                        help="direction c of eps2 = c eps1 for eps-limits (repeatable)")
    common.add_argument("--threads", type=int, default=1)

    ap = argparse.ArgumentParser(prog="kblowup", description="K-theoretic instanton partition functions "
                                 "on the plane and its blow-up")
    ap.add_argument("--version", action="version", version=f"kblowup {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("z", parents=[common], help="instanton partition function on the plane")
    sub.add_parser("zhat", parents=[common], help="partition function on the blow-up")
    ck = sub.add_parser("check", parents=[common], help="verify an identity")
    ck.add_argument("identity", choices=("blowup", "vanish-t", "vanish-k", "sym"))
    sv = sub.add_parser("solve", parents=[common], help="rebuild Z recursively from two blow-up equations")
    sv.add_argument("--pair", type=_frac_arg, nargs=2, required=True, metavar=("D1", "D2"))
    sub.add_parser("f0-tau", parents=[common], help="eps1 eps2 dlogZ/dtau_p at eps = 0")
    sub.add_parser("sw-up", parents=[common], help="Seiberg-Witten coefficient U_p")
    wc = sub.add_parser("wallcross-example", parents=[common], help="rank-r, c2 = 1 wall-crossing term")
    wc.add_argument("--nf", type=int, default=0)
    return ap


def config_from_args(ns) -> RunConfig:
    ps = tuple(ns.p or ())
    return RunConfig(
        command=ns.command,
        identity=getattr(ns, "identity", None),
        r=ns.r, l=ns.l, d=ns.d, k=ns.k,
        p=ps[0] if len(ps) == 1 else None,
        pair=tuple(getattr(ns, "pair", None) or ()),
        nf=getattr(ns, "nf", 0),
        max_order=ns.max_order,
        taus=ps,
        tau_degree=ns.tau_degree,
        tau_mode=ns.tau_mode,
        directions=tuple(ns.direction) if ns.direction else DIRECTIONS,
        cache=ns.cache,
        fmt=ns.fmt,
        threads=max(1, ns.threads),
    )


def validate(cfg: RunConfig) -> None:
    if cfg.r < 1:
        raise ConfigFailure("--rank must be at least 1")
    if cfg.max_order < 0:
        raise ConfigFailure("--max-order must be non-negative")
    if cfg.d.denominator != 1 and cfg.command not in ("zhat",):
        raise ConfigFailure("-d must be an integer")
    if any(p == 0 for p in cfg.taus):
        raise ConfigFailure("-p must be nonzero")
    if cfg.tau_degree not in (1, 2):
        raise ConfigFailure("--tau-degree must be 1 or 2")
    needs_p = cfg.command in ("f0-tau", "sw-up") or cfg.identity == "vanish-t"
    if needs_p and cfg.p is None:
        raise ConfigFailure("this command needs exactly one -p")
    if cfg.command == "check" and cfg.identity == "blowup" and not (0 <= cfg.l <= cfg.r and 0 <= cfg.d <= cfg.r):
        raise ConfigFailure("blow-up equation needs 0 <= l <= r and 0 <= d <= r")
    if cfg.command == "solve" and len(cfg.pair) != 2:
        raise ConfigFailure("--pair needs two values")


# ---- output ------------------------------------------------------------------

def _frac_text(fr: RatFrac) -> str:
    den = fr.denominator
    if den == den.const(1, den.nvars):
        return fr.num.to_text()
    return f"({fr.num.to_text()}) / ({den.to_text()})"


def series_lines(series: LamSeries, fmt: str) -> list:
    out = []
    for lam, mono, fr in series.to_records():
        if fmt == "machine":
            out.append("\t".join([str(lam), mono, fr.num.to_text(), fr.denominator.to_text()]))
        else:
            out.append(f"Lambda^{lam}  {mono}:  {_frac_text(fr)}")
    return out


def _cache_key(cfg: RunConfig, kind: str) -> dict:
    key = {"kind": kind, "r": cfg.r, "l": cfg.l, "N": cfg.max_order, "taus": list(cfg.taus),
           "tau_degree": cfg.tau_degree, "version": __version__}
    if kind == "zhat":
        key.update({"k": cfg.k, "d": str(cfg.d), "tau_mode": cfg.tau_mode, "orientation": "dual",
                    "cubic_offset": True})
    return key


def _cached(cfg: RunConfig, kind: str, compute) -> LamSeries:
    root = cache_root(cfg.cache)
    if root is None:
        return compute()
    return SeriesCache(root).get_or_compute(_cache_key(cfg, kind), compute)


def _spec(cfg: RunConfig) -> InsertionSpec:
    return InsertionSpec(l=cfg.l, tau_orders=cfg.taus, degree=cfg.tau_degree)


def _emit_limits(cfg: RunConfig, name: str, values: list, out) -> None:
    for n, v in enumerate(values):
        lam = 2 * cfg.r * n
        if cfg.fmt == "machine":
            print("\t".join([name, str(lam), v.num.to_text(), v.denominator.to_text()]), file=out)
        else:
            print(f"{name} Lambda^{lam}:  {_frac_text(v)}", file=out)


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    validate(cfg)
    w = cfg.threads
    if cfg.command == "z":
        s = _cached(cfg, "z", lambda: z_inst(cfg.r, _spec(cfg), cfg.max_order, workers=w))
        print("\n".join(series_lines(s, cfg.fmt)), file=out)
        return EXIT_OK
    if cfg.command == "zhat":
        s = _cached(cfg, "zhat", lambda: zhat_inst(cfg.r, cfg.l, cfg.k, cfg.d, cfg.max_order, cfg.taus,
                                                   cfg.tau_degree, cfg.tau_mode, workers=w))
        print("\n".join(series_lines(s, cfg.fmt)), file=out)
        return EXIT_OK
    if cfg.command == "check":
        d = int(cfg.d)
        if cfg.identity == "blowup":
            rep = check_blowup_eq(cfg.r, cfg.l, d, cfg.max_order, w)
        elif cfg.identity == "vanish-t":
            rep = check_vanish_t(cfg.r, cfg.l, d, cfg.p, cfg.max_order, w)
        elif cfg.identity == "vanish-k":
            rep = check_vanish_k(cfg.r, cfg.l, d, cfg.k, cfg.max_order, w)
        else:
            rep = check_sym(cfg.r, cfg.l, cfg.max_order, w)
        if cfg.fmt == "machine":
            print(json.dumps(rep.to_record(), sort_keys=True), file=out)
        else:
            print(rep.to_table(), file=out)
        return EXIT_OK if rep.holds else EXIT_FAIL
    if cfg.command == "solve":
        d1, d2 = (int(x) for x in cfg.pair)
        s = solve_recursive(cfg.r, cfg.l, d1, d2, cfg.max_order, w)
        direct = z_inst(cfg.r, InsertionSpec(l=cfg.l), cfg.max_order, workers=w)
        rep = compare_series("solve_recursive", {"r": cfg.r, "l": cfg.l, "d1": d1, "d2": d2,
                                                 "N": cfg.max_order}, s, direct)
        print(json.dumps(rep.to_record(), sort_keys=True) if cfg.fmt == "machine" else rep.to_table(), file=out)
        return EXIT_OK if rep.holds else EXIT_FAIL
    if cfg.command == "f0-tau":
        try:
            vals = f0_tau_derivative(cfg.r, cfg.l, cfg.p, cfg.max_order, w, cfg.directions)
        except (PoleDetected, AssertionError) as e:
            print(f"not regular at eps = 0: {e}", file=out)
            return EXIT_FAIL
        _emit_limits(cfg, f"dF0/dtau[{cfg.p}]", vals, out)
        ok = frac_equal(vals[0], power_sum(cfg.r, cfg.p))
        return EXIT_OK if ok else EXIT_FAIL
    if cfg.command == "sw-up":
        try:
            vals = extract_up(cfg.r, cfg.l, cfg.p, cfg.max_order, w, directions=cfg.directions)
        except (PoleDetected, AssertionError) as e:
            print(f"not regular at eps = 0: {e}", file=out)
            return EXIT_FAIL
        _emit_limits(cfg, f"U[{cfg.p}]", vals, out)
        expect = impose_traceless(RatFrac.from_poly(elementary_symmetric(cfg.r, cfg.p)), cfg.r)
        ok = frac_equal(vals[0], expect * (-1) ** cfg.p)
        return EXIT_OK if ok else EXIT_FAIL
    if cfg.command == "wallcross-example":
        v = example_blowup_coeff(cfg.r, cfg.nf)
        if cfg.fmt == "machine":
            print(f"wallcross-example\t{cfg.r}\t{cfg.nf}\t{v}", file=out)
        else:
            print(v, file=out)
        return EXIT_OK if v == example_closed_form(cfg.r, cfg.nf) else EXIT_FAIL
    raise ConfigFailure(f"unknown command {cfg.command}")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except ConfigFailure as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except CacheCorrupt as e:
        print(f"cache error: {e}", file=sys.stderr)
        return EXIT_CACHE
    except KBlowupError as e:
        print(f"configuration error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
