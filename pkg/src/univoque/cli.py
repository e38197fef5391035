"""Command-line front end.

Output is JSON on stdout (CSV for tabular commands with ``--format csv``);
diagnostics go to stderr.  Exit codes: 0 success, 2 input error, 3 when a
precision budget runs out.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import re
import sys
from fractions import Fraction
from typing import List, Optional

from . import cantor, expansion, freqsets, solver
from .config import ConfigError, Settings, load_config
from .reals import CertifiedReal, PrecisionExhausted, to_fraction, widen
from .symbolic import parse_seq

log = logging.getLogger("univoque")


class InputError(ValueError):
    pass


# -- value parsing and rendering ------------------------------------------------

def parse_rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def parse_base(text: str, M: int, settings: Settings) -> CertifiedReal:
    """A rational, or one of the named constants phi, qG, qG(M), kl."""
    t = text.strip()
    if t == "phi":
        return expansion.q_G(1)
    m = re.fullmatch(r"qG(?:\((\d+)\))?", t)
    if m:
        return expansion.q_G(int(m.group(1)) if m.group(1) else M)
    if t == "kl":
        return solver.komornik_loreti(Fraction(1, 1 << settings.tol_bits))
    return CertifiedReal.exact(parse_rational(t))


def num(r, digits: int = 15) -> dict:
    if not isinstance(r, CertifiedReal):
        r = CertifiedReal.exact(to_fraction(r))
    return {"lo": str(r.lo), "hi": str(r.hi), "decimal": r.decimal(digits)}


def float_pair(lo: float, hi: float) -> dict:
    return {"lo": repr(lo), "hi": repr(hi), "decimal": f"{(lo + hi) / 2:.15g}"}


def newhouse(tau: CertifiedReal) -> dict:
    # the bound is increasing in tau
    return float_pair(*widen(cantor.newhouse_dim_bound(tau.lo), cantor.newhouse_dim_bound(tau.hi)))


def emit(obj, fmt: str, out) -> None:
    if fmt == "csv" and isinstance(obj, dict) and "rows" in obj:
        rows = obj["rows"]
        w = csv.writer(out, lineterminator="\n")
        if rows:
            w.writerow(rows[0].keys())
            for row in rows:
                w.writerow(_flat(v) for v in row.values())
        return
    json.dump(obj, out, indent=2)
    out.write("\n")


def _flat(v):
    if isinstance(v, dict) and "decimal" in v:
        return v["decimal"]
    return v


# -- subcommands ----------------------------------------------------------------

def cmd_expand(a, s: Settings):
    q = parse_base(a.q, a.M, s)
    fn = {"greedy": expansion.greedy_expand, "quasi": expansion.quasi_greedy_expand,
          "lazy": expansion.lazy_expand}[a.mode]
    p = fn(parse_rational(a.x), q, a.depth, a.M, max_bits=s.max_bits)
    seq = p.as_periodic()
    return {"mode": a.mode, "digits": str(p.digits), "tail": num(CertifiedReal(p.tail_lo, p.tail_hi)),
            "periodic": str(seq) if seq is not None else None}


def cmd_solve_base(a, s: Settings):
    seq = parse_seq(a.seq, a.M)
    tol = parse_rational(a.tol) if a.tol else Fraction(1, 1 << s.tol_bits)
    q = solver.solve_base(seq, parse_rational(a.x), tol=tol, max_bits=s.max_bits)
    return {"seq": str(seq), "x": a.x, "q": num(q)}


def cmd_qg(a, s: Settings):
    return {"M": a.M, "q_G": num(expansion.q_G(a.M).refined(s.tol_bits))}


def cmd_kl(a, s: Settings):
    return {"q_KL": num(solver.komornik_loreti(parse_rational(a.tol)))}


def cmd_univoque(a, s: Settings):
    q = parse_base(a.q, a.M, s)
    res = expansion.is_univoque_point(parse_rational(a.x), q, a.depth, a.M, max_bits=s.max_bits)
    return {"x": a.x, "q": num(q), "depth": a.depth, "result": res.value}


def _cover(a, s: Settings, x=None):
    return cantor.build_cover(parse_rational(x or a.x), a.j, a.level, a.M, N=a.N,
                              threads=s.threads, cap=s.enum_cap)


def cmd_cover(a, s: Settings):
    c = _cover(a, s)
    out = {"x": a.x, "M": a.M, "N": c.setup.N, "level": c.level,
           "intervals": [[num(iv.lo), num(iv.hi), str(iv.word)] for iv in c.intervals],
           "gaps": [[num(g.lo), num(g.hi), str(g.left.word), g.level] for g in c.gaps]}
    if c.gaps:
        ts = cantor.thickness_star(c)
        out["thickness_star"] = num(ts)
        out["newhouse_bound"] = newhouse(ts)
    return out


def cmd_thickness(a, s: Settings):
    c = _cover(a, s)
    ts = cantor.thickness_star(c)
    return {"x": a.x, "N": c.setup.N, "level": c.level, "thickness_star": num(ts),
            "thickness_ordered": num(cantor.thickness_ordered(c.intervals)),
            "newhouse_bound": newhouse(ts)}


def cmd_hulls(a, s: Settings):
    h = cantor.build_hulls(parse_rational(a.x), a.jmin, a.jmax, a.M)
    rows = []
    for e, c in zip(h.entries, h.checks):
        rows.append({"j": e.j, "alpha": num(e.alpha), "beta": num(e.beta), "ordered": c.ordered,
                     "upper": c.upper, "lower1": c.lower1, "lower2": c.lower2, "ratio": num(c.ratio)})
    return {"x": a.x, "M": a.M, "rows": rows, "ratio_increasing": h.ratio_increasing}


def _dim_rows(kind: str, x: Fraction, M: int, jmin: int, jmax: int):
    rows = []
    for j in range(jmin, jmax + 1):
        if kind == "sn":
            N = freqsets.sn_run_bound(j, M)
            g = freqsets.gamma_j(x, M, N)
            d = freqsets.dim_lower_SN(M, N, g)
        else:
            N = cantor.setup_for(x, j, M).N
            g = freqsets.gamma_j(x, M, N)
            d = freqsets.dim_lower_Ir(M, N, g)
        rows.append({"j": j, "N": N, "gamma": num(g), "symbolic": float_pair(*widen(d.symbolic_value, d.symbolic_value)),
                     "bound": float_pair(d.lo, d.hi)})
    return rows


def cmd_dim(a, s: Settings):
    return {"kind": a.kind, "x": a.x, "M": a.M,
            "rows": _dim_rows(a.kind, parse_rational(a.x), a.M, a.jmin, a.jmax)}


def cmd_freq(a, s: Settings):
    x = parse_rational(a.x)
    seed = a.seed if a.seed is not None else s.seed
    if a.action == "dim":
        return {"kind": a.kind, "x": a.x, "M": a.M, "rows": _dim_rows(a.kind, x, a.M, a.jmin, a.jmax)}
    if a.kind == "sn":
        w = freqsets.sample_simply_normal(x, a.j, a.depth, seed, a.M, N=a.N)
        prefix_len = cantor.setup_for(x, None, a.M, a.N or freqsets.sn_run_bound(a.j, a.M)).prefix_len
        word = w
    else:
        blocks = 1
        sample = freqsets.sample_irregular(x, a.j, blocks, seed, a.M, N=a.N)
        while len(sample.word) < a.depth:
            blocks += 1
            sample = freqsets.sample_irregular(x, a.j, blocks, seed, a.M, N=a.N)
        word, prefix_len = sample.word, sample.prefix_len
    tail = word.digits[prefix_len:]
    return {"kind": a.kind, "seed": seed, "length": len(word), "prefix_len": prefix_len,
            "word": str(word), "ratios": [str(r) for r in freqsets.digit_ratios(tail, a.M)]}


def cmd_intersect(a, s: Settings):
    xs = [parse_rational(t) for t in a.xs.split(",")]
    covers = [_cover(a, s, str(x)) for x in xs]
    pieces = [(iv.lo, iv.hi, (iv.word,)) for iv in covers[0].intervals]
    for c in covers[1:]:
        cur = [cantor.BasicInterval(w, lo, hi, c.level) for lo, hi, w in pieces]
        pieces = [(o.lo, o.hi, o.words) for o in cantor.intersect_covers(cur, c)]
    return {"xs": a.xs, "M": a.M, "level": a.level,
            "intervals": [[num(lo), num(hi)] for lo, hi, _ in pieces]}


def cmd_sumcheck(a, s: Settings):
    c1 = _cover(a, s, a.x1)
    c2 = _cover(a, s, a.x2)
    r = cantor.sum_image_check(c1, c2, parse_rational(a.lam), parse_rational(a.resolution))
    return {"thickness_star": [num(cantor.thickness_star(c1)), num(cantor.thickness_star(c2))],
            "hull": [num(r.hull[0]), num(r.hull[1])],
            "covered": [num(r.covered[0]), num(r.covered[1])],
            "holes": [[num(lo), num(hi)] for lo, hi in r.holes]}


def cmd_plotdata(a, s: Settings):
    c = _cover(a, s)
    lines = []
    for k, lv in enumerate(c.levels):
        lines.append(f"# level {k}")
        lines.extend(f"{float(iv.lo.mid):.17g} {float(iv.hi.mid):.17g}" for iv in lv)
        lines.append("")
    return "\n".join(lines)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="univoque", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="TOML settings file")
    p.add_argument("--max-bits", type=int, help="precision budget in bits")
    p.add_argument("--threads", type=int, help="worker threads for cover construction")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        return sp

    def cover_args(sp, x=True):
        if x:
            sp.add_argument("--x", required=True)
        sp.add_argument("--M", type=int, default=1)
        sp.add_argument("--j", type=int, default=None)
        sp.add_argument("--N", type=int, default=None, help="run bound (default m + j)")
        sp.add_argument("--level", type=int, default=2)

    sp = add("expand", cmd_expand, help="digits of x in base q")
    sp.add_argument("--x", required=True)
    sp.add_argument("--q", required=True, help="rational p/q or phi, qG, qG(M), kl")
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--mode", choices=("greedy", "quasi", "lazy"), default="greedy")
    sp.add_argument("--depth", type=int, default=32)

    sp = add("solve-base", cmd_solve_base, help="base q with (seq)_q = x")
    sp.add_argument("--seq", required=True, help='sequence as "pre(period)"')
    sp.add_argument("--x", default="1")
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--tol", default=None)

    sp = add("qg", cmd_qg, help="generalized golden ratio")
    sp.add_argument("--M", type=int, default=1)

    sp = add("kl", cmd_kl, help="Komornik-Loreti constant")
    sp.add_argument("--tol", default="1e-10")

    sp = add("univoque", cmd_univoque, help="is x univoque in base q")
    sp.add_argument("--x", required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--depth", type=int, default=64)

    cover_args(add("cover", cmd_cover, help="basic intervals and gaps"))
    cover_args(add("thickness", cmd_thickness, help="thickness estimates of a cover"))
    cover_args(add("plotdata", cmd_plotdata, help="two-column interval data per level"))

    sp = add("hulls", cmd_hulls, help="hull sequence [alpha_j, beta_j]")
    sp.add_argument("--x", required=True)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--jmin", type=int, default=2)
    sp.add_argument("--jmax", type=int, default=5)

    sp = add("dim", cmd_dim, help="dimension lower bounds per j")
    sp.add_argument("--kind", choices=("sn", "ir"), required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--jmin", type=int, default=1)
    sp.add_argument("--jmax", type=int, default=5)

    sp = add("freq", cmd_freq, help="frequency-set sampling and bounds")
    sp.add_argument("action", choices=("sample", "dim"))
    sp.add_argument("--kind", choices=("sn", "ir"), required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--j", type=int, default=2)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--depth", type=int, default=256)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--jmin", type=int, default=1)
    sp.add_argument("--jmax", type=int, default=5)

    sp = add("intersect", cmd_intersect, help="intersect covers of several x")
    sp.add_argument("--xs", required=True, help="comma separated rationals")
    cover_args(sp, x=False)

    sp = add("sumcheck", cmd_sumcheck, help="look for an interval in I + lam J")
    sp.add_argument("--x1", required=True)
    sp.add_argument("--x2", required=True)
    sp.add_argument("--lam", default="1")
    sp.add_argument("--resolution", default="1/10000")
    cover_args(sp, x=False)
    return p


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, stream=sys.stderr)
    try:
        settings = load_config(a.config).override(max_bits=a.max_bits, threads=a.threads)
        result = a.fn(a, settings)
    except PrecisionExhausted as exc:
        print(f"error: precision exhausted: {exc}", file=sys.stderr)
        return 3
    except (InputError, ConfigError, ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, str):
        out.write(result + "\n")
    else:
        emit(result, a.format, out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
