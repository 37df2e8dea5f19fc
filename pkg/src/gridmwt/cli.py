"""Command-line front end."""
from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .driver import CHECKS, DEFAULT_CHECKS, RunConfig, RunResult, run, trials
from .errors import DegenerateInputError, InputFormatError, MwtError, OracleScaleError
from .geom import INF, PointSet, convex_hull, power_sum_float, squared_distance

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_SCALE = 0, 1, 2, 3


def _parse_number(tok: str, line: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise InputFormatError(f"cannot parse coordinate {tok!r}", line) from None


def parse_points(src) -> PointSet:
    """Read points from a path, an open text file or a string of file contents.

    One point per line, two coordinates each (decimal or p/q); blank lines and
    lines starting with '#' are skipped.
    """
    if isinstance(src, (str, Path)) and Path(src).exists():
        text = Path(src).read_text(encoding="utf-8")
    elif hasattr(src, "read"):
        text = src.read()
    else:
        text = str(src)
    pts = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise InputFormatError(f"expected 2 coordinates, found {len(toks)}", no)
        pts.append((_parse_number(toks[0], no), _parse_number(toks[1], no)))
    return PointSet(pts)


def _sig(x: float) -> float:
    return float(f"{x:.12g}")


def _q_text(q) -> str:
    return "inf" if q == INF else str(int(q))


def _edges_text(n: int, h: int, edges, extra: str = "") -> str:
    lines = [f"# n={n} h={h} m={len(edges)}"]
    if extra:
        lines.append(extra)
    lines += [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def result_dict(result: RunResult) -> dict:
    return {
        "n": len(result.points),
        "h": result.h,
        "m": len(result.edges),
        "gamma": str(result.gamma),
        "q": _q_text(result.q),
        "improved": result.improved,
        "top_level": result.levels,
        "edges": [list(e) for e in result.edges],
        "weights": {
            "w": _sig(result.cost.w),
            "wq": _sig(result.cost.wq),
            "alpha": None if result.cost.alpha is None else _sig(result.cost.alpha),
        },
        "levels": [
            {
                "level": r.level,
                "level_edges": r.level_edges,
                "before": r.before,
                "phase1_edges": len(r.phase1_edges),
                "after_phase1": r.after_phase1,
                "accepted": r.accepted,
                "rejected": r.rejected,
                "after_phase2": r.after_phase2,
            }
            for r in result.records
        ],
        "checks": [
            {"name": c.name, "level": c.level, "passed": c.passed, "detail": c.detail}
            for c in result.checks
        ],
        "timing": {k: _sig(v) for k, v in result.timing.items()},
    }


def _svg(result: RunResult) -> str:
    pts = [(float(p[0]), float(p[1])) for p in result.points]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    pad = span * 0.05
    x0, y0 = min(xs) - pad, min(ys) - pad
    w = max(xs) - min(xs) + 2 * pad
    hgt = max(ys) - min(ys) + 2 * pad
    r = span * 0.008
    sw = span * 0.003

    def tx(p):
        # flip y so the picture matches the usual axis orientation
        return f"{p[0] - x0:.6f}", f"{y0 + hgt - p[1]:.6f}"

    hull = convex_hull(result.points)
    hull_edges = {tuple(sorted((hull[i], hull[(i + 1) % len(hull)]))) for i in range(len(hull))}
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.6f} {hgt:.6f}">\n')
    out.write('<g stroke="#4a6fa5" fill="none">\n')
    for u, v in result.edges:
        if (u, v) in hull_edges:
            continue
        (a, b), (c, d) = tx(pts[u]), tx(pts[v])
        out.write(f'<line x1="{a}" y1="{b}" x2="{c}" y2="{d}" stroke-width="{sw:.6f}"/>\n')
    out.write("</g>\n")
    out.write('<g stroke="#c0392b" fill="none">\n')
    for u, v in sorted(hull_edges):
        (a, b), (c, d) = tx(pts[u]), tx(pts[v])
        out.write(f'<line x1="{a}" y1="{b}" x2="{c}" y2="{d}" stroke-width="{2 * sw:.6f}"/>\n')
    out.write("</g>\n")
    out.write('<g fill="#222222">\n')
    for p in pts:
        a, b = tx(p)
        out.write(f'<circle cx="{a}" cy="{b}" r="{r:.6f}"/>\n')
    out.write("</g>\n</svg>\n")
    return out.getvalue()


def emit(result: RunResult, fmt: str = "edges") -> bytes:
    if fmt == "edges":
        return _edges_text(len(result.points), result.h, result.edges).encode()
    if fmt == "json":
        return (json.dumps(result_dict(result), indent=2, sort_keys=True) + "\n").encode()
    if fmt == "svg":
        return _svg(result).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _q_arg(text: str):
    if text.lower() in ("inf", "infinity"):
        return INF
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"q must be a positive integer or 'inf', got {text!r}")
    if q < 1:
        raise argparse.ArgumentTypeError("q must be at least 1")
    return q


def _gamma_arg(text: str) -> Fraction:
    try:
        g = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse gamma {text!r}")
    if not (Fraction(1, 3) < g < 1):
        raise argparse.ArgumentTypeError("gamma must lie strictly between 1/3 and 1")
    return g


def _checks_arg(text: str) -> frozenset:
    items = {t.strip() for t in text.split(",") if t.strip()}
    if "all" in items:
        return CHECKS
    unknown = items - CHECKS
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown checks: {', '.join(sorted(unknown))}")
    return frozenset(items)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gridmwt", description="Grid-based approximate MWT.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="point file")
        p.add_argument("--q", type=_q_arg, default=1, help="cost exponent (integer or inf)")

    t = sub.add_parser("triangulate", help="run the algorithm once")
    common(t)
    g = t.add_mutually_exclusive_group()
    g.add_argument("--gamma", type=_gamma_arg, help="explicit grid scale in (1/3, 1)")
    g.add_argument("--seed", type=int, default=0, help="seed for the grid scale")
    t.add_argument("--improved", action=argparse.BooleanOptionalAction, default=True)
    t.add_argument("--check", type=_checks_arg, default=DEFAULT_CHECKS,
                   help=f"comma list from {sorted(CHECKS)} or 'all'")
    t.add_argument("--oracle", choices=("exact", "greedy", "none"), default="none")
    t.add_argument("--output", help="write here instead of stdout")
    t.add_argument("--format", choices=("edges", "json", "svg"), default="edges")

    tr = sub.add_parser("trials", help="one run per seed, with ratios")
    common(tr)
    tr.add_argument("--seeds", type=int, required=True, help="use seeds 0 .. N-1")
    tr.add_argument("--improved", action=argparse.BooleanOptionalAction, default=True)
    tr.add_argument("--oracle", choices=("exact", "greedy", "none"), default="exact")

    o = sub.add_parser("oracle", help="exact optimum for small inputs")
    common(o)

    v = sub.add_parser("validate", help="check distinctness and general position")
    v.add_argument("--input", required=True)
    return ap


def _write(data: bytes, path: str | None):
    if path:
        Path(path).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ps = parse_points(Path(args.input))
    except FileNotFoundError:
        print(f"error: no such file {args.input}", file=sys.stderr)
        return EXIT_INPUT
    except (InputFormatError, DegenerateInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if len(ps) < 3 and args.command != "validate":
        print("error: degenerate input: fewer than 3 points", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "validate":
            print(f"ok n={len(ps)}")
            return EXIT_OK
        if args.command == "oracle":
            from .oracle import exact_mwt

            edges, _ = exact_mwt(ps.points, args.q)
            pts = ps.points
            w = power_sum_float([squared_distance(pts[u], pts[v]) for u, v in edges], args.q)
            h = len(convex_hull(pts))
            extra = f"# q={_q_text(args.q)} weight={_sig(w)!r}"
            _write(_edges_text(len(pts), h, edges, extra).encode(), None)
            return EXIT_OK
        if args.command == "trials":
            cfg = RunConfig(q=args.q, improved=args.improved, oracle=args.oracle)
            rep = trials(ps, range(args.seeds), cfg)
            doc = {
                "n": len(ps),
                "q": _q_text(args.q),
                "improved": args.improved,
                "per_seed": [
                    {"seed": s, "gamma": str(g), "alpha": None if a is None else _sig(a),
                     "w": _sig(r.cost.w)}
                    for s, g, a, r in zip(rep.seeds, rep.gammas, rep.alphas, rep.results)
                ],
                "mean_alpha": None if rep.mean_alpha is None else _sig(rep.mean_alpha),
                "max_alpha": None if rep.max_alpha is None else _sig(rep.max_alpha),
            }
            _write((json.dumps(doc, indent=2, sort_keys=True) + "\n").encode(), None)
            ok = all(r.ok for r in rep.results)
            return EXIT_OK if ok else EXIT_CHECK
        cfg = RunConfig(args.gamma, args.seed, args.q, args.improved, args.check, args.oracle)
        result = run(ps, cfg)
        _write(emit(result, args.format), args.output)
        return EXIT_OK if result.ok else EXIT_CHECK
    except OracleScaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except MwtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
