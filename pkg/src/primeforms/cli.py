"""Command-line surface: census runs, verification suite, discrepancy and
L-value sweeps, constant reports, and the convergence sweep toward the
X^{3/2}/log X main term. All output is CSV (UTF-8, LF) plus a binary census
cache; identical configurations produce byte-identical files regardless of
worker count.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 cross-method census mismatch, 4 corrupt cache.
"""

import argparse
import csv
import math
import multiprocessing
import os
import struct
import sys
import zlib
from dataclasses import dataclass

from . import arith, asymptotics, congruence, forms, lfunc
from .arith import factorize, kronecker
from .congruence import QuadraticPoly
from .forms import CensusTable

CACHE_MAGIC = b"BQFC"
CACHE_VERSION = 1


class CacheError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    X: int = 0
    method: str = "enumerate"
    workers: int = 1
    cache_path: str = None
    output: str = None
    poly: tuple = (1, 1, 17)
    x_list: tuple = ()
    x_max: int = 0
    d: int = 0
    terms: int = 10000
    only: tuple = ()

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


# ---------------------------------------------------------------------------
# Cache file


def write_cache(path, X, rows):
    """rows: iterable of (p, H), ascending in p."""
    parts = [CACHE_MAGIC, struct.pack("<HQ", CACHE_VERSION, X)]
    for p, H in rows:
        parts.append(struct.pack("<QLL", p, H, 0))
    payload = b"".join(parts)
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(struct.pack("<L", zlib.crc32(payload)))


def read_cache(path):
    """-> (X_covered, list of (p, H)); raises CacheError on any corruption."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 18 or (len(data) - 18) % 16 != 0:
        raise CacheError("truncated cache file")
    payload, crc = data[:-4], struct.unpack("<L", data[-4:])[0]
    if zlib.crc32(payload) != crc:
        raise CacheError("checksum mismatch")
    if payload[:4] != CACHE_MAGIC:
        raise CacheError("bad magic")
    version, X = struct.unpack("<HQ", payload[4:14])
    if version != CACHE_VERSION:
        raise CacheError(f"unsupported version {version}")
    rows = []
    for off in range(14, len(payload), 16):
        p, H, _ = struct.unpack("<QLL", payload[off : off + 16])
        rows.append((p, H))
    if any(rows[i][0] >= rows[i + 1][0] for i in range(len(rows) - 1)):
        raise CacheError("records not sorted by p")
    if rows and rows[-1][0] > X:
        raise CacheError("record exceeds covered X")
    return X, rows


# ---------------------------------------------------------------------------
# Parallel census driver

_CENSUS_FUNCS = {
    "enumerate": forms.census_enumeration,
    "divisor": congruence.census_divisor,
    "classnumber": lfunc.census_classnumber,
}


def _census_block(task):
    method, X, lo, hi = task
    return _CENSUS_FUNCS[method](X, lo, hi)


def run_census(method, X, workers=1):
    """One census over p <= X, split into contiguous prime blocks."""
    if workers == 1 or X < 100:
        return _CENSUS_FUNCS[method](X)
    bounds = [2 + (X - 1) * i // workers for i in range(workers + 1)]
    tasks = [
        (method, X, bounds[i] + (1 if i else 0), bounds[i + 1])
        for i in range(workers)
    ]
    with multiprocessing.Pool(workers) as pool:
        parts = pool.map(_census_block, tasks)
    rows = []
    for part in parts:
        rows.extend(part.rows)
    return CensusTable(tuple(rows))


# ---------------------------------------------------------------------------
# CSV helpers


def _open_output(cfg):
    path = cfg.output
    if path is None:
        return sys.stdout, False
    outdir = os.environ.get("PRIMEFORMS_OUTPUT_DIR")
    if outdir and not os.path.isabs(path):
        path = os.path.join(outdir, path)
    return open(path, "w", newline="", encoding="utf-8"), True


def _fmt(x):
    return repr(float(x))


def _breakdown_str(breakdown):
    return "|".join(f"{d}:{h}" for d, h in breakdown)


class _MainTermTracker:
    """Incrementally evaluates mt_simple and mt_integral at increasing X."""

    def __init__(self):
        self.artin = asymptotics.artin_constant(1e-6).mid
        self.x = 2.0
        self.integral = 0.0

    def at(self, X):
        if X > self.x:
            seg, _ = asymptotics._adaptive_simpson(
                lambda t: math.sqrt(t) / math.log(t), self.x, float(X), 1e-10 * X
            )
            self.integral += seg
            self.x = float(X)
        mt_simple = self.artin * (2.0 * math.pi / 9.0) * X**1.5 / math.log(X)
        mt_integral = self.artin * (math.pi / 3.0) * self.integral
        return mt_simple, mt_integral


def _write_count_csv(fh, table):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(
        ["p", "H", "h_primitive", "content_breakdown", "running_total",
         "ratio_simple", "ratio_integral"]
    )
    tracker = _MainTermTracker()
    running = 0
    for row in table.rows:
        running += row.H
        h1 = dict(row.breakdown).get(1, 0)
        mt_s, mt_i = tracker.at(row.p)
        w.writerow([
            row.p, row.H, h1, _breakdown_str(row.breakdown), running,
            _fmt(running / mt_s) if mt_s > 0 else "",
            _fmt(running / mt_i) if mt_i > 0 else "",
        ])


# ---------------------------------------------------------------------------
# Subcommands


def run_count(cfg):
    methods = (
        ["enumerate", "divisor", "classnumber"]
        if cfg.method == "all"
        else [cfg.method]
    )
    tables = {m: run_census(m, cfg.X, cfg.workers) for m in methods}
    if len(tables) > 1:
        ref_name = methods[0]
        ref = tables[ref_name]
        for m in methods[1:]:
            other = tables[m]
            if other.rows != ref.rows:
                for r1, r2 in zip(ref.rows, other.rows):
                    if r1 != r2:
                        print(
                            f"census mismatch at p={r1.p}: "
                            f"{ref_name} gives {r1}, {m} gives {r2}",
                            file=sys.stderr,
                        )
                        return 3
                print(
                    f"census mismatch: row counts differ between "
                    f"{ref_name} and {m}",
                    file=sys.stderr,
                )
                return 3
    table = tables[methods[0]]
    fh, close = _open_output(cfg)
    try:
        _write_count_csv(fh, table)
    finally:
        if close:
            fh.close()
    if cfg.cache_path:
        write_cache(cfg.cache_path, cfg.X, [(r.p, r.H) for r in table.rows])
    return 0


def run_sweep(cfg):
    if cfg.x_max < 10**3:
        print("sweep requires --x-max >= 1000", file=sys.stderr)
        return 2
    checkpoints = []
    i = 0
    while True:
        x = round(10 ** (3 + i / 2))
        if x > cfg.x_max:
            break
        checkpoints.append(x)
        i += 1
    rows = None
    if cfg.cache_path and os.path.exists(cfg.cache_path):
        try:
            covered, cached = read_cache(cfg.cache_path)
        except CacheError as exc:
            print(f"corrupt cache {cfg.cache_path}: {exc}", file=sys.stderr)
            return 4
        if covered >= checkpoints[-1]:
            rows = [(p, H) for p, H in cached if p <= checkpoints[-1]]
    if rows is None:
        table = run_census("enumerate", checkpoints[-1], cfg.workers)
        rows = [(r.p, r.H) for r in table.rows]
        if cfg.cache_path:
            write_cache(cfg.cache_path, checkpoints[-1], rows)
    fh, close = _open_output(cfg)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["X", "Q", "mt_simple", "mt_integral",
                    "ratio_simple", "ratio_integral"])
        tracker = _MainTermTracker()
        idx = 0
        running = 0
        for x in checkpoints:
            while idx < len(rows) and rows[idx][0] <= x:
                running += rows[idx][1]
                idx += 1
            mt_s, mt_i = tracker.at(x)
            w.writerow([x, running, _fmt(mt_s), _fmt(mt_i),
                        _fmt(running / mt_s), _fmt(running / mt_i)])
    finally:
        if close:
            fh.close()
    return 0


def run_discrepancy(cfg):
    try:
        f = QuadraticPoly(*cfg.poly)
    except ValueError as exc:
        print(f"bad polynomial: {exc}", file=sys.stderr)
        return 2
    xs = sorted(cfg.x_list)
    if not xs:
        print("need at least one X", file=sys.stderr)
        return 2
    ns, vs = congruence.root_multiset(f, xs[-1])
    results = []
    for x in xs:
        rep = congruence.discrepancy_exact(f, x, _points=(ns, vs))
        bound = x ** (8.0 / 9.0) * math.log(x) ** 3 if x > 1 else 1.0
        results.append((x, rep.sup_discrepancy, rep.sup_discrepancy / bound))
    fh, close = _open_output(cfg)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["X", "discrepancy", "bound_ratio"])
        for x, dv, ratio in results:
            w.writerow([x, _fmt(dv), _fmt(ratio)])
    finally:
        if close:
            fh.close()
    if len(xs) >= 2:
        logs_x = [math.log(x) for x, _, _ in results]
        logs_d = [math.log(dv) for _, dv, _ in results]
        n = len(logs_x)
        mx = sum(logs_x) / n
        my = sum(logs_d) / n
        slope = sum((a - mx) * (b - my) for a, b in zip(logs_x, logs_d)) / sum(
            (a - mx) ** 2 for a in logs_x
        )
        print(f"fitted log-log slope: {slope:.4f}")
    return 0


def run_lsum(cfg):
    rows = lfunc.l_table(cfg.X)
    if cfg.d:
        rows = [r for r in rows if r.d == cfg.d]
    fh, close = _open_output(cfg)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "d", "disc", "L_value", "L_radius", "terms", "h"])
        for r in rows:
            w.writerow([r.p, r.d, r.disc, _fmt(r.enclosure.value),
                        _fmt(r.enclosure.tail_radius), r.enclosure.terms_used,
                        r.h])
    finally:
        if close:
            fh.close()
    return 0


def run_constants(cfg):
    report = asymptotics.constant_suite(strict=False)
    fh, close = _open_output(cfg)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "gap", "tolerance", "passed"])
        for c in report.checks:
            w.writerow([c.name, _fmt(c.gap), _fmt(c.tolerance), c.passed])
        w.writerow(["artin_lo", _fmt(report.artin.lo), "", ""])
        w.writerow(["artin_hi", _fmt(report.artin.hi), "", ""])
        w.writerow(["mu_phi_sum", _fmt(report.mu_phi_sum), _fmt(report.mu_phi_tail), ""])
        w.writerow(["c_sum", _fmt(report.c_sum), _fmt(report.c_tail), ""])
    finally:
        if close:
            fh.close()
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name} (gap {c.gap:.3e}, tol {c.tolerance:.3e})")
    return 0 if report.all_passed else 1


# ---------------------------------------------------------------------------
# Verification suite


def _verify_kronecker():
    for p in [int(q) for q in arith.primes_upto(200)][1:]:
        squares = {x * x % p for x in range(1, p)}
        for D in range(-60, 61):
            want = 0 if D % p == 0 else (1 if D % p in squares else -1)
            if kronecker(D, p) != want:
                return False, f"kronecker({D},{p}) != brute force {want}"
    for D in range(-30, 31):
        for m in range(1, 40):
            for n in range(1, 40):
                if kronecker(D, m * n) != kronecker(D, m) * kronecker(D, n):
                    return False, f"multiplicativity fails at D={D},m={m},n={n}"
    return True, "brute-force residues and multiplicativity"


def _verify_divisor_identity():
    primes = [int(p) for p in arith.primes_upto(50)]
    for a in range(1, 501, 2):
        fa = factorize(a)
        if any(e > 1 for _, e in fa.factors):
            continue
        for p in primes:
            f = QuadraticPoly(1, 1, p)
            want = len(congruence.roots_mod_n(f, a).roots)
            got = congruence.count_roots_jacobi(a, 1 - 4 * p)
            if got != want:
                return False, f"a={a}, p={p}: jacobi {got} != roots {want}"
    return True, "odd squarefree a <= 500, p <= 50"


def _verify_content_decomposition():
    for p in [int(q) for q in arith.primes_upto(500)]:
        D = 1 - 4 * p
        cc = forms.class_numbers(D)
        total = 0
        d = 1
        while d * d <= -D:
            if D % (d * d) == 0 and (D // (d * d)) % 4 in (0, 1):
                total += forms.class_numbers(D // (d * d)).h
            d += 1
        if cc.H != total:
            return False, f"H({D}) = {cc.H} != sum of h = {total}"
    return True, "H(1-4p) = sum_d h((1-4p)/d^2) for p <= 500"


def _verify_h_formula():
    D = -7
    while D >= -4000:
        if D % 4 in (0, 1):
            want = forms.class_numbers(D).h
            got = lfunc.h_from_formula(D)
            if got != want:
                return False, f"h_from_formula({D}) = {got} != {want}"
        D -= 1
    return True, "formula equals enumeration for -4000 <= D <= -7"


def _verify_census_crosscheck():
    x = 2000
    t1 = forms.census_enumeration(x)
    t2 = congruence.census_divisor(x)
    t3 = lfunc.census_classnumber(x)
    if t1.rows != t2.rows:
        return False, "enumeration != divisor at X=2000"
    if t1.rows != t3.rows:
        return False, "enumeration != classnumber at X=2000"
    return True, f"three-way equality at X={x} (Q = {t1.total})"


def _verify_constants():
    try:
        asymptotics.constant_suite()
    except asymptotics.ConstantIdentityError as exc:
        return False, str(exc)
    return True, "all constant identities within tolerance"


def _verify_a_coeff():
    try:
        for d in (1, 3, 5, 9, 15):
            for n in range(1, 61):
                lfunc.a_coeff(n, d)
    except ArithmeticError as exc:
        return False, str(exc)
    return True, "dual computation agrees for n <= 60, d in {1,3,5,9,15}"


_VERIFY_ITEMS = [
    ("kronecker", _verify_kronecker),
    ("divisor_identity", _verify_divisor_identity),
    ("content_decomposition", _verify_content_decomposition),
    ("h_formula", _verify_h_formula),
    ("census_crosscheck", _verify_census_crosscheck),
    ("constants", _verify_constants),
    ("a_coeff_dual", _verify_a_coeff),
]


def run_verify(cfg):
    lines = []
    failed = False
    for name, func in _VERIFY_ITEMS:
        if cfg.only and name not in cfg.only:
            continue
        try:
            ok, detail = func()
        except Exception as exc:  # noqa: BLE001 - report, do not crash
            ok, detail = False, f"exception: {exc}"
        status = "PASS" if ok else "FAIL"
        line = f"{status} {name}: {detail}"
        lines.append(line)
        print(line)
        failed = failed or not ok
    if cfg.output:
        fh, close = _open_output(cfg)
        try:
            fh.write("\n".join(lines) + "\n")
        finally:
            if close:
                fh.close()
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# Argument handling


def _read_config_file(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="primeforms",
        description="Census of definite binary quadratic form classes at "
        "prime-indexed discriminants 1-4p, with asymptotic verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", "-o", default=None)
        sp.add_argument("--config", default=None)

    sp = sub.add_parser("count", help="per-prime census CSV")
    sp.add_argument("--x", type=float, default=None)
    sp.add_argument("--method", choices=["enumerate", "divisor", "classnumber", "all"],
                    default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--cache", default=None)
    common(sp)

    sp = sub.add_parser("verify", help="run the invariant suite")
    sp.add_argument("--only", default=None,
                    help="comma-separated item names")
    common(sp)

    sp = sub.add_parser("discrepancy", help="exact root discrepancy sweep")
    sp.add_argument("--poly", default=None, help="A,B,C")
    sp.add_argument("--x", default=None, help="comma-separated X values")
    common(sp)

    sp = sub.add_parser("lsum", help="L-value table CSV")
    sp.add_argument("--x", type=float, default=None)
    sp.add_argument("--d", type=int, default=None)
    common(sp)

    sp = sub.add_parser("constants", help="constant identity report")
    common(sp)

    sp = sub.add_parser("sweep", help="convergence checkpoints to x-max")
    sp.add_argument("--x-max", type=float, default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--cache", default=None)
    common(sp)
    return parser


def _pick(args, conf, key, default, convert=None):
    val = getattr(args, key.replace("-", "_"), None)
    if val is None:
        val = conf.get(key, default)
        if convert and isinstance(val, str):
            val = convert(val)
    return val


def _config_from_args(args):
    conf = {}
    if getattr(args, "config", None):
        conf = _read_config_file(args.config)
    cfg = RunConfig(command=args.command)
    cfg.output = _pick(args, conf, "output", None)
    if args.command in ("count", "lsum"):
        x = _pick(args, conf, "x", 10**5, float)
        cfg.X = int(float(x))
        if cfg.X < 1:
            raise ValueError("X must be >= 1")
    if args.command == "count":
        cfg.method = _pick(args, conf, "method", "enumerate")
        cfg.workers = int(_pick(args, conf, "workers", 1, int))
        cfg.cache_path = _pick(args, conf, "cache", None)
    if args.command == "lsum":
        cfg.d = int(_pick(args, conf, "d", 0, int) or 0)
    if args.command == "verify":
        only = _pick(args, conf, "only", None)
        cfg.only = tuple(s.strip() for s in only.split(",")) if only else ()
    if args.command == "discrepancy":
        poly = _pick(args, conf, "poly", "1,1,17")
        cfg.poly = tuple(int(v) for v in str(poly).split(","))
        if len(cfg.poly) != 3:
            raise ValueError("--poly needs A,B,C")
        xs = _pick(args, conf, "x", "1000,10000,100000")
        cfg.x_list = tuple(int(float(v)) for v in str(xs).split(","))
    if args.command == "sweep":
        cfg.x_max = int(float(_pick(args, conf, "x-max", 10**6, float)
                              if getattr(args, "x_max", None) is None
                              else args.x_max))
        cfg.workers = int(_pick(args, conf, "workers", 1, int))
        cfg.cache_path = _pick(args, conf, "cache", None)
    return cfg


_COMMANDS = {
    "count": run_count,
    "verify": run_verify,
    "discrepancy": run_discrepancy,
    "lsum": run_lsum,
    "constants": run_constants,
    "sweep": run_sweep,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        cfg = _config_from_args(args)
    except (ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return _COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
