"""Command line front end: field reports, range scans, family checks.

Exit codes: 0 success; 1 a checked prediction failed; 2 bad usage or
input; 3 internal failure.  Scan output is deterministic: records are
emitted in ascending d and all vector lists are sorted, so reruns and
different worker counts produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .family import (
    DClass,
    HypothesisError,
    InvariantError,
    classify,
    construct_a1_a2,
    construct_a3,
    generate_family,
    predicted_a3_minimum,
    predicted_minimal_set,
)
from .quadfield import FieldDesc, QuadFieldError
from .traceform import ReductionCapError, brute_force_min, min_data
from .units import (
    PeriodError,
    SearchExhaustedError,
    cached_units,
    fundamental_unit,
    seed_unit_cache,
)
from .voronoi import PerfectForm, WalkError, classes_equal, walk_classes

CSV_COLUMNS = ("d", "nK", "tag", "alpha", "beta", "norm", "predicted_nK", "agree")


def squarefree_sieve(lo: int, hi: int) -> list[int]:
    """Squarefree integers in [lo, hi], by striking multiples of squares."""
    if lo < 2 or hi < lo:
        raise ValueError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    flags = bytearray([1]) * (hi - lo + 1)
    p = 2
    while p * p <= hi:
        sq = p * p
        start = (lo + sq - 1) // sq * sq
        for mult in range(start, hi + 1, sq):
            flags[mult - lo] = 0
        p += 1
    return [lo + i for i, keep in enumerate(flags) if keep]


@dataclass(frozen=True, slots=True)
class ClassSummary:
    """One walked class: primitive pair, minimum, minimal vectors.

    Vectors are basis coordinate pairs over {1, omega}, the full set
    including negatives, sorted.
    """

    pair: tuple[int, int]
    mu: int
    min_vectors: tuple[tuple[int, int], ...]


@dataclass(frozen=True, slots=True)
class ScanRecord:
    d: int
    n_classes: int
    dclass: DClass
    unit_alpha: Fraction
    unit_beta: Fraction
    norm_sign: int
    classes: tuple[ClassSummary, ...]
    predicted: int | None
    agree: bool | None


def _summarize(vertex: PerfectForm) -> ClassSummary:
    coords = sorted(y.basis_coords() for y in vertex.min_vectors)
    return ClassSummary((vertex.pair.p, vertex.pair.q), vertex.mu, tuple(coords))


def build_record(d: int) -> ScanRecord:
    field = FieldDesc(d)
    unit = fundamental_unit(field)
    result = walk_classes(field)
    dclass = classify(field, unit)
    predicted = dclass.predicted_class_count
    return ScanRecord(
        d=d,
        n_classes=result.class_count,
        dclass=dclass,
        unit_alpha=unit.value.a,
        unit_beta=unit.value.b,
        norm_sign=unit.norm_sign,
        classes=tuple(_summarize(v) for v in result.classes),
        predicted=predicted,
        agree=None if predicted is None else predicted == result.class_count,
    )


# -- serialization ---------------------------------------------------------


def _opt_str(value) -> str:
    return "" if value is None else str(value).lower()


def render_csv(records: list[ScanRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.d,
                r.n_classes,
                r.dclass.tag,
                str(r.unit_alpha),
                str(r.unit_beta),
                r.norm_sign,
                "" if r.predicted is None else r.predicted,
                _opt_str(r.agree),
            ]
        )
    return buf.getvalue()


def csv_projection(r: ScanRecord) -> tuple:
    """The fields a CSV row carries; parse_csv returns these."""
    return (
        r.d,
        r.n_classes,
        r.dclass.tag,
        r.unit_alpha,
        r.unit_beta,
        r.norm_sign,
        r.predicted,
        r.agree,
    )


def parse_csv(text: str) -> list[tuple]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError("missing or wrong CSV header")
    out = []
    for row in rows[1:]:
        d, nk, tag, alpha, beta, norm, predicted, agree = row
        out.append(
            (
                int(d),
                int(nk),
                tag,
                Fraction(alpha),
                Fraction(beta),
                int(norm),
                int(predicted) if predicted else None,
                {"true": True, "false": False, "": None}[agree],
            )
        )
    return out


def record_to_dict(r: ScanRecord) -> dict:
    return {
        "d": r.d,
        "nK": r.n_classes,
        "tag": r.dclass.tag,
        "m": r.dclass.m,
        "k": r.dclass.k,
        "delta": r.dclass.delta,
        "alpha": str(r.unit_alpha),
        "beta": str(r.unit_beta),
        "norm": r.norm_sign,
        "predicted_nK": r.predicted,
        "agree": r.agree,
        "classes": [
            {
                "pair": list(c.pair),
                "mu": c.mu,
                "min_vectors": [list(v) for v in c.min_vectors],
            }
            for c in r.classes
        ],
    }


def record_from_dict(obj: dict) -> ScanRecord:
    return ScanRecord(
        d=obj["d"],
        n_classes=obj["nK"],
        dclass=DClass(obj["tag"], obj["m"], obj["k"], obj["delta"]),
        unit_alpha=Fraction(obj["alpha"]),
        unit_beta=Fraction(obj["beta"]),
        norm_sign=obj["norm"],
        classes=tuple(
            ClassSummary(
                tuple(c["pair"]),
                c["mu"],
                tuple(tuple(v) for v in c["min_vectors"]),
            )
            for c in obj["classes"]
        ),
        predicted=obj["predicted_nK"],
        agree=obj["agree"],
    )


def render_json(records: list[ScanRecord]) -> str:
    return json.dumps([record_to_dict(r) for r in records], indent=2) + "\n"


def parse_json(text: str) -> list[ScanRecord]:
    return [record_from_dict(obj) for obj in json.loads(text)]


# -- unit cache ------------------------------------------------------------


def load_unit_cache(path: str) -> list[tuple[int, Fraction, Fraction, int]]:
    """Lines of "d alpha beta norm"; a missing file is an empty cache."""
    p = Path(path)
    if not p.exists():
        return []
    entries = []
    for line in p.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        d, alpha, beta, norm = line.split()
        entries.append((int(d), Fraction(alpha), Fraction(beta), int(norm)))
    return entries


def save_unit_cache(path: str, extra: list[tuple[int, Fraction, Fraction, int]]) -> None:
    merged = {d: (alpha, beta, norm) for d, alpha, beta, norm in load_unit_cache(path)}
    for d, alpha, beta, norm in extra:
        merged[d] = (alpha, beta, norm)
    for d, unit in cached_units().items():
        merged[d] = (unit.value.a, unit.value.b, unit.norm_sign)
    lines = [
        f"{d} {alpha} {beta} {norm}"
        for d, (alpha, beta, norm) in sorted(merged.items())
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


# -- commands --------------------------------------------------------------


def _render_pm_vectors(summary: ClassSummary, field: FieldDesc) -> str:
    reps = sorted({max(c, (-c[0], -c[1])) for c in summary.min_vectors})
    return ", ".join(f"+-({field.from_basis_coords(u, v)})" for u, v in reps)


def _print_record(record: ScanRecord) -> None:
    field = FieldDesc(record.d)
    sign = "+1" if record.norm_sign == 1 else "-1"
    print(f"d = {record.d}  ({field.basis_kind} basis)")
    print(
        f"fundamental unit: {field.element(record.unit_alpha, record.unit_beta)}"
        f"  (norm {sign})"
    )
    print(f"classes: {record.n_classes}")
    for i, c in enumerate(record.classes, 1):
        p, q = c.pair
        print(
            f"  class {i}: pair ({p}, {q}), slope {Fraction(q, p)}, "
            f"minimum {c.mu}, vectors {_render_pm_vectors(c, field)}"
        )
    params = ""
    if record.dclass.m is not None:
        params = f" (m={record.dclass.m}"
        if record.dclass.k is not None:
            params += f", k={record.dclass.k}, delta={record.dclass.delta:+d}"
        params += ")"
    print(f"tag: {record.dclass.tag}{params}")
    if record.predicted is None:
        print("predicted classes: none")
    else:
        verdict = "agree" if record.agree else "DISAGREE"
        print(f"predicted classes: {record.predicted}  [{verdict}]")


def cmd_analyze(args) -> int:
    record = build_record(args.d)
    if args.json:
        sys.stdout.write(json.dumps(record_to_dict(record), indent=2) + "\n")
    else:
        _print_record(record)
    return 1 if record.agree is False else 0


_pool_entries: list = []


def _worker_init(entries) -> None:
    seed_unit_cache(entries)


def _scan_worker(d: int) -> ScanRecord:
    return build_record(d)


def cmd_scan(args) -> int:
    mod4 = {int(t) for t in args.mod4.split(",")}
    if not mod4 or not mod4 <= {1, 2, 3}:
        raise ValueError(f"--mod4 must pick from 1,2,3; got {args.mod4!r}")
    ds = [d for d in squarefree_sieve(args.lo, args.hi) if d % 4 in mod4]
    entries = load_unit_cache(args.cache) if args.cache else []
    seed_unit_cache(entries)
    if args.jobs > 1 and len(ds) > 1:
        chunk = max(1, len(ds) // (4 * args.jobs))
        with ProcessPoolExecutor(
            max_workers=args.jobs, initializer=_worker_init, initargs=(entries,)
        ) as pool:
            records = list(pool.map(_scan_worker, ds, chunksize=chunk))
    else:
        records = [build_record(d) for d in ds]
    if args.cache:
        found = [
            (r.d, r.unit_alpha, r.unit_beta, r.norm_sign) for r in records
        ]
        save_unit_cache(args.cache, found)
    text = render_csv(records) if args.format == "csv" else render_json(records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    counts = dict(sorted(Counter(r.n_classes for r in records).items()))
    bad = [r.d for r in records if r.agree is False]
    print(
        f"scanned {len(records)} fields; class counts: {counts}; "
        f"disagreements: {len(bad)}",
        file=sys.stderr,
    )
    for d in bad:
        print(f"prediction failed at d = {d}", file=sys.stderr)
    return 1 if bad else 0


def cmd_verify_family(args) -> int:
    scan = generate_family(args.m_max, args.k_max, args.d_cap)
    reasons = Counter(rej.reason for rej in scan.rejected)
    print(
        f"candidates: {len(scan.accepted) + len(scan.rejected)}, "
        f"accepted: {len(scan.accepted)}, rejected: {dict(sorted(reasons.items()))}"
    )
    if not scan.accepted:
        print("no verified family members in range; vacuously passed")
        return 0
    failures = 0
    for params in scan.accepted:
        field = FieldDesc(params.d)
        unit = fundamental_unit(field)
        a1, a2 = construct_a1_a2(field)
        a3 = construct_a3(unit)
        result = walk_classes(field)
        problems = []
        if result.class_count != 3:
            problems.append(f"class count {result.class_count} != 3")
        else:
            matches = []
            for name, rep in (("a1", a1), ("a2", a2), ("a3", a3)):
                js = [
                    j
                    for j, cls in enumerate(result.classes)
                    if classes_equal(cls.form, rep, result.eps2)
                ]
                if len(js) != 1:
                    problems.append(f"{name} matched walk classes {js}")
                else:
                    matches.append(js[0])
            if len(set(matches)) != len(matches):
                problems.append(f"representatives collided on classes {matches}")
        md3 = min_data(a3)
        want_mu = predicted_a3_minimum(params)
        if md3.mu != want_mu:
            problems.append(f"mu(a3) = {md3.mu} != {want_mu}")
        if md3.vectors != predicted_minimal_set("a3", field, unit):
            problems.append("minimal vectors of a3 differ from prediction")
        md1, md2 = min_data(a1), min_data(a2)
        if md1.mu != 1 or md1.vectors != predicted_minimal_set("a1", field):
            problems.append("minimal data of a1 differs from prediction")
        if md2.mu != 1 or md2.vectors != predicted_minimal_set("a2", field):
            problems.append("minimal data of a2 differs from prediction")
        spot = f"d={params.d} (m={params.m}, k={params.k}, delta={params.delta:+d})"
        if problems:
            failures += 1
            print(f"{spot}: FAIL  {'; '.join(problems)}")
        else:
            print(f"{spot}: ok  [classes=3, mu(a3)={want_mu}]")
    if failures:
        print(f"{failures} of {len(scan.accepted)} family members failed")
        return 1
    print(f"all {len(scan.accepted)} family members verified")
    return 0


def cmd_oracle(args) -> int:
    field = FieldDesc(args.d)
    x = field.element(Fraction(args.alpha), Fraction(args.beta))
    box = (args.box, args.box) if args.box else None
    md = brute_force_min(x, box)
    print(f"form: {x}")
    print(f"minimum: {md.mu}")
    for u, v in sorted(y.basis_coords() for y in md.vectors):
        print(f"  ({u}, {v})  =  {field.from_basis_coords(u, v)}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unaryperfect",
        description="Perfect unary forms over real quadratic fields: "
        "exact class walks and closed-form family checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="walk one field and report its classes")
    p.add_argument("d", type=int)
    p.add_argument("--json", action="store_true", help="emit one JSON record")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="walk every squarefree d in a range")
    p.add_argument("lo", type=int)
    p.add_argument("hi", type=int)
    p.add_argument("--mod4", default="1,2,3", help="keep d with these residues mod 4")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--cache", help="fundamental-unit cache file to read and update")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser(
        "verify-family",
        help="check the three-class family's predictions against the walk",
    )
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--d-cap", type=int, default=20000)
    p.set_defaults(func=cmd_verify_family)

    p = sub.add_parser("oracle", help="brute-force minimum of alpha + beta*sqrt(d)")
    p.add_argument("d", type=int)
    p.add_argument("alpha", help="rational, as p or p/q")
    p.add_argument("beta", help="rational, as p or p/q")
    p.add_argument("--box", type=int, help="override the certified search box")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (
        QuadFieldError,
        HypothesisError,
        SearchExhaustedError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WalkError, ReductionCapError, PeriodError, InvariantError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - last resort
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())
