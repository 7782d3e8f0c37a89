"""Range sweeps, delimited output, and the run/exit-code contract.

Rows are pure functions of (n, configuration), so a sweep can fan out across
worker processes and still emit byte-identical files: results are collected in
ascending n through a single ordered writer, and every emitted number is an
exact decimal rendering of a dyadic endpoint (never a rounded double).

CSV files carry rows only, with a frozen header; JSON files carry the same row
objects in an array whose final element wraps the run summary.  Rows are
flushed as they are produced, so an interrupted sweep leaves a valid truncated
file behind.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, replace
from functools import partial
from multiprocessing import Pool
from typing import IO, Iterable

from .bounds import (
    VerdictStatus,
    compare_bounds,
    error_term_e2,
    ramanujan_b_agreement,
)
from .dyadic import DyadicInterval
from .enclosures import (
    DEFAULT_MAX_PRECISION_BITS,
    DEFAULT_WORK_CEILING,
)
from .exact import (
    IdentityViolationError,
    binary_digit_sum,
    even_count_oracle,
    odd_floor_sum,
    pair_enumeration_oracle,
)

__all__ = [
    "UsageError",
    "SweepConfig",
    "BOUNDS_CSV_COLUMNS",
    "ERROR_TERM_CSV_COLUMNS",
    "VERIFY_CSV_COLUMNS",
    "EXIT_OK",
    "EXIT_VIOLATION",
    "EXIT_INCONCLUSIVE",
    "EXIT_USAGE",
    "run_bounds_sweep",
    "run_error_term",
    "run_verify_theorem",
]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


class UsageError(ValueError):
    """Bad configuration or command usage; maps to exit code 3."""


@dataclass(frozen=True)
class SweepConfig:
    n_lo: int
    n_hi: int
    precision_bits: int = 64
    max_escalations: int = 4
    output_format: str = "csv"
    output_path: str | None = None
    parity: str = "all"  # "all" | "odd"
    ramanujan_b: str = "printed"  # "printed" | "closed-form"
    workers: int = 1
    linear_display: bool = False  # report-only 2^x rendering, n <= 20
    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS
    work_ceiling: int = DEFAULT_WORK_CEILING

    def validate(self) -> None:
        if self.n_lo < 1:
            raise UsageError(f"range start must be >= 1, got {self.n_lo}")
        if self.n_lo > self.n_hi:
            raise UsageError(f"empty range [{self.n_lo}, {self.n_hi}]")
        if self.precision_bits < 4:
            raise UsageError(f"precision must be >= 4 bits, got {self.precision_bits}")
        if self.max_escalations < 0:
            raise UsageError("max escalations must be >= 0")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown output format {self.output_format!r}")
        if self.parity not in ("all", "odd"):
            raise UsageError(f"unknown parity filter {self.parity!r}")
        if self.ramanujan_b not in ("printed", "closed-form"):
            raise UsageError(f"unknown ramanujan-b source {self.ramanujan_b!r}")
        if self.workers < 1:
            raise UsageError("worker count must be >= 1")

    def ns(self) -> list[int]:
        ns = range(self.n_lo, self.n_hi + 1)
        if self.parity == "odd":
            return [n for n in ns if n % 2 == 1]
        return list(ns)


BOUNDS_CSV_COLUMNS = [
    "n",
    "precision_bits",
    "log2_fact_lo",
    "log2_fact_hi",
    "g_lo",
    "g_hi",
    "paper_lb_lo",
    "paper_lb_hi",
    "robbins_lo_lo",
    "robbins_lo_hi",
    "robbins_hi_lo",
    "robbins_hi_hi",
    "ramanujan_lo_lo",
    "ramanujan_lo_hi",
    "ramanujan_hi_lo",
    "ramanujan_hi_hi",
    "c_log2_lo",
    "c_log2_hi",
    "e2_lo",
    "e2_hi",
    "s2",
    "verdict_paper",
    "verdict_robbins",
    "verdict_ramanujan",
    "equality_flag",
]

ERROR_TERM_CSV_COLUMNS = [
    "n",
    "precision_bits",
    "e2_lo",
    "e2_hi",
    "s2_minus_1",
    "contains",
]

VERIFY_CSV_COLUMNS = [
    "a",
    "expected",
    "floor_formula",
    "even_count",
    "pair_count",
]


def _emit_pair(iv: DyadicInterval, frac_bits: int) -> tuple[str, str]:
    out = iv.round_outward(frac_bits)
    return out.lo.decimal_str(), out.hi.decimal_str()


def _combine(v1: VerdictStatus, v2: VerdictStatus) -> str:
    if VerdictStatus.VIOLATED in (v1, v2):
        return VerdictStatus.VIOLATED.value
    if v1 is VerdictStatus.HOLDS and v2 is VerdictStatus.HOLDS:
        return VerdictStatus.HOLDS.value
    return VerdictStatus.INCONCLUSIVE.value


def _bounds_payload(config: SweepConfig, n: int) -> dict:
    """One row, fully serialized; pure in (config, n) so workers agree."""
    row = compare_bounds(
        n,
        config.precision_bits,
        b_source=config.ramanujan_b,
        max_escalations=config.max_escalations,
        max_precision=config.max_precision_bits,
        work_ceiling=config.work_ceiling,
    )
    f_emit = row.precision_bits + 3
    fields: dict[str, str] = {"n": str(n), "precision_bits": str(row.precision_bits)}
    for name, iv in (
        ("log2_fact", row.log2_fact),
        ("g", row.g),
        ("paper_lb", row.paper_lb),
        ("robbins_lo", row.robbins_lo),
        ("robbins_hi", row.robbins_hi),
        ("ramanujan_lo", row.ramanujan_lo),
        ("ramanujan_hi", row.ramanujan_hi),
        ("c_log2", row.c_log2),
        ("e2", row.e2),
    ):
        lo, hi = _emit_pair(iv, f_emit)
        fields[f"{name}_lo"] = lo
        fields[f"{name}_hi"] = hi
    fields["s2"] = str(row.s2)
    fields["verdict_paper"] = row.verdicts["paper"].status.value
    fields["verdict_robbins"] = _combine(
        row.verdicts["robbins_lower"].status, row.verdicts["robbins_upper"].status
    )
    fields["verdict_ramanujan"] = _combine(
        row.verdicts["ramanujan_lower"].status, row.verdicts["ramanujan_upper"].status
    )
    fields["equality_flag"] = "true" if row.equality else "false"

    def raw(iv: DyadicInterval) -> tuple[int, int, int, int]:
        return (iv.lo.mantissa, iv.lo.exponent, iv.hi.mantissa, iv.hi.exponent)

    meta = {
        "statuses": {name: v.status.value for name, v in row.verdicts.items()},
        "escalations": row.escalations,
        "e2_raw": raw(row.e2),
        "c_raw": raw(row.c_log2),
        "certificates": {
            name: [
                v.certificate[0].round_outward(f_emit).lo.decimal_str(),
                v.certificate[0].round_outward(f_emit).hi.decimal_str(),
                v.certificate[1].round_outward(f_emit).lo.decimal_str(),
                v.certificate[1].round_outward(f_emit).hi.decimal_str(),
            ]
            for name, v in row.verdicts.items()
        },
    }
    return {"fields": fields, "meta": meta}


def _error_term_payload(config: SweepConfig, n: int) -> dict:
    p = config.precision_bits
    e2 = error_term_e2(
        n, p, max_precision=config.max_precision_bits, work_ceiling=config.work_ceiling
    )
    s2m1 = binary_digit_sum(n) - 1
    contains = (
        e2.contains_int(s2m1)
        and not e2.contains_int(s2m1 - 1)
        and not e2.contains_int(s2m1 + 1)
    )
    lo, hi = _emit_pair(e2, p + 3)
    fields = {
        "n": str(n),
        "precision_bits": str(p),
        "e2_lo": lo,
        "e2_hi": hi,
        "s2_minus_1": str(s2m1),
        "contains": "true" if contains else "false",
    }
    return {"fields": fields, "meta": {"contains": contains}}


def _verify_chunk(chunk: list[int]) -> tuple[int, list[dict]]:
    checked = 0
    failures: list[dict] = []
    for a in chunk:
        expected = (a - 1) // 2
        try:
            formula = odd_floor_sum(a).value
        except IdentityViolationError as exc:
            failures.append({"a": a, "error": str(exc)})
            checked += 1
            continue
        even = even_count_oracle(a)
        pair = pair_enumeration_oracle(a)
        checked += 1
        if not (formula == expected == even == pair):
            failures.append(
                {
                    "a": a,
                    "expected": expected,
                    "floor_formula": formula,
                    "even_count": even,
                    "pair_count": pair,
                }
            )
    return checked, failures


def _pool_map(config: SweepConfig, fn, items: list, chunksize: int) -> Iterable:
    if config.workers == 1:
        return map(fn, items)
    pool = Pool(processes=config.workers)

    def run():
        try:
            for payload in pool.imap(fn, items, chunksize=chunksize):
                yield payload
        finally:
            pool.terminate()
            pool.join()

    return run()


class _Writer:
    """Single ordered writer: CSV lines or a JSON array with trailing summary."""

    def __init__(self, stream: IO[str], fmt: str, columns: list[str]):
        self.stream = stream
        self.fmt = fmt
        self.columns = columns
        self.count = 0
        if fmt == "csv":
            stream.write(",".join(columns) + "\n")
            stream.flush()
        else:
            stream.write("[\n")

    def write_row(self, fields: dict[str, str]) -> None:
        if self.fmt == "csv":
            self.stream.write(",".join(fields[c] for c in self.columns) + "\n")
        else:
            if self.count:
                self.stream.write(",\n")
            self.stream.write(json.dumps(fields, separators=(",", ":")))
        self.stream.flush()
        self.count += 1

    def finish(self, summary: dict) -> None:
        if self.fmt == "json":
            if self.count:
                self.stream.write(",\n")
            self.stream.write(json.dumps({"summary": summary}, separators=(",", ":")))
            self.stream.write("\n]\n")
            self.stream.flush()


def _open_output(config: SweepConfig, default_stream: IO[str]):
    if config.output_path is None:
        return default_stream, False
    return open(config.output_path, "w", newline=""), True


def _report(lines: list[str], stream: IO[str]) -> None:
    for line in lines:
        stream.write(line + "\n")
    stream.flush()


@dataclass
class _MaxTracker:
    # deterministic argmax: strictly larger lower endpoint wins; ties keep
    # the smallest n (rows arrive in ascending order)
    n: int | None = None
    iv: DyadicInterval | None = None

    def consider(self, n: int, iv: DyadicInterval) -> None:
        if self.iv is None or iv.lo > self.iv.lo:
            self.n = n
            self.iv = iv


def run_bounds_sweep(
    config: SweepConfig,
    out_stream: IO[str] | None = None,
    report_stream: IO[str] | None = None,
) -> int:
    """Emit one BoundRow per n in ascending order; returns the exit code."""
    out_stream = out_stream if out_stream is not None else sys.stdout
    report_stream = report_stream if report_stream is not None else sys.stderr
    config.validate()
    ns = config.ns()
    stream, close_me = _open_output(config, out_stream)
    writer = _Writer(stream, config.output_format, BOUNDS_CSV_COLUMNS)

    counts = {
        name: {s.value: 0 for s in VerdictStatus}
        for name in ("paper", "robbins_lower", "robbins_upper", "ramanujan_lower", "ramanujan_upper")
    }
    equality_ns: list[int] = []
    escalated_rows = 0
    max_e2 = _MaxTracker()
    max_c = _MaxTracker()
    findings: list[dict] = []
    linear_lines: list[str] = []
    truncated = False
    checked = 0

    agreement = ramanujan_b_agreement(config.precision_bits)
    if not agreement.agree:
        findings.append(
            {
                "type": "ramanujan_b_disagreement",
                "printed": [
                    agreement.printed.lo.decimal_str(),
                    agreement.printed.hi.decimal_str(),
                ],
                "closed_form": [
                    agreement.closed_form.lo.decimal_str(),
                    agreement.closed_form.hi.decimal_str(),
                ],
            }
        )

    fn = partial(_bounds_payload, config)
    try:
        for payload in _pool_map(config, fn, ns, chunksize=16):
            fields = payload["fields"]
            meta = payload["meta"]
            writer.write_row(fields)
            checked += 1
            n = int(fields["n"])
            for name, status in meta["statuses"].items():
                counts[name][status] += 1
                if status == VerdictStatus.VIOLATED.value:
                    findings.append(
                        {
                            "type": "verdict_violated",
                            "bound": name,
                            "n": n,
                            "precision_bits": int(fields["precision_bits"]),
                            "certificate": meta["certificates"][name],
                        }
                    )
            if meta["escalations"]:
                escalated_rows += 1
            if fields["equality_flag"] == "true":
                equality_ns.append(n)
            max_e2.consider(n, _interval_from_raw(meta["e2_raw"]))
            max_c.consider(n, _interval_from_raw(meta["c_raw"]))
            if config.linear_display and n <= 20:
                linear_lines.append(_linear_line(n, fields))
    except KeyboardInterrupt:
        truncated = True

    summary = {
        "checked": checked,
        "requested": len(ns),
        "precision_bits": config.precision_bits,
        "ramanujan_b": config.ramanujan_b,
        "verdict_counts": counts,
        "equality_ns": equality_ns,
        "escalated_rows": escalated_rows,
        "max_e2": _tracker_dict(max_e2),
        "max_c_log2": _tracker_dict(max_c),
        "findings": findings,
        "truncated": truncated,
    }
    writer.finish(summary)
    if close_me:
        stream.close()

    lines = [
        f"checked={checked} of {len(ns)} rows at p={config.precision_bits} "
        f"(escalated: {escalated_rows})",
        f"equality rows (s2=1): {equality_ns}",
        f"max e2 at n={max_e2.n}" if max_e2.n is not None else "max e2: none",
        f"max c_log2 at n={max_c.n}" if max_c.n is not None else "max c_log2: none",
    ]
    lines.extend(linear_lines)
    for finding in findings:
        lines.append("FINDING: " + json.dumps(finding, separators=(",", ":")))
    if truncated:
        lines.append("interrupted: output file is truncated but valid")
    _report(lines, report_stream)

    if truncated:
        return EXIT_INCONCLUSIVE
    if counts["paper"][VerdictStatus.VIOLATED.value]:
        return EXIT_VIOLATION
    if any(c[VerdictStatus.INCONCLUSIVE.value] for c in counts.values()):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _tracker_dict(tracker: _MaxTracker) -> dict | None:
    if tracker.n is None:
        return None
    return {
        "n": tracker.n,
        "lo": tracker.iv.lo.decimal_str(),
        "hi": tracker.iv.hi.decimal_str(),
    }


def _interval_from_raw(raw: tuple[int, int, int, int]) -> DyadicInterval:
    from .dyadic import DyadicRational

    return DyadicInterval(DyadicRational(raw[0], raw[1]), DyadicRational(raw[2], raw[3]))


def _linear_line(n: int, fields: dict[str, str]) -> str:
    """Report-only linear rendering for small n; approximate by construction."""
    import math
    from fractions import Fraction

    def mid_pow2(name: str) -> float:
        mid = (float(Fraction(fields[f"{name}_lo"])) + float(Fraction(fields[f"{name}_hi"]))) / 2
        return 2.0**mid

    return (
        f"linear n={n}: n! = {math.factorial(n)}, paper_lb ~ {mid_pow2('paper_lb'):.8g}, "
        f"robbins ~ [{mid_pow2('robbins_lo'):.8g}, {mid_pow2('robbins_hi'):.8g}], "
        f"ramanujan ~ [{mid_pow2('ramanujan_lo'):.8g}, {mid_pow2('ramanujan_hi'):.8g}]"
    )


def run_error_term(
    config: SweepConfig,
    out_stream: IO[str] | None = None,
    report_stream: IO[str] | None = None,
) -> int:
    """Emit the e2 table and check the digit-sum characterization per row."""
    out_stream = out_stream if out_stream is not None else sys.stdout
    report_stream = report_stream if report_stream is not None else sys.stderr
    config.validate()
    ns = config.ns()
    stream, close_me = _open_output(config, out_stream)
    writer = _Writer(stream, config.output_format, ERROR_TERM_CSV_COLUMNS)
    all_contained = True
    checked = 0
    truncated = False
    max_row: dict | None = None
    fn = partial(_error_term_payload, config)
    try:
        for payload in _pool_map(config, fn, ns, chunksize=32):
            writer.write_row(payload["fields"])
            checked += 1
            if not payload["meta"]["contains"]:
                all_contained = False
            s2m1 = int(payload["fields"]["s2_minus_1"])
            if max_row is None or s2m1 > max_row["s2_minus_1"]:
                max_row = {
                    "n": int(payload["fields"]["n"]),
                    "s2_minus_1": s2m1,
                    "e2_lo": payload["fields"]["e2_lo"],
                    "e2_hi": payload["fields"]["e2_hi"],
                }
    except KeyboardInterrupt:
        truncated = True
    summary = {
        "checked": checked,
        "requested": len(ns),
        "precision_bits": config.precision_bits,
        "all_contained": all_contained,
        "max_e2": max_row,
        "truncated": truncated,
    }
    writer.finish(summary)
    if close_me:
        stream.close()
    max_line = (
        f"max e2 at n={max_row['n']} (s2-1 = {max_row['s2_minus_1']})"
        if max_row
        else "max e2: none"
    )
    _report(
        [
            f"checked={checked} of {len(ns)} rows at p={config.precision_bits}",
            max_line,
            f"every e2 interval contained s2(n)-1 and excluded neighbors: "
            f"{'true' if all_contained else 'false'}",
        ]
        + (["interrupted: output file is truncated but valid"] if truncated else []),
        report_stream,
    )
    if truncated:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if all_contained else EXIT_VIOLATION


def run_verify_theorem(
    config: SweepConfig,
    out_stream: IO[str] | None = None,
    report_stream: IO[str] | None = None,
) -> int:
    """Three-way agreement check of the counting identity over odd a."""
    out_stream = out_stream if out_stream is not None else sys.stdout
    report_stream = report_stream if report_stream is not None else sys.stderr
    config = replace(config, parity="odd")
    config.validate()
    ns = config.ns()
    chunks = [ns[i : i + 64] for i in range(0, len(ns), 64)]
    stream, close_me = _open_output(config, out_stream)
    writer = _Writer(stream, config.output_format, VERIFY_CSV_COLUMNS)
    checked = 0
    failures: list[dict] = []
    truncated = False
    try:
        for chunk_checked, chunk_failures in _pool_map(
            config, _verify_chunk, chunks, chunksize=1
        ):
            checked += chunk_checked
            for failure in chunk_failures:
                failures.append(failure)
                writer.write_row(
                    {
                        "a": str(failure["a"]),
                        "expected": str(failure.get("expected", "")),
                        "floor_formula": str(failure.get("floor_formula", "")),
                        "even_count": str(failure.get("even_count", "")),
                        "pair_count": str(failure.get("pair_count", "")),
                    }
                )
    except KeyboardInterrupt:
        truncated = True
    summary = {
        "checked": checked,
        "failures": len(failures),
        "failure_rows": failures,
        "truncated": truncated,
    }
    writer.finish(summary)
    if close_me:
        stream.close()
    _report(
        [f"checked={checked} failures={len(failures)}"]
        + [f"FAILURE: {json.dumps(f, separators=(',', ':'))}" for f in failures]
        + (["interrupted: output file is truncated but valid"] if truncated else []),
        report_stream,
    )
    if truncated:
        return EXIT_INCONCLUSIVE
    return EXIT_VIOLATION if failures else EXIT_OK
