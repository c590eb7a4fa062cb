"""Machine-readable reports: lossless JSON and plottable CSV.

High-precision numbers are serialized as decimal strings annotated with
their mantisssa budget in bits, never as binary floating point; values in
this package span 1e-40 to 1e+3 and reports must round-trip.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from mpmath import mp, mpf, workprec

from . import __version__
from .checks import BoundCheck
from .core import CoefficientVector, SupportSet

SCHEMA_VERSION = "1"

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_PARTIAL = "partial"


def digits_for(bits) -> int:
    """Decimal digits that preserve a ``bits``-bit mantissa on round trip."""
    return int(bits * 0.30103) + 5


def enc_real(x, bits) -> dict:
    with workprec(bits + 8):
        return {"dec": mp.nstr(mpf(x), digits_for(bits)), "bits": bits}


def enc_complex(z, bits) -> dict:
    with workprec(bits + 8):
        z = mp.mpc(z)
        d = digits_for(bits)
        return {"re": mp.nstr(z.real, d), "im": mp.nstr(z.imag, d), "bits": bits}


def dec_real(obj) -> mpf:
    with workprec(obj["bits"] + 8):
        return mpf(obj["dec"])


def enc_support(T: SupportSet) -> list:
    return list(T.offsets)


def enc_coeff_vector(x: CoefficientVector, bits) -> dict:
    d = digits_for(bits)
    with workprec(bits + 8):
        return {
            "support": enc_support(x.support),
            "re": [mp.nstr(v.real, d) for v in x.values],
            "im": [mp.nstr(v.imag, d) for v in x.values],
            "bits": bits,
        }


def enc_check(check: BoundCheck, bits) -> dict:
    return {
        "name": check.name,
        "lhs": enc_real(check.lhs, bits),
        "rhs": enc_real(check.rhs, bits),
        "slack": enc_real(check.slack, bits),
        "satisfied": check.satisfied,
    }


@dataclass
class Report:
    """A fully serialized run: config echo, results payload, checks, status.

    Everything inside is already JSON-ready, so reparse equality is plain
    dict equality and byte determinism only excludes the timestamp.
    """

    subcommand: str
    config: dict
    results: dict
    checks: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    status: str = STATUS_PASS
    seed: int = 0
    timestamp: str = ""
    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "subcommand": self.subcommand,
            "timestamp": self.timestamp,
            "seed": self.seed,
            "config": self.config,
            "results": self.results,
            "checks": self.checks,
            "errors": self.errors,
            "status": self.status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """One row per check with columns name,lhs,rhs,slack,satisfied;
        falls back to the results table for table-shaped payloads."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.checks:
            writer.writerow(["name", "lhs", "rhs", "slack", "satisfied"])
            for c in self.checks:
                writer.writerow([
                    c["name"], c["lhs"]["dec"], c["rhs"]["dec"],
                    c["slack"]["dec"], str(c["satisfied"]).lower(),
                ])
        elif "table" in self.results:
            rows = self.results["table"]
            if rows:
                header = list(rows[0].keys())
                writer.writerow(header)
                for row in rows:
                    writer.writerow([_csv_cell(row[h]) for h in header])
        else:
            writer.writerow(["key", "value"])
            for k in sorted(self.results):
                writer.writerow([k, _csv_cell(self.results[k])])
        return buf.getvalue()


def _csv_cell(value):
    if isinstance(value, dict):
        if "dec" in value:
            return value["dec"]
        if "re" in value:
            return f"{value['re']}+{value['im']}j"
    if isinstance(value, list):
        return ";".join(str(v) for v in value)
    return value


def build_report(subcommand, config, results, checks=(), errors=(), seed=0,
                 bits=256, timestamp=None) -> Report:
    encoded = [enc_check(c, bits) if isinstance(c, BoundCheck) else c
               for c in checks]
    errs = [{"where": w, "message": m} for (w, m) in errors]
    if any(not c["satisfied"] for c in encoded):
        status = STATUS_FAIL
    elif errs:
        status = STATUS_PARTIAL
    else:
        status = STATUS_PASS
    ts = timestamp if timestamp is not None else \
        datetime.now(timezone.utc).isoformat(timespec="seconds")
    return Report(subcommand=subcommand, config=config, results=results,
                  checks=encoded, errors=errs, status=status, seed=seed,
                  timestamp=ts)


def from_json(text) -> Report:
    data = json.loads(text)
    return Report(
        subcommand=data["subcommand"],
        config=data["config"],
        results=data["results"],
        checks=data["checks"],
        errors=data["errors"],
        status=data["status"],
        seed=data["seed"],
        timestamp=data["timestamp"],
        schema_version=data["schema_version"],
        tool_version=data["tool_version"],
    )
