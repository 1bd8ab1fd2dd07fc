"""Deterministic, seeded, parallel sweeps over coefficient space.

Three modes over a chosen weighted ring:

* ``histogram`` -- tabulate (height, ns) over random or mask-exhaustive
  coefficient vectors;
* ``hunt`` -- collect samples whose tau equals a target, each re-verified on
  a fresh parse;
* ``assert_bound`` -- record any smooth-filtered supersingular sample whose
  Artin invariant is provably below a bound (these must never occur).

Sampling is counter-based: coefficient vectors are a pure function of
(seed, index), so partitioning across workers is trivial and every artifact
is byte-identical regardless of worker count.  The smoothness filter is a
heuristic witness search: it enumerates points of the weighted projective
space over F_{p^k}, k <= K, looking for a common zero of f and all its
partials.  A "no witness" outcome means no singular point over the searched
small fields; it is NOT a smoothness proof.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import cartier
from .errors import ResourceError, UsageError
from .ffield import field as make_field
from .polyring import Polynomial, RingConfig, format_poly, parse_poly
from .values import is_infinite

SMOOTHNESS_CAVEAT = (
    "no singular point over the searched small fields; this is NOT a smoothness proof"
)

_MAX_TABLE_CELLS = 5_000_000  # witness tables: points x basis monomials
_MAX_EXHAUSTIVE = 200_000


# ---------------------------------------------------------------------------
# counter-based sampling
# ---------------------------------------------------------------------------

def _u64_stream(seed: int, index: int):
    key = (seed % 2**64).to_bytes(8, "little")
    block = 0
    while True:
        msg = index.to_bytes(8, "little") + block.to_bytes(4, "little")
        digest = hashlib.blake2b(msg, key=key, digest_size=64).digest()
        for off in range(0, 64, 8):
            yield int.from_bytes(digest[off : off + 8], "little")
        block += 1


def sample(seed: int, index: int, ring: RingConfig) -> list:
    """Uniform coefficient vector in field^m, a pure function of (seed, index)."""
    m = cartier.basis(ring).m
    fld = ring.field
    stream = _u64_stream(seed, index)
    if fld.e == 1:
        return [next(stream) % fld.p for _ in range(m)]
    return [tuple(next(stream) % fld.p for _ in range(fld.e)) for _ in range(m)]


# ---------------------------------------------------------------------------
# heuristic smoothness witness search
# ---------------------------------------------------------------------------

class _WitnessTables:
    """Vectorized evaluation of f and its partials at all projective points.

    Field elements of F_{p^k} are coded as base-p integers; addition and
    multiplication become table lookups, so one sample costs a few hundred
    numpy indexing operations.
    """

    def __init__(self, ring: RingConfig, k: int):
        base = ring.field
        p = base.p
        fld = base if k == 1 else make_field(p, k)
        q = fld.order
        self.ring = ring
        self.fld = fld
        self.k = k

        elems = list(fld.elements())
        code_of = {e: i for i, e in enumerate(elems)}
        self.elems = elems

        mul = np.zeros((q, q), dtype=np.int32)
        add = np.zeros((q, q), dtype=np.int32)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                mul[i, j] = code_of[fld.mul(a, b)]
                add[i, j] = code_of[fld.add(a, b)]
        self.MUL, self.ADD = mul, add

        bas = cartier.basis(ring)
        self.basis = bas
        nv = ring.num_vars
        max_e = max((e for mono in bas.monomials for e in mono), default=1)
        powtab = np.zeros((q, max_e + 1), dtype=np.int32)
        for i, a in enumerate(elems):
            acc = fld.one
            powtab[i, 0] = code_of[fld.one]
            for e in range(1, max_e + 1):
                acc = fld.mul(acc, a)
                powtab[i, e] = code_of[acc]

        # canonical projective representatives: first nonzero coordinate = 1
        pts = []
        one_code = code_of[fld.one]
        for pivot in range(nv):
            tail = nv - pivot - 1
            for idx in range(q**tail):
                coords = [0] * pivot + [one_code]
                rest = idx
                for _ in range(tail):
                    coords.append(rest % q)
                    rest //= q
                pts.append(coords)
        P = np.array(pts, dtype=np.int32)
        npts = len(pts)
        if npts * bas.m > _MAX_TABLE_CELLS:
            raise ResourceError(
                f"witness tables would need {npts * bas.m} cells; lower the extension bound"
            )
        self.points = P

        def mono_values(exps) -> np.ndarray:
            acc = np.full(npts, one_code, dtype=np.int32)
            for i, e in enumerate(exps):
                if e:
                    acc = mul[acc, powtab[P[:, i], e]]
            return acc

        self.VT = np.stack([mono_values(mono) for mono in bas.monomials], axis=1)
        # partial tables: scalar (e_i mod p) * monomial / x_i
        embed = {c: code_of[fld.from_int(c)] for c in range(p)}
        self.embed = embed
        self.DT = []
        for i in range(nv):
            cols = []
            for mono in bas.monomials:
                e = mono[i]
                s = e % p
                if e == 0 or s == 0:
                    cols.append(np.zeros(npts, dtype=np.int32))
                    continue
                lowered = mono[:i] + (e - 1,) + mono[i + 1 :]
                cols.append(mul[mono_values(lowered), embed[s]])
            self.DT.append(np.stack(cols, axis=1))

    def witness(self, coeffs) -> tuple | None:
        """First projective point where f and all partials vanish, else None."""
        bcodes = [self.embed[c] for c in coeffs]
        npts = self.points.shape[0]

        def accumulate(table) -> np.ndarray:
            acc = np.zeros(npts, dtype=np.int32)
            for j, bc in enumerate(bcodes):
                if bc:
                    acc = self.ADD[acc, self.MUL[table[:, j], bc]]
            return acc

        mask = accumulate(self.VT) == 0
        if not mask.any():
            return None
        for dt in self.DT:
            mask &= accumulate(dt) == 0
            if not mask.any():
                return None
        first = int(np.nonzero(mask)[0][0])
        return tuple(self.elems[c] for c in self.points[first])


_tables_cache: dict = {}


def _tables(ring: RingConfig, k: int) -> _WitnessTables:
    key = (ring, k)
    if key not in _tables_cache:
        _tables_cache[key] = _WitnessTables(ring, k)
    return _tables_cache[key]


def singular_witness(f: Polynomial, extension_bound: int = 2):
    """A singular point of V(f) over F_{p^k}, k <= extension_bound, or None.

    Returns (k, point) for the first witness found (a common zero of f and
    all partials, nonzero in the affine cone).  ``None`` means no witness
    over the searched fields -- see SMOOTHNESS_CAVEAT; it is not a proof.
    """
    if f.ring.field.e != 1:
        raise UsageError("the witness search supports prime base fields only")
    if not 1 <= extension_bound <= 3:
        raise UsageError("the witness extension bound must be 1, 2 or 3")
    coeffs = cartier.basis(f.ring).coefficients(f)
    for k in range(1, extension_bound + 1):
        hit = _tables(f.ring, k).witness(coeffs)
        if hit is not None:
            return (k, hit)
    return None


# ---------------------------------------------------------------------------
# scan jobs
# ---------------------------------------------------------------------------

MODE_HISTOGRAM = "histogram"
MODE_HUNT = "hunt"
MODE_ASSERT_BOUND = "assert_bound"


@dataclass(frozen=True)
class ScanJob:
    ring: RingConfig
    mode: str = MODE_HISTOGRAM
    count: int = 0
    seed: int = 0
    mask: tuple | None = None          # exhaustive over these basis indices when set
    target_sigma: int | None = None    # hunt mode
    min_sigma: int | None = None       # assert_bound mode
    smoothness_filter: bool | None = None  # default: on for assert_bound
    witness_extension_bound: int = 2
    workers: int = 1

    def filter_on(self) -> bool:
        if self.smoothness_filter is None:
            return self.mode == MODE_ASSERT_BOUND
        return self.smoothness_filter

    def validate(self) -> None:
        if self.mode not in (MODE_HISTOGRAM, MODE_HUNT, MODE_ASSERT_BOUND):
            raise UsageError(f"unknown scan mode {self.mode!r}")
        if self.mode == MODE_HUNT and self.target_sigma is None:
            raise UsageError("hunt mode needs a target sigma")
        if self.mode == MODE_ASSERT_BOUND and self.min_sigma is None:
            raise UsageError("assert_bound mode needs a minimum sigma")
        if self.mode != MODE_HISTOGRAM and cartier.family_of(self.ring) == cartier.FAMILY_GENERAL:
            raise UsageError("hunt and assert_bound modes need one of the two K3 families")
        if self.mask is None and self.count <= 0:
            raise UsageError("need a positive sample count (or an exhaustive mask)")
        if self.mask is not None:
            m = cartier.basis(self.ring).m
            if any(not 0 <= i < m for i in self.mask):
                raise UsageError("mask indices out of basis range")
            if self.ring.field.order ** len(self.mask) > _MAX_EXHAUSTIVE:
                raise UsageError("exhaustive mask space too large")
        if self.filter_on() and self.ring.field.e != 1:
            raise UsageError("the smoothness filter supports prime base fields only")
        if self.workers < 1:
            raise UsageError("worker count must be positive")

    def total(self) -> int:
        if self.mask is not None:
            return self.ring.field.order ** len(self.mask)
        return self.count

    def coefficients_for(self, index: int) -> list:
        if self.mask is None:
            return sample(self.seed, index, self.ring)
        fld = self.ring.field
        m = cartier.basis(self.ring).m
        elems = list(fld.elements())
        coeffs = [fld.zero] * m
        rest = index
        for pos in self.mask:
            coeffs[pos] = elems[rest % fld.order]
            rest //= fld.order
        return coeffs


def _fmt(value) -> str:
    if value is None:
        return ""
    if is_infinite(value):
        return "infinity"
    return str(value)


def _evaluate_index(job: ScanJob, index: int) -> dict:
    ring = job.ring
    fld = ring.field
    coeffs = job.coefficients_for(index)
    coeff_str = ";".join(fld.format(c) for c in coeffs)
    row = {
        "index": index,
        "coefficients": coeff_str,
        "height": "",
        "ns": "",
        "tau": "",
        "smooth_witness_flag": "",
        "_supersingular": False,
        "_tau": None,
    }
    f = cartier.basis(ring).polynomial(coeffs)
    if f.is_zero():
        row["height"] = "zero_polynomial"
        return row
    if job.filter_on():
        hit = singular_witness(f, job.witness_extension_bound)
        if hit is None:
            row["smooth_witness_flag"] = f"no_witness(K={job.witness_extension_bound})"
        else:
            row["smooth_witness_flag"] = f"singular(k={hit[0]})"
    m = cartier.basis(ring).m
    report = cartier.artin_report(f, height_cap=m)
    row["height"] = _fmt(report.height)
    row["ns"] = _fmt(report.ns)
    row["tau"] = _fmt(report.tau)
    row["_supersingular"] = is_infinite(report.height)
    if report.tau is not None and not is_infinite(report.tau):
        row["_tau"] = report.tau
    return row


def _worker_chunk(args) -> list:
    job, indices = args
    return [_evaluate_index(job, i) for i in indices]


@dataclass
class ScanResult:
    job: dict
    rows: list
    histogram: list          # [(height, ns, count)] sorted
    hits: list               # hunt mode
    violations: list         # assert_bound: provable sigma-bound failures
    ambiguous: list          # assert_bound: sigma range straddles the bound
    caveat: str | None

    def to_json_dict(self) -> dict:
        return {
            "job": self.job,
            "total": len(self.rows),
            "histogram": [
                {"height": h, "ns": ns, "count": c} for (h, ns, c) in self.histogram
            ],
            "hits": self.hits,
            "violations": self.violations,
            "ambiguous": self.ambiguous,
            "smoothness_caveat": self.caveat,
        }

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "coefficients", "height", "ns", "tau", "smooth_witness_flag"])
        for row in self.rows:
            writer.writerow(
                [row["index"], row["coefficients"], row["height"], row["ns"], row["tau"],
                 row["smooth_witness_flag"]]
            )
        return buf.getvalue()

    def json_text(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    def write_artifacts(self, directory) -> None:
        from pathlib import Path

        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        (out / "scan.csv").write_text(self.csv_text())
        (out / "scan.json").write_text(self.json_text())


def run_scan(job: ScanJob) -> ScanResult:
    """Execute a scan job; identical inputs give identical results at any worker count."""
    job.validate()
    total = job.total()
    indices = list(range(total))

    if job.workers == 1 or total < 4:
        rows = [_evaluate_index(job, i) for i in indices]
    else:
        nchunks = min(total, job.workers * 4)
        chunks = [indices[k::nchunks] for k in range(nchunks)]
        with ProcessPoolExecutor(max_workers=job.workers) as pool:
            parts = list(pool.map(_worker_chunk, [(job, ch) for ch in chunks]))
        rows = [r for part in parts for r in part]
        rows.sort(key=lambda r: r["index"])

    hist: dict = {}
    for row in rows:
        key = (row["height"], row["ns"])
        hist[key] = hist.get(key, 0) + 1
    histogram = sorted((h, ns, c) for (h, ns), c in hist.items())

    smooth_ok = lambda row: (not job.filter_on()) or row["smooth_witness_flag"].startswith(
        "no_witness"
    )
    quartic_char2 = (
        cartier.family_of(job.ring) == cartier.FAMILY_QUARTIC and job.ring.field.p == 2
    )

    hits = []
    violations = []
    ambiguous = []
    for row in rows:
        if not row["_supersingular"] or row["_tau"] is None or not smooth_ok(row):
            continue
        tau = row["_tau"]
        public = {k: v for k, v in row.items() if not k.startswith("_")}
        if job.mode == MODE_HUNT and tau == job.target_sigma:
            fresh = _reverify(job.ring, row["coefficients"])
            public["reverified"] = fresh == tau
            hits.append(public)
        elif job.mode == MODE_ASSERT_BOUND:
            sigma_max = tau + 1 if quartic_char2 else tau
            if sigma_max < job.min_sigma:
                violations.append(public)
            elif tau < job.min_sigma:
                ambiguous.append(public)

    cleaned = [{k: v for k, v in row.items() if not k.startswith("_")} for row in rows]
    return ScanResult(
        job={
            "p": job.ring.field.p,
            "ext_degree": job.ring.field.e,
            "weights": list(job.ring.weights),
            "mode": job.mode,
            "count": total,
            "seed": job.seed,
            "mask": list(job.mask) if job.mask is not None else None,
            "target_sigma": job.target_sigma,
            "min_sigma": job.min_sigma,
            "smoothness_filter": job.filter_on(),
            "witness_extension_bound": job.witness_extension_bound,
        },
        rows=cleaned,
        histogram=histogram,
        hits=hits,
        violations=violations,
        ambiguous=ambiguous,
        caveat=SMOOTHNESS_CAVEAT if job.filter_on() else None,
    )


def _reverify(ring: RingConfig, coeff_str: str) -> "int | None":
    """Recompute tau from a freshly parsed copy of the hit's equation."""
    fld = ring.field
    bas = cartier.basis(ring)
    raws = [parse_scalar_str(fld, part) for part in coeff_str.split(";")]
    f = bas.polynomial(raws)
    fresh = parse_poly(format_poly(f), ring)
    report = cartier.artin_report(fresh, height_cap=bas.m)
    if report.tau is None or is_infinite(report.tau):
        return None
    return report.tau


def parse_scalar_str(fld, text: str):
    from .polyring import parse_scalar

    return parse_scalar(fld, text)
