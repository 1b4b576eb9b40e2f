"""End-to-end enumeration of maximal forms with bounded class number.

For one rank: mass-eligible characters and mass-type tuples, their local
profiles, a rational space per profile, a primitive maximal lattice on it,
and a mass-certified genus traversal. Genera with at most B classes are
emitted in full.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint

from qflat.genus import NEIGHBOR_PRIME_CAP, genus_representatives
from qflat.lattice import (
    IntegralForm,
    content,
    form_of_basis,
    is_maximal,
    local_profile,
    primitive_maximal,
    zvalued_lattice_in,
)
from qflat.mass import (
    enumerate_characters,
    enumerate_tuples,
    mass_from_profile,
    profiles_from_tuple,
    scan_horizon,
    unit_mass_possible,
)
from qflat.space import ASSEMBLE_SEARCH_CAP, assemble_space

log = logging.getLogger(__name__)


class CertificationError(RuntimeError):
    """An emitted genus failed one of its exact consistency checks."""


@dataclass(frozen=True)
class RunConfig:
    rank_min: int = 3
    rank_max: int | None = None  # None: certified automatic horizon
    bound: Fraction = Fraction(1)
    fmt: str = "text"
    jobs: int = 1
    assemble_cap: int = ASSEMBLE_SEARCH_CAP
    prime_cap: int = NEIGHBOR_PRIME_CAP
    precision_bits: int = 64

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))
        if self.rank_min < 3:
            raise ValueError("rank_min must be at least 3")
        if self.rank_max is not None and self.rank_max < self.rank_min:
            raise ValueError("rank_max below rank_min")
        if self.fmt not in ("text", "json", "csv"):
            raise ValueError(f"unknown format {self.fmt}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")


@dataclass(frozen=True)
class Entry:
    form: IntegralForm
    det_H: int
    class_number: int
    mass: Fraction  # sum of 1/|Aut| over the genus
    aut_order: int
    profile: dict
    provenance: dict

    @property
    def det_factorization(self) -> list:
        return sorted(factorint(self.det_H).items())

    def sort_key(self):
        return (self.form.n, self.det_H, self.form.coeffs)


@dataclass
class EnumerationResult:
    rank: int
    bound_B: Fraction
    entries: list = field(default_factory=list)
    genera: list = field(default_factory=list)  # every GenusRecord traversed

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class _Candidate:
    form: IntegralForm
    profile: object
    provenance: dict


def _jobs(cfg: RunConfig) -> int:
    env = os.environ.get("QFLAT_JOBS")
    return max(1, int(env)) if env else cfg.jobs


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def eligible_profiles(n: int, B, cfg: RunConfig | None = None) -> list:
    """(profile, provenance) pairs whose formula mass allows class number <= B."""
    cfg = cfg or RunConfig()
    B = Fraction(B)
    chars = [None] if n % 2 else enumerate_characters(n, B, cfg.precision_bits)
    out = []
    for chi in chars:
        for t in enumerate_tuples(n, B, chi):
            for prof in profiles_from_tuple(t):
                mp = mass_from_profile(prof).proper_mass
                # class number one forces Mass+ = 2/|Aut|
                if B < 2 and not unit_mass_possible(mp, n):
                    continue
                prov = {
                    "character": None if chi is None else chi.fundamental_discriminant,
                    "tuple": [[p, mt.value] for p, mt in t.assignments],
                }
                out.append((prof, prov))
    return out


def _build_lattice(item):
    prof, prov, cap = item
    try:
        space = assemble_space(prof, cap)
        lat = primitive_maximal(zvalued_lattice_in(space))
        return _Candidate(form_of_basis(lat), local_profile(form_of_basis(lat)), prov)
    except Exception as exc:
        raise RuntimeError(f"lattice construction failed for {prov}: {exc}") from exc


def _traverse(item):
    cand, target, cap = item
    try:
        return genus_representatives(cand.form, target, prime_cap=cap)
    except Exception as exc:
        raise RuntimeError(f"genus traversal failed for {cand.provenance}: {exc}") from exc


def enumerate_maximal(n: int, B, cfg: RunConfig | None = None) -> EnumerationResult:
    cfg = cfg or RunConfig()
    B = Fraction(B)
    if n < 3:
        raise ValueError("n must be at least 3")
    jobs = _jobs(cfg)
    items = [(prof, prov, cfg.assemble_cap) for prof, prov in eligible_profiles(n, B, cfg)]
    log.info("rank %d: %d eligible profiles", n, len(items))
    cands = _map(_build_lattice, items, jobs)

    # distinct profiles give distinct spaces, but rescaling to a primitive
    # form can land two of them on one space
    seen, unique = set(), []
    for c in cands:
        if c.profile not in seen:
            seen.add(c.profile)
            unique.append(c)

    targets = [mass_from_profile(c.profile).proper_mass / 2 for c in unique]
    work = [(c, t, cfg.prime_cap) for c, t in zip(unique, targets) if 2 * t <= B]
    records = _map(_traverse, work, jobs)

    res = EnumerationResult(n, B)
    for (cand, target, _), rec in zip(work, records):
        if not rec.certified or rec.accumulated_mass != target:
            raise CertificationError(f"genus of {cand.form} not certified: {rec.accumulated_mass} vs {target}")
        res.genera.append(rec)
        if rec.class_number > B:
            continue
        for g, a in zip(rec.representatives, rec.aut_orders):
            if content(g) != 1 or not is_maximal(g):
                raise CertificationError(f"{g} is not primitive maximal")
            res.entries.append(
                Entry(g, g.det_H, rec.class_number, rec.accumulated_mass, a, cand.profile.summary(), cand.provenance)
            )
    res.entries.sort(key=Entry.sort_key)
    res.genera.sort(key=lambda r: (r.representatives[0].det_H, r.representatives[0].coeffs))
    return res


def scan_ranks(cfg: RunConfig) -> list:
    if cfg.rank_max is not None:
        return list(range(cfg.rank_min, cfg.rank_max + 1))
    return list(range(cfg.rank_min, scan_horizon(cfg.bound)))


def run_full_scan(B, cfg: RunConfig | None = None) -> list:
    """Enumerations for every rank in range; in auto mode every rank below the
    certified horizon, beyond which no genus has Mass+ <= B."""
    cfg = cfg or RunConfig(bound=Fraction(B))
    out = []
    for n in scan_ranks(cfg):
        out.append(enumerate_maximal(n, B, cfg))
        log.info("rank %d: %d forms", n, len(out[-1]))
    return out


def scan_summary(results) -> str:
    """Per-rank counts as printed by ``qflat scan``."""
    lines = [f"rank {r.rank}: {len(r.entries)}" for r in results]
    lines.append(f"total: {sum(len(r.entries) for r in results)}")
    return "\n".join(lines) + "\n"


def verify_ternary_divisibility(res: EnumerationResult) -> bool:
    """All determinants supported on primes <= 23, and 23 occurs."""
    primes = set()
    for e in res.entries:
        primes |= set(factorint(e.det_H))
    return all(p <= 23 for p in primes) and 23 in primes


def _factor_str(fac) -> str:
    sup = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
    return "·".join(str(p) if e == 1 else f"{p}{str(e).translate(sup)}" for p, e in fac) or "1"


def _row(i, e: Entry) -> dict:
    return {
        "index": i,
        "form": e.form.polynomial(),
        "det_H": e.det_H,
        "det_factors": _factor_str(e.det_factorization),
        "class_number": e.class_number,
        "aut_order": e.aut_order,
        "mass": f"{e.mass.numerator}/{e.mass.denominator}",
    }


def render_table(res: EnumerationResult, fmt: str = "text") -> str:
    rows = [_row(i + 1, e) for i, e in enumerate(res.entries)]
    if fmt == "json":
        doc = {
            "rank": res.rank,
            "bound": str(res.bound_B),
            "entries": [
                dict(r, coeffs=e.form.to_json(), det_factorization=e.det_factorization,
                     profile=e.profile, provenance=e.provenance)
                for r, e in zip(rows, res.entries)
            ],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    cols = ["index", "form", "det_H", "det_factors", "class_number", "aut_order", "mass"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt}")
    head = ["#", "form", "det", "det factors", "h", "|Aut|", "mass"]
    table = [head] + [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(t[i]) for t in table) for i in range(len(head))]
    lines = [f"rank {res.rank}, class number <= {res.bound_B}: {len(rows)} forms"]
    for t in table:
        lines.append("  ".join(s.ljust(w) for s, w in zip(t, widths)).rstrip())
    return "\n".join(lines) + "\n"


def genus_records_json(res: EnumerationResult) -> list:
    return [r.to_json() for r in res.genera]

