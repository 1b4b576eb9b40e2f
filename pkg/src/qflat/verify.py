"""Named end-to-end checks shared by the CLI and the acceptance tests.

Each check returns a CheckResult; nothing here raises on a failed check.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from sympy import primerange

from qflat.arith import QuadraticCharacter, bernoulli, dirichlet_L_special, generalized_bernoulli, zeta_special
from qflat.genus import class_number
from qflat.lattice import (
    IntegralForm,
    automorphism_order,
    form_of_basis,
    is_isometric,
    local_profile,
    primitive_maximal,
    zvalued_lattice_in,
)
from qflat.mass import mass_from_profile
from qflat.pipeline import RunConfig, enumerate_maximal, render_table, run_full_scan, verify_ternary_divisibility
from qflat.space import RationalSpace

CLASS_NUMBER_ONE_COUNTS = {3: 64, 4: 20, 5: 12, 6: 10, 7: 5, 8: 2, 9: 1, 10: 1}
E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: {self.detail}"


def e8_form() -> IntegralForm:
    return IntegralForm.from_hessian(E8_GRAM)


def scan_counts(results) -> dict:
    return {r.rank: len(r.entries) for r in results}


def check_headline_counts(results) -> CheckResult:
    counts = {n: c for n, c in scan_counts(results).items() if c}
    total = sum(counts.values())
    ok = counts == CLASS_NUMBER_ONE_COUNTS and total == 115
    return CheckResult("headline counts", ok, f"{counts}, total {total}")


def check_ternary(results) -> CheckResult:
    res = next((r for r in results if r.rank == 3), None)
    ok = res is not None and verify_ternary_divisibility(res)
    return CheckResult("ternary divisibility", ok, "det_H primes <= 23 with 23 present" if ok else "violated")


def check_mass_certificates(results) -> CheckResult:
    bad, count = [], 0
    for r in results:
        for rec in r.genera:
            count += 1
            total = sum(Fraction(1, a) for a in rec.aut_orders)
            formula = mass_from_profile(local_profile(rec.representatives[0])).proper_mass / 2
            if total != formula or not rec.certified:
                bad.append((r.rank, str(rec.representatives[0])))
    return CheckResult("mass certificates", not bad and count > 0, f"{count} genera, {len(bad)} mismatches")


def check_spot_masses() -> CheckResult:
    three = mass_from_profile(local_profile(IntegralForm.diagonal([1, 1, 1]))).proper_mass
    e8 = e8_form()
    e8_mass = mass_from_profile(local_profile(e8)).proper_mass
    a3, a8 = automorphism_order(IntegralForm.diagonal([1, 1, 1])), automorphism_order(e8)
    ok = three == Fraction(1, 24) == Fraction(2, a3) and e8_mass == Fraction(2, 696729600) == Fraction(2, a8)
    return CheckResult("spot masses", ok, f"Mass+(x^2+y^2+z^2) = {three}, Mass+(E8) = {e8_mass}")


def check_ramanujan() -> CheckResult:
    h = class_number(IntegralForm.diagonal([1, 1, 10]))
    return CheckResult("class number of x^2+y^2+10z^2", h == 2, f"h = {h}")


def _staudt_denominator(k: int) -> int:
    out = 1
    for p in primerange(2, 2 * k + 2):
        if (2 * k) % (p - 1) == 0:
            out *= p
    return out


def check_special_values() -> list:
    out = []
    zs = {1: Fraction(-1, 12), 2: Fraction(1, 120), 3: Fraction(-1, 252)}
    got = {k: zeta_special(k) for k in zs}
    out.append(CheckResult("zeta(-1), zeta(-3), zeta(-5)", got == zs, str({f"zeta({1 - 2 * k})": str(v) for k, v in got.items()})))
    chi = QuadraticCharacter(-4)
    try:
        val = dirichlet_L_special(2, chi)
    except ValueError:
        val = -generalized_bernoulli(2, chi) / 2
    out.append(CheckResult("L(-1, chi_-4) = 1/2", val == Fraction(1, 2), f"computed {val}"))
    den = {k: bernoulli(2 * k).denominator for k in range(1, 16)}
    ok = all(den[k] == _staudt_denominator(k) for k in den)
    out.append(CheckResult("von Staudt-Clausen denominators, 2k <= 30", ok, "all match" if ok else str(den)))
    return out


def check_ternary_reproducible(jobs=(1, 2)) -> CheckResult:
    """Two rank-3 runs with different worker counts: identical tables, same classes."""
    a = enumerate_maximal(3, 1, RunConfig(jobs=jobs[0]))
    b = enumerate_maximal(3, 1, RunConfig(jobs=jobs[1]))
    same_text = render_table(a) == render_table(b)
    matched = all(
        sum(is_isometric(x.form, y.form) is not None for y in b.entries) == 1 for x in a.entries
    )
    ok = same_text and matched and len(a.entries) == len(b.entries) == 64
    return CheckResult("rank-3 reproducibility", ok, f"{len(a.entries)} vs {len(b.entries)} forms, identical output {same_text}")


def maximal_form_on(diagonal) -> IntegralForm:
    return form_of_basis(primitive_maximal(zvalued_lattice_in(RationalSpace(tuple(diagonal)))))


def run_battery(cfg: RunConfig | None = None, log=print) -> list:
    t = time.time()
    results = run_full_scan(1, cfg or RunConfig())
    log(f"scan finished in {time.time() - t:.0f}s")
    checks = [
        check_headline_counts(results),
        check_ternary(results),
        check_mass_certificates(results),
        check_spot_masses(),
        check_ramanujan(),
        *check_special_values(),
    ]
    for c in checks:
        log(c.line())
    return checks
