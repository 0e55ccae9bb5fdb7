"""Entanglement and noise analysis built on the family generating functions.

Exact quantities (concentratable entanglement, depolarizing fidelity, the
purity-criterion polynomial and its roots) are computed with rational
arithmetic end to end. Floating point enters only through polynomial root
finding and the residue/asymptotic evaluations, done in mpmath at a working
precision well beyond double.

Singularity analysis operates on the univariate specialisation of the
family generating function after cancelling its common univariate factor:
the cancelled factors are artifacts of the unreduced multivariate form, not
singularities of the function, and removing them is what makes the dominant
root genuinely dominant (and real-positive, as nonnegative series demand).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .algebra import UniPolyZ, uni_reduce, uni_specialize
from .family import SLD, sld_from_wep
from .transfer import (TransferSystem, family_gf, iter_weps, wep_by_iteration,
                       wep_values_by_iteration)

WORKING_DPS = 40

ROOT_CLUSTER_RTOL = 1e-8
MODULUS_TIE_RTOL = 1e-8
REAL_AXIS_RTOL = 1e-10


class AnalysisError(ValueError):
    """Base class for analysis-layer failures."""


class DegenerateSingularityError(AnalysisError):
    """Dominant singularity is not unique or not simple; the purely
    exponential asymptotic form does not apply."""

    def __init__(self, report: "SingularityReport", message: str):
        super().__init__(message)
        self.report = report


class ClusteredRootsError(AnalysisError):
    """Residue reconstruction hit (numerically) multiple roots."""


class NoThresholdError(AnalysisError):
    """The asymptotic entanglement criterion has no root in [0, 1]."""


def to_rational(value) -> Fraction:
    """Exact rational from int, Fraction, or decimal string; floats are
    interpreted through their decimal rendering."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    raise TypeError(f"cannot interpret {value!r} as a noise parameter")


def _mpf_from_fraction(value: Fraction) -> mp.mpf:
    return mp.mpf(value.numerator) / mp.mpf(value.denominator)


def _eval_mp(poly: UniPolyZ, z) -> mp.mpc:
    acc = mp.mpc(0)
    for c in reversed(poly.coeffs):
        acc = acc * z + _mpf_from_fraction(c)
    return acc


def _all_roots(q: UniPolyZ) -> list[mp.mpc]:
    """All complex roots: companion-matrix estimates polished by Newton."""
    # scale exactly before any float conversion so huge integer coefficients
    # cannot overflow a double
    scale = max(abs(c) for c in q.coeffs)
    coeffs_high_first = [float(c / scale) for c in reversed(q.coeffs)]
    estimates = np.roots(coeffs_high_first)
    dq = q.derivative()
    roots = []
    for est in estimates:
        z = mp.mpc(est)
        for _ in range(8):
            d = _eval_mp(dq, z)
            if abs(d) < mp.mpf("1e-30"):
                break
            step = _eval_mp(q, z) / d
            z = z - step
            if abs(step) < mp.mpf("1e-35") * max(1, abs(z)):
                break
        roots.append(z)
    roots.sort(key=lambda w: (mp.fabs(w), mp.re(w), mp.im(w)))
    return roots


@dataclass
class SingularityReport:
    """Dominant root of a denominator polynomial and its neighbourhood."""

    z_star: mp.mpc
    real_positive: bool
    multiplicity: int
    unique: bool
    modulus_gap: float
    all_roots: list

    def z_star_complex(self) -> complex:
        return complex(self.z_star)


def dominant_singularity(q: UniPolyZ) -> SingularityReport:
    """Locate the smallest-modulus root of q and judge its uniqueness.

    Ties in modulus and multiplicities are reported, not resolved: callers
    that need a unique simple dominant root must check the report.
    """
    if q.is_zero():
        raise AnalysisError("zero polynomial has no singularities")
    if q.coeffs[0] == 0:
        raise AnalysisError("q(0) = 0: series expansion point is singular")
    if q.degree() == 0:
        raise AnalysisError("constant denominator has no singularities")
    with mp.workdps(WORKING_DPS):
        roots = _all_roots(q)
    min_mod = min(mp.fabs(r) for r in roots)
    near = [r for r in roots
            if mp.fabs(r) <= min_mod * (1 + MODULUS_TIE_RTOL)]
    real_positive_candidates = [
        r for r in near
        if abs(mp.im(r)) <= REAL_AXIS_RTOL * max(1, mp.fabs(r)) and mp.re(r) > 0]
    z_star = real_positive_candidates[0] if real_positive_candidates else near[0]
    cluster = [r for r in roots
               if mp.fabs(r - z_star) <= ROOT_CLUSTER_RTOL * max(1, mp.fabs(z_star))]
    outside = [r for r in roots
               if mp.fabs(r - z_star) > ROOT_CLUSTER_RTOL * max(1, mp.fabs(z_star))]
    if outside:
        second = min(mp.fabs(r) for r in outside)
        gap = float(second / min_mod)
    else:
        gap = math.inf
    real_positive = bool(
        abs(mp.im(z_star)) <= REAL_AXIS_RTOL * max(1, mp.fabs(z_star))
        and mp.re(z_star) > 0)
    return SingularityReport(
        z_star=z_star, real_positive=real_positive,
        multiplicity=len(cluster), unique=gap > 1 + MODULUS_TIE_RTOL,
        modulus_gap=gap, all_roots=roots)


def _reduced_specialisation(sys: TransferSystem, x0: Fraction,
                            y0: Fraction) -> tuple[UniPolyZ, UniPolyZ]:
    gf = family_gf(sys)
    p, q = uni_specialize(gf, x0, y0)
    return uni_reduce(p, q)


# -- concentratable entanglement ---------------------------------------------


def concentratable_entanglement(sys: TransferSystem,
                                r: int) -> tuple[Fraction, Fraction]:
    """(complement, value) of the concentratable entanglement of member r.

    The complement is the exact evaluation of the member's weight enumerator
    at (3/4, 1/4); the entanglement itself is one minus that.
    """
    wep = wep_by_iteration(sys, r)
    cbar = wep.eval_xy(Fraction(3, 4), Fraction(1, 4))
    return cbar, 1 - cbar


@dataclass
class CEClosedFormReport:
    """Residue reconstruction of the concentratable-entanglement sequence."""

    r_max: int
    tol: float
    roots: list
    poly_part: list
    max_abs_error: float
    ok: bool


def ce_closed_form_check(sys: TransferSystem, r_max: int,
                         tol: float = 1e-10) -> CEClosedFormReport:
    """Rebuild the exact entanglement complements from denominator roots.

    Splits the reduced specialisation at (3/4, 1/4) into a polynomial part
    plus a proper fraction, turns the fraction into a sum of residue terms
    c_i * z_i^(-r), and confirms agreement with the exact values.
    """
    with mp.workdps(WORKING_DPS):
        p, q = _reduced_specialisation(sys, Fraction(3, 4), Fraction(1, 4))
        poly_part, rem = p.divmod(q)
        roots = _all_roots(q)
        for i, a in enumerate(roots):
            for b in roots[i + 1:]:
                if mp.fabs(a - b) <= ROOT_CLUSTER_RTOL * max(1, mp.fabs(a)):
                    raise ClusteredRootsError(
                        "denominator roots cluster; residue form is ambiguous")
        dq = q.derivative()
        residues = [-_eval_mp(rem, z) / _eval_mp(dq, z) for z in roots]
        exact = wep_values_by_iteration(sys, Fraction(3, 4), Fraction(1, 4),
                                        r_max)
        max_err = 0.0
        for r in range(r_max + 1):
            recon = mp.mpc(0)
            for z, c in zip(roots, residues):
                recon += c * z ** (-r - 1)
            if r < len(poly_part.coeffs):
                recon += _mpf_from_fraction(poly_part.coeffs[r])
            err = abs(recon - _mpf_from_fraction(exact[r]))
            max_err = max(max_err, float(err))
        return CEClosedFormReport(
            r_max=r_max, tol=tol,
            roots=[complex(z) for z in roots],
            poly_part=[str(c) for c in poly_part.coeffs],
            max_abs_error=max_err, ok=max_err <= tol)


# -- fidelity under uniform depolarizing noise --------------------------------


def fidelity_exact(sys: TransferSystem, lam, r: int) -> Fraction:
    """Exact fidelity of member r under depolarizing noise strength lam:
    the member's weight enumerator evaluated at (1/2, lam/2)."""
    lam = to_rational(lam)
    if not 0 <= lam <= 1:
        raise AnalysisError("noise parameter must lie in [0, 1]")
    return wep_values_by_iteration(sys, Fraction(1, 2), lam / 2, r)[r]


def fidelity_sweep(sys: TransferSystem, lam, r_max: int) -> list[Fraction]:
    """Exact fidelities of members 0..r_max (one specialised iteration)."""
    lam = to_rational(lam)
    if not 0 <= lam <= 1:
        raise AnalysisError("noise parameter must lie in [0, 1]")
    return wep_values_by_iteration(sys, Fraction(1, 2), lam / 2, r_max)


def fidelity_asymptotic(sys: TransferSystem, lam, r: int) -> mp.mpf:
    """Leading-singularity approximation of the fidelity of member r.

    Requires the reduced specialised denominator to have a unique simple
    dominant root z*; the value is -p(z*)/q'(z*) * z*^(-r-1).
    """
    lam = to_rational(lam)
    with mp.workdps(WORKING_DPS):
        p, q = _reduced_specialisation(sys, Fraction(1, 2), lam / 2)
        report = dominant_singularity(q)
        if not report.unique or report.multiplicity != 1:
            raise DegenerateSingularityError(
                report, "dominant singularity is not unique and simple")
        z = report.z_star
        pval = _eval_mp(p, z)
        if abs(pval) <= mp.mpf("1e-25") * max(1, abs(z)):
            raise DegenerateSingularityError(
                report, "numerator vanishes at the dominant singularity")
        value = -pval / _eval_mp(q.derivative(), z) * z ** (-r - 1)
        return mp.re(value)


def coefficient_asymptotic(p: UniPolyZ, q: UniPolyZ, r: int,
                           trust_multiplicity: bool = False) -> mp.mpf:
    """General asymptotic coefficient of p/q with an m-fold dominant root:
    (-1)^m * m * p(z*) / q^(m)(z*) * r^(m-1) * z*^(-r-m).

    For m > 1 the numerically clustered multiplicity must be trusted
    explicitly; by default only the simple case runs.
    """
    with mp.workdps(WORKING_DPS):
        report = dominant_singularity(q)
        m = report.multiplicity
        if m > 1 and not trust_multiplicity:
            raise DegenerateSingularityError(
                report, "multiple dominant root; pass trust_multiplicity=True "
                        "to apply the general formula")
        z = report.z_star
        dq = q
        for _ in range(m):
            dq = dq.derivative()
        value = ((-1) ** m * m * _eval_mp(p, z) / _eval_mp(dq, z)
                 * mp.mpf(r) ** (m - 1) * z ** (-r - m))
        return mp.re(value)


# -- purity-based entanglement criterion --------------------------------------


def criterion_q(sys: TransferSystem, lam,
                r: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact (Q1, Q2, Q1 - Q2) of member r at noise strength lam.

    Q1 = sum_k (n-k) lam^(2k) A_k and Q2 = sum_k k lam^(2k) A_k; the state
    is certified entangled when the difference is negative.
    """
    lam = to_rational(lam)
    if not 0 <= lam <= 1:
        raise AnalysisError("noise parameter must lie in [0, 1]")
    sld = sld_from_wep(wep_by_iteration(sys, r))
    mu = lam * lam
    n = sld.n
    power = Fraction(1)
    q1 = Fraction(0)
    q2 = Fraction(0)
    for k, a in enumerate(sld):
        if a:
            q1 += (n - k) * a * power
            q2 += k * a * power
        power *= mu
    return q1, q2, q1 - q2


def _criterion_poly(sld: SLD) -> list[int]:
    """Integer coefficients of Q as a polynomial in mu = lam^2."""
    n = sld.n
    return [(n - 2 * k) * a for k, a in enumerate(sld)]


def _poly_sign_at(coeffs: list[int], mu: Fraction) -> int:
    """Exact sign of an integer polynomial at mu, in pure integers:
    evaluates b^deg * P(a/b) by Horner."""
    a, b = mu.numerator, mu.denominator
    value = coeffs[-1]
    b_power = 1
    for c in reversed(coeffs[:-1]):
        b_power *= b
        value = value * a + c * b_power
    return (value > 0) - (value < 0)


def _critical_lambda_from_sld(sld: SLD, tol: float) -> float | None:
    if tol <= 0:
        raise AnalysisError("tolerance must be positive")
    coeffs = _criterion_poly(sld)
    if _poly_sign_at(coeffs, Fraction(1)) >= 0:
        return None
    grid = 1024
    lo = None
    for k in range(grid - 1, -1, -1):
        mu = Fraction(k, grid)
        if _poly_sign_at(coeffs, mu) >= 0:
            lo, hi = mu, Fraction(k + 1, grid)
            break
    if lo is None:  # Q(0) = n > 0, so a sign change always exists
        raise AnalysisError("criterion sign change not found")
    for _ in range(200):
        if math.sqrt(hi) - math.sqrt(lo) < tol:
            break
        mid = (lo + hi) / 2
        if _poly_sign_at(coeffs, mid) < 0:
            hi = mid
        else:
            lo = mid
    return math.sqrt((lo + hi) / 2)


def critical_lambda(sys: TransferSystem, r: int,
                    tol: float = 1e-10) -> float | None:
    """Largest noise strength at which member r's criterion changes sign.

    Returns sqrt(mu_c) where mu_c is found by scanning mu downward from 1
    and bisecting the first sign change; None when the criterion is not
    negative at lam = 1 (the member is never certified entangled).
    """
    if r < 1:
        raise AnalysisError("criterion thresholds need a member with qubits")
    return _critical_lambda_from_sld(sld_from_wep(wep_by_iteration(sys, r)),
                                     tol)


def critical_lambda_sweep(sys: TransferSystem, r_values,
                          tol: float = 1e-10) -> list[tuple[int, float | None]]:
    """Critical noise strengths for several members in one iteration pass."""
    wanted = sorted(set(r_values))
    if not wanted:
        return []
    if wanted[0] < 1:
        raise AnalysisError("criterion thresholds need a member with qubits")
    wanted_set = set(wanted)
    out = []
    for r, wep in enumerate(iter_weps(sys, wanted[-1])):
        if r in wanted_set:
            out.append((r, _critical_lambda_from_sld(sld_from_wep(wep), tol)))
    return out


def criterion_asymptotic_ratio(sys: TransferSystem, lam: Fraction) -> mp.mpf:
    """Large-member limit of Q1/Q2 at noise strength lam.

    Evaluated as dq/dx over lam^2 * dq/dy at (1, lam^2, z*), with z* the
    dominant root of the reduced specialised denominator; the numerator
    factors cancel against the denominator at any genuine simple pole.
    """
    gf = family_gf(sys)
    mu = lam * lam
    with mp.workdps(WORKING_DPS):
        p, q = uni_specialize(gf, Fraction(1), mu)
        pr, qr = uni_reduce(p, q)
        report = dominant_singularity(qr)
        if not report.unique or report.multiplicity != 1:
            raise DegenerateSingularityError(
                report, f"degenerate dominant singularity at lam = {lam}")
        z = report.z_star

        def univariate(poly3) -> UniPolyZ:
            spec = poly3.substitute("x", Fraction(1)).substitute("y", mu)
            coeffs = [Fraction(0)] * (spec.max_degree_z() + 1)
            for (_, _, ez), c in spec.terms.items():
                coeffs[ez] += c
            return UniPolyZ(coeffs)

        qx = univariate(gf.den.partial("x"))
        qy = univariate(gf.den.partial("y"))
        num = _eval_mp(qx, z)
        den = _eval_mp(qy, z)
        if abs(den) <= mp.mpf("1e-25") * max(1, abs(num)):
            raise DegenerateSingularityError(
                report, f"criterion ratio is indeterminate at lam = {lam}")
        return mp.re(num / (_mpf_from_fraction(mu) * den))


def critical_lambda_asymptotic(sys: TransferSystem,
                               tol: float = 1e-10) -> float:
    """Member-independent limit of the critical noise strength.

    Bisects the crossing of the asymptotic criterion ratio through 1 on a
    bracketing interval found by a grid scan of (0, 1). When the ratio
    approaches 1 only at the right boundary (it stays above 1 inside, as for
    star-like families), the threshold sits at the boundary and 1.0 is
    returned.
    """
    with mp.workdps(WORKING_DPS):
        def h(lam: Fraction) -> mp.mpf:
            return criterion_asymptotic_ratio(sys, lam) - 1

        grid = 64
        bracket = None
        previous = None
        for k in range(1, grid):
            lam = Fraction(k, grid)
            try:
                value = h(lam)
            except DegenerateSingularityError:
                previous = None
                continue
            if previous is not None and mp.sign(value) != mp.sign(previous[1]):
                bracket = (previous[0], lam)
                break
            previous = (lam, value)
        if bracket is None:
            edge = Fraction(1) - Fraction(1, 1 << 20)
            try:
                edge_value = h(edge)
            except DegenerateSingularityError:
                edge_value = None
            if edge_value is not None and abs(edge_value) < 1e-3:
                return 1.0
            raise NoThresholdError(
                "asymptotic criterion ratio has no sign change in [0, 1]")
        lo, hi = bracket
        sign_lo = mp.sign(h(lo))
        for _ in range(200):
            if float(hi - lo) < tol:
                break
            mid = (lo + hi) / 2
            if mp.sign(h(mid)) == sign_lo:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


@dataclass
class CriterionResult:
    """Per-member critical noise strengths and the asymptotic threshold.

    ``q_data`` optionally carries the integer criterion-polynomial
    coefficients (in mu = lam^2) per member.
    """

    family: str
    entries: list[tuple[int, float | None]]
    lambda_c_approx: float | None
    q_data: list[tuple[int, list[int]]] | None = None


def criterion_sweep(sys: TransferSystem, r_values, tol: float = 1e-10,
                    include_asymptotic: bool = True,
                    include_q_data: bool = False) -> CriterionResult:
    """Critical noise strengths for a list of member indices."""
    entries = critical_lambda_sweep(sys, r_values, tol)
    q_data = None
    if include_q_data:
        wanted = {r for r, _ in entries}
        q_data = [(r, _criterion_poly(sld_from_wep(wep)))
                  for r, wep in enumerate(iter_weps(sys, max(wanted)))
                  if r in wanted]
    approx = None
    if include_asymptotic:
        approx = critical_lambda_asymptotic(sys, tol)
    return CriterionResult(family=sys.spec.name, entries=entries,
                           lambda_c_approx=approx, q_data=q_data)
