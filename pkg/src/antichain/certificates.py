"""Linear-independence certificates for extremal set families.

Each construction attaches one multilinear polynomial to every family
member, then augments the system with extra polynomials: fillers indexed
by small sets, and monomials indexed by the non-shadows of the family
(the k-sets contained in no member).  Independence of the whole system
bounds the family size by a dimension count.

Every certificate is verified two ways: the triangular evaluation
criterion (the proof's argument) and an exact rank computation (ground
truth).  Both must agree; a failure on valid input is an implementation
alarm, not a property of the family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from .bounds import binom, binom_sum
from .multilinear import (
    LinearForm,
    Poly,
    mixed_form_product,
    monomial,
    product_reduced,
    system_rank,
    verify_triangular,
)
from .setfam import (
    Family,
    IntersectionSpec,
    SetWord,
    family_rank,
    is_l_intersecting,
    is_sperner,
    max_setwise_diff,
    non_shadow_masks,
    shadow,
    symmetric_diameter,
)


class PreconditionError(ValueError):
    """A certificate's hypothesis does not hold for the given family."""

    def __init__(self, hypothesis: str, message: str):
        super().__init__(message)
        self.hypothesis = hypothesis


class CertificateInternalError(RuntimeError):
    """A check failed on valid input; the construction itself is broken."""

    def __init__(self, message: str, report: Optional["CertificateReport"] = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class NonShadowSet:
    """The k-sets contained in no family member, canonically ordered."""

    k: int
    members: tuple[SetWord, ...]

    @classmethod
    def compute(cls, fam: Family, k: int) -> "NonShadowSet":
        words = tuple(SetWord(m, fam.n) for m in non_shadow_masks(fam, k))
        return cls(k, words)

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class CertificateReport:
    system_name: str
    n: int
    member_count: int
    filler_count: int
    non_shadow_count: int
    degree_cap: int
    triangular_ok: bool
    rank_ok: bool
    rank: int
    implied_bound: int
    witnessed_inequality: str
    notes: dict = field(default_factory=dict)
    polys: list = field(default_factory=list, repr=False)
    points: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.triangular_ok and self.rank_ok

    def to_obj(self, include_polys: bool = False) -> dict:
        obj = {
            "system": self.system_name,
            "n": self.n,
            "members": self.member_count,
            "fillers": self.filler_count,
            "non_shadows": self.non_shadow_count,
            "degree_cap": self.degree_cap,
            "triangular_ok": self.triangular_ok,
            "rank_ok": self.rank_ok,
            "rank": self.rank,
            "implied_bound": self.implied_bound,
            "witnessed_inequality": self.witnessed_inequality,
            "notes": dict(self.notes),
        }
        if include_polys:
            obj["polys"] = [p.to_obj() for p in self.polys]
            obj["points"] = [list(pt.elements()) for pt in self.points]
        return obj


def _require(condition: bool, hypothesis: str, message: str):
    if not condition:
        raise PreconditionError(hypothesis, message)


def _finish(report: CertificateReport, polys, points, diag_expected) -> CertificateReport:
    """Run both independence checks and the diagonal-value audit."""
    report.polys = list(polys)
    report.points = list(points)
    for p, pt, want in zip(polys, points, diag_expected):
        got = p.evaluate(pt)
        if got != want:
            raise CertificateInternalError(
                f"{report.system_name}: diagonal value {got} at {pt!r}, expected {want}",
                report,
            )
    report.triangular_ok = verify_triangular(polys, points)
    report.rank = system_rank(polys, report.degree_cap)
    report.rank_ok = report.rank == len(polys)
    if not (report.triangular_ok and report.rank_ok):
        raise CertificateInternalError(
            f"{report.system_name}: independence check failed on valid input "
            f"(triangular={report.triangular_ok}, rank={report.rank}/{len(polys)})",
            report,
        )
    return report


def katona_certificate(fam: Family, k: int) -> CertificateReport:
    """Shadow-size certificate for an intersecting (k+1)-uniform family.

    Member i gets the reduced product of (x . b_i - j), j = 1..k, where
    b_i indicates the complement of the member.  Fillers (x . 1 - k - 1)
    times a small monomial run over all sets of size < k, and every
    non-shadow k-set contributes its monomial.  Independence forces
    |F| <= |shadow_k(F)|.
    """
    n = fam.n
    _require(len(fam) > 0, "nonempty-family", "certificate needs at least one member")
    _require(0 <= k < n, "uniformity-range", f"need 0 <= k < n, got k={k}, n={n}")
    _require(
        all(len(w) == k + 1 for w in fam.members),
        "uniform",
        f"family is not {k + 1}-uniform",
    )
    masks = fam.masks()
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            _require(bool(a & b), "intersecting", "family has two disjoint members")

    full = (1 << n) - 1
    polys: list[Poly] = []
    points: list[SetWord] = []
    diag: list[Fraction] = []

    for w in fam.members:
        comp = SetWord(full & ~w.bits, n)
        forms = [LinearForm(comp, j) for j in range(1, k + 1)]
        polys.append(product_reduced(forms, n=n))
        points.append(w)
        diag.append(Fraction((-1) ** k * factorial(k)))

    ones = SetWord(full, n)
    filler_sets = [
        SetWord(m, n)
        for size in range(k)
        for m in sorted(x for x in range(1 << n) if x.bit_count() == size)
    ]
    for s in filler_sets:
        polys.append(Poly.from_linear_form(LinearForm(ones, k + 1)) * monomial(s))
        points.append(s)
        diag.append(Fraction(len(s) - k - 1))

    non_shadows = NonShadowSet.compute(fam, k)
    for t in non_shadows.members:
        polys.append(monomial(t))
        points.append(t)
        diag.append(Fraction(1))

    m, r, h = len(fam), len(filler_sets), len(non_shadows)
    dim = binom_sum(n, 0, k)
    shadow_size = len(shadow(fam, k))
    if r != binom_sum(n, 0, k - 1) or h != binom(n, k) - shadow_size:
        raise CertificateInternalError("katona: group size bookkeeping is off")
    if m + r + h > dim:
        raise CertificateInternalError(
            f"katona: {m}+{r}+{h} polynomials exceed the degree-{k} dimension {dim}"
        )
    report = CertificateReport(
        system_name="katona",
        n=n,
        member_count=m,
        filler_count=r,
        non_shadow_count=h,
        degree_cap=k,
        triangular_ok=False,
        rank_ok=False,
        rank=0,
        implied_bound=dim - r - h,
        witnessed_inequality=f"|F| = {m} <= {shadow_size} = |shadow_{k}(F)|",
        notes={"shadow_size": shadow_size, "space_dim": dim},
    )
    if report.implied_bound != shadow_size:
        raise CertificateInternalError("katona: implied bound is not the shadow size", report)
    return _finish(report, polys, points, diag)


def symmetric_certificate(fam: Family, k: int) -> CertificateReport:
    """Certificate for even-sized families of symmetric-difference diameter 2k.

    Member i gets the reduced product over l = 1..k of
    x . b_i + (1 - x) . a_i - 2l, which evaluates at a 0/1 point P to the
    product of (|P ^ F_i| - 2l); non-shadow k-sets contribute monomials.
    """
    n = fam.n
    _require(len(fam) > 0, "nonempty-family", "certificate needs at least one member")
    _require(k >= 0, "radius-range", f"need k >= 0, got {k}")
    _require(
        all(len(w) % 2 == 0 for w in fam.members),
        "even-sized-members",
        "family has an odd-sized member (translate first)",
    )
    _require(
        symmetric_diameter(fam) <= 2 * k,
        "pairwise-symmetric-difference",
        f"pairwise symmetric difference exceeds {2 * k}",
    )

    full = (1 << n) - 1
    polys: list[Poly] = []
    points: list[SetWord] = []
    diag: list[Fraction] = []
    shifts = [2 * ell for ell in range(1, k + 1)]
    for w in fam.members:
        comp = SetWord(full & ~w.bits, n)
        polys.append(mixed_form_product(w, comp, shifts))
        points.append(w)
        diag.append(Fraction((-2) ** k * factorial(k)))

    non_shadows = NonShadowSet.compute(fam, k)
    for t in non_shadows.members:
        polys.append(monomial(t))
        points.append(t)
        diag.append(Fraction(1))

    m, h = len(fam), len(non_shadows)
    dim = binom_sum(n, 0, k)
    shadow_size = len(shadow(fam, k))
    if h + shadow_size != binom(n, k):
        raise CertificateInternalError("symmetric: non-shadow count bookkeeping is off")
    report = CertificateReport(
        system_name="symmetric",
        n=n,
        member_count=m,
        filler_count=0,
        non_shadow_count=h,
        degree_cap=k,
        triangular_ok=False,
        rank_ok=False,
        rank=0,
        implied_bound=dim - h,
        witnessed_inequality=f"|F| = {m} <= {dim - h} = sum_(i<={k}) C({n},i) - {h}",
        notes={"shadow_size": shadow_size, "space_dim": dim},
    )
    return _finish(report, polys, points, diag)


def setwise_certificate(fam: Family, k: int) -> CertificateReport:
    """Certificate for families with all set-wise differences at most k.

    Members are processed in non-increasing size order (re-sorted here if
    needed); member i gets the reduced product of (x . b_i - j), j = 1..k,
    and non-shadow k-sets contribute monomials.
    """
    n = fam.n
    _require(len(fam) > 0, "nonempty-family", "certificate needs at least one member")
    _require(k >= 0, "difference-range", f"need k >= 0, got {k}")
    _require(
        max_setwise_diff(fam) <= k,
        "pairwise-setwise-difference",
        f"some |A \\ B| exceeds {k}",
    )
    ordered = sorted(fam.members, key=lambda w: -len(w))
    fam = Family(n, tuple(ordered))

    full = (1 << n) - 1
    polys: list[Poly] = []
    points: list[SetWord] = []
    diag: list[Fraction] = []
    for w in fam.members:
        comp = SetWord(full & ~w.bits, n)
        forms = [LinearForm(comp, j) for j in range(1, k + 1)]
        polys.append(product_reduced(forms, n=n))
        points.append(w)
        diag.append(Fraction((-1) ** k * factorial(k)))

    non_shadows = NonShadowSet.compute(fam, k)
    for t in non_shadows.members:
        polys.append(monomial(t))
        points.append(t)
        diag.append(Fraction(1))

    m, h = len(fam), len(non_shadows)
    dim = binom_sum(n, 0, k)
    shadow_size = len(shadow(fam, k))
    if h + shadow_size != binom(n, k):
        raise CertificateInternalError("setwise: non-shadow count bookkeeping is off")
    report = CertificateReport(
        system_name="setwise",
        n=n,
        member_count=m,
        filler_count=0,
        non_shadow_count=h,
        degree_cap=k,
        triangular_ok=False,
        rank_ok=False,
        rank=0,
        implied_bound=dim - h,
        witnessed_inequality=f"|F| = {m} <= {dim - h} = sum_(i<={k}) C({n},i) - {h}",
        notes={"shadow_size": shadow_size, "space_dim": dim},
    )
    return _finish(report, polys, points, diag)


def snevily_certificate(fam: Family, spec: IntersectionSpec) -> CertificateReport:
    """Certificate for intersection-size-restricted Sperner families.

    Member i gets the reduced product over allowed sizes l != |F_i| of
    (x . a_i - l), with variable 1 then pinned to 1, so the system lives
    in the remaining n - 1 variables.  Members containing element 1 are
    processed first; evaluation at a point P uses P together with element
    1 (the pinning makes the polynomial blind to whether 1 is present).
    """
    n = fam.n
    _require(len(fam) > 0, "nonempty-family", "certificate needs at least one member")
    _require(is_sperner(fam), "Sperner", "family has a member containing another")
    _require(
        is_l_intersecting(fam, spec),
        "L-intersecting",
        f"some pairwise intersection size is outside {list(spec.values)}",
    )
    with_one = [w for w in fam.members if 1 in w]
    without_one = [w for w in fam.members if 1 not in w]
    fam = Family(n, tuple(with_one + without_one))

    s = len(spec)
    polys: list[Poly] = []
    points: list[SetWord] = []
    diag: list[Fraction] = []
    for w in fam.members:
        size = len(w)
        forms = [LinearForm(w, ell) for ell in spec.values if ell != size]
        poly = product_reduced(forms, n=n).substitute_one(1)
        polys.append(poly)
        points.append(SetWord(w.bits | 1, n))
        expected = Fraction(1)
        for ell in spec.values:
            if ell != size:
                expected *= size - ell
        diag.append(expected)

    m = len(fam)
    implied = binom_sum(n - 1, 0, s)
    report = CertificateReport(
        system_name="snevily",
        n=n,
        member_count=m,
        filler_count=0,
        non_shadow_count=0,
        degree_cap=s,
        triangular_ok=False,
        rank_ok=False,
        rank=0,
        implied_bound=implied,
        witnessed_inequality=f"|F| = {m} <= {implied} = sum_(i<={s}) C({n - 1},i)",
        notes={"allowed_sizes": list(spec.values), "variables": max(n - 1, 1)},
    )
    if m > implied:
        raise CertificateInternalError(
            f"snevily: {m} members exceed the dimension bound {implied}", report
        )
    return _finish(report, polys, points, diag)


BUILDERS = {
    "katona": katona_certificate,
    "symmetric": symmetric_certificate,
    "setwise": setwise_certificate,
    "snevily": snevily_certificate,
}


# --------------------------------------------------------------------------
# structural claim scans
# --------------------------------------------------------------------------

@dataclass
class ClaimScan:
    name: str
    applicable: bool
    reason: str = ""
    tuples_checked: int = 0
    violations: list = field(default_factory=list)

    def to_obj(self) -> dict:
        return {
            "claim": self.name,
            "applicable": self.applicable,
            "reason": self.reason,
            "tuples_checked": self.tuples_checked,
            "violations": list(self.violations),
        }


@dataclass
class SectionReport:
    name: str
    preconditions_ok: bool
    failed_preconditions: list
    claims: list

    def violation_count(self) -> int:
        return sum(len(c.violations) for c in self.claims)

    def to_obj(self) -> dict:
        return {
            "section": self.name,
            "preconditions_ok": self.preconditions_ok,
            "failed_preconditions": list(self.failed_preconditions),
            "claims": [c.to_obj() for c in self.claims],
        }


@dataclass
class StructureReport:
    n: int
    k: int
    sections: list

    @property
    def total_violations(self) -> int:
        return sum(s.violation_count() for s in self.sections)

    @property
    def zero_violations(self) -> bool:
        return self.total_violations == 0

    def section(self, name: str) -> SectionReport:
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_obj(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "total_violations": self.total_violations,
            "sections": [s.to_obj() for s in self.sections],
        }


def _els(w: SetWord) -> list[int]:
    return list(w.elements())


def _scan_symmetric(fam: Family, k: int) -> SectionReport:
    failed = []
    diam = symmetric_diameter(fam)
    if diam > 2 * k + 1:
        failed.append(f"pairwise symmetric difference {diam} exceeds {2 * k + 1}")
    if failed:
        return SectionReport("symmetric-difference", False, failed, [])

    even = [w for w in fam.members if len(w) % 2 == 0]
    claims = []

    # Even members at set-wise distance exactly k below a maximum even
    # member must match it in size and in both one-sided differences.
    balance = ClaimScan("max-even-pair-balance", True)
    if even:
        top = max(len(w) for w in even)
        for x in even:
            if len(x) != top:
                continue
            for e in even:
                if e.bits == x.bits:
                    continue
                if len(e - x) == k:
                    balance.tuples_checked += 1
                    if not (len(x - e) == k and len(x) == len(e)):
                        balance.violations.append(
                            {
                                "max_member": _els(x),
                                "other": _els(e),
                                "detail": f"|X\\E|={len(x - e)}, |X|={len(x)}, |E|={len(e)}",
                            }
                        )
    claims.append(balance)

    # When almost every k-set is a shadow of the even part, the overlap of
    # a maximum even member with any member k away is a center: the whole
    # family stays within symmetric difference k+1 of it.
    core = ClaimScan("core-within-radius", True)
    if not even:
        core.applicable = False
        core.reason = "no even-sized members"
    else:
        rank = family_rank(fam)
        even_fam = Family(fam.n, tuple(even))
        s_count = len(non_shadow_masks(even_fam, k))
        threshold = binom(fam.n - 5 * k - 1, k)
        if rank > 2 * k + 1:
            core.applicable = False
            core.reason = f"rank {rank} exceeds {2 * k + 1} (family not normalized)"
        elif s_count >= threshold:
            core.applicable = False
            core.reason = f"non-shadow count {s_count} not below C(n-5k-1,k)={threshold}"
        else:
            top = max(len(w) for w in even)
            for x in even:
                if len(x) != top:
                    continue
                for e in even:
                    if e.bits == x.bits or len(e - x) != k:
                        continue
                    a = x & e
                    for f in fam.members:
                        core.tuples_checked += 1
                        if len(f ^ a) > k + 1:
                            core.violations.append(
                                {
                                    "max_member": _els(x),
                                    "partner": _els(e),
                                    "member": _els(f),
                                    "detail": f"|F^A| = {len(f ^ a)} > {k + 1}",
                                }
                            )
    claims.append(core)
    return SectionReport("symmetric-difference", True, [], claims)


def _scan_setwise(fam: Family, k: int) -> SectionReport:
    failed = []
    diff = max_setwise_diff(fam)
    t = family_rank(fam)
    if diff > k:
        failed.append(f"pairwise set-wise difference {diff} exceeds {k}")
    if t <= k:
        failed.append(f"rank {t} not above k={k}")
    if 2 * t > k + fam.n:
        failed.append(f"rank {t} above (k+n)/2 (complement the family first)")
    if failed:
        return SectionReport("setwise-difference", False, failed, [])

    claims = []

    # A member k below a maximum-size member must itself have maximum size,
    # with the difference balanced in both directions.
    balance = ClaimScan("rank-pair-balance", True)
    for x in fam.members:
        if len(x) != t:
            continue
        for e in fam.members:
            if e.bits == x.bits:
                continue
            if len(e - x) == k:
                balance.tuples_checked += 1
                if not (len(e) == t and len(x - e) == k):
                    balance.violations.append(
                        {
                            "max_member": _els(x),
                            "other": _els(e),
                            "detail": f"|E|={len(e)}, |X\\E|={len(x - e)}",
                        }
                    )
    claims.append(balance)

    # When almost every k-set is a shadow, all members lying exactly k
    # outside a maximum member cut it in the same (t-k)-set.
    shared = ClaimScan("shared-core-at-max-difference", True)
    s_count = len(non_shadow_masks(fam, k))
    threshold = binom(fam.n - t - 2 * k, k)
    if s_count >= threshold:
        shared.applicable = False
        shared.reason = f"non-shadow count {s_count} not below C(n-t-2k,k)={threshold}"
    else:
        for x in fam.members:
            if len(x) != t:
                continue
            partners = [f for f in fam.members if f.bits != x.bits and len(f - x) == k]
            for i, f1 in enumerate(partners):
                for f2 in partners[i + 1:]:
                    shared.tuples_checked += 1
                    if (f1 & x).bits != (f2 & x).bits:
                        shared.violations.append(
                            {
                                "max_member": _els(x),
                                "first": _els(f1),
                                "second": _els(f2),
                                "detail": "intersections with the maximum member differ",
                            }
                        )
    claims.append(shared)
    return SectionReport("setwise-difference", True, [], claims)


def check_claim_structures(fam: Family, k: int) -> StructureReport:
    """Scan the structural facts used by the stability arguments.

    Each claim is checked on every tuple of members satisfying its
    hypothesis; a tuple where the conclusion fails is reported.  When an
    ambient precondition does not hold the section is flagged instead of
    scanned.
    """
    if len(fam) == 0:
        raise PreconditionError("nonempty-family", "claim scan needs at least one member")
    return StructureReport(
        n=fam.n,
        k=k,
        sections=[_scan_symmetric(fam, k), _scan_setwise(fam, k)],
    )
