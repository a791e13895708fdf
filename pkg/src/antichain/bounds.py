"""Closed-form extremal bounds, evaluated in exact integer arithmetic.

Binomials outside their natural range evaluate to 0 rather than raising,
so every formula stays defined (and the statements vacuously true) at
small n; only a violated stated precondition raises RangeError.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .setfam import Family


class RangeError(ValueError):
    """Parameters outside the stated range of a bound."""


@dataclass(frozen=True)
class BoundValue:
    name: str
    parameters: dict = field(compare=False)
    value: int = 0

    def to_obj(self) -> dict:
        return {"name": self.name, "parameters": dict(self.parameters), "value": self.value}


def binom(n: int, k: int) -> int:
    """C(n, k) with the zero convention for n < 0, k < 0 or k > n."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def binom_sum(n: int, lo: int, hi: int) -> int:
    """Sum of C(n, i) for lo <= i <= hi (empty or out-of-range terms are 0)."""
    if hi < lo:
        return 0
    return sum(binom(n, i) for i in range(max(lo, 0), hi + 1))


def kleitman_bound(n: int, d: int) -> BoundValue:
    """Largest family with all pairwise symmetric differences at most d."""
    if not n > d >= 0:
        raise RangeError(f"need n > d >= 0, got n={n}, d={d}")
    k = d // 2
    if d % 2 == 0:
        value = binom_sum(n, 0, k)
    else:
        value = 2 * binom_sum(n - 1, 0, k)
    return BoundValue("kleitman", {"n": n, "d": d}, value)


def frankl_stability_bound(n: int, d: int) -> BoundValue:
    """Kleitman stability: cap for families not inside any extremal translate."""
    if d < 0 or n < d + 2:
        raise RangeError(f"need n >= d + 2 and d >= 0, got n={n}, d={d}")
    k = d // 2
    if d % 2 == 0:
        value = binom_sum(n, 0, k) - binom(n - k - 1, k) + 1
    else:
        value = 2 * binom_sum(n - 1, 0, k) - binom(n - k - 2, k) + 1
    return BoundValue("frankl-stability", {"n": n, "d": d}, value)


def symmetric_stability_bound(n: int, k: int) -> BoundValue:
    """Odd-diameter dichotomy cap: families of diameter <= 2k+1 outside every
    translate of the radius-(k+1) ball are at most this large."""
    value = 2 * binom_sum(n, 0, k) - 2 * binom(n - 5 * k - 1, k)
    return BoundValue("symmetric-stability", {"n": n, "k": k}, value)


def even_case_stability_bound(n: int, k: int) -> BoundValue:
    """Even-diameter analogue (comparison value only; no certificate built)."""
    value = binom_sum(n + 1, 0, k) - binom(n - 5 * k, k)
    return BoundValue("even-case-stability", {"n": n, "k": k}, value)


def setwise_bounds(n: int, t: int, k: int) -> tuple[BoundValue, BoundValue]:
    """Caps for rank-t families with all set-wise differences at most k:
    (families sharing a (t-k)-core, all other families)."""
    if not (0 < k < t and 2 * t <= k + n):
        raise RangeError(f"need 0 < k < t <= (k+n)/2, got n={n}, t={t}, k={k}")
    trivial = BoundValue(
        "setwise-trivial-core", {"n": n, "t": t, "k": k}, binom_sum(n - (t - k), 0, k)
    )
    nontrivial = BoundValue(
        "setwise-stability",
        {"n": n, "t": t, "k": k},
        binom_sum(n, 0, k) - binom(n - t - 2 * k, k),
    )
    return trivial, nontrivial


def snevily_bounds(n: int, s: int) -> tuple[BoundValue, BoundValue]:
    """(unconditional cap, conjectured target) for s-intersection-size
    Sperner families."""
    general = BoundValue("snevily-general", {"n": n, "s": s}, binom_sum(n - 1, 0, s))
    target = BoundValue("sperner-target", {"n": n, "s": s}, binom(n, s))
    return general, target


def trivial_core_bound(n: int, s: int) -> BoundValue:
    """Cap for Sperner families whose members all share a common element
    (after deleting the core both it and one more point are unusable)."""
    if n < 2:
        raise RangeError(f"need n >= 2, got n={n}")
    return BoundValue("trivial-core", {"n": n, "s": s}, binom_sum(n - 2, 0, s))


def hilton_milner_bound(n: int, k: int) -> BoundValue:
    """Largest k-uniform intersecting family with empty common core."""
    if k < 1 or n <= 2 * k:
        raise RangeError(f"need n > 2k >= 2, got n={n}, k={k}")
    value = binom(n - 1, k - 1) - binom(n - k - 1, k - 1) + 1
    return BoundValue("hilton-milner", {"n": n, "k": k}, value)


def lym_statistic(fam: Family) -> Fraction:
    """Sum of 1 / C(n, |A|) over members; above 1 certifies 'not Sperner'."""
    total = Fraction(0)
    for w in fam.members:
        total += Fraction(1, comb(fam.n, len(w)))
    return total


def applicable_bounds(n: int, k=None, s=None, t=None, d=None) -> list[BoundValue]:
    """Every bound whose stated range accepts the given parameters."""
    out: list[BoundValue] = []

    def attempt(fn, *args):
        try:
            got = fn(*args)
        except RangeError:
            return
        if isinstance(got, tuple):
            out.extend(got)
        else:
            out.append(got)

    if d is not None:
        attempt(kleitman_bound, n, d)
        attempt(frankl_stability_bound, n, d)
    if k is not None:
        attempt(symmetric_stability_bound, n, k)
        attempt(even_case_stability_bound, n, k)
        attempt(hilton_milner_bound, n, k)
    if t is not None and k is not None:
        attempt(setwise_bounds, n, t, k)
    if s is not None:
        attempt(snevily_bounds, n, s)
        attempt(trivial_core_bound, n, s)
    return out
