"""Bitset-backed set families over the ground set [n] = {1, ..., n}.

A subset of [n] is stored as one machine word: element ``i`` is present
iff bit ``i - 1`` is set.  Everything downstream (polynomials, searches,
certificates) trades in these words, so n is capped at 64.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional

MAX_GROUND_SET = 64


class EmptyFamilyError(ValueError):
    """Aggregate statistic requested for an empty family."""


def canonical_key(mask: int) -> tuple[int, int]:
    """Sort key used everywhere: cardinality first, then numeric value."""
    return (mask.bit_count(), mask)


@dataclass(frozen=True)
class SetWord:
    """A subset of [n] as a bit word (element i <-> bit i-1)."""

    bits: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_GROUND_SET:
            raise ValueError(f"ground set size must be in [1, {MAX_GROUND_SET}], got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits 0x{self.bits:x} out of range for n={self.n}")

    @classmethod
    def from_elements(cls, elements: Iterable[int], n: int) -> "SetWord":
        bits = 0
        for e in elements:
            if not 1 <= e <= n:
                raise ValueError(f"element {e} outside [1, {n}]")
            bits |= 1 << (e - 1)
        return cls(bits, n)

    @classmethod
    def empty(cls, n: int) -> "SetWord":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "SetWord":
        return cls((1 << n) - 1, n)

    def elements(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if self.bits >> i & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def __contains__(self, element: int) -> bool:
        return 1 <= element <= self.n and bool(self.bits >> (element - 1) & 1)

    def _check(self, other: "SetWord"):
        if self.n != other.n:
            raise ValueError(f"mixed ground sets: {self.n} vs {other.n}")

    def __and__(self, other: "SetWord") -> "SetWord":
        self._check(other)
        return SetWord(self.bits & other.bits, self.n)

    def __or__(self, other: "SetWord") -> "SetWord":
        self._check(other)
        return SetWord(self.bits | other.bits, self.n)

    def __xor__(self, other: "SetWord") -> "SetWord":
        self._check(other)
        return SetWord(self.bits ^ other.bits, self.n)

    def __sub__(self, other: "SetWord") -> "SetWord":
        self._check(other)
        return SetWord(self.bits & ~other.bits, self.n)

    def __le__(self, other: "SetWord") -> bool:
        """Subset test."""
        self._check(other)
        return self.bits & ~other.bits == 0

    def complement(self) -> "SetWord":
        return SetWord(~self.bits & ((1 << self.n) - 1), self.n)

    def __repr__(self) -> str:
        return f"SetWord({{{','.join(map(str, self.elements()))}}}, n={self.n})"


@dataclass(frozen=True)
class Family:
    """Ordered list of distinct subsets of a common ground set.

    Order is significant: certificate constructions are order-sensitive,
    so reordering is always explicit (see canonical()).
    """

    n: int
    members: tuple[SetWord, ...]

    def __post_init__(self):
        seen = set()
        for w in self.members:
            if w.n != self.n:
                raise ValueError(f"member over n={w.n} in family over n={self.n}")
            if w.bits in seen:
                raise ValueError(f"duplicate member {w!r}")
            seen.add(w.bits)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "Family":
        return cls(n, tuple(SetWord(m, n) for m in masks))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls(n, tuple(SetWord.from_elements(s, n) for s in sets))

    def masks(self) -> tuple[int, ...]:
        return tuple(w.bits for w in self.members)

    def canonical(self) -> "Family":
        return Family(self.n, tuple(sorted(self.members, key=lambda w: canonical_key(w.bits))))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SetWord]:
        return iter(self.members)

    def __contains__(self, word: SetWord) -> bool:
        return any(w.bits == word.bits for w in self.members)

    def same_sets(self, other: "Family") -> bool:
        """Equality as unordered families."""
        return self.n == other.n and set(self.masks()) == set(other.masks())

    def to_obj(self) -> dict:
        canon = self.canonical()
        return {"n": self.n, "sets": [list(w.elements()) for w in canon.members]}

    @classmethod
    def from_obj(cls, obj: dict) -> "Family":
        if not isinstance(obj, dict) or "n" not in obj or "sets" not in obj:
            raise ValueError("family object must have keys 'n' and 'sets'")
        n = obj["n"]
        if not isinstance(n, int):
            raise ValueError("'n' must be an integer")
        sets = obj["sets"]
        if not isinstance(sets, list):
            raise ValueError("'sets' must be a list of element lists")
        words = []
        for s in sets:
            if not isinstance(s, list) or any(not isinstance(e, int) for e in s):
                raise ValueError(f"set {s!r} is not a list of integers")
            if any(b <= a for a, b in zip(s, s[1:])):
                raise ValueError(f"set {s!r} is not strictly increasing")
            words.append(SetWord.from_elements(s, n))
        return cls(n, tuple(words))

    def dumps(self) -> str:
        return json.dumps(self.to_obj())

    @classmethod
    def loads(cls, text: str) -> "Family":
        return cls.from_obj(json.loads(text))


def load_family(path) -> Family:
    with open(path, "r", encoding="utf-8") as fh:
        return Family.from_obj(json.load(fh))


def dump_family(fam: Family, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fam.to_obj(), fh)
        fh.write("\n")


@dataclass(frozen=True)
class IntersectionSpec:
    """Prescribed set of allowed pairwise intersection sizes."""

    values: tuple[int, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ValueError("intersection sizes must be non-negative")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("intersection sizes must be strictly increasing")

    @classmethod
    def of(cls, *values: int) -> "IntersectionSpec":
        return cls(tuple(sorted(set(values))))

    def __contains__(self, v: int) -> bool:
        return v in self.values

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def validate_for(self, n: int) -> None:
        if self.values and self.values[-1] >= n:
            raise ValueError(f"intersection size {self.values[-1]} not below n={n}")


# --------------------------------------------------------------------------
# predicates and statistics
# --------------------------------------------------------------------------

def is_sperner(fam: Family) -> bool:
    """True iff no member is contained in a distinct member."""
    masks = fam.masks()
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if a & ~b == 0 or b & ~a == 0:
                return False
    return True


def is_l_intersecting(fam: Family, spec: IntersectionSpec) -> bool:
    """True iff every distinct pair meets in an allowed number of elements."""
    masks = fam.masks()
    allowed = set(spec.values)
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if (a & b).bit_count() not in allowed:
                return False
    return True


def symmetric_diameter(fam: Family) -> int:
    """Largest pairwise symmetric difference; 0 for a single member."""
    if len(fam) == 0:
        raise EmptyFamilyError("symmetric_diameter of empty family")
    masks = fam.masks()
    return max(
        ((a ^ b).bit_count() for i, a in enumerate(masks) for b in masks[i + 1:]),
        default=0,
    )


def max_setwise_diff(fam: Family) -> int:
    """Largest |A \\ B| over ordered pairs of distinct members."""
    if len(fam) == 0:
        raise EmptyFamilyError("max_setwise_diff of empty family")
    masks = fam.masks()
    best = 0
    for i, a in enumerate(masks):
        for j, b in enumerate(masks):
            if i != j:
                d = (a & ~b).bit_count()
                if d > best:
                    best = d
    return best


def family_rank(fam: Family) -> int:
    if len(fam) == 0:
        raise EmptyFamilyError("family_rank of empty family")
    return max(m.bit_count() for m in fam.masks())


def shadow(fam: Family, k: int) -> Family:
    """All k-subsets of [n] contained in some member, canonically sorted."""
    if not 0 <= k <= fam.n:
        raise ValueError(f"shadow order {k} outside [0, {fam.n}]")
    found = set()
    for w in fam.members:
        if len(w) >= k:
            for combo in combinations(w.elements(), k):
                bits = 0
                for e in combo:
                    bits |= 1 << (e - 1)
                found.add(bits)
    return Family.from_masks(fam.n, sorted(found, key=canonical_key))


def non_shadow_masks(fam: Family, k: int) -> list[int]:
    """k-subsets of [n] not contained in any member, canonically sorted."""
    covered = set(shadow(fam, k).masks())
    out = []
    for combo in combinations(range(fam.n), k):
        bits = 0
        for i in combo:
            bits |= 1 << i
        if bits not in covered:
            out.append(bits)
    return sorted(out, key=canonical_key)


def translate(fam: Family, s: SetWord) -> Family:
    """Member-wise symmetric difference with a fixed set; an involution."""
    if s.n != fam.n:
        raise ValueError("translate set over different ground set")
    return Family(fam.n, tuple(w ^ s for w in fam.members))


def complement_family(fam: Family) -> Family:
    return Family(fam.n, tuple(w.complement() for w in fam.members))


def common_core(fam: Family) -> SetWord:
    """Intersection of all members."""
    if len(fam) == 0:
        raise EmptyFamilyError("common_core of empty family")
    bits = (1 << fam.n) - 1
    for m in fam.masks():
        bits &= m
    return SetWord(bits, fam.n)


def _cover_center_masks(masks: list[int], n: int, k: int) -> Optional[int]:
    """First S (by translated candidate order) with |F ^ S| <= k for all F.

    Any valid center can be normalized into {first ^ D : D subset of the
    union of (F ^ first)}: bits outside that union add to every distance.
    So enumerating D over subsets of the union of size <= k is exhaustive.
    """
    if not masks:
        return 0
    base = masks[0]
    rel = [m ^ base for m in masks]
    union = 0
    for r in rel:
        union |= r
    pool = [i for i in range(n) if union >> i & 1]
    for size in range(min(k, len(pool)) + 1):
        for combo in combinations(pool, size):
            d = 0
            for i in combo:
                d |= 1 << i
            if all((r ^ d).bit_count() <= k for r in rel):
                return d ^ base
    return None


def ball_cover_center(fam: Family, k: int) -> Optional[SetWord]:
    """Some S with every member within symmetric difference k of S, if any."""
    if not 0 <= k <= fam.n:
        raise ValueError(f"radius {k} outside [0, {fam.n}]")
    if len(fam) == 0:
        return SetWord.empty(fam.n)
    if symmetric_diameter(fam) > 2 * k:
        return None
    center = _cover_center_masks(list(fam.masks()), fam.n, k)
    return None if center is None else SetWord(center, fam.n)


def punctured_ball_cover(fam: Family, k: int) -> Optional[tuple[SetWord, int]]:
    """(S, y) with |(F ^ S) \\ {y}| <= k for every member, if any exist.

    Exhaustive over puncture points y; for each y the condition only
    involves coordinates other than y, so it reduces to covering the
    punctured family, and S can be normalized to avoid y.
    """
    if not 0 <= k < fam.n:
        raise ValueError(f"radius {k} outside [0, {fam.n})")
    if len(fam) == 0:
        return (SetWord.empty(fam.n), 1)
    for y in range(1, fam.n + 1):
        ybit = 1 << (y - 1)
        punctured = sorted({m & ~ybit for m in fam.masks()}, key=canonical_key)
        center = _cover_center_masks(punctured, fam.n, k)
        if center is not None:
            return (SetWord(center & ~ybit, fam.n), y)
    return None
