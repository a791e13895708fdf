"""Seeded random generators for families satisfying pairwise constraints.

Each generator draws a shuffled candidate pool and keeps a candidate iff
it stays compatible with everything kept so far, so the output satisfies
its constraint by construction.  All randomness comes from the caller's
random.Random instance.
"""

from __future__ import annotations

from random import Random

from .setfam import Family, IntersectionSpec, canonical_key


def _greedy(rng: Random, pool: list[int], keep, n: int, target: int | None = None) -> Family:
    rng.shuffle(pool)
    chosen: list[int] = []
    goal = target if target is not None else rng.randint(1, max(1, len(pool)))
    for m in pool:
        if all(keep(m, c) for c in chosen):
            chosen.append(m)
            if len(chosen) >= goal:
                break
    return Family.from_masks(n, sorted(chosen, key=canonical_key))


def random_intersecting_uniform(rng: Random, n: int, size: int) -> Family:
    """Pairwise-intersecting family of fixed member size (nonempty)."""
    pool = [m for m in range(1 << n) if m.bit_count() == size]
    return _greedy(rng, pool, lambda a, b: bool(a & b), n)


def random_even_bounded_diameter(rng: Random, n: int, k: int) -> Family:
    """Even-sized members, pairwise symmetric difference at most 2k."""
    pool = [m for m in range(1 << n) if m.bit_count() % 2 == 0]
    return _greedy(rng, pool, lambda a, b: (a ^ b).bit_count() <= 2 * k, n)


def random_setwise_bounded(rng: Random, n: int, k: int, t: int | None = None) -> Family:
    """Pairwise one-sided differences at most k, optional rank cap."""
    pool = [m for m in range(1 << n) if t is None or m.bit_count() <= t]
    return _greedy(
        rng,
        pool,
        lambda a, b: (a & ~b).bit_count() <= k and (b & ~a).bit_count() <= k,
        n,
    )


def random_l_sperner(rng: Random, n: int, spec: IntersectionSpec) -> Family:
    """Sperner family with all pairwise intersection sizes in the spec."""
    allowed = set(spec.values)

    def keep(a: int, b: int) -> bool:
        if a & ~b == 0 or b & ~a == 0:
            return False
        return (a & b).bit_count() in allowed

    pool = list(range(1 << n))
    return _greedy(rng, pool, keep, n)


def random_intersection_spec(rng: Random, n: int, max_size: int = 3) -> IntersectionSpec:
    s = rng.randint(1, min(max_size, n))
    return IntersectionSpec(tuple(sorted(rng.sample(range(n), s))))
