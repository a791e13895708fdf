"""Exhaustive extremal-family search at small n.

Families satisfying a pairwise constraint are exactly the cliques of a
compatibility graph on candidate sets, so every extremal question here
reduces to exact maximum clique.  The solver is a classic branch and
bound with greedy-coloring upper bounds over bitset candidate sets; the
reported witness is the lexicographically least maximum clique under the
canonical vertex order, so results are reproducible regardless of worker
count.  A node budget turns into an explicit "inconclusive" verdict,
never a silently truncated optimum.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .bounds import (
    BoundValue,
    binom,
    binom_sum,
    kleitman_bound,
    setwise_bounds,
    snevily_bounds,
    symmetric_stability_bound,
)
from .certificates import check_claim_structures, setwise_certificate, symmetric_certificate
from .setfam import (
    Family,
    IntersectionSpec,
    SetWord,
    ball_cover_center,
    canonical_key,
    common_core,
    family_rank,
    is_l_intersecting,
    is_sperner,
    max_setwise_diff,
    punctured_ball_cover,
    symmetric_diameter,
    translate,
)

MAX_BUILD_N = 20
MAX_AUDIT_N = 6

VERDICT_CONSISTENT = "consistent"
VERDICT_TIGHT = "bound_tight"
VERDICT_COUNTEREXAMPLE = "COUNTEREXAMPLE"
VERDICT_INCONCLUSIVE = "inconclusive"


class SizeCapError(ValueError):
    """Instance too large for exhaustive treatment."""


class SearchInternalError(RuntimeError):
    """A search produced a witness that fails its own defining predicate."""


@dataclass(frozen=True)
class CompatGraph:
    """Candidate sets plus a symmetric, irreflexive compatibility relation."""

    n: int
    vertices: tuple[int, ...]
    adj: tuple[int, ...]
    predicate_name: str

    def vertex_count(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2


def build_graph(
    n: int,
    vertex_filter: Optional[Callable[[int], bool]],
    pair_predicate: Callable[[int, int], bool],
    predicate_name: str = "",
) -> CompatGraph:
    """All subsets passing the filter, joined when the pair predicate holds."""
    if n > MAX_BUILD_N:
        raise SizeCapError(f"ground set {n} exceeds build cap {MAX_BUILD_N}")
    masks = [m for m in range(1 << n) if vertex_filter is None or vertex_filter(m)]
    masks.sort(key=canonical_key)
    count = len(masks)
    adj = [0] * count
    for i in range(count):
        for j in range(i + 1, count):
            if pair_predicate(masks[i], masks[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return CompatGraph(n, tuple(masks), tuple(adj), predicate_name)


@dataclass
class SearchResult:
    optimum: int
    witness: Family
    explored_nodes: int
    compared_bound: Optional[BoundValue]
    verdict: str
    complete: bool
    notes: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "optimum": self.optimum,
            "witness": self.witness.to_obj(),
            "explored_nodes": self.explored_nodes,
            "compared_bound": self.compared_bound.to_obj() if self.compared_bound else None,
            "verdict": self.verdict,
            "complete": self.complete,
            "notes": dict(self.notes),
        }


class _Budget:
    __slots__ = ("nodes", "cap", "exhausted")

    def __init__(self, cap: Optional[int]):
        self.nodes = 0
        self.cap = cap
        self.exhausted = False

    def spend(self) -> bool:
        self.nodes += 1
        if self.cap is not None and self.nodes > self.cap:
            self.exhausted = True
        return not self.exhausted


class _State:
    __slots__ = ("best", "best_mask")

    def __init__(self, best: int, best_mask: int):
        self.best = best
        self.best_mask = best_mask


def _greedy_clique(adj: tuple[int, ...], count: int) -> int:
    """Clique mask from the canonical-order greedy; the initial lower bound."""
    mask = 0
    for v in range(count):
        if mask & ~adj[v] == 0:
            mask |= 1 << v
    return mask


def _color_order(p: int, adj) -> list[tuple[int, int]]:
    """Greedy coloring of the candidate set; vertices in color-class order."""
    order = []
    rest = p
    color = 0
    while rest:
        color += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            order.append((v, color))
            bit = 1 << v
            rest &= ~bit
            avail &= ~bit
            avail &= ~adj[v]
    return order


def _expand(adj, rsize: int, rmask: int, p: int, st: _State, budget: _Budget):
    if not budget.spend():
        return
    cur = p
    for v, c in reversed(_color_order(p, adj)):
        if rsize + c <= st.best:
            return
        bit = 1 << v
        cur &= ~bit
        nxt = cur & adj[v]
        if nxt:
            _expand(adj, rsize + 1, rmask | bit, nxt, st, budget)
            if budget.exhausted:
                return
        elif rsize + 1 > st.best:
            st.best = rsize + 1
            st.best_mask = rmask | bit


def _exists_clique(adj, p: int, need: int, budget: _Budget) -> bool:
    """Whether the candidate set contains a clique of the given size."""
    budget.nodes += 1
    if need <= 0:
        return True
    if p == 0 or p.bit_count() < need:
        return False
    order = _color_order(p, adj)
    cur = p
    for v, c in reversed(order):
        if c < need:
            return False
        bit = 1 << v
        cur &= ~bit
        if _exists_clique(adj, cur & adj[v], need - 1, budget):
            return True
    return False


def _root_task(args):
    adj, root, initial_best, cap = args
    st = _State(initial_best, 0)
    budget = _Budget(cap)
    above = ~((1 << (root + 1)) - 1)
    p = adj[root] & above
    if p:
        _expand(adj, 1, 1 << root, p, st, budget)
    return st.best, budget.nodes, budget.exhausted


def _lex_witness(adj, count: int, omega: int, budget: _Budget) -> int:
    """Lexicographically least maximum clique under the canonical order."""
    chosen = 0
    cand = (1 << count) - 1
    need = omega
    while need:
        placed = False
        scan = cand
        while scan:
            v = (scan & -scan).bit_length() - 1
            scan &= scan - 1
            sub = cand & adj[v] & ~((1 << (v + 1)) - 1)
            if _exists_clique(adj, sub, need - 1, budget):
                chosen |= 1 << v
                cand = sub
                need -= 1
                placed = True
                break
        if not placed:
            raise SearchInternalError("witness reconstruction disagrees with the optimum")
    return chosen


def _clique_family(graph: CompatGraph, clique_mask: int) -> Family:
    masks = [graph.vertices[i] for i in range(len(graph.vertices)) if clique_mask >> i & 1]
    return Family.from_masks(graph.n, sorted(masks, key=canonical_key))


def max_clique(
    graph: CompatGraph,
    node_cap: Optional[int] = None,
    workers: int = 1,
) -> SearchResult:
    """Exact maximum clique with deterministic canonical witness."""
    count = len(graph.vertices)
    if count == 0:
        return SearchResult(
            0, Family(graph.n, ()), 0, None, VERDICT_CONSISTENT, True,
            {"predicate": graph.predicate_name},
        )
    adj = graph.adj
    greedy = _greedy_clique(adj, count)
    st = _State(greedy.bit_count(), greedy)
    nodes = 0
    exhausted = False
    if workers <= 1:
        budget = _Budget(node_cap)
        _expand(adj, 0, 0, (1 << count) - 1, st, budget)
        nodes = budget.nodes
        exhausted = budget.exhausted
    else:
        tasks = [(adj, root, st.best, node_cap) for root in range(count)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for best, task_nodes, task_exhausted in pool.map(_root_task, tasks, chunksize=4):
                st.best = max(st.best, best)
                nodes += task_nodes
                exhausted = exhausted or task_exhausted

    if exhausted:
        witness = _clique_family(graph, st.best_mask)
        return SearchResult(
            st.best, witness, nodes, None, VERDICT_INCONCLUSIVE, False,
            {"predicate": graph.predicate_name, "node_cap": node_cap},
        )
    budget = _Budget(None)
    witness_mask = _lex_witness(adj, count, st.best, budget)
    nodes += budget.nodes
    witness = _clique_family(graph, witness_mask)
    return SearchResult(
        st.best, witness, nodes, None, VERDICT_CONSISTENT, True,
        {"predicate": graph.predicate_name},
    )


def maximal_clique_masks(graph: CompatGraph) -> Iterator[int]:
    """All maximal cliques (Bron-Kerbosch with pivoting), as vertex masks."""
    adj = graph.adj
    count = len(graph.vertices)

    def bk(r: int, p: int, x: int):
        if p == 0 and x == 0:
            yield r
            return
        px = p | x
        pivot = -1
        pivot_deg = -1
        m = px
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            d = (p & adj[u]).bit_count()
            if d > pivot_deg:
                pivot_deg = d
                pivot = u
        ext = p & ~adj[pivot]
        while ext:
            v = (ext & -ext).bit_length() - 1
            ext &= ext - 1
            bit = 1 << v
            yield from bk(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    if count:
        yield from bk(0, (1 << count) - 1, 0)


def maximum_clique_families(graph: CompatGraph, optimum: int) -> list[Family]:
    """Every maximum clique, as canonical families (for uniqueness checks)."""
    out = []
    for mask in maximal_clique_masks(graph):
        if mask.bit_count() == optimum:
            out.append(_clique_family(graph, mask))
    return out


def _attach_verdict(res: SearchResult, bound: Optional[BoundValue]) -> SearchResult:
    res.compared_bound = bound
    if not res.complete:
        res.verdict = VERDICT_INCONCLUSIVE
    elif bound is None:
        res.verdict = VERDICT_CONSISTENT
    elif res.optimum > bound.value:
        res.verdict = VERDICT_COUNTEREXAMPLE
    elif res.optimum == bound.value:
        res.verdict = VERDICT_TIGHT
    else:
        res.verdict = VERDICT_CONSISTENT
    return res


def extremal_diameter(
    n: int, d: int, node_cap: Optional[int] = None, workers: int = 1
) -> SearchResult:
    """Largest family with pairwise symmetric difference at most d."""
    if not n > d >= 0:
        raise ValueError(f"need n > d >= 0, got n={n}, d={d}")
    graph = build_graph(
        n, None, lambda a, b: (a ^ b).bit_count() <= d, f"symmetric-diameter<={d}"
    )
    res = max_clique(graph, node_cap, workers)
    if res.complete and len(res.witness) > 1 and symmetric_diameter(res.witness) > d:
        raise SearchInternalError("diameter witness violates the diameter constraint")
    return _attach_verdict(res, kleitman_bound(n, d))


def extremal_l_sperner(
    n: int,
    spec: IntersectionSpec,
    node_cap: Optional[int] = None,
    workers: int = 1,
) -> SearchResult:
    """Largest Sperner family with all pairwise intersection sizes allowed.

    Compared against the layer size C(n, s) inside the conjectured range
    n >= 2s - 1, and against the unconditional dimension bound otherwise.
    The verdict is a statement about these finite instances only.
    """
    if len(spec) == 0:
        raise ValueError("need at least one allowed intersection size")
    spec.validate_for(n)
    s = len(spec)
    allowed = set(spec.values)

    def pred(a: int, b: int) -> bool:
        if a & ~b == 0 or b & ~a == 0:
            return False
        return (a & b).bit_count() in allowed

    graph = build_graph(n, None, pred, f"L-intersecting-sperner L={list(spec.values)}")
    res = max_clique(graph, node_cap, workers)
    if res.complete and len(res.witness) > 1:
        if not is_sperner(res.witness) or not is_l_intersecting(res.witness, spec):
            raise SearchInternalError("L-sperner witness violates its predicate")
    general, target = snevily_bounds(n, s)
    in_range = n >= 2 * s - 1
    res.notes["conjecture_range"] = in_range
    res.notes["general_bound"] = general.value
    res.notes["scope"] = "finite instance check only"
    return _attach_verdict(res, target if in_range else general)


def extremal_setwise(
    n: int,
    k: int,
    t_cap: Optional[int] = None,
    sperner: bool = False,
    node_cap: Optional[int] = None,
    workers: int = 1,
) -> SearchResult:
    """Largest family with all one-sided differences at most k.

    Optionally capped in rank, optionally restricted to Sperner families
    (the layer-target mode).
    """
    if k < 0:
        raise ValueError(f"need k >= 0, got {k}")
    if t_cap is not None and t_cap < 0:
        raise ValueError(f"need t_cap >= 0, got {t_cap}")

    def pred(a: int, b: int) -> bool:
        if (a & ~b).bit_count() > k or (b & ~a).bit_count() > k:
            return False
        if sperner and (a & ~b == 0 or b & ~a == 0):
            return False
        return True

    vfilter = None if t_cap is None else (lambda m: m.bit_count() <= t_cap)
    name = f"setwise-diff<={k}" + (" sperner" if sperner else "") + (
        f" rank<={t_cap}" if t_cap is not None else ""
    )
    graph = build_graph(n, vfilter, pred, name)
    res = max_clique(graph, node_cap, workers)
    w = res.witness
    if res.complete and len(w) >= 1:
        if len(w) > 1 and max_setwise_diff(w) > k:
            raise SearchInternalError("setwise witness violates the difference constraint")
        if t_cap is not None and family_rank(w) > t_cap:
            raise SearchInternalError("setwise witness violates the rank cap")
        if sperner and not is_sperner(w):
            raise SearchInternalError("setwise witness is not Sperner")

    bound: Optional[BoundValue] = None
    if sperner:
        bound = BoundValue("sperner-layer-target", {"n": n, "k": k}, binom(n, k))
    elif t_cap is not None:
        try:
            trivial, nontrivial = setwise_bounds(n, t_cap, k)
            bound = max(trivial, nontrivial, key=lambda b: b.value)
        except ValueError:
            bound = None
    return _attach_verdict(res, bound)


# --------------------------------------------------------------------------
# dichotomy audits
# --------------------------------------------------------------------------

@dataclass
class AuditReport:
    kind: str
    n: int
    k: int
    params: dict
    families_total: int
    families_audited: int
    counts: dict
    violations: list
    details: list = field(default_factory=list)

    @property
    def zero_violations(self) -> bool:
        return not self.violations

    def to_obj(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "k": self.k,
            "params": dict(self.params),
            "families_total": self.families_total,
            "families_audited": self.families_audited,
            "counts": dict(self.counts),
            "violations": list(self.violations),
            "zero_violations": self.zero_violations,
        }


def _normalizing_translate(fam: Family) -> SetWord:
    """Member whose translate puts the empty set in the family while making
    the even-sized part the majority: the canonical-first member of the
    larger parity class."""
    evens = [w for w in fam.members if len(w) % 2 == 0]
    odds = [w for w in fam.members if len(w) % 2 == 1]
    pool = evens if len(evens) >= len(odds) else odds
    return min(pool, key=lambda w: canonical_key(w.bits))


def dichotomy_audit(n: int, k: int, collect_details: bool = False) -> AuditReport:
    """Audit the odd-diameter stability dichotomy over all maximal families.

    Enumerates every maximal family of symmetric-difference diameter at
    most 2k+1 and checks that each one either obeys the stability size
    bound or sits inside a translate of the radius-(k+1) ball, plus the
    refinement for those inside such a translate.  Each family's
    normalized even part is also run through the symmetric certificate,
    and the structural claim scans must come back clean.
    """
    if n > MAX_AUDIT_N:
        raise SizeCapError(f"maximal-family enumeration capped at n = {MAX_AUDIT_N}")
    if not n > 2 * k + 1:
        raise ValueError(f"need n > 2k + 1, got n={n}, k={k}")
    d = 2 * k + 1
    graph = build_graph(n, None, lambda a, b: (a ^ b).bit_count() <= d, f"diameter<={d}")
    sym_bound = symmetric_stability_bound(n, k)
    # Refinement bound from the odd-case stability formula; unlike the
    # standalone bound there is no n >= d + 2 gate here.
    refine_value = 2 * binom_sum(n - 1, 0, k) - binom(n - k - 2, k) + 1

    counts = {
        "within_stability_bound": 0,
        "inside_ball_translate": 0,
        "inside_punctured_translate": 0,
        "refinement_by_bound": 0,
    }
    violations = []
    details = []
    total = 0
    for mask in maximal_clique_masks(graph):
        total += 1
        fam = _clique_family(graph, mask)
        size = len(fam)
        problems = []

        alt_bound = size <= sym_bound.value
        center = ball_cover_center(fam, k + 1)
        alt_translate = center is not None
        if alt_bound:
            counts["within_stability_bound"] += 1
        if alt_translate:
            counts["inside_ball_translate"] += 1
        if not (alt_bound or alt_translate):
            problems.append("neither stability bound nor ball translate")

        if alt_translate:
            punctured = punctured_ball_cover(fam, k)
            if punctured is not None:
                counts["inside_punctured_translate"] += 1
            elif size <= refine_value:
                counts["refinement_by_bound"] += 1
            else:
                problems.append("refinement fails: no punctured translate and size too large")

        u = _normalizing_translate(fam)
        normalized = translate(fam, u)
        even_part = Family(n, tuple(w for w in normalized.members if len(w) % 2 == 0))
        cert = symmetric_certificate(even_part, k)
        if 2 * len(even_part) < size:
            problems.append("normalization did not make the even part a majority")
        non_shadow_count = cert.non_shadow_count
        if non_shadow_count >= binom(n - 5 * k - 1, k) and not alt_bound:
            problems.append("stability derivation fails: many non-shadows but bound exceeded")

        scan = check_claim_structures(normalized, k)
        section = scan.section("symmetric-difference")
        if not section.preconditions_ok:
            problems.append(f"claim preconditions unexpectedly failed: {section.failed_preconditions}")
        elif section.violation_count():
            problems.append(f"claim scan violations: {section.violation_count()}")

        if problems:
            violations.append({"family": fam.to_obj(), "size": size, "problems": problems})
        if collect_details:
            details.append(
                {
                    "family": fam.to_obj(),
                    "size": size,
                    "within_bound": alt_bound,
                    "ball_center": list(center.elements()) if center else None,
                    "translate_used": list(u.elements()),
                    "even_part_size": len(even_part),
                }
            )
    return AuditReport(
        kind="symmetric-dichotomy",
        n=n,
        k=k,
        params={"diameter": d, "stability_bound": sym_bound.value, "refinement_bound": refine_value},
        families_total=total,
        families_audited=total,
        counts=counts,
        violations=violations,
        details=details,
    )


def setwise_dichotomy_audit(n: int, k: int, t: int, collect_details: bool = False) -> AuditReport:
    """Audit the set-wise-difference dichotomy over all maximal families.

    Enumerates maximal families of rank at most t with all one-sided
    differences at most k; those of rank exactly t must either share a
    (t-k)-core and obey the core bound, or obey the stability bound.
    Structural claim scans and the setwise certificate run on each.
    """
    if n > MAX_AUDIT_N + 2:
        raise SizeCapError(f"maximal-family enumeration capped at n = {MAX_AUDIT_N + 2}")
    trivial_bound, stability_bound = setwise_bounds(n, t, k)
    graph = build_graph(
        n,
        lambda m: m.bit_count() <= t,
        lambda a, b: (a & ~b).bit_count() <= k and (b & ~a).bit_count() <= k,
        f"setwise-diff<={k} rank<={t}",
    )
    counts = {"rank_below_t": 0, "trivial_core_route": 0, "stability_route": 0}
    violations = []
    details = []
    total = 0
    audited = 0
    for mask in maximal_clique_masks(graph):
        total += 1
        fam = _clique_family(graph, mask)
        if family_rank(fam) != t:
            counts["rank_below_t"] += 1
            continue
        audited += 1
        size = len(fam)
        problems = []
        core = common_core(fam)
        trivially = len(core) >= t - k
        route_core = trivially and size <= trivial_bound.value
        route_bound = size <= stability_bound.value
        if route_core:
            counts["trivial_core_route"] += 1
        if route_bound:
            counts["stability_route"] += 1
        if not (route_core or route_bound):
            problems.append("neither the core route nor the stability bound holds")

        scan = check_claim_structures(fam, k)
        section = scan.section("setwise-difference")
        if not section.preconditions_ok:
            problems.append(f"claim preconditions unexpectedly failed: {section.failed_preconditions}")
        elif section.violation_count():
            problems.append(f"claim scan violations: {section.violation_count()}")

        setwise_certificate(fam, k)

        if problems:
            violations.append({"family": fam.to_obj(), "size": size, "problems": problems})
        if collect_details:
            details.append(
                {
                    "family": fam.to_obj(),
                    "size": size,
                    "core": list(core.elements()),
                    "trivially_intersecting": trivially,
                }
            )
    return AuditReport(
        kind="setwise-dichotomy",
        n=n,
        k=k,
        params={
            "t": t,
            "trivial_core_bound": trivial_bound.value,
            "stability_bound": stability_bound.value,
        },
        families_total=total,
        families_audited=audited,
        counts=counts,
        violations=violations,
        details=details,
    )


def effective_workers(requested: Optional[int]) -> int:
    """Worker count with the environment override applied."""
    env = os.environ.get("ANTICHAIN_WORKERS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, requested or 1)
