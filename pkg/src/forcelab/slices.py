"""Time slices of a standard forcing schedule.

Slicing a schedule at step N splits the vertices into those done forcing
before N, those active at N, and those not yet blue; the active set
separates the other two. These slice sets are the raw material for the
constructive halving of PSD and power-domination propagation times.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import solvers
from .errors import InvariantViolation
from .forcing import (
    RelaxedChronology,
    Rule,
    activity_spans,
    propagate,
    restriction_initials,
    reversal,
)
from .graphs import Graph, closed_neighborhood, induced_subgraph


@dataclass(frozen=True)
class SliceReport:
    step: int
    minus: frozenset[int]  # done forcing before the step
    at: frozenset[int]     # active at the step
    plus: frozenset[int]   # not yet blue at the step


def time_slice(g: Graph, chron: RelaxedChronology, n_step: int) -> SliceReport:
    """Partition the vertices by their activity relative to step ``n_step``."""
    spans = activity_spans(g, chron)
    if not 0 <= n_step <= chron.ct:
        raise ValueError(f"step {n_step} outside 0..{chron.ct}")
    minus, at, plus = set(), set(), set()
    for v, (lo, hi) in enumerate(spans):
        if hi < n_step:
            minus.add(v)
        elif lo > n_step:
            plus.add(v)
        else:
            at.add(v)
    return SliceReport(n_step, frozenset(minus), frozenset(at), frozenset(plus))


@dataclass(frozen=True)
class IntervalSlice:
    """Vertices active within a window of steps, with all interval variants
    and the two boundary sets used by the power-domination construction."""

    m: int
    n: int
    closed: frozenset[int]      # active somewhere in [m, n]
    left_open: frozenset[int]   # closed minus the slice at m
    right_open: frozenset[int]  # closed minus the slice at n
    open: frozenset[int]        # closed minus both end slices
    bd_m_plus: frozenset[int]   # chain starts strictly after m
    bd_n_minus: frozenset[int]  # chain ends strictly before n (reversed view)


def interval_slice(
    g: Graph, chron: RelaxedChronology, m_step: int, n_step: int
) -> IntervalSlice:
    if not 0 <= m_step <= n_step <= chron.ct:
        raise ValueError(f"need 0 <= {m_step} <= {n_step} <= {chron.ct}")
    spans = activity_spans(g, chron)
    closed = frozenset(
        v for v, (lo, hi) in enumerate(spans) if lo <= n_step and hi >= m_step
    )
    at_m = frozenset(v for v, (lo, hi) in enumerate(spans) if lo <= m_step <= hi)
    at_n = frozenset(v for v, (lo, hi) in enumerate(spans) if lo <= n_step <= hi)
    after = frozenset(v for v, (lo, _) in enumerate(spans) if lo > m_step)
    before = frozenset(v for v, (_, hi) in enumerate(spans) if hi < n_step)
    bd_m_plus = restriction_initials(g, chron, after) if after else frozenset()
    bd_n_minus = (
        restriction_initials(g, reversal(g, chron), before) if before else frozenset()
    )
    return IntervalSlice(
        m_step,
        n_step,
        closed,
        closed - at_m,
        closed - at_n,
        closed - at_m - at_n,
        bd_m_plus,
        bd_n_minus,
    )


@dataclass(frozen=True)
class ForcingAssertion:
    name: str
    base: frozenset[int]
    sub_vertices: frozenset[int]
    bound: int
    achieved: int


@dataclass(frozen=True)
class IntervalForcingReport:
    m: int
    n: int
    assertions: tuple[ForcingAssertion, ...]


def _replay_on(g: Graph, verts, base, bound: int, name: str) -> ForcingAssertion:
    verts = frozenset(verts)
    base = frozenset(base) & verts
    sub = induced_subgraph(g, verts)
    local = {old: new for new, old in enumerate(sub.vertices)}
    result = propagate(Rule.STANDARD, sub.graph, {local[v] for v in base})
    if not result.ok:
        raise InvariantViolation(f"{name}: slice set fails to force its subgraph")
    if result.pt > bound:
        raise InvariantViolation(
            f"{name}: took {result.pt} steps, guaranteed at most {bound}"
        )
    return ForcingAssertion(name, base, verts, bound, result.pt)


def check_interval_forcing(
    g: Graph, chron: RelaxedChronology, m_step: int, n_step: int
) -> IntervalForcingReport:
    """Replay the four guaranteed slice forcings for a window m < n.

    Each failure is raised as :class:`InvariantViolation`: these facts hold
    for every valid schedule, so a failure is a library bug, not bad input.
    """
    if not 0 <= m_step < n_step <= chron.ct:
        raise ValueError(f"need 0 <= {m_step} < {n_step} <= {chron.ct}")
    k_total = chron.ct
    isl = interval_slice(g, chron, m_step, n_step)
    at_m = time_slice(g, chron, m_step).at
    at_n = time_slice(g, chron, n_step).at
    spans = activity_spans(g, chron)
    before = frozenset(v for v, (_, hi) in enumerate(spans) if hi < n_step)
    after = frozenset(v for v, (lo, _) in enumerate(spans) if lo > m_step)
    checks = (
        _replay_on(g, isl.closed, at_m, n_step - m_step, "window from its start slice"),
        _replay_on(g, isl.closed, at_n, n_step - m_step, "window from its end slice"),
        _replay_on(g, before, isl.bd_n_minus, n_step - 1, "prefix from its boundary"),
        _replay_on(
            g, after, isl.bd_m_plus, k_total - m_step - 1, "suffix from its boundary"
        ),
    )
    return IntervalForcingReport(m_step, n_step, checks)


# ---------------------------------------------------------------------------
# Constructive propagation-time halving


@dataclass(frozen=True)
class SliceConstruction:
    """A PSD forcing set built from slice sets of an efficient schedule,
    with its guaranteed bound and the replayed propagation time."""

    base: frozenset[int]
    upper_bound: int
    achieved: int
    cut_times: tuple[int, ...]
    source_pt: int


@dataclass(frozen=True)
class PowerConstruction:
    base: frozenset[int]
    upper_bound: int
    achieved: int
    cut_time: int
    source_pt: int


def _efficient_chronology(g: Graph, m: int, cap: int | None) -> RelaxedChronology:
    """Canonical m-efficient schedule: propagate from the lexicographically
    least size-m set of minimum propagation time."""
    report = solvers.propagation_time_m(g, m, Rule.STANDARD, cap=cap)
    best = sorted(report.witnesses[0])
    result = propagate(Rule.STANDARD, g, best)
    if not result.ok:
        raise InvariantViolation("efficient set failed to replay")
    return result.chronology


def psd_set_from_slices(
    g: Graph,
    m: int,
    cut_times="auto",
    cap: int | None = None,
    *,
    _chronology: RelaxedChronology | None = None,
) -> SliceConstruction:
    """Build a size-m PSD forcing set from slice sets of an m-efficient
    standard schedule.

    ``cut_times='auto'`` cuts once at ceil(K/2), which guarantees a PSD
    propagation time of at most ceil(pt(G, m)/2). Explicit cut times give
    the guarantee max(first gap, gaps between cuts, last gap); achieved
    time (often better for several cuts) is replayed and returned.
    """
    chron = _chronology or _efficient_chronology(g, m, cap)
    k_total = chron.ct
    if cut_times == "auto":
        cuts = ((k_total + 1) // 2,)
    else:
        cuts = tuple(sorted(set(int(c) for c in cut_times)))
        if not cuts:
            raise ValueError("at least one cut time is required")
        if cuts[0] < 0 or cuts[-1] > k_total:
            raise ValueError(f"cut times must lie in 0..{k_total}")
    base: set[int] = set()
    for c in cuts:
        at = time_slice(g, chron, c).at
        if len(at) != m:
            raise InvariantViolation(
                f"slice at {c} has {len(at)} vertices, expected one per chain"
            )
        base |= at
    gaps = [cuts[0], k_total - cuts[-1]]
    gaps.extend(b - a for a, b in zip(cuts, cuts[1:]))
    bound = max(gaps)
    result = propagate(Rule.PSD, g, base)
    if not result.ok:
        raise InvariantViolation("slice set failed to PSD-force the graph")
    if result.pt > bound:
        raise InvariantViolation(
            f"slice set took {result.pt} PSD steps, guaranteed at most {bound}"
        )
    return SliceConstruction(frozenset(base), bound, result.pt, cuts, k_total)


def power_set_from_slice(
    g: Graph,
    m: int,
    cap: int | None = None,
    *,
    _chronology: RelaxedChronology | None = None,
) -> PowerConstruction:
    """Build a size-m power dominating set: the slice at ceil(K/2) of an
    m-efficient standard schedule, guaranteeing power propagation time at
    most ceil(pt(G, m)/2)."""
    chron = _chronology or _efficient_chronology(g, m, cap)
    k_total = chron.ct
    if k_total == 0:
        return PowerConstruction(frozenset(range(g.n)), 0, 0, 0, 0)
    n_cut = (k_total + 1) // 2
    base = time_slice(g, chron, n_cut).at
    if len(base) != m:
        raise InvariantViolation(
            f"slice at {n_cut} has {len(base)} vertices, expected one per chain"
        )
    isl = interval_slice(g, chron, n_cut, n_cut)
    hood = closed_neighborhood(g, base)
    if not (isl.bd_n_minus <= hood and isl.bd_m_plus <= hood):
        raise InvariantViolation(
            "slice neighborhood misses a boundary set it must dominate"
        )
    result = propagate(Rule.POWER_DOMINATION, g, base)
    if not result.ok:
        raise InvariantViolation("slice set failed to power-dominate the graph")
    if result.pt > n_cut:
        raise InvariantViolation(
            f"power propagation took {result.pt} steps, guaranteed at most {n_cut}"
        )
    return PowerConstruction(base, n_cut, result.pt, n_cut, k_total)
