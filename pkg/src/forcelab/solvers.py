"""Exhaustive computation of forcing parameters on small graphs.

Everything here enumerates candidate sets outright (sizes ascending,
lexicographic within a size) over bitmask propagation engines, refuses
instances above a configurable cap, and reports every optimal witness.
No heuristics: a reported value is the true minimum over all candidates.
"""

from __future__ import annotations

import hashlib
import os
import time
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from typing import Iterable, Iterator

from .errors import CapExceeded, InfeasibleError
from .forcing import Rule
from .graphs import Graph, components, graph6_decode, graph6_encode

DEFAULT_CAP = 16
SWEEP_CAP = 14
_ENV_CAP = "FORCELAB_CAP"


def effective_cap(cap: int | None, default: int = DEFAULT_CAP) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(_ENV_CAP)
    if env:
        return int(env)
    return default


def _require_within_cap(g: Graph, cap: int | None, default: int = DEFAULT_CAP) -> None:
    limit = effective_cap(cap, default)
    if g.n > limit:
        raise CapExceeded(
            f"graph has {g.n} vertices, above the exhaustive cap {limit}; "
            f"pass a larger cap or set {_ENV_CAP} to override"
        )


# ---------------------------------------------------------------------------
# Bitmask propagation engines. Rounds are -1 when the set does not force.


def _components_mask(adj: tuple[int, ...], mask: int) -> list[int]:
    comps = []
    rem = mask
    while rem:
        comp = rem & -rem
        frontier = comp
        while frontier:
            grow = 0
            f = frontier
            while f:
                bit = f & -f
                f ^= bit
                grow |= adj[bit.bit_length() - 1] & mask
            grow &= ~comp
            comp |= grow
            frontier = grow
        comps.append(comp)
        rem &= ~comp
    return comps


def _standard_rounds(adj: tuple[int, ...], full: int, blue: int) -> tuple[int, int]:
    rounds = 0
    while blue != full:
        add = 0
        rem = blue
        while rem:
            bit = rem & -rem
            rem ^= bit
            white = adj[bit.bit_length() - 1] & ~blue
            if white and not white & (white - 1):
                add |= white
        if not add:
            return blue, -1
        blue |= add
        rounds += 1
    return blue, rounds


def _psd_rounds(adj: tuple[int, ...], full: int, blue: int) -> tuple[int, int]:
    rounds = 0
    while blue != full:
        add = 0
        for comp in _components_mask(adj, full & ~blue):
            rem = blue
            while rem:
                bit = rem & -rem
                rem ^= bit
                inside = adj[bit.bit_length() - 1] & comp
                if inside and not inside & (inside - 1):
                    add |= inside
        if not add:
            return blue, -1
        blue |= add
        rounds += 1
    return blue, rounds


def _power_rounds(adj: tuple[int, ...], full: int, blue: int) -> tuple[int, int]:
    if blue == full:
        return blue, 0
    hood = blue
    rem = blue
    while rem:
        bit = rem & -rem
        rem ^= bit
        hood |= adj[bit.bit_length() - 1]
    if hood == blue:
        return blue, -1
    final, rounds = _standard_rounds(adj, full, hood)
    if rounds < 0:
        return final, -1
    return final, rounds + 1


_ENGINES = {
    Rule.STANDARD: _standard_rounds,
    Rule.PSD: _psd_rounds,
    Rule.POWER_DOMINATION: _power_rounds,
}


def rounds_from_mask(rule: Rule, g: Graph, blue_mask: int) -> int:
    """Propagation rounds from a bitmask base set, or -1 if it stalls."""
    engine = _ENGINES[Rule(rule)]
    _, rounds = engine(g.adjacency_masks(), (1 << g.n) - 1, blue_mask)
    return rounds


def _mask_of(combo: Iterable[int]) -> int:
    mask = 0
    for v in combo:
        mask |= 1 << v
    return mask


def _set_of(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        bit = mask & -mask
        mask ^= bit
        out.add(bit.bit_length() - 1)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Parameter searches


@dataclass(frozen=True)
class ParameterReport:
    parameter: str
    value: int
    witnesses: tuple[frozenset[int], ...]
    exhausted: bool

    def to_json_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "value": self.value,
            "witnesses": [sorted(w) for w in self.witnesses],
            "exhausted": self.exhausted,
        }


_PARAM_NAMES = {
    Rule.STANDARD: "z",
    Rule.PSD: "zplus",
    Rule.POWER_DOMINATION: "pd",
}

_PT_NAMES = {
    Rule.STANDARD: "pt",
    Rule.PSD: "ptplus",
    Rule.POWER_DOMINATION: "ppt",
}


def forcing_number(g: Graph, rule: Rule, cap: int | None = None) -> ParameterReport:
    """Minimum size of a forcing set for the rule, with every witness of
    that size, by scanning subsets in ascending size."""
    rule = Rule(rule)
    if rule not in _ENGINES:
        raise ValueError(f"no forcing number for rule {rule.value}")
    _require_within_cap(g, cap)
    engine = _ENGINES[rule]
    adj = g.adjacency_masks()
    full = (1 << g.n) - 1
    for size in range(g.n + 1):
        witnesses = []
        for combo in combinations(range(g.n), size):
            _, rounds = engine(adj, full, _mask_of(combo))
            if rounds >= 0:
                witnesses.append(frozenset(combo))
        if witnesses:
            return ParameterReport(_PARAM_NAMES[rule], size, tuple(witnesses), True)
    raise InfeasibleError("no forcing set exists")  # unreachable: V(G) always works


def propagation_time_m(
    g: Graph, m: int, rule: Rule, cap: int | None = None
) -> ParameterReport:
    """Minimum propagation rounds over all size-m forcing sets, with every
    m-efficient witness (lexicographically least first)."""
    rule = Rule(rule)
    if rule not in _ENGINES:
        raise ValueError(f"no propagation time for rule {rule.value}")
    _require_within_cap(g, cap)
    if not 0 <= m <= g.n:
        raise InfeasibleError(f"no size-{m} subsets of {g.n} vertices")
    engine = _ENGINES[rule]
    adj = g.adjacency_masks()
    full = (1 << g.n) - 1
    best = None
    witnesses: list[frozenset[int]] = []
    for combo in combinations(range(g.n), m):
        _, rounds = engine(adj, full, _mask_of(combo))
        if rounds < 0:
            continue
        if best is None or rounds < best:
            best = rounds
            witnesses = [frozenset(combo)]
        elif rounds == best:
            witnesses.append(frozenset(combo))
    if best is None:
        raise InfeasibleError(f"no forcing set of size {m} exists")
    return ParameterReport(_PT_NAMES[rule], best, tuple(witnesses), True)


def throttling(g: Graph, rule: Rule, cap: int | None = None) -> ParameterReport:
    """Minimum of |B| + rounds(B) over all forcing sets B."""
    rule = Rule(rule)
    if rule not in (Rule.STANDARD, Rule.PSD):
        raise ValueError("throttling is computed for the standard and PSD rules")
    _require_within_cap(g, cap)
    engine = _ENGINES[rule]
    adj = g.adjacency_masks()
    full = (1 << g.n) - 1
    best = None
    witnesses: list[frozenset[int]] = []
    for size in range(g.n + 1):
        if best is not None and size >= best:
            break
        for combo in combinations(range(g.n), size):
            _, rounds = engine(adj, full, _mask_of(combo))
            if rounds < 0:
                continue
            total = size + rounds
            if best is None or total < best:
                best = total
                witnesses = [frozenset(combo)]
            elif total == best:
                witnesses.append(frozenset(combo))
    name = "thr" if rule is Rule.STANDARD else "thrplus"
    return ParameterReport(name, best, tuple(witnesses), True)


# ---------------------------------------------------------------------------
# Graph streams


def atlas_stream(
    max_n: int = 7, connected_only: bool = False
) -> Iterator[tuple[str, Graph]]:
    """Stream (graph_id, graph) for every simple graph on 1..max_n vertices
    (max_n <= 7), from the packaged graph6 data; ids are the graph6 strings."""
    if max_n > 7:
        raise CapExceeded("packaged graph stream covers n <= 7")
    text = (
        resources.files("forcelab").joinpath("data/graphs_n_le_7.g6").read_text()
    )
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        g = graph6_decode(line)
        if g.n > max_n:
            continue
        if connected_only and len(components(g)) != 1:
            continue
        yield line, g


def stream_from_file(path: str) -> Iterator[tuple[str, Graph]]:
    """Stream graphs from a file of graph6 lines."""
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield line, graph6_decode(line)


# ---------------------------------------------------------------------------
# Sweeps


BOUNDS_HEADER = (
    "graph_id",
    "n",
    "m",
    "Z",
    "pt",
    "bound",
    "pt_plus_achieved",
    "ppt_achieved",
    "status",
)


@dataclass(frozen=True)
class BoundsRow:
    graph_id: str
    n: int
    m: str
    z: int
    pt: str
    bound: int
    pt_plus_achieved: str
    ppt_achieved: str
    ok: bool

    def as_csv_fields(self) -> tuple[str, ...]:
        return (
            self.graph_id,
            str(self.n),
            self.m,
            str(self.z),
            self.pt,
            str(self.bound),
            self.pt_plus_achieved,
            self.ppt_achieved,
            "pass" if self.ok else "fail",
        )


def bounds_rows_for_graph(
    graph_id: str, g: Graph, checks: Iterable[str] = ("bounds", "thrplus", "zeq")
) -> list[BoundsRow]:
    """Rows checking the constructive propagation-time bounds on one graph.

    ``bounds``: for every m from the forcing number up to n, the slice
    constructions must achieve PSD and power propagation times at most
    ceil(pt(G, m)/2). ``thrplus``: exact PSD throttling is at most
    min_m(m + ceil(pt(G, m)/2)). ``zeq``: when the standard and PSD
    forcing numbers agree, exact minimum PSD propagation time is at most
    ceil(pt(G)/2). The last two appear as tagged rows (m = 'thr+', 'pt+').
    """
    from . import slices  # local import: slices builds on these solvers

    wanted = set(checks)
    unknown = wanted - {"bounds", "thrplus", "zeq"}
    if unknown:
        raise ValueError(f"unknown sweep checks: {sorted(unknown)}")
    cap = effective_cap(None, SWEEP_CAP)
    rows: list[BoundsRow] = []
    z = forcing_number(g, Rule.STANDARD, cap=cap).value
    pt_by_m: dict[int, int] = {}
    for m in range(z, g.n + 1):
        chron = slices._efficient_chronology(g, m, cap)
        pt_m = chron.ct
        pt_by_m[m] = pt_m
        if "bounds" not in wanted:
            continue
        bound = (pt_m + 1) // 2
        psd = slices.psd_set_from_slices(g, m, cap=cap, _chronology=chron)
        power = slices.power_set_from_slice(g, m, cap=cap, _chronology=chron)
        ok = psd.achieved <= bound and power.achieved <= bound
        rows.append(
            BoundsRow(
                graph_id,
                g.n,
                str(m),
                z,
                str(pt_m),
                bound,
                str(psd.achieved),
                str(power.achieved),
                ok,
            )
        )
    rhs = min(m + (pt_by_m[m] + 1) // 2 for m in pt_by_m)
    if "thrplus" in wanted:
        thr_plus = throttling(g, Rule.PSD, cap=cap).value
        rows.append(
            BoundsRow(
                graph_id, g.n, "thr+", z, str(thr_plus), rhs, "", "", thr_plus <= rhs
            )
        )
    if "zeq" in wanted:
        z_plus = forcing_number(g, Rule.PSD, cap=cap).value
        if z_plus == z:
            pt_plus_exact = propagation_time_m(g, z_plus, Rule.PSD, cap=cap).value
            bound = (pt_by_m[z] + 1) // 2
            rows.append(
                BoundsRow(
                    graph_id,
                    g.n,
                    "pt+",
                    z,
                    str(pt_plus_exact),
                    bound,
                    "",
                    "",
                    pt_plus_exact <= bound,
                )
            )
    return rows


def sweep_bounds(
    stream: Iterable[tuple[str, Graph]],
    checks: Iterable[str] = ("bounds", "thrplus", "zeq"),
    jobs: int = 1,
) -> Iterator[BoundsRow]:
    """Run the bound checks over a graph stream; with jobs > 1 the graphs
    are processed in a process pool and rows come back in input order."""
    checks = tuple(checks)
    if jobs <= 1:
        for graph_id, g in stream:
            yield from bounds_rows_for_graph(graph_id, g, checks)
        return
    import multiprocessing as mp

    items = [(graph_id, graph6_encode(g), checks) for graph_id, g in stream]
    with mp.Pool(jobs) as pool:
        for rows in pool.imap(_bounds_worker, items, chunksize=8):
            yield from rows


def _bounds_worker(item: tuple[str, str, tuple[str, ...]]) -> list[BoundsRow]:
    graph_id, g6, checks = item
    return bounds_rows_for_graph(graph_id, graph6_decode(g6), checks)


GRID_TABLE_HEADER = ("s", "t", "Z", "Zplus", "pt", "ptplus", "status")


def grid_table_rows(max_s: int = 7, ts=(1, 2, 3)) -> Iterator[tuple[str, ...]]:
    """Exact grid-family values against their closed forms.

    For grids (Cartesian products of two paths) with the short side at
    most 3, both forcing numbers equal min(s, t), the propagation time is
    max(s, t) - 1, and the PSD propagation time is ceil((max(s, t) - 1) / 2).
    Each row reports the solved values and whether all four match.
    """
    from .graphs import grid_graph

    for s in range(2, max_s + 1):
        for t in ts:
            g = grid_graph(s, t)
            cap = max(g.n, DEFAULT_CAP)
            lo, hi = min(s, t), max(s, t)
            z = forcing_number(g, Rule.STANDARD, cap=cap).value
            z_plus = forcing_number(g, Rule.PSD, cap=cap).value
            pt = propagation_time_m(g, z, Rule.STANDARD, cap=cap).value
            pt_plus = propagation_time_m(g, z_plus, Rule.PSD, cap=cap).value
            ok = (
                z == lo
                and z_plus == lo
                and pt == hi - 1
                and pt_plus == (hi - 1 + 1) // 2
            )
            yield (
                str(s),
                str(t),
                str(z),
                str(z_plus),
                str(pt),
                str(pt_plus),
                "pass" if ok else "fail",
            )


PARAMETER_HEADER = (
    "graph_id",
    "n",
    "edges_hash",
    "parameter",
    "value",
    "witness",
    "runtime_ms",
)


def edges_hash(g: Graph) -> str:
    text = ";".join(f"{u},{v}" for u, v in g.edges())
    return hashlib.sha1(text.encode()).hexdigest()[:10]


def parameter_rows(
    stream: Iterable[tuple[str, Graph]],
    params: Iterable[str],
    cap: int | None = None,
) -> Iterator[tuple[str, ...]]:
    """Tabulate solver parameters over a graph stream as CSV field tuples.

    Supported params: z, zplus, pd, pt, ptplus, ppt, thr, thrplus. The
    witness column holds the canonical (first) optimal set as id-id-...;
    pt variants run at m equal to the corresponding forcing number.
    """
    params = tuple(params)
    for graph_id, g in stream:
        for param in params:
            start = time.perf_counter()
            report = solve_parameter(g, param, m=None, cap=cap)
            ms = int((time.perf_counter() - start) * 1000)
            witness = "-".join(map(str, sorted(report.witnesses[0])))
            yield (
                graph_id,
                str(g.n),
                edges_hash(g),
                report.parameter,
                str(report.value),
                witness,
                str(ms),
            )


_RULE_OF_PARAM = {
    "z": Rule.STANDARD,
    "zplus": Rule.PSD,
    "pd": Rule.POWER_DOMINATION,
    "pt": Rule.STANDARD,
    "ptplus": Rule.PSD,
    "ppt": Rule.POWER_DOMINATION,
    "thr": Rule.STANDARD,
    "thrplus": Rule.PSD,
}


def solve_parameter(
    g: Graph, param: str, m: int | None = None, cap: int | None = None
) -> ParameterReport:
    """Dispatch a named parameter to the matching exhaustive search."""
    if param not in _RULE_OF_PARAM:
        raise ValueError(f"unknown parameter {param!r}")
    rule = _RULE_OF_PARAM[param]
    if param in ("z", "zplus", "pd"):
        return forcing_number(g, rule, cap=cap)
    if param in ("pt", "ptplus", "ppt"):
        if m is None:
            m = forcing_number(g, rule, cap=cap).value
        return propagation_time_m(g, m, rule, cap=cap)
    return throttling(g, rule, cap=cap)
