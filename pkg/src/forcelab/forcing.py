"""Color change processes and relaxed forcing schedules.

A relaxed schedule (``RelaxedChronology``) is an ordered list of force
sets: at each step any subset of the currently legal forces may fire,
including none. It generalizes both one-force-at-a-time lists and
maximal per-step propagation, and is the object every other module
consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

from .errors import ChronologyError, InfeasibleError, InvariantViolation
from .graphs import Graph, boundary, components


class Rule(str, Enum):
    """Which color change process a schedule or search uses.

    POWER_DOMINATION is a process tag, not a per-step rule: its first
    step colors the closed neighborhood of the base set and every later
    step applies the STANDARD rule.
    """

    STANDARD = "standard"
    PSD = "psd"
    POWER_DOMINATION = "power_domination"
    RIGID_LINKAGE = "rigid_linkage"

    @classmethod
    def from_token(cls, token: str) -> "Rule":
        table = {
            "z": cls.STANDARD,
            "zplus": cls.PSD,
            "pd": cls.POWER_DOMINATION,
            "rl": cls.RIGID_LINKAGE,
        }
        try:
            return table[token]
        except KeyError:
            raise ValueError(f"unknown rule token {token!r}") from None


class Force(NamedTuple):
    src: int
    dst: int


def _norm_steps(steps: Iterable[Iterable]) -> tuple[tuple[Force, ...], ...]:
    out = []
    for step in steps:
        forces = sorted(Force(int(s), int(d)) for s, d in step)
        out.append(tuple(forces))
    return tuple(out)


@dataclass(frozen=True)
class RelaxedChronology:
    """An ordered family of force sets for a base set of blue vertices.

    Steps are normalized on construction: within a step forces are sorted
    by (src, dst), which also fixes the serialized JSON form. Construction
    does not validate against a graph; use :func:`validate_chronology`.
    """

    rule: Rule
    base: frozenset[int]
    steps: tuple[tuple[Force, ...], ...]

    def __init__(self, rule: Rule, base: Iterable[int], steps: Iterable[Iterable]):
        object.__setattr__(self, "rule", Rule(rule))
        object.__setattr__(self, "base", frozenset(base))
        object.__setattr__(self, "steps", _norm_steps(steps))

    @property
    def ct(self) -> int:
        """Completion time: the number of stored steps."""
        return len(self.steps)

    def all_forces(self) -> tuple[Force, ...]:
        """All forces serialized chronologically (within-step (src, dst) order)."""
        return tuple(f for step in self.steps for f in step)

    def force_set(self) -> frozenset[Force]:
        return frozenset(self.all_forces())

    def to_json_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "base": sorted(self.base),
            "steps": [[[f.src, f.dst] for f in step] for step in self.steps],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RelaxedChronology":
        return cls(Rule(data["rule"]), data["base"], data["steps"])


def possible_forces(
    rule: Rule,
    g: Graph,
    blue: Iterable[int],
    inactive: Iterable[int] = (),
) -> frozenset[Force]:
    """All forces the given rule permits when exactly ``blue`` is colored.

    ``inactive`` (vertices that have already performed a force) only
    matters for the rigid-linkage rule and is ignored otherwise.
    """
    rule = Rule(rule)
    b = g.check_set(blue)
    if rule is Rule.POWER_DOMINATION:
        raise ValueError(
            "power domination is a process tag; it has no per-step force set"
        )
    out: set[Force] = set()
    if rule is Rule.STANDARD:
        for u in b:
            whites = [w for w in g.adj[u] if w not in b]
            if len(whites) == 1:
                out.add(Force(u, whites[0]))
        return frozenset(out)
    white_comps = components(g, removed=b)
    if rule is Rule.PSD:
        for comp in white_comps:
            for u in b:
                inside = [w for w in g.adj[u] if w in comp]
                if len(inside) == 1:
                    out.add(Force(u, inside[0]))
        return frozenset(out)
    # Rigid linkage: only components whose boundary is free of inactive
    # blue vertices may receive a force, and only active vertices force.
    idle = g.check_set(inactive)
    if not idle <= b:
        raise ValueError("inactive vertices must be blue")
    active = b - idle
    for comp in white_comps:
        if boundary(g, comp) & idle:
            continue
        for u in active:
            inside = [w for w in g.adj[u] if w in comp]
            if len(inside) == 1:
                out.add(Force(u, inside[0]))
    return frozenset(out)


def validate_chronology(g: Graph, chron: RelaxedChronology) -> list[frozenset[int]]:
    """Replay ``chron`` on ``g`` and return its expansion sequence.

    Checks, step by step: every force is legal for the current blue set,
    no two forces in a step share a target, and every vertex ends up blue.
    Raises :class:`ChronologyError` naming the first offending step/force.
    """
    if chron.rule not in (Rule.STANDARD, Rule.PSD, Rule.RIGID_LINKAGE):
        raise ValueError(f"cannot validate schedules for rule {chron.rule.value}")
    blue = set(g.check_set(chron.base))
    expansion = [frozenset(blue)]
    inactive: set[int] = set()
    has_forced: set[int] = set()
    for k, step in enumerate(chron.steps, start=1):
        if chron.rule is Rule.RIGID_LINKAGE and len(step) > 1:
            raise ChronologyError(
                f"step {k}: rigid-linkage steps carry at most one force", step=k
            )
        legal = possible_forces(chron.rule, g, blue, inactive)
        dsts = set()
        for f in step:
            if f.dst in dsts:
                raise ChronologyError(
                    f"step {k}: two forces target vertex {f.dst}", step=k, force=f
                )
            if f not in legal:
                raise ChronologyError(
                    f"step {k}: force {f.src}->{f.dst} is not legal there",
                    step=k,
                    force=f,
                )
            if chron.rule is Rule.STANDARD and f.src in has_forced:
                raise ChronologyError(
                    f"step {k}: vertex {f.src} forces a second time", step=k, force=f
                )
            dsts.add(f.dst)
        for f in step:
            blue.add(f.dst)
            has_forced.add(f.src)
            if chron.rule is Rule.RIGID_LINKAGE:
                inactive.add(f.src)
        expansion.append(frozenset(blue))
    if len(blue) != g.n:
        white = sorted(set(range(g.n)) - blue)
        raise ChronologyError(
            f"white vertices remain after the last step: {white}", step=chron.ct
        )
    return expansion


@dataclass(frozen=True)
class PropagationResult:
    ok: bool
    chronology: RelaxedChronology | None
    pt: int | None
    blue: frozenset[int]


def _maximal_step(rule: Rule, g: Graph, blue: set[int]) -> list[Force]:
    """All forceable vertices this step, each forced by its least source."""
    choice: dict[int, int] = {}
    for f in possible_forces(rule, g, blue):
        if f.dst not in choice or f.src < choice[f.dst]:
            choice[f.dst] = f.src
    return [Force(s, d) for d, s in choice.items()]


def propagate(rule: Rule, g: Graph, base: Iterable[int]) -> PropagationResult:
    """Run the full propagation process for ``rule`` from ``base``.

    STANDARD and PSD perform every possible force at each time-step,
    breaking forcer ties toward the smallest source id. POWER_DOMINATION
    colors the closed neighborhood first and then runs STANDARD steps.
    RIGID_LINKAGE replays greedily, one least-(src, dst) force per step;
    note RL completion can depend on force order, so a greedy stall does
    not prove the base set is not RL-forcing.

    On success ``pt`` counts the time-steps taken (per-rule propagation
    time). On failure ``blue`` holds the stalled blue set.
    """
    rule = Rule(rule)
    blue = set(g.check_set(base))
    steps: list[tuple[Force, ...]] = []
    if rule is Rule.POWER_DOMINATION:
        if len(blue) < g.n:
            first: dict[int, int] = {}
            for v in sorted(blue):
                for w in g.adj[v]:
                    if w not in blue and w not in first:
                        first[w] = v
            if not first:
                return PropagationResult(False, None, None, frozenset(blue))
            steps.append(tuple(sorted(Force(s, d) for d, s in first.items())))
            blue.update(first)
        inner = Rule.STANDARD
    elif rule is Rule.RIGID_LINKAGE:
        inactive: set[int] = set()
        while len(blue) < g.n:
            legal = possible_forces(rule, g, blue, inactive)
            if not legal:
                return PropagationResult(False, None, None, frozenset(blue))
            f = min(legal)
            steps.append((f,))
            blue.add(f.dst)
            inactive.add(f.src)
        chron = RelaxedChronology(rule, frozenset(g.check_set(base)), steps)
        return PropagationResult(True, chron, len(steps), frozenset(blue))
    else:
        inner = rule
    while len(blue) < g.n:
        fired = _maximal_step(inner, g, blue)
        if not fired:
            return PropagationResult(False, None, None, frozenset(blue))
        steps.append(tuple(sorted(fired)))
        blue.update(f.dst for f in fired)
    chron = RelaxedChronology(rule, frozenset(g.check_set(base)), steps)
    return PropagationResult(True, chron, len(steps), frozenset(blue))


# ---------------------------------------------------------------------------
# Activity bookkeeping (standard rule)


def activity_spans(g: Graph, chron: RelaxedChronology) -> list[tuple[int, int]]:
    """Per vertex, the inclusive interval [first, last] of its active times.

    A vertex is active at step k when it is blue after step k and has not
    yet performed a force. Every vertex of a valid standard schedule has a
    nonempty interval; a terminal vertex stays active through step K.
    """
    if chron.rule is not Rule.STANDARD:
        raise ValueError("active times are defined for the standard rule")
    validate_chronology(g, chron)
    k_total = chron.ct
    first = [0 if v in chron.base else -1 for v in range(g.n)]
    last = [k_total] * g.n
    for k, step in enumerate(chron.steps, start=1):
        for f in step:
            if first[f.dst] == -1:
                first[f.dst] = k
            last[f.src] = k - 1
    return list(zip(first, last))


def active_times(g: Graph, chron: RelaxedChronology, v: int) -> frozenset[int]:
    """The set of time-steps at which ``v`` is active."""
    g.check_vertex(v)
    lo, hi = activity_spans(g, chron)[v]
    return frozenset(range(lo, hi + 1))


# ---------------------------------------------------------------------------
# Chains, trees, terminus, reversal


@dataclass(frozen=True)
class ForcingTree:
    root: int
    vertices: frozenset[int]
    parent_edges: tuple[tuple[int, int], ...]  # (child, parent) pairs


@dataclass(frozen=True)
class ForcingCover:
    """Chains (standard / rigid-linkage) or trees (PSD) traced by a schedule;
    one per base vertex, ordered by base vertex."""

    rule: Rule
    chains: tuple[tuple[int, ...], ...] | None
    trees: tuple[ForcingTree, ...] | None

    def vertex_sets(self) -> list[frozenset[int]]:
        if self.chains is not None:
            return [frozenset(c) for c in self.chains]
        return [t.vertices for t in self.trees]


def forcing_cover(g: Graph, chron: RelaxedChronology) -> ForcingCover:
    """Build the chain set or forcing-tree cover defined by a valid schedule."""
    validate_chronology(g, chron)
    forces = chron.all_forces()
    if chron.rule in (Rule.STANDARD, Rule.RIGID_LINKAGE):
        nxt: dict[int, int] = {}
        for f in forces:
            if f.src in nxt:
                raise InvariantViolation(f"vertex {f.src} forces twice")
            nxt[f.src] = f.dst
        chains = []
        for b in sorted(chron.base):
            chain = [b]
            while chain[-1] in nxt:
                chain.append(nxt[chain[-1]])
            chains.append(tuple(chain))
        _check_chain_cover(g, chron, chains)
        return ForcingCover(chron.rule, tuple(chains), None)
    if chron.rule is Rule.PSD:
        children: dict[int, list[int]] = {}
        parent: dict[int, int] = {}
        for f in forces:
            children.setdefault(f.src, []).append(f.dst)
            parent[f.dst] = f.src
        trees = []
        covered: set[int] = set()
        for b in sorted(chron.base):
            verts = {b}
            stack = [b]
            edges = []
            while stack:
                u = stack.pop()
                for w in children.get(u, ()):
                    verts.add(w)
                    edges.append((w, u))
                    stack.append(w)
            if len(edges) != len(verts) - 1:
                raise InvariantViolation(f"forcing tree at {b} is not a tree")
            trees.append(ForcingTree(b, frozenset(verts), tuple(sorted(edges))))
            covered |= verts
        if len(covered) != g.n or sum(len(t.vertices) for t in trees) != g.n:
            raise InvariantViolation("forcing trees do not partition the vertices")
        return ForcingCover(chron.rule, None, tuple(trees))
    raise ValueError(f"no forcing cover for rule {chron.rule.value}")


def _check_chain_cover(g, chron, chains) -> None:
    covered: set[int] = set()
    for chain in chains:
        covered.update(chain)
        for i in range(len(chain)):
            for j in range(i + 2, len(chain)):
                if g.has_edge(chain[i], chain[j]):
                    raise InvariantViolation(
                        f"chain through {chain[0]} is not an induced path"
                    )
    if len(covered) != g.n:
        raise InvariantViolation("chains do not partition the vertices")
    if len(chains) != len(chron.base):
        raise InvariantViolation("chain count differs from the base size")


def terminus(g: Graph, chron: RelaxedChronology) -> frozenset[int]:
    """Vertices of a valid standard schedule that never perform a force."""
    if chron.rule is not Rule.STANDARD:
        raise ValueError("terminus is defined for the standard rule")
    validate_chronology(g, chron)
    srcs = {f.src for f in chron.all_forces()}
    term = frozenset(v for v in range(g.n) if v not in srcs)
    if len(term) != len(chron.base):
        raise InvariantViolation("terminus size differs from the base size")
    return term


def reversal(g: Graph, chron: RelaxedChronology) -> RelaxedChronology:
    """Reverse all forces and time-steps; the result is a valid schedule
    for the terminus, with the same completion time."""
    term = terminus(g, chron)
    k_total = chron.ct
    rev_steps = [
        tuple(Force(f.dst, f.src) for f in chron.steps[k_total - k])
        for k in range(1, k_total + 1)
    ]
    rev = RelaxedChronology(Rule.STANDARD, term, rev_steps)
    try:
        validate_chronology(g, rev)
    except ChronologyError as exc:
        raise InvariantViolation(f"reversal failed to validate: {exc}") from exc
    return rev


def propagation_time_of_forces(
    g: Graph, base: Iterable[int], forces: Iterable[Force], rule: Rule
) -> int:
    """Least number of rounds in which the given force set colors the graph,
    firing every currently-legal force from the set each round.

    Raises :class:`InfeasibleError` if the set stalls before finishing;
    forces that never become applicable are an error, not ignored.
    """
    rule = Rule(rule)
    if rule not in (Rule.STANDARD, Rule.PSD):
        raise ValueError("force-set propagation time needs the standard or PSD rule")
    blue = set(g.check_set(base))
    pool = {Force(int(s), int(d)) for s, d in forces}
    rounds = 0
    while len(blue) < g.n:
        legal = possible_forces(rule, g, blue)
        fired = {f for f in pool if f in legal}
        if not fired:
            raise InfeasibleError(
                "force set cannot color the remaining vertices",
                blue=frozenset(blue),
            )
        blue.update(f.dst for f in fired)
        rounds += 1
    return rounds


def restriction_initials(
    g: Graph, chron: RelaxedChronology, sub_vertices: Iterable[int]
) -> frozenset[int]:
    """Initial vertices of the chain/tree pieces of ``chron`` inside a
    vertex subset: base vertices, plus vertices whose forcer lies outside.

    (A forcer is adjacent to its target inside its own chain or tree, so
    "outside the piece" and "outside the subset" coincide.)
    """
    h = g.check_set(sub_vertices)
    validate_chronology(g, chron)
    parent: dict[int, int] = {}
    for f in chron.all_forces():
        parent[f.dst] = f.src
    out = set()
    for u in h:
        if u in chron.base or parent[u] not in h:
            out.add(u)
    return frozenset(out)
