"""Restrictions of forcing schedules to induced subgraphs, path bundles,
the PSD analog of schedule reversal, and rigid-linkage certificates.

A path bundle picks one path inside each PSD forcing tree so that the
restricted schedule is valid standard forcing on the picked vertices.
The bundle induced by a target vertex x follows the forces entering x's
white component; reversing its in-bundle forces relocates the PSD
forcing set onto x while preserving the forcing trees, and replaying the
bundle forces one at a time certifies the bundle as a rigid linkage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import BundleError, ChronologyError, InvariantViolation
from .forcing import (
    Force,
    RelaxedChronology,
    Rule,
    forcing_cover,
    possible_forces,
    restriction_initials,
    validate_chronology,
)
from .graphs import Graph, induced_subgraph, is_path_sequence


@dataclass(frozen=True)
class Restriction:
    """A schedule filtered to a vertex subset, time-step indices intact.

    ``rule`` is the rule under which the restricted steps replay (for a
    plain restriction this matches the host; a path bundle's restriction
    replays under the standard rule).
    """

    rule: Rule
    sub_vertices: frozenset[int]
    steps: tuple[tuple[Force, ...], ...]
    initial_vertices: frozenset[int]

    @property
    def ct(self) -> int:
        return len(self.steps)

    def subgraph_chronology(self, g: Graph):
        """Induced subgraph plus the restriction re-indexed to it."""
        sub = induced_subgraph(g, self.sub_vertices)
        local = {old: new for new, old in enumerate(sub.vertices)}
        chron = RelaxedChronology(
            self.rule,
            {local[v] for v in self.initial_vertices},
            [[(local[f.src], local[f.dst]) for f in step] for step in self.steps],
        )
        return sub, chron


def _filtered_steps(chron: RelaxedChronology, keep: frozenset[int]):
    return tuple(
        tuple(f for f in step if f.src in keep and f.dst in keep)
        for step in chron.steps
    )


def restrict(
    g: Graph, chron: RelaxedChronology, sub_vertices: Iterable[int]
) -> Restriction:
    """Restrict a valid standard or PSD schedule to an induced subgraph.

    The result replays as a valid schedule of the same rule on the
    subgraph from its initial vertices; that is guaranteed for every
    induced subgraph, so a replay failure raises InvariantViolation.
    """
    if chron.rule not in (Rule.STANDARD, Rule.PSD):
        raise ValueError("restriction is defined for standard and PSD schedules")
    keep = g.check_set(sub_vertices)
    initials = restriction_initials(g, chron, keep)
    r = Restriction(chron.rule, keep, _filtered_steps(chron, keep), initials)
    sub, sub_chron = r.subgraph_chronology(g)
    try:
        validate_chronology(sub.graph, sub_chron)
    except ChronologyError as exc:
        raise InvariantViolation(
            f"restriction failed to replay on its subgraph: {exc}"
        ) from exc
    return r


@dataclass(frozen=True)
class PathBundle:
    """One path per PSD forcing tree whose restricted schedule is valid
    standard forcing. Paths are oriented from their initial vertices."""

    paths: tuple[tuple[int, ...], ...]
    restriction: Restriction

    @property
    def sub_vertices(self) -> frozenset[int]:
        return self.restriction.sub_vertices

    def terminus(self) -> frozenset[int]:
        return frozenset(p[-1] for p in self.paths)

    def to_json_dict(self, host_ref: str = "", x: int | None = None) -> dict:
        return {
            "host_chronology_ref": host_ref,
            "x": x,
            "paths": [list(p) for p in self.paths],
            "terminus": sorted(self.terminus()),
        }


def _bundle_from_paths(
    g: Graph,
    chron: RelaxedChronology,
    paths: list[tuple[int, ...]],
    error,
) -> PathBundle:
    """Shared construction: restrict to the path vertices, demand standard
    validity, and demand the restricted chain set equal the paths."""
    keep = frozenset(v for p in paths for v in p)
    initials = restriction_initials(g, chron, keep)
    r = Restriction(Rule.STANDARD, keep, _filtered_steps(chron, keep), initials)
    sub, sub_chron = r.subgraph_chronology(g)
    try:
        validate_chronology(sub.graph, sub_chron)
    except ChronologyError as exc:
        raise error(f"restricted schedule is not standard-valid: {exc}") from exc
    sub_cover = forcing_cover(sub.graph, sub_chron)
    chains = {tuple(sub.vertices[v] for v in c) for c in sub_cover.chains}
    wanted = set()
    oriented: list[tuple[int, ...]] = []
    for p in paths:
        if p in chains:
            oriented.append(p)
            wanted.add(p)
        elif p[::-1] in chains:
            oriented.append(p[::-1])
            wanted.add(p[::-1])
        else:
            raise error(
                f"chain set mismatch: path {list(p)} is not a restricted chain"
            )
    if chains != wanted:
        raise error("chain set mismatch: restriction has extra chains")
    return PathBundle(tuple(oriented), r)


def validate_path_bundle(
    g: Graph, chron: RelaxedChronology, candidate_paths: Iterable[Iterable[int]]
) -> PathBundle:
    """Check one candidate path per PSD forcing tree and assemble the bundle.

    Rejections (BundleError): a candidate is not a path, lies outside or
    across trees, the restricted schedule is not valid standard forcing,
    or its chains differ from the candidates.
    """
    if chron.rule is not Rule.PSD:
        raise ValueError("path bundles are defined over PSD schedules")
    cover = forcing_cover(g, chron)
    paths = [tuple(p) for p in candidate_paths]
    if len(paths) != len(cover.trees):
        raise BundleError(
            f"need exactly one path per tree ({len(cover.trees)}), got {len(paths)}"
        )
    by_tree: dict[int, tuple[int, ...]] = {}
    for p in paths:
        if not p:
            raise BundleError("empty candidate path")
        if not is_path_sequence(g, p):
            raise BundleError(f"candidate {list(p)} is not a path")
        homes = [i for i, t in enumerate(cover.trees) if set(p) <= t.vertices]
        if not homes:
            raise BundleError(f"candidate {list(p)} is not inside a single tree")
        if homes[0] in by_tree:
            raise BundleError(
                f"two candidates inside the tree rooted at {cover.trees[homes[0]].root}"
            )
        by_tree[homes[0]] = p
    ordered = [by_tree[i] for i in range(len(cover.trees))]
    return _bundle_from_paths(g, chron, ordered, BundleError)


def induced_path_bundle(g: Graph, chron: RelaxedChronology, x: int) -> PathBundle:
    """Grow the bundle that tracks forces into the white component of ``x``.

    Start from single-vertex paths on the base set; at each step append to
    a path exactly when its endpoint forces into x's current component;
    stop once x is blue. The result always contains the base set and x.
    For a base vertex the bundle is the trivial one.
    """
    g.check_vertex(x)
    if chron.rule is not Rule.PSD:
        raise ValueError("vertex-induced bundles are defined over PSD schedules")
    expansion = validate_chronology(g, chron)
    cover = forcing_cover(g, chron)
    tree_of = {}
    for i, t in enumerate(cover.trees):
        for v in t.vertices:
            tree_of[v] = i
    rd = next(k for k, blue in enumerate(expansion) if x in blue)
    paths = [[t.root] for t in cover.trees]
    ends = [t.root for t in cover.trees]
    for k in range(rd):
        blue = expansion[k]
        comp = _component_of(g, x, blue)
        # At most one vertex per tree may see white vertices in x's
        # component; anything else means the schedule is corrupt.
        for i, t in enumerate(cover.trees):
            lookers = {
                u
                for u in t.vertices & blue
                if any(w in comp for w in g.adj[u])
            }
            if len(lookers) > 1:
                raise InvariantViolation(
                    f"tree {t.root}: several vertices {sorted(lookers)} see "
                    f"the target component at step {k}"
                )
        grown: set[int] = set()
        for f in chron.steps[k]:
            if f.dst not in comp:
                continue
            i = tree_of[f.src]
            if i in grown:
                raise InvariantViolation(
                    f"tree {cover.trees[i].root} forces twice into the target "
                    f"component at step {k + 1}"
                )
            if f.src != ends[i]:
                raise InvariantViolation(
                    f"force {f.src}->{f.dst} does not extend the bundle path "
                    f"ending at {ends[i]}"
                )
            paths[i].append(f.dst)
            ends[i] = f.dst
            grown.add(i)
    try:
        bundle = _bundle_from_paths(
            g, chron, [tuple(p) for p in paths], BundleError
        )
    except BundleError as exc:
        raise InvariantViolation(f"induced bundle failed validation: {exc}") from exc
    if x not in bundle.sub_vertices or not chron.base <= bundle.sub_vertices:
        raise InvariantViolation("induced bundle must contain the base set and x")
    return bundle


def _component_of(g: Graph, x: int, blue: frozenset[int]) -> frozenset[int]:
    comp = {x}
    stack = [x]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w not in blue and w not in comp:
                comp.add(w)
                stack.append(w)
    return frozenset(comp)


def psd_reversal(
    g: Graph, chron: RelaxedChronology, x: int
) -> tuple[frozenset[int], RelaxedChronology]:
    """Relocate a PSD forcing set onto ``x``.

    Take the bundle induced by x, reverse its forces (one per step, newest
    first), then replay the remaining host forces greedily in their
    original order, deferring any force that is not yet legal. The new
    base is the bundle terminus: same size as the original and containing
    x. The rebuilt schedule is validated before being returned.
    """
    bundle = induced_path_bundle(g, chron, x)
    new_base = bundle.terminus()
    in_bundle = [f for step in bundle.restriction.steps for f in step]
    new_steps: list[tuple[Force, ...]] = [
        (Force(f.dst, f.src),) for f in reversed(in_bundle)
    ]
    blue = set(bundle.sub_vertices)
    pending = [f for f in chron.all_forces() if f not in set(in_bundle)]
    while pending:
        legal = possible_forces(Rule.PSD, g, blue)
        fired: list[Force] = []
        taken: set[int] = set()
        still: list[Force] = []
        for f in pending:
            if f in legal and f.dst not in taken:
                fired.append(f)
                taken.add(f.dst)
            else:
                still.append(f)
        if not fired:
            raise InvariantViolation(
                "preserved forces stalled while rebuilding the schedule"
            )
        new_steps.append(tuple(sorted(fired)))
        blue.update(f.dst for f in fired)
        pending = still
    new_chron = RelaxedChronology(Rule.PSD, new_base, new_steps)
    try:
        validate_chronology(g, new_chron)
    except ChronologyError as exc:
        raise InvariantViolation(f"rebuilt schedule failed to validate: {exc}") from exc
    if len(new_base) != len(chron.base) or x not in new_base:
        raise InvariantViolation("relocated base must keep its size and contain x")
    return new_base, new_chron


def relocate_psd_set(
    g: Graph, chron: RelaxedChronology, v: int
) -> tuple[frozenset[int], RelaxedChronology]:
    """PSD reversal plus a check that the forcing trees are unchanged
    (same vertex sets, same edges; roots move)."""
    new_base, new_chron = psd_reversal(g, chron, v)
    if _unrooted_trees(g, chron) != _unrooted_trees(g, new_chron):
        raise InvariantViolation("relocation changed the forcing trees")
    return new_base, new_chron


def _unrooted_trees(g: Graph, chron: RelaxedChronology):
    cover = forcing_cover(g, chron)
    shapes = set()
    for t in cover.trees:
        edges = frozenset(frozenset(e) for e in t.parent_edges)
        shapes.add((t.vertices, edges))
    return shapes


@dataclass(frozen=True)
class RlCertificate:
    """A replayed rigid-linkage process: the bundle paths are the unique
    linkage between ``alpha`` (the base) and ``beta`` (the terminus)."""

    alpha: frozenset[int]
    beta: frozenset[int]
    steps: tuple[Force, ...]
    valid: bool

    def to_json_dict(self) -> dict:
        return {
            "alpha": sorted(self.alpha),
            "beta": sorted(self.beta),
            "steps": [[f.src, f.dst] for f in self.steps],
            "verdict": "valid" if self.valid else "invalid",
        }


def certify_rigid_linkage(g: Graph, chron: RelaxedChronology, x: int) -> RlCertificate:
    """Certify the bundle induced by ``x`` as a rigid linkage.

    First rebuild the host schedule as a one-force-per-step list with the
    bundle forces up front (the reordering stays PSD-valid), then replay
    just the bundle forces from the base under the rigid-linkage rule.
    Any illegal step is an InvariantViolation: the certificate is
    guaranteed for valid inputs.
    """
    bundle = induced_path_bundle(g, chron, x)
    in_bundle = [f for step in bundle.restriction.steps for f in step]
    rest = [f for f in chron.all_forces() if f not in set(in_bundle)]
    reordered = RelaxedChronology(
        Rule.PSD, chron.base, [(f,) for f in in_bundle + rest]
    )
    try:
        validate_chronology(g, reordered)
    except ChronologyError as exc:
        raise InvariantViolation(
            f"bundle-first reordering is not PSD-valid: {exc}"
        ) from exc
    blue = set(chron.base)
    inactive: set[int] = set()
    for idx, f in enumerate(in_bundle, start=1):
        legal = possible_forces(Rule.RIGID_LINKAGE, g, blue, inactive)
        if f not in legal:
            raise InvariantViolation(
                f"bundle force {idx} ({f.src}->{f.dst}) is not a legal "
                f"rigid-linkage force"
            )
        blue.add(f.dst)
        inactive.add(f.src)
    return RlCertificate(
        frozenset(chron.base), bundle.terminus(), tuple(in_bundle), True
    )


# ---------------------------------------------------------------------------
# Independent linkage enumeration (rigidity oracle)


@dataclass(frozen=True)
class LinkageSearch:
    linkages: tuple[tuple[tuple[int, ...], ...], ...]
    truncated: bool


def find_linkages(
    g: Graph, alpha: Iterable[int], beta: Iterable[int], limit: int = 10000
) -> LinkageSearch:
    """Enumerate all vertex-disjoint path systems joining ``alpha`` to
    ``beta`` (one endpoint of each path in alpha, the other in beta).

    Paths are plain paths, not necessarily induced. Each linkage is
    returned as a canonically ordered tuple of paths (each path oriented
    with its smaller endpoint first, paths sorted); enumeration stops with
    ``truncated=True`` once ``limit`` linkages are found.
    """
    a_set = g.check_set(alpha)
    b_set = g.check_set(beta)
    if len(a_set) != len(b_set):
        raise ValueError("alpha and beta must have the same size")
    order = sorted(a_set)
    found: set[tuple[tuple[int, ...], ...]] = set()
    truncated = False

    def canon(paths: list[tuple[int, ...]]):
        normed = tuple(
            sorted(p if p[0] <= p[-1] else p[::-1] for p in paths)
        )
        return normed

    def place(i: int, used: set[int], beta_left: set[int], acc: list):
        nonlocal truncated
        if truncated:
            return
        if i == len(order):
            found.add(canon(acc))
            if len(found) >= limit:
                truncated = True
            return
        start = order[i]
        if start in used:
            return

        def extend(path: list[int]):
            if truncated:
                return
            tip = path[-1]
            if tip in beta_left:
                acc.append(tuple(path))
                beta_left.discard(tip)
                place(i + 1, used | set(path), beta_left, acc)
                beta_left.add(tip)
                acc.pop()
            for w in g.adj[tip]:
                if w not in used and w not in path:
                    path.append(w)
                    extend(path)
                    path.pop()

        extend([start])

    place(0, set(), set(b_set), [])
    return LinkageSearch(tuple(sorted(found)), truncated)
