import csv
import io
from random import Random

import pytest

from forcelab.errors import CapExceeded, InfeasibleError
from forcelab.forcing import Rule, propagate
from forcelab.graphs import (
    complete_graph,
    components,
    cycle_graph,
    grid_graph,
    path_graph,
    petersen_graph,
    star_graph,
)
from forcelab.solvers import (
    BOUNDS_HEADER,
    atlas_stream,
    bounds_rows_for_graph,
    edges_hash,
    forcing_number,
    parameter_rows,
    propagation_time_m,
    rounds_from_mask,
    solve_parameter,
    sweep_bounds,
    throttling,
)
from randgen import random_graph


class TestForcingNumbers:
    def test_paths(self):
        for n in (1, 3, 7):
            assert forcing_number(path_graph(n), Rule.STANDARD).value == 1
            assert forcing_number(path_graph(n), Rule.PSD).value == 1

    def test_complete(self):
        assert forcing_number(complete_graph(5), Rule.STANDARD).value == 4

    def test_cycle(self):
        assert forcing_number(cycle_graph(6), Rule.STANDARD).value == 2

    def test_petersen(self):
        assert forcing_number(petersen_graph(), Rule.STANDARD).value == 5

    def test_star_psd_vs_standard(self):
        g = star_graph(4)
        assert forcing_number(g, Rule.STANDARD).value == 3
        assert forcing_number(g, Rule.PSD).value == 1

    def test_power_domination_star(self):
        assert forcing_number(star_graph(4), Rule.POWER_DOMINATION).value == 1

    def test_empty_graph(self):
        from forcelab.graphs import Graph

        rep = forcing_number(Graph(0), Rule.STANDARD)
        assert rep.value == 0 and rep.witnesses == (frozenset(),)

    def test_witnesses_all_replay(self):
        g = cycle_graph(5)
        rep = forcing_number(g, Rule.STANDARD)
        assert rep.exhausted
        for witness in rep.witnesses:
            assert len(witness) == rep.value
            assert propagate(Rule.STANDARD, g, witness).ok

    def test_psd_never_exceeds_standard(self):
        rng = Random(101)
        for _ in range(30):
            g = random_graph(rng, rng.randint(1, 8), 0.35)
            z = forcing_number(g, Rule.STANDARD).value
            zp = forcing_number(g, Rule.PSD).value
            pd = forcing_number(g, Rule.POWER_DOMINATION).value
            assert zp <= z
            assert pd <= z

    def test_cap_refusal_and_env_override(self, monkeypatch):
        g = path_graph(18)
        with pytest.raises(CapExceeded):
            forcing_number(g, Rule.STANDARD)
        assert forcing_number(g, Rule.STANDARD, cap=18).value == 1
        monkeypatch.setenv("FORCELAB_CAP", "18")
        assert forcing_number(g, Rule.STANDARD).value == 1


class TestPropagationTimes:
    def test_path_single_source(self):
        for n in (2, 5, 9):
            assert propagation_time_m(path_graph(n), 1, Rule.STANDARD).value == n - 1

    def test_grids_match_closed_forms(self):
        for s in range(2, 6):
            for t in (1, 2, 3):
                g = grid_graph(s, t)
                mn, mx = min(s, t), max(s, t)
                assert forcing_number(g, Rule.STANDARD, cap=21).value == mn
                assert forcing_number(g, Rule.PSD, cap=21).value == mn
                assert propagation_time_m(g, mn, Rule.STANDARD, cap=21).value == mx - 1
                assert (
                    propagation_time_m(g, mn, Rule.PSD, cap=21).value == (mx - 1 + 1) // 2
                )

    def test_full_set_times_zero(self):
        assert propagation_time_m(path_graph(4), 4, Rule.STANDARD).value == 0

    def test_infeasible_size(self):
        with pytest.raises(InfeasibleError):
            propagation_time_m(complete_graph(4), 1, Rule.STANDARD)
        with pytest.raises(InfeasibleError):
            propagation_time_m(path_graph(3), 7, Rule.STANDARD)

    def test_witnesses_are_lexicographic_and_efficient(self):
        g = path_graph(5)
        rep = propagation_time_m(g, 1, Rule.STANDARD)
        assert rep.witnesses == (frozenset({0}), frozenset({4}))

    def test_monotone_in_m_empirically(self):
        rng = Random(103)
        for _ in range(20):
            g = random_graph(rng, rng.randint(2, 7), 0.4)
            z = forcing_number(g, Rule.STANDARD).value
            times = [
                propagation_time_m(g, m, Rule.STANDARD).value
                for m in range(z, g.n + 1)
            ]
            assert all(a >= b for a, b in zip(times, times[1:]))

    def test_power_propagation(self):
        assert propagation_time_m(path_graph(9), 1, Rule.POWER_DOMINATION).value == 4


class TestThrottling:
    def test_path_four(self):
        rep = throttling(path_graph(4), Rule.STANDARD)
        assert rep.value == 3
        assert frozenset({1, 2}) in rep.witnesses

    def test_triangle(self):
        assert throttling(complete_graph(3), Rule.STANDARD).value == 3

    def test_witnesses_achieve_value(self):
        g = cycle_graph(6)
        rep = throttling(g, Rule.PSD)
        for witness in rep.witnesses:
            res = propagate(Rule.PSD, g, witness)
            assert res.ok and len(witness) + res.pt == rep.value

    def test_rule_restriction(self):
        with pytest.raises(ValueError):
            throttling(path_graph(3), Rule.POWER_DOMINATION)


class TestMaskEnginesAgreeWithReplay:
    def test_all_rules_random(self):
        rng = Random(107)
        for _ in range(80):
            g = random_graph(rng, rng.randint(1, 9), 0.35)
            mask = rng.getrandbits(g.n)
            blue = frozenset(v for v in range(g.n) if mask >> v & 1)
            for rule in (Rule.STANDARD, Rule.PSD, Rule.POWER_DOMINATION):
                slow = propagate(rule, g, blue)
                fast = rounds_from_mask(rule, g, mask)
                if slow.ok:
                    assert fast == slow.pt
                else:
                    assert fast == -1


class TestAtlasStream:
    def test_counts_by_size(self):
        per_n = {}
        for _, g in atlas_stream(max_n=7):
            per_n[g.n] = per_n.get(g.n, 0) + 1
        assert [per_n[i] for i in range(1, 8)] == [1, 2, 4, 11, 34, 156, 1044]

    def test_connected_counts(self):
        per_n = {}
        for _, g in atlas_stream(max_n=7, connected_only=True):
            per_n[g.n] = per_n.get(g.n, 0) + 1
            assert len(components(g)) == 1
        assert [per_n[i] for i in range(1, 8)] == [1, 1, 2, 6, 21, 112, 853]

    def test_max_n_filter(self):
        assert sum(1 for _ in atlas_stream(max_n=5)) == 1 + 2 + 4 + 11 + 34

    def test_cap(self):
        with pytest.raises(CapExceeded):
            list(atlas_stream(max_n=8))


class TestSweeps:
    def test_empty_stream(self):
        assert list(sweep_bounds([])) == []

    def test_rows_for_path(self):
        rows = bounds_rows_for_graph("p4", path_graph(4))
        by_m = {r.m: r for r in rows}
        assert by_m["1"].pt == "3" and by_m["1"].bound == 2
        assert all(r.ok for r in rows)
        assert "thr+" in by_m and "pt+" in by_m

    def test_header_matches_fields(self):
        rows = bounds_rows_for_graph("p3", path_graph(3))
        assert len(rows[0].as_csv_fields()) == len(BOUNDS_HEADER)

    def test_small_stream_all_pass(self):
        rows = list(sweep_bounds(atlas_stream(max_n=4)))
        assert rows and all(r.ok for r in rows)

    def test_parallel_jobs_same_rows(self):
        stream = list(atlas_stream(max_n=4))
        serial = list(sweep_bounds(iter(stream)))
        parallel = list(sweep_bounds(iter(stream), jobs=2))
        assert serial == parallel

    def test_parameter_rows_schema(self):
        rows = list(parameter_rows([("p4", path_graph(4))], ["z", "thr"]))
        assert len(rows) == 2
        assert rows[0][3] == "z" and rows[0][4] == "1"
        assert rows[1][3] == "thr" and rows[1][4] == "3"
        assert all(len(r) == 7 for r in rows)

    def test_edges_hash_stable(self):
        assert edges_hash(path_graph(3)) == edges_hash(path_graph(3))
        assert edges_hash(path_graph(3)) != edges_hash(cycle_graph(3))

    def test_grid_table_rows_all_pass(self):
        from forcelab.solvers import grid_table_rows

        rows = list(grid_table_rows(max_s=5))
        assert len(rows) == 12
        assert all(r[-1] == "pass" for r in rows)

    def test_unknown_check_rejected(self):
        with pytest.raises(ValueError):
            bounds_rows_for_graph("p3", path_graph(3), checks=("nope",))


class TestExhaustiveness:
    def test_no_smaller_forcing_set_exists(self):
        # independent of the bitmask engines: replay every subset below
        # the reported minimum with the step-by-step propagator
        from itertools import combinations

        for gid, g in atlas_stream(max_n=5):
            z = forcing_number(g, Rule.STANDARD).value
            for size in range(z):
                for combo in combinations(range(g.n), size):
                    assert not propagate(Rule.STANDARD, g, combo).ok, (gid, combo)


class TestSolveParameter:
    def test_dispatch(self):
        g = grid_graph(3, 2)
        assert solve_parameter(g, "z").value == 2
        assert solve_parameter(g, "zplus").value == 2
        assert solve_parameter(g, "pt").value == 2
        assert solve_parameter(g, "ptplus").value == 1
        assert solve_parameter(g, "thr").value >= 3

    def test_unknown(self):
        with pytest.raises(ValueError):
            solve_parameter(path_graph(3), "zz")
