import itertools
import random

import pytest

from symnorm.encode import (
    build_instance,
    code_to_group,
    decompose_bk,
    gamma_inv,
    gamma_map,
)
from symnorm.gfp import FpMatrix, in_row_space, matrix_rank, member_row_space
from symnorm.oracle import brute_maut, brute_normalizer
from symnorm.perm import PermGroup, Permutation
from symnorm.search import (
    FoundGroup,
    SearchConfig,
    all_diff_refiner,
    build_ld_sets,
    check_lds,
    compare_stabs,
    deep_prune,
    domains_init,
    full_search,
    limit_depth_search,
    norm_b,
    normalizer_in_sym,
)


def P(n, *cycles):
    return Permutation.from_cycles(n, cycles)


def M(p, rows):
    return FpMatrix.from_rows(p, rows)


def e1_group():
    return PermGroup.from_gens(6, [P(6, (1, 2), (5, 6)), P(6, (3, 4), (5, 6))])


def random_code(rng, p, k, dim, distinct_cols=False):
    """Full-rank dim x k matrix without zero columns."""
    if distinct_cols and (p**dim - 1) // (p - 1) < k:
        raise ValueError("not enough distinct column classes at this dimension")
    while True:
        rows = [[rng.randrange(p) for _ in range(k)] for _ in range(dim)]
        m = M(p, rows)
        if matrix_rank(m) != dim:
            continue
        cols = [m.col(j) for j in range(1, k + 1)]
        if any(not any(c) for c in cols):
            continue
        if distinct_cols:
            from symnorm.gfp import normalized_column

            norm = {normalized_column(c, p) for c in cols}
            if len(norm) != k:
                continue
        return m


def draw_dims(rng, p, k, distinct_cols=False):
    """A feasible code dimension between 1 and k."""
    lo = 1
    if distinct_cols:
        while (p**lo - 1) // (p - 1) < k:
            lo += 1
    return rng.randrange(lo, k + 1)


class TestNormB:
    def test_e1_order(self):
        inst = build_instance(e1_group(), 2)
        grp = PermGroup.from_gens(6, norm_b(inst))
        assert grp.order() == 8

    def test_single_component_p3(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3), (4, 5, 6))])
        inst = build_instance(grp, 3)
        nb = PermGroup.from_gens(6, norm_b(inst))
        assert nb.order() == 18

    def test_two_components_p3(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3)), P(6, (4, 5, 6))])
        inst = build_instance(grp, 3)
        nb = PermGroup.from_gens(6, norm_b(inst))
        assert nb.order() == 36

    def test_against_brute_force_over_b(self):
        # enumerate all orbit-fixing candidates and keep the normalising ones
        rng = random.Random(3)
        from symnorm.encode import exponent_scaling_perm

        for _ in range(12):
            k = rng.randrange(1, 4)
            dim = rng.randrange(1, k + 1)
            m = random_code(rng, 3, k, dim)
            grp = code_to_group(m)
            inst = build_instance(grp, 3)
            hset = {g.images for g in grp.elements()}
            per_orbit = []
            for i in range(k):
                opts = []
                for e in range(3):
                    for d in (1, 2):
                        x = inst.orbit_gens[i] ** e
                        if d != 1:
                            x = x * exponent_scaling_perm(inst, i, d)
                        opts.append(x)
                per_orbit.append(opts)
            brute = []
            for combo in itertools.product(*per_orbit):
                b = combo[0]
                for extra in combo[1:]:
                    b = b * extra
                if all(x.conj(b).images in hset for x in inst.standard_gens):
                    brute.append(b)
            expected = PermGroup.from_gens(inst.degree, brute).order()
            got = PermGroup.from_gens(inst.degree, norm_b(inst)).order()
            assert got == expected


class TestDomainsInit:
    def test_e1_domains_and_side_additions(self):
        inst = build_instance(e1_group(), 2)
        found = FoundGroup(inst)
        doms = domains_init(inst, found)
        assert doms == [{1, 2, 3}] * 3
        # the dual swaps already generate the full orbit exchange
        for g in found.gens:
            for x in inst.standard_gens:
                assert member_row_space(
                    gamma_map(inst, x.conj(g)), inst.matrix
                ) is not None
        assert len(found.gens) == 2

    def test_k1(self):
        inst = build_instance(PermGroup.from_gens(3, [P(3, (1, 2, 3))]), 3)
        found = FoundGroup(inst)
        assert domains_init(inst, found) == [{1}]

    def test_isolated_column(self):
        # the only minimum-weight words are the scalings of (0,0,1,0), so
        # column 3 has incidence 2 and every other column 0
        inst = build_instance(
            code_to_group(M(3, [[1, 0, 0, 1], [0, 1, 0, 2], [0, 0, 1, 0]])), 3
        )
        from symnorm.search import _min_weight_incidence

        assert _min_weight_incidence(inst.matrix) == [0, 0, 2, 0]
        found = FoundGroup(inst)
        doms = domains_init(inst, found)
        assert doms[2] == {3}
        # confirmed by the monomial automorphisms: nothing moves column 3
        for w in brute_maut(inst.matrix):
            assert w.perm.image(3) == 3


class TestCheckLds:
    def test_e1_span_is_everything(self):
        # the images of orbits 1,2 span the whole space, so the span test
        # alone removes nothing (distinctness is enforced elsewhere)
        inst = build_instance(e1_group(), 2)
        lds = build_ld_sets(inst.matrix)
        assert lds == [(3, 1, 2)]
        _, doms = check_lds(inst.matrix, lds, (1, 2), [{1, 2, 3}] * 3)
        assert doms[2] == {1, 2, 3}
        _, doms = check_lds(inst.matrix, lds, (2, 1), [{1, 2, 3}] * 3)
        assert doms[2] == {1, 2, 3}

    def test_no_trigger_without_single_unassigned(self):
        inst = build_instance(e1_group(), 2)
        lds = build_ld_sets(inst.matrix)
        _, doms = check_lds(inst.matrix, lds, (1,), [{1, 2, 3}] * 3)
        assert doms == [{1, 2, 3}] * 3

    def test_restriction_to_span(self):
        m = M(2, [[1, 0, 1, 1], [0, 1, 0, 1]])
        lds = build_ld_sets(m)
        assert lds == [(3, 1), (4, 1, 2)]
        # orbit 1 mapped to 2: the image of orbit 3 must lie in <col 2>
        _, doms = check_lds(m, lds, (2,), [{1, 2, 3, 4}] * 4)
        assert doms[2] == {2}
        assert doms[3] == {1, 2, 3, 4}  # its set still has two unassigned


class TestCompareStabs:
    def test_identity_prefix_passes(self):
        inst = build_instance(e1_group(), 2)
        ok, doms = compare_stabs(
            inst.matrix, inst.matrix, (), [{1, 2, 3}] * 3, gate_dim=None
        )
        assert ok and doms == [{1, 2, 3}] * 3

    def test_class_size_multiset_mismatch_fails(self):
        a = M(2, [[1, 0, 1, 1], [0, 1, 1, 0]])  # column classes {1,4},{2},{3}
        b = M(2, [[1, 0, 1, 1], [0, 1, 0, 0]])  # column classes {1,3,4},{2}
        ok, _ = compare_stabs(a, b, (1,), [{1, 2, 3, 4}] * 4)
        assert not ok

    def test_weight_enumerator_gate(self):
        # equal class-size profiles, different weight distributions
        a = M(2, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]])
        b = M(2, [[1, 0, 0, 0, 0], [0, 1, 0, 1, 1]])
        from symnorm.search import _column_class_sizes

        assert _column_class_sizes(a)[0] == _column_class_sizes(b)[0]
        from symnorm.gfp import weight_enumerator

        assert weight_enumerator(a) != weight_enumerator(b)
        ok, _ = compare_stabs(a, b, (1,), [{1, 2, 3, 4, 5}] * 5, gate_dim=2)
        assert not ok
        # with the gate closed the same pair passes
        ok2, _ = compare_stabs(
            a, b, (1,), [{1, 2, 3, 4, 5}] * 5, gate_dim=99
        )
        assert ok2

    def test_dimension_mismatch_fails(self):
        a = M(2, [[1, 0, 1], [0, 1, 1]])
        b = M(2, [[1, 0, 1]])
        ok, _ = compare_stabs(a, b, (1,), [{1, 2, 3}] * 3)
        assert not ok


class TestDeepPrune:
    def test_no_fire_keeps_domains(self):
        inst = build_instance(e1_group(), 2)
        doms = deep_prune(inst.matrix, (1, 2, 3), [{1}, {2}, {3}])
        assert doms == [{1}, {2}, {3}]

    def test_restricts_to_kernel(self):
        # column 4 depends only on row 2; sending 1,2,3 to 1,2,3 and forcing
        # row-1 condition restricts later images
        m = M(2, [[1, 0, 1, 0], [0, 1, 0, 1]])
        doms = deep_prune(m, (1, 2, 3), [{1}, {2}, {3}, {3, 4}])
        # for i = row 1: hot = {u : M[1, alpha_u] != 0} = {1}; M[1,4] = 0
        # fails the all-zero test, so row 1 fires only for t where expansion
        # avoids row 1: t=4 has M[1,4]=0 -> images must have M[1,j]=0
        assert doms[3] == {4}


class TestAllDiff:
    def test_singleton_propagation(self):
        assert all_diff_refiner([{1}, {1, 2}]) == [{1}, {2}]

    def test_hall_set(self):
        got = all_diff_refiner([{1, 2}, {1, 2}, {1, 2, 3}])
        assert got == [{1, 2}, {1, 2}, {3}]

    def test_dead_branch(self):
        assert all_diff_refiner([{1}, {1}]) is None

    def test_overfull_group_dead(self):
        assert all_diff_refiner([{1, 2}, {1, 2}, {1, 2}]) is None


class TestFullSearch:
    def test_e1_order(self):
        inst = build_instance(e1_group(), 2)
        res = full_search(inst)
        assert res.order == 48
        assert res.order == 2**3 * len(brute_maut(inst.matrix))

    def test_k1(self):
        inst = build_instance(PermGroup.from_gens(3, [P(3, (1, 2, 3))]), 3)
        res = full_search(inst)
        assert res.order == 6

    def test_soundness_of_generators(self):
        rng = random.Random(7)
        for _ in range(10):
            p = rng.choice([2, 3])
            k = rng.randrange(2, 5)
            dim = draw_dims(rng, p, k, distinct_cols=True)
            m = random_code(rng, p, k, dim, distinct_cols=True)
            inst = build_instance(code_to_group(m), p)
            res = full_search(inst)
            for g in res.generators:
                for x in inst.standard_gens:
                    assert member_row_space(
                        gamma_map(inst, x.conj(g)), inst.matrix
                    ) is not None

    def test_order_formula_random(self):
        rng = random.Random(11)
        for _ in range(25):
            p = rng.choice([2, 3])
            k = rng.randrange(1, 5)
            dim = draw_dims(rng, p, k, distinct_cols=True)
            m = random_code(rng, p, k, dim, distinct_cols=True)
            inst = build_instance(code_to_group(m), p)
            res = full_search(inst)
            assert res.order == p**k * len(brute_maut(inst.matrix))

    def test_dual_symmetry_of_generators(self):
        rng = random.Random(13)
        for _ in range(8):
            p = rng.choice([2, 3])
            k = rng.randrange(2, 5)
            dim = max(1, min(k - 1, draw_dims(rng, p, k, distinct_cols=True)))
            while (p**dim - 1) // (p - 1) < k:
                dim += 1
            m = random_code(rng, p, k, dim, distinct_cols=True)
            inst = build_instance(code_to_group(m), p)
            res = full_search(inst)
            for g in res.generators:
                b, kap = decompose_bk(inst, g)
                mirror = b.inverse() * kap
                for row in inst.dual.rows:
                    x = gamma_inv(inst, row)
                    assert in_row_space(gamma_map(inst, x.conj(mirror)), inst.dual)


class TestPipeline:
    def test_e1_vs_brute(self):
        grp = e1_group()
        res = normalizer_in_sym(grp, 2)
        assert res.order == brute_normalizer(grp).order()

    def test_equivalent_orbits_vs_brute(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3), (4, 5, 6))])
        res = normalizer_in_sym(grp, 3)
        assert res.order == brute_normalizer(grp).order()

    def test_full_code_s_equals_k(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3)), P(6, (4, 5, 6))])
        res = normalizer_in_sym(grp, 3)
        assert res.order == brute_normalizer(grp).order()  # 72

    def test_dual_swap_path(self):
        # dim 2 of 3: s > k/2 triggers the swap for the full method
        m = M(3, [[1, 0, 1], [0, 1, 2]])
        grp = code_to_group(m)
        res = normalizer_in_sym(grp, 3)
        assert res.stats.get("dual_swapped") == 1
        assert res.order == brute_normalizer(grp).order()
        # the depth-limited method must agree whether or not it swaps
        res2 = normalizer_in_sym(grp, 3, method="limitdepth")
        assert res2.order == res.order

    def test_small_exhaustive_vs_brute(self):
        rng = random.Random(17)
        for _ in range(15):
            p = 2
            k = rng.randrange(1, 4)
            dim = rng.randrange(1, k + 1)
            m = random_code(rng, p, k, dim)
            grp = code_to_group(m)
            res = normalizer_in_sym(grp, p)
            assert res.order == brute_normalizer(grp).order()

    def test_not_in_class(self):
        from symnorm.encode import NotInClass

        grp = PermGroup.from_gens(3, [P(3, (1, 2, 3)), P(3, (1, 2))])
        with pytest.raises(NotInClass):
            normalizer_in_sym(grp, 3)


class TestLimitDepth:
    def test_e1_matches_full(self):
        inst = build_instance(e1_group(), 2)
        assert limit_depth_search(inst).order == full_search(inst).order

    def test_cross_method_random(self):
        rng = random.Random(19)
        for _ in range(15):
            p = rng.choice([2, 3, 5])
            k = rng.randrange(2, 6)
            dim = draw_dims(rng, p, k, distinct_cols=True)
            m = random_code(rng, p, k, dim, distinct_cols=True)
            inst = build_instance(code_to_group(m), p)
            full = full_search(inst)
            ld = limit_depth_search(inst)
            assert full.order == ld.order, m.rows

    def test_pipeline_cross_method(self):
        rng = random.Random(23)
        for _ in range(10):
            p = rng.choice([2, 3])
            k = rng.randrange(1, 5)
            dim = rng.randrange(1, k + 1)
            m = random_code(rng, p, k, dim)
            grp = code_to_group(m)
            a = normalizer_in_sym(grp, p, method="full")
            b = normalizer_in_sym(grp, p, method="limitdepth")
            assert a.order == b.order


class TestPruningSafety:
    def test_toggles_do_not_change_result(self):
        rng = random.Random(29)
        toggles = [
            "use_lds",
            "use_stabs",
            "use_deep",
            "use_alldiff",
            "use_dual_partitions",
        ]
        for _ in range(6):
            p = rng.choice([2, 3])
            k = rng.randrange(2, 6)
            dim = draw_dims(rng, p, k, distinct_cols=True)
            m = random_code(rng, p, k, dim, distinct_cols=True)
            inst = build_instance(code_to_group(m), p)
            base = full_search(inst)
            all_off = full_search(
                inst,
                SearchConfig(
                    use_lds=False,
                    use_stabs=False,
                    use_deep=False,
                    use_alldiff=False,
                    use_dual_partitions=False,
                ),
            )
            assert all_off.order == base.order
            assert base.stats["nodes"] <= all_off.stats["nodes"]
            for name in toggles:
                cfg = SearchConfig(**{name: False})
                res = full_search(inst, cfg)
                assert res.order == base.order, name
