import itertools
import random

import pytest

from symnorm.encode import (
    MonomialElement,
    NotInClass,
    build_instance,
    build_lk,
    centralizer_sym,
    code_to_group,
    decompose_bk,
    eliminate_column,
    equiv_orbit_swap,
    exponent_scaling_perm,
    gamma_inv,
    gamma_map,
    kappa_element,
    orbit_action,
    reduce_equivalent_orbits,
    stab_matrix,
    xi_image,
    xi_preimage,
)
from symnorm.gfp import FpMatrix, row_combination
from symnorm.perm import PermGroup, Permutation


def P(n, *cycles):
    return Permutation.from_cycles(n, cycles)


def M(p, rows):
    return FpMatrix.from_rows(p, rows)


def e1_group():
    """Three 2-point orbits, code [[1,0,1],[0,1,1]] over F_2."""
    return PermGroup.from_gens(6, [P(6, (1, 2), (5, 6)), P(6, (3, 4), (5, 6))])


def random_instance(rng, p, k, dim):
    while True:
        rows = [[rng.randrange(p) for _ in range(k)] for _ in range(dim)]
        try:
            m = M(p, rows)
            from symnorm.gfp import matrix_rank

            if matrix_rank(m) == dim and not any(
                all(r[j] == 0 for r in rows) for j in range(k)
            ):
                return build_instance(code_to_group(m), p)
        except Exception:
            continue


class TestBuildInstance:
    def test_e1(self):
        inst = build_instance(e1_group(), 2)
        assert inst.k == 3 and inst.s == 2
        assert inst.matrix == M(2, [[1, 0, 1], [0, 1, 1]])
        assert inst.dual == M(2, [[1, 1, 1]])
        assert inst.orbits == ((1, 2), (3, 4), (5, 6))

    def test_single_orbit(self):
        inst = build_instance(PermGroup.from_gens(3, [P(3, (1, 2, 3))]), 3)
        assert inst.k == 1 and inst.s == 1
        assert inst.matrix == M(3, [[1]])

    def test_wrong_orbit_size(self):
        with pytest.raises(NotInClass):
            build_instance(PermGroup.from_gens(3, [P(3, (1, 2, 3))]), 2)

    def test_non_cyclic_restriction(self):
        # S_3 on one orbit of size 3
        grp = PermGroup.from_gens(3, [P(3, (1, 2, 3)), P(3, (1, 2))])
        with pytest.raises(NotInClass):
            build_instance(grp, 3)

    def test_pivot_reordering(self):
        # generator exponent vectors force a non-leading pivot
        grp = code_to_group(M(3, [[1, 1]]))
        big = PermGroup.from_gens(
            9,
            [
                P(9, (4, 5, 6), (7, 8, 9)),
            ],
        )
        inst = build_instance(big, 3)
        assert inst.k == 2
        assert inst.orbits == ((4, 5, 6), (7, 8, 9))
        assert inst.matrix.is_standard()
        del grp

    def test_standard_gens_and_order(self):
        rng = random.Random(2)
        for _ in range(20):
            p = rng.choice([2, 3, 5])
            k = rng.randrange(1, 5)
            dim = rng.randrange(1, k + 1)
            inst = random_instance(rng, p, k, dim)
            grp = PermGroup.from_gens(inst.degree, inst.standard_gens)
            assert grp.order() == p**inst.s
            for i, x in enumerate(inst.standard_gens):
                assert gamma_map(inst, x) == inst.matrix.rows[i]
            # orbit generators conjugate correctly along the bijections
            for i in range(inst.k):
                assert inst.orbit_gens[0].conj(inst.phibars[i]) == inst.orbit_gens[i]


class TestGamma:
    def test_identity(self):
        inst = build_instance(e1_group(), 2)
        assert gamma_map(inst, Permutation.identity(6)) == (0, 0, 0)

    def test_e1_generator(self):
        inst = build_instance(e1_group(), 2)
        assert gamma_map(inst, P(6, (1, 2), (3, 4))) == (1, 1, 0)

    def test_inverse_direction(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3)), P(6, (4, 5, 6))])
        inst = build_instance(grp, 3)
        assert gamma_inv(inst, (0, 1)) == P(6, (4, 5, 6))

    def test_roundtrip_random(self):
        rng = random.Random(5)
        inst = random_instance(rng, 5, 4, 3)
        for _ in range(30):
            v = tuple(rng.randrange(5) for _ in range(4))
            assert gamma_map(inst, gamma_inv(inst, v)) == v

    def test_rejects_outsiders(self):
        inst = build_instance(e1_group(), 2)
        with pytest.raises(ValueError):
            gamma_map(inst, P(6, (1, 3), (2, 4)))


class TestMonomial:
    def test_apply_matches_column_map(self):
        w = MonomialElement(3, (2, 1), Permutation((2, 1)))
        assert w.apply((1, 0)) == (0, 2)
        assert w.apply((0, 1)) == (1, 0)

    def test_group_axioms(self):
        rng = random.Random(7)
        p, k = 5, 4
        for _ in range(50):
            ws = []
            for _ in range(2):
                diag = tuple(rng.randrange(1, p) for _ in range(k))
                imgs = list(range(1, k + 1))
                rng.shuffle(imgs)
                ws.append(MonomialElement(p, diag, Permutation(imgs)))
            w1, w2 = ws
            v = tuple(rng.randrange(p) for _ in range(k))
            assert (w1 * w2).apply(v) == w2.apply(w1.apply(v))
            assert (w1 * w1.inverse()).is_identity()


class TestXi:
    def test_kappa_element_example(self):
        inst = build_instance(e1_group(), 2)
        kap = kappa_element(inst, Permutation((2, 1, 3)))
        assert kap == inst.phibars[1]
        assert orbit_action(inst, kap) == Permutation((2, 1, 3))

    def test_kappa_realises_any_index_perm(self):
        rng = random.Random(11)
        inst = random_instance(rng, 3, 4, 2)
        for imgs in itertools.permutations(range(1, 5)):
            pi = Permutation(imgs)
            assert orbit_action(inst, kappa_element(inst, pi)) == pi

    def test_decompose_examples(self):
        inst = build_instance(e1_group(), 2)
        phi2 = inst.phibars[1]
        b, kap = decompose_bk(inst, phi2)
        assert b.is_identity() and kap == phi2
        g = inst.orbit_gens[0]
        b, kap = decompose_bk(inst, g)
        assert b == g and kap.is_identity()

    def test_decompose_mixed(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3), (4, 5, 6))])
        inst = build_instance(grp, 3)
        sigma = exponent_scaling_perm(inst, 0, 2)
        l = sigma * inst.phibars[1]
        b, kap = decompose_bk(inst, l)
        assert b * kap == l
        assert orbit_action(inst, kap) == Permutation((2, 1))

    def test_xi_kernel(self):
        inst = build_instance(e1_group(), 2)
        w = xi_image(inst, inst.orbit_gens[0])
        assert w.is_identity()

    def test_xi_image_of_swap(self):
        inst = build_instance(e1_group(), 2)
        w = xi_image(inst, inst.phibars[1])
        assert w.diag == (1, 1, 1)
        assert w.perm == Permutation((2, 1, 3))

    def test_preimage_example(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3)), P(6, (4, 5, 6))])
        inst = build_instance(grp, 3)
        w = MonomialElement(3, (2, 1), Permutation.identity(2))
        sigma = xi_preimage(inst, w)
        assert sigma == P(6, (2, 3))
        assert inst.orbit_gens[0].conj(sigma) == inst.orbit_gens[0] ** 2

    def test_xi_roundtrip(self):
        rng = random.Random(13)
        inst = random_instance(rng, 5, 3, 2)
        for _ in range(30):
            diag = tuple(rng.randrange(1, 5) for _ in range(3))
            imgs = list(range(1, 4))
            rng.shuffle(imgs)
            w = MonomialElement(5, diag, Permutation(imgs))
            assert xi_image(inst, xi_preimage(inst, w)) == w

    def test_xi_homomorphism(self):
        rng = random.Random(17)
        inst = random_instance(rng, 3, 4, 2)
        for _ in range(20):
            ls = []
            for _ in range(2):
                diag = tuple(rng.randrange(1, 3) for _ in range(4))
                imgs = list(range(1, 5))
                rng.shuffle(imgs)
                ls.append(xi_preimage(inst, MonomialElement(3, diag, Permutation(imgs))))
            l1, l2 = ls
            assert xi_image(inst, l1 * l2) == xi_image(inst, l1) * xi_image(inst, l2)

    def test_equivariance(self):
        # conjugation on the group matches the monomial action on vectors
        rng = random.Random(19)
        inst = random_instance(rng, 5, 3, 2)
        for _ in range(30):
            v = tuple(rng.randrange(5) for _ in range(3))
            g = gamma_inv(inst, v)
            diag = tuple(rng.randrange(1, 5) for _ in range(3))
            imgs = list(range(1, 4))
            rng.shuffle(imgs)
            l = xi_preimage(inst, MonomialElement(5, diag, Permutation(imgs)))
            w = xi_image(inst, l)
            assert gamma_map(inst, g.conj(l)) == w.apply(v)


class TestStabMatrix:
    def test_e1_first_orbit(self):
        inst = build_instance(e1_group(), 2)
        assert stab_matrix(inst, points=(1,)) == M(2, [[0, 1, 1]])
        fixed = gamma_inv(inst, (0, 1, 1))
        assert fixed.image(1) == 1

    def test_two_orbits_trivial(self):
        inst = build_instance(e1_group(), 2)
        got = stab_matrix(inst, orbit_indices=(1, 2))
        assert got.s == 0

    def test_zero_column_noop(self):
        m = M(2, [[0, 1, 1]])
        assert eliminate_column(m, 1) == m


class TestCodeToGroup:
    def test_repetition(self):
        grp = code_to_group(M(3, [[1, 1]]))
        assert grp.generators == (P(6, (1, 2, 3), (4, 5, 6)),)

    def test_identity_code(self):
        grp = code_to_group(M(2, [[1, 0], [0, 1]]))
        assert set(grp.generators) == {P(4, (1, 2)), P(4, (3, 4))}

    def test_e1_code(self):
        grp = code_to_group(M(2, [[1, 0, 1], [0, 1, 1]]))
        inst = build_instance(grp, 2)
        assert inst.matrix == M(2, [[1, 0, 1], [0, 1, 1]])

    def test_row_space_roundtrip(self):
        rng = random.Random(23)
        for _ in range(20):
            p = rng.choice([2, 3, 5])
            k = rng.randrange(2, 5)
            dim = rng.randrange(1, k + 1)
            inst = random_instance(rng, p, k, dim)
            m2 = build_instance(code_to_group(inst.matrix), p).matrix
            # same row space
            from symnorm.gfp import in_row_space

            assert all(in_row_space(r, inst.matrix) for r in m2.rows)
            assert m2.s == inst.matrix.s

    def test_rank_deficient_rejected(self):
        with pytest.raises(ValueError):
            code_to_group(M(2, [[1, 1], [1, 1]]))


class TestCentralizer:
    def test_e1_inequivalent(self):
        inst = build_instance(e1_group(), 2)
        c = centralizer_sym(inst)
        assert c.order() == 8

    def test_equivalent_orbits(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3), (4, 5, 6))])
        inst = build_instance(grp, 3)
        c = centralizer_sym(inst)
        assert c.order() == 18
        assert c.contains(P(6, (1, 4), (2, 5), (3, 6)))

    def test_single_orbit(self):
        inst = build_instance(PermGroup.from_gens(3, [P(3, (1, 2, 3))]), 3)
        assert centralizer_sym(inst).order() == 3

    def test_centralizes_by_brute_force(self):
        rng = random.Random(29)
        for _ in range(10):
            p = rng.choice([2, 3])
            k = rng.randrange(1, 4)
            dim = rng.randrange(1, k + 1)
            inst = random_instance(rng, p, k, dim)
            c = centralizer_sym(inst)
            for g in c.generators:
                for x in inst.standard_gens:
                    assert x.conj(g) == x


class TestEquivSwap:
    def test_swap_centralizes_scaled_columns(self):
        grp = code_to_group(M(3, [[1, 2]]))
        inst = build_instance(grp, 3)
        lead1 = next(x for x in inst.matrix.col(1) if x)
        lead2 = next(x for x in inst.matrix.col(2) if x)
        a = lead2 * pow(lead1, 1, 3) % 3
        sw = equiv_orbit_swap(inst, 1, 2, a)
        x = inst.standard_gens[0]
        assert x.conj(sw) == x


class TestReduce:
    def test_identity_reduction(self):
        red = reduce_equivalent_orbits(e1_group(), 2)
        assert red.identity
        assert red.gamma_points == (1, 2, 3, 4, 5, 6)

    def test_diagonal_c3(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3), (4, 5, 6))])
        red = reduce_equivalent_orbits(grp, 3)
        assert not red.identity
        assert red.gamma_points == (1, 2, 3)
        assert red.restricted.generators == (P(6, (1, 2, 3)),)
        u = P(6, (2, 3))
        theta_u = red.theta(u)
        assert theta_u == P(6, (2, 3), (5, 6))
        # the image normalises the original group
        h = grp.generators[0]
        assert grp.contains(h.conj(theta_u))

    def test_theta_normalises(self):
        rng = random.Random(31)
        grp = code_to_group(M(3, [[1, 2, 1, 2]]))
        red = reduce_equivalent_orbits(grp, 3)
        assert len(red.gamma_points) == 3
        # exponent scaling on the representative orbit extends to all orbits
        inst1 = build_instance(red.restricted, 3)
        sigma = exponent_scaling_perm(inst1, 0, 2)
        img = red.theta(sigma)
        for x in grp.generators:
            assert grp.contains(x.conj(img))
        del rng


class TestBuildLK:
    def test_shapes(self):
        inst = build_instance(e1_group(), 2)
        k_gens, b_gens = build_lk(inst)
        assert len(k_gens) == 2
        assert len(b_gens) == 3  # t = 1 for p = 2, no scaling maps

    def test_b_part_order(self):
        grp = PermGroup.from_gens(6, [P(6, (1, 2, 3)), P(6, (4, 5, 6))])
        inst = build_instance(grp, 3)
        k_gens, b_gens = build_lk(inst)
        assert PermGroup.from_gens(6, b_gens).order() == 36  # (3*2)^2
        full = PermGroup.from_gens(6, b_gens + k_gens)
        assert full.order() == 72
