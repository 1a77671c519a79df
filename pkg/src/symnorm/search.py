"""Backtrack search for the full normaliser of an orbit-wise cyclic group.

The normaliser lives in the wreath-like overgroup generated by per-orbit
affine maps and orbit exchanges, so after collecting the orbit-fixing part
directly, the search walks assignments of orbit images (a tree inside the
symmetric group on orbit indices), pruning with code invariants: linear
dependencies among columns, stabiliser-code column classes and weight
enumerators, zero-pattern implications, domain all-difference propagation,
and orbit-minimality against the group found so far.  Leaves are decided
exactly by comparing canonical representatives.  A depth-limited variant
stops at the code dimension and enumerates scalings instead.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from itertools import product

from symnorm.canon import kappa_feasible
from symnorm.encode import (
    InPInstance,
    MonomialElement,
    NotInClass,
    build_instance,
    decompose_bk,
    eliminate_column,
    equiv_orbit_swap,
    exponent_scaling_perm,
    gamma_inv,
    gamma_map,
    kappa_element,
    orbit_action,
    reduce_equivalent_orbits,
    xi_preimage,
)
from symnorm.gfp import (
    FpMatrix,
    VectorSpan,
    mat_inverse,
    mat_mul,
    member_row_space,
    min_weight_vectors,
    normalized_column,
    weight_enumerator,
)
from symnorm.perm import PermGroup, Permutation, StabChain, orbit_of


class SearchTimeout(Exception):
    """The configured wall-clock limit was hit mid-search."""


@dataclass
class SearchConfig:
    """Feature toggles and budgets for one search run."""

    use_lds: bool = True
    use_stabs: bool = True
    use_deep: bool = True
    use_alldiff: bool = True
    use_dual_partitions: bool = True
    weight_gate: int = 45
    weight_budget: int = 1 << 20
    time_limit: float | None = None  # seconds


@dataclass(frozen=True)
class NormalizerResult:
    generators: tuple[Permutation, ...]
    order: int
    stats: dict
    method: str

    def group(self, degree: int) -> PermGroup:
        return PermGroup.from_gens(degree, self.generators)


class FoundGroup:
    """The group of normalising elements found so far, tracked both on
    points (for order and membership) and on orbit indices (for the
    minimality pruning test)."""

    def __init__(self, inst: InPInstance):
        self.inst = inst
        self.gens: list[Permutation] = []
        self._chain: StabChain | None = None
        self._index_gens: list[Permutation] = []
        self._index_chain: StabChain | None = None

    def add(self, g: Permutation) -> bool:
        if g.is_identity():
            return False
        if self.chain().contains(g):
            return False
        self.gens.append(g)
        self._index_gens.append(orbit_action(self.inst, g))
        self._chain = None
        self._index_chain = None
        return True

    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.inst.degree, self.gens)
        return self._chain

    def index_chain(self) -> StabChain:
        if self._index_chain is None:
            self._index_chain = StabChain(
                self.inst.k,
                self._index_gens,
                base_prefix=tuple(range(1, self.inst.k + 1)),
            )
        return self._index_chain

    def index_orbit(self, prefix_len: int, pt: int) -> set[int]:
        return self.index_chain().orbit_under_stabilizer(prefix_len, pt)

    def order(self) -> int:
        return self.chain().order()


# ---------------------------------------------------------------------------
# the orbit-fixing part


def _support_components(m: FpMatrix) -> list[list[int]]:
    """Column sets of the connected components of the row/column support
    graph; rows of a standard-form matrix never straddle components."""
    parent = list(range(m.k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in m.rows:
        supp = [j for j, x in enumerate(row) if x]
        for j in supp[1:]:
            ra, rb = find(supp[0]), find(j)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for j in range(m.k):
        groups.setdefault(find(j), []).append(j + 1)
    return sorted(groups.values())


def norm_b(inst: InPInstance) -> list[Permutation]:
    """Generators of the orbit-fixing normalising elements: the orbit
    cycles themselves plus, per disjoint direct factor, one map raising
    every cycle in the factor to the primitive-element power."""
    gens = list(inst.orbit_gens)
    t = inst.field.t
    if t != 1:
        for comp in _support_components(inst.matrix):
            sigma = Permutation.identity(inst.degree)
            for j in comp:
                sigma = sigma * exponent_scaling_perm(inst, j - 1, t)
            gens.append(sigma)
    return gens


# ---------------------------------------------------------------------------
# domain initialisation


def _column_class_sizes(m: FpMatrix) -> tuple[tuple, list[int]]:
    """Class sizes of columns under equality-up-to-scaling, zero columns
    sharing one class: (sorted multiset, per-column size)."""
    keys = [normalized_column(m.col(j), m.p) for j in range(1, m.k + 1)]
    counts: dict = {}
    for key in keys:
        counts[key] = counts.get(key, 0) + 1
    per_col = [counts[key] for key in keys]
    return tuple(sorted(counts.values())), per_col


def _min_weight_incidence(m: FpMatrix) -> list[int]:
    _, vecs = min_weight_vectors(m)
    counts = [0] * m.k
    for v in vecs:
        for j, x in enumerate(v):
            if x:
                counts[j] += 1
    return counts


def domains_init(
    inst: InPInstance,
    found: FoundGroup,
    cfg: SearchConfig | None = None,
    kappa_gate=None,
) -> list[set[int]]:
    """Initial candidate images for every orbit, the meet of the invariant
    partitions; equivalent dual orbits also contribute normalising
    elements to the found group as a side effect (their centralising
    swaps, with the orbit-fixing part inverted)."""
    cfg = cfg or SearchConfig()
    k, p = inst.k, inst.p
    keyparts: list[list] = []

    # dual orbit equivalence: class sizes partition the indices, and each
    # equivalent pair yields a normalising element
    dual_keys = [normalized_column(inst.dual.col(j), p) for j in range(1, k + 1)]
    cells: dict = {}
    for j, key in enumerate(dual_keys, start=1):
        cells.setdefault(key, []).append(j)
    for key, cell in sorted(cells.items()):
        rep = cell[0]
        lead_rep = next((x for x in inst.dual.col(rep) if x), 0)
        for j in cell[1:]:
            if lead_rep:
                lead_j = next(x for x in inst.dual.col(j) if x)
                a = lead_j * pow(lead_rep, p - 2, p) % p
            else:
                a = 1
            swap = equiv_orbit_swap(inst, rep, j, a)
            b, kap = decompose_bk(inst, swap)
            if kappa_gate is not None and not kappa_gate(orbit_action(inst, kap)):
                continue
            elem = b.inverse() * kap
            for x in inst.standard_gens:
                if member_row_space(gamma_map(inst, x.conj(elem)), inst.matrix) is None:
                    raise AssertionError("dual-orbit swap must normalise the group")
            found.add(elem)
    if cfg.use_dual_partitions:
        class_size = {key: len(cell) for key, cell in cells.items()}
        keyparts.append([class_size[key] for key in dual_keys])

    # stabiliser class-size profiles, for the code and its dual
    profiles = []
    for j in range(1, k + 1):
        multiset, _ = _column_class_sizes(eliminate_column(inst.matrix, j))
        profiles.append(multiset)
    keyparts.append(profiles)
    if cfg.use_dual_partitions and inst.dual.s:
        dual_profiles = []
        for j in range(1, k + 1):
            multiset, _ = _column_class_sizes(eliminate_column(inst.dual, j))
            dual_profiles.append(multiset)
        keyparts.append(dual_profiles)

    # minimum-weight codeword incidence counts
    keyparts.append(_min_weight_incidence(inst.matrix))

    meet_keys = [tuple(part[i] for part in keyparts) for i in range(k)]
    doms = []
    for i in range(k):
        doms.append({j + 1 for j in range(k) if meet_keys[j] == meet_keys[i]})
    return doms


# ---------------------------------------------------------------------------
# pruning rules


def build_ld_sets(mstd: FpMatrix) -> list[tuple[int, ...]]:
    """For each non-pivot column, the minimally dependent set made of that
    column and the pivot columns appearing in its expansion."""
    out = []
    for i in range(mstd.s + 1, mstd.k + 1):
        members = [i] + [j for j in range(1, mstd.s + 1) if mstd.rows[j - 1][i - 1]]
        out.append(tuple(members))
    return out


def build_dual_ld_sets(dual: FpMatrix, s: int) -> list[tuple[int, ...]]:
    """Dependent sets of the dual code: each leading column together with
    the trailing identity columns appearing in its expansion."""
    out = []
    for i in range(1, s + 1):
        members = [i] + [s + j for j in range(1, dual.s + 1) if dual.rows[j - 1][i - 1]]
        out.append(tuple(members))
    return out


def check_lds(mat: FpMatrix, ld_sets, alpha, doms) -> tuple[bool, list[set[int]]]:
    """Restrict the image of the single unassigned member of each dependent
    set to the span of the assigned members' image columns."""
    d = len(alpha)
    doms = [set(x) for x in doms]
    for lds in ld_sets:
        unassigned = [i for i in lds if i > d]
        if len(unassigned) != 1:
            continue
        target = unassigned[0]
        span = VectorSpan(mat.p, [mat.col(alpha[j - 1]) for j in lds if j <= d])
        doms[target - 1] = {
            c for c in doms[target - 1] if span.contains(mat.col(c))
        }
    return True, doms


def compare_stabs(
    mstab: FpMatrix,
    mstab_im: FpMatrix,
    alpha,
    doms,
    gate_dim: int | None = None,
    weight_gate: int = 45,
    weight_budget: int = 1 << 20,
    wcache: dict | None = None,
) -> tuple[bool, list[set[int]]]:
    """Compare stabiliser codes of the assigned orbits and their images:
    fail on mismatched dimensions or class-size multisets, refine the
    domains of unassigned orbits by class size, and, when the heuristic
    gate admits, fail on differing weight enumerators."""
    doms = [set(x) for x in doms]
    if mstab.s != mstab_im.s:
        return False, doms
    src_multiset, src_sizes = _column_class_sizes(mstab)
    im_multiset, im_sizes = _column_class_sizes(mstab_im)
    if src_multiset != im_multiset:
        return False, doms
    d = len(alpha)
    for i in range(d + 1, mstab.k + 1):
        want = src_sizes[i - 1]
        doms[i - 1] = {j for j in doms[i - 1] if im_sizes[j - 1] == want}
    if gate_dim is not None and gate_dim * mstab.p <= weight_gate:
        if wcache is None:
            wcache = {}
        w1 = wcache.get(mstab.rows)
        if w1 is None:
            w1 = weight_enumerator(mstab, weight_budget)
            wcache[mstab.rows] = w1
        w2 = wcache.get(mstab_im.rows)
        if w2 is None:
            w2 = weight_enumerator(mstab_im, weight_budget)
            wcache[mstab_im.rows] = w2
        if w1 is not None and w2 is not None and w1 != w2:
            return False, doms
    return True, doms


def deep_prune(mstd: FpMatrix, alpha, doms) -> list[set[int]]:
    """Zero-pattern implication: when row i vanishes on the assigned image
    columns wherever the unassigned column's expansion needs it, the image
    of that column must avoid row i's support."""
    s, k, p = mstd.s, mstd.k, mstd.p
    d = len(alpha)
    doms = [set(x) for x in doms]
    for i in range(s):
        row = mstd.rows[i]
        hot = [u for u in range(s) if row[alpha[u] - 1]]
        for t in range(d + 1, k + 1):
            if all(mstd.rows[u][t - 1] == 0 for u in hot):
                doms[t - 1] = {j for j in doms[t - 1] if row[j - 1] == 0}
    return doms


def all_diff_refiner(doms) -> list[set[int]] | None:
    """Propagate distinctness of images: a set of domains shared by as many
    orbits as it has values consumes those values everywhere else; more
    orbits than values, or an empty domain, kills the branch."""
    doms = [set(x) for x in doms]
    k = len(doms)
    changed = True
    while changed:
        changed = False
        groups: dict = {}
        for i, dom in enumerate(doms):
            if not dom:
                return None
            groups.setdefault(frozenset(dom), []).append(i)
        for key, idxs in groups.items():
            if len(idxs) > len(key):
                return None
            if len(idxs) == len(key) and len(key) < k:
                idx_set = set(idxs)
                for j in range(k):
                    if j not in idx_set and doms[j] & key:
                        doms[j] -= key
                        changed = True
    return doms


# ---------------------------------------------------------------------------
# the search proper


class _Search:
    def __init__(
        self,
        inst: InPInstance,
        cfg: SearchConfig,
        method: str,
        kappa_group: PermGroup | None = None,
        domain_restrict=None,
    ):
        self.inst = inst
        self.cfg = cfg
        self.method = method
        self.kappa_group = kappa_group
        self.domain_restrict = domain_restrict
        self.k, self.s, self.p = inst.k, inst.s, inst.p
        self.found = FoundGroup(inst)
        self.stats: Counter = Counter()
        self.wcache: dict = {}
        self.deadline = (
            time.monotonic() + cfg.time_limit if cfg.time_limit is not None else None
        )
        self.base_doms: list[set[int]] = []
        self.src_stabs: list[FpMatrix] = []
        self.src_stabs_dual: list[FpMatrix] = []

    # -- helpers -------------------------------------------------------

    def _tick(self):
        self.stats["nodes"] += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout(f"search exceeded {self.cfg.time_limit}s")

    def _kappa_allowed(self, pi: Permutation) -> bool:
        if self.kappa_group is not None and not self.kappa_group.contains(pi):
            return False
        if self.domain_restrict is not None:
            for i in range(1, self.k + 1):
                if pi.image(i) not in self.domain_restrict[i - 1]:
                    return False
        return True

    def _jump_target(self, alpha) -> int:
        j = 0
        while j < len(alpha) and alpha[j] == j + 1:
            j += 1
        return j

    # -- main recursion --------------------------------------------------

    def run(self) -> NormalizerResult:
        inst, cfg = self.inst, self.cfg
        t0 = time.monotonic()
        for g in norm_b(inst):
            self.found.add(g)
        doms = domains_init(inst, self.found, cfg, kappa_gate=self._kappa_allowed)
        if self.kappa_group is not None:
            for i in range(self.k):
                reachable = orbit_of(i + 1, self.kappa_group.generators)
                doms[i] &= reachable
        if self.domain_restrict is not None:
            for i in range(self.k):
                doms[i] &= self.domain_restrict[i]
        self.base_doms = [set(x) for x in doms]

        self.ld_sets = build_ld_sets(inst.matrix) if cfg.use_lds else []
        self.ld_sets_dual = (
            build_dual_ld_sets(inst.dual, self.s)
            if cfg.use_lds and inst.dual.s
            else []
        )
        self.src_stabs = [inst.matrix]
        self.src_stabs_dual = [inst.dual]
        for dpth in range(1, self.k + 1):
            self.src_stabs.append(eliminate_column(self.src_stabs[-1], dpth))
            self.src_stabs_dual.append(
                eliminate_column(self.src_stabs_dual[-1], dpth)
            )

        self._recurse((), doms, inst.matrix, inst.dual)

        gens = tuple(self.found.gens)
        order = self.found.order() if gens else 1
        self.stats["time_ms"] = int((time.monotonic() - t0) * 1000)
        return NormalizerResult(gens, order, dict(self.stats), self.method)

    def _recurse(self, alpha, doms, im_stab, im_stab_dual):
        self._tick()
        d = len(alpha)
        inst, cfg = self.inst, self.cfg

        if d == self.k:
            return self._leaf(alpha)

        if d >= 1:
            # orbit-minimality along the all-identity prefix
            if (
                alpha[d - 1] != d
                and all(alpha[i] == i + 1 for i in range(d - 1))
            ):
                orb = self.found.index_orbit(d - 1, alpha[d - 1])
                if min(orb) < alpha[d - 1]:
                    self.stats["prune_minimality"] += 1
                    return None

            if cfg.use_lds:
                _, doms = check_lds(inst.matrix, self.ld_sets, alpha, doms)
                if self.ld_sets_dual:
                    _, doms = check_lds(inst.dual, self.ld_sets_dual, alpha, doms)

            if cfg.use_stabs:
                ok, doms = compare_stabs(
                    self.src_stabs[d],
                    im_stab,
                    alpha,
                    doms,
                    gate_dim=self.s - d,
                    weight_gate=cfg.weight_gate,
                    weight_budget=cfg.weight_budget,
                    wcache=self.wcache,
                )
                if not ok:
                    self.stats["prune_stabs"] += 1
                    return None
                if inst.dual.s:
                    ok, doms = compare_stabs(
                        self.src_stabs_dual[d],
                        im_stab_dual,
                        alpha,
                        doms,
                        gate_dim=(self.k - self.s) - d,
                        weight_gate=cfg.weight_gate,
                        weight_budget=cfg.weight_budget,
                        wcache=self.wcache,
                    )
                    if not ok:
                        self.stats["prune_stabs_dual"] += 1
                        return None

            if cfg.use_deep and d > self.s:
                doms = deep_prune(inst.matrix, alpha, doms)

        if cfg.use_alldiff:
            refined = all_diff_refiner(doms)
            if refined is None:
                self.stats["prune_alldiff"] += 1
                return None
            doms = refined

        if self.method == "limitdepth" and d == self.s and d < self.k:
            self._limit_depth_node(alpha, doms)
            return None

        used = set(alpha)
        for c in sorted(doms[d]):
            if c in used:
                continue
            child = [set(x) for x in doms]
            child[d] = {c}
            res = self._recurse(
                alpha + (c,),
                child,
                eliminate_column(im_stab, c),
                eliminate_column(im_stab_dual, c) if im_stab_dual.s else im_stab_dual,
            )
            if res is not None and res < d:
                return res
        return None

    def _leaf(self, alpha):
        self.stats["leaves"] += 1
        pi = Permutation(alpha)
        if not self._kappa_allowed(pi):
            self.stats["leaf_outside_target"] += 1
            return None
        b = kappa_feasible(self.inst, pi)
        if b is None:
            self.stats["leaf_infeasible"] += 1
            return None
        elem = b * kappa_element(self.inst, pi)
        self.found.add(elem)
        self.stats["found"] += 1
        return self._jump_target(alpha)

    # -- the depth-limited variant ---------------------------------------

    def _limit_depth_node(self, alpha, doms):
        """Enumerate all scalings of the assigned pivot images; each one
        determines the whole code image, which either matches the remaining
        columns bijectively (up to scalars) or dies."""
        inst = self.inst
        p, s, k = self.p, self.s, self.k
        self.stats["depth_nodes"] += 1
        pivot_img = FpMatrix.from_rows(
            p,
            [[inst.matrix.rows[r][alpha[c] - 1] for c in range(s)] for r in range(s)],
            s,
        )
        try:
            ainv = mat_inverse(pivot_img)
        except ValueError:
            self.stats["depth_singular"] += 1
            return
        base = mat_mul(ainv, inst.matrix)  # the image code rows, up to row scalings

        col_lookup = {}
        col_lead = {}
        for t in range(s + 1, k + 1):
            key = normalized_column(inst.matrix.col(t), p)
            if key in col_lookup:
                raise NotInClass("orbits must be pairwise inequivalent")
            col_lookup[key] = t
            col_lead[t] = next(x for x in inst.matrix.col(t) if x)
        free_positions = [j for j in range(1, k + 1) if j not in set(alpha)]
        base_cols = {j: base.col(j) for j in free_positions}

        seen_kappas = set()
        for v in product(range(1, p), repeat=s):
            self._tick()
            images = list(alpha) + [0] * (k - s)
            diag = list(v) + [0] * (k - s)
            ok = True
            for j in free_positions:
                col = tuple(v[r] * base_cols[j][r] % p for r in range(s))
                key = normalized_column(col, p)
                t = col_lookup.get(key)
                if t is None:
                    ok = False
                    break
                lead = next(x for x in col if x)
                images[t - 1] = j
                diag[t - 1] = lead * pow(col_lead[t], p - 2, p) % p
            if not ok:
                continue
            kappa_imgs = tuple(images)
            if 0 in kappa_imgs or kappa_imgs in seen_kappas:
                continue
            seen_kappas.add(kappa_imgs)
            pi = Permutation(kappa_imgs)
            if not self._kappa_allowed(pi):
                continue
            w = MonomialElement(p, tuple(diag), pi)
            elem = xi_preimage(inst, w)
            for x in inst.standard_gens:
                if member_row_space(gamma_map(inst, x.conj(elem)), inst.matrix) is None:
                    raise AssertionError("scaling extension must normalise")
            self.found.add(elem)
            self.stats["found"] += 1


# ---------------------------------------------------------------------------
# public entry points


def full_search(
    inst: InPInstance,
    cfg: SearchConfig | None = None,
    kappa_group: PermGroup | None = None,
    domain_restrict=None,
) -> NormalizerResult:
    """Exact normaliser of the instance group inside the symmetric group on
    its orbits' points, by full-depth backtracking."""
    return _Search(
        inst, cfg or SearchConfig(), "full", kappa_group, domain_restrict
    ).run()


def limit_depth_search(
    inst: InPInstance,
    cfg: SearchConfig | None = None,
    kappa_group: PermGroup | None = None,
    domain_restrict=None,
) -> NormalizerResult:
    """Same result as full_search, but the tree is cut at the code
    dimension and completed by enumerating pivot-image scalings."""
    return _Search(
        inst, cfg or SearchConfig(), "limitdepth", kappa_group, domain_restrict
    ).run()


# ---------------------------------------------------------------------------
# the top-level pipeline


def _dual_swappable(inst: InPInstance, method: str) -> bool:
    """The search can run against the dual code when that has smaller
    dimension and still acts on every orbit; the scaling-enumeration
    variant additionally needs the dual orbits pairwise inequivalent."""
    if inst.s * 2 <= inst.k or inst.dual.s == 0:
        return False
    cols = set()
    for j in range(1, inst.k + 1):
        col = normalized_column(inst.dual.col(j), inst.p)
        if not any(col):
            return False
        cols.add(col)
    if method == "limitdepth" and len(cols) != inst.k:
        return False
    return True


def _search_with_dual_swap(
    inst: InPInstance, method: str, cfg: SearchConfig, domain_restrict=None
) -> NormalizerResult:
    """Run the search on the instance, or on its dual when that has lower
    dimension, mapping dual normalisers back by inverting the orbit-fixing
    part."""
    runner = full_search if method == "full" else limit_depth_search
    if not _dual_swappable(inst, method):
        return runner(inst, cfg, domain_restrict=domain_restrict)

    dual_group = PermGroup.from_gens(
        inst.degree, [gamma_inv(inst, row) for row in inst.dual.rows]
    )
    dual_inst = build_instance(dual_group, inst.p)
    restrict_d = None
    if domain_restrict is not None:
        orbit_index = {orb: i for i, orb in enumerate(dual_inst.orbits)}
        to_dual = [orbit_index[orb] for orb in inst.orbits]
        restrict_d = [set() for _ in range(inst.k)]
        for i in range(inst.k):
            restrict_d[to_dual[i]] = {to_dual[j - 1] + 1 for j in domain_restrict[i]}
    sub = runner(dual_inst, cfg, domain_restrict=restrict_d)

    gens: list[Permutation] = list(inst.orbit_gens)
    for g in sub.generators:
        b, kap = decompose_bk(inst, g)
        gens.append(b.inverse() * kap)
    grp = PermGroup.from_gens(inst.degree, gens)
    stats = dict(sub.stats)
    stats["dual_swapped"] = 1
    return NormalizerResult(grp.generators, grp.order(), stats, sub.method)


def normalizer_in_sym(
    H: PermGroup, p: int, method: str = "full", cfg: SearchConfig | None = None
) -> NormalizerResult:
    """Normaliser of H in the symmetric group on the points H moves.

    Equivalent orbits are collapsed first; the search then runs on one
    orbit per class (against the dual code when that is smaller), and the
    result is assembled from the embedded search output and the
    centraliser.  Every returned generator is verified by conjugation.
    """
    if method not in ("full", "limitdepth"):
        raise ValueError(f"unknown method {method!r}")
    cfg = cfg or SearchConfig()
    red = reduce_equivalent_orbits(H, p)
    inst1 = (
        red.instance
        if red.identity
        else build_instance(red.restricted, p)
    )

    domain_restrict = None
    if not red.identity:
        sizes = [red.rep_orbit_class_size[frozenset(orb)] for orb in inst1.orbits]
        domain_restrict = [
            {j + 1 for j in range(inst1.k) if sizes[j] == sizes[i]}
            for i in range(inst1.k)
        ]

    sub = _search_with_dual_swap(inst1, method, cfg, domain_restrict)

    if red.identity:
        gens = list(sub.generators)
    else:
        gens = [red.theta(g) for g in sub.generators]
        gens.extend(red.centralizer_gens)

    group = PermGroup.from_gens(H.degree, gens)
    hcheck = H.chain()
    for g in group.generators:
        for x in H.generators:
            if not hcheck.contains(x.conj(g)):
                raise AssertionError("result generator fails to normalise the input")
    stats = dict(sub.stats)
    stats["verified_generators"] = len(group.generators)
    return NormalizerResult(group.generators, group.order(), stats, method)
