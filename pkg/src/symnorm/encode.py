"""Translation between orbit-wise cyclic permutation groups and linear codes.

A group H whose orbits all have prime size p, with cyclic restriction of
order p on each, is determined by a linear code over F_p: fix a p-cycle
g_i on each orbit, send a product of powers of the g_i to its exponent
vector, and row-reduce the images of the generators.  This module
recognises such groups, builds the full translation (ordered orbits,
orbit bijections, generator matrix in standard form, dual code), and
realises the structural maps the search relies on: the monomial action on
the code, its permutation preimages, per-orbit centralisers, and the
reduction that collapses equivalent orbits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from symnorm.gfp import (
    FpMatrix,
    PrimeField,
    column_equiv_classes,
    dual_matrix,
    independent_rows,
    matrix_rank,
    normalized_column,
    rref_standard,
)
from symnorm.perm import PermGroup, Permutation, orbits_of, restrict_to


class NotInClass(Exception):
    """The input group is not orbit-wise cyclic of the requested order."""


# ---------------------------------------------------------------------------
# monomial elements (diagonal times coordinate permutation)


@dataclass(frozen=True)
class MonomialElement:
    """An invertible monomial map on F_p^k: scale coordinates, then permute.

    Acting on row vectors on the right: (v.w)_j picks the coordinate
    permuted onto j and multiplies by its scale factor.
    """

    p: int
    diag: tuple[int, ...]
    perm: Permutation

    def __post_init__(self):
        if len(self.diag) != self.perm.degree:
            raise ValueError("diagonal length must match permutation degree")
        if any(not 0 < d < self.p for d in self.diag):
            raise ValueError("diagonal entries must be units")

    @classmethod
    def identity(cls, p: int, k: int) -> "MonomialElement":
        return cls(p, (1,) * k, Permutation.identity(k))

    @property
    def k(self) -> int:
        return len(self.diag)

    def __mul__(self, other: "MonomialElement") -> "MonomialElement":
        if self.p != other.p or self.k != other.k:
            raise ValueError("mismatched monomial elements")
        diag = tuple(
            self.diag[i] * other.diag[self.perm.image(i + 1) - 1] % self.p
            for i in range(self.k)
        )
        return MonomialElement(self.p, diag, self.perm * other.perm)

    def inverse(self) -> "MonomialElement":
        pinv = self.perm.inverse()
        diag = tuple(
            pow(self.diag[pinv.image(j + 1) - 1], self.p - 2, self.p)
            for j in range(self.k)
        )
        return MonomialElement(self.p, diag, pinv)

    def apply(self, v) -> tuple[int, ...]:
        """Image of a row vector under the monomial action."""
        if len(v) != self.k:
            raise ValueError("length mismatch")
        out = [0] * self.k
        for i in range(self.k):
            out[self.perm.image(i + 1) - 1] = v[i] * self.diag[i] % self.p
        return tuple(out)

    def apply_matrix(self, m: FpMatrix) -> FpMatrix:
        if m.k != self.k or m.p != self.p:
            raise ValueError("matrix shape mismatch")
        return FpMatrix.from_rows(self.p, [self.apply(r) for r in m.rows], self.k)

    def is_identity(self) -> bool:
        return all(d == 1 for d in self.diag) and self.perm.is_identity()


# ---------------------------------------------------------------------------
# recognised instances


@dataclass(frozen=True, eq=False)
class InPInstance:
    """A recognised orbit-wise cyclic group, translated to a code.

    Orbits are ordered so that the code's pivot columns come first (labels
    are permuted, points are not), the matrix is in standard form, and the
    i-th standard generator maps to the i-th matrix row.
    """

    field: PrimeField
    degree: int
    orbits: tuple[tuple[int, ...], ...]
    orbit_gens: tuple[Permutation, ...]
    phibars: tuple[Permutation, ...]  # phibars[0] is the identity
    matrix: FpMatrix
    dual: FpMatrix
    standard_gens: tuple[Permutation, ...]
    orbit_cycles: tuple[tuple[int, ...], ...] = field(repr=False)
    point_orbit: dict = field(repr=False)
    point_exp: dict = field(repr=False)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def k(self) -> int:
        return len(self.orbits)

    @property
    def s(self) -> int:
        return self.matrix.s

    @property
    def n(self) -> int:
        return self.p * self.k

    def distinct_columns(self) -> bool:
        """True when no two orbits are equivalent (columns non-proportional)."""
        cols = {normalized_column(self.matrix.col(j), self.p) for j in range(1, self.k + 1)}
        return len(cols) == self.k

    def group(self) -> PermGroup:
        return PermGroup.from_gens(self.degree, self.standard_gens)

    def orbit_index_of_point(self, pt: int) -> int:
        """1-based orbit index containing pt."""
        return self.point_orbit[pt] + 1


def _orbit_cycle(g: Permutation, orbit, p: int):
    """The cycle (base, base^g, ...) of g on its orbit, or None if not a p-cycle."""
    base = min(orbit)
    cyc = [base]
    cur = g.image(base)
    while cur != base:
        cyc.append(cur)
        if len(cyc) > p:
            return None
        cur = g.image(cur)
    if len(cyc) != p or set(cyc) != set(orbit):
        return None
    return tuple(cyc)


def build_instance(H: PermGroup, p: int) -> InPInstance:
    """Recognise H and build the full translation, or raise NotInClass.

    The orbits considered are those on the support of H; each must have
    exactly p points with every generator restricting to a power of one
    p-cycle there.
    """
    fld = PrimeField(p)
    support = H.support()
    if not support:
        raise NotInClass("the trivial group has no orbits of size p")
    orbits = [tuple(o) for o in orbits_of(H.generators, support)]
    for orb in orbits:
        if len(orb) != p:
            raise NotInClass(f"orbit {list(orb)} has size {len(orb)}, expected {p}")

    k = len(orbits)
    gens0: list[Permutation] = []
    cycles0: list[tuple[int, ...]] = []
    pos0: list[dict] = []
    for orb in orbits:
        g = None
        for x in H.generators:
            if any(x.image(q) != q for q in orb):
                g = restrict_to(x, orb)
                break
        if g is None:
            raise NotInClass(f"no generator moves orbit {list(orb)}")
        cyc = _orbit_cycle(g, orb, p)
        if cyc is None:
            raise NotInClass(f"restriction to orbit {list(orb)} is not a p-cycle")
        # normalise to the power sending the minimum to the next-smallest
        # point, so rebuilding a group from its code reproduces the code
        second = sorted(orb)[1]
        g = g ** cyc.index(second)
        cyc = _orbit_cycle(g, orb, p)
        assert cyc is not None
        gens0.append(g)
        cycles0.append(cyc)
        pos0.append({pt: u for u, pt in enumerate(cyc)})

    # exponent vectors of the generators; also verifies cyclic restrictions
    vectors = []
    for x in H.generators:
        vec = []
        for i, orb in enumerate(orbits):
            im = x.image(cycles0[i][0])
            if im not in pos0[i]:
                raise NotInClass(f"generator {x!r} does not preserve orbit {list(orb)}")
            r = pos0[i][im]
            if any(x.image(cycles0[i][u]) != cycles0[i][(u + r) % p] for u in range(p)):
                raise NotInClass(
                    f"restriction of {x!r} to orbit {list(orb)} is not a power "
                    "of the orbit cycle"
                )
            vec.append(r)
        vectors.append(tuple(vec))

    basis = independent_rows(p, vectors)
    if not basis:
        raise NotInClass("group acts trivially")
    first = rref_standard(FpMatrix.from_rows(p, basis, k))

    # relabel orbits so pivot columns come first
    order = list(first.pivots) + [j for j in range(1, k + 1) if j not in first.pivots]
    orbits = [orbits[j - 1] for j in order]
    gens = [gens0[j - 1] for j in order]
    cycles = [cycles0[j - 1] for j in order]
    mstd = rref_standard(first.mstd.permute_columns(tuple(order))).mstd
    if not mstd.is_standard():
        raise AssertionError("pivot-first relabelling must give standard form")

    phibars = [Permutation.identity(H.degree)]
    for i in range(1, k):
        imgs = list(range(1, H.degree + 1))
        for a, b in zip(cycles[0], cycles[i]):
            imgs[a - 1] = b
            imgs[b - 1] = a
        phibars.append(Permutation(imgs))
        if gens[0].conj(phibars[i]) != gens[i]:
            raise AssertionError("orbit bijection must conjugate the base cycle")

    point_orbit = {}
    point_exp = {}
    for i, cyc in enumerate(cycles):
        for u, pt in enumerate(cyc):
            point_orbit[pt] = i
            point_exp[pt] = u

    inst = InPInstance(
        field=fld,
        degree=H.degree,
        orbits=tuple(orbits),
        orbit_gens=tuple(gens),
        phibars=tuple(phibars),
        matrix=mstd,
        dual=dual_matrix(mstd),
        standard_gens=(),
        orbit_cycles=tuple(cycles),
        point_orbit=point_orbit,
        point_exp=point_exp,
    )
    object.__setattr__(
        inst, "standard_gens", tuple(gamma_inv(inst, row) for row in mstd.rows)
    )
    return inst


# ---------------------------------------------------------------------------
# the exponent-vector isomorphism and its inverse


def gamma_map(inst: InPInstance, g: Permutation) -> tuple[int, ...]:
    """Exponent vector of g, which must act as a power of the cycle on
    every orbit and fix everything else."""
    p = inst.p
    vec = []
    for i, cyc in enumerate(inst.orbit_cycles):
        im = g.image(cyc[0])
        r = inst.point_exp.get(im)
        if r is None or inst.point_orbit[im] != i:
            raise ValueError("permutation does not fix the orbit decomposition")
        if any(g.image(cyc[u]) != cyc[(u + r) % p] for u in range(p)):
            raise ValueError("restriction is not a power of the orbit cycle")
        vec.append(r)
    if any(inst.point_orbit.get(pt) is None for pt in g.support()):
        raise ValueError("permutation moves points outside the orbits")
    return tuple(vec)


def gamma_inv(inst: InPInstance, v) -> Permutation:
    """The product of orbit-cycle powers with the given exponents."""
    if len(v) != inst.k:
        raise ValueError("length mismatch")
    p = inst.p
    imgs = list(range(1, inst.degree + 1))
    for i, r in enumerate(v):
        r %= p
        if r == 0:
            continue
        cyc = inst.orbit_cycles[i]
        for u in range(p):
            imgs[cyc[u] - 1] = cyc[(u + r) % p]
    return Permutation(imgs)


def exponent_scaling_perm(inst: InPInstance, i: int, d: int, fix_point: int | None = None) -> Permutation:
    """The permutation of orbit i fixing one point and raising the cycle to
    the d-th power: it conjugates the orbit cycle g to g^d.

    fix_point defaults to the orbit's minimal point (the cycle base).
    """
    p = inst.p
    d %= p
    if d == 0:
        raise ValueError("exponent must be a unit")
    cyc = inst.orbit_cycles[i]
    if fix_point is not None and fix_point != cyc[0]:
        off = inst.point_exp[fix_point]
        cyc = cyc[off:] + cyc[:off]
    imgs = list(range(1, inst.degree + 1))
    for u in range(p):
        imgs[cyc[u] - 1] = cyc[u * d % p]
    return Permutation(imgs)


# ---------------------------------------------------------------------------
# the overgroup L = B K and the monomial epimorphism


def orbit_action(inst: InPInstance, l: Permutation) -> Permutation:
    """The permutation of orbit indices induced by l, as a degree-k value."""
    sets = {orb: idx for idx, orb in enumerate(inst.orbits)}
    imgs = [0] * inst.k
    for i, orb in enumerate(inst.orbits):
        target = tuple(sorted(l.image(q) for q in orb))
        j = sets.get(target)
        if j is None:
            raise ValueError("permutation does not permute the orbits")
        imgs[i] = j + 1
    return Permutation(imgs)


def kappa_element(inst: InPInstance, pi: Permutation) -> Permutation:
    """The product of orbit bijections realising the index permutation pi."""
    if pi.degree != inst.k:
        raise ValueError("index permutation must have degree k")
    word: list[int] = []  # sequence of orbit indices x meaning the swap (1 x)
    for cyc in pi.cycles():
        c1 = cyc[0]
        for other in cyc[1:]:
            for x in (c1, other, c1) if c1 != 1 else (other,):
                word.append(x)
    out = Permutation.identity(inst.degree)
    for x in word:
        out = out * inst.phibars[x - 1]
    if orbit_action(inst, out) != pi:
        raise AssertionError("orbit bijection word does not realise pi")
    return out


def decompose_bk(inst: InPInstance, l: Permutation) -> tuple[Permutation, Permutation]:
    """Split l = b * kappa with b fixing every orbit setwise and kappa a
    product of orbit bijections; raises if l is outside the overgroup."""
    pi = orbit_action(inst, l)
    kap = kappa_element(inst, pi)
    b = l * kap.inverse()
    _diag_of(inst, b)  # validates that b normalises each orbit cycle
    return b, kap


def _diag_of(inst: InPInstance, b: Permutation) -> tuple[int, ...]:
    ds = []
    for i, g in enumerate(inst.orbit_gens):
        conj = g.conj(b)
        im = conj.image(inst.orbit_cycles[i][0])
        d = inst.point_exp.get(im)
        if d is None or inst.point_orbit[im] != i or conj != g**d or d == 0:
            raise ValueError("element does not normalise the per-orbit cycles")
        ds.append(d)
    return tuple(ds)


def xi_image(inst: InPInstance, l: Permutation) -> MonomialElement:
    """The monomial element describing how conjugation by l acts on
    exponent vectors."""
    pi = orbit_action(inst, l)
    kap = kappa_element(inst, pi)
    b = l * kap.inverse()
    return MonomialElement(inst.p, _diag_of(inst, b), pi)


def xi_preimage(inst: InPInstance, w: MonomialElement) -> Permutation:
    """A permutation with the given monomial image: per-orbit exponent maps
    fixing the minimal points, times the orbit bijections for w.perm."""
    if w.k != inst.k or w.p != inst.p:
        raise ValueError("monomial element shape mismatch")
    b = Permutation.identity(inst.degree)
    for i, d in enumerate(w.diag):
        if d != 1:
            b = b * exponent_scaling_perm(inst, i, d)
    return b * kappa_element(inst, w.perm)


# ---------------------------------------------------------------------------
# stabiliser codes


def eliminate_column(mat: FpMatrix, col: int) -> FpMatrix:
    """Pivot column col to a single row and drop that row.

    Leaves the matrix unchanged when the column is already zero.  The
    result generates the subcode of rows vanishing at col.
    """
    p = mat.p
    rows = [list(r) for r in mat.rows]
    ci = col - 1
    piv = next((i for i in range(len(rows)) if rows[i][ci]), None)
    if piv is None:
        return mat
    inv = pow(rows[piv][ci], p - 2, p)
    prow = [x * inv % p for x in rows[piv]]
    out = []
    for i, row in enumerate(rows):
        if i == piv:
            continue
        f = row[ci]
        if f:
            row = [(x - f * y) % p for x, y in zip(row, prow)]
        out.append(tuple(row))
    return FpMatrix(p, mat.k, tuple(out))


def stab_matrix(inst: InPInstance, orbit_indices=(), points=()) -> FpMatrix:
    """Generator matrix of the exponent image of the pointwise stabiliser.

    Stabilising any point of an orbit stabilises the orbit pointwise
    (the restriction acts regularly), so points are converted to their
    orbit indices first.
    """
    idxs = list(orbit_indices)
    idxs += [inst.point_orbit[pt] + 1 for pt in points]
    work = inst.matrix
    for idx in idxs:
        work = eliminate_column(work, idx)
    return work


# ---------------------------------------------------------------------------
# code -> group and per-orbit centralisers


def code_to_group(m: FpMatrix) -> PermGroup:
    """The group on p*k points with consecutive p-blocks whose exponent
    code is the row space of m."""
    if matrix_rank(m) != m.s or m.s == 0:
        raise ValueError("generator matrix must have full row rank")
    p, k = m.p, m.k
    n = p * k
    gens = []
    for row in m.rows:
        imgs = list(range(1, n + 1))
        for i, r in enumerate(row):
            if r % p == 0:
                continue
            base = p * i
            for u in range(p):
                imgs[base + u] = base + (u + r) % p + 1
        gens.append(Permutation(imgs))
    return PermGroup.from_gens(n, gens)


def equiv_orbit_swap(inst: InPInstance, i: int, j: int, a: int) -> Permutation:
    """The involution exchanging orbits i and j (1-based) along the
    exponent-scaled pairing u -> a*u; it centralises any group whose code
    has column j equal to a times column i."""
    p = inst.p
    ci, cj = inst.orbit_cycles[i - 1], inst.orbit_cycles[j - 1]
    imgs = list(range(1, inst.degree + 1))
    for u in range(p):
        x, y = ci[u], cj[a * u % p]
        imgs[x - 1] = y
        imgs[y - 1] = x
    return Permutation(imgs)


def centralizer_sym(inst: InPInstance) -> PermGroup:
    """The centraliser of the instance group in the ambient symmetric group:
    per-orbit cycles plus exponent-matched swaps of equivalent orbits."""
    gens = list(inst.orbit_gens)
    part = column_equiv_classes(inst.matrix)
    for cell in part.cells:
        rep = cell[0]
        lead_rep = next(x for x in inst.matrix.col(rep) if x)
        for j in cell[1:]:
            lead_j = next(x for x in inst.matrix.col(j) if x)
            a = lead_j * pow(lead_rep, inst.p - 2, inst.p) % inst.p
            gens.append(equiv_orbit_swap(inst, rep, j, a))
    return PermGroup.from_gens(inst.degree, gens)


# ---------------------------------------------------------------------------
# collapsing equivalent orbits


@dataclass(frozen=True, eq=False)
class ReduceResult:
    """Data for computing a normaliser through one orbit per equivalence
    class: the restricted group, the embedding of its normalising elements
    back to the full domain, the centraliser, and the class sizes that
    constrain which representative orbits may be exchanged."""

    identity: bool
    p: int
    instance: InPInstance
    gamma_points: tuple[int, ...]
    restricted: PermGroup
    centralizer_gens: tuple[Permutation, ...]
    rep_orbit_class_size: dict
    _theta_data: tuple = field(repr=False)

    def theta(self, u: Permutation) -> Permutation:
        """Extend a normalising element of the restricted group to the full
        domain, moving each orbit alongside its class representative."""
        classes, swaps, rep_sets = self._theta_data
        inst = self.instance
        imgs = list(range(1, inst.degree + 1))
        for ci, cell in enumerate(classes):
            rep = cell[0]
            target_set = tuple(sorted(u.image(q) for q in inst.orbits[rep - 1]))
            cj = rep_sets.get(target_set)
            if cj is None:
                raise ValueError("element does not permute the representative orbits")
            if len(classes[cj]) != len(cell):
                raise ValueError("element mixes classes of different sizes")
            for s in range(len(cell)):
                src_swap = swaps[ci][s]
                dst_swap = swaps[cj][s]
                for pt in inst.orbits[cell[s] - 1]:
                    imgs[pt - 1] = dst_swap.image(u.image(src_swap.image(pt)))
        return Permutation(imgs)


def reduce_equivalent_orbits(H: PermGroup, p: int) -> ReduceResult:
    """Set up the reduction of the normaliser computation to one orbit per
    equivalence class (trivial when orbits are pairwise inequivalent)."""
    inst = build_instance(H, p)
    part = column_equiv_classes(inst.matrix)
    classes = [tuple(c) for c in part.cells]
    identity = all(len(c) == 1 for c in classes)

    swaps: list[list[Permutation]] = []
    cent: list[Permutation] = list(inst.orbit_gens)
    for cell in classes:
        rep = cell[0]
        lead_rep = next(x for x in inst.matrix.col(rep) if x)
        cell_swaps = [Permutation.identity(inst.degree)]
        for j in cell[1:]:
            lead_j = next(x for x in inst.matrix.col(j) if x)
            a = lead_j * pow(lead_rep, p - 2, p) % p
            sw = equiv_orbit_swap(inst, rep, j, a)
            cell_swaps.append(sw)
            cent.append(sw)
        swaps.append(cell_swaps)

    gamma_pts = tuple(sorted(pt for cell in classes for pt in inst.orbits[cell[0] - 1]))
    restricted = PermGroup.from_gens(
        H.degree, [restrict_to(x, gamma_pts) for x in H.generators]
    )
    rep_sets = {inst.orbits[cell[0] - 1]: ci for ci, cell in enumerate(classes)}
    class_size = {
        frozenset(inst.orbits[cell[0] - 1]): len(cell) for cell in classes
    }
    return ReduceResult(
        identity=identity,
        p=p,
        instance=inst,
        gamma_points=gamma_pts,
        restricted=restricted,
        centralizer_gens=tuple(cent),
        rep_orbit_class_size=class_size,
        _theta_data=(classes, swaps, rep_sets),
    )


def build_lk(inst: InPInstance) -> tuple[list[Permutation], list[Permutation]]:
    """Generators of the orbit-exchange part K and the orbit-fixing part B
    of the overgroup containing every normalising element."""
    k_gens = list(inst.phibars[1:])
    b_gens = list(inst.orbit_gens)
    t = inst.field.t
    if t != 1:
        for i in range(inst.k):
            b_gens.append(exponent_scaling_perm(inst, i, t))
    return k_gens, b_gens
