"""Permutations of {1..n} and permutation groups given by generators.

Permutations are immutable image tuples acting on the right, so
i^(gh) = (i^g)^h, and points are 1-based everywhere to match the text
exchange formats.  Stabiliser chains give exact orders, membership tests
and pointwise stabilisers; the construction is deterministic (no random
choices) so search traces and regression tests are reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import lcm


_PAD = bytes(range(256))


class Permutation:
    """A permutation of {1..n}; images[i-1] is the image of point i.

    Degrees up to 256 are backed by a 256-byte lookup table so composition
    runs through bytes.translate; larger degrees fall back to tuples.
    """

    __slots__ = ("_n", "_t", "_b")

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError("not a permutation of {1..n}")
        object.__setattr__(self, "_n", len(images))
        object.__setattr__(self, "_t", images)
        object.__setattr__(
            self,
            "_b",
            bytes(x - 1 for x in images) + _PAD[len(images) :]
            if len(images) <= 256
            else None,
        )

    @classmethod
    def _from_table(cls, n: int, table: bytes) -> "Permutation":
        self = object.__new__(cls)
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_t", None)
        object.__setattr__(self, "_b", table)
        return self

    @classmethod
    def _from_images_unchecked(cls, images: tuple) -> "Permutation":
        self = object.__new__(cls)
        object.__setattr__(self, "_n", len(images))
        object.__setattr__(self, "_t", images)
        object.__setattr__(
            self,
            "_b",
            bytes(x - 1 for x in images) + _PAD[len(images) :]
            if len(images) <= 256
            else None,
        )
        return self

    @property
    def images(self) -> tuple:
        if self._t is None:
            object.__setattr__(
                self, "_t", tuple(x + 1 for x in self._b[: self._n])
            )
        return self._t

    # construction -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        """Build from disjoint cycles; repeated points are rejected."""
        images = list(range(1, n + 1))
        used: set[int] = set()
        for cyc in cycles:
            cyc = tuple(cyc)
            if used & set(cyc) or len(set(cyc)) != len(cyc):
                raise ValueError(f"cycles are not disjoint at {cyc}")
            used.update(cyc)
            for idx, a in enumerate(cyc):
                if not 1 <= a <= n:
                    raise ValueError(f"point {a} out of range 1..{n}")
                images[a - 1] = cyc[(idx + 1) % len(cyc)]
        return cls(images)

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        return cls.from_cycles(n, [(a, b)]) if a != b else cls.identity(n)

    # basic queries ----------------------------------------------------

    @property
    def degree(self) -> int:
        return self._n

    def image(self, i: int) -> int:
        if self._b is not None:
            return self._b[i - 1] + 1
        return self._t[i - 1]

    def is_identity(self) -> bool:
        if self._b is not None:
            return self._b == _PAD
        return all(x == i for i, x in enumerate(self._t, start=1))

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.images, start=1) if x != i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation) or self._n != other._n:
            return False
        if self._b is not None:
            return self._b == other._b
        return self.images == other.images

    def __hash__(self) -> int:
        if self._b is not None:
            return hash((self._n, self._b))
        return hash((self._n, self.images))

    def __setattr__(self, *a):  # immutability
        raise AttributeError("Permutation is immutable")

    # arithmetic -------------------------------------------------------

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Right-action composition: apply self first, then other."""
        if self._n != other._n:
            raise ValueError("degree mismatch")
        if self._b is not None:
            return Permutation._from_table(self._n, self._b.translate(other._b))
        oi = other._t
        return Permutation._from_images_unchecked(
            tuple(oi[x - 1] for x in self._t)
        )

    def inverse(self) -> "Permutation":
        if self._b is not None:
            inv = bytearray(_PAD)
            b = self._b
            for i in range(self._n):
                inv[b[i]] = i
            return Permutation._from_table(self._n, bytes(inv))
        inv = [0] * self._n
        for i, x in enumerate(self._t, start=1):
            inv[x - 1] = i
        return Permutation._from_images_unchecked(tuple(inv))

    def __pow__(self, e: int) -> "Permutation":
        if e < 0:
            return self.inverse() ** (-e)
        result = Permutation.identity(self._n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self, s: "Permutation") -> "Permutation":
        """self conjugated by s, i.e. s^-1 * self * s."""
        if self._n != s._n:
            raise ValueError("degree mismatch")
        if self._b is not None and s._b is not None:
            return Permutation._from_table(
                self._n, s.inverse()._b.translate(self._b).translate(s._b)
            )
        si, xi = s.images, self.images
        out = [0] * self._n
        for i in range(1, self._n + 1):
            out[si[i - 1] - 1] = si[xi[i - 1] - 1]
        return Permutation._from_images_unchecked(tuple(out))

    # structure --------------------------------------------------------

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(1, self.degree + 1):
            if i in seen:
                continue
            cyc = [i]
            j = self.images[i - 1]
            seen.add(i)
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j - 1]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Permutation[{self.cycle_string()}]"

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))


_CYCLE_RE = re.compile(r"\(\s*([0-9]+(?:[,\s]+[0-9]+)*)?\s*\)")


def image_array_string(g: Permutation) -> str:
    """The image-array form, e.g. "[2 1 4 3]"."""
    return "[" + " ".join(str(x) for x in g.images) + "]"


def parse_permutation(text: str, n: int) -> Permutation:
    """Parse cycle notation like "(1 2)(3 4)" or an image array like
    "[2 1 4 3]"; "()" is the identity."""
    stripped = text.strip()
    if stripped.startswith("["):
        if not stripped.endswith("]"):
            raise ValueError(f"unterminated image array {text!r}")
        body = stripped[1:-1].strip()
        imgs = [int(x) for x in re.split(r"[,\s]+", body)] if body else []
        if len(imgs) != n:
            raise ValueError(f"image array {text!r} does not have {n} entries")
        return Permutation(imgs)
    if stripped in ("()", "", "id"):
        return Permutation.identity(n)
    cycles = []
    pos = 0
    for match in _CYCLE_RE.finditer(stripped):
        if stripped[pos : match.start()].strip():
            raise ValueError(f"cannot parse permutation {text!r}")
        body = match.group(1)
        if body:
            cycles.append(tuple(int(x) for x in re.split(r"[,\s]+", body.strip())))
        pos = match.end()
    if stripped[pos:].strip() or not cycles:
        raise ValueError(f"cannot parse permutation {text!r}")
    return Permutation.from_cycles(n, cycles)


# ---------------------------------------------------------------------------
# orbits and restrictions


def orbit_of(point: int, gens) -> set[int]:
    seen = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for pt in frontier:
            for g in gens:
                im = g.images[pt - 1]
                if im not in seen:
                    seen.add(im)
                    nxt.append(im)
        frontier = nxt
    return seen


def orbits_of(gens, domain) -> list[list[int]]:
    """Orbits of the group generated by gens meeting the given points.

    Each orbit is sorted and the list is sorted by minimum, so the result
    is deterministic.  Orbits may extend beyond the domain.
    """
    remaining = sorted(set(domain))
    seen: set[int] = set()
    out = []
    for pt in remaining:
        if pt in seen:
            continue
        orb = orbit_of(pt, gens)
        seen |= orb
        out.append(sorted(orb))
    out.sort(key=lambda o: o[0])
    return out


def restrict_to(g: Permutation, delta) -> Permutation:
    """The permutation agreeing with g on delta and fixing all else."""
    dset = set(delta)
    images = list(range(1, g.degree + 1))
    for pt in dset:
        im = g.images[pt - 1]
        if im not in dset:
            raise ValueError(f"{sorted(dset)} is not invariant under {g!r}")
        images[pt - 1] = im
    return Permutation(images)


def conjugacy_witness(x: Permutation, y: Permutation, delta) -> Permutation | None:
    """A permutation s supported in delta with x^s == y, or None.

    Both x and y must be supported in delta.  Cycles of equal length are
    matched in order of their minimal point, which fixes the witness
    deterministically; None means the cycle types over delta differ.
    """
    dset = sorted(set(delta))
    dlookup = set(dset)
    n = x.degree
    if y.degree != n:
        raise ValueError("degree mismatch")
    for g in (x, y):
        if any(pt not in dlookup for pt in g.support()):
            raise ValueError("permutation not supported in delta")

    def cycles_on(g):
        seen = set()
        out = []
        for i in dset:
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = g.images[i - 1]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = g.images[j - 1]
            out.append(tuple(cyc))
        return out

    cx, cy = cycles_on(x), cycles_on(y)
    by_len_x: dict[int, list] = {}
    by_len_y: dict[int, list] = {}
    for c in cx:
        by_len_x.setdefault(len(c), []).append(c)
    for c in cy:
        by_len_y.setdefault(len(c), []).append(c)
    if {l: len(v) for l, v in by_len_x.items()} != {l: len(v) for l, v in by_len_y.items()}:
        return None
    images = list(range(1, n + 1))
    for length, xs in sorted(by_len_x.items()):
        ys = sorted(by_len_y[length], key=lambda c: min(c))
        for cxi, cyi in zip(sorted(xs, key=lambda c: min(c)), ys):
            # rotate both cycles to start at their minimal point
            ix = cxi.index(min(cxi))
            iy = cyi.index(min(cyi))
            for off in range(length):
                images[cxi[(ix + off) % length] - 1] = cyi[(iy + off) % length]
    return Permutation(images)


# ---------------------------------------------------------------------------
# stabiliser chains


class _Level:
    __slots__ = (
        "beta",
        "gens",
        "transversal",
        "transversal_inv",
        "order_added",
        "checked",
        "dirty",
    )

    def __init__(self, beta: int, ident: Permutation):
        self.beta = beta
        self.gens: list[Permutation] = []  # append-only
        self.transversal: dict[int, Permutation] = {beta: ident}
        self.transversal_inv: dict[int, Permutation] = {beta: ident}
        self.order_added: list[int] = [beta]  # orbit points in discovery order
        self.checked: set[tuple[int, int]] = set()  # verified (point, gen index)
        self.dirty = False


class StabChain:
    """Deterministic base-and-strong-generators chain.

    base_prefix forces the leading base points (useful for pointwise
    stabiliser queries); further base points are the smallest moved points
    of the residues that need them.  Transversal representatives are fixed
    once discovered, so verified Schreier generators stay verified and the
    construction never repeats work.
    """

    def __init__(self, degree: int, generators, base_prefix=()):
        self.degree = degree
        self.base: list[int] = []
        self._levels: list[_Level] = []
        self._known: set[tuple[int, ...]] = set()
        self._ident = Permutation.identity(degree)
        for b in base_prefix:
            self._append_base_point(b)
        for g in generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
            self._place(g)
        self._build()

    # -- plumbing ------------------------------------------------------

    def _append_base_point(self, beta: int):
        self.base.append(beta)
        self._levels.append(_Level(beta, self._ident))

    def _place(self, g: Permutation) -> int:
        """Record g as a strong generator; returns the deepest level it joins."""
        if g.is_identity() or g.images in self._known:
            return -1
        self._known.add(g.images)
        depth = 0
        while depth < len(self.base) and g.images[self.base[depth] - 1] == self.base[depth]:
            depth += 1
        if depth == len(self.base):
            self._append_base_point(g.support()[0])
        for i in range(depth + 1):
            lvl = self._levels[i]
            lvl.gens.append(g)
            lvl.dirty = True
        return depth

    def _extend_orbit(self, i: int):
        """Grow level i's orbit, keeping representatives already assigned."""
        lvl = self._levels[i]
        if not lvl.dirty:
            return
        queue = list(lvl.order_added)
        pos = 0
        while pos < len(queue):
            pt = queue[pos]
            pos += 1
            u = lvl.transversal[pt]
            for g in lvl.gens:
                im = g.images[pt - 1]
                if im not in lvl.transversal:
                    rep = u * g
                    lvl.transversal[im] = rep
                    lvl.transversal_inv[im] = rep.inverse()
                    lvl.order_added.append(im)
                    queue.append(im)
        lvl.dirty = False

    def _sift(self, g: Permutation, start: int = 0) -> tuple[Permutation, int]:
        h = g
        for i in range(start, len(self._levels)):
            self._extend_orbit(i)
            lvl = self._levels[i]
            im = h.images[lvl.beta - 1]
            if im not in lvl.transversal:
                return h, i
            h = h * lvl.transversal_inv[im]
        return h, len(self._levels)

    def _build(self):
        i = len(self._levels) - 1
        while i >= 0:
            self._extend_orbit(i)
            lvl = self._levels[i]
            new_strong = None
            for pt in lvl.order_added:
                u = lvl.transversal[pt]
                for gi, g in enumerate(lvl.gens):
                    if (pt, gi) in lvl.checked:
                        continue
                    im = g.images[pt - 1]
                    schreier = u * g * lvl.transversal_inv[im]
                    h, j = self._sift(schreier, i + 1)
                    if h.is_identity():
                        lvl.checked.add((pt, gi))
                        continue
                    self._place(h)
                    new_strong = min(j, len(self._levels) - 1)
                    break
                if new_strong is not None:
                    break
            if new_strong is not None:
                i = new_strong
                continue
            i -= 1

    # -- queries -------------------------------------------------------

    def order(self) -> int:
        n = 1
        for i in range(len(self._levels)):
            self._extend_orbit(i)
            n *= len(self._levels[i].transversal)
        return n

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        h, _ = self._sift(g)
        return h.is_identity()

    def stabilizer_gens(self, num_points: int) -> list[Permutation]:
        """Strong generators fixing the first num_points base points."""
        if num_points > len(self.base):
            raise ValueError("chain base is shorter than the requested prefix")
        if num_points == len(self.base):
            return []
        return list(self._levels[num_points].gens)

    def orbit_under_stabilizer(self, num_points: int, pt: int) -> set[int]:
        """Orbit of pt under the pointwise stabiliser of base[:num_points]."""
        return orbit_of(pt, self.stabilizer_gens(num_points))


@dataclass(frozen=True, eq=False)
class PermGroup:
    """A permutation group given by generators on {1..degree}."""

    degree: int
    generators: tuple[Permutation, ...]
    _chain_cache: list = field(default_factory=list, repr=False)

    @classmethod
    def from_gens(cls, degree: int, gens) -> "PermGroup":
        filtered = []
        seen = set()
        for g in gens:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
            if not g.is_identity() and g.images not in seen:
                seen.add(g.images)
                filtered.append(g)
        return cls(degree, tuple(filtered))

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, ())

    def chain(self, base_prefix=()) -> StabChain:
        if not base_prefix and self._chain_cache:
            return self._chain_cache[0]
        ch = StabChain(self.degree, self.generators, base_prefix)
        if not base_prefix:
            self._chain_cache.append(ch)
        return ch

    def order(self) -> int:
        return self.chain().order()

    def contains(self, g: Permutation) -> bool:
        return self.chain().contains(g)

    def is_trivial(self) -> bool:
        return not self.generators

    def support(self) -> list[int]:
        pts: set[int] = set()
        for g in self.generators:
            pts.update(g.support())
        return sorted(pts)

    def orbits(self, domain=None) -> list[list[int]]:
        if domain is None:
            domain = range(1, self.degree + 1)
        if not self.generators:
            return [[d] for d in sorted(set(domain))]
        return orbits_of(self.generators, domain)

    def point_stabilizer(self, points) -> "PermGroup":
        """Pointwise stabiliser of the given points."""
        pts = tuple(points)
        ch = self.chain(base_prefix=pts)
        return PermGroup.from_gens(self.degree, ch.stabilizer_gens(len(pts)))

    def elements(self, limit: int = 10**7) -> list[Permutation]:
        """Every element, by closure; guarded by the limit."""
        ident = Permutation.identity(self.degree)
        seen = {ident.images: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for h in frontier:
                for g in self.generators:
                    prod = h * g
                    if prod.images not in seen:
                        if len(seen) >= limit:
                            raise OverflowError("group too large to enumerate")
                        seen[prod.images] = prod
                        nxt.append(prod)
            frontier = nxt
        return sorted(seen.values(), key=lambda x: x.images)


def normal_closure(group_gens, subset_gens, degree: int) -> PermGroup:
    """Normal closure of <subset_gens> under the group <group_gens>."""
    closure = [g for g in subset_gens if not g.is_identity()]
    grp = PermGroup.from_gens(degree, closure)
    frontier = list(closure)
    while frontier:
        work, frontier = frontier, []
        for h in work:
            for g in group_gens:
                c = h.conj(g)
                if not grp.contains(c):
                    closure.append(c)
                    grp = PermGroup.from_gens(degree, closure)
                    frontier.append(c)
    return grp


# ---------------------------------------------------------------------------
# group text exchange format


def format_group(p: int, degree: int, gens) -> str:
    lines = [f"{p} {degree}"]
    lines += [g.cycle_string() for g in gens]
    return "\n".join(lines)


def parse_group(text: str) -> tuple[int, int, list[Permutation]]:
    """Parse the group exchange format: "p n" then one generator per line."""
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty group text")
    try:
        p, n = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad group header {lines[0]!r}") from exc
    gens = []
    for lineno, ln in enumerate(lines[1:], start=2):
        try:
            gens.append(parse_permutation(ln, n))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return p, n, gens
