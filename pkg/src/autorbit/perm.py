"""Permutation arithmetic, stabilizer chains and exhaustive element tables.

Conventions used by the whole package:

- points are 1-based; a permutation of degree n maps {1..n} to itself and is
  stored as the tuple of images ``images[i-1] = image of i``;
- products act left-to-right: ``compose(p, q)`` maps ``i`` to ``q(p(i))``;
- degree-0 groups are forbidden, the degree-1 trivial group is allowed.

Internally permutations are 0-based numpy int32 arrays so that composition is
a single fancy-indexing operation; the arrays are never mutated after
construction.
"""

from __future__ import annotations

import math
import os
import weakref
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityError,
    DegreeMismatchError,
    MalformedCycleError,
    NotBijectionError,
    PointRangeError,
)

DEFAULT_ELEMENT_CAP = 250_000
MULT_TABLE_CAP = 5_000

_DTYPE = np.int32


def resolve_element_cap(cap=None):
    """Return the effective element-table cap (argument, env var, or default)."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("AUTORBIT_ELEMENT_CAP")
    if env is not None:
        return int(env)
    return DEFAULT_ELEMENT_CAP


class Permutation:
    """An immutable bijection of {1..n}, stored as its image sequence."""

    __slots__ = ("images", "_arr")

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        n = len(images)
        if n == 0:
            raise NotBijectionError("degree-0 permutations are forbidden")
        if sorted(images) != list(range(1, n + 1)):
            raise NotBijectionError(f"image sequence {images} is not a bijection of 1..{n}")
        self.images = images
        arr = np.array(images, dtype=_DTYPE) - 1
        arr.flags.writeable = False
        self._arr = arr

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise NotBijectionError("degree must be at least 1")
        return cls(range(1, degree + 1))

    @classmethod
    def _from_array(cls, arr) -> "Permutation":
        """Wrap a 0-based image array without re-validating (internal)."""
        p = object.__new__(cls)
        p.images = tuple(int(i) + 1 for i in arr)
        a = np.asarray(arr, dtype=_DTYPE).copy()
        a.flags.writeable = False
        p._arr = a
        return p

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        if not 1 <= point <= self.degree:
            raise PointRangeError(f"point {point} outside 1..{self.degree}")
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = np.empty(self.degree, dtype=_DTYPE)
        inv[self._arr] = np.arange(self.degree, dtype=_DTYPE)
        return Permutation._from_array(inv)

    def is_identity(self) -> bool:
        return all(img == i + 1 for i, img in enumerate(self.images))

    def order(self) -> int:
        return perm_order(self)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its minimum, sorted."""
        seen = [False] * self.degree
        out = []
        for start in range(1, self.degree + 1):
            if seen[start - 1] or self.images[start - 1] == start:
                continue
            cyc = [start]
            seen[start - 1] = True
            j = self.images[start - 1]
            while j != start:
                seen[j - 1] = True
                cyc.append(j)
                j = self.images[j - 1]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycs)

    def moved_points(self) -> list[int]:
        return [i + 1 for i, img in enumerate(self.images) if img != i + 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Product of p and q acting left-to-right: i -> q(p(i))."""
    if p.degree != q.degree:
        raise DegreeMismatchError(f"degree {p.degree} != {q.degree}")
    return Permutation._from_array(q._arr[p._arr])


def perm_order(p: Permutation) -> int:
    """Least k >= 1 with p^k = identity (lcm of cycle lengths)."""
    out = 1
    for c in p.cycles():
        out = math.lcm(out, len(c))
    return out


def perm_from_cycles(cycle_list: Iterable[Iterable[int]], degree: int) -> Permutation:
    """Build a permutation from disjoint cycles; omitted points are fixed."""
    if degree < 1:
        raise NotBijectionError("degree must be at least 1")
    images = list(range(1, degree + 1))
    seen = set()
    for cyc in cycle_list:
        cyc = [int(pt) for pt in cyc]
        for pt in cyc:
            if not 1 <= pt <= degree:
                raise PointRangeError(f"point {pt} outside 1..{degree}")
            if pt in seen:
                raise MalformedCycleError(f"point {pt} repeated across cycles")
            seen.add(pt)
        for a, b in zip(cyc, cyc[1:]):
            images[a - 1] = b
        if len(cyc) > 1:
            images[cyc[-1] - 1] = cyc[0]
    return Permutation(images)


def parse_cycle_string(text: str, degree: int) -> Permutation:
    """Parse "(1 2 3)(4 5)" into a permutation; "()" is the identity."""
    text = text.strip()
    cycles = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch != "(":
            raise MalformedCycleError(f"unexpected character {ch!r} in cycle string {text!r}")
        end = text.find(")", pos)
        if end < 0:
            raise MalformedCycleError(f"unterminated cycle in {text!r}")
        body = text[pos + 1 : end].strip()
        if body:
            try:
                cycles.append([int(tok) for tok in body.split()])
            except ValueError:
                raise MalformedCycleError(f"non-integer point in cycle {text[pos:end+1]!r}") from None
        pos = end + 1
    return perm_from_cycles(cycles, degree)


class PermGroup:
    """A permutation group given by a nonempty generating sequence."""

    def __init__(self, generators: Sequence[Permutation], name: str | None = None, degree: int | None = None):
        generators = tuple(generators)
        if not generators:
            if degree is None:
                raise ValueError("a group needs at least one generator or an explicit degree")
            generators = (Permutation.identity(degree),)
        deg = generators[0].degree
        for g in generators:
            if g.degree != deg:
                raise DegreeMismatchError("generators of mixed degree")
        if degree is not None and degree != deg:
            raise DegreeMismatchError(f"declared degree {degree} != generator degree {deg}")
        self.generators = generators
        self.degree = deg
        self.name = name
        self._bsgs: BSGS | None = None

    def bsgs(self) -> "BSGS":
        if self._bsgs is None:
            self._bsgs = build_bsgs(self)
        return self._bsgs

    def order(self) -> int:
        return self.bsgs().order()

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatchError(f"element degree {p.degree} != group degree {self.degree}")
        return self.bsgs().contains(p)

    def __contains__(self, p: Permutation) -> bool:
        return self.contains(p)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} gens={len(self.generators)}>"


class _Level:
    """One level of a stabilizer chain: a base point and its Schreier tree."""

    __slots__ = ("point", "orbit", "orbit_list", "done")

    def __init__(self, point: int):
        self.point = point
        self.orbit = {point: None}  # point -> (gen_id, parent) edge, None at the root
        self.orbit_list = [point]
        self.done = set()  # processed (orbit point, gen_id) Schreier pairs


class BSGS:
    """Base and strong generating set, built deterministically.

    Base points are chosen as the smallest point moved by the generator that
    forces a new level, so repeated runs produce identical chains.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = ()):
        self.degree = degree
        self._arange = np.arange(degree, dtype=_DTYPE)
        self._gens: list[np.ndarray] = []
        self._gen_invs: list[np.ndarray] = []
        self._gen_levels: list[int] = []
        self._levels: list[_Level] = []
        for g in generators:
            self.extend(g)

    # -- public surface ----------------------------------------------------

    @property
    def base(self) -> tuple[int, ...]:
        """Base points, 1-based."""
        return tuple(level.point + 1 for level in self._levels)

    @property
    def strong_generators(self) -> tuple[Permutation, ...]:
        return tuple(Permutation._from_array(a) for a in self._gens)

    @property
    def basic_orbits(self) -> list[dict[int, Permutation]]:
        """Per base point, orbit point -> coset representative (1-based).

        Materializes one permutation per orbit point; meant for inspection of
        small chains, not for the hot path.
        """
        out = []
        for k, level in enumerate(self._levels):
            tr = {}
            for pt in level.orbit_list:
                tr[pt + 1] = Permutation._from_array(self._transversal(k, pt))
            out.append(tr)
        return out

    def basic_orbit_points(self) -> list[list[int]]:
        return [[pt + 1 for pt in level.orbit_list] for level in self._levels]

    def order(self) -> int:
        out = 1
        for level in self._levels:
            out *= len(level.orbit)
        return out

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatchError(f"element degree {p.degree} != chain degree {self.degree}")
        return self._contains_arr(p._arr)

    def extend(self, g: Permutation) -> bool:
        """Add a generator; returns True if the group grew."""
        if g.degree != self.degree:
            raise DegreeMismatchError(f"generator degree {g.degree} != chain degree {self.degree}")
        return self._extend_arr(g._arr)

    def sift(self, p: Permutation) -> Permutation:
        """Residue of p after stripping through the chain (identity iff member)."""
        res, _ = self._strip(p._arr, 0)
        if res is None:
            return Permutation.identity(self.degree)
        return Permutation._from_array(res)

    # -- internals ---------------------------------------------------------

    def _contains_arr(self, arr) -> bool:
        res, _ = self._strip(arr, 0)
        return res is None

    def _extend_arr(self, arr) -> bool:
        res, lvl = self._strip(arr, 0)
        if res is None:
            return False
        self._install(res, lvl)
        for k in range(lvl, -1, -1):
            self._close(k)
        return True

    def _install(self, arr, lvl):
        if lvl == len(self._levels):
            moved = int(np.nonzero(arr != self._arange)[0][0])
            self._levels.append(_Level(moved))
        arr = arr.copy()
        arr.flags.writeable = False
        inv = np.empty(self.degree, dtype=_DTYPE)
        inv[arr] = self._arange
        gid = len(self._gens)
        self._gens.append(arr)
        self._gen_invs.append(inv)
        self._gen_levels.append(lvl)
        return gid

    def _active_ids(self, k):
        return [gid for gid, glvl in enumerate(self._gen_levels) if glvl >= k]

    def _strip(self, arr, start):
        """Strip arr through levels start..; returns (residue or None, level)."""
        h = arr
        for k in range(start, len(self._levels)):
            level = self._levels[k]
            delta = int(h[level.point])
            if delta not in level.orbit:
                return h, k
            while delta != level.point:
                gid, _parent = level.orbit[delta]
                h = self._gen_invs[gid][h]
                delta = int(h[level.point])
        if np.array_equal(h, self._arange):
            return None, len(self._levels)
        return h, len(self._levels)

    def _extend_orbit(self, k):
        level = self._levels[k]
        active = self._active_ids(k)
        orbit = level.orbit
        queue = level.orbit_list
        i = 0
        while i < len(queue):
            p = queue[i]
            for gid in active:
                q = int(self._gens[gid][p])
                if q not in orbit:
                    orbit[q] = (gid, p)
                    queue.append(q)
            i += 1

    def _transversal(self, k, pt):
        """Coset representative u with u(base_k) = pt, as a 0-based array."""
        level = self._levels[k]
        chain = []
        while pt != level.point:
            gid, parent = level.orbit[pt]
            chain.append(gid)
            pt = parent
        u = self._arange
        for gid in reversed(chain):
            u = self._gens[gid][u]
        return u

    def _close(self, k):
        """Process Schreier generators at level k until they all sift away."""
        level = self._levels[k]
        while True:
            self._extend_orbit(k)
            active = self._active_ids(k)
            progressed = False
            for p in list(level.orbit_list):
                for gid in active:
                    if (p, gid) in level.done:
                        continue
                    level.done.add((p, gid))
                    u_p = self._transversal(k, p)
                    g = self._gens[gid][u_p]
                    res, lvl = self._strip(g, k)
                    if res is None:
                        continue
                    self._install(res, lvl)
                    for j in range(lvl, k, -1):
                        self._close(j)
                    progressed = True
                    break
                if progressed:
                    break
            if not progressed:
                return


def build_bsgs(G: PermGroup) -> BSGS:
    """Deterministic Schreier-Sims over the group's stored generators."""
    return BSGS(G.degree, G.generators)


def order(G: PermGroup) -> int:
    return G.order()


def contains(G: PermGroup, p: Permutation) -> bool:
    return G.contains(p)


class ElementTable:
    """Exhaustive, canonically sorted listing of a group's elements.

    Rows of ``matrix`` are the 0-based image arrays of all elements, sorted
    lexicographically; ``index_of`` inverts the listing.  BFS parent links are
    kept so that any element can be rebuilt as a word in the generators, which
    is what automorphism extension uses.
    """

    def __init__(self, group: PermGroup, cap: int | None = None):
        cap = resolve_element_cap(cap)
        n = group.degree
        size = group.order()
        if size > cap:
            raise CapacityError(size, cap)
        self.group = group
        self.cap = cap
        self.degree = n
        self.size = size

        gen_arrays = [g._arr for g in group.generators]
        rows = [np.arange(n, dtype=_DTYPE)]
        key = {rows[0].tobytes(): 0}
        parents = [-1]
        genixs = [-1]
        frontier = [0]
        while frontier:
            fmat = np.stack([rows[i] for i in frontier])
            nxt = []
            for gi, g in enumerate(gen_arrays):
                prod = g[fmat]
                for r, src in zip(prod, frontier):
                    b = r.tobytes()
                    if b not in key:
                        key[b] = len(rows)
                        rows.append(r)
                        parents.append(src)
                        genixs.append(gi)
                        nxt.append(key[b])
            frontier = nxt
        if len(rows) != size:
            raise AssertionError(f"closure found {len(rows)} elements, BSGS order is {size}")

        raw = np.stack(rows)
        sort_idx = np.lexsort(raw.T[::-1])
        new_of_old = np.empty(size, dtype=np.int64)
        new_of_old[sort_idx] = np.arange(size)
        self.matrix = raw[sort_idx]
        self.matrix.flags.writeable = False
        self.parent = np.array([-1 if parents[old] < 0 else new_of_old[parents[old]] for old in sort_idx], dtype=np.int64)
        self.genix = np.array([genixs[old] for old in sort_idx], dtype=np.int64)
        self.bfs_order = new_of_old.copy()  # position t = sorted index of t-th discovered element
        self._index = {self.matrix[i].tobytes(): i for i in range(size)}
        self.identity_index = self._index[np.arange(n, dtype=_DTYPE).tobytes()]
        self.gen_arrays = gen_arrays
        self.gen_indices = [self._index[a.tobytes()] for a in gen_arrays]

        self._orders = None
        self._inverses = None
        self._mult = None
        self._elements = None
        # caches filled by the structure/aut layers
        self._classes = None
        self._class_of = None
        self._class_labels = None
        self._normal_subgroups = None
        self._aut_generators = None

    # -- basic accessors ---------------------------------------------------

    @property
    def elements(self) -> tuple[Permutation, ...]:
        if self._elements is None:
            self._elements = tuple(Permutation._from_array(row) for row in self.matrix)
        return self._elements

    def element(self, i: int) -> Permutation:
        return Permutation._from_array(self.matrix[i])

    def index_of(self, p: Permutation) -> int:
        if p.degree != self.degree:
            raise DegreeMismatchError(f"element degree {p.degree} != table degree {self.degree}")
        b = p._arr.astype(_DTYPE).tobytes()
        if b not in self._index:
            raise KeyError(f"{p!r} is not an element of {self.group!r}")
        return self._index[b]

    def lookup_row(self, row) -> int:
        return self._index[np.ascontiguousarray(row, dtype=_DTYPE).tobytes()]

    def lookup_rows(self, rows) -> np.ndarray:
        rows = np.ascontiguousarray(rows, dtype=_DTYPE)
        return np.fromiter((self._index[r.tobytes()] for r in rows), dtype=np.int64, count=len(rows))

    @property
    def orders(self) -> np.ndarray:
        """Element order per table index."""
        if self._orders is None:
            out = np.empty(self.size, dtype=np.int64)
            for i, row in enumerate(self.matrix):
                seen = np.zeros(self.degree, dtype=bool)
                o = 1
                for s in range(self.degree):
                    if seen[s]:
                        continue
                    length = 0
                    j = s
                    while not seen[j]:
                        seen[j] = True
                        j = int(row[j])
                        length += 1
                    o = math.lcm(o, length)
                out[i] = o
            self._orders = out
        return self._orders

    @property
    def inverse_indices(self) -> np.ndarray:
        if self._inverses is None:
            arange = np.arange(self.degree, dtype=_DTYPE)
            inv = np.empty(self.degree, dtype=_DTYPE)
            out = np.empty(self.size, dtype=np.int64)
            for i, row in enumerate(self.matrix):
                inv[row] = arange
                out[i] = self._index[inv.tobytes()]
            self._inverses = out
        return self._inverses

    @property
    def mult(self) -> np.ndarray | None:
        """Cached product table, or None above the mult cap."""
        if self.size > MULT_TABLE_CAP:
            return None
        if self._mult is None:
            m = self.size
            table = np.empty((m, m), dtype=np.int32)
            gen_cols = {}
            for gi, arr in enumerate(self.gen_arrays):
                rows = arr[self.matrix]
                gen_cols[gi] = self.lookup_rows(rows).astype(np.int32)
            for i in self.bfs_order:
                if self.parent[i] < 0:
                    table[:, i] = np.arange(m, dtype=np.int32)
                else:
                    table[:, i] = gen_cols[self.genix[i]][table[:, self.parent[i]]]
            self._mult = table
        return self._mult

    def product_index(self, i: int, j: int) -> int:
        """Index of elements[i] * elements[j] (left-to-right)."""
        if self._mult is not None:
            return int(self._mult[i, j])
        row = self.matrix[j][self.matrix[i]]
        return self._index[row.tobytes()]

    def products_with(self, indices, j) -> np.ndarray:
        """Indices of elements[i] * elements[j] for each i in indices."""
        if self._mult is not None:
            return self._mult[np.asarray(indices), j].astype(np.int64)
        rows = self.matrix[j][self.matrix[np.asarray(indices)]]
        return self.lookup_rows(rows)

    def power_index(self, i: int, e: int) -> int:
        """Index of elements[i] ** e (e >= 0) by repeated squaring on rows."""
        row = np.arange(self.degree, dtype=_DTYPE)
        base = self.matrix[i]
        while e:
            if e & 1:
                row = base[row]
            base = base[base]
            e >>= 1
        return self._index[np.ascontiguousarray(row).tobytes()]

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"<ElementTable of {self.group!r}: {self.size} elements>"


_TABLE_CACHE: "weakref.WeakKeyDictionary[PermGroup, dict[int, ElementTable]]" = weakref.WeakKeyDictionary()


def enumerate_elements(G: PermGroup, cap: int | None = None) -> ElementTable:
    """Canonical element table of G; raises CapacityError past the cap.

    Tables are cached per group object, so repeated calls on the same
    PermGroup share one table (and everything computed on it).
    """
    cap = resolve_element_cap(cap)
    per_group = _TABLE_CACHE.setdefault(G, {})
    if cap not in per_group:
        per_group[cap] = ElementTable(G, cap=cap)
    return per_group[cap]
