"""Automorphism generators, orbit partitions and the omega invariant.

The automorphism search follows a generator-image strategy: a short greedy
generating sequence is fixed, the first generator's image ranges over one
representative per fingerprint-compatible conjugacy class (inner twisting),
the remaining images range over whole fingerprint buckets, and every candidate
tuple is validated by the graph-order criterion in G x G.  Emitted maps plus
the conjugation generators generate Aut(G); every automorphism is inner
composed with an emitted map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError
from .perm import BSGS, ElementTable, MULT_TABLE_CAP, PermGroup, Permutation, enumerate_elements
from .structure import (
    SubgroupRecord,
    _bsgs_order_arrays,
    _eval_word,
    _graph_order,
    _word_checks,
    class_of_index,
    conjugacy_classes,
    generating_sequence,
    normal_subgroups,
    own_class_labels,
    spectrum,
)

_DTYPE = np.int32

_SAMPLE_PAIRS = 10_000
_SAMPLE_SEED = 0x0A07B17


@dataclass(frozen=True)
class Fingerprint:
    """Cheap automorphism-invariant data attached to a conjugacy class."""

    element_order: int
    class_size: int
    power_profile: tuple[int, ...]


def class_fingerprints(T: ElementTable) -> tuple[Fingerprint, ...]:
    """One fingerprint per conjugacy class (aligned with conjugacy_classes).

    The power profile records the refined labels of the classes of g^q for
    each prime q dividing |G|; refined labels are used instead of raw class
    indices so that the profile is constant on automorphism orbits.
    """
    classes = conjugacy_classes(T)
    labels = own_class_labels(T)
    class_of = class_of_index(T)
    from .structure import prime_factors

    primes = prime_factors(T.size) if T.size > 1 else []
    out = []
    for cls in classes:
        profile = tuple(
            int(labels[class_of[T.power_index(cls.representative_index, q)]]) for q in primes
        )
        out.append(Fingerprint(cls.element_order, cls.size, profile))
    return tuple(out)


class Automorphism:
    """An automorphism as a permutation of element-table indices.

    The full index map is materialized lazily: search-produced maps are stored
    as images of the greedy generating sequence and expanded through the BFS
    words of the table only when element_map is actually needed.
    """

    __slots__ = ("table", "_map", "_seq", "_images", "_image_arrays")

    def __init__(self, table: ElementTable, index_map=None, seq=None, images=None):
        self.table = table
        self._map = None
        self._seq = seq
        self._images = images
        self._image_arrays = None
        if index_map is not None:
            arr = np.ascontiguousarray(index_map, dtype=np.int64)
            arr.flags.writeable = False
            self._map = arr

    @classmethod
    def from_index_map(cls, table: ElementTable, index_map) -> "Automorphism":
        return cls(table, index_map=index_map)

    @classmethod
    def from_generator_images(cls, table: ElementTable, seq, images) -> "Automorphism":
        return cls(table, seq=tuple(seq), images=tuple(images))

    @classmethod
    def identity(cls, table: ElementTable) -> "Automorphism":
        return cls(table, index_map=np.arange(table.size, dtype=np.int64))

    def _img_arrays(self):
        if self._image_arrays is None:
            self._image_arrays = [self.table.matrix[i] for i in self._images]
        return self._image_arrays

    def image_row(self, i: int) -> np.ndarray:
        """The image of elements[i], as a 0-based image array."""
        if self._map is not None:
            return self.table.matrix[int(self._map[i])]
        T = self.table
        word = _seq_word_of(T, self._seq, i)
        row = np.arange(T.degree, dtype=_DTYPE)
        for a in word:
            row = self._img_arrays()[a][row]
        return row

    def image_of_index(self, i: int) -> int:
        if self._map is not None:
            return int(self._map[i])
        return self.table.lookup_row(self.image_row(i))

    @property
    def element_map(self) -> np.ndarray:
        """Full index map (materialized and cached on first access)."""
        if self._map is None:
            T = self.table
            seq_data = _seq_words(T, self._seq)
            parent, genix, bfs_order = seq_data
            rows = np.empty((T.size, T.degree), dtype=_DTYPE)
            imgs = self._img_arrays()
            for i in bfs_order:
                p = parent[i]
                if p < 0:
                    rows[i] = np.arange(T.degree, dtype=_DTYPE)
                else:
                    rows[i] = imgs[genix[i]][rows[p]]
            arr = T.lookup_rows(rows)
            arr.flags.writeable = False
            self._map = arr
        return self._map

    def is_identity(self) -> bool:
        if self._map is not None:
            return bool(np.array_equal(self._map, np.arange(self.table.size)))
        return all(self.image_of_index(self.table.index_of(g)) == self.table.index_of(g) for g in self.table.group.generators)

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and self.table is other.table and np.array_equal(self.element_map, other.element_map)

    def __hash__(self) -> int:
        return hash(self.element_map.tobytes())

    def __repr__(self) -> str:
        if self._images is not None:
            return f"<Automorphism images={self._images}>"
        return f"<Automorphism on {self.table.size} indices>"


def _seq_words(T: ElementTable, seq):
    """BFS word structure of the table over the greedy sequence elements."""
    cached = getattr(T, "_seq_word_cache", None)
    if cached is not None and cached[0] == tuple(seq):
        return cached[1]
    m = T.size
    arrays = [T.matrix[i] for i in seq]
    parent = np.full(m, -2, dtype=np.int64)
    genix = np.full(m, -1, dtype=np.int64)
    order = np.empty(m, dtype=np.int64)
    parent[T.identity_index] = -1
    order[0] = T.identity_index
    count = 1
    frontier = [T.identity_index]
    while frontier:
        nxt = []
        fmat = T.matrix[frontier]
        for gi, arr in enumerate(arrays):
            prod = arr[fmat]
            idxs = T.lookup_rows(prod)
            for src, j in zip(frontier, idxs):
                j = int(j)
                if parent[j] == -2:
                    parent[j] = src
                    genix[j] = gi
                    order[count] = j
                    count += 1
                    nxt.append(j)
        frontier = nxt
    if count != m:
        raise AssertionError("sequence does not generate the group")
    data = (parent, genix, order)
    T._seq_word_cache = (tuple(seq), data)
    return data


def _seq_word_of(T: ElementTable, seq, i: int) -> list[int]:
    parent, genix, _ = _seq_words(T, seq)
    word = []
    while parent[i] >= 0:
        word.append(int(genix[i]))
        i = int(parent[i])
    word.reverse()
    return word


# -- constructing automorphisms ------------------------------------------------


def conjugation_automorphism(T: ElementTable, g: Permutation) -> Automorphism:
    """The inner automorphism x -> g^-1 x g, as an index map."""
    gi = T.index_of(g)  # raises if g is outside the table
    g_arr = T.matrix[gi]
    ginv_arr = T.matrix[int(T.inverse_indices[gi])]
    rows = g_arr[T.matrix[:, ginv_arr]]
    return Automorphism.from_index_map(T, T.lookup_rows(rows))


def normalizer_induced_automorphism(T: ElementTable, s: Permutation) -> Automorphism:
    """Conjugation by an external permutation that normalizes the group."""
    G = T.group
    chain = G.bsgs()
    if s.degree != T.degree:
        raise NormalizationError(f"degree {s.degree} != group degree {T.degree}")
    s_inv = s.inverse()
    for g in G.generators:
        from .perm import compose

        if not chain.contains(compose(compose(s_inv, g), s)):
            raise NormalizationError(f"{s.cycle_string()} does not normalize the group")
    s_arr = s._arr
    sinv_arr = s_inv._arr
    rows = s_arr[T.matrix[:, sinv_arr]]
    return Automorphism.from_index_map(T, T.lookup_rows(rows))


def verify_automorphism(T: ElementTable, aut: Automorphism) -> bool:
    """Check product preservation: exhaustive below the mult cap, sampled above."""
    amap = aut.element_map
    if len(set(amap.tolist())) != T.size:
        return False
    if amap[T.identity_index] != T.identity_index:
        return False
    if T.size <= MULT_TABLE_CAP:
        M = T.mult
        return bool(np.array_equal(amap[M], M[np.ix_(amap, amap)]))
    # sampled pairs plus the graph-order criterion on generator images
    gen_src = [T.matrix[i] for i in T.gen_indices]
    gen_img = [T.matrix[int(amap[i])] for i in T.gen_indices]
    if _bsgs_order_arrays(T.degree, gen_img) != T.size:
        return False
    if _graph_order(T.degree, gen_src, T.degree, gen_img) != T.size:
        return False
    rng = random.Random(_SAMPLE_SEED)
    for _ in range(_SAMPLE_PAIRS):
        i = rng.randrange(T.size)
        j = rng.randrange(T.size)
        if amap[T.product_index(i, j)] != T.product_index(int(amap[i]), int(amap[j])):
            return False
    return True


# -- the automorphism generator search ------------------------------------------


def automorphism_generators(T: ElementTable) -> list[Automorphism]:
    """Maps that, together with Inn(G), generate Aut(G).

    Deterministic: conjugations by the stored group generators come first
    (duplicates dropped), then the validated outer maps sorted by their
    generator-image tuples.
    """
    if T._aut_generators is not None:
        return T._aut_generators
    if T.size == 1:
        out = [Automorphism.identity(T)]
        T._aut_generators = out
        return out

    seq = generating_sequence(T)
    labels = own_class_labels(T)
    class_of = class_of_index(T)
    classes = conjugacy_classes(T)
    elem_label = labels[class_of]

    pools = []
    for pos, s in enumerate(seq):
        lbl = int(labels[class_of[s]])
        if pos == 0:
            pool = [classes[c].representative_index for c in range(len(classes)) if labels[c] == lbl]
        else:
            pool = [int(i) for i in np.nonzero(elem_label == lbl)[0]]
        pools.append(pool)

    k = len(seq)
    checks = [_word_checks(d) for d in range(k)]
    src_labels = [[int(elem_label[_eval_word(T, seq, w)]) for w in checks[d]] for d in range(k)]
    src_arrays = [T.matrix[i] for i in seq]

    found: list[tuple[int, ...]] = []
    assignment = [0] * k
    used: set[int] = set()

    def place(depth: int) -> None:
        for cand in pools[depth]:
            if cand in used:
                continue
            assignment[depth] = cand
            ok = True
            for w, lbl in zip(checks[depth], src_labels[depth]):
                if int(elem_label[_eval_word(T, assignment, w)]) != lbl:
                    ok = False
                    break
            if not ok:
                continue
            if depth + 1 == k:
                img_arrays = [T.matrix[i] for i in assignment]
                if _bsgs_order_arrays(T.degree, img_arrays) != T.size:
                    continue
                if _graph_order(T.degree, src_arrays, T.degree, img_arrays) == T.size:
                    found.append(tuple(assignment))
            else:
                used.add(cand)
                place(depth + 1)
                used.discard(cand)

    place(0)
    if tuple(seq) not in found:
        # seq[0] is the smallest index of maximal order, hence its own class
        # representative, so the identity tuple must have been validated
        raise AssertionError("automorphism search missed the identity map")

    out: list[Automorphism] = []
    seen_maps: set[bytes] = set()
    for g in T.group.generators:
        aut = conjugation_automorphism(T, g)
        key = aut.element_map.tobytes()
        if key not in seen_maps:
            seen_maps.add(key)
            out.append(aut)
    for tup in sorted(found):
        out.append(Automorphism.from_generator_images(T, seq, tup))
    T._aut_generators = out
    return out


def automorphism_group_order(T: ElementTable) -> int:
    """Order of Aut(G): BSGS over the emitted maps acting on element indices."""
    if T.size == 1:
        return 1
    gens = automorphism_generators(T)
    chain = BSGS(T.size)
    for aut in gens:
        chain._extend_arr(aut.element_map.astype(_DTYPE))
    return chain.order()


# -- orbit partitions ------------------------------------------------------------


@dataclass(frozen=True)
class OrbitPartition:
    """Partition of element indices into automorphism orbits."""

    cells: tuple[tuple[int, ...], ...]
    cell_orders: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.cells)

    def census(self) -> tuple[tuple[int, int], ...]:
        """(element order, cell size) per cell."""
        return tuple((o, len(c)) for o, c in zip(self.cell_orders, self.cells))

    def cell_of(self, index: int) -> int:
        for cid, cell in enumerate(self.cells):
            if index in cell:
                return cid
        raise KeyError(index)


def _class_action(T: ElementTable, aut: Automorphism) -> list[int]:
    """Image class id per class id under the automorphism."""
    classes = conjugacy_classes(T)
    class_of = class_of_index(T)
    return [int(class_of[aut.image_of_index(cls.representative_index)]) for cls in classes]


def orbit_partition(T: ElementTable, gens: list[Automorphism]) -> OrbitPartition:
    """Closure of the conjugacy classes under the generator maps.

    Orbits are unions of conjugacy classes, so the closure runs at class level
    and cells are expanded afterwards.  Cells come out sorted by (element
    order, size, smallest member).
    """
    classes = conjugacy_classes(T)
    k = len(classes)
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for aut in gens:
        for cid, img in enumerate(_class_action(T, aut)):
            union(cid, img)

    groups: dict[int, list[int]] = {}
    for cid in range(k):
        groups.setdefault(find(cid), []).append(cid)

    cells = []
    for root, members in groups.items():
        idxs = sorted(i for cid in members for i in classes[cid].member_indices)
        cell_order = {classes[cid].element_order for cid in members}
        if len(cell_order) != 1:
            raise AssertionError("orbit cell mixes element orders")
        cells.append((cell_order.pop(), idxs))
    cells.sort(key=lambda t: (t[0], len(t[1]), t[1][0]))
    return OrbitPartition(
        cells=tuple(tuple(c) for _, c in cells),
        cell_orders=tuple(o for o, _ in cells),
    )


def orbit_partition_of(source) -> OrbitPartition:
    """Orbit partition from a group or table, running the full pipeline."""
    T = source if isinstance(source, ElementTable) else enumerate_elements(source)
    return orbit_partition(T, automorphism_generators(T))


def omega(source) -> int:
    """Number of automorphism orbits."""
    return len(orbit_partition_of(source))


def is_at_group(T: ElementTable, partition: OrbitPartition) -> bool:
    """AT-groups: one orbit per occurring element order."""
    return len(partition) == len(spectrum(T))


# -- characteristic subgroups ------------------------------------------------------


def characteristic_subgroups(T: ElementTable, gens: list[Automorphism] | None = None) -> list[SubgroupRecord]:
    """Normal subgroups invariant under every emitted automorphism generator.

    Fills the is_characteristic flag on all records of the normal lattice and
    returns the characteristic ones.
    """
    if gens is None:
        gens = automorphism_generators(T)
    records = normal_subgroups(T)
    class_of = class_of_index(T)
    actions = [_class_action(T, aut) for aut in gens]
    out = []
    for rec in records:
        cls_ids = {int(class_of[i]) for i in rec.member_indices}
        char = all(all(act[c] in cls_ids for c in cls_ids) for act in actions)
        rec.is_characteristic = char
        if char:
            out.append(rec)
    return out


def is_characteristically_simple(T: ElementTable, gens: list[Automorphism] | None = None) -> bool:
    """No proper nontrivial characteristic subgroup (trivial group excluded)."""
    if T.size == 1:
        return False
    return len(characteristic_subgroups(T, gens)) == 2
