"""Structural operations on enumerated groups.

Conjugacy classes, the normal-subgroup lattice (via class-union joins),
derived series, quotient actions, products, centralizers, Sylow subgroups and
isomorphism testing.  Most operations take an ElementTable; purely
generator-level operations (derived series, products) take a PermGroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DegreeMismatchError, DivisibilityError, NormalityError
from .perm import (
    BSGS,
    ElementTable,
    PermGroup,
    Permutation,
    compose,
    enumerate_elements,
    resolve_element_cap,
)

_DTYPE = np.int32


# -- small number-theory helpers ------------------------------------------


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of n, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n > 1 and prime_factors(n) == [n]


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def multiplicative_order(a: int, m: int) -> int:
    """Order of a modulo m (a coprime to m); order 1 when m <= 2."""
    if m <= 2:
        return 1
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    x = a % m
    k = 1
    while x != 1:
        x = (x * a) % m
        k += 1
    return k


# -- conjugacy classes ------------------------------------------------------


@dataclass(frozen=True)
class ConjClass:
    """One conjugacy class, referenced by table indices."""

    representative_index: int
    member_indices: tuple[int, ...]
    element_order: int
    size: int


def conjugacy_classes(T: ElementTable) -> tuple[ConjClass, ...]:
    """Classes of T's group, sorted by (element order, size, representative).

    The class array T is scanned in index order, so each representative is the
    smallest index of its class.
    """
    if T._classes is not None:
        return T._classes
    m = T.size
    orders = T.orders
    assigned = np.full(m, -1, dtype=np.int64)
    raw = []
    gen_invs = []
    for g in T.gen_arrays:
        inv = np.empty(T.degree, dtype=_DTYPE)
        inv[g] = np.arange(T.degree, dtype=_DTYPE)
        gen_invs.append(inv)
    for i in range(m):
        if assigned[i] >= 0:
            continue
        cid = len(raw)
        assigned[i] = cid
        members = [i]
        frontier = np.array([i], dtype=np.int64)
        while len(frontier):
            rows = T.matrix[frontier]
            new = []
            for g, ginv in zip(T.gen_arrays, gen_invs):
                conj = g[rows[:, ginv]]
                for r in conj:
                    j = T._index[r.tobytes()]
                    if assigned[j] < 0:
                        assigned[j] = cid
                        members.append(j)
                        new.append(j)
            frontier = np.array(new, dtype=np.int64)
        members.sort()
        raw.append(ConjClass(i, tuple(members), int(orders[i]), len(members)))

    order_perm = sorted(range(len(raw)), key=lambda c: (raw[c].element_order, raw[c].size, raw[c].representative_index))
    classes = tuple(raw[c] for c in order_perm)
    class_of = np.empty(m, dtype=np.int64)
    for new_cid, cls in enumerate(classes):
        class_of[np.array(cls.member_indices, dtype=np.int64)] = new_cid
    T._classes = classes
    T._class_of = class_of
    return classes


def class_of_index(T: ElementTable) -> np.ndarray:
    conjugacy_classes(T)
    return T._class_of


def class_labels(tables: Sequence[ElementTable]) -> list[np.ndarray]:
    """Automorphism-invariant class labels, computed jointly over tables.

    Classes start out labelled by (element order, class size) and are refined
    by the labels of their power classes g^q (q over the primes dividing the
    group order) until stable.  Labels are canonical: equal labels mean equal
    refinement histories, also across the tables of one joint call, which is
    what cross-group isomorphism candidate matching needs.
    """
    per = []
    for T in tables:
        classes = conjugacy_classes(T)
        class_of = class_of_index(T)
        primes = prime_factors(T.size) if T.size > 1 else []
        power_class = []
        for cls in classes:
            power_class.append(
                tuple(int(class_of[T.power_index(cls.representative_index, q)]) for q in primes)
            )
        per.append((classes, power_class))

    keys = [[(cls.element_order, cls.size) for cls in classes] for classes, _ in per]
    n_distinct = -1
    while True:
        universe = sorted({k for ks in keys for k in ks})
        ids = {k: i for i, k in enumerate(universe)}
        labels = [[ids[k] for k in ks] for ks in keys]
        if len(universe) == n_distinct:
            return [np.array(ls, dtype=np.int64) for ls in labels]
        n_distinct = len(universe)
        keys = []
        for (classes, power_class), ls in zip(per, labels):
            keys.append(
                [(ls[c], tuple(ls[pc] for pc in power_class[c])) for c in range(len(classes))]
            )


def own_class_labels(T: ElementTable) -> np.ndarray:
    if T._class_labels is None:
        T._class_labels = class_labels([T])[0]
    return T._class_labels


# -- derived series and solvability ----------------------------------------


def commutator(g: Permutation, h: Permutation) -> Permutation:
    return compose(compose(compose(g.inverse(), h.inverse()), g), h)


def normal_closure(G: PermGroup, seeds: Iterable[Permutation]) -> PermGroup:
    """Smallest normal subgroup of G containing the seeds."""
    chain = BSGS(G.degree)
    gens_out = []
    pending = list(seeds)
    while pending:
        s = pending.pop(0)
        if not chain.extend(s):
            continue
        gens_out.append(s)
        for g in G.generators:
            pending.append(compose(compose(g.inverse(), s), g))
    if not gens_out:
        gens_out = [G.identity()]
    H = PermGroup(gens_out, degree=G.degree)
    H._bsgs = chain
    return H


def derived_subgroup(G: PermGroup) -> PermGroup:
    comms = []
    for i, g in enumerate(G.generators):
        for h in G.generators[i + 1 :]:
            c = commutator(g, h)
            if not c.is_identity():
                comms.append(c)
    return normal_closure(G, comms)


def derived_series(G: PermGroup) -> list[PermGroup]:
    series = [G]
    while True:
        nxt = derived_subgroup(series[-1])
        if nxt.order() == series[-1].order():
            break
        series.append(nxt)
        if nxt.order() == 1:
            break
    return series


def is_solvable(G: PermGroup) -> bool:
    return derived_series(G)[-1].order() == 1


def is_abelian(G: PermGroup) -> bool:
    gens = G.generators
    for i, g in enumerate(gens):
        for h in gens[i + 1 :]:
            if compose(g, h) != compose(h, g):
                return False
    return True


# -- normal subgroup lattice -------------------------------------------------


@dataclass
class SubgroupRecord:
    """A subgroup of a parent group, with normality/characteristicity flags."""

    subgroup: PermGroup
    is_normal: bool
    is_characteristic: bool | None = None
    member_indices: np.ndarray = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.member_indices)


def member_indices_of(T: ElementTable, H: PermGroup) -> np.ndarray:
    """Sorted table indices of the subgroup generated by H's generators."""
    target = H.order()
    if target == T.size:
        return np.arange(T.size, dtype=np.int64)
    gidx = [T.index_of(g) for g in H.generators]
    seen = {T.identity_index}
    frontier = [T.identity_index]
    while frontier:
        nxt = []
        for j in gidx:
            for v in T.products_with(frontier, j):
                v = int(v)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    if len(seen) != target:
        raise AssertionError(f"subgroup closure found {len(seen)} elements, order is {target}")
    return np.array(sorted(seen), dtype=np.int64)


def normal_subgroups(T: ElementTable) -> list[SubgroupRecord]:
    """All normal subgroups, as the join-closure of class closures."""
    if T._normal_subgroups is not None:
        return T._normal_subgroups
    G = T.group
    classes = conjugacy_classes(T)

    pool: dict[bytes, SubgroupRecord] = {}

    def register(H: PermGroup) -> None:
        members = member_indices_of(T, H)
        key = members.tobytes()
        if key not in pool:
            pool[key] = SubgroupRecord(H, True, None, members)

    for cls in classes:
        register(normal_closure(G, [T.element(cls.representative_index)]))

    while True:
        records = sorted(pool.values(), key=lambda r: (r.order, tuple(r.member_indices[:4])))
        grew = False
        for i, a in enumerate(records):
            for b in records[i + 1 :]:
                join = PermGroup(a.subgroup.generators + b.subgroup.generators, degree=G.degree)
                members = member_indices_of(T, join)
                key = members.tobytes()
                if key not in pool:
                    pool[key] = SubgroupRecord(join, True, None, members)
                    grew = True
        if not grew:
            break

    out = sorted(pool.values(), key=lambda r: (r.order, tuple(r.member_indices.tolist())))
    T._normal_subgroups = out
    return out


# -- quotients and products ---------------------------------------------------


def _subgroup_and_members(T: ElementTable, N) -> tuple[PermGroup, np.ndarray]:
    if isinstance(N, SubgroupRecord):
        if not N.is_normal:
            raise NormalityError("subgroup record is not flagged normal")
        members = N.member_indices
        if members is None:
            members = member_indices_of(T, N.subgroup)
        return N.subgroup, members
    H = N
    if H.degree != T.degree:
        raise DegreeMismatchError("subgroup degree differs from parent degree")
    chain = T.group.bsgs()
    Hb = H.bsgs()
    for n in H.generators:
        if not chain.contains(n):
            raise NormalityError(f"{n!r} is not an element of the parent group")
        for g in T.group.generators:
            if not Hb.contains(compose(compose(g.inverse(), n), g)):
                raise NormalityError("subgroup is not normal in the parent group")
    return H, member_indices_of(T, H)


def quotient(G: PermGroup, N, cap: int | None = None) -> PermGroup:
    """G acting on the right cosets of a normal subgroup N.

    Coset points are numbered by ascending minimal member index, so the result
    is deterministic.  Needs G's element table, hence |G| within the cap.
    """
    T = enumerate_elements(G, cap=cap)
    sub, members = _subgroup_and_members(T, N)
    m = T.size
    coset_id = np.full(m, -1, dtype=np.int64)
    reps = []
    for i in range(m):
        if coset_id[i] >= 0:
            continue
        cid = len(reps)
        coset_id[T.products_with(members, i)] = cid
        reps.append(i)
    deg_q = len(reps)
    qgens = []
    for gi in T.gen_indices:
        images = [int(coset_id[T.product_index(rep, gi)]) + 1 for rep in reps]
        qgens.append(Permutation(images))
    name = None
    if G.name:
        name = f"{G.name}/N{len(members)}"
    return PermGroup(qgens, name=name)


def direct_product(G: PermGroup, H: PermGroup, name: str | None = None) -> PermGroup:
    n, m = G.degree, H.degree
    gens = []
    for g in G.generators:
        gens.append(Permutation(g.images + tuple(range(n + 1, n + m + 1))))
    for h in H.generators:
        gens.append(Permutation(tuple(range(1, n + 1)) + tuple(i + n for i in h.images)))
    if name is None and G.name and H.name:
        name = f"DP({G.name},{H.name})"
    return PermGroup(gens, name=name)


def direct_power(H: PermGroup, k: int, name: str | None = None) -> PermGroup:
    if k < 1:
        raise ValueError("direct power needs k >= 1")
    out = H
    for _ in range(k - 1):
        out = direct_product(out, H)
    if name is None and H.name:
        name = f"POW({H.name},{k})"
    return PermGroup(out.generators, name=name)


# -- centralizers -------------------------------------------------------------


def _reduce_to_generators(T: ElementTable, indices) -> PermGroup:
    """Small generating set for the subgroup formed by the given indices."""
    chain = BSGS(T.degree)
    sel = []
    target = len(indices)
    for i in indices:
        if chain.order() == target:
            break
        if chain._extend_arr(T.matrix[int(i)]):
            sel.append(T.element(int(i)))
    if not sel:
        sel = [T.group.identity()]
    H = PermGroup(sel, degree=T.degree)
    H._bsgs = chain
    return H


def centralizer(T: ElementTable, S: Iterable[Permutation]) -> PermGroup:
    """All elements commuting with every member of S."""
    mask = np.ones(T.size, dtype=bool)
    for s in S:
        if s.degree != T.degree:
            raise DegreeMismatchError("centralizer target degree differs from table degree")
        arr = s._arr
        left = arr[T.matrix]          # x then s
        right = T.matrix[:, arr]      # s then x
        mask &= (left == right).all(axis=1)
    return _reduce_to_generators(T, np.nonzero(mask)[0])


def center(T: ElementTable) -> PermGroup:
    return centralizer(T, T.group.generators)


# -- Sylow subgroups ----------------------------------------------------------


def _p_closure_indices(T: ElementTable, gen_indices: list[int]) -> set[int]:
    seen = {T.identity_index}
    frontier = [T.identity_index]
    while frontier:
        nxt = []
        for j in gen_indices:
            for v in T.products_with(frontier, j):
                v = int(v)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def _normalizing_mask(T: ElementTable, member_set: set[int], sub_gen_indices: list[int]) -> np.ndarray:
    """Mask over table indices g with g^-1 u g in the subgroup for every generator u."""
    member_mask = np.zeros(T.size, dtype=bool)
    member_mask[list(member_set)] = True
    inv_rows = T.matrix[T.inverse_indices]
    mask = np.ones(T.size, dtype=bool)
    for u in sub_gen_indices:
        u_row = T.matrix[u]
        c1 = u_row[inv_rows]                              # g^-1 then u
        conj = np.take_along_axis(T.matrix, c1, axis=1)   # then g
        idx = T.lookup_rows(conj)
        mask &= member_mask[idx]
    return mask


def sylow_subgroup(T: ElementTable, p: int) -> PermGroup:
    """A Sylow p-subgroup, grown by adjoining normalizer p-elements.

    Starts from a maximal-order p-element and repeatedly adjoins the smallest
    p-power-order element of the current normalizer lying outside, which keeps
    the chain a p-group until the full p-part is reached.
    """
    if not is_prime(p):
        raise DivisibilityError(f"{p} is not prime")
    if T.size % p != 0:
        raise DivisibilityError(f"{p} does not divide the group order {T.size}")
    pp = p_part(T.size, p)
    orders = T.orders
    is_p_elt = np.array([o > 1 and pp % o == 0 for o in orders])
    max_p_order = int(orders[is_p_elt].max())
    seeds = [int(i) for i in np.nonzero(orders == max_p_order)[0]]

    def grow(seed: int) -> PermGroup | None:
        gen_idx = [seed]
        members = _p_closure_indices(T, gen_idx)
        while len(members) < pp:
            norm = _normalizing_mask(T, members, gen_idx)
            cand = np.nonzero(norm & is_p_elt)[0]
            picked = None
            for z in cand:
                if int(z) not in members:
                    picked = int(z)
                    break
            if picked is None:
                return None
            gen_idx.append(picked)
            members = _p_closure_indices(T, gen_idx)
        return PermGroup([T.element(i) for i in gen_idx], degree=T.degree)

    for seed in seeds:
        H = grow(seed)
        if H is not None:
            return H

    # Desk-scale fallback: adjoin any p-element that keeps the closure a p-group.
    if T.size <= 5000:
        gen_idx: list[int] = []
        size = 1
        p_elts = [int(i) for i in np.nonzero(is_p_elt)[0]]
        while size < pp:
            progressed = False
            for z in p_elts:
                trial = gen_idx + [z]
                members = _p_closure_indices(T, trial)
                k = len(members)
                if k > size and pp % k == 0:
                    gen_idx = trial
                    size = k
                    progressed = True
                    break
            if not progressed:
                break
        if size == pp:
            return PermGroup([T.element(i) for i in gen_idx], degree=T.degree)
    raise AssertionError(f"Sylow {p}-subgroup construction stalled in {T.group!r}")


# -- predicates and invariants -------------------------------------------------


def is_simple(T: ElementTable) -> bool:
    """Simplicity via the normal lattice; the trivial group is not simple."""
    if T.size == 1:
        return False
    return len(normal_subgroups(T)) == 2


def is_elementary_abelian(G: PermGroup) -> bool:
    """Abelian of prime exponent (trivial group excluded)."""
    if not is_abelian(G):
        return False
    p = None
    for g in G.generators:
        o = g.order()
        if o == 1:
            continue
        if not is_prime(o):
            return False
        if p is None:
            p = o
        elif p != o:
            return False
    return p is not None


def prime_set(G: PermGroup) -> set[int]:
    """Primes dividing |G| (empty for the trivial group)."""
    return set(prime_factors(G.order()))


def spectrum(T: ElementTable) -> tuple[int, ...]:
    """Sorted set of element orders."""
    return tuple(sorted(set(int(o) for o in T.orders)))


# -- generating sequences -------------------------------------------------------


def generating_sequence(T: ElementTable) -> tuple[int, ...]:
    """Greedy short generating sequence (table indices).

    Elements are scanned by decreasing order, ties by index, adjoining any not
    already generated, until the BSGS order matches the group order.
    """
    target = T.size
    chain = BSGS(T.degree)
    seq = []
    cand = np.lexsort((np.arange(T.size), -T.orders))
    for i in cand:
        if chain.order() == target:
            break
        if chain._extend_arr(T.matrix[int(i)]):
            seq.append(int(i))
    if chain.order() != target:
        raise AssertionError("greedy sequence failed to generate the group")
    return tuple(seq)


# -- isomorphism ---------------------------------------------------------------


@dataclass(frozen=True)
class HomWitness:
    """Generator pairing certifying a homomorphism via the graph-order test."""

    source_generators: tuple[Permutation, ...]
    image_elements: tuple[Permutation, ...]
    graph_order: int


def _bsgs_order_arrays(degree: int, arrays) -> int:
    chain = BSGS(degree)
    for a in arrays:
        chain._extend_arr(np.ascontiguousarray(a, dtype=_DTYPE))
    return chain.order()


def _graph_order(nG: int, src_arrays, nH: int, img_arrays) -> int:
    pairs = [np.concatenate([s, i + nG]) for s, i in zip(src_arrays, img_arrays)]
    return _bsgs_order_arrays(nG + nH, pairs)


def _word_checks(depth: int) -> list[tuple[tuple[int, bool], ...]]:
    """Short test words involving position `depth`; (pos, invert) factors."""
    checks = []
    for a in range(depth):
        checks.append(((a, False), (depth, False)))
        checks.append(((a, True), (depth, False)))
    if depth >= 2:
        checks.append(((depth - 2, False), (depth - 1, False), (depth, False)))
    return checks


def _eval_word(T: ElementTable, assignment, word) -> int:
    idx = T.identity_index
    inv = T.inverse_indices
    for pos, invert in word:
        j = assignment[pos]
        if invert:
            j = int(inv[j])
        idx = T.product_index(idx, j)
    return idx


def find_isomorphism(G: PermGroup, H: PermGroup, cap: int | None = None) -> HomWitness | None:
    """Search for an isomorphism G -> H; None if the groups are not isomorphic.

    Candidate images are matched by joint class labels; the first generator's
    image only ranges over class representatives (inner twisting), the rest
    over whole label buckets.  Each candidate tuple is validated by the
    graph-order criterion.
    """
    cap = resolve_element_cap(cap)
    oG, oH = G.order(), H.order()
    if oG > cap:
        raise CapacityError(oG, cap)
    if oH > cap:
        raise CapacityError(oH, cap)
    if oG != oH:
        return None
    if is_abelian(G) != is_abelian(H):
        return None
    TG = enumerate_elements(G, cap=cap)
    TH = enumerate_elements(H, cap=cap)
    if sorted(TG.orders.tolist()) != sorted(TH.orders.tolist()):
        return None
    cg, ch = conjugacy_classes(TG), conjugacy_classes(TH)
    if sorted((c.element_order, c.size) for c in cg) != sorted((c.element_order, c.size) for c in ch):
        return None
    lg, lh = class_labels([TG, TH])
    if sorted(lg.tolist()) != sorted(lh.tolist()):
        return None

    seq = generating_sequence(TG)
    if not seq:
        return HomWitness((G.identity(),), (H.identity(),), 1)
    cls_of_g = class_of_index(TG)
    cls_of_h = class_of_index(TH)
    elem_label_h = lh[cls_of_h]

    pools = []
    for pos, s in enumerate(seq):
        lbl = int(lg[cls_of_g[s]])
        if pos == 0:
            pool = [ch[c].representative_index for c in range(len(ch)) if lh[c] == lbl]
        else:
            pool = [int(i) for i in np.nonzero(elem_label_h == lbl)[0]]
        if not pool:
            return None
        pools.append(pool)

    checks = [_word_checks(d) for d in range(len(seq))]
    src_labels = [
        [int(lg[cls_of_g[_eval_word(TG, seq, w)]]) for w in checks[d]] for d in range(len(seq))
    ]

    assignment = [0] * len(seq)
    used = set()

    def place(depth: int) -> HomWitness | None:
        for cand in pools[depth]:
            if cand in used:
                continue
            assignment[depth] = cand
            ok = True
            for w, lbl in zip(checks[depth], src_labels[depth]):
                if int(elem_label_h[_eval_word(TH, assignment, w)]) != lbl:
                    ok = False
                    break
            if not ok:
                continue
            if depth + 1 == len(seq):
                img_arrays = [TH.matrix[i] for i in assignment]
                if _bsgs_order_arrays(TH.degree, img_arrays) != oH:
                    continue
                src_arrays = [TG.matrix[i] for i in seq]
                graph = _graph_order(TG.degree, src_arrays, TH.degree, img_arrays)
                if graph == oG:
                    return HomWitness(
                        tuple(TG.element(i) for i in seq),
                        tuple(TH.element(i) for i in assignment),
                        graph,
                    )
            else:
                used.add(cand)
                found = place(depth + 1)
                used.discard(cand)
                if found is not None:
                    return found
        return None

    return place(0)


def isomorphic(G: PermGroup, H: PermGroup, cap: int | None = None) -> bool:
    return find_isomorphism(G, H, cap=cap) is not None
