"""Independent brute-force oracles used by the test suite.

Everything here works on plain 1-based image tuples with its own composition
and closure code, so the oracles share no machinery with the package's BSGS,
fingerprint pruning or class-level orbit code.
"""

from itertools import permutations, product


def o_compose(p, q):
    """Left-to-right product on image tuples: i -> q(p(i))."""
    return tuple(q[i - 1] for i in p)


def o_inverse(p):
    inv = [0] * len(p)
    for i, img in enumerate(p):
        inv[img - 1] = i + 1
    return tuple(inv)


def o_identity(n):
    return tuple(range(1, n + 1))


def o_closure(gen_tuples, cap=None):
    """Breadth-first closure; returns the sorted element list."""
    gens = [tuple(g) for g in gen_tuples]
    n = len(gens[0])
    seen = {o_identity(n)}
    frontier = [o_identity(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = o_compose(x, g)
                if y not in seen:
                    if cap is not None and len(seen) >= cap:
                        raise OverflowError("closure exceeded cap")
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def o_mult(elements):
    """Product table as a dict (i, j) -> k over indices into the element list."""
    index = {e: i for i, e in enumerate(elements)}
    table = {}
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[o_compose(a, b)]
    return table


class OUnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def cells(self):
        groups = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(tuple(sorted(v)) for v in groups.values())


def o_word_structure(elements, gen_tuples):
    """(parent, genix) BFS words of each element over the given generators."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements[0])
    parent = {index[o_identity(n)]: None}
    order = [index[o_identity(n)]]
    frontier = [o_identity(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gen_tuples):
                y = o_compose(x, g)
                j = index[y]
                if j not in parent:
                    parent[j] = (index[x], gi)
                    order.append(j)
                    nxt.append(y)
        frontier = nxt
    return parent, order


def o_automorphisms_genimage(gen_tuples):
    """All automorphisms by unpruned generator-image search.

    Every |G|^k image tuple is tried; each candidate map is extended over the
    Cayley graph (BFS words in the generators) and kept iff it is a
    product-preserving bijection.  Returns index maps as tuples.
    """
    gens = [tuple(g) for g in gen_tuples]
    elements = o_closure(gens)
    index = {e: i for i, e in enumerate(elements)}
    m = len(elements)
    mult = o_mult(elements)
    parent, bfs = o_word_structure(elements, gens)
    ident = index[o_identity(len(gens[0]))]
    pair_order = [(i, j) for i in range(m) for j in range(m)]

    found = []
    for images in product(range(m), repeat=len(gens)):
        amap = [None] * m
        amap[ident] = ident
        for j in bfs:
            if parent[j] is None:
                continue
            src, gi = parent[j]
            amap[j] = mult[amap[src], images[gi]]
        if len(set(amap)) != m:
            continue
        ok = True
        for i, j in pair_order:
            if amap[mult[i, j]] != mult[amap[i], amap[j]]:
                ok = False
                break
        if ok:
            found.append(tuple(amap))
    return elements, sorted(found)


def o_automorphisms_bijections(gen_tuples):
    """All automorphisms by filtering every bijection (use only for |G| <= 8)."""
    elements = o_closure(gen_tuples)
    m = len(elements)
    if m > 8:
        raise OverflowError("bijection oracle is limited to order 8")
    mult = o_mult(elements)
    found = []
    for amap in permutations(range(m)):
        ok = True
        for i in range(m):
            for j in range(m):
                if amap[mult[i, j]] != mult[amap[i], amap[j]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(tuple(amap))
    return elements, sorted(found)


def o_partition_from_maps(m, maps):
    """Orbit cells of {0..m-1} under the maps, via union-find."""
    uf = OUnionFind(m)
    for amap in maps:
        for i in range(m):
            uf.union(i, amap[i])
    return uf.cells()


def o_conjugacy_classes(elements):
    """Classes by conjugating with every element; returns sorted cells of indices."""
    index = {e: i for i, e in enumerate(elements)}
    cells = []
    seen = set()
    for i, x in enumerate(elements):
        if i in seen:
            continue
        cell = set()
        for g in elements:
            y = o_compose(o_compose(o_inverse(g), x), g)
            cell.add(index[y])
        seen |= cell
        cells.append(tuple(sorted(cell)))
    return sorted(cells)


def o_all_subgroups(elements):
    """Every subgroup, by closing each current subgroup under each element."""
    index = {e: i for i, e in enumerate(elements)}
    mult = o_mult(elements)
    ident = index[o_identity(len(elements[0]))]

    def close(seed):
        seen = set(seed) | {ident}
        frontier = list(seen)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(seen):
                    for c in (mult[a, b], mult[b, a]):
                        if c not in seen:
                            seen.add(c)
                            nxt.append(c)
            frontier = nxt
        return frozenset(seen)

    subgroups = {frozenset([ident])}
    frontier = [frozenset([ident])]
    while frontier:
        nxt = []
        for H in frontier:
            for x in range(len(elements)):
                if x in H:
                    continue
                K = close(H | {x})
                if K not in subgroups:
                    subgroups.add(K)
                    nxt.append(K)
        frontier = nxt
    return subgroups


def o_normal_subgroups(elements):
    index = {e: i for i, e in enumerate(elements)}
    out = []
    for H in o_all_subgroups(elements):
        members = {elements[i] for i in H}
        normal = True
        for g in elements:
            ginv = o_inverse(g)
            if any(o_compose(o_compose(ginv, h), g) not in members for h in members):
                normal = False
                break
        if normal:
            out.append(frozenset(H))
    return out


def o_derived_subgroup(elements):
    """Closure of all commutators, as a frozenset of indices."""
    index = {e: i for i, e in enumerate(elements)}
    mult = o_mult(elements)
    comms = set()
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            c = o_compose(o_compose(o_compose(o_inverse(g), o_inverse(h)), g), h)
            comms.add(index[c])
    ident = index[o_identity(len(elements[0]))]
    seen = set(comms) | {ident}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(seen):
                c = mult[a, b]
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return frozenset(seen)


def o_coset_action(elements, sub_members):
    """Permutations induced on right cosets by each element, plus coset count."""
    cosets = []
    assigned = {}
    for i, x in enumerate(elements):
        if i in assigned:
            continue
        coset = sorted({elements.index(o_compose(n, x)) for n in sub_members})
        cid = len(cosets)
        for j in coset:
            assigned[j] = cid
        cosets.append(coset)
    action = []
    for g in elements:
        images = [assigned[elements.index(o_compose(elements[c[0]], g))] + 1 for c in cosets]
        action.append(tuple(images))
    return len(cosets), action
