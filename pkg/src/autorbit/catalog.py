"""Deterministic constructors for every named group of the corpus.

Catalog grammar: ``A<n>``, ``S<n>``, ``C<n>``, ``E<p>^<k>``, ``PSL2(<q>)`` /
``PGL2(<q>)`` / ``PGammaL2(<q>)`` for q in {4,5,7,8,9}, ``PSL3(4)``, ``M10``,
``ASL24A``, ``ASL24B``, ``DP(<name>,<name>)`` and ``POW(<name>,<k>)``.

Every constructor pins its point labelling and asserts the closed-form order
against the BSGS order, so builds are reproducible across runs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import UnknownGroupNameError
from .gf import field as gf_field
from .perm import PermGroup, Permutation, enumerate_elements, perm_from_cycles
from .structure import direct_product, direct_power, is_prime, prime_factors

_PSL2_SIZES = (4, 5, 7, 8, 9)


@dataclass(frozen=True)
class GroupDescriptor:
    """A constructed or ingested group with provenance notes."""

    name: str
    degree: int
    order: int
    generators: tuple[Permutation, ...]
    provenance: str = ""
    claims: tuple[tuple[str, object], ...] = field(default=())

    def to_group(self) -> PermGroup:
        return PermGroup(self.generators, name=self.name)


def _descriptor(name, gens, order_formula, provenance) -> GroupDescriptor:
    G = PermGroup(gens, name=name)
    got = G.order()
    if got != order_formula:
        raise AssertionError(f"{name}: constructed order {got} != formula {order_formula}")
    return GroupDescriptor(name, G.degree, got, tuple(gens), provenance)


# -- elementary families ------------------------------------------------------


def _cyclic(n: int) -> GroupDescriptor:
    if n < 1:
        raise UnknownGroupNameError("C<n> needs n >= 1")
    if n == 1:
        gens = [Permutation.identity(1)]
    else:
        gens = [perm_from_cycles([tuple(range(1, n + 1))], n)]
    return _descriptor(f"C{n}", gens, n, f"cyclic group as one {n}-cycle")


def _symmetric(n: int) -> GroupDescriptor:
    if n < 1:
        raise UnknownGroupNameError("S<n> needs n >= 1")
    if n == 1:
        gens = [Permutation.identity(1)]
    elif n == 2:
        gens = [perm_from_cycles([(1, 2)], 2)]
    else:
        gens = [perm_from_cycles([(1, 2)], n), perm_from_cycles([tuple(range(1, n + 1))], n)]
    return _descriptor(f"S{n}", gens, math.factorial(n), "symmetric group, natural action")


def _alternating(n: int) -> GroupDescriptor:
    if n < 1:
        raise UnknownGroupNameError("A<n> needs n >= 1")
    if n <= 2:
        gens = [Permutation.identity(max(n, 1))]
        order = 1
    elif n == 3:
        gens = [perm_from_cycles([(1, 2, 3)], 3)]
        order = 3
    else:
        order = math.factorial(n) // 2
        if n % 2 == 1:
            long = tuple(range(1, n + 1))
        else:
            long = tuple(range(2, n + 1))
        gens = [perm_from_cycles([(1, 2, 3)], n), perm_from_cycles([long], n)]
    return _descriptor(f"A{n}", gens, order, "alternating group, natural action")


def _elem_abelian(p: int, k: int) -> GroupDescriptor:
    if not is_prime(p):
        raise UnknownGroupNameError(f"E{p}^{k}: {p} is not prime")
    if k < 1:
        raise UnknownGroupNameError("E<p>^<k> needs k >= 1")
    deg = p * k
    gens = []
    for i in range(k):
        start = i * p
        gens.append(perm_from_cycles([tuple(range(start + 1, start + p + 1))], deg))
    return _descriptor(f"E{p}^{k}", gens, p**k, f"direct sum of {k} disjoint {p}-cycles")


# -- projective families ------------------------------------------------------

_INFINITY = "inf"


def _projective_line(q: int):
    """Point labels on PG(1,q): infinity first, then powers of the generator, then 0."""
    F = gf_field(q)
    values = [_INFINITY]
    x = 1
    for _ in range(q - 1):
        values.append(x)
        x = int(F.mul[x, F.generator])
    values.append(0)
    pos = {v: i for i, v in enumerate(values)}
    return F, values, pos


def _line_perm(values, pos, fn) -> Permutation:
    return Permutation([pos[fn(v)] + 1 for v in values])


def _psl2_maps(q: int):
    F, values, pos = _projective_line(q)
    g2 = int(F.mul[F.generator, F.generator])

    def trans(v):
        return v if v == _INFINITY else int(F.add[v, 1])

    def mult(v):
        return v if v == _INFINITY else int(F.mul[g2, v])

    def winv(v):
        if v == _INFINITY:
            return 0
        if v == 0:
            return _INFINITY
        return int(F.neg[F.inv[v]])

    def diag(v):
        return v if v == _INFINITY else int(F.mul[F.generator, v])

    def frob(v):
        return v if v == _INFINITY else F.pow(v, F.p)

    mk = lambda fn: _line_perm(values, pos, fn)
    return F, mk(trans), mk(mult), mk(winv), mk(diag), mk(frob)


def frobenius_point_permutation(q: int) -> Permutation:
    """x -> x^p on the labelled projective line (fixes infinity and 0)."""
    return _psl2_maps(q)[5]


def _psl2(q: int) -> GroupDescriptor:
    if q not in _PSL2_SIZES:
        raise UnknownGroupNameError(f"PSL2({q}): supported q are {_PSL2_SIZES}")
    _, t, m, w, _, _ = _psl2_maps(q)
    order = q * (q * q - 1) // math.gcd(2, q - 1)
    return _descriptor(
        f"PSL2({q})", [t, m, w], order,
        f"projective line over GF({q}); maps x+1, (gen^2)x, -1/x",
    )


def _pgl2(q: int) -> GroupDescriptor:
    if q not in _PSL2_SIZES:
        raise UnknownGroupNameError(f"PGL2({q}): supported q are {_PSL2_SIZES}")
    _, t, m, w, d, _ = _psl2_maps(q)
    return _descriptor(
        f"PGL2({q})", [t, m, w, d], q * (q * q - 1),
        f"projective line over GF({q}); PSL2 maps plus x -> (gen)x",
    )


def _pgammal2(q: int) -> GroupDescriptor:
    if q not in _PSL2_SIZES:
        raise UnknownGroupNameError(f"PGammaL2({q}): supported q are {_PSL2_SIZES}")
    F, t, m, w, d, f = _psl2_maps(q)
    return _descriptor(
        f"PGammaL2({q})", [t, m, w, d, f], q * (q * q - 1) * F.k,
        f"PGL2({q}) extended by the Frobenius point permutation",
    )


def _m10() -> GroupDescriptor:
    """M10, extracted from the three index-2 overgroups of PSL2(9) in PGammaL2(9).

    The three overgroups are told apart by their spectra: M10 is the one with
    elements of order 8 but none of order 10 (PGL2(9) has both 8 and 10, the
    S6-isomorphic one has 6 instead of 8).
    """
    psl = _psl2(9).to_group()
    pgl_gamma = _pgammal2(9).to_group()
    T = enumerate_elements(pgl_gamma)
    from .structure import member_indices_of

    psl_members = set(member_indices_of(T, PermGroup(psl.generators, degree=10)).tolist())
    orders = T.orders
    assigned = set(psl_members)
    for i in range(T.size):
        if i in assigned:
            continue
        coset = set(int(v) for v in T.products_with(sorted(psl_members), i))
        assigned |= coset
        spec = {int(orders[j]) for j in psl_members | coset}
        if 8 in spec and 10 not in spec:
            gens = list(psl.generators) + [T.element(i)]
            return _descriptor("M10", gens, 720, "index-2 overgroup of PSL2(9) in PGammaL2(9) with spectrum {1,2,3,4,5,8}")
    raise AssertionError("M10 not found among the overgroups of PSL2(9)")


def _psl3_4() -> GroupDescriptor:
    """PSL(3,4) on the 21 points of PG(2,4), generated by transvection images."""
    F = gf_field(4)
    points = []
    for a in range(4):
        for b in range(4):
            for c in range(4):
                v = (a, b, c)
                if v == (0, 0, 0):
                    continue
                first = a if a else (b if b else c)
                if first == 1:
                    points.append(v)
    pos = {v: i for i, v in enumerate(points)}
    if len(points) != 21:
        raise AssertionError("PG(2,4) must have 21 points")

    def normalize(v):
        s = next(x for x in v if x)
        w = int(F.inv[s])
        return tuple(int(F.mul[w, x]) for x in v)

    def apply(mat, v):
        out = []
        for c in range(3):
            acc = 0
            for r in range(3):
                acc = int(F.add[acc, F.mul[v[r], mat[r][c]]])
            out.append(acc)
        return tuple(out)

    gens = []
    gamma = F.generator
    for (i, j) in ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)):
        for lam in (1, gamma):
            mat = [[1 if r == c else 0 for c in range(3)] for r in range(3)]
            mat[i][j] = lam
            images = [pos[normalize(apply(mat, v))] + 1 for v in points]
            gens.append(Permutation(images))
    return _descriptor("PSL3(4)", gens, 20160, "PG(2,4) with all 12 elementary transvections, parameters 1 and gen")


def _asl24a() -> GroupDescriptor:
    """2^4 : A5 with A5 acting as SL(2,4) on the 16 vectors of GF(4)^2."""
    F = gf_field(4)
    vectors = [(a, b) for a in range(4) for b in range(4)]
    pos = {v: i for i, v in enumerate(vectors)}
    gamma = F.generator
    gens = []
    for e in ((1, 0), (gamma, 0), (0, 1), (0, gamma)):
        images = [pos[(int(F.add[v[0], e[0]]), int(F.add[v[1], e[1]]))] + 1 for v in vectors]
        gens.append(Permutation(images))
    for lam in (1, gamma):
        upper = [pos[(v[0], int(F.add[F.mul[v[0], lam], v[1]]))] + 1 for v in vectors]
        lower = [pos[(int(F.add[v[0], F.mul[v[1], lam]]), v[1])] + 1 for v in vectors]
        gens.append(Permutation(upper))
        gens.append(Permutation(lower))
    return _descriptor("ASL24A", gens, 960, "affine GF(4)^2: basis translations and SL(2,4) transvections")


def _asl24b() -> GroupDescriptor:
    """2^4 : A5 with A5 <= S5 permuting coordinates of the zero-sum vectors of GF(2)^5."""
    vectors = [v for v in _bit_tuples(5) if sum(v) % 2 == 0]
    pos = {v: i for i, v in enumerate(vectors)}
    gens = []
    for e in ((1, 1, 0, 0, 0), (0, 1, 1, 0, 0), (0, 0, 1, 1, 0), (0, 0, 0, 1, 1)):
        images = [pos[tuple((x + y) % 2 for x, y in zip(v, e))] + 1 for v in vectors]
        gens.append(Permutation(images))
    for cyc in ((1, 2, 3, 4, 5), (1, 2, 3)):
        sigma = perm_from_cycles([cyc], 5)
        inv = sigma.inverse()
        images = [pos[tuple(v[inv(j) - 1] for j in range(1, 6))] + 1 for v in vectors]
        gens.append(Permutation(images))
    return _descriptor("ASL24B", gens, 960, "zero-sum vectors of GF(2)^5: basis translations and A5 coordinate maps")


def _bit_tuples(n):
    out = []
    for x in range(2**n):
        out.append(tuple((x >> (n - 1 - i)) & 1 for i in range(n)))
    return sorted(out)


# -- grammar -------------------------------------------------------------------

_BUILD_CACHE: dict[str, GroupDescriptor] = {}


def _split_args(body: str) -> list[str]:
    parts = []
    depth = 0
    cur = []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def descriptor(name: str) -> GroupDescriptor:
    """Resolve a catalog grammar string to a constructed descriptor."""
    name = name.strip()
    if name in _BUILD_CACHE:
        return _BUILD_CACHE[name]

    m = re.fullmatch(r"A(\d+)", name)
    if m:
        out = _alternating(int(m.group(1)))
    elif (m := re.fullmatch(r"S(\d+)", name)):
        out = _symmetric(int(m.group(1)))
    elif (m := re.fullmatch(r"C(\d+)", name)):
        out = _cyclic(int(m.group(1)))
    elif (m := re.fullmatch(r"E(\d+)\^(\d+)", name)):
        out = _elem_abelian(int(m.group(1)), int(m.group(2)))
    elif (m := re.fullmatch(r"PSL2\((\d+)\)", name)):
        out = _psl2(int(m.group(1)))
    elif (m := re.fullmatch(r"PGL2\((\d+)\)", name)):
        out = _pgl2(int(m.group(1)))
    elif (m := re.fullmatch(r"PGammaL2\((\d+)\)", name)):
        out = _pgammal2(int(m.group(1)))
    elif name == "PSL3(4)":
        out = _psl3_4()
    elif name == "M10":
        out = _m10()
    elif name == "ASL24A":
        out = _asl24a()
    elif name == "ASL24B":
        out = _asl24b()
    elif (m := re.fullmatch(r"DP\((.+)\)", name)):
        args = _split_args(m.group(1))
        if len(args) != 2:
            raise UnknownGroupNameError(f"DP needs two arguments: {name!r}")
        G, H = descriptor(args[0]).to_group(), descriptor(args[1]).to_group()
        P = direct_product(G, H, name=name)
        out = GroupDescriptor(name, P.degree, P.order(), P.generators, f"direct product of {args[0]} and {args[1]}")
    elif (m := re.fullmatch(r"POW\((.+)\)", name)):
        args = _split_args(m.group(1))
        if len(args) != 2 or not args[1].isdigit():
            raise UnknownGroupNameError(f"POW needs a name and an exponent: {name!r}")
        H = descriptor(args[0]).to_group()
        k = int(args[1])
        P = direct_power(H, k, name=name)
        out = GroupDescriptor(name, P.degree, P.order(), P.generators, f"direct power {args[0]}^{k}")
    else:
        raise UnknownGroupNameError(f"unknown catalog name {name!r}")

    _BUILD_CACHE[name] = out
    return out


_GROUP_CACHE: dict[str, PermGroup] = {}


def build(name: str) -> PermGroup:
    """Build a catalog group by its grammar name.

    Returns one shared PermGroup object per name, so element tables and
    downstream caches are reused across callers.
    """
    name = name.strip()
    if name not in _GROUP_CACHE:
        _GROUP_CACHE[name] = descriptor(name).to_group()
    return _GROUP_CACHE[name]


# -- extension families ---------------------------------------------------------

# all M with |M| = p|N| and N normal, per the structural classification:
# the direct product N x C_p always, plus the index-p overgroups inside Aut(N)
_EXTENSION_OVERGROUPS = {
    "A5": {2: ("S5",)},
    "A6": {2: ("S6", "PGL2(9)", "M10")},
    "PSL2(7)": {2: ("PGL2(7)",)},
    "PSL2(8)": {3: ("PGammaL2(8)",)},
}


def extension_family(N_name: str) -> list[PermGroup]:
    """Every group M with |M| = p|N|, N normal, for each prime p dividing |N|."""
    N_name = N_name.strip()
    if N_name not in _EXTENSION_OVERGROUPS:
        raise UnknownGroupNameError(
            f"extension families exist for A5, A6, PSL2(7), PSL2(8); got {N_name!r}"
        )
    N = build(N_name)
    base = N.order()
    members = []
    for p in prime_factors(base):
        members.append(build(f"DP({N_name},C{p})"))
        for over in _EXTENSION_OVERGROUPS[N_name].get(p, ()):
            members.append(build(over))
    for M in members:
        if M.order() % base != 0 or not is_prime(M.order() // base):
            raise AssertionError(f"extension member {M.name} has order {M.order()}, not p*{base}")
    return members
