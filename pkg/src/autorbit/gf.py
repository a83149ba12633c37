"""Arithmetic tables for the tiny Galois fields the catalog needs.

Elements of GF(p^k) are encoded as integers 0..q-1 via base-p digits of the
polynomial coefficient vector (constant term first).  The irreducible
polynomials are pinned so that point labellings are reproducible.
"""

from __future__ import annotations

import numpy as np

from .structure import is_prime, prime_factors

# coefficient tuples c0..ck of the pinned monic irreducible polynomial
_IRREDUCIBLE = {
    4: (1, 1, 1),      # x^2 + x + 1 over GF(2)
    8: (1, 1, 0, 1),   # x^3 + x + 1 over GF(2)
    9: (1, 0, 1),      # x^2 + 1 over GF(3)
}

_SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9)


class FieldTable:
    """Add/mul/inv tables for GF(q), q in {2,3,4,5,7,8,9}."""

    def __init__(self, q: int):
        if q not in _SUPPORTED_Q:
            raise ValueError(f"unsupported field size {q} (supported: {_SUPPORTED_Q})")
        ps = prime_factors(q)
        p = ps[0]
        k = 0
        qq = q
        while qq > 1:
            qq //= p
            k += 1
        self.q = q
        self.p = p
        self.k = k

        def digits(e):
            out = []
            for _ in range(k):
                out.append(e % p)
                e //= p
            return out

        def encode(coeffs):
            e = 0
            for c in reversed(coeffs[:k]):
                e = e * p + (c % p)
            return e

        add = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            da = digits(a)
            for b in range(q):
                db = digits(b)
                add[a, b] = encode([(x + y) % p for x, y in zip(da, db)])

        if k == 1:
            mul = np.fromfunction(lambda a, b: (a * b) % p, (q, q), dtype=np.int64)
        else:
            irr = _IRREDUCIBLE[q]
            mul = np.empty((q, q), dtype=np.int64)
            for a in range(q):
                da = digits(a)
                for b in range(q):
                    db = digits(b)
                    prod = [0] * (2 * k - 1)
                    for i, x in enumerate(da):
                        for j, y in enumerate(db):
                            prod[i + j] = (prod[i + j] + x * y) % p
                    # reduce modulo the irreducible polynomial
                    for top in range(len(prod) - 1, k - 1, -1):
                        c = prod[top]
                        if c:
                            prod[top] = 0
                            for i in range(k):
                                prod[top - k + i] = (prod[top - k + i] - c * irr[i]) % p
                    mul[a, b] = encode(prod)

        self.add = add
        self.mul = mul
        self.neg = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            hits = np.nonzero(mul[a] == 1)[0]
            if len(hits) != 1:
                raise AssertionError(f"GF({q}): element {a} has {len(hits)} inverses")
            inv[a] = hits[0]
        self.inv = inv
        self.generator = self._find_generator()
        self._verify()

    def pow(self, a: int, e: int) -> int:
        out = 1
        base = a
        while e:
            if e & 1:
                out = int(self.mul[out, base])
            base = int(self.mul[base, base])
            e >>= 1
        return out

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        x, k = a, 1
        while x != 1:
            x = int(self.mul[x, a])
            k += 1
        return k

    def _find_generator(self) -> int:
        for a in range(1, self.q):
            if self.element_order(a) == self.q - 1:
                return a
        raise AssertionError(f"GF({self.q}): multiplicative group is not cyclic")

    def _verify(self) -> None:
        """Exhaustive field-axiom check; cheap for q <= 9."""
        q, add, mul = self.q, self.add, self.mul
        rng = range(q)
        for a in rng:
            if add[a, 0] != a or mul[a, 1] != a or mul[a, 0] != 0:
                raise AssertionError(f"GF({q}): identity axioms fail at {a}")
            for b in rng:
                if add[a, b] != add[b, a] or mul[a, b] != mul[b, a]:
                    raise AssertionError(f"GF({q}): commutativity fails at ({a},{b})")
                for c in rng:
                    if add[add[a, b], c] != add[a, add[b, c]]:
                        raise AssertionError(f"GF({q}): additive associativity fails")
                    if mul[mul[a, b], c] != mul[a, mul[b, c]]:
                        raise AssertionError(f"GF({q}): multiplicative associativity fails")
                    if mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]:
                        raise AssertionError(f"GF({q}): distributivity fails")
        assert is_prime(self.p)


_FIELDS: dict[int, FieldTable] = {}


def field(q: int) -> FieldTable:
    if q not in _FIELDS:
        _FIELDS[q] = FieldTable(q)
    return _FIELDS[q]
