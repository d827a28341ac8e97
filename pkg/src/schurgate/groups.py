"""The metacyclic groups G = C_q x| C_{p^n} = <a, b | a^q = b^{p^n} = 1, bab^-1 = a^j>.

Elements are residue pairs (x, y) standing for a^x b^y, with the product

    (x1, y1) * (x2, y2) = (x1 + j^y1 * x2 mod q, y1 + y2 mod p^n).

Everything downstream (conjugacy classes, the distinguished subgroup X, the
tower subgroups) is computed from closed forms in (q, p, n, r); brute-force
enumerations exist as test oracles, gated to order <= 10^4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, NamedTuple

__all__ = [
    "MetacyclicParams",
    "GroupElement",
    "ConjClass",
    "Subgroup",
    "make_group",
    "conjugacy_classes",
    "subgroup_X",
    "tower_subgroups",
    "iter_valid_groups",
]

BRUTE_FORCE_LIMIT = 10 ** 4


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def multiplicative_order(a: int, m: int) -> int:
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    a %= m
    k, x = 1, a
    while x != 1:
        x = x * a % m
        k += 1
    return k


class GroupElement(NamedTuple):
    x: int
    y: int


class ConjClass(NamedTuple):
    rep: GroupElement
    size: int
    element_order: int


@dataclass(frozen=True)
class MetacyclicParams:
    q: int
    p: int
    n: int
    j: int
    r: int
    canonical_j: int

    @property
    def order(self) -> int:
        return self.q * self.p ** self.n

    @property
    def pn(self) -> int:
        return self.p ** self.n

    @property
    def pr(self) -> int:
        return self.p ** self.r

    def identity(self) -> GroupElement:
        return GroupElement(0, 0)

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement(
            (g.x + pow(self.j, g.y, self.q) * h.x) % self.q,
            (g.y + h.y) % self.pn,
        )

    def inv(self, g: GroupElement) -> GroupElement:
        jy = pow(self.j, -g.y % self.pn, self.q)
        return GroupElement(-jy * g.x % self.q, -g.y % self.pn)

    def power(self, g: GroupElement, k: int) -> GroupElement:
        k %= self.order
        # (x, y)^k = (S_k(y) x, k y) with S_k(y) the twisted geometric sum
        return GroupElement(self._twisted_sum(g.y, k) * g.x % self.q, k * g.y % self.pn)

    def _twisted_sum(self, y: int, k: int) -> int:
        jy = pow(self.j, y, self.q)
        if jy == 1:
            return k % self.q
        return (pow(jy, k, self.q) - 1) * pow(jy - 1, -1, self.q) % self.q

    def element_order(self, g: GroupElement) -> int:
        ord_y = self.pn // gcd(self.pn, g.y)
        if self._twisted_sum(g.y, ord_y) * g.x % self.q == 0:
            return ord_y
        return self.q * ord_y

    def conjugate(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """h g h^-1."""
        return self.mul(self.mul(h, g), self.inv(h))

    def elements(self) -> Iterator[GroupElement]:
        for y in range(self.pn):
            for x in range(self.q):
                yield GroupElement(x, y)

    # -- conjugacy structure -------------------------------------------------

    def orbit_min(self, x: int) -> int:
        """Smallest member of the orbit H*x of x under H = <j> of order p^r."""
        if x % self.q == 0:
            return 0
        best = x % self.q
        t = self.canonical_j * x % self.q
        while t != x % self.q:
            if t < best:
                best = t
            t = self.canonical_j * t % self.q
        return best

    def class_of(self, g: GroupElement) -> GroupElement:
        """Representative (lexicographically minimal element) of the class of g."""
        if g.y % self.pr != 0:
            return GroupElement(0, g.y)
        return GroupElement(self.orbit_min(g.x), g.y)

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "n": self.n, "j": self.j, "r": self.r}

    def __str__(self):
        return f"C{self.q}:C{self.pn}(j={self.j})"


def make_group(q: int, p: int, n: int, j: int | None = None) -> MetacyclicParams:
    """Validate parameters and derive r = log_p(order of j mod q).

    When j is omitted the canonical choice with the largest possible action
    is used: the smallest residue of order p^{min(n, v_p(q-1))}.  Even primes
    are rejected: the engine covers only odd p and q, so classical even-order
    phenomena (e.g. the quaternion group, whose 2-dimensional character has
    Schur index 2) are out of range by design.
    """
    if not is_prime(q) or q % 2 == 0:
        raise ValueError(f"q must be an odd prime, got {q}")
    if not is_prime(p) or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    if p == q:
        raise ValueError("p and q must be distinct")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if j is None:
        v = 0
        m = q - 1
        while m % p == 0:
            m //= p
            v += 1
        j = _min_residue_of_order(q, p, min(n, v)) if v else None
        if j is None:
            raise ValueError(f"no element of order {p} mod {q}: need p | q-1")
    j %= q
    if j == 0:
        raise ValueError("j must be a unit mod q")
    if j == 1:
        raise ValueError("abelian: j = 1 gives the direct product, not handled here")
    t = multiplicative_order(j, q)
    r = 0
    tt = t
    while tt % p == 0:
        tt //= p
        r += 1
    if tt != 1:
        raise ValueError(
            f"not metacyclic of required type: j = {j} has order {t} mod {q}, "
            f"which is not a power of p = {p}"
        )
    if r > n:
        raise ValueError(
            f"not metacyclic of required type: order of j is p^{r} but n = {n}"
        )
    cj = _min_residue_of_order(q, p, r)
    return MetacyclicParams(q=q, p=p, n=n, j=j, r=r, canonical_j=cj)


def _min_residue_of_order(q: int, p: int, r: int) -> int | None:
    """Smallest residue of multiplicative order p^r mod q, or None."""
    v = 0
    m = q - 1
    while m % p == 0:
        m //= p
        v += 1
    if r > v:
        return None
    if r == 0:
        return 1
    # generator of the Sylow p-subgroup of (Z/q)^x
    gen = None
    for x in range(2, q):
        h = pow(x, (q - 1) // p ** v, q)
        if pow(h, p ** (v - 1), q) != 1:
            gen = h
            break
    if gen is None:
        return None
    step = pow(gen, p ** (v - r), q)
    best = None
    t = step
    for k in range(1, p ** r):
        if k % p != 0 and (best is None or t < best):
            best = t
        t = t * step % q
    return best


def conjugacy_classes(G: MetacyclicParams) -> list[ConjClass]:
    """All conjugacy classes, ordered by (y, x) of the minimal representative.

    The class of (x, y) is {(j^v x + u(1 - j^y), y)}: all of (Z/q, y) when
    p^r does not divide y, and the H-orbit {(Hx, y)} otherwise.
    """
    out = []
    pr, pn, q = G.pr, G.pn, G.q
    orbit_reps = _orbit_reps(G)
    for y in range(pn):
        if y % pr == 0:
            e = GroupElement(0, y)
            out.append(ConjClass(e, 1, G.element_order(e)))
            for x0 in orbit_reps:
                e = GroupElement(x0, y)
                out.append(ConjClass(e, pr, G.element_order(e)))
        else:
            e = GroupElement(0, y)
            out.append(ConjClass(e, q, G.element_order(e)))
    total = sum(c.size for c in out)
    if total != G.order:
        raise RuntimeError(f"class sizes sum to {total}, expected {G.order}")
    return out


def _orbit_reps(G: MetacyclicParams) -> list[int]:
    seen = [False] * G.q
    reps = []
    for x in range(1, G.q):
        if seen[x]:
            continue
        reps.append(x)
        t = x
        while True:
            seen[t] = True
            t = G.canonical_j * t % G.q
            if t == x:
                break
    return reps


def brute_force_classes(G: MetacyclicParams) -> list[ConjClass]:
    """Independent class computation by orbit closure; test oracle only."""
    if G.order > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force gated to order <= {BRUTE_FORCE_LIMIT}")
    gens = [GroupElement(1, 0), GroupElement(0, 1)]
    seen: set[GroupElement] = set()
    classes = []
    for g in G.elements():
        if g in seen:
            continue
        orbit = {g}
        frontier = [g]
        while frontier:
            h = frontier.pop()
            for s in gens:
                c = G.conjugate(h, s)
                if c not in orbit:
                    orbit.add(c)
                    frontier.append(c)
        seen |= orbit
        rep = min(orbit)
        classes.append(ConjClass(GroupElement(*rep), len(orbit), G.element_order(g)))
    classes.sort(key=lambda c: (c.rep.y, c.rep.x))
    return classes


@dataclass(frozen=True)
class Subgroup:
    label: str
    generators: tuple[GroupElement, ...]
    elements: frozenset = field(repr=False)
    kind: str = ""
    level: int = 0

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_in(self, G: MetacyclicParams) -> int:
        return G.order // self.order

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "generators": [list(g) for g in self.generators],
            "order": self.order,
        }


def subgroup_X(G: MetacyclicParams) -> Subgroup:
    """X = <a, b^{p^r}>, cyclic of order q * p^{n-r}, normal and self-centralizing."""
    pr = G.pr
    els = frozenset(
        GroupElement(x, pr * t) for x in range(G.q) for t in range(G.pn // pr)
    )
    return Subgroup(
        label="X",
        generators=(GroupElement(1, 0), GroupElement(0, pr % G.pn)),
        elements=els,
        kind="X",
        level=G.r,
    )


def tower_subgroups(G: MetacyclicParams) -> list[Subgroup]:
    """Subgroups fixing the tower fields: K_k = <a, b^{p^k}> and F_k = <b^{p^k}>.

    K_k has index p^k (fixed field: the degree-p^k cyclotomic layer) and
    F_k has index q*p^k (fixed field: the k-th layer over the degree-q field).
    """
    out = []
    for k in range(G.n + 1):
        pk = G.p ** k
        els_K = frozenset(
            GroupElement(x, pk * t % G.pn) for x in range(G.q) for t in range(G.pn // pk)
        )
        out.append(
            Subgroup(
                label=f"K{k}",
                generators=(GroupElement(1, 0), GroupElement(0, pk % G.pn)),
                elements=els_K,
                kind="K",
                level=k,
            )
        )
    for k in range(G.n + 1):
        pk = G.p ** k
        els_F = frozenset(GroupElement(0, pk * t % G.pn) for t in range(G.pn // pk))
        out.append(
            Subgroup(
                label=f"F{k}",
                generators=(GroupElement(0, pk % G.pn),),
                elements=els_F,
                kind="F",
                level=k,
            )
        )
    return out


def centralizer_of(G: MetacyclicParams, g: GroupElement) -> set[GroupElement]:
    """Brute-force centralizer; test oracle only."""
    if G.order > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force gated to order <= {BRUTE_FORCE_LIMIT}")
    return {h for h in G.elements() if G.mul(h, g) == G.mul(g, h)}


def commutator_subgroup(G: MetacyclicParams) -> set[GroupElement]:
    """Brute-force commutator subgroup; test oracle only."""
    if G.order > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force gated to order <= {BRUTE_FORCE_LIMIT}")
    gens = set()
    for g in G.elements():
        for h in (GroupElement(1, 0), GroupElement(0, 1)):
            gens.add(G.mul(G.mul(g, h), G.mul(G.inv(g), G.inv(h))))
    # closure
    closure = {GroupElement(0, 0)}
    frontier = list(gens)
    while frontier:
        g = frontier.pop()
        for h in gens:
            c = G.mul(g, h)
            if c not in closure:
                closure.add(c)
                frontier.append(c)
    return closure


def iter_valid_groups(max_order: int, all_j: bool = True) -> Iterator[MetacyclicParams]:
    """All valid parameter tuples (q, p, n, j) with q * p^n <= max_order.

    Enumerates odd primes q, odd primes p dividing q - 1, all n >= 1 within
    the order bound, and (when all_j) every j whose order is a p-power
    between p and p^n.  Deterministic order: by (q, p, n, j).
    """
    for q in range(3, max_order // 3 + 1, 2):
        if not is_prime(q):
            continue
        for p in prime_divisors_of(q - 1):
            if p == 2 or p == q or q * p > max_order:
                continue
            v = 0
            m = q - 1
            while m % p == 0:
                m //= p
                v += 1
            # elements of p-power order mod q, grouped by order
            sylow_gen = None
            for x in range(2, q):
                h = pow(x, (q - 1) // p ** v, q)
                if pow(h, p ** (v - 1), q) != 1:
                    sylow_gen = h
                    break
            n = 1
            while q * p ** n <= max_order:
                if all_j:
                    js = sorted(
                        pow(sylow_gen, p ** (v - rr) * k, q)
                        for rr in range(1, min(n, v) + 1)
                        for k in range(1, p ** rr)
                        if k % p != 0
                    )
                else:
                    js = [_min_residue_of_order(q, p, 1)]
                for j in js:
                    yield make_group(q, p, n, j)
                n += 1


def prime_divisors_of(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out
