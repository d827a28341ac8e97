"""Complex character tables of C_q x| C_{p^n} and the identities on them.

The table of G splits into p^n one-dimensional characters factoring through
the C_{p^n} abelianization and, for each level r <= m <= n, the faithful
p^r-dimensional characters of the quotient C_q x| C_{p^m} inflated to G.
A faithful character is the induction of a faithful one-dimensional psi of
the self-centralizing subgroup X = <a, b^{p^r}> = C_q x C_{p^{n-r}}, written
psi(a^x b^{p^r y}) = zeta_q^{u x} * zeta_{p^{n-r}}^{w y}.

Induced values vanish off X and on X equal a Gaussian period times a root of
unity, so the whole table is exact and cheap.  Inner products accumulate an
integer convolution buffer at the common conductor and reduce once, which is
what makes full-table orthogonality sweeps affordable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, NamedTuple

from .cyclotomic import (
    AbelianField,
    CyclotomicNumber,
    InternalCheckError,
    field_of_values,
    _check_conductor,
    _fold,
    _phi,
)
from .groups import (
    BRUTE_FORCE_LIMIT,
    GroupElement,
    MetacyclicParams,
    Subgroup,
    conjugacy_classes,
    subgroup_X,
    tower_subgroups,
)

__all__ = [
    "PsiDescriptor",
    "Character",
    "VirtualCharacter",
    "irreducible_characters",
    "faithful_characters",
    "induce_from_X",
    "inner_product",
    "is_faithful",
    "tensor_decompose",
    "character_field",
    "formula_field",
    "permutation_character",
    "regular_character",
    "trivial_character",
    "quotient_identity_virtual_character",
    "QuotientIdentity",
]


class PsiDescriptor(NamedTuple):
    """One-dimensional character of X: a^x b^{p^r y} -> zeta_q^{ux} zeta_{p^{n-r}}^{wy}."""

    u: int
    w: int


@lru_cache(maxsize=None)
def _zeta(m: int, k: int) -> CyclotomicNumber:
    return CyclotomicNumber.zeta(m, k)


_ZERO = CyclotomicNumber.from_rational(0)
_ONE = CyclotomicNumber.from_rational(1)


class Character:
    """A class function on G with cyclotomic values, indexed by conjugacy class.

    ``provenance`` records how the character arose:
    ("one_dimensional", e), ("lifted_from_quotient", level, u, w),
    ("induced", u, w), ("permutation", label) or ("regular",).
    """

    __slots__ = ("group", "values", "degree", "provenance")

    def __init__(self, group: MetacyclicParams, values, provenance):
        self.group = group
        self.values = tuple(values)
        self.provenance = tuple(provenance)
        v0 = self.values[0]
        if not v0.is_rational() or v0.rational_value().denominator != 1:
            raise ValueError("character degree must be a rational integer")
        self.degree = int(v0.rational_value())

    @property
    def char_id(self) -> str:
        kind = self.provenance[0]
        if kind == "one_dimensional":
            return f"lin[{self.provenance[1]}]"
        if kind == "lifted_from_quotient":
            _, m, u, w = self.provenance
            return f"lift{m}[u={u},w={w}]"
        if kind == "induced":
            _, u, w = self.provenance
            return f"ind[u={u},w={w}]"
        return kind

    def value_at(self, g: GroupElement) -> CyclotomicNumber:
        return self.values[_class_index(self.group)[self.group.class_of(g)]]

    def __eq__(self, other):
        if not isinstance(other, (Character, VirtualCharacter)):
            return NotImplemented
        return self.group == other.group and self.values == other.values

    def __hash__(self):
        return hash((self.group, self.values))

    def __repr__(self):
        return f"<Character {self.char_id} of {self.group}, degree {self.degree}>"

    def to_json(self) -> dict:
        return {
            "id": self.char_id,
            "degree": self.degree,
            "provenance": list(self.provenance),
            "values": [v.to_json() for v in self.values],
        }


class VirtualCharacter:
    """Integer linear combination of characters, stored value-wise."""

    __slots__ = ("group", "values")

    def __init__(self, group: MetacyclicParams, values):
        self.group = group
        self.values = tuple(values)

    @classmethod
    def zero(cls, group: MetacyclicParams) -> "VirtualCharacter":
        k = len(conjugacy_classes(group))
        return cls(group, (_ZERO,) * k)

    @classmethod
    def of(cls, chi: Character) -> "VirtualCharacter":
        return cls(chi.group, chi.values)

    def _check(self, other):
        if self.group != other.group:
            raise ValueError("virtual characters live on different groups")

    def __add__(self, other):
        if isinstance(other, Character):
            other = VirtualCharacter.of(other)
        self._check(other)
        return VirtualCharacter(
            self.group, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def __sub__(self, other):
        if isinstance(other, Character):
            other = VirtualCharacter.of(other)
        self._check(other)
        return VirtualCharacter(
            self.group, tuple(a - b for a, b in zip(self.values, other.values))
        )

    def __rmul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return VirtualCharacter(self.group, tuple(k * v for v in self.values))

    def __eq__(self, other):
        if not isinstance(other, (Character, VirtualCharacter)):
            return NotImplemented
        return self.group == other.group and self.values == other.values

    def __hash__(self):
        return hash((self.group, self.values))

    @property
    def degree(self) -> Fraction:
        return self.values[0].rational_value()

    def decompose(self, table: list[Character] | None = None) -> dict[str, int]:
        """Multiplicities against the irreducible table; exact."""
        table = table if table is not None else irreducible_characters(self.group)
        out = {}
        for chi in table:
            m = inner_product(self, chi)
            if m:
                if m.denominator != 1:
                    raise InternalCheckError("non-integral multiplicity in decomposition")
                out[chi.char_id] = int(m)
        return out


# ---------------------------------------------------------------------------
# table construction

@lru_cache(maxsize=None)
def _class_index(G: MetacyclicParams) -> dict[GroupElement, int]:
    return {c.rep: i for i, c in enumerate(conjugacy_classes(G))}


@lru_cache(maxsize=None)
def _inverse_class_map(G: MetacyclicParams) -> tuple[int, ...]:
    cls = conjugacy_classes(G)
    idx = _class_index(G)
    return tuple(idx[G.class_of(G.inv(c.rep))] for c in cls)


@lru_cache(maxsize=None)
def _gauss_periods(G: MetacyclicParams) -> tuple[CyclotomicNumber, ...]:
    """gauss[t] = sum over the order-p^r subgroup H of zeta_q^{t s}."""
    H = _subgroup_H(G)
    out = []
    for t in range(G.q):
        if t == 0:
            out.append(CyclotomicNumber.from_rational(G.pr))
        else:
            acc = _ZERO
            for s in H:
                acc = acc + _zeta(G.q, t * s % G.q)
            out.append(acc)
    return tuple(out)


@lru_cache(maxsize=None)
def _subgroup_H(G: MetacyclicParams) -> tuple[int, ...]:
    """The unique subgroup of order p^r in (Z/q)^x, sorted."""
    H = {1}
    t = G.canonical_j
    while t != 1:
        H.add(t)
        t = t * G.canonical_j % G.q
    return tuple(sorted(H))


def _linear_character(G: MetacyclicParams, e: int) -> Character:
    pn = G.pn
    vals = [_zeta(pn, e * c.rep.y % pn) for c in conjugacy_classes(G)]
    return Character(G, vals, ("one_dimensional", e % pn))


def _induced_character(G: MetacyclicParams, level: int, u: int, w: int) -> Character:
    """The degree-p^r character at quotient level m: zero off X, Gaussian on X."""
    pr = G.pr
    pmr = G.p ** (level - G.r)
    gauss = _gauss_periods(G)
    vals = []
    for c in conjugacy_classes(G):
        x, y = c.rep
        if y % pr != 0:
            vals.append(_ZERO)
            continue
        g = gauss[u * x % G.q]
        if pmr > 1:
            g = g * _zeta(pmr, w * (y // pr) % pmr)
        vals.append(g)
    prov = ("induced", u, w) if level == G.n else ("lifted_from_quotient", level, u, w)
    return Character(G, vals, prov)


@lru_cache(maxsize=None)
def irreducible_characters(G: MetacyclicParams) -> tuple[Character, ...]:
    """The complete irreducible table, in deterministic order.

    One-dimensional characters sorted by exponent, then the p^r-dimensional
    ones by quotient level (unfaithful first) and minimal (u, w) orbit
    representative.  The count equals the number of conjugacy classes and
    the squared degrees sum to |G|.
    """
    table = [_linear_character(G, e) for e in range(G.pn)]
    H = set(_subgroup_H(G))
    for level in range(G.r, G.n + 1):
        pmr = G.p ** (level - G.r)
        ws = [w for w in range(pmr) if gcd(w, G.p) == 1] if pmr > 1 else [0]
        reps = _psi_orbit_reps(G)
        for u in reps:
            for w in ws:
                table.append(_induced_character(G, level, u, w))
    ncls = len(conjugacy_classes(G))
    if len(table) != ncls:
        raise InternalCheckError(
            f"table size {len(table)} does not match class count {ncls}"
        )
    if sum(chi.degree ** 2 for chi in table) != G.order:
        raise InternalCheckError("degree squares do not sum to the group order")
    return tuple(table)


@lru_cache(maxsize=None)
def _psi_orbit_reps(G: MetacyclicParams) -> tuple[int, ...]:
    """Minimal representatives of the H-orbits on units mod q, sorted."""
    reps = []
    seen = [False] * G.q
    for u in range(1, G.q):
        if seen[u]:
            continue
        reps.append(u)
        t = u
        while True:
            seen[t] = True
            t = t * G.canonical_j % G.q
            if t == u:
                break
    return tuple(reps)


def faithful_characters(G: MetacyclicParams) -> list[Character]:
    return [chi for chi in irreducible_characters(G) if chi.provenance[0] == "induced"]


def one_faithful_character(G: MetacyclicParams) -> Character:
    """A single faithful irreducible, without building the whole table."""
    w = 1 if G.n > G.r else 0
    return _induced_character(G, G.n, 1, w)


def trivial_character(G: MetacyclicParams) -> Character:
    return irreducible_characters(G)[0]


def regular_character(G: MetacyclicParams) -> Character:
    vals = [
        CyclotomicNumber.from_rational(G.order if i == 0 else 0)
        for i in range(len(conjugacy_classes(G)))
    ]
    return Character(G, vals, ("regular",))


# ---------------------------------------------------------------------------
# psi calculus and induction

def psi_is_faithful(G: MetacyclicParams, psi: PsiDescriptor) -> bool:
    pmr = G.pn // G.pr
    if psi.u % G.q == 0:
        return False
    if pmr == 1:
        return True
    return gcd(psi.w, G.p) == 1


def psi_value(G: MetacyclicParams, psi: PsiDescriptor, g: GroupElement) -> CyclotomicNumber:
    """psi evaluated at an element of X; raises if g is outside X."""
    if g.y % G.pr != 0:
        raise ValueError(f"{g} is not in X")
    pmr = G.pn // G.pr
    val = _zeta(G.q, psi.u * g.x % G.q)
    if pmr > 1:
        val = val * _zeta(pmr, psi.w * (g.y // G.pr) % pmr)
    return val


def conjugate_psi(G: MetacyclicParams, psi: PsiDescriptor, k: int) -> PsiDescriptor:
    """The b^k-conjugate: (b^k psi)(h) = psi(b^k h b^-k)."""
    return PsiDescriptor(psi.u * pow(G.j, k, G.q) % G.q, psi.w)


def induce_from_X(G: MetacyclicParams, psi: PsiDescriptor) -> Character:
    """Induction of psi from X to G via the coset sum over b^0, ..., b^{p^r - 1}.

    Faithful psi give faithful irreducible characters; the trivial psi gives
    the permutation character of G/X.
    """
    pmr = G.pn // G.pr
    u = psi.u % G.q
    w = psi.w % pmr if pmr > 1 else 0
    return _induced_character(G, G.n, u, w)


def induce_brute(G: MetacyclicParams, psi: PsiDescriptor) -> Character:
    """Induction by the general formula, summing over all of G; test oracle."""
    if G.order > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force gated to order <= {BRUTE_FORCE_LIMIT}")
    X = subgroup_X(G).elements
    order_X = len(X)
    vals = []
    for c in conjugacy_classes(G):
        acc = _ZERO
        for g in G.elements():
            t = G.mul(G.mul(G.inv(g), c.rep), g)
            if t in X:
                acc = acc + psi_value(G, PsiDescriptor(psi.u, psi.w), t)
        acc = acc * Fraction(1, order_X)
        vals.append(acc)
    return Character(G, vals, ("induced_brute", psi.u, psi.w))


def restriction_to_X(chi: Character) -> dict[GroupElement, CyclotomicNumber]:
    """Values of chi on the elements of X."""
    G = chi.group
    return {g: chi.value_at(g) for g in sorted(subgroup_X(G).elements)}


# ---------------------------------------------------------------------------
# inner products

def _weighted_dot(terms: Iterable[tuple[int, CyclotomicNumber, CyclotomicNumber]]) -> CyclotomicNumber:
    """Sum of w * a * b over terms, reduced and canonicalized once."""
    live = [(w, a, b) for w, a, b in terms if w and not a.is_zero() and not b.is_zero()]
    if not live:
        return _ZERO
    M = 1
    for _, a, b in live:
        M = M * a.conductor // gcd(M, a.conductor)
        M = M * b.conductor // gcd(M, b.conductor)
    _check_conductor(M)
    phi = _phi(M)
    buf = [0] * (2 * phi - 1)
    extra = _ZERO
    for w, a, b in live:
        da, va = a._lifted(M)
        db, vb = b._lifted(M)
        if da != 1 or db != 1:
            extra = extra + w * a * b  # rare non-integral values: exact slow path
            continue
        for i, x in enumerate(va):
            if x:
                wx = w * x
                for jj, yv in enumerate(vb):
                    if yv:
                        buf[i + jj] += wx * yv
    out = _fold(M, buf)
    total = CyclotomicNumber(M, [Fraction(c) for c in out])
    if not extra.is_zero():
        total = total + extra
    return total


def inner_product(chi1, chi2) -> Fraction:
    """<chi1, chi2> = (1/|G|) sum over classes of size * chi1(g) * conj(chi2(g)).

    Conjugation is evaluated as the value at the inverse class.  The result
    must be rational (it always is for characters and their integer
    combinations); a non-rational result raises.
    """
    if chi1.group != chi2.group:
        raise ValueError("characters live on different groups")
    G = chi1.group
    cls = conjugacy_classes(G)
    inv_map = _inverse_class_map(G)
    raw = _weighted_dot(
        (cls[i].size, chi1.values[i], chi2.values[inv_map[i]])
        for i in range(len(cls))
    )
    if not raw.is_rational():
        raise ValueError("inner product is not rational for these class functions")
    return raw.rational_value() / G.order


def is_faithful(chi: Character) -> bool:
    """Trivial-kernel test: the kernel is the union of classes where chi = chi(1)."""
    deg = CyclotomicNumber.from_rational(chi.degree)
    for i, c in enumerate(conjugacy_classes(chi.group)):
        if i == 0:
            continue
        if chi.values[i] == deg:
            return False
    return True


# ---------------------------------------------------------------------------
# tensor structure, character fields, permutation characters

def tensor_decompose(tau: Character) -> tuple[Character, Character]:
    """Write a faithful irreducible as tau_r (x) chi with tau_r from level r.

    tau_r is the inflation of a faithful irreducible of C_q x| C_{p^r} and chi
    is one-dimensional of order p^n (trivial in the degenerate case n = r).
    The factorization is verified value-wise before returning.
    """
    G = tau.group
    if tau.provenance[0] != "induced":
        raise ValueError("tensor decomposition applies to faithful induced characters")
    if not is_faithful(tau):
        raise ValueError("character is not faithful")
    _, u, w = tau.provenance
    tau_r = _induced_character(G, G.r, u, 0)
    e = w if G.n > G.r else 0
    chi = _linear_character(G, e)
    prod = tuple(a * b for a, b in zip(tau_r.values, chi.values))
    if prod != tau.values:
        raise InternalCheckError("tensor factorization failed value-wise")
    return tau_r, chi


def character_field(chi: Character) -> AbelianField:
    return field_of_values(list(chi.values))


def formula_field(G: MetacyclicParams) -> AbelianField:
    """Closed form of the field of a faithful character: Q(zeta_{p^{n-r}}, eta_H).

    Realized at conductor q * p^{n-r} as the fixed field of the units that
    are 1 mod p^{n-r} and lie in H mod q.
    """
    pmr = G.pn // G.pr
    m = G.q * pmr
    H = set(_subgroup_H(G))
    stab = [
        k
        for k in range(1, m)
        if gcd(k, m) == 1 and k % pmr == 1 % pmr and k % G.q in H
    ]
    return AbelianField(m, stab)


def permutation_character(G: MetacyclicParams, H: Subgroup) -> Character:
    """The character of G acting on the cosets G/H (values are rational integers)."""
    els = H.elements
    coset_reps = []
    seen: set[GroupElement] = set()
    for g in G.elements():
        if g not in seen:
            coset_reps.append(g)
            seen.update(G.mul(g, h) for h in els)
    vals = []
    for c in conjugacy_classes(G):
        fixed = 0
        for rep in coset_reps:
            if G.mul(G.mul(G.inv(rep), c.rep), rep) in els:
                fixed += 1
        vals.append(CyclotomicNumber.from_rational(fixed))
    return Character(G, vals, ("permutation", H.label))


@dataclass(frozen=True)
class QuotientIdentity:
    """Both sides of the tower permutation-character identity.

    lhs = reg + perm(K_{n-1}) - perm(K_n) - perm(F_{n-1}) decomposes as
    ``coefficient`` times the sum of all faithful irreducibles.  The
    coefficient is p^r for n > r; in the degenerate tower base n = r it drops
    to p^r - p^{r-1}, because perm(F_{n-1}) already contains each faithful
    character p^{r-1} times.
    """

    group: MetacyclicParams
    lhs: VirtualCharacter
    rhs: VirtualCharacter
    equal: bool
    coefficient: int
    faithful_count: int

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "equal": self.equal,
            "coefficient": self.coefficient,
            "faithful_count": self.faithful_count,
            "total_dimension": str(self.lhs.degree),
        }


def quotient_identity_virtual_character(G: MetacyclicParams) -> QuotientIdentity:
    towers = {s.label: s for s in tower_subgroups(G)}
    n = G.n
    lhs = (
        VirtualCharacter.of(permutation_character(G, towers[f"F{n}"]))
        + permutation_character(G, towers[f"K{n - 1}"])
        - permutation_character(G, towers[f"K{n}"])
        - permutation_character(G, towers[f"F{n - 1}"])
    )
    faith = faithful_characters(G)
    coeff = G.pr if G.n > G.r else G.pr - G.pr // G.p
    rhs = VirtualCharacter.zero(G)
    for chi in faith:
        rhs = rhs + chi
    rhs = coeff * rhs
    return QuotientIdentity(
        group=G,
        lhs=lhs,
        rhs=rhs,
        equal=lhs == rhs,
        coefficient=coeff,
        faithful_count=len(faith),
    )
