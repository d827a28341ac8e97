"""Local and global Schur indices of the faithful characters of C_q x| C_{p^n}.

The global index equals the index at the place q; every other place
contributes 1:

  * infinity: the group has odd order, so no faithful character is self-dual;
  * primes coprime to |G|: always 1;
  * the prime p: a mod-p constituent of tau inherits the p^r distinct
    eigenvalues of tau(a), which are permuted transitively by b, so tau stays
    irreducible mod p;
  * the prime q: the extension Q_q(psi)/Q_q(tau) is tame and totally ramified
    of degree p^r, so being a norm is a residue-field condition.  Writing
    d = p^{n-r}, f = ord(q mod d) and N = q^f - 1, the index is the order of
    the class of a primitive d-th root of unity in k* / (k*)^{p^r}, which is
    e / gcd(e, N/d) with e = gcd(p^r, N).

The q-adic value is computed purely with integer arithmetic (orders and
p-adic valuations); no local fields are ever constructed.  The exact index
refines the general p | m bound and is cross-checked in the tests against
the direct big-integer computation and all externally known values.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

from .cyclotomic import InternalCheckError
from .groups import MetacyclicParams, multiplicative_order
from .characters import (
    Character,
    _inverse_class_map,
    inner_product,
    is_faithful,
)

__all__ = [
    "LocalIndexReport",
    "GlobalIndexReport",
    "local_index",
    "global_index",
    "norm_criterion",
    "multiplicity_divisibility_check",
    "qadic_class_order",
]

REASON_INFINITY = "odd_order_not_self_dual"
REASON_COPRIME = "coprime_to_group_order"
REASON_MOD_P = "irreducible_mod_p"
REASON_TAME = "tame_norm_criterion"


class LocalIndexReport(NamedTuple):
    place: object  # "inf" or a prime
    index: int
    reason: str
    details: dict

    def to_json(self) -> dict:
        return {
            "place": self.place,
            "index": self.index,
            "reason": self.reason,
            "details": self.details,
        }


@dataclass(frozen=True)
class GlobalIndexReport:
    group: MetacyclicParams
    character_id: str
    local: tuple[LocalIndexReport, ...]
    global_index: int
    divides_dimension: bool

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "character": self.character_id,
            "local": [
                {**entry.to_json(), "place": _place_label(self.group, entry.place)}
                for entry in self.local
            ],
            "global": self.global_index,
            "divides_dimension": self.divides_dimension,
        }


def _place_label(G: MetacyclicParams, place) -> object:
    if place == "inf":
        return "inf"
    if place == G.q:
        return "q"
    if place == G.p:
        return "p"
    return place


def _vp(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def qadic_class_order(q: int, p: int, n: int, r: int) -> tuple[int, dict]:
    """Order of zeta_{p^{n-r}} in k*/(k*)^{p^r} for the residue field k of Q_q(tau).

    Uses only integer arithmetic: f = ord(q mod p^{n-r}), and the p-adic
    valuation of q^f - 1 obtained by lifting the exponent, so q^f is never
    formed.  Returns the order together with the intermediate data.
    """
    d = p ** (n - r)
    f = 1 if d == 1 else multiplicative_order(q % d, d)
    # v_p(q^f - 1) = v_p(q - 1) + v_p(f) for odd p once q = 1 mod p
    if q % p != 1:
        raise InternalCheckError("action of order p^r requires q = 1 mod p")
    V = _vp(q - 1, p) + _vp(f, p)
    e_val = min(r, V)  # e = gcd(p^r, q^f - 1) = p^e_val
    nd_val = V - (n - r)  # v_p((q^f - 1)/d)
    index_val = e_val - min(e_val, nd_val)
    details = {
        "d": d,
        "f": f,
        "v_p_of_N": V,
        "e": p ** e_val,
        "class_order": p ** index_val,
    }
    return p ** index_val, details


def qadic_class_order_direct(q: int, p: int, n: int, r: int) -> int:
    """Same quantity by explicit big-integer arithmetic; test oracle."""
    d = p ** (n - r)
    f = 1 if d == 1 else multiplicative_order(q % d, d)
    N = q ** f - 1
    e = gcd(p ** r, N)
    assert N % d == 0
    return e // gcd(e, N // d)


def _require_faithful(tau: Character) -> None:
    if not is_faithful(tau):
        raise ValueError(
            "character is not faithful: compute its Schur index in the quotient "
            "group where it becomes faithful"
        )


def local_index(G: MetacyclicParams, tau: Character, place) -> LocalIndexReport:
    """Local Schur index of a faithful irreducible at a place ("inf" or a prime)."""
    _require_faithful(tau)
    if place == "inf":
        inv = _inverse_class_map(G)
        conj_values = tuple(tau.values[i] for i in inv)
        if conj_values == tau.values:
            raise InternalCheckError("faithful character of an odd-order group is self-dual")
        return LocalIndexReport("inf", 1, REASON_INFINITY, {"self_dual": False})
    ell = int(place)
    if ell == G.q:
        order, details = qadic_class_order(G.q, G.p, G.n, G.r)
        return LocalIndexReport(ell, order, REASON_TAME, details)
    if ell == G.p:
        if tau.provenance[0] != "induced":
            raise ValueError("expected an induced faithful character")
        _, u, _ = tau.provenance
        eigs = {u * pow(G.j, k, G.q) % G.q for k in range(G.pr)}
        if len(eigs) != G.pr:
            raise InternalCheckError("tau(a) does not have p^r distinct eigenvalues")
        return LocalIndexReport(ell, 1, REASON_MOD_P, {"distinct_eigenvalues": len(eigs)})
    if G.order % ell == 0:
        raise InternalCheckError("|G| = q * p^n has no prime factors besides p and q")
    return LocalIndexReport(ell, 1, REASON_COPRIME, {})


def global_index(G: MetacyclicParams, tau: Character) -> GlobalIndexReport:
    """Global Schur index as the lcm of the local ones, with consistency checks.

    The places inf, p, q and one representative coprime prime (2, since the
    group order is odd) are reported.  The lcm necessarily equals the q-adic
    index; the report additionally asserts the index-1 criterion p^n | q - 1.
    """
    _require_faithful(tau)
    locs = tuple(
        local_index(G, tau, place) for place in ("inf", 2, G.p, G.q)
    )
    g = 1
    for entry in locs:
        g = g * entry.index // gcd(g, entry.index)
    if (g == 1) != ((G.q - 1) % G.pn == 0):
        raise InternalCheckError(
            f"index {g} contradicts the p^n | q-1 criterion for {G}"
        )
    if tau.degree % g != 0:
        raise InternalCheckError("global Schur index does not divide the dimension")
    return GlobalIndexReport(
        group=G,
        character_id=tau.char_id,
        local=locs,
        global_index=g,
        divides_dimension=True,
    )


def norm_criterion(G: MetacyclicParams, tau: Character) -> bool:
    """Whether zeta_{p^{n-r}} is a norm q-adically, i.e. the local index at q is 1.

    Must coincide with p^n | q - 1; disagreement raises.
    """
    _require_faithful(tau)
    order, _ = qadic_class_order(G.q, G.p, G.n, G.r)
    is_norm = order == 1
    if is_norm != ((G.q - 1) % G.pn == 0):
        raise InternalCheckError("norm criterion disagrees with the p^n | q-1 test")
    return is_norm


class DivisibilityCheck(NamedTuple):
    multiplicity: int
    modulus: int
    divisible: bool

    def to_json(self) -> dict:
        return dict(self._asdict())


def multiplicity_divisibility_check(
    G: MetacyclicParams, tau: Character, rho
) -> DivisibilityCheck:
    """Multiplicity of tau in a rational character rho, against the global index.

    rho must take rational values (permutation characters, the regular
    character, and their integer combinations qualify).  The divisibility
    always holds for rationally realizable characters; a False outcome
    signals an internal error upstream, not a mathematical finding.
    """
    _require_faithful(tau)
    if not all(v.is_rational() for v in rho.values):
        raise ValueError("not a rational character")
    mult = inner_product(rho, tau)
    if mult.denominator != 1:
        raise InternalCheckError("multiplicity of an irreducible must be an integer")
    modulus = global_index(G, tau).global_index
    m = int(mult)
    return DivisibilityCheck(m, modulus, m % modulus == 0)
