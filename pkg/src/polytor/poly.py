"""Vector-valued polynomials on the polytorus, the Boolean cube and as
Dirichlet polynomials, plus the structural maps between them.

Coefficient maps are sparse dictionaries. Multi-indices store only their
nonzero exponents so that a Bohr lift over tens of thousands of primes stays
cheap; :attr:`MultiIndex.exponents` gives the dense view when needed.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    FactorizationError,
    NotHomogeneous,
    NotTetrahedral,
    PolytorError,
)
from .spaces import NormedSpace

DEFAULT_SIEVE_BOUND = 10**6


# ---------------------------------------------------------------------------
# primes


class PrimeTable:
    """Smallest-prime-factor sieve that grows on demand."""

    def __init__(self, bound: int = DEFAULT_SIEVE_BOUND):
        self._build(max(int(bound), 16))

    def _build(self, bound: int) -> None:
        spf = np.zeros(bound + 1, dtype=np.int64)
        for p in range(2, math.isqrt(bound) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        rest = np.nonzero(spf == 0)[0]
        spf[rest] = rest
        spf[:2] = 0
        self.bound = bound
        self.spf = spf
        self.primes = np.nonzero(spf[2:] == np.arange(2, bound + 1))[0] + 2
        self._primes_list = self.primes.tolist()

    def ensure_count(self, count: int) -> None:
        while len(self._primes_list) < count:
            self._build(self.bound * 2)

    def ensure_bound(self, n: int) -> None:
        if n > self.bound:
            self._build(max(n, self.bound * 2))

    def prime(self, i: int) -> int:
        """The i-th prime, 0-based (prime(0) == 2)."""
        self.ensure_count(i + 1)
        return self._primes_list[i]

    def first(self, count: int) -> List[int]:
        self.ensure_count(count)
        return self._primes_list[:count]

    def index(self, p: int) -> int:
        self.ensure_bound(p)
        return bisect.bisect_left(self._primes_list, p)

    def factor(self, n: int) -> Dict[int, int]:
        """Prime factorization ``{p: e}`` of a positive integer."""
        if n < 1:
            raise DomainError(f"can only factor positive integers, got {n}")
        self.ensure_bound(n)
        out: Dict[int, int] = {}
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            n //= p
            out[p] = out.get(p, 0) + 1
        return out


_TABLE: Optional[PrimeTable] = None


def prime_table(bound: int = DEFAULT_SIEVE_BOUND) -> PrimeTable:
    global _TABLE
    if _TABLE is None:
        _TABLE = PrimeTable(bound)
    else:
        _TABLE.ensure_bound(bound)
    return _TABLE


# ---------------------------------------------------------------------------
# index types


class MultiIndex:
    """Exponent vector in N_0^n, stored sparsely.

    ``support`` is a sorted tuple of ``(variable, exponent)`` pairs with
    0-based variables and positive exponents.
    """

    __slots__ = ("n_vars", "support", "degree", "_hash")

    def __init__(self, n_vars: int, support: Iterable[Tuple[int, int]] = ()):
        pairs = tuple(sorted((int(i), int(e)) for i, e in support if e))
        for i, e in pairs:
            if e < 0:
                raise DomainError(f"negative exponent {e} at variable {i}")
            if not 0 <= i < n_vars:
                raise DimensionMismatch(n_vars, i + 1, what="multi-index")
        if len({i for i, _ in pairs}) != len(pairs):
            raise DomainError("repeated variable in multi-index support")
        self.n_vars = int(n_vars)
        self.support = pairs
        self.degree = sum(e for _, e in pairs)
        self._hash = hash((self.n_vars, pairs))

    @classmethod
    def from_exponents(cls, exponents: Sequence[int]) -> "MultiIndex":
        return cls(len(exponents), ((i, e) for i, e in enumerate(exponents) if e))

    @property
    def exponents(self) -> Tuple[int, ...]:
        dense = [0] * self.n_vars
        for i, e in self.support:
            dense[i] = e
        return tuple(dense)

    def __getitem__(self, i: int) -> int:
        for j, e in self.support:
            if j == i:
                return e
        if not 0 <= i < self.n_vars:
            raise IndexError(i)
        return 0

    def __len__(self) -> int:
        return self.n_vars

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiIndex):
            return self.n_vars == other.n_vars and self.support == other.support
        if isinstance(other, tuple):
            return self.exponents == other
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        """Orders by degree, then like the dense exponent tuples, without densifying."""
        return self.degree, tuple((-i, e) for i, e in self.support)

    def __lt__(self, other: "MultiIndex") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        if self.n_vars <= 12:
            return f"MultiIndex{self.exponents}"
        return f"MultiIndex(n_vars={self.n_vars}, support={self.support})"

    def is_tetrahedral(self) -> bool:
        return all(e == 1 for _, e in self.support)


def subset_index(members: Iterable[int], n: Optional[int] = None) -> Tuple[int, ...]:
    """Canonical SubsetIndex: strictly increasing 1-based tuple."""
    out = tuple(sorted(set(int(a) for a in members)))
    if out and out[0] < 1:
        raise DomainError(f"subset members are 1-based, got {out[0]}")
    if n is not None and out and out[-1] > n:
        raise DimensionMismatch(n, out[-1], what="subset")
    return out


# ---------------------------------------------------------------------------
# polynomial containers


def _clean_terms(terms: Mapping, space: NormedSpace) -> dict:
    out = {}
    for key, v in terms.items():
        v = space.check(v)
        if v.ndim != 1:
            raise DimensionMismatch(1, v.ndim, what="coefficient rank")
        if np.any(v != 0):
            out[key] = v.copy()
            out[key].setflags(write=False)
    return out


def _terms_equal(a: Mapping, b: Mapping) -> bool:
    if a.keys() != b.keys():
        return False
    return all(np.array_equal(a[k], b[k]) for k in a)


class VPoly:
    """X-valued polynomial ``sum x_alpha z^alpha`` in ``n_vars`` variables."""

    def __init__(self, n_vars: int, terms: Mapping, space: NormedSpace):
        cleaned = {}
        for key, v in terms.items():
            if not isinstance(key, MultiIndex):
                key = MultiIndex.from_exponents(key)
            if key.n_vars != n_vars:
                raise DimensionMismatch(n_vars, key.n_vars, what="multi-index")
            if key in cleaned:
                raise DomainError(f"duplicate multi-index {key}")
            cleaned[key] = v
        self.n_vars = int(n_vars)
        self.space = space
        self.terms: Dict[MultiIndex, np.ndarray] = _clean_terms(cleaned, space)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[MultiIndex, np.ndarray]]:
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, VPoly):
            return NotImplemented
        return self.n_vars == other.n_vars and _terms_equal(self.terms, other.terms)

    def __repr__(self) -> str:
        return f"VPoly(n_vars={self.n_vars}, terms={len(self.terms)}, space={self.space.describe()})"

    def degree(self) -> int:
        return max((a.degree for a in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self, m: Optional[int] = None) -> bool:
        degs = {a.degree for a in self.terms}
        if m is None:
            return len(degs) <= 1
        return degs <= {m}

    def active_vars(self) -> List[int]:
        return sorted({i for a in self.terms for i, _ in a.support})

    def max_var_degree(self) -> int:
        return max((e for a in self.terms for _, e in a.support), default=0)

    def arrays(self, vars_: Optional[Sequence[int]] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Dense exponent matrix (terms x vars) and coefficient matrix (terms x dim).

        ``vars_`` selects and orders the columns; defaults to all variables.
        """
        cols = list(range(self.n_vars)) if vars_ is None else list(vars_)
        pos = {v: j for j, v in enumerate(cols)}
        items = list(self)
        E = np.zeros((len(items), len(cols)), dtype=np.int64)
        C = np.zeros((len(items), self.space.dim), dtype=complex)
        for t, (a, x) in enumerate(items):
            for i, e in a.support:
                if i not in pos:
                    raise DomainError(f"variable {i} is active but not selected")
                E[t, pos[i]] = e
            C[t] = x
        return E, C

    def coefficient_norms(self) -> np.ndarray:
        if not self.terms:
            return np.zeros(0)
        return self.space.norms(np.stack([x for _, x in self]))

    def map_terms(self, keep) -> "VPoly":
        return VPoly(self.n_vars, {a: x for a, x in self.terms.items() if keep(a)}, self.space)

    def to_json(self) -> dict:
        return {
            "kind": "torus",
            "n_vars": self.n_vars,
            "space": self.space.to_json(),
            "terms": [
                {"alpha": list(a.exponents), "coeff": _coeff_json(x)} for a, x in self
            ],
        }


class WalshPoly:
    """X-valued Walsh polynomial ``sum x_A eps_A`` with subsets of [1..n_vars]."""

    def __init__(self, n_vars: int, terms: Mapping, space: NormedSpace):
        cleaned = {}
        for A, v in terms.items():
            key = subset_index(A, n_vars)
            if key in cleaned:
                raise DomainError(f"duplicate subset {key}")
            cleaned[key] = v
        self.n_vars = int(n_vars)
        self.space = space
        self.terms: Dict[Tuple[int, ...], np.ndarray] = _clean_terms(cleaned, space)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WalshPoly):
            return NotImplemented
        return self.n_vars == other.n_vars and _terms_equal(self.terms, other.terms)

    def __repr__(self) -> str:
        return f"WalshPoly(n_vars={self.n_vars}, terms={len(self.terms)}, space={self.space.describe()})"

    def degree(self) -> int:
        return max((len(A) for A in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> dict:
        return {
            "kind": "walsh",
            "n_vars": self.n_vars,
            "space": self.space.to_json(),
            "terms": [{"A": list(A), "coeff": _coeff_json(x)} for A, x in self],
        }


class DirichletPoly:
    """Finite Dirichlet polynomial ``sum a_n n^{-s}`` with X-valued coefficients."""

    def __init__(self, terms: Mapping[int, object], space: NormedSpace):
        for n in terms:
            if int(n) != n or n < 1:
                raise DomainError(f"Dirichlet indices are positive integers, got {n}")
        self.space = space
        self.terms: Dict[int, np.ndarray] = _clean_terms({int(n): v for n, v in terms.items()}, space)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        return _terms_equal(self.terms, other.terms)

    def __repr__(self) -> str:
        return f"DirichletPoly(terms={len(self.terms)}, space={self.space.describe()})"

    def length(self) -> int:
        return max(self.terms, default=0)

    def to_json(self) -> dict:
        return {
            "kind": "dirichlet",
            "space": self.space.to_json(),
            "terms": [{"n": n, "coeff": _coeff_json(x)} for n, x in self],
        }


def _coeff_json(x: np.ndarray) -> list:
    return [[float(c.real), float(c.imag)] for c in x]


def _coeff_from_json(c) -> np.ndarray:
    return np.array([complex(re, im) for re, im in c], dtype=complex)


def poly_from_json(d: dict):
    """Inverse of the ``to_json`` methods of the three polynomial kinds."""
    space = NormedSpace.from_json(d["space"])
    kind = d.get("kind")
    terms = d.get("terms", [])
    if kind == "dirichlet" or (kind is None and terms and "n" in terms[0]):
        return DirichletPoly({t["n"]: _coeff_from_json(t["coeff"]) for t in terms}, space)
    n = int(d["n_vars"])
    if kind == "walsh" or (kind is None and terms and "A" in terms[0]):
        return WalshPoly(n, {tuple(t["A"]): _coeff_from_json(t["coeff"]) for t in terms}, space)
    return VPoly(n, {tuple(t["alpha"]): _coeff_from_json(t["coeff"]) for t in terms}, space)


# ---------------------------------------------------------------------------
# Bohr transform


def factorize(n: int, n_primes: int) -> MultiIndex:
    """Prime-exponent multi-index of ``n`` over the first ``n_primes`` primes."""
    table = prime_table()
    alpha = []
    for p, e in table.factor(n).items():
        i = table.index(p)
        if i >= n_primes:
            raise FactorizationError(n, p, n_primes)
        alpha.append((i, e))
    return MultiIndex(n_primes, alpha)


def omega(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    return sum(prime_table().factor(n).values())


def bohr_lift(D: DirichletPoly, n_primes: int) -> VPoly:
    return VPoly(n_primes, {factorize(n, n_primes): x for n, x in D.terms.items()}, D.space)


def monomial_integer(alpha: MultiIndex) -> int:
    table = prime_table()
    n = 1
    for i, e in alpha.support:
        n *= table.prime(i) ** e
    return n


def bohr_push(P: VPoly) -> DirichletPoly:
    return DirichletPoly({monomial_integer(a): x for a, x in P.terms.items()}, P.space)


# ---------------------------------------------------------------------------
# homogeneous parts and the tetrahedral/Walsh bridge


def homogeneous_part(P: VPoly, m: int) -> VPoly:
    if m < 0:
        raise DomainError(f"degree must be nonnegative, got {m}")
    return P.map_terms(lambda a: a.degree == m)


def is_tetrahedral(P: VPoly) -> bool:
    return all(a.is_tetrahedral() for a in P.terms)


def tetra_to_walsh(P: VPoly) -> WalshPoly:
    terms = {}
    for a, x in P.terms.items():
        if not a.is_tetrahedral():
            raise NotTetrahedral(f"monomial {a} has an exponent above 1")
        terms[tuple(i + 1 for i, _ in a.support)] = x
    return WalshPoly(P.n_vars, terms, P.space)


def walsh_to_tetra(W: WalshPoly) -> VPoly:
    return VPoly(
        W.n_vars,
        {MultiIndex(W.n_vars, ((i - 1, 1) for i in A)): x for A, x in W.terms.items()},
        W.space,
    )


# ---------------------------------------------------------------------------
# parity decomposition


@dataclass(frozen=True)
class ParityLabel:
    """Coordinates of one monomial: alpha = 2*beta + 2*gamma + 1_A."""

    alpha: MultiIndex
    A: Tuple[int, ...]
    k: int
    l: int
    beta: MultiIndex
    gamma: MultiIndex


@dataclass
class ParityDecomposition:
    m: int
    parity: str
    n_vars: int
    space: NormedSpace
    parts: Dict[Tuple[int, ...], Dict[int, VPoly]]
    labels: List[ParityLabel]

    def signed_parts(self) -> Dict[Tuple[int, ...], VPoly]:
        """P_A for every A, so that P(eps z) = sum_A eps_A P_A(z)."""
        out = {}
        for A, by_l in self.parts.items():
            terms = {}
            for Q in by_l.values():
                terms.update(Q.terms)
            out[A] = VPoly(self.n_vars, terms, self.space)
        return out

    def flatten(self) -> VPoly:
        terms = {}
        for by_l in self.parts.values():
            for Q in by_l.values():
                for a, x in Q.terms.items():
                    if a in terms:
                        raise PolytorError(f"monomial {a} appears in two parts")
                    terms[a] = x
        return VPoly(self.n_vars, terms, self.space)


def parity_label(alpha: MultiIndex, m: int) -> ParityLabel:
    odd = [(i, e) for i, e in alpha.support if e % 2]
    even = [(i, e) for i, e in alpha.support if e % 2 == 0]
    A = tuple(i + 1 for i, _ in odd)
    k = len(A) // 2
    l = sum(e for _, e in odd) // 2
    beta = MultiIndex(alpha.n_vars, ((i, e // 2) for i, e in even))
    gamma = MultiIndex(alpha.n_vars, ((i, (e - 1) // 2) for i, e in odd))
    half = m // 2
    if beta.degree != half - l or gamma.degree != l - k:
        raise PolytorError(f"inconsistent parity label for {alpha} at degree {m}")
    return ParityLabel(alpha, A, k, l, beta, gamma)


def parity_decompose(P: VPoly, m: Optional[int] = None) -> ParityDecomposition:
    """Split an m-homogeneous polynomial by the parity pattern of its exponents.

    Works for both parities of m; for odd m the odd-exponent sets have size
    2k+1 and the exponent sum over A is 2l+1.
    """
    if m is None:
        m = P.degree()
    if not P.is_homogeneous(m):
        raise NotHomogeneous(f"polynomial is not {m}-homogeneous")
    parts: Dict[Tuple[int, ...], Dict[int, dict]] = {}
    labels = []
    for a, x in P:
        lab = parity_label(a, m)
        labels.append(lab)
        parts.setdefault(lab.A, {}).setdefault(lab.l, {})[a] = x
    built = {
        A: {l: VPoly(P.n_vars, t, P.space) for l, t in sorted(by_l.items())}
        for A, by_l in parts.items()
    }
    return ParityDecomposition(m, "even" if m % 2 == 0 else "odd", P.n_vars, P.space, built, labels)


def reassemble(label: ParityLabel) -> MultiIndex:
    """alpha from (A, beta, gamma)."""
    exps = [2 * b + 2 * g for b, g in zip(label.beta.exponents, label.gamma.exponents)]
    for i in label.A:
        exps[i - 1] += 1
    return MultiIndex.from_exponents(exps)


# ---------------------------------------------------------------------------
# combinatorics


def _count_single_hits(n: int, A: frozenset, k: int) -> int:
    return sum(1 for B in itertools.combinations(range(1, n + 1), k) if len(A.intersection(B)) == 1)


def combinatorial_identity_check(n: int, m: int, k: int) -> Tuple[int, int]:
    """Brute-force |{B : |B|=k, |A & B|=1}| versus m*C(n-m, k-1).

    The count is enumerated for every m-subset A; all must agree. Returns the
    two sides for A = {1..m}.
    """
    if not (1 <= m <= n and 1 <= k <= n):
        raise DomainError(f"need 1 <= m, k <= n, got n={n}, m={m}, k={k}")
    rhs = m * math.comb(n - m, k - 1)
    counts = {_count_single_hits(n, frozenset(A), k) for A in itertools.combinations(range(1, n + 1), m)}
    if len(counts) != 1:
        raise PolytorError(f"count depends on A for n={n}, m={m}, k={k}: {sorted(counts)}")
    return counts.pop(), rhs


def combinatorial_triple_sum(n: int, m: int, k: int, v: Mapping[Tuple[int, ...], object]):
    """Left side of the regrouping identity: sum over B, A1 in B, A2 in B^c.

    ``v`` maps m-subsets (sorted tuples) to anything supporting ``+``.
    """
    total = 0
    universe = range(1, n + 1)
    for B in itertools.combinations(universe, k):
        Bc = [i for i in universe if i not in B]
        for a1 in B:
            for A2 in itertools.combinations(Bc, m - 1):
                total = total + v[tuple(sorted((a1,) + A2))]
    return total


def stirling_ratio_exact(n: int, m: int, k: int) -> Fraction:
    if m < 1 or k < 1 or n != k * m:
        raise DomainError(f"stirling ratio needs n = k*m with k, m >= 1, got n={n}, m={m}, k={k}")
    return Fraction(math.comb(n, k), m * math.comb(n - m, k - 1))


def stirling_ratio(n: int, m: int, k: int) -> float:
    """C(n,k) / (m*C(n-m,k-1)) for n = k*m."""
    return float(stirling_ratio_exact(n, m, k))
