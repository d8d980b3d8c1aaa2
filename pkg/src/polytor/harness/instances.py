"""Random and adversarial instance generators.

Every generator takes an explicit ``numpy.random.Generator`` so that instance
sets are reproducible from a seed and independent of worker scheduling.
"""

from __future__ import annotations

import itertools
from typing import List

import numpy as np

from ..poly import DirichletPoly, MultiIndex, VPoly, WalshPoly
from ..spaces import NormedSpace

CORNER_KINDS = ("single", "equal", "signs")


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Counter-based stream for (seed, path...); independent of call order."""
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), *[int(p) for p in path]])
    return np.random.Generator(np.random.Philox(ss))


def gaussian_vector(space: NormedSpace, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)


def _coefficients(space: NormedSpace, count: int, rng: np.random.Generator, kind: str) -> List[np.ndarray]:
    if kind == "equal":
        x = gaussian_vector(space, rng)
        return [x] * count
    if kind == "signs":
        x = gaussian_vector(space, rng)
        return [x * rng.choice([-1.0, 1.0]) for _ in range(count)]
    return [gaussian_vector(space, rng) for _ in range(count)]


def corner_kind(i: int) -> str:
    """Instance i is a corner case for i < 3 (single/equal/signs), generic after."""
    return CORNER_KINDS[i] if i < len(CORNER_KINDS) else "gaussian"


def degree_one_family(space: NormedSpace, n: int, rng: np.random.Generator, kind: str = "gaussian") -> np.ndarray:
    """n vectors x_1..x_n (rows) for cotype/type checks."""
    if kind == "single":
        out = np.zeros((n, space.dim), dtype=complex)
        out[0] = gaussian_vector(space, rng)
        return out
    if kind == "basis":
        out = np.zeros((n, space.dim), dtype=complex)
        for i in range(n):
            out[i, i % space.dim] = 1.0
        return out
    return np.array(_coefficients(space, n, rng, kind))


def monomials(n: int, m: int, homogeneous: bool = True, tetrahedral: bool = False) -> List[MultiIndex]:
    """All multi-indices in n variables of degree m (or <= m)."""
    degrees = [m] if homogeneous else range(m + 1)
    out = []
    for d in degrees:
        if tetrahedral:
            for A in itertools.combinations(range(n), d):
                out.append(MultiIndex(n, ((i, 1) for i in A)))
        else:
            for combo in itertools.combinations_with_replacement(range(n), d):
                exps = {}
                for i in combo:
                    exps[i] = exps.get(i, 0) + 1
                out.append(MultiIndex(n, exps.items()))
    return out


def random_vpoly(space: NormedSpace, n: int, m: int, rng: np.random.Generator, homogeneous: bool = True,
                 tetrahedral: bool = False, max_terms: int = 8, kind: str = "gaussian") -> VPoly:
    pool = monomials(n, m, homogeneous, tetrahedral)
    if not pool:
        return VPoly(n, {}, space)
    if kind == "single":
        count = 1
    else:
        count = int(rng.integers(1, min(max_terms, len(pool)) + 1))
    picks = rng.choice(len(pool), size=count, replace=False)
    coeffs = _coefficients(space, count, rng, kind)
    return VPoly(n, {pool[i]: c for i, c in zip(sorted(picks), coeffs)}, space)


def random_walsh_poly(space: NormedSpace, n: int, m: int, rng: np.random.Generator, homogeneous: bool = False,
                      max_terms: int = 12, kind: str = "gaussian") -> WalshPoly:
    P = random_vpoly(space, n, m, rng, homogeneous=homogeneous, tetrahedral=True, max_terms=max_terms, kind=kind)
    return WalshPoly(n, {tuple(i + 1 for i, _ in a.support): x for a, x in P.terms.items()}, space)


def random_dirichlet(space: NormedSpace, N: int, rng: np.random.Generator, max_terms: int = 6,
                     kind: str = "gaussian") -> DirichletPoly:
    count = 1 if kind == "single" else int(rng.integers(1, min(max_terms, N) + 1))
    support = sorted(rng.choice(np.arange(1, N + 1), size=count, replace=False).tolist())
    coeffs = _coefficients(space, count, rng, kind)
    return DirichletPoly(dict(zip(support, coeffs)), space)
