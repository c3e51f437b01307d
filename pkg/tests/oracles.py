"""Brute-force oracles, kept independent of the library code paths they check.

Prefixes are recovered by scanning factorizations with compose, never
with the library's segment extraction; the rank-1 saturation oracle uses
the classical edge-level closure rules directly.
"""

from __future__ import annotations

import itertools

from kgraphlat import degrees
from kgraphlat.kgraph import KGraph, Path


def oracle_prefix(g: KGraph, tau: Path, m):
    """The degree-m prefix of tau found by scanning compose factorizations."""
    hits = []
    for mu in g.paths_of_degree(tau.r, m):
        for nu in g.paths_of_degree(mu.s, degrees.sub(tau.d, m)):
            if g.compose(mu, nu) == tau:
                hits.append(mu)
                break
    assert len(hits) == 1, f"factorization not unique for {tau} at {m}: {hits}"
    return hits[0]


def oracle_factorizations(g: KGraph, tau: Path, m):
    """All (mu, nu) with compose(mu, nu) == tau and d(mu) == m."""
    out = []
    for mu in g.paths_of_degree(tau.r, m):
        for nu in g.paths_of_degree(mu.s, degrees.sub(tau.d, m)):
            if g.compose(mu, nu) == tau:
                out.append((mu, nu))
    return out


def oracle_mce(g: KGraph, mu: Path, nu: Path):
    """Minimal common extensions via the definitional filter."""
    n = degrees.join(mu.d, nu.d)
    return tuple(
        tau
        for tau in g.paths_of_degree(mu.r, n)
        if oracle_prefix(g, tau, mu.d) == mu and oracle_prefix(g, tau, nu.d) == nu
    )


def oracle_ext(g: KGraph, mu: Path, E, cap):
    """Definitional recomputation of ext by scanning candidate continuations."""
    out = set()
    for beta in g.paths_up_to(mu.s, cap):
        tau = g.compose(mu, beta)
        for nu in E:
            if tau in oracle_mce(g, mu, nu):
                out.add(beta)
    return frozenset(out)


# -- rank-1 classical closure rules ------------------------------------------------


def k1_hereditary(g: KGraph, H) -> bool:
    H = set(H)
    return all(e.s in H for e in g.edges if e.r in H)


def k1_saturate(g: KGraph, G) -> frozenset:
    """Iterated edge rule: absorb any vertex whose (nonempty) edge set
    points entirely into the current set."""
    cur = set(G)
    changed = True
    while changed:
        changed = False
        for v in g.vertices:
            if v in cur:
                continue
            outs = [e for e in g.edges if e.r == v]
            if outs and all(e.s in cur for e in outs):
                cur.add(v)
                changed = True
    return frozenset(cur)


def k1_sat_hered_sets(g: KGraph):
    """All saturated hereditary subsets by exhaustive scan of the rules."""
    out = []
    verts = g.vertices
    for n in range(len(verts) + 1):
        for combo in itertools.combinations(verts, n):
            S = frozenset(combo)
            if k1_hereditary(g, S) and k1_saturate(g, S) == S:
                out.append(S)
    return out
