"""Common-extension combinatorics: MCE, minimal pairs, Ext, closures,
and the cap-bounded exhaustiveness decision with certificates.

Exhaustiveness of a finite set E at a vertex quantifies over the whole
(usually infinite) path space, so the decision here is three-valued.
The search walks the uncaptured paths (those extending no member of E),
which form a prefix-closed tree:

  * a path with no common extension with any member is a sound
    counterexample witness (avoidance persists under extension);
  * if every uncaptured path stays strictly inside the cap box, the
    tree is fully explored and a positive answer is certified;
  * an uncaptured path escaping the cap means the answer is unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Tuple

from . import degrees
from .certify import CertifiedBool, false_certified, true_certified, unknown_at_cap
from .degrees import Degree
from .kgraph import KGraph, KGraphError, Path, sorted_paths

PathSet = FrozenSet[Path]

# 2^MAX_FE_MEMBERS candidate sets are enumerated per vertex; refuse beyond this.
MAX_FE_MEMBERS = 18


class MinPair(NamedTuple):
    alpha: Path
    beta: Path


def common_range(E: Iterable[Path]) -> str:
    vs = {p.r for p in E}
    if len(vs) != 1:
        raise KGraphError(f"path set has mixed ranges {sorted(vs)}")
    return next(iter(vs))


def mce(g: KGraph, mu: Path, nu: Path) -> Tuple[Path, ...]:
    """Minimal common extensions: degree d(mu)∨d(nu), extending both."""
    if mu.r != nu.r:
        raise KGraphError(f"mce needs a common range; got {mu.r!r} and {nu.r!r}")
    key = ("mce", mu, nu)
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    n = degrees.join(mu.d, nu.d)
    out = tuple(
        lam
        for lam in g.paths_of_degree(mu.r, n)
        if g.prefix(lam, mu.d) == mu and g.prefix(lam, nu.d) == nu
    )
    g._cache[key] = out
    g._cache[("mce", nu, mu)] = out
    return out


def lambda_min(g: KGraph, mu: Path, nu: Path) -> Tuple[MinPair, ...]:
    """The continuation pairs (alpha, beta) with mu·alpha = nu·beta minimal."""
    out = []
    for tau in mce(g, mu, nu):
        alpha = g.split(tau, mu.d)[1]
        beta = g.split(tau, nu.d)[1]
        out.append(MinPair(alpha, beta))
    return tuple(sorted(out, key=lambda p: (p.alpha.sort_key(), p.beta.sort_key())))


def ext(g: KGraph, mu: Path, E: Iterable[Path]) -> Tuple[Path, ...]:
    """Continuations of mu that realize a minimal common extension with E."""
    E = frozenset(E)
    if E and common_range(E) != mu.r:
        raise KGraphError("ext needs r(mu) equal to the common range of E")
    memo = ("ext", mu, E)
    hit = g._cache.get(memo)
    if hit is not None:
        return hit
    out = set()
    for nu in E:
        key = ("extc", mu, nu)
        contrib = g._cache.get(key)
        if contrib is None:
            contrib = tuple(g.split(tau, mu.d)[1] for tau in mce(g, mu, nu))
            g._cache[key] = contrib
        out.update(contrib)
    res = sorted_paths(out)
    g._cache[memo] = res
    return res


def vee_closure(g: KGraph, E: Iterable[Path]) -> Tuple[Path, ...]:
    """Least superset of E closed under pairwise minimal common extensions."""
    cur = set(E)
    frontier = list(cur)
    while frontier:
        new: List[Path] = []
        items = sorted(cur, key=Path.sort_key)
        for p in frontier:
            for q in items:
                if p.r != q.r:
                    continue
                for tau in mce(g, p, q):
                    if tau not in cur:
                        new.append(tau)
        cur.update(new)
        frontier = new
    return sorted_paths(cur)


def pi_closure(g: KGraph, G: Iterable[Path]) -> Tuple[Path, ...]:
    """Least superset closed under λ·alpha for degree/source-matched triples."""
    cur = set(G)
    changed = True
    while changed:
        changed = False
        items = sorted(cur, key=Path.sort_key)
        for lam in items:
            for mu in items:
                if lam.d != mu.d or lam.s != mu.s:
                    continue
                for sigma in items:
                    if mu.r != sigma.r:
                        continue
                    for pair in lambda_min(g, mu, sigma):
                        cand = g.compose(lam, pair.alpha)
                        if cand not in cur:
                            cur.add(cand)
                            changed = True
    return sorted_paths(cur)


# -- cap-bounded exhaustiveness ------------------------------------------------


@dataclass
class VertexUniverse:
    """Precomputed capped path data at one vertex, for fast subset scans.

    Bitmask bit j refers to members[j] (the non-identity paths).  For each
    capped path: which members it extends (captured), which members it has
    a common extension with (compat), and the captured-masks of its
    one-edge extensions that leave the cap box.
    """

    vertex: str
    cap: Degree
    paths: Tuple[Path, ...]
    members: Tuple[Path, ...]
    member_index: Dict[Path, int]
    captured: List[int]
    compat: List[int]
    beyond: List[List[int]]

    def mask_of(self, E: Iterable[Path]) -> int:
        m = 0
        for p in E:
            m |= 1 << self.member_index[p]
        return m

    def set_of(self, mask: int) -> PathSet:
        return frozenset(p for j, p in enumerate(self.members) if mask >> j & 1)

    def classify(self, emask: int) -> CertifiedBool:
        """Three-valued exhaustiveness of the member subset given by emask."""
        overflow = False
        for i, lam in enumerate(self.paths):
            if self.captured[i] & emask:
                continue
            if not self.compat[i] & emask:
                return false_certified(lam)
            if not overflow:
                for chmask in self.beyond[i]:
                    if not chmask & emask:
                        overflow = True
                        break
        if overflow:
            return unknown_at_cap(self.cap)
        return true_certified()


def _build_universe(g: KGraph, v: str, cap: Degree) -> VertexUniverse:
    paths = g.paths_up_to(v, cap)
    members = paths[1:]
    midx = {p: j for j, p in enumerate(members)}
    prefix_sets: Dict[Path, set] = {}
    for tau in paths:
        prefix_sets[tau] = {g.prefix(tau, m) for m in degrees.below(tau.d)}
    captured = []
    for lam in paths:
        mask = 0
        for q in prefix_sets[lam]:
            j = midx.get(q)
            if j is not None:
                mask |= 1 << j
        captured.append(mask)
    compat = [0] * len(paths)
    pidx = {p: i for i, p in enumerate(paths)}
    for tau in paths:
        pres = list(prefix_sets[tau])
        for a in pres:
            for b in pres:
                j = midx.get(b)
                if j is not None and degrees.join(a.d, b.d) == tau.d:
                    compat[pidx[a]] |= 1 << j
    beyond: List[List[int]] = []
    for lam in paths:
        masks = []
        for e in g.edges_at(lam.s):
            q = g.compose(lam, g.path([e.eid]))
            if degrees.leq(q.d, cap):
                continue
            qmask = 0
            for mu, j in midx.items():
                if degrees.leq(mu.d, q.d) and g.prefix(q, mu.d) == mu:
                    qmask |= 1 << j
            masks.append(qmask)
        beyond.append(masks)
    return VertexUniverse(v, cap, paths, members, midx, captured, compat, beyond)


def universe(g: KGraph, v: str, cap: Degree) -> VertexUniverse:
    cap = degrees.check(cap, g.k)
    key = ("universe", v, cap)
    hit = g._cache.get(key)
    if hit is None:
        hit = _build_universe(g, v, cap)
        g._cache[key] = hit
    return hit


def is_exhaustive(g: KGraph, E: Iterable[Path], cap: Degree) -> CertifiedBool:
    """Certified decision of whether E is exhaustive at its common range.

    Fast path: when all members fit in the capped universe, one bitmask
    scan answers.  The general route (members beyond the cap) checks the
    same capture/compatibility conditions path by path.
    """
    E = sorted_paths(E)
    if not E:
        raise KGraphError("exhaustiveness needs a nonempty candidate set")
    v = common_range(E)
    cap = degrees.check(cap, g.k)
    if any(p.is_vertex for p in E):
        raise KGraphError("exhaustive sets exclude the vertex identity")
    uni = universe(g, v, cap)
    if all(p in uni.member_index for p in E):
        return uni.classify(uni.mask_of(E))

    def captured(lam: Path) -> bool:
        return any(g.extends(lam, mu) for mu in E)

    def compatible(lam: Path) -> bool:
        return any(mce(g, lam, mu) for mu in E)

    overflow = False
    for lam in uni.paths:
        if captured(lam):
            continue
        if not compatible(lam):
            return false_certified(lam)
        for e in g.edges_at(lam.s):
            q = g.compose(lam, g.path([e.eid]))
            if not degrees.leq(q.d, cap) and not captured(q):
                overflow = True
    if overflow:
        return unknown_at_cap(cap)
    return true_certified()


@dataclass
class FEFamily:
    """Capped finite-exhaustive candidates, per vertex, with certifications."""

    cap: Degree
    by_vertex: Dict[str, Dict[PathSet, CertifiedBool]] = field(default_factory=dict)

    def sets_at(self, v: str) -> Dict[PathSet, CertifiedBool]:
        return self.by_vertex.get(v, {})

    def all_sets(self) -> Dict[PathSet, CertifiedBool]:
        out: Dict[PathSet, CertifiedBool] = {}
        for d in self.by_vertex.values():
            out.update(d)
        return out

    def contains(self, E: PathSet) -> bool:
        for d in self.by_vertex.values():
            if E in d:
                return True
        return False

    def true_sets(self) -> List[PathSet]:
        return [E for E, c in self.all_sets().items() if c.is_true]

    def size(self) -> int:
        return sum(len(d) for d in self.by_vertex.values())


def fe_sets(g: KGraph, v: str, cap: Degree, max_members: int = MAX_FE_MEMBERS) -> FEFamily:
    """All capped subsets of vΛ (identity excluded) that survive the
    exhaustiveness check, tagged TrueCertified or UnknownAtCap."""
    uni = universe(g, v, cap)
    m = len(uni.members)
    if m > max_members:
        raise RuntimeError(
            f"fe enumeration at {v!r} needs 2^{m} subsets; raise max_members to force"
        )
    found: Dict[PathSet, CertifiedBool] = {}
    for emask in range(1, 1 << m):
        cert = uni.classify(emask)
        if not cert.is_false:
            found[uni.set_of(emask)] = cert
    fam = FEFamily(cap=degrees.check(cap, g.k))
    if found:
        fam.by_vertex[v] = found
    return fam


def fe_sets_all(g: KGraph, cap: Degree, max_members: int = MAX_FE_MEMBERS) -> FEFamily:
    fam = FEFamily(cap=degrees.check(cap, g.k))
    for v in g.vertices:
        sub = fe_sets(g, v, cap, max_members=max_members)
        fam.by_vertex.update(sub.by_vertex)
    return fam


def minimal_antichain(g: KGraph, E: Iterable[Path]) -> Tuple[Path, ...]:
    """Members of E that extend no other member; exhaustiveness only
    depends on this antichain."""
    E = sorted_paths(E)
    out = [p for p in E if not any(q != p and g.extends(p, q) for q in E)]
    return tuple(out)
