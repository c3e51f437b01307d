"""Finitely presented higher-rank graphs and their path arithmetic.

A rank-k graph is presented by a k-colored skeleton together with a
complete collection of commuting squares: for every composable pair of
edges of distinct colors there is exactly one way to traverse the same
morphism in the opposite color order.  For k >= 3 the squares must also
satisfy the cube condition (the two ways of fully reversing a tricolored
triple agree), which makes the induced rewriting confluent.

Morphisms ("paths") are kept in a canonical normal form: the edge
sequence sorted by ascending color, computed by bubble-sorting with the
square rules.  Two edge sequences denote the same morphism iff they
normalize identically, so paths can live in sets and dicts.

Composition convention: in ``p = compose(q, t)`` the range of p is the
range of q and the source of q is the range of t; edge sequences read
from the range end toward the source end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import degrees
from .degrees import Degree


class KGraphError(ValueError):
    """Base class for graph/path domain errors."""


class NonComposableError(KGraphError):
    pass


class SegmentBoundsError(KGraphError):
    pass


class MissingSquareError(KGraphError):
    """Raised when normalization needs a square the presentation lacks."""


@dataclass(frozen=True)
class Edge:
    eid: str
    color: int
    r: str
    s: str


@dataclass(frozen=True)
class Skeleton:
    k: int
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]

    @staticmethod
    def build(k: int, vertices: Iterable[str], edges: Iterable[Tuple[str, int, str, str]]) -> "Skeleton":
        if k < 1:
            raise KGraphError(f"rank must be >= 1, got {k}")
        vs = tuple(sorted(set(vertices)))
        es = []
        seen = set()
        for eid, color, r, s in edges:
            if eid in seen:
                raise KGraphError(f"duplicate edge id {eid!r}")
            if eid in vs:
                raise KGraphError(f"edge id {eid!r} collides with a vertex id")
            seen.add(eid)
            es.append(Edge(eid, int(color), r, s))
        es.sort(key=lambda e: e.eid)
        return Skeleton(k, vs, tuple(es))


@dataclass(frozen=True)
class SquareRule:
    """Asserts f∘g = g2∘f2 for bicolored composable edge pairs."""

    lhs: Tuple[str, str]
    rhs: Tuple[str, str]

    def key(self):
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class Path:
    """A morphism in color-ascending normal form.

    ``edges`` reads from the range end to the source end; ``d`` is the
    color multiset of the edge sequence.  Degree-0 paths are vertices.
    """

    r: str
    s: str
    d: Degree
    edges: Tuple[str, ...]

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def sort_key(self):
        return (sum(self.d), self.d, self.edges, self.r)

    def literal(self) -> str:
        return self.r if self.is_vertex else ".".join(self.edges)

    def __repr__(self):
        return f"<{self.literal()}:{self.r}<-{self.s}|{degrees.fmt(self.d)}>"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: Tuple[Tuple[str, Tuple[str, ...]], ...]


def sorted_paths(paths: Iterable[Path]) -> Tuple[Path, ...]:
    return tuple(sorted(set(paths), key=Path.sort_key))


class KGraph:
    """A k-colored skeleton plus its commuting-square presentation.

    Instances are immutable values (internal caches only memoize pure
    derived data), so they are safe to share and to use as dict keys.
    """

    def __init__(self, skeleton: Skeleton, squares: Iterable[SquareRule]):
        self.skeleton = skeleton
        self.squares = tuple(sorted(set(squares), key=SquareRule.key))
        self._edge: Dict[str, Edge] = {e.eid: e for e in skeleton.edges}
        self._vset: FrozenSet[str] = frozenset(skeleton.vertices)
        # edges_at[v][c]: edges of color c with range v, sorted by id
        self._edges_at: Dict[str, Dict[int, List[Edge]]] = {
            v: {c: [] for c in range(1, skeleton.k + 1)} for v in skeleton.vertices
        }
        for e in skeleton.edges:
            if e.r in self._edges_at and 1 <= e.color <= skeleton.k:
                self._edges_at[e.r][e.color].append(e)
        # swap[(a, b)] = (b', a'): the opposite-order traversal of a∘b
        self._swap: Dict[Tuple[str, str], Tuple[str, str]] = {}
        self._swap_conflicts: List[Tuple[str, str]] = []
        for rule in self.squares:
            f, g = rule.lhs
            g2, f2 = rule.rhs
            if not all(x in self._edge for x in (f, g, g2, f2)):
                continue
            for key, val in (((f, g), (g2, f2)), ((g2, f2), (f, g))):
                if key in self._swap and self._swap[key] != val:
                    self._swap_conflicts.append(key)
                self._swap[key] = val
        self._cache: Dict = {}

    # -- identity & hashing ------------------------------------------------

    @property
    def k(self) -> int:
        return self.skeleton.k

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.skeleton.vertices

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self.skeleton.edges

    def cache_key(self):
        key = self._cache.get("key")
        if key is None:
            key = (
                self.skeleton.k,
                self.skeleton.vertices,
                tuple((e.eid, e.color, e.r, e.s) for e in self.skeleton.edges),
                tuple(sq.key() for sq in self.squares),
            )
            self._cache["key"] = key
        return key

    def __eq__(self, other):
        return isinstance(other, KGraph) and self.cache_key() == other.cache_key()

    def __hash__(self):
        return hash(self.cache_key())

    # -- basic accessors ----------------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in self._vset

    def require_vertex(self, v: str) -> None:
        if v not in self._vset:
            raise KGraphError(f"unknown vertex {v!r}")

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge[eid]
        except KeyError:
            raise KGraphError(f"unknown edge {eid!r}") from None

    def edges_at(self, v: str) -> List[Edge]:
        """All edges with range v, sorted by (color, id)."""
        per = self._edges_at.get(v, {})
        return [e for c in sorted(per) for e in per[c]]

    def identity(self, v: str) -> Path:
        self.require_vertex(v)
        return Path(v, v, degrees.zero(self.k), ())

    # -- normal forms --------------------------------------------------------

    def _chain_ok(self, seq: Sequence[str]) -> bool:
        return all(self._edge[a].s == self._edge[b].r for a, b in zip(seq, seq[1:]))

    def _swap_at(self, seq: List[str], i: int) -> None:
        key = (seq[i], seq[i + 1])
        try:
            seq[i], seq[i + 1] = self._swap[key]
        except KeyError:
            raise MissingSquareError(
                f"no square for composable pair {key[0]}∘{key[1]}"
            ) from None

    def _normalize(self, seq: Sequence[str]) -> Tuple[str, ...]:
        e = list(seq)
        swapped = True
        while swapped:
            swapped = False
            for i in range(len(e) - 1):
                if self._edge[e[i]].color > self._edge[e[i + 1]].color:
                    self._swap_at(e, i)
                    swapped = True
        return tuple(e)

    def path(self, edge_ids: Sequence[str], at: Optional[str] = None) -> Path:
        """Build the normal-form path for an edge sequence (or a vertex id)."""
        if not edge_ids:
            if at is None:
                raise KGraphError("empty path needs a vertex")
            return self.identity(at)
        for eid in edge_ids:
            self.edge(eid)
        if not self._chain_ok(edge_ids):
            raise NonComposableError(f"edge sequence {list(edge_ids)} is not composable")
        d = [0] * self.k
        for eid in edge_ids:
            d[self._edge[eid].color - 1] += 1
        norm = self._normalize(edge_ids)
        return Path(self._edge[norm[0]].r, self._edge[norm[-1]].s, tuple(d), norm)

    # -- composition and segments --------------------------------------------

    def compose(self, p: Path, q: Path) -> Path:
        if p.s != q.r:
            raise NonComposableError(
                f"cannot compose: source {p.s!r} of {p.literal()} != range {q.r!r} of {q.literal()}"
            )
        if p.is_vertex:
            return q
        if q.is_vertex:
            return p
        return Path(p.r, q.s, degrees.add(p.d, q.d), self._normalize(p.edges + q.edges))

    def split(self, p: Path, m: Degree) -> Tuple[Path, Path]:
        """The unique factorization p = prefix·suffix with d(prefix) = m."""
        if not degrees.leq(m, p.d):
            raise SegmentBoundsError(f"split degree {m} exceeds d(p) = {p.d}")
        key = ("split", p, m)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        rest = list(p.edges)
        pre: List[str] = []
        for c in range(1, self.k + 1):
            for _ in range(m[c - 1]):
                i = next(j for j, eid in enumerate(rest) if self._edge[eid].color == c)
                while i > 0:
                    self._swap_at(rest, i - 1)
                    i -= 1
                pre.append(rest.pop(0))
        mid = self._edge[rest[0]].r if rest else p.s
        prefix = Path(p.r, mid, m, tuple(pre))
        suffix = Path(mid, p.s, degrees.sub(p.d, m), self._normalize(rest))
        self._cache[key] = (prefix, suffix)
        return prefix, suffix

    def segment(self, p: Path, m: Degree, n: Degree) -> Path:
        """The factor p(m, n) of degree n - m between the two cut points."""
        if not (degrees.leq(m, n) and degrees.leq(n, p.d)):
            raise SegmentBoundsError(f"need m <= n <= d(p); got {m}, {n}, {p.d}")
        _, tail = self.split(p, m)
        seg, _ = self.split(tail, degrees.sub(n, m))
        return seg

    def prefix(self, p: Path, m: Degree) -> Path:
        return self.split(p, m)[0]

    def extends(self, p: Path, q: Path) -> bool:
        """True iff q is an initial segment of p (p ∈ qΛ)."""
        if p.r != q.r or not degrees.leq(q.d, p.d):
            return False
        return self.prefix(p, q.d) == q

    # -- path enumeration ------------------------------------------------------

    def paths_of_degree(self, v: str, n: Degree) -> Tuple[Path, ...]:
        """All normal-form paths with range v and degree exactly n."""
        self.require_vertex(v)
        n = degrees.check(n, self.k)
        key = ("pod", v, n)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        seqs: List[Tuple[str, List[str]]] = [(v, [])]
        for c in range(1, self.k + 1):
            for _ in range(n[c - 1]):
                nxt = []
                for vert, acc in seqs:
                    for e in self._edges_at.get(vert, {}).get(c, []):
                        nxt.append((e.s, acc + [e.eid]))
                seqs = nxt
            if not seqs:
                break
        out = sorted_paths(
            Path(v, vert, n, tuple(acc)) if acc else self.identity(v) for vert, acc in seqs
        )
        self._cache[key] = out
        return out

    def paths_up_to(self, v: str, cap: Degree) -> Tuple[Path, ...]:
        """All paths with range v and degree <= cap, canonically sorted."""
        self.require_vertex(v)
        cap = degrees.check(cap, self.k)
        key = ("put", v, cap)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        acc: List[Path] = []
        for n in degrees.below(cap):
            acc.extend(self.paths_of_degree(v, n))
        out = sorted_paths(acc)
        self._cache[key] = out
        return out

    # -- vertex reachability (v <= w iff vΛw nonempty) ---------------------------

    def reach(self) -> Dict[str, FrozenSet[str]]:
        """reach()[v] = {w : vΛw nonempty}, computed on the skeleton."""
        hit = self._cache.get("reach")
        if hit is not None:
            return hit
        succ: Dict[str, set] = {v: {v} for v in self.vertices}
        adj: Dict[str, set] = {v: set() for v in self.vertices}
        for e in self.edges:
            if e.r in adj and e.s in self._vset:
                adj[e.r].add(e.s)
        for v in self.vertices:
            stack = [v]
            while stack:
                u = stack.pop()
                for w in adj.get(u, ()):
                    if w not in succ[v]:
                        succ[v].add(w)
                        stack.append(w)
        out = {v: frozenset(ws) for v, ws in succ.items()}
        self._cache["reach"] = out
        return out

    def reaches(self, v: str, w: str) -> bool:
        return w in self.reach().get(v, frozenset())


def validate_kgraph(g: KGraph) -> ValidationReport:
    """Check completeness, unambiguity and (k >= 3) cube consistency.

    Violations are data, deterministically sorted; nothing raises here.
    """
    violations: List[Tuple[str, Tuple[str, ...]]] = []
    sk = g.skeleton
    vset = set(sk.vertices)
    good_edges = {}
    for e in sk.edges:
        bad = [x for x in (e.r, e.s) if x not in vset]
        if bad or not 1 <= e.color <= sk.k:
            violations.append(("dangling-edge", (e.eid,) + tuple(bad)))
        else:
            good_edges[e.eid] = e

    well_formed = []
    for rule in g.squares:
        f, gg, g2, f2 = rule.lhs[0], rule.lhs[1], rule.rhs[0], rule.rhs[1]
        ids = (f, gg, g2, f2)
        if not all(x in good_edges for x in ids):
            violations.append(("malformed-square", ids))
            continue
        ef, eg, eg2, ef2 = (good_edges[x] for x in ids)
        shape_ok = (
            ef.color != eg.color
            and ef.s == eg.r
            and eg2.s == ef2.r
            and ef.color == ef2.color
            and eg.color == eg2.color
            and ef.r == eg2.r
            and eg.s == ef2.s
        )
        if not shape_ok:
            violations.append(("malformed-square", ids))
        else:
            well_formed.append(rule)

    # completeness / unambiguity over well-formed rules
    swap: Dict[Tuple[str, str], Tuple[str, str]] = {}
    dup: set = set()
    for rule in well_formed:
        f, gg = rule.lhs
        g2, f2 = rule.rhs
        for key, val in (((f, gg), (g2, f2)), ((g2, f2), (f, gg))):
            if key in swap and swap[key] != val:
                dup.add(key)
            swap[key] = val
    bicolored = []
    for a in good_edges.values():
        for b in good_edges.values():
            if a.color != b.color and a.s == b.r:
                bicolored.append((a.eid, b.eid))
    for pair in sorted(bicolored):
        if pair not in swap:
            violations.append(("incomplete-square", pair))
    for pair in sorted(dup):
        violations.append(("duplicate-square", pair))

    if sk.k >= 3 and not dup:
        def route(seq, positions):
            e = list(seq)
            for i in positions:
                key = (e[i], e[i + 1])
                if key not in swap:
                    return None
                e[i], e[i + 1] = swap[key]
            return tuple(e)

        for a in good_edges.values():
            for b in good_edges.values():
                if b.r != a.s or b.color == a.color:
                    continue
                for c in good_edges.values():
                    if c.r != b.s or c.color in (a.color, b.color):
                        continue
                    triple = (a.eid, b.eid, c.eid)
                    left = route(triple, (0, 1, 0))
                    right = route(triple, (1, 0, 1))
                    if left is not None and right is not None and left != right:
                        violations.append(("cube-inconsistent", triple))

    violations = sorted(set(violations))
    return ValidationReport(ok=not violations, violations=tuple(violations))


# Functional aliases matching the operation names used across the package.

def compose(g: KGraph, p: Path, q: Path) -> Path:
    return g.compose(p, q)


def segment(g: KGraph, p: Path, m: Degree, n: Degree) -> Path:
    return g.segment(p, m, n)


def paths_of_degree(g: KGraph, v: str, n: Degree) -> Tuple[Path, ...]:
    return g.paths_of_degree(v, n)


def paths_up_to(g: KGraph, v: str, cap: Degree) -> Tuple[Path, ...]:
    return g.paths_up_to(v, cap)
