"""Minimal Conway families and the canonical decomposition.

The pipeline runs in four stages: grow a maximal family of pairwise
disjoint, pairwise non-parallel, incompressible Haseman circles; shrink
it to the minimal Conway family C_m (every complementary subdiagram a
singleton, band or basic diagram); strip the singleton boundaries to
get the canonical family C_can; and assemble the pieces, absorbing each
singleton into the neighboring band or basic region, into twisted band
diagrams and jewels grouped into arborescent and polyhedral components.

Distinct circle classes are never parallel, so family construction only
ever tests joint realizability; parallelism reduces to key equality and
is asserted, not searched for.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

from .arrangement import (
    Arrangement,
    HasemanCircle,
    SubMap,
    canonical_circle,
    circle_key,
    realize_family,
    vertex_boundary_circle,
)
from .errors import (
    InternalInconsistency,
    MalformedInput,
    NotConway,
    Rule3Violation,
)
from .haseman import enumerate_haseman, is_boundary_parallel
from .projection import LinkProjection, is_alternating, is_prime


class FamilyKind(str, Enum):
    """Provenance tag of a circle family."""

    GENERAL = "general"
    MAXIMAL = "maximal"
    MINIMAL_CONWAY = "minimal-conway"
    CANONICAL = "canonical"


@dataclass(frozen=True)
class CircleFamily:
    """A family of pairwise disjoint, non-parallel Haseman circles.

    Circles are stored as canonical representatives sorted by class
    key, deduplicated, so equal families compare equal and all
    downstream iteration orders are reproducible.
    """

    circles: tuple[HasemanCircle, ...]
    kind: FamilyKind = FamilyKind.GENERAL

    def __post_init__(self) -> None:
        seen: dict[tuple, HasemanCircle] = {}
        for c in self.circles:
            seen.setdefault(circle_key(c), canonical_circle(c))
        ordered = tuple(seen[k] for k in sorted(seen))
        object.__setattr__(self, "circles", ordered)

    def __iter__(self) -> Iterator[HasemanCircle]:
        return iter(self.circles)

    def __len__(self) -> int:
        return len(self.circles)


class SubdiagramClass(str, Enum):
    """The four shapes a complementary region can take."""

    SINGLETON = "singleton"
    BAND = "band"
    BASIC = "basic"
    OTHER = "other"


@dataclass(frozen=True)
class SubDiagram:
    """One complementary region of a realized family."""

    id: int
    sub: SubMap
    kind: SubdiagramClass

    @property
    def boundary(self) -> tuple[tuple[int, int], ...]:
        """(circle index, side) pairs of the bounding circles."""
        return self.sub.marker_circles

    @property
    def crossings(self) -> tuple[int, ...]:
        return self.sub.crossing_ids

    @property
    def strands(self) -> tuple[tuple[int, int], ...]:
        return self.sub.proj.edges


@dataclass(frozen=True)
class TwistedBandDiagram:
    """A band diagram with its singletons absorbed as signed twists.

    boundary lists the canonical circles in band order; weights[i] is
    the signed twist count in the sector between boundary[i-1] and
    boundary[i] (a closed band has no boundary and one weight).  twists
    holds the crossings of each sector in the same order.
    """

    kind = "band"

    boundary: tuple[HasemanCircle, ...]
    weights: tuple[int, ...]
    twists: tuple[tuple[int, ...], ...]
    regions: tuple[int, ...]
    band_region: int

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    @property
    def rule4_ok(self) -> bool:
        signs = {w > 0 for w in self.weights if w != 0}
        return len(signs) <= 1


@dataclass(frozen=True)
class Jewel:
    """A basic diagram with its absorbed singletons."""

    kind = "jewel"

    boundary: tuple[HasemanCircle, ...]
    crossings: tuple[int, ...]
    regions: tuple[int, ...]
    basic_region: int


@dataclass(frozen=True)
class Component:
    """A maximal connected union of pieces of one kind."""

    kind: str
    pieces: tuple[int, ...]


@dataclass(frozen=True)
class Decomposition:
    """The full canonical decomposition of a projection."""

    proj: LinkProjection
    minimal: CircleFamily
    canonical: CircleFamily
    arrangement: Arrangement
    subs: tuple[SubDiagram, ...]
    pieces: tuple[Union[TwistedBandDiagram, Jewel], ...]
    piece_of_region: tuple[int, ...]
    components: tuple[Component, ...]

    @property
    def rule4_ok(self) -> bool:
        return all(
            p.rule4_ok for p in self.pieces if isinstance(p, TwistedBandDiagram)
        )


# ============================================================
# Subdiagram classification
# ============================================================

def _band_cycle(sub: SubMap) -> tuple[int, ...] | None:
    """Boundary circles in band order, or None if not a band pattern.

    A band needs no crossings, at least 3 boundary circles, a strand
    multigraph forming one cycle with every consecutive pair joined by
    exactly two strands, and each strand pair co-bounding a bigon face
    (two strands winding apart along the sphere are not a band).
    """
    p = sub.proj
    if sub.n_crossings or len(sub.marker_circles) < 3:
        return None
    nv = p.c
    nbrs: list[dict[int, list[int]]] = [dict() for _ in range(nv)]
    for e, (a, b) in enumerate(p.edges):
        u, v = a >> 2, b >> 2
        if u == v:
            return None
        nbrs[u].setdefault(v, []).append(e)
        nbrs[v].setdefault(u, []).append(e)
    for v in range(nv):
        if len(nbrs[v]) != 2 or any(len(es) != 2 for es in nbrs[v].values()):
            return None
    bigon_pairs = set()
    for f in p.faces:
        if f.degree == 2:
            d1, d2 = f.boundary
            bigon_pairs.add(frozenset({p.edge_of[d1], p.edge_of[d2]}))
    for v in range(nv):
        for es in nbrs[v].values():
            if frozenset(es) not in bigon_pairs:
                return None
    # Trace the cycle; it must cover every vertex.
    start = 0
    prev, cur = start, min(nbrs[start])
    order = [start]
    while cur != start:
        order.append(cur)
        nxt = [w for w in nbrs[cur] if w != prev]
        if len(nxt) != 1:
            return None
        prev, cur = cur, nxt[0]
    if len(order) != nv:
        return None
    return tuple(order)


def classify_subdiagram(
    d: Union[SubDiagram, SubMap],
) -> SubdiagramClass:
    """Which of the four shapes a region is.

    A singleton is one crossing behind one circle.  A band is a closed
    chain of at least three boundary circles joined by parallel strand
    pairs.  Basic means crossing-free, not one of the excluded small
    shapes, and every interior Haseman circle boundary parallel; note a
    three-circle band always passes that circle test (a circle around
    two of its boundaries is the push-off of the third), which is
    exactly why bands with v = 3 are excluded from it.
    """
    sub = d.sub if isinstance(d, SubDiagram) else d
    v, c = len(sub.marker_circles), sub.n_crossings
    if v == 1 and c == 1:
        return SubdiagramClass.SINGLETON
    band = _band_cycle(sub) is not None
    if band and v >= 3:
        return SubdiagramClass.BAND
    if c == 0 and v != 1 and not (band and v == 3):
        if all(is_boundary_parallel(g, sub) for g in enumerate_haseman(sub)):
            return SubdiagramClass.BASIC
    return SubdiagramClass.OTHER


def _realized_subdiagrams(
    p: LinkProjection, fam: CircleFamily
) -> tuple[Arrangement, tuple[SubDiagram, ...]]:
    arr = realize_family(p, fam.circles)
    if arr is None:
        raise MalformedInput("family has no disjoint realization")
    out = []
    for r in range(arr.n_regions):
        sub = arr.submap(r)
        out.append(SubDiagram(r, sub, classify_subdiagram(sub)))
    return arr, tuple(out)


def subdiagrams(
    p: LinkProjection, family: Union[CircleFamily, tuple]
) -> tuple[SubDiagram, ...]:
    """One classified SubDiagram per complementary region of the family."""
    fam = family if isinstance(family, CircleFamily) else CircleFamily(tuple(family))
    return _realized_subdiagrams(p, fam)[1]


# ============================================================
# Twists and spires
# ============================================================

def _bigon_graph(p: LinkProjection):
    """Bigon adjacency between crossings, with one face per pair."""
    nbrs: list[dict[int, int]] = [dict() for _ in range(p.c)]
    for f in p.faces:
        if f.degree != 2:
            continue
        d1, d2 = f.boundary
        x, y = d1 >> 2, d2 >> 2
        if x == y:
            continue
        if y not in nbrs[x]:
            nbrs[x][y] = f.id
            nbrs[y][x] = f.id
    for x in range(p.c):
        if len(nbrs[x]) > 2:
            raise InternalInconsistency(
                f"crossing {x} sits in bigons with {len(nbrs[x])} partners"
            )
    return nbrs


def _twist_runs(p: LinkProjection) -> tuple[tuple[int, ...], ...]:
    """Maximal open twists: path components of the bigon graph.

    Cycle components (closed chains) have no surrounding circle and are
    not returned; the family machinery treats their crossings like any
    others.
    """
    nbrs = _bigon_graph(p)
    ends = sorted(x for x in range(p.c) if len(nbrs[x]) == 1)
    seen: set[int] = set()
    runs = []
    for x in ends:
        if x in seen:
            continue
        run = [x]
        seen.add(x)
        while True:
            nxt = [y for y in nbrs[run[-1]] if y not in seen]
            if not nxt:
                break
            run.append(nxt[0])
            seen.add(nxt[0])
        if len(run) >= 2:
            runs.append(tuple(run))
    return tuple(runs)


def _free_end(p: LinkProjection, x: int, bigon_face: int):
    """The two dart slots of x not consumed by the given bigon."""
    d = next(d for d in p.faces[bigon_face].boundary if d >> 2 == x)
    s = d & 3
    return (s + 1) & 3, (s + 2) & 3


def _encircle_run(
    p: LinkProjection, run: tuple[int, ...], nbrs
) -> tuple[HasemanCircle, ...]:
    """Candidate circles surrounding a consecutive twist run.

    Two doors cross the free strand ends at each end of the run and the
    side faces are the twist's two rails.  When the rails cannot be
    told apart both matchings are returned; impossible candidates are
    weeded out later by class filtering.
    """
    x1, xk = run[0], run[-1]
    sa, sb = _free_end(p, x1, nbrs[x1][run[1]])
    sc, sd = _free_end(p, xk, nbrs[xk][run[-2]])
    da, db = 4 * x1 + sa, 4 * x1 + sb
    dc, dd = 4 * xk + sc, 4 * xk + sd
    f1 = p.corner_face(x1, sa)
    rail_out = p.corner_face(x1, sb)
    rail_back = p.corner_face(x1, (sa - 1) & 3)
    f3 = p.corner_face(xk, sc)
    rail_a = p.corner_face(xk, (sc - 1) & 3)
    rail_b = p.corner_face(xk, sd)
    orders = []
    if rail_out == rail_a and rail_back == rail_b:
        orders.append((da, db, dc, dd))
    if rail_out == rail_b and rail_back == rail_a:
        orders.append((da, db, dd, dc))
    out = []
    for darts in orders:
        doors = []
        for d in darts:
            e = p.edge_of[d]
            twice = sum(1 for d2 in darts if p.edge_of[d2] == e) == 2
            rank = 0 if (not twice or d == p.edges[e][0]) else 1
            doors.append((e, rank))
        faces = (f1, rail_out, f3, rail_back)
        if len(set(doors)) == 4:
            out.append(HasemanCircle(tuple(doors), faces))
    return tuple(out)


# ============================================================
# Family construction
# ============================================================

def maximal_family(p: LinkProjection, seed: int | None = None) -> CircleFamily:
    """Grows a family no enumerated circle outside spires can extend.

    Spire circles (around each maximal open twist) and all singleton
    boundaries go in first; remaining candidates follow in canonical or
    seed-shuffled order.  Circles strictly inside a spire, around a
    proper sub-run of its twist, are skipped: they never contribute to
    the canonical family.  Distinct classes are never parallel, so the
    only compatibility test is joint realizability.

    Args:
        p: a connected prime projection.
        seed: None for canonical candidate order, else a shuffle seed.

    Raises:
        MalformedInput: p is not prime.
        InternalInconsistency: the result has a crossing-free region
            with two boundary circles, which would mean two parallel
            circles slipped in.
    """
    if not is_prime(p):
        raise MalformedInput("projection must be prime")
    pool = {circle_key(c): c for c in enumerate_haseman(p)}
    nbrs = _bigon_graph(p)
    runs = _twist_runs(p)
    spire: list[HasemanCircle] = []
    skip: set[tuple] = set()
    for run in runs:
        for c in _encircle_run(p, run, nbrs):
            spire.append(c)
        for i in range(len(run)):
            for j in range(i + 1, len(run)):
                if j - i + 1 == len(run):
                    continue
                for c in _encircle_run(p, run[i : j + 1], nbrs):
                    skip.add(circle_key(c))
    ordered = list(spire)
    ordered += [vertex_boundary_circle(p, x) for x in range(p.c)]
    rest = [pool[k] for k in sorted(pool)]
    if seed is not None:
        random.Random(seed).shuffle(rest)
    ordered += rest
    family: list[HasemanCircle] = []
    keys: set[tuple] = set()
    for c in ordered:
        k = circle_key(c)
        if k in keys or k not in pool or k in skip:
            continue
        if realize_family(p, tuple(family) + (pool[k],)) is not None:
            family.append(pool[k])
            keys.add(k)
    fam = CircleFamily(tuple(family), FamilyKind.MAXIMAL)
    arr = realize_family(p, fam.circles)
    if arr is None:
        raise InternalInconsistency("maximal family lost realizability")
    for r in range(arr.n_regions):
        sub = arr.submap(r)
        if sub.n_crossings == 0 and len(sub.marker_circles) == 2:
            raise InternalInconsistency(
                "two parallel circles produced an empty annulus region"
            )
    return fam


def _region_stats(arr: Arrangement) -> list[tuple[int, int]]:
    """(crossings, boundary circles) of every region."""
    out = []
    for r in range(arr.n_regions):
        sub = arr.submap(r)
        out.append((sub.n_crossings, len(sub.marker_circles)))
    return out


def _fingerprint(circles: tuple[HasemanCircle, ...], sub: SubMap) -> tuple:
    return (
        sub.crossing_ids,
        tuple(sorted((circle_key(circles[k]), s) for k, s in sub.marker_circles)),
    )


def _region_kinds(
    p: LinkProjection,
    circles: tuple[HasemanCircle, ...],
    cache: dict,
) -> tuple[Arrangement, list[SubdiagramClass]]:
    arr = realize_family(p, circles)
    if arr is None:
        raise MalformedInput("family has no disjoint realization")
    kinds = []
    for r in range(arr.n_regions):
        sub = arr.submap(r)
        fp = _fingerprint(circles, sub)
        if fp not in cache:
            cache[fp] = classify_subdiagram(sub)
        kinds.append(cache[fp])
    return arr, kinds


_CONWAY = {
    SubdiagramClass.SINGLETON,
    SubdiagramClass.BAND,
    SubdiagramClass.BASIC,
}


def minimize(
    p: LinkProjection, family: Union[CircleFamily, tuple]
) -> CircleFamily:
    """Shrinks a Conway family to the minimal one, C_m.

    Circles are trial-removed in canonical order until a fixpoint:
    removing any survivor would leave some region outside
    singleton/band/basic.  Removing a circle only merges its two
    flanking regions, so a removal whose merged region keeps at least
    one crossing is decided arithmetically: it stays Conway only if the
    merge is exactly one crossing behind one circle.

    Raises:
        NotConway: the input family is not Conway.
        MalformedInput: the input is not jointly realizable.
    """
    fam = family if isinstance(family, CircleFamily) else CircleFamily(tuple(family))
    circles = list(fam.circles)
    cache: dict = {}
    arr, kinds = _region_kinds(p, tuple(circles), cache)
    if any(k not in _CONWAY for k in kinds):
        raise NotConway(
            "family leaves a region that is neither singleton, band nor basic"
        )
    stats = _region_stats(arr)
    changed = True
    while changed:
        changed = False
        for i in range(len(circles)):
            right, left = arr.circle_regions(i)
            cm = stats[right][0] + stats[left][0]
            vm = stats[right][1] + stats[left][1] - 2
            if cm >= 1:
                ok = cm == 1 and vm == 1
            else:
                trial = tuple(circles[:i] + circles[i + 1 :])
                _, tkinds = _region_kinds(p, trial, cache)
                ok = all(k in _CONWAY for k in tkinds)
            if ok:
                del circles[i]
                arr, kinds = _region_kinds(p, tuple(circles), cache)
                stats = _region_stats(arr)
                changed = True
                break
    return CircleFamily(tuple(circles), FamilyKind.MINIMAL_CONWAY)


def canonical_family(
    p: LinkProjection, c_m: Union[CircleFamily, tuple]
) -> CircleFamily:
    """C_can: the minimal family minus all singleton boundaries."""
    fam = c_m if isinstance(c_m, CircleFamily) else CircleFamily(tuple(c_m))
    arr, subs = _realized_subdiagrams(p, fam)
    keep = []
    for i, c in enumerate(fam.circles):
        flanks = arr.circle_regions(i)
        if all(
            subs[r].kind is not SubdiagramClass.SINGLETON for r in flanks
        ):
            keep.append(c)
    return CircleFamily(tuple(keep), FamilyKind.CANONICAL)


# ============================================================
# Assembly
# ============================================================

def _singleton_sign(
    p: LinkProjection,
    arr: Arrangement,
    band_sub: SubMap,
    sing_sub: SubMap,
    k: int,
) -> int:
    """Sign of a singleton as seen from its band, per the band corners.

    The band enters and leaves the singleton's circle through two
    strand pairs; the two sectors of the crossing facing along the band
    are the band-interior corners.  The sign is +1 exactly when those
    sectors carry the label matching the over-strand, which reduces to
    comparing the corner parity with the over bit.
    """
    bi = [kk for kk, _ in band_sub.marker_circles].index(k)
    mv_b = band_sub.n_crossings + bi
    side_b = band_sub.marker_circles[bi][1]
    bp = band_sub.proj
    nb = [bp.mate[4 * mv_b + s] >> 2 for s in range(4)]
    s0 = next(
        (s for s in range(4) if nb[s] == nb[(s + 1) & 3]),
        None,
    )
    if s0 is None or nb[(s0 + 2) & 3] != nb[(s0 + 3) & 3]:
        raise InternalInconsistency(
            f"marker of circle {k} lacks the band slot pattern"
        )
    arc = s0 if side_b == 1 else (3 - s0) & 3
    si = [kk for kk, _ in sing_sub.marker_circles].index(k)
    mv_s = sing_sub.n_crossings + si
    side_s = sing_sub.marker_circles[si][1]
    u = arc if side_s == 1 else (3 - arc) & 3
    sp = sing_sub.proj
    x = sing_sub.crossing_ids[0]
    ju = sp.mate[4 * mv_s + u]
    jv = sp.mate[4 * mv_s + ((u + 1) & 3)]
    if ju >> 2 != 0 or jv >> 2 != 0:
        raise InternalInconsistency("singleton region has an indirect strand")
    ju, jv = ju & 3, jv & 3
    if (ju + 1) & 3 == jv:
        q = ju
    elif (jv + 1) & 3 == ju:
        q = jv
    else:
        raise InternalInconsistency("band corners of a singleton not adjacent")
    return 1 if (q & 1) == p.over[x] else -1


def assemble(
    p: LinkProjection,
    c_m: Union[CircleFamily, tuple],
    c_can: Union[CircleFamily, tuple],
) -> Decomposition:
    """Builds the decomposition: pieces, weights, signs and components.

    Band regions and their singletons become twisted band diagrams with
    one signed weight per sector between consecutive canonical circles;
    basic regions and their singletons become jewels.  Components join
    pieces of one kind across shared canonical circles.

    Raises:
        Rule3Violation: one twist carries crossings of opposite signs.
        NotConway: some region is not singleton/band/basic.
        MalformedInput: the families are inconsistent with each other.
        InternalInconsistency: bookkeeping invariants fail.
    """
    fam = c_m if isinstance(c_m, CircleFamily) else CircleFamily(tuple(c_m))
    can = c_can if isinstance(c_can, CircleFamily) else CircleFamily(tuple(c_can))
    circles = fam.circles
    arr, subs = _realized_subdiagrams(p, fam)
    kinds = [s.kind for s in subs]
    if any(k not in _CONWAY for k in kinds):
        raise NotConway("minimal family input is not Conway")

    flank = [arr.circle_regions(i) for i in range(len(circles))]
    sing_circle = [
        any(kinds[r] is SubdiagramClass.SINGLETON for r in flank[i])
        for i in range(len(circles))
    ]
    derived_can = {
        circle_key(circles[i]) for i in range(len(circles)) if not sing_circle[i]
    }
    if derived_can != {circle_key(c) for c in can.circles}:
        raise MalformedInput(
            "canonical family does not match the minimal family's "
            "non-singleton circles"
        )

    # Group regions across singleton boundaries.
    parent = list(range(arr.n_regions))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(len(circles)):
        if sing_circle[i]:
            a, b = (find(r) for r in flank[i])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for r in range(arr.n_regions):
        groups.setdefault(find(r), []).append(r)

    def crossing_of_singleton(r: int) -> int:
        return subs[r].crossings[0]

    pieces: list[Union[TwistedBandDiagram, Jewel]] = []
    piece_of_region = [-1] * arr.n_regions
    for root in sorted(groups):
        members = sorted(groups[root])
        core = [r for r in members if kinds[r] is not SubdiagramClass.SINGLETON]
        if len(core) > 1:
            raise InternalInconsistency(
                f"group {members} holds {len(core)} non-singleton regions"
            )
        idx = len(pieces)
        for r in members:
            piece_of_region[r] = idx

        if not core:
            # Two singletons sharing the one circle: the closed chain
            # of two crossings.  Both band readings coexist on it, so
            # the alternating case is emitted with the positive sign.
            xs = tuple(sorted(crossing_of_singleton(r) for r in members))
            if len(members) != 2 or p.c != 2:
                raise InternalInconsistency(
                    f"all-singleton group {members} is not the 2-chain"
                )
            if not is_alternating(p):
                raise Rule3Violation(
                    "the two crossings of the closed 2-chain have opposite signs"
                )
            pieces.append(
                TwistedBandDiagram((), (2,), (xs,), tuple(members), -1)
            )
            continue

        r0 = core[0]
        if kinds[r0] is SubdiagramClass.BASIC:
            bcircles = sorted(
                (circle_key(circles[k]), circles[k])
                for k, _ in subs[r0].boundary
                if not sing_circle[k]
            )
            xs = tuple(
                sorted(
                    crossing_of_singleton(r)
                    for r in members
                    if r != r0
                )
            )
            pieces.append(
                Jewel(tuple(c for _, c in bcircles), xs, tuple(members), r0)
            )
            continue

        # Twisted band diagram.
        bsub = subs[r0].sub
        cyc = _band_cycle(bsub)
        if cyc is None:
            raise InternalInconsistency(f"band region {r0} lost its pattern")
        ring = []
        for mv in cyc:
            k = bsub.marker_circles[mv - bsub.n_crossings][0]
            if sing_circle[k]:
                sr = next(
                    r for r in flank[k] if kinds[r] is SubdiagramClass.SINGLETON
                )
                sign = _singleton_sign(p, arr, bsub, subs[sr].sub, k)
                ring.append(("tw", crossing_of_singleton(sr), sign))
            else:
                ring.append(("can", k))
        can_pos = [i for i, t in enumerate(ring) if t[0] == "can"]

        def sector(xs: list[tuple[int, int]]) -> tuple[int, tuple[int, ...]]:
            signs = {s for _, s in xs}
            if len(signs) > 1:
                raise Rule3Violation(
                    "a twist holds crossings of both signs: "
                    f"{sorted(x for x, _ in xs)}"
                )
            if not xs:
                return 0, ()
            return len(xs) * signs.pop(), tuple(x for x, _ in xs)

        if not can_pos:
            xs = [(t[1], t[2]) for t in ring]
            w, tw = sector(xs)
            pieces.append(
                TwistedBandDiagram((), (w,), (tw,), tuple(members), r0)
            )
        else:
            # Start at the lowest canonical circle; of the two cyclic
            # directions take the lexicographically smaller index tour.
            ks = [ring[i][1] for i in can_pos]
            start = can_pos[ks.index(min(ks))]
            n = len(ring)
            fwd = [ring[(start + i) % n] for i in range(n)]
            bwd = [ring[(start - i) % n] for i in range(n)]

            def tour_indices(tour) -> list[int]:
                return [t[1] for t in tour if t[0] == "can"]

            tour = fwd if tour_indices(fwd) <= tour_indices(bwd) else bwd
            boundary = []
            weights = []
            twists = []
            cur: list[tuple[int, int]] = []
            for t in tour[1:] + tour[:1]:
                if t[0] == "tw":
                    cur.append((t[1], t[2]))
                else:
                    w, tw = sector(cur)
                    weights.append(w)
                    twists.append(tw)
                    boundary.append(circles[t[1]])
                    cur = []
            # Rotate so the anchor circle leads and weights[i] stays the
            # sector between boundary[i-1] and boundary[i].
            boundary = boundary[-1:] + boundary[:-1]
            weights = weights[-1:] + weights[:-1]
            twists = twists[-1:] + twists[:-1]
            pieces.append(
                TwistedBandDiagram(
                    tuple(boundary),
                    tuple(weights),
                    tuple(twists),
                    tuple(members),
                    r0,
                )
            )

    total = sum(
        sum(abs(w) for w in pc.weights)
        if isinstance(pc, TwistedBandDiagram)
        else len(pc.crossings)
        for pc in pieces
    )
    if total != p.c:
        raise InternalInconsistency(
            f"piece weights account for {total} of {p.c} crossings"
        )

    # Components: pieces of one kind joined across canonical circles.
    pparent = list(range(len(pieces)))

    def pfind(a: int) -> int:
        while pparent[a] != a:
            pparent[a] = pparent[pparent[a]]
            a = pparent[a]
        return a

    for i in range(len(circles)):
        if sing_circle[i]:
            continue
        pa, pb = (piece_of_region[r] for r in flank[i])
        if pieces[pa].kind == pieces[pb].kind:
            ra, rb = pfind(pa), pfind(pb)
            if ra != rb:
                pparent[max(ra, rb)] = min(ra, rb)
    comp: dict[int, list[int]] = {}
    for i in range(len(pieces)):
        comp.setdefault(pfind(i), []).append(i)
    components = tuple(
        Component(
            "arborescent" if pieces[root].kind == "band" else "polyhedral",
            tuple(sorted(members)),
        )
        for root, members in sorted(comp.items())
    )

    return Decomposition(
        proj=p,
        minimal=fam,
        canonical=can,
        arrangement=arr,
        subs=subs,
        pieces=tuple(pieces),
        piece_of_region=tuple(piece_of_region),
        components=components,
    )


def decompose(p: LinkProjection, seed: int | None = None) -> Decomposition:
    """Full pipeline: maximal family, C_m, C_can, assembled pieces."""
    fam = maximal_family(p, seed)
    c_m = minimize(p, fam)
    c_can = canonical_family(p, c_m)
    return assemble(p, c_m, c_can)
