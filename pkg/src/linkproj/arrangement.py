"""Realized circle systems on link projections.

A Haseman circle meets the underlying curve of a projection in exactly
four points. Combinatorially the circle is recorded by its four doors,
the (edge, rank) pairs naming those points, together with the four
faces it traverses between consecutive doors. Ranks order the points of
one circle along an edge, counted from the end carrying the edge's
smaller dart.

An Arrangement realizes a tuple of circles simultaneously: every edge
receives a total order of all crossing points on it, chosen so that the
chords the circles draw inside each face are pairwise non-crossing.
From that order the module derives the pieces chords cut faces into,
the regions of the sphere cut out by the circle family, and standalone
sub-projections for the regions, in which marker vertices stand in for
the boundary circles.

Scalar positions along a face boundary are pairs (t, s): t is the index
of the dart in the boundary walk and s a doubled offset along that
dart's edge. Chord endpoints sit at even offsets; odd offsets probe the
open segments between crossing points, and -1 probes the corner at the
dart's start.
"""

from __future__ import annotations

import itertools
import re
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property

from .errors import InternalInconsistency, MalformedInput
from .projection import LinkProjection, validate

Door = tuple[int, int]
Scalar = tuple[int, int]


# ============================================================
# Circles and their isotopy keys
# ============================================================

@dataclass(frozen=True)
class HasemanCircle:
    """A circle recorded by its doors and the faces between them.

    doors[i] is an (edge, rank) pair; faces[i] is the face the circle
    traverses between doors[i] and doors[i + 1], indices mod 4. The door
    data determines the circle up to isotopy keeping it transversal.
    """

    doors: tuple[Door, Door, Door, Door]
    faces: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if len(self.doors) != 4 or len(self.faces) != 4:
            raise MalformedInput(
                "a Haseman circle has exactly four doors and four faces"
            )
        if len(set(self.doors)) != 4:
            raise MalformedInput("door points must be distinct")


def _variants(c: HasemanCircle):
    # The dihedral orbit of the cyclic door sequence: 4 rotations per
    # traversal direction. Reversal re-reads faces[i] as the face between
    # the new consecutive pair, hence the index shift.
    doors, faceseq = c.doors, c.faces
    refl_doors = (doors[0], doors[3], doors[2], doors[1])
    refl_faces = (faceseq[3], faceseq[2], faceseq[1], faceseq[0])
    for d, f in ((doors, faceseq), (refl_doors, refl_faces)):
        for k in range(4):
            yield d[k:] + d[:k], f[k:] + f[:k]


def circle_key(c: HasemanCircle) -> tuple:
    """Isotopy-class key: the least dihedral relabeling of the door data."""
    return min(_variants(c))


def canonical_circle(c: HasemanCircle) -> HasemanCircle:
    """The representative with the least door sequence in its class."""
    d, f = circle_key(c)
    return HasemanCircle(d, f)


_CIRCLE = re.compile(
    r"H\[\s*"
    + r"\s+".join([r"\(\s*(\d+)\s*,\s*(\d+)\s*\)\s+(\d+)"] * 4)
    + r"\s*\]"
)


def format_circle(c: HasemanCircle) -> str:
    """Circle literal: H[(e,r) f (e,r) f (e,r) f (e,r) f]."""
    parts = [f"({e},{r}) {f}" for (e, r), f in zip(c.doors, c.faces)]
    return "H[" + " ".join(parts) + "]"


def parse_circle(text: str) -> HasemanCircle:
    """Parses the H[...] circle literal emitted by format_circle.

    Raises:
        MalformedInput: the text is not a circle literal.
    """
    m = _CIRCLE.fullmatch(text.strip())
    if not m:
        raise MalformedInput(
            "expected circle literal H[(e,r) f (e,r) f (e,r) f (e,r) f]",
            position=0,
        )
    g = [int(x) for x in m.groups()]
    doors = tuple((g[3 * i], g[3 * i + 1]) for i in range(4))
    faceseq = tuple(g[3 * i + 2] for i in range(4))
    return HasemanCircle(doors, faceseq)  # type: ignore[arg-type]


def vertex_boundary_circle(p: LinkProjection, v: int) -> HasemanCircle:
    """The small circle around vertex v, crossing each incident edge end.

    On a loop edge the circle crosses twice; the point near the end with
    the smaller dart gets rank 0.
    """
    doors = []
    for s in range(4):
        d = 4 * v + s
        e = p.edge_of[d]
        lo, hi = p.edges[e]
        if (p.mate[d] >> 2) == v and lo != hi:
            rank = 0 if d == lo else 1
        else:
            rank = 0
        doors.append((e, rank))
    faceseq = tuple(p.face_of[4 * v + ((s + 1) & 3)] for s in range(4))
    return HasemanCircle(tuple(doors), faceseq)  # type: ignore[arg-type]


# ============================================================
# Chord geometry inside one face
# ============================================================

def _interleaved(a: Scalar, b: Scalar, x: Scalar, y: Scalar) -> bool:
    # Two chords of a cyclically ordered boundary cross iff exactly one
    # endpoint of the second lies strictly inside the arc of the first.
    # Interleaving is invariant under where the cycle is cut, so the
    # plain linear order of scalars decides it.
    if len({a, b, x, y}) < 4:
        return False
    if a > b:
        a, b = b, a
    return (a < x < b) != (a < y < b)


@dataclass(frozen=True)
class FacePieces:
    """How the chords inside one face cut it into pieces.

    scalars lists the chord endpoints in boundary order; interval t runs
    from scalars[t] to the next endpoint (cyclically). piece_of_interval
    maps each boundary interval to the piece it borders, and
    piece_chords gives the chords (circle, arc index) on each piece's
    boundary. A chordless face is the single piece 0.
    """

    scalars: tuple[Scalar, ...]
    piece_of_interval: tuple[int, ...]
    piece_chords: tuple[frozenset, ...]

    @property
    def n_pieces(self) -> int:
        return len(self.piece_chords)

    def probe(self, scalar: Scalar) -> int:
        """Piece bordered at the boundary position scalar (not an endpoint)."""
        if not self.scalars:
            return 0
        t = bisect_right(self.scalars, scalar) - 1
        if t < 0:
            t = len(self.scalars) - 1
        return self.piece_of_interval[t]

    def flanks(self, scalar: Scalar) -> tuple[int, int]:
        """Pieces after and before an exact endpoint scalar, in walk order."""
        s = self.scalars.index(scalar)
        before = self.piece_of_interval[(s - 1) % len(self.scalars)]
        after = self.piece_of_interval[s]
        return after, before


# ============================================================
# Arrangements
# ============================================================

@dataclass(frozen=True)
class Arrangement:
    """A family of circles realized on a projection.

    edge_points[e] lists the crossing points on edge e in order from the
    end with the smaller dart; a point is the (circle index, rank) pair
    that names it. The chord systems induced in all faces are pairwise
    non-crossing (validate() checks this).
    """

    proj: LinkProjection
    circles: tuple[HasemanCircle, ...]
    edge_points: tuple[tuple[tuple[int, int], ...], ...]

    # ---- scalar positions ----

    def door_dart(self, k: int, i: int, face: int) -> int:
        """The dart of door i's edge lying on the given face."""
        e, _ = self.circles[k].doors[i]
        lo, hi = self.proj.edges[e]
        if self.proj.face_of[lo] == face:
            return lo
        if self.proj.face_of[hi] == face:
            return hi
        raise InternalInconsistency(
            f"door {i} of circle {k} does not border face {face}"
        )

    def door_scalar(self, k: int, i: int, face: int) -> Scalar:
        """Boundary position of door i of circle k on the given face."""
        e, r = self.circles[k].doors[i]
        d = self.door_dart(k, i, face)
        pts = self.edge_points[e]
        j = pts.index((k, r))
        lo = self.proj.edges[e][0]
        along = j if d == lo else len(pts) - 1 - j
        return (self.proj.face_pos[d], 2 * along)

    # ---- chords and pieces ----

    @cached_property
    def chords_by_face(self) -> dict[int, tuple[tuple[int, int, Scalar, Scalar], ...]]:
        """Map face -> chords (circle k, arc i, scalar, scalar) inside it."""
        acc: dict[int, list[tuple[int, int, Scalar, Scalar]]] = {}
        for k, c in enumerate(self.circles):
            for i in range(4):
                f = c.faces[i]
                a = self.door_scalar(k, i, f)
                b = self.door_scalar(k, (i + 1) & 3, f)
                acc.setdefault(f, []).append((k, i, a, b))
        return {f: tuple(v) for f, v in acc.items()}

    def validate(self) -> None:
        """Checks that no two chords cross anywhere.

        Raises:
            InternalInconsistency: a crossing pair exists (the insertion
                search must never hand such an arrangement out).
        """
        for f, chords in self.chords_by_face.items():
            for u in range(len(chords)):
                for v in range(u + 1, len(chords)):
                    _, _, a, b = chords[u]
                    _, _, x, y = chords[v]
                    if _interleaved(a, b, x, y):
                        raise InternalInconsistency(
                            f"chords cross in face {f}: "
                            f"{chords[u]} against {chords[v]}"
                        )

    @cached_property
    def face_pieces(self) -> tuple[FacePieces, ...]:
        """Piece structure of every face, indexed by face id."""
        out = []
        for f in range(len(self.proj.faces)):
            out.append(self._build_pieces(f))
        return tuple(out)

    def _build_pieces(self, f: int) -> FacePieces:
        chords = self.chords_by_face.get(f, ())
        if not chords:
            return FacePieces((), (), (frozenset(),))
        endpoints: list[tuple[Scalar, int]] = []
        for ci, (_, _, a, b) in enumerate(chords):
            endpoints.append((a, ci))
            endpoints.append((b, ci))
        endpoints.sort()
        scalars = tuple(s for s, _ in endpoints)
        if len(set(scalars)) != len(scalars):
            raise InternalInconsistency(f"coincident chord endpoints in face {f}")
        # Index of the matching endpoint of the same chord.
        by_chord: dict[int, list[int]] = {}
        for idx, (_, ci) in enumerate(endpoints):
            by_chord.setdefault(ci, []).append(idx)
        other = [0] * len(endpoints)
        for pa, pb in by_chord.values():
            other[pa], other[pb] = pb, pa
        m = len(endpoints)
        piece_of_interval = [-1] * m
        piece_chords: list[frozenset] = []
        for t0 in range(m):
            if piece_of_interval[t0] != -1:
                continue
            pid = len(piece_chords)
            got = set()
            t = t0
            while piece_of_interval[t] == -1:
                # Interval t ends at endpoint t+1; the piece boundary
                # continues along that chord to its far end and resumes
                # with the interval starting there.
                piece_of_interval[t] = pid
                end = (t + 1) % m
                ci = endpoints[end][1]
                got.add((chords[ci][0], chords[ci][1]))
                t = other[end]
            piece_chords.append(frozenset(got))
        return FacePieces(scalars, tuple(piece_of_interval), tuple(piece_chords))

    # ---- regions ----

    @cached_property
    def _region_data(self) -> tuple[dict[tuple[int, int], int], int]:
        # Union pieces across every edge segment: the circles are the
        # only region boundaries, so two pieces meeting along a piece of
        # an edge lie in the same region.
        pid_base = {}
        total = 0
        for f in range(len(self.proj.faces)):
            pid_base[f] = total
            total += self.face_pieces[f].n_pieces
        parent = list(range(total))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for e, (lo, hi) in enumerate(self.proj.edges):
            n = len(self.edge_points[e])
            fu, fv = self.proj.face_of[lo], self.proj.face_of[hi]
            tu, tv = self.proj.face_pos[lo], self.proj.face_pos[hi]
            for j in range(n + 1):
                a = self.face_pieces[fu].probe((tu, 2 * j - 1))
                b = self.face_pieces[fv].probe((tv, 2 * (n - j) - 1))
                union(pid_base[fu] + a, pid_base[fv] + b)

        roots = sorted({find(i) for i in range(total)})
        compact = {r: i for i, r in enumerate(roots)}
        region_of = {}
        for f in range(len(self.proj.faces)):
            for pid in range(self.face_pieces[f].n_pieces):
                region_of[(f, pid)] = compact[find(pid_base[f] + pid)]
        return region_of, len(roots)

    @property
    def n_regions(self) -> int:
        return self._region_data[1]

    def region_of_piece(self, face: int, pid: int) -> int:
        return self._region_data[0][(face, pid)]

    def region_of_crossing(self, x: int) -> int:
        """Region containing crossing x (probed at its corner 0)."""
        w = 4 * x + 1
        f = self.proj.face_of[w]
        pid = self.face_pieces[f].probe((self.proj.face_pos[w], -1))
        return self.region_of_piece(f, pid)

    def circle_regions(self, k: int) -> tuple[int, int]:
        """The regions on the right and on the left of circle k.

        Right and left are taken along the traversal doors[0] -> doors[1]
        -> ... of the stored door order.

        Raises:
            InternalInconsistency: the four arcs disagree about a side,
                or both sides land in one region (the circle would not
                separate the sphere).
        """
        rights, lefts = set(), set()
        for i in range(4):
            f = self.circles[k].faces[i]
            start = self.door_scalar(k, i, f)
            after, before = self.face_pieces[f].flanks(start)
            # Walking the boundary with the face on the right, the piece
            # right of the outgoing chord is the one just walked.
            rights.add(self.region_of_piece(f, before))
            lefts.add(self.region_of_piece(f, after))
        if len(rights) != 1 or len(lefts) != 1 or rights == lefts:
            raise InternalInconsistency(
                f"circle {k} has inconsistent sides: {rights} vs {lefts}"
            )
        return rights.pop(), lefts.pop()

    # ---- region submaps ----

    def submap(self, region: int) -> SubMap:
        """Extracts one region as a standalone projection with markers.

        Every boundary circle of the region becomes a 4-valent marker
        vertex whose rotation lists the circle's doors counter-clockwise
        as seen from inside the region: the stored door order when the
        region lies on the circle's right, the reversed order otherwise.
        """
        p = self.proj
        xs = [x for x in range(p.c) if self.region_of_crossing(x) == region]
        new_of = {x: i for i, x in enumerate(xs)}
        bmarks: list[tuple[int, int]] = []
        for k in range(len(self.circles)):
            right, left = self.circle_regions(k)
            if right == region:
                bmarks.append((k, 1))
            elif left == region:
                bmarks.append((k, -1))
        midx = {k: len(xs) + i for i, (k, _) in enumerate(bmarks)}
        side_of = dict(bmarks)
        nv = len(xs) + len(bmarks)
        mate = [-1] * (4 * nv)

        def marker_token(k: int, e: int, r: int) -> int:
            i = self.circles[k].doors.index((e, r))
            slot = i if side_of[k] == 1 else (-i) % 4
            return 4 * midx[k] + slot

        def crossing_token(d: int) -> int:
            x = d >> 2
            if x not in new_of:
                raise InternalInconsistency(
                    f"edge segment in region {region} ends at crossing {x} "
                    "outside it"
                )
            return 4 * new_of[x] + (d & 3)

        for e, (lo, hi) in enumerate(p.edges):
            pts = self.edge_points[e]
            n = len(pts)
            fu, tu = p.face_of[lo], p.face_pos[lo]
            fp = self.face_pieces[fu]
            for j in range(n + 1):
                pid = fp.probe((tu, 2 * j - 1))
                if self.region_of_piece(fu, pid) != region:
                    continue
                if j == 0:
                    a = crossing_token(lo)
                else:
                    k, r = pts[j - 1]
                    a = marker_token(k, e, r)
                if j == n:
                    b = crossing_token(hi)
                else:
                    k, r = pts[j]
                    b = marker_token(k, e, r)
                mate[a], mate[b] = b, a

        if any(m < 0 for m in mate):
            raise InternalInconsistency(
                f"region {region} submap has unpaired slots"
            )
        over = tuple(p.over[x] for x in xs) + (0,) * len(bmarks)
        sub = LinkProjection(mate=tuple(mate), over=over)
        try:
            validate(sub)
        except Exception as exc:
            raise InternalInconsistency(
                f"region {region} submap failed validation: {exc}"
            ) from exc
        return SubMap(sub, tuple(xs), tuple(bmarks), region)


@dataclass(frozen=True)
class SubMap:
    """A region of an arrangement as a standalone projection.

    Vertices [0, n_crossings) are the real crossings, in increasing
    order of their parent ids; the remaining vertices are markers, one
    per boundary circle. marker_circles pairs each marker with its
    circle's index in the arrangement and the side (+1 when the region
    lies on the circle's right).
    """

    proj: LinkProjection
    crossing_ids: tuple[int, ...]
    marker_circles: tuple[tuple[int, int], ...]
    region: int

    @property
    def n_crossings(self) -> int:
        return len(self.crossing_ids)

    @property
    def markers(self) -> tuple[int, ...]:
        base = len(self.crossing_ids)
        return tuple(range(base, base + len(self.marker_circles)))


# ============================================================
# The insertion search
# ============================================================

def _check_circles(p: LinkProjection, circles: tuple[HasemanCircle, ...]) -> None:
    n_edges = len(p.edges)
    for c in circles:
        per_edge: dict[int, list[int]] = {}
        for i, (e, r) in enumerate(c.doors):
            if not 0 <= e < n_edges:
                raise MalformedInput(f"door edge {e} out of range")
            per_edge.setdefault(e, []).append(r)
            want = set(p.faces_of_edge(e))
            got = {c.faces[i], c.faces[(i - 1) % 4]}
            if got != want:
                raise MalformedInput(
                    f"door {i} crosses edge {e} between faces {got}, "
                    f"but the edge borders {want}"
                )
        for e, ranks in per_edge.items():
            if sorted(ranks) != list(range(len(ranks))):
                raise MalformedInput(
                    f"ranks on edge {e} must be 0..{len(ranks) - 1}, "
                    f"got {sorted(ranks)}"
                )


def realize_family(
    p: LinkProjection,
    circles,
    *,
    step_limit: int = 1_000_000,
) -> Arrangement | None:
    """Realizes the circles disjointly, or returns None.

    Searches, circle by circle, over the ways of interleaving each
    circle's points into the per-edge orders built so far (preserving
    every circle's own rank order), backtracking when a face acquires
    crossing chords. The first solution in lexicographic search order is
    returned, so the result is deterministic.

    Args:
        p: the projection.
        circles: circles to realize, in insertion order.
        step_limit: safety bound on insertion attempts.

    Raises:
        MalformedInput: a circle is inconsistent with p.
        InternalInconsistency: the search exceeds step_limit.
    """
    circles = tuple(circles)
    _check_circles(p, circles)
    pts: list[tuple[tuple[int, int], ...]] = [()] * len(p.edges)
    steps = 0

    def dscalar(kk: int, i: int, f: int) -> Scalar:
        e, r = circles[kk].doors[i]
        lo, hi = p.edges[e]
        d = lo if p.face_of[lo] == f else hi
        arr = pts[e]
        j = arr.index((kk, r))
        along = j if d == lo else len(arr) - 1 - j
        return (p.face_pos[d], 2 * along)

    def chords_fine(k: int) -> bool:
        for f in set(circles[k].faces):
            recs = []
            for kk in range(k + 1):
                c = circles[kk]
                for i in range(4):
                    if c.faces[i] != f:
                        continue
                    a = dscalar(kk, i, f)
                    b = dscalar(kk, (i + 1) & 3, f)
                    recs.append((kk, a, b))
            for u in range(len(recs)):
                for v in range(u + 1, len(recs)):
                    if recs[u][0] != k and recs[v][0] != k:
                        continue
                    if _interleaved(recs[u][1], recs[u][2],
                                    recs[v][1], recs[v][2]):
                        return False
        return True

    def place(k: int) -> bool:
        nonlocal steps
        if k == len(circles):
            return True
        per_edge: dict[int, list[int]] = {}
        for e, r in circles[k].doors:
            per_edge.setdefault(e, []).append(r)
        groups = sorted((e, sorted(rs)) for e, rs in per_edge.items())

        def rec(gi: int) -> bool:
            nonlocal steps
            if gi == len(groups):
                return chords_fine(k) and place(k + 1)
            e, ranks = groups[gi]
            old = pts[e]
            new = [(k, r) for r in ranks]
            n, m = len(old), len(new)
            for sel in itertools.combinations(range(n + m), m):
                steps += 1
                if steps > step_limit:
                    raise InternalInconsistency(
                        "circle insertion search exceeded its step limit"
                    )
                merged = []
                oi = ni = 0
                for pos in range(n + m):
                    if ni < m and pos == sel[ni]:
                        merged.append(new[ni])
                        ni += 1
                    else:
                        merged.append(old[oi])
                        oi += 1
                pts[e] = tuple(merged)
                if rec(gi + 1):
                    return True
            pts[e] = old
            return False

        return rec(0)

    if not place(0):
        return None
    arr = Arrangement(p, circles, tuple(pts))
    arr.validate()
    return arr


def realize_single(p: LinkProjection, c: HasemanCircle) -> Arrangement | None:
    """Realizes one circle, or returns None if its chords must cross."""
    return realize_family(p, (c,))
