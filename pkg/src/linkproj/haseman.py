"""Enumeration and classification of Haseman circles.

A Haseman circle meets the projection transversally in four points and
is incompressible: no complementary disc contains an arc, disjoint from
the diagram, that separates the four points two against two.  Isotopy
classes (respecting the diagram) are in bijection with canonical door
sequences, so enumeration reduces to walking the face-edge incidence
structure: a circle visits four edges and traverses one face between
consecutive edges, which is a closed walk of length 4 in the dual.

Everything here works equally on a full projection and on a region
extracted by Arrangement.submap().  In the second case the boundary
circles of the region appear as marker vertices, and compressibility
additionally requires the compressing side to stay clear of markers: a
side containing a marker is not a disc of the bounded subdiagram.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import TYPE_CHECKING, Union

from .arrangement import (
    Arrangement,
    HasemanCircle,
    SubMap,
    canonical_circle,
    circle_key,
    realize_family,
    realize_single,
    vertex_boundary_circle,
)
from .errors import (
    InternalInconsistency,
    MalformedInput,
    NotDisjoint,
    Unclassifiable,
)
from .projection import LinkProjection

if TYPE_CHECKING:
    from .decomposition import Decomposition


class CircleTag(str, Enum):
    """What a Haseman circle is, relative to a decomposition."""

    SINGLETON_BOUNDARY = "singleton-boundary"
    CANONICAL_JEWEL_JEWEL = "canonical-jewel-jewel"
    CANONICAL_BAND_BAND = "canonical-band-band"
    CANONICAL_JEWEL_BAND = "canonical-jewel-band"
    BAND_INTERIOR = "band-interior"


@dataclass(frozen=True)
class CircleType:
    """Classification of one circle against a decomposition.

    anchor points at what the circle matches: an index into the minimal
    family for SINGLETON_BOUNDARY, into the canonical family for the
    three CANONICAL_* tags, and into the piece list for BAND_INTERIOR
    (the twisted band diagram the circle can be isotoped into).
    """

    tag: CircleTag
    anchor: int


# ============================================================
# Enumeration
# ============================================================

def _other_face(p: LinkProjection, e: int, f: int) -> int:
    a, b = p.faces_of_edge(e)
    return b if f == a else a


def _dual_walks(p: LinkProjection):
    """Yields (edges, faces) for every closed dual walk of length 4.

    faces[i] is traversed between edges[i] and edges[i+1]; closing up
    forces faces[3] to be the far side of edges[0].  Edges may repeat:
    a circle can cross one edge up to four times.
    """
    ne = len(p.edges)
    face_edges: list[list[int]] = [[] for _ in range(len(p.faces))]
    for e in range(ne):
        for f in set(p.faces_of_edge(e)):
            face_edges[f].append(e)
    for e1 in range(ne):
        for f1 in set(p.faces_of_edge(e1)):
            back = _other_face(p, e1, f1)
            for e2 in face_edges[f1]:
                f2 = _other_face(p, e2, f1)
                for e3 in face_edges[f2]:
                    f3 = _other_face(p, e3, f2)
                    for e4 in face_edges[f3]:
                        if _other_face(p, e4, f3) == back:
                            yield (e1, e2, e3, e4), (f1, f2, f3, back)


def _rank_choices(edges: tuple[int, int, int, int]):
    """All assignments of along-edge ranks to a walk's four doors."""
    slots: dict[int, list[int]] = {}
    for i, e in enumerate(edges):
        slots.setdefault(e, []).append(i)
    ranks = [0, 0, 0, 0]

    def rec(groups: list[list[int]]):
        if not groups:
            yield tuple(ranks)
            return
        head, *rest = groups
        for perm in permutations(range(len(head))):
            for i, r in zip(head, perm):
                ranks[i] = r
            yield from rec(rest)

    yield from rec(list(slots.values()))


def _compressible_in(arr: Arrangement, k: int, markers: tuple[int, ...]) -> bool:
    # 2-2 criterion: a compressing arc exists iff two opposite arcs of
    # the circle run through one face and some piece of that face
    # touches both.  The side holding the piece must be a disc, so it
    # may not contain a marker.
    c = arr.circles[k]
    for i in (0, 1):
        f = c.faces[i]
        if f != c.faces[i + 2]:
            continue
        fp = arr.face_pieces[f]
        for pid, chords in enumerate(fp.piece_chords):
            if (k, i) in chords and (k, i + 2) in chords:
                side = arr.region_of_piece(f, pid)
                if all(arr.region_of_crossing(m) != side for m in markers):
                    return True
    return False


def enumerate_haseman(
    d: Union[LinkProjection, SubMap],
) -> tuple[HasemanCircle, ...]:
    """All isotopy classes of Haseman circles, one representative each.

    Accepts a full projection or a bounded subdiagram (SubMap).  On a
    subdiagram the boundary itself is of course not returned, but the
    interior push-offs of boundary circles are, and incompressibility
    is taken relative to the subdiagram.

    Returns:
        Canonical representatives sorted by class key, so the output
        order is deterministic and stable under relabeling.
    """
    if isinstance(d, SubMap):
        p, markers = d.proj, d.markers
    else:
        p, markers = d, ()
    found: dict[tuple, HasemanCircle] = {}
    tried: set[tuple] = set()
    for edges, faces in _dual_walks(p):
        for ranks in _rank_choices(edges):
            doors = tuple(zip(edges, ranks))
            c = HasemanCircle(doors, faces)
            key = circle_key(c)
            if key in tried:
                continue
            tried.add(key)
            arr = realize_single(p, c)
            if arr is None:
                continue
            if _compressible_in(arr, 0, markers):
                continue
            found[key] = canonical_circle(c)
    return tuple(found[k] for k in sorted(found))


# ============================================================
# Circle predicates
# ============================================================

def is_compressible(
    circle: HasemanCircle,
    p: LinkProjection,
    markers: tuple[int, ...] = (),
) -> bool:
    """Whether a compressing arc exists on either side of the circle.

    Four intersection points admit only 2-2 essential separations: a
    1-3 split is barred by parity and a 0-4 split would make the arc
    boundary parallel.  So the circle is compressible iff two opposite
    arcs of it cross one face and a single piece of that face reaches
    both, with the whole side containing that piece free of markers.

    Args:
        circle: the candidate, realizable in p.
        p: the projection, possibly a marker-map of a region.
        markers: vertex ids to treat as boundary holes.

    Raises:
        MalformedInput: the circle is not realizable in p.
    """
    arr = realize_single(p, circle)
    if arr is None:
        raise MalformedInput("circle is not realizable in this projection")
    return _compressible_in(arr, 0, tuple(markers))


def are_parallel(
    c1: HasemanCircle,
    c2: HasemanCircle,
    p: LinkProjection,
) -> bool:
    """Whether the two circles co-bound a product annulus.

    Parallel means an annulus between them contains no crossing and
    exactly four arcs of the diagram, each spanning boundary to
    boundary.  Two independent routes are evaluated and compared:
    equality of class keys, and direct inspection of the region between
    the circles in a joint realization.  They must agree.

    Raises:
        NotDisjoint: the circles admit no disjoint joint realization.
        InternalInconsistency: the two routes disagree, which would
            mean a class-key or realization bug.
    """
    same_class = circle_key(c1) == circle_key(c2)
    arr = realize_family(p, (canonical_circle(c1), canonical_circle(c2)))
    if arr is None:
        raise NotDisjoint("circles have no disjoint realization")
    common = set(arr.circle_regions(0)) & set(arr.circle_regions(1))
    if len(common) != 1:
        raise InternalInconsistency(
            f"two disjoint circles flank {len(common)} common regions"
        )
    sub = arr.submap(common.pop())
    annular = (
        sub.n_crossings == 0
        and len(sub.marker_circles) == 2
        and all((a >> 2) != (b >> 2) for a, b in sub.proj.edges)
    )
    if annular != same_class:
        raise InternalInconsistency(
            "parallelism routes disagree: "
            f"annulus check {annular}, class keys {same_class}"
        )
    return same_class


def is_boundary_parallel(circle: HasemanCircle, sub: SubMap) -> bool:
    """Whether the circle is parallel to a boundary circle of a region.

    The interior push-off of a boundary circle is the vertex boundary
    circle of its marker, so parallelism to the boundary is exactly
    class equality with one of those push-offs.
    """
    key = circle_key(circle)
    return any(
        circle_key(vertex_boundary_circle(sub.proj, m)) == key
        for m in sub.markers
    )


# ============================================================
# Classification against a decomposition
# ============================================================

def _home_region(joint: Arrangement, base: Arrangement, region: int) -> int:
    """Maps a region of the extended arrangement into the base one.

    joint realizes the base family plus one extra circle, so its
    regions refine the base regions.  A region is located through any
    crossing it contains, else through a base circle it flanks; sides
    transfer because right and left are intrinsic to the stored door
    order of each circle.
    """
    for x in range(joint.proj.c):
        if joint.region_of_crossing(x) == region:
            return base.region_of_crossing(x)
    for k in range(len(base.circles)):
        jr = joint.circle_regions(k)
        br = base.circle_regions(k)
        for s in (0, 1):
            if jr[s] == region:
                return br[s]
    raise InternalInconsistency(
        f"joint region {region} touches no crossing and no family circle"
    )


def classify_circle(
    circle: HasemanCircle,
    p: LinkProjection,
    decomposition: Decomposition,
) -> CircleType:
    """Locates an incompressible circle relative to the decomposition.

    Every incompressible Haseman circle either is isotopic to a member
    of the minimal family, or can be isotoped into a twisted band
    diagram.  Family members split into singleton boundaries and
    canonical circles, the latter subtyped by the kinds of the two
    pieces they separate.

    Args:
        circle: an incompressible Haseman circle of p.
        p: the projection the decomposition was computed from.
        decomposition: its canonical Conway decomposition.

    Raises:
        Unclassifiable: the circle fits nowhere; this signals a bug (or
            a compressible input), never a valid outcome.
    """
    key = circle_key(circle)
    canon_keys = {
        circle_key(c): i for i, c in enumerate(decomposition.canonical)
    }
    base = decomposition.arrangement
    for k, member in enumerate(decomposition.minimal):
        if circle_key(member) != key:
            continue
        ci = canon_keys.get(key)
        if ci is None:
            return CircleType(CircleTag.SINGLETON_BOUNDARY, k)
        right, left = base.circle_regions(k)
        kinds = {
            decomposition.pieces[decomposition.piece_of_region[r]].kind
            for r in (right, left)
        }
        if kinds == {"jewel"}:
            return CircleType(CircleTag.CANONICAL_JEWEL_JEWEL, ci)
        if kinds == {"band"}:
            return CircleType(CircleTag.CANONICAL_BAND_BAND, ci)
        return CircleType(CircleTag.CANONICAL_JEWEL_BAND, ci)

    joint = realize_family(
        p, tuple(decomposition.minimal) + (canonical_circle(circle),)
    )
    if joint is None:
        raise Unclassifiable(
            "circle cannot be realized disjointly from the minimal family"
        )
    k = len(decomposition.minimal)
    homes = {
        _home_region(joint, base, r) for r in joint.circle_regions(k)
    }
    if len(homes) != 1:
        raise InternalInconsistency(
            f"circle flanks would live in two family regions: {homes}"
        )
    pi = decomposition.piece_of_region[homes.pop()]
    if decomposition.pieces[pi].kind == "band":
        return CircleType(CircleTag.BAND_INTERIOR, pi)
    raise Unclassifiable(
        "circle is neither a family member nor interior to a twisted "
        "band diagram"
    )
