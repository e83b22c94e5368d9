"""Weighted planar trees coding arborescent components.

A tree vertex stands for one twisted band diagram; its counter-clockwise
edge order mirrors the order in which the canonical circles sit along
the band, and the integer in each sector counts the signed twist
crossings between two consecutive circles.  Forgetting the cyclic
orders and summing the sectors gives the abstract tree, which carries
the alternating criterion: a diagram is alternating exactly when
adjacent vertices can take opposite signs.

Encoding reads the cyclic orders off the two side faces of each band
region; the choice of side (the fat point's shaded domain) propagates
across canonical circles and flips every rotation at once, so trees are
compared up to that global reversal by canonical_tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Union

from .errors import (
    FreeEdges,
    InternalInconsistency,
    InvalidWeights,
    MalformedInput,
    NotAlternating,
    NotArborescent,
    TreeParseError,
)
from .projection import LinkProjection, serialize, validate

if TYPE_CHECKING:
    from .decomposition import Component, Decomposition


@dataclass(frozen=True)
class PlanarTree:
    """A weighted tree with counter-clockwise edge orders.

    rotations[v] lists the edge ids around vertex v; weights[v][i] is
    the sector between edges i-1 and i (one sector for degree <= 1).
    edge_ends[e] holds the endpoints: two vertices for an internal
    edge, one for a free edge.
    """

    rotations: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[int, ...], ...]
    edge_ends: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rotations)

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def total_weight(self, v: int) -> int:
        return sum(self.weights[v])

    def neighbor(self, v: int, e: int) -> int | None:
        ends = self.edge_ends[e]
        if len(ends) == 1:
            return None
        return ends[1] if ends[0] == v else ends[0]


@dataclass(frozen=True)
class AbstractTree:
    """The order-forgetting shadow: total weight per vertex."""

    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    free: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class FatPointChoice:
    """Starting piece and which of its two shaded domains is marked."""

    piece: int
    domain: bool = False


class TreeShape(str, Enum):
    SINGLETON_VERTEX = "singleton-vertex"
    BAMBOO = "bamboo"
    GENERAL = "general"


# ============================================================
# Structure checks and the mirror involution
# ============================================================

def validate_tree(t: PlanarTree, strict: bool = False) -> None:
    """Checks tree shape; with strict=True also the weight bounds.

    Shape: every edge id sits in the rotation of each of its ends
    exactly once, internal edges form a tree, sector counts match
    degrees.  The strict weight bounds (|a1| >= 2 at degree <= 1, not
    both sectors zero at degree 2) hold for trees of canonical
    decompositions but are deliberately not imposed in general: flype
    normalization legitimately passes through states outside them.
    """
    n = t.n
    if n == 0:
        raise MalformedInput("tree has no vertices")
    if len(t.weights) != n:
        raise MalformedInput("weights do not cover the vertices")
    seen_at: dict[int, list[int]] = {}
    for v, rot in enumerate(t.rotations):
        if len(set(rot)) != len(rot):
            raise MalformedInput(f"vertex {v} repeats an edge")
        if len(t.weights[v]) != max(1, len(rot)):
            raise MalformedInput(
                f"vertex {v} has {len(t.weights[v])} sectors for degree {len(rot)}"
            )
        for e in rot:
            seen_at.setdefault(e, []).append(v)
    internal = 0
    for e, ends in enumerate(t.edge_ends):
        if sorted(seen_at.get(e, [])) != sorted(ends):
            raise MalformedInput(f"edge {e} endpoints disagree with rotations")
        if len(ends) == 2:
            internal += 1
        elif len(ends) != 1:
            raise MalformedInput(f"edge {e} has {len(ends)} endpoints")
    if len(seen_at) != len(t.edge_ends):
        raise MalformedInput("rotations mention unknown edges")
    if internal != n - 1:
        raise MalformedInput("internal edges do not form a tree")
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for e in t.rotations[v]:
            w = t.neighbor(v, e)
            if w is not None and w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        raise MalformedInput("tree is disconnected")
    if strict:
        for v in range(n):
            d, ws = t.degree(v), t.weights[v]
            if d <= 1 and abs(ws[0]) < 2:
                raise InvalidWeights(
                    f"vertex {v} of degree {d} needs |a1| >= 2, got {ws[0]}"
                )
            if d == 2 and ws[0] == 0 and ws[1] == 0:
                raise InvalidWeights(f"vertex {v} of degree 2 has both sectors zero")


def _mirror_vertex(
    rot: tuple[int, ...], ws: tuple[int, ...]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    d = len(rot)
    if d == 0:
        return rot, ws
    new_rot = tuple(rot[d - 1 - i] for i in range(d))
    new_ws = tuple(ws[(d - i) % d] for i in range(d))
    return new_rot, new_ws


def mirror(t: PlanarTree) -> PlanarTree:
    """Reverses every cyclic order; the weights ride along unchanged."""
    rots, wss = [], []
    for v in range(t.n):
        r, w = _mirror_vertex(t.rotations[v], t.weights[v])
        rots.append(r)
        wss.append(w)
    return PlanarTree(tuple(rots), tuple(wss), t.edge_ends)


def reverse_at(t: PlanarTree, v: int) -> PlanarTree:
    """Mirror applied to the single vertex v."""
    r, w = _mirror_vertex(t.rotations[v], t.weights[v])
    rots = t.rotations[:v] + (r,) + t.rotations[v + 1 :]
    wss = t.weights[:v] + (w,) + t.weights[v + 1 :]
    return PlanarTree(rots, wss, t.edge_ends)


# ============================================================
# Tree literals
# ============================================================

_TOKEN = re.compile(r"\s*(V\(|\)|,|\*|-?\d+)")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TreeParseError(f"bad tree literal at offset {pos}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_tree(text: str) -> PlanarTree:
    """Parses the nested V(w1,e1,...) literal.

    The root lists weight/edge pairs; a nested vertex leads with the
    sector after its parent edge and closes with the sector before it,
    so it shows one weight more than it shows edges.  `*` is a free
    edge.  Sectors precede the edge they open: weight i sits between
    edges i-1 and i counter-clockwise.
    """
    toks = _tokens(text)
    pos = 0
    rots: list[list[int]] = []
    wss: list[list[int]] = []
    ends: list[list[int]] = []

    def expect(tok: str) -> None:
        nonlocal pos
        if pos >= len(toks) or toks[pos] != tok:
            raise TreeParseError(f"expected {tok!r} at token {pos}")
        pos += 1

    def parse_int() -> int:
        nonlocal pos
        if pos >= len(toks) or not re.fullmatch(r"-?\d+", toks[pos]):
            raise TreeParseError(f"expected integer at token {pos}")
        pos += 1
        return int(toks[pos - 1])

    def parse_vertex(parent_edge: int | None) -> int:
        nonlocal pos
        expect("V(")
        v = len(rots)
        rots.append([] if parent_edge is None else [parent_edge])
        wss.append([])
        items: list[tuple[str, int]] = [("w", parse_int())]
        while pos < len(toks) and toks[pos] == ",":
            pos += 1
            if toks[pos] == "*":
                pos += 1
                e = len(ends)
                ends.append([v])
                rots[v].append(e)
                items.append(("e", e))
            elif toks[pos] == "V(":
                e = len(ends)
                ends.append([v])
                rots[v].append(e)
                child = parse_vertex(e)
                ends[e].append(child)
                items.append(("e", e))
            else:
                items.append(("w", parse_int()))
        expect(")")
        kinds = "".join(k for k, _ in items)
        ws = [x for k, x in items if k == "w"]
        n_edges = kinds.count("e")
        if parent_edge is None:
            if n_edges == 0:
                if kinds != "w":
                    raise TreeParseError("degree-0 vertex takes a single weight")
                wss[v] = ws
            else:
                if kinds != "we" * n_edges:
                    raise TreeParseError(
                        "root must alternate weight,edge,...,weight,edge"
                    )
                wss[v] = ws
        else:
            if kinds != "we" * n_edges + "w":
                raise TreeParseError(
                    "nested vertex must alternate weight,edge,...,weight"
                )
            # Listed: sector after the parent edge first, sector before
            # it last; stored: weights[0] opens the parent edge.
            wss[v] = [ws[-1]] + ws[:-1]
        return v

    parse_vertex(None)
    if pos != len(toks):
        raise TreeParseError("trailing input after the root vertex")
    t = PlanarTree(
        tuple(tuple(r) for r in rots),
        tuple(tuple(w) for w in wss),
        tuple(tuple(e) for e in ends),
    )
    validate_tree(t)
    return t


def _format_from(
    t: PlanarTree, v: int, parent_edge: int | None, start: int
) -> str:
    rot, ws = t.rotations[v], t.weights[v]
    d = len(rot)

    def edge_text(e: int) -> str:
        w = t.neighbor(v, e)
        if w is None:
            return "*"
        return _format_from(t, w, e, 0)

    if parent_edge is None:
        if d == 0:
            return f"V({ws[0]})"
        parts = []
        for i in range(d):
            j = (start + i) % d
            parts.append(str(ws[j]))
            parts.append(edge_text(rot[j]))
        return "V(" + ",".join(parts) + ")"
    q = rot.index(parent_edge)
    parts = []
    for i in range(1, d):
        j = (q + i) % d
        parts.append(str(ws[j]))
        parts.append(edge_text(rot[j]))
    parts.append(str(ws[q]))
    return "V(" + ",".join(parts) + ")"


def format_tree(t: PlanarTree, root: int = 0, start: int = 0) -> str:
    """Literal for t rooted at the given vertex and starting edge."""
    validate_tree(t)
    return _format_from(t, root, None, start)


def tree_key(t: PlanarTree) -> str:
    """Reflection-invariant canonical literal.

    Minimum over both mirrors, all roots and all starting edges; two
    trees code the same component exactly when their keys agree.
    """
    validate_tree(t)
    best: str | None = None
    for cand in (t, mirror(t)):
        for root in range(cand.n):
            for start in range(max(1, cand.degree(root))):
                s = _format_from(cand, root, None, start)
                if best is None or s < best:
                    best = s
    assert best is not None
    return best


def canonical_tree(t: PlanarTree) -> PlanarTree:
    """Deterministic representative of {t, mirror(t)}.

    The single degree-0 vertex of weight -2 maps to weight +2: the
    closed chain of two crossings admits both band readings, so the
    two signs code isomorphic projections and only one may survive.
    """
    if t.n == 1 and t.degree(0) == 0 and t.weights[0][0] == -2:
        t = PlanarTree(((),), ((2,),), ())
    return parse_tree(tree_key(t))


# ============================================================
# Abstract trees and the alternating criterion
# ============================================================

def abstract_tree(t: PlanarTree) -> AbstractTree:
    """Forgets cyclic orders; each vertex keeps the sector sum."""
    validate_tree(t)
    edges = sorted(
        tuple(sorted(ends)) for ends in t.edge_ends if len(ends) == 2
    )
    free = [0] * t.n
    for ends in t.edge_ends:
        if len(ends) == 1:
            free[ends[0]] += 1
    return AbstractTree(
        tuple(t.total_weight(v) for v in range(t.n)),
        tuple(edges),
        tuple(free),
    )


def abstract_key(a: AbstractTree) -> str:
    """Isomorphism-invariant serialization of an abstract tree."""
    nbrs: list[list[int]] = [[] for _ in range(a.n)]
    for u, v in a.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)

    def rooted(v: int, parent: int | None) -> str:
        subs = sorted(rooted(w, v) for w in nbrs[v] if w != parent)
        return f"({a.weights[v]};{a.free[v]}" + "".join(subs) + ")"

    return min(rooted(v, None) for v in range(a.n))


def is_alternating_tree(a: AbstractTree) -> tuple[bool, dict[int, int] | None]:
    """Whether adjacent vertices can take opposite signs.

    A tree is always two-colorable; the only obstruction is a vertex of
    nonzero weight forced onto the wrong side.  Both parities are
    tried; a witness assignment accompanies a positive answer.
    """
    nbrs: list[list[int]] = [[] for _ in range(a.n)]
    for u, v in a.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    color = [0] * a.n
    order = []
    seen = {0}
    stack = [(0, 1)]
    while stack:
        v, c = stack.pop()
        color[v] = c
        order.append(v)
        for w in nbrs[v]:
            if w not in seen:
                seen.add(w)
                stack.append((w, -c))
    forced = {
        (1 if a.weights[v] > 0 else -1) * color[v]
        for v in range(a.n)
        if a.weights[v] != 0
    }
    if len(forced) > 1:
        return False, None
    flip = forced.pop() if forced else 1
    return True, {v: flip * color[v] for v in range(a.n)}


def min_crossing_number(a: AbstractTree) -> int:
    """Minimal crossings of the coded link: the absolute weight sum."""
    ok, _ = is_alternating_tree(a)
    if not ok:
        raise NotAlternating("adjacent vertices carry equal forced signs")
    return sum(abs(w) for w in a.weights)


def classify_shape(t: PlanarTree) -> TreeShape:
    """Singleton vertex, bamboo (all degrees <= 2), or general."""
    validate_tree(t)
    if t.n == 1 and t.degree(0) == 0:
        return TreeShape.SINGLETON_VERTEX
    if all(t.degree(v) <= 2 for v in range(t.n)):
        return TreeShape.BAMBOO
    return TreeShape.GENERAL


# ============================================================
# Encoding a decomposition component
# ============================================================

def _rail_faces(sub) -> tuple[int, int]:
    rails = [f.id for f in sub.proj.faces if f.degree != 2]
    if len(rails) != 2:
        raise InternalInconsistency(
            f"band region {sub.region} has {len(rails)} side faces"
        )
    return rails[0], rails[1]


def _marker_corner_face(sub, mi: int, corner: int) -> int:
    mv = sub.n_crossings + mi
    return sub.proj.corner_face(mv, corner)


def _mixed_corners(sub, mi: int) -> tuple[int, int]:
    """The two marker corners facing the band's side faces."""
    mv = sub.n_crossings + mi
    nb = [sub.proj.mate[4 * mv + s] >> 2 for s in range(4)]
    mixed = [s for s in range(4) if nb[s] != nb[(s + 1) & 3]]
    if len(mixed) != 2 or (mixed[0] + 2) & 3 != mixed[1]:
        raise InternalInconsistency("marker lacks the two-gate slot pattern")
    return mixed[0], mixed[1]


def _corner_to_arc(corner: int, side: int) -> int:
    return corner if side == 1 else (3 - corner) & 3


def encode(
    dec: "Decomposition",
    component: Union["Component", int],
    choice: FatPointChoice | None = None,
) -> PlanarTree:
    """Codes an arborescent component as a weighted planar tree.

    One vertex per twisted band diagram; the rotation is the circle
    order along the chosen side face of the band, the side being fixed
    by the fat point and carried across every canonical circle (the
    two side faces touching one circle arc from opposite sides bound
    the same complementary domain).  Circles shared with a piece
    outside the component come out as free edges.

    Raises:
        NotArborescent: the component holds a non-band piece.
    """
    comp = dec.components[component] if isinstance(component, int) else component
    if comp.kind != "arborescent":
        raise NotArborescent(f"component pieces are {comp.kind}")
    piece_ids = list(comp.pieces)
    for pi in piece_ids:
        if dec.pieces[pi].kind != "band":
            raise NotArborescent(f"piece {pi} is not a twisted band diagram")
    if choice is None:
        choice = FatPointChoice(piece_ids[0], False)
    if choice.piece not in piece_ids:
        raise MalformedInput(f"fat point piece {choice.piece} not in component")

    # Degree-0 components: a single closed band, nothing to orient.
    if len(piece_ids) == 1 and not dec.pieces[piece_ids[0]].boundary:
        w = dec.pieces[piece_ids[0]].weights[0]
        return PlanarTree(((),), ((w,),), ())

    arr = dec.arrangement
    kinds = [s.kind for s in dec.subs]
    sign_of: dict[int, int] = {}
    for pi in piece_ids:
        pc = dec.pieces[pi]
        for w, tw in zip(pc.weights, pc.twists):
            for x in tw:
                sign_of[x] = 1 if w > 0 else -1

    def is_singleton_circle(k: int) -> bool:
        return any(
            kinds[r].value == "singleton" for r in arr.circle_regions(k)
        )

    # Propagate the shaded-domain choice: rails touching the same
    # circle arc from the two sides bound one domain.
    vertex_of = {pi: i for i, pi in enumerate(piece_ids)}
    region_of_piece = {
        pi: dec.pieces[pi].band_region for pi in piece_ids
    }
    piece_of_band = {r: pi for pi, r in region_of_piece.items()}
    rails = {pi: _rail_faces(dec.subs[region_of_piece[pi]].sub) for pi in piece_ids}

    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    internal_circles = []
    free_circles = []
    for pi in piece_ids:
        r = region_of_piece[pi]
        sub = dec.subs[r].sub
        for mi, (k, side) in enumerate(sub.marker_circles):
            if is_singleton_circle(k):
                continue
            other = next(rr for rr in arr.circle_regions(k) if rr != r)
            if other not in piece_of_band:
                free_circles.append(k)
                continue
            if other < r:
                continue
            internal_circles.append(k)
            osub = dec.subs[other].sub
            omi = [kk for kk, _ in osub.marker_circles].index(k)
            oside = osub.marker_circles[omi][1]
            for corner in _mixed_corners(sub, mi):
                arc = _corner_to_arc(corner, side)
                ocorner = _corner_to_arc(arc, oside)
                f1 = _marker_corner_face(sub, mi, corner)
                f2 = _marker_corner_face(osub, omi, ocorner)
                union((r, f1), (other, f2))

    classes = {find((region_of_piece[pi], f)) for pi in piece_ids for f in rails[pi]}
    if len(piece_ids) > 1 and len(classes) != 2:
        raise InternalInconsistency(
            f"shaded domains split into {len(classes)} classes, expected 2"
        )
    for pi in piece_ids:
        r = region_of_piece[pi]
        if find((r, rails[pi][0])) == find((r, rails[pi][1])):
            raise InternalInconsistency(
                f"both side faces of piece {pi} fell in one domain"
            )
    start_region = region_of_piece[choice.piece]
    chosen = find((start_region, rails[choice.piece][int(choice.domain)]))

    edge_id = {k: i for i, k in enumerate(sorted(internal_circles + free_circles))}
    ends: list[list[int]] = [[] for _ in edge_id]

    rots: list[tuple[int, ...]] = []
    wss: list[tuple[int, ...]] = []
    for pi in piece_ids:
        r = region_of_piece[pi]
        sub = dec.subs[r].sub
        rail = next(
            f for f in rails[pi] if find((r, f)) == chosen
        )
        walk = [d >> 2 for d in sub.proj.faces[rail].boundary]
        ring: list[tuple[str, int]] = []
        for mv in walk:
            k = sub.marker_circles[mv - sub.n_crossings][0]
            if is_singleton_circle(k):
                sr = next(
                    rr
                    for rr in arr.circle_regions(k)
                    if kinds[rr].value == "singleton"
                )
                ring.append(("x", dec.subs[sr].crossings[0]))
            else:
                ring.append(("k", k))
        can_pos = [i for i, t in enumerate(ring) if t[0] == "k"]
        if not can_pos:
            raise InternalInconsistency(f"piece {pi} has no canonical circle")
        rot: list[int] = []
        ws: list[int] = []
        n = len(ring)
        start = can_pos[0]
        cur = 0
        for i in range(1, n + 1):
            kind, val = ring[(start + i) % n]
            if kind == "x":
                cur += sign_of[val]
            else:
                rot.append(edge_id[val])
                ws.append(cur)
                cur = 0
        # ws[j] counts the sector before rot[j]; align to the stored
        # convention (weights[i] sits between edges i-1 and i) and
        # anchor the rotation at its smallest edge id.
        ws = ws[-1:] + ws[:-1]
        a = rot.index(min(rot))
        rots.append(tuple(rot[a:] + rot[:a]))
        wss.append(tuple(ws[a:] + ws[:a]))
        for e in rots[-1]:
            ends[e].append(len(rots) - 1)

    t = PlanarTree(
        tuple(rots),
        tuple(wss),
        tuple(tuple(e) for e in ends),
    )
    validate_tree(t)
    return t


# ============================================================
# Realization
# ============================================================

def fill_free_edge(t: PlanarTree, edge: int, weight: int) -> PlanarTree:
    """Caps a free edge with a new twist vertex of the given weight."""
    if len(t.edge_ends[edge]) != 1:
        raise MalformedInput(f"edge {edge} is not free")
    if abs(weight) < 2:
        raise InvalidWeights("a capping twist needs |weight| >= 2")
    rots = t.rotations + ((edge,),)
    wss = t.weights + ((weight,),)
    ends = tuple(
        tuple(e) + (t.n,) if i == edge else tuple(e)
        for i, e in enumerate(t.edge_ends)
    )
    return PlanarTree(rots, wss, ends)


def _closed_chain(n: int, positive: bool) -> LinkProjection:
    mate = [-1] * (4 * n)
    for t in range(n):
        u = (t + 1) % n
        if positive:
            pairs = ((4 * t + 0, 4 * u + 1), (4 * t + 3, 4 * u + 2))
        else:
            pairs = ((4 * t + 3, 4 * u + 0), (4 * t + 2, 4 * u + 1))
        for a, b in pairs:
            mate[a], mate[b] = b, a
    return LinkProjection(mate=tuple(mate), over=(1,) * n)


def _flip_view(p: LinkProjection) -> LinkProjection:
    """The mirror realization: reflected shadow, over threads swapped.

    Both flips negate every Figure-10 twist sign, so together they
    preserve the coded weights while changing the embedding.
    """
    mate = [0] * len(p.mate)
    for d, m in enumerate(p.mate):
        a = 4 * (d >> 2) + ((-(d & 3)) % 4)
        b = 4 * (m >> 2) + ((-(m & 3)) % 4)
        mate[a] = b
    return LinkProjection(
        mate=tuple(mate), over=tuple(1 - o for o in p.over)
    )


def realize(t: PlanarTree) -> LinkProjection:
    """Builds a projection whose decomposition codes back to t.

    Each vertex becomes a band: blocks of crossings per sector wired as
    twists, interrupted by one portal per edge.  At a portal the two
    bands plumb transversally, the four strands alternating sides
    around the circle; a parallel gluing would let the bands merge into
    one and the circle would not survive minimization.  Of the two
    mirror embeddings the one with the smaller serialization wins.

    Raises:
        FreeEdges: t has a free edge (no closed surface to draw on).
        InvalidWeights: weight bounds or Rule 4 fail at some vertex.
    """
    validate_tree(t, strict=True)
    if any(len(e) == 1 for e in t.edge_ends):
        raise FreeEdges("free edges must be filled before realizing")
    for v in range(t.n):
        signs = {w > 0 for w in t.weights[v] if w != 0}
        if len(signs) > 1:
            raise InvalidWeights(f"vertex {v} mixes twist signs (Rule 4)")

    if t.n == 1:
        w = t.weights[0][0]
        built = _closed_chain(abs(w), w > 0)
    else:
        links: dict[object, list[object]] = {}

        def link(a: object, b: object) -> None:
            links.setdefault(a, []).append(b)
            links.setdefault(b, []).append(a)

        crossings = 0
        over: list[int] = []
        # Per vertex: ring items carry (backward pair, forward pair).
        portal_slots: dict[tuple[int, int], dict[str, object]] = {}
        for v in range(t.n):
            d = t.degree(v)
            ring: list[tuple[object, object]] = []
            for i in range(d):
                e = t.rotations[v][i]
                ps = {
                    tag: ("p", e, v, tag) for tag in ("b0", "b1", "f0", "f1")
                }
                portal_slots[(e, v)] = ps
                ring.append(((ps["b0"], ps["b1"]), (ps["f0"], ps["f1"])))
                w = t.weights[v][(i + 1) % d]
                sign = w > 0
                for _ in range(abs(w)):
                    x = crossings
                    crossings += 1
                    over.append(1)
                    if sign:
                        bwd = (4 * x + 1, 4 * x + 2)
                        fwd = (4 * x + 0, 4 * x + 3)
                    else:
                        bwd = (4 * x + 0, 4 * x + 1)
                        fwd = (4 * x + 3, 4 * x + 2)
                    ring.append((bwd, fwd))
            for i, (_, fwd) in enumerate(ring):
                bwd = ring[(i + 1) % len(ring)][0]
                link(fwd[0], bwd[0])
                link(fwd[1], bwd[1])
        for e, (u, v) in enumerate(t.edge_ends):
            pu, pv = portal_slots[(e, u)], portal_slots[(e, v)]
            link(pu["b0"], pv["b0"])
            link(pu["b1"], pv["f0"])
            link(pu["f1"], pv["f1"])
            link(pu["f0"], pv["b1"])

        mate = [-1] * (4 * crossings)
        for start in range(4 * crossings):
            if mate[start] != -1:
                continue
            prev: object = None
            cur: object = start
            while True:
                nxt = next(x for x in links[cur] if x is not prev)
                if isinstance(nxt, int):
                    mate[start], mate[nxt] = nxt, start
                    break
                prev, cur = cur, nxt
        built = LinkProjection(mate=tuple(mate), over=tuple(over))

    try:
        validate(built)
    except Exception as exc:
        raise InternalInconsistency(f"realized tree is not planar: {exc}") from exc
    other = _flip_view(built)
    return built if serialize(built) <= serialize(other) else other
