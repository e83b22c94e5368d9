"""Link projections as 4-valent planar combinatorial maps.

A projection with c crossings is stored as a rotation system on the dart
set 0..4c-1: dart d lives at crossing d >> 2 in counter-clockwise slot
d & 3, and an involution pairs each dart with the other end of its edge.
Over/under data is one bit per crossing: bit 1 means the over-thread
occupies the odd slots. Faces, checkerboard colorings, Listing sector
labels, alternation and primality tests are all derived from this data.

Example:
    >>> p = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
    >>> p.c, len(faces(p))
    (3, 5)
    >>> is_alternating(p)
    True
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .errors import (
    CrossingFree,
    Disconnected,
    InternalInconsistency,
    MalformedInput,
    NonPlanar,
)


# ============================================================
# Enums and small value types
# ============================================================

class SectorLabel(str, Enum):
    """Listing's two sector labels at a crossing corner."""

    LAMBDA = "lambda"
    DELTA = "delta"


class FaceColor(str, Enum):
    """Checkerboard colors."""

    BLACK = "black"
    WHITE = "white"


@dataclass(frozen=True)
class Dart:
    """One of the four half-edges at a crossing.

    Darts are encoded as integers 4 * crossing + slot; this class is the
    unpacked view for presentation and debugging.
    """

    id: int

    @property
    def crossing(self) -> int:
        return self.id >> 2

    @property
    def slot(self) -> int:
        return self.id & 3


@dataclass(frozen=True)
class Face:
    """A complementary region of the projection.

    The boundary lists darts in face-tracing order; the face lies on the
    right of each of its darts, so the walk runs clockwise around the
    face interior.
    """

    id: int
    boundary: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.boundary)


@dataclass(frozen=True)
class Checkerboard:
    """A proper 2-coloring of the faces."""

    color: tuple[FaceColor, ...]

    def __getitem__(self, face_id: int) -> FaceColor:
        return self.color[face_id]


# ============================================================
# The projection itself
# ============================================================

def _rot(d: int) -> int:
    # Next dart counter-clockwise at the same crossing.
    return (d & ~3) | ((d + 1) & 3)


@dataclass(frozen=True)
class LinkProjection:
    """A connected 4-valent map on the sphere with over/under data.

    Attributes:
        mate: fixed-point-free involution on darts; mate[d] is the other
            end of d's edge.
        over: per-crossing bit; 1 means the over-thread lies in slots 1
            and 3, 0 means slots 0 and 2.
    """

    mate: tuple[int, ...]
    over: tuple[int, ...]

    @property
    def c(self) -> int:
        return len(self.over)

    @property
    def n_darts(self) -> int:
        return len(self.mate)

    # ---- derived combinatorics (cached; the value is immutable) ----

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        """Faces traced by dart -> rot(mate(dart)); face on the right."""
        seen = [False] * self.n_darts
        out: list[Face] = []
        for start in range(self.n_darts):
            if seen[start]:
                continue
            walk = []
            d = start
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = _rot(self.mate[d])
            out.append(Face(id=len(out), boundary=tuple(walk)))
        return tuple(out)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        """Map dart -> id of the face on its right."""
        fo = [-1] * self.n_darts
        for f in self.faces:
            for d in f.boundary:
                fo[d] = f.id
        return tuple(fo)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as (dart, mate) pairs with dart < mate; index = edge id."""
        return tuple(
            (d, self.mate[d]) for d in range(self.n_darts) if d < self.mate[d]
        )

    @cached_property
    def edge_of(self) -> tuple[int, ...]:
        """Map dart -> edge id."""
        eo = [-1] * self.n_darts
        for i, (a, b) in enumerate(self.edges):
            eo[a] = eo[b] = i
        return tuple(eo)

    @cached_property
    def face_pos(self) -> tuple[int, ...]:
        """Map dart -> index of the dart in its face's boundary walk."""
        fp = [-1] * self.n_darts
        for f in self.faces:
            for i, d in enumerate(f.boundary):
                fp[d] = i
        return tuple(fp)

    def faces_of_edge(self, e: int) -> tuple[int, int]:
        """The two (always distinct) faces bordering edge e."""
        a, b = self.edges[e]
        return self.face_of[a], self.face_of[b]

    def corner_face(self, crossing: int, corner: int) -> int:
        """Face occupying the sector between slots corner and corner+1."""
        return self.face_of[4 * crossing + ((corner + 1) & 3)]


# ============================================================
# Parsing and serialization
# ============================================================

_TOKEN = re.compile(r"X\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def _strip_comments(text: str) -> str:
    # Keep character positions: blank out comments instead of deleting.
    out = []
    for line in text.split("\n"):
        cut = line.find("#")
        if cut >= 0:
            line = line[:cut] + " " * (len(line) - cut)
        out.append(line)
    return "\n".join(out)


def parse_pd(text: str) -> LinkProjection:
    """Parses PD-code text into a validated projection.

    The format is a sequence of crossing records X(a,b,c,d), separated
    by whitespace or commas, with `#` comments. Labels are listed
    counter-clockwise from the incoming under-dart, so the over-thread
    occupies slots 1 and 3. Every edge label must occur exactly twice.

    Args:
        text: PD-code source.

    Returns:
        The parsed projection.

    Raises:
        MalformedInput: bad token or label multiplicity != 2.
        CrossingFree: no crossing records.
        Disconnected: underlying graph not connected.
        NonPlanar: Euler face count differs from c + 2.
    """
    src = _strip_comments(text)
    slots: list[tuple[int, int, int, int]] = []
    pos = 0
    n = len(src)
    while pos < n:
        ch = src[pos]
        if ch.isspace() or ch == ",":
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise MalformedInput(
                f"expected crossing record X(a,b,c,d) at offset {pos}",
                position=pos,
            )
        slots.append(tuple(int(g) for g in m.groups()))  # type: ignore[arg-type]
        pos = m.end()

    if not slots:
        raise CrossingFree("no crossings: at least one X(...) record required")

    occurrences: dict[int, list[int]] = {}
    for x, labels in enumerate(slots):
        for s, lab in enumerate(labels):
            occurrences.setdefault(lab, []).append(4 * x + s)
    for lab, darts in occurrences.items():
        if len(darts) != 2:
            raise MalformedInput(
                f"edge label {lab} occurs {len(darts)} times, expected 2"
            )

    mate = [-1] * (4 * len(slots))
    for a, b in occurrences.values():
        mate[a], mate[b] = b, a

    proj = LinkProjection(mate=tuple(mate), over=(1,) * len(slots))
    validate(proj)
    return proj


def validate(p: LinkProjection) -> None:
    """Checks connectivity and sphericity of a directly built projection.

    parse_pd() calls this on every parse; code that assembles a
    LinkProjection from raw mate tables should call it too.

    Raises:
        CrossingFree, Disconnected, NonPlanar: as for parse_pd().
    """
    if p.c < 1:
        raise CrossingFree("projection must have at least one crossing")
    # Connectivity over crossings through edges.
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for s in range(4):
            y = p.mate[4 * x + s] >> 2
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != p.c:
        raise Disconnected(
            f"projection has {p.c} crossings but only {len(seen)} reachable"
        )
    if len(p.faces) != p.c + 2:
        raise NonPlanar(
            f"Euler check failed: {len(p.faces)} faces, expected {p.c + 2}"
        )


def _relabel(p: LinkProjection, start: int, direction: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """BFS dart relabeling anchored at start; direction -1 mirrors."""
    order: list[int] = []
    anchor: dict[int, tuple[int, int]] = {}

    def visit(d: int) -> None:
        anchor[d >> 2] = (len(order), d & 3)
        order.append(d >> 2)

    visit(start)
    i = 0
    while i < 4 * len(order):
        xo = order[i >> 2]
        a = anchor[xo][1]
        d_old = 4 * xo + ((a + direction * (i & 3)) & 3)
        m_old = p.mate[d_old]
        if (m_old >> 2) not in anchor:
            visit(m_old)
        i += 1

    def new_id(d: int) -> int:
        xn, a = anchor[d >> 2]
        return 4 * xn + ((direction * ((d & 3) - a)) & 3)

    new_mate = [-1] * p.n_darts
    for d in range(p.n_darts):
        new_mate[new_id(d)] = new_id(p.mate[d])
    new_over = [0] * p.c
    for xo, (xn, a) in anchor.items():
        # Slot parity flips exactly when the anchor slot is odd.
        new_over[xn] = p.over[xo] ^ (a & 1)
    return tuple(new_mate), tuple(new_over)


def canonical_form(
    p: LinkProjection, with_over: bool = True, oriented: bool = False
) -> tuple:
    """Canonical key of the map up to isomorphism (incl. reflection).

    Minimum over all start darts and both global orientations of the
    relabeled (mate, over) data. With with_over=False the over bits are
    dropped, giving the canonical key of the underlying shadow. With
    oriented=True the reflection is not quotiented out, so mirror
    images of a chiral diagram get distinct keys.
    """
    best = None
    for direction in ((1,) if oriented else (1, -1)):
        for start in range(p.n_darts):
            m, o = _relabel(p, start, direction)
            key = (m, o) if with_over else (m,)
            if best is None or key < best:
                best = key
    assert best is not None
    return best


def canonical_projection(p: LinkProjection) -> LinkProjection:
    """The canonical representative of p's isomorphism class."""
    m, o = canonical_form(p, with_over=True)
    return LinkProjection(mate=m, over=o)


def serialize(p: LinkProjection) -> str:
    """Deterministic PD re-emission from the canonical relabeling.

    parse_pd(serialize(p)) is isomorphic to p (same canonical form).
    Only orientation-preserving relabelings compete here: reflecting
    would silently swap a chiral diagram for its mirror and negate
    every twist weight computed downstream.
    """
    m, o = canonical_form(p, with_over=True, oriented=True)
    canon = LinkProjection(mate=m, over=o)
    label_of_edge: dict[int, int] = {}
    next_label = 1
    labels = [0] * canon.n_darts
    for d in range(canon.n_darts):
        e = canon.edge_of[d]
        if e not in label_of_edge:
            label_of_edge[e] = next_label
            next_label += 1
        labels[d] = label_of_edge[e]
    records = []
    for x in range(canon.c):
        ls = [labels[4 * x + s] for s in range(4)]
        # Start at an under slot so re-parsing restores the over bit.
        starts = (0, 2) if canon.over[x] == 1 else (1, 3)
        a, b = (tuple(ls[(s + k) & 3] for k in range(4)) for s in starts)
        records.append("X(%d,%d,%d,%d)" % min(a, b))
    return " ".join(records)


# ============================================================
# Predicates and labelings
# ============================================================

def faces(p: LinkProjection) -> tuple[Face, ...]:
    """All faces of the projection (count is always c + 2)."""
    return p.faces


def is_prime(p: LinkProjection) -> bool:
    """True iff no 2-point circle splits the crossings in two.

    A separating 2-point circle crosses two distinct edges bordering a
    common pair of faces, and its existence is equivalent to those two
    edges disconnecting the crossing graph when removed.
    """
    by_face_pair: dict[tuple[int, int], list[int]] = {}
    for e in range(len(p.edges)):
        f, g = p.faces_of_edge(e)
        key = (f, g) if f < g else (g, f)
        by_face_pair.setdefault(key, []).append(e)
    for group in by_face_pair.values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                if _separates(p, group[i], group[j]):
                    return False
    return True


def _separates(p: LinkProjection, e1: int, e2: int) -> bool:
    """True iff removing edges e1, e2 disconnects the crossing graph."""
    banned = {e1, e2}
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for s in range(4):
            d = 4 * x + s
            if p.edge_of[d] in banned:
                continue
            y = p.mate[d] >> 2
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) != p.c


def listing_labels(p: LinkProjection) -> dict[tuple[int, int], SectorLabel]:
    """Labels each crossing corner lambda or delta.

    Corner j at a crossing is the sector between slots j and j+1. The
    two corners swept counter-clockwise from the over-thread to the
    under-thread get lambda; with the over-thread at odd slots these are
    the odd corners, so label(x, j) = lambda iff j % 2 == over[x].
    """
    out: dict[tuple[int, int], SectorLabel] = {}
    for x in range(p.c):
        for j in range(4):
            lam = (j & 1) == p.over[x]
            out[(x, j)] = SectorLabel.LAMBDA if lam else SectorLabel.DELTA
    return out


def face_is_monotyp(p: LinkProjection, face: Face,
                    labels: dict[tuple[int, int], SectorLabel]) -> bool:
    """True iff all sectors of the face carry the same label."""
    corner_labels = {
        labels[(d >> 2, ((d & 3) - 1) & 3)] for d in face.boundary
    }
    return len(corner_labels) == 1


def _strand_alternates(p: LinkProjection) -> bool:
    # Walk each strand straight through crossings; record over/under.
    seen = [False] * p.n_darts
    for start in range(p.n_darts):
        if seen[start]:
            continue
        passes = []
        d = start
        while not seen[d]:
            seen[d] = True
            m = p.mate[d]
            passes.append((m & 1) == p.over[m >> 2])
            d = (m & ~3) | ((m + 2) & 3)
        if any(a == b for a, b in zip(passes, passes[1:] + passes[:1])):
            return False
    return True


def is_alternating(p: LinkProjection) -> bool:
    """True iff over/under alternates along every strand.

    Computed twice: by walking strands, and by Listing's criterion that
    every face is monotyp. The two must agree.

    Raises:
        InternalInconsistency: the two criteria disagree (a bug).
    """
    by_strands = _strand_alternates(p)
    labels = listing_labels(p)
    by_monotyp = all(face_is_monotyp(p, f, labels) for f in p.faces)
    if by_strands != by_monotyp:
        raise InternalInconsistency(
            f"strand alternation says {by_strands}, "
            f"monotyp criterion says {by_monotyp}"
        )
    return by_strands


def checkerboard(p: LinkProjection) -> Checkerboard:
    """Proper 2-coloring of the faces; face of dart 0 is black."""
    color: list[FaceColor | None] = [None] * len(p.faces)
    root = p.face_of[0]
    color[root] = FaceColor.BLACK
    stack = [root]
    while stack:
        f = stack.pop()
        flip = (FaceColor.WHITE if color[f] == FaceColor.BLACK
                else FaceColor.BLACK)
        for d in p.faces[f].boundary:
            g = p.face_of[p.mate[d]]
            if color[g] is None:
                color[g] = flip
                stack.append(g)
            elif color[g] == color[f]:
                raise InternalInconsistency(
                    f"faces {f} and {g} share an edge and a color"
                )
    assert all(col is not None for col in color)
    return Checkerboard(color=tuple(color))  # type: ignore[arg-type]


def make_alternating(p: LinkProjection) -> LinkProjection:
    """The alternating projection with the same shadow.

    Over bits are chosen from the checkerboard so that every black
    sector gets label lambda, which makes every face monotyp.
    """
    board = checkerboard(p)
    over = tuple(
        0 if board[p.corner_face(x, 0)] == FaceColor.BLACK else 1
        for x in range(p.c)
    )
    return LinkProjection(mate=p.mate, over=over)
