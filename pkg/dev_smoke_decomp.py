"""Dev smoke: decomposition pipeline on the standard small cases."""

from __future__ import annotations

from linkproj.projection import LinkProjection, parse_pd, is_alternating, is_prime
from linkproj.arrangement import circle_key, format_circle
from linkproj.decomposition import (
    CircleFamily,
    SubdiagramClass,
    TwistedBandDiagram,
    Jewel,
    assemble,
    canonical_family,
    classify_subdiagram,
    decompose,
    maximal_family,
    minimize,
    subdiagrams,
)
from linkproj.errors import MalformedInput, NotConway, Rule3Violation

TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
HOPF = "X(1,4,2,3) X(3,2,4,1)"
CURL = "X(1,1,2,2)"
SUM = "X(13,4,2,5) X(3,6,4,1) X(5,2,6,3) X(1,10,8,11) X(9,12,10,13) X(11,8,12,9)"


def closed_chain(n: int, positive: bool = True) -> LinkProjection:
    mate = [-1] * (4 * n)
    for t in range(n):
        u = (t + 1) % n
        if positive:
            a, b, c, d = 4 * t + 0, 4 * u + 1, 4 * t + 3, 4 * u + 2
        else:
            a, b, c, d = 4 * t + 3, 4 * u + 0, 4 * t + 2, 4 * u + 1
        mate[a], mate[b] = b, a
        mate[c], mate[d] = d, c
    return LinkProjection(mate=tuple(mate), over=(1,) * n)


def medial(rot: dict) -> LinkProjection:
    edge_id: dict = {}
    for v, nbrs in rot.items():
        for w in nbrs:
            key = frozenset({(v, w), (w, v)})
            if key not in edge_id:
                edge_id[key] = len(edge_id)
    corners: dict = {}
    for key, e in edge_id.items():
        (u, v), _ = sorted(key)
        iu, iv = rot[u].index(v), rot[v].index(u)
        du, dv = len(rot[u]), len(rot[v])
        for slot, corner in enumerate([
            (u, (iu - 1) % du), (v, iv), (v, (iv - 1) % dv), (u, iu),
        ]):
            corners.setdefault(corner, []).append(4 * e + slot)
    mate = [-1] * (4 * len(edge_id))
    for ds in corners.values():
        a, b = ds
        mate[a], mate[b] = b, a
    return LinkProjection(mate=tuple(mate), over=(1,) * len(edge_id))


def pretzel(qs: tuple[int, ...]) -> LinkProjection:
    """Vertical twists of lengths qs, tops and bottoms closed cyclically."""
    n = sum(qs)
    base = [0]
    for q in qs:
        base.append(base[-1] + q)
    mate = [-1] * (4 * n)

    def join(a: int, b: int) -> None:
        mate[a], mate[b] = b, a

    for i, q in enumerate(qs):
        for t in range(q - 1):
            x, y = base[i] + t, base[i] + t + 1
            join(4 * x + 2, 4 * y + 1)
            join(4 * x + 3, 4 * y + 0)
    m = len(qs)
    for i in range(m):
        j = (i + 1) % m
        top_i, top_j = base[i], base[j]
        bot_i, bot_j = base[i] + qs[i] - 1, base[j] + qs[j] - 1
        join(4 * top_i + 0, 4 * top_j + 1)
        join(4 * bot_i + 3, 4 * bot_j + 2)
    return LinkProjection(mate=tuple(mate), over=(1,) * n)


def show(name, p):
    d = decompose(p)
    kinds = [s.kind.value for s in d.subs]
    print(f"{name}: c={p.c} |C_m|={len(d.minimal)} |C_can|={len(d.canonical)}")
    print(f"  region kinds: {kinds}")
    for i, pc in enumerate(d.pieces):
        if isinstance(pc, TwistedBandDiagram):
            print(f"  piece {i}: band weights={pc.weights} k+1={len(pc.boundary)}")
        else:
            print(f"  piece {i}: jewel crossings={len(pc.crossings)} "
                  f"boundary={len(pc.boundary)}")
    print(f"  components: {[(c.kind, c.pieces) for c in d.components]}")
    print(f"  rule4_ok={d.rule4_ok}")
    return d


trefoil = parse_pd(TREFOIL)
d = show("trefoil", trefoil)
assert len(d.minimal) == 3 and len(d.canonical) == 0
assert len(d.pieces) == 1 and isinstance(d.pieces[0], TwistedBandDiagram)
assert d.pieces[0].weights in ((3,), (-3,)), d.pieces[0].weights
assert d.pieces[0].boundary == ()
assert d.components[0].kind == "arborescent"

hopf = parse_pd(HOPF)
d = show("hopf", hopf)
assert len(d.minimal) == 1 and len(d.canonical) == 0
assert d.pieces[0].weights == (2,), d.pieces[0].weights

oct6 = medial({0: [1, 2, 3], 1: [2, 0, 3], 2: [3, 0, 1], 3: [1, 0, 2]})
d = show("6*", oct6)
assert len(d.minimal) == 6 and len(d.canonical) == 0
assert len(d.pieces) == 1 and isinstance(d.pieces[0], Jewel)
assert len(d.pieces[0].crossings) == 6
assert d.components[0].kind == "polyhedral"

for n in (4, 5):
    d = show(f"chain{n}", closed_chain(n))
    assert len(d.minimal) == n and len(d.canonical) == 0
    assert d.pieces[0].weights in ((n,), (-n,)), d.pieces[0].weights

p222 = pretzel((2, 2, 2))
d = show("P(2,2,2)", p222)
assert len(d.minimal) == 9 and len(d.canonical) == 3
bands = [pc for pc in d.pieces if isinstance(pc, TwistedBandDiagram)]
assert len(bands) == 4 and len(d.pieces) == 4
leaf = sorted(pc.weights for pc in bands if len(pc.boundary) == 1)
assert leaf in ([(-2,), (-2,), (-2,)], [(2,), (2,), (2,)]), leaf
center = [pc for pc in bands if len(pc.boundary) == 3]
assert len(center) == 1 and center[0].weights == (0, 0, 0)
assert len(d.components) == 1 and d.components[0].kind == "arborescent"

p2233 = pretzel((2, 2, 3, 3))
d = show("P(2,2,3,3)", p2233)
assert len(d.canonical) == 4
leaf = sorted(tuple(abs(w) for w in pc.weights)
              for pc in d.pieces if len(pc.boundary) == 1)
assert leaf == [(2,), (2,), (3,), (3,)], leaf

# Curl: no incompressible circles, sphere region is neither S/B/B.
try:
    decompose(parse_pd(CURL))
    raise SystemExit("curl should not be Conway")
except NotConway as e:
    print(f"curl: NotConway ({e})")

# Connected sum: not prime.
try:
    decompose(parse_pd(SUM))
    raise SystemExit("sum should be rejected")
except MalformedInput as e:
    print(f"sum: MalformedInput ({e})")

# Non-alternating 2-chain: Rule 3 violation.
bad = LinkProjection(mate=hopf.mate, over=(1, 0))
assert not is_alternating(bad)
try:
    decompose(bad)
    raise SystemExit("non-alternating 2-chain should violate rule 3")
except Rule3Violation as e:
    print(f"bad hopf: Rule3Violation ({e})")

# Non-alternating trefoil: one twist, mixed signs.
bad3 = LinkProjection(mate=trefoil.mate, over=(1, 1, 0))
try:
    decompose(bad3)
    raise SystemExit("mixed-sign trefoil should violate rule 3")
except Rule3Violation as e:
    print(f"bad trefoil: Rule3Violation ({e})")

# Seed independence of C_m.
for p, name in ((trefoil, "trefoil"), (oct6, "6*"), (p222, "P(2,2,2)")):
    base = {circle_key(c) for c in decompose(p).minimal}
    for seed in range(10):
        got = {circle_key(c) for c in decompose(p, seed=seed).minimal}
        assert got == base, (name, seed)
print("seed independence ok")

print("ALL DECOMP SMOKE OK")
