import sys
sys.path.insert(0, "src")

from linkproj.projection import LinkProjection, parse_pd, validate
from linkproj.arrangement import (
    circle_key, format_circle, realize_family, vertex_boundary_circle,
)
from linkproj.haseman import (
    are_parallel, enumerate_haseman, is_boundary_parallel, is_compressible,
)
from linkproj.errors import NotDisjoint

TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
HOPF = "X(1,4,2,3) X(3,2,4,1)"
CURL = "X(1,1,2,2)"

def medial(rot):
    edge_id = {}
    for v, nbrs in rot.items():
        for w in nbrs:
            key = frozenset({(v, w), (w, v)})
            if key not in edge_id:
                edge_id[key] = len(edge_id)
    corners = {}
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


def octahedron():
    p = medial({0: [1, 2, 3], 1: [2, 0, 3], 2: [3, 0, 1], 3: [1, 0, 2]})
    validate(p)
    return p

tre = parse_pd(TREFOIL)
hopf = parse_pd(HOPF)
curl = parse_pd(CURL)
oct6 = octahedron()
print("oct faces:", sorted(f.degree for f in oct6.faces))

for name, p, want in [("trefoil", tre, 3), ("hopf", hopf, 1),
                      ("curl", curl, 0), ("6*", oct6, 6)]:
    got = enumerate_haseman(p)
    print(f"{name}: {len(got)} classes (want {want})")
    assert len(got) == want, (name, [format_circle(c) for c in got])

# 6* classes are exactly the six vertex circles
keys = {circle_key(c) for c in enumerate_haseman(oct6)}
vkeys = {circle_key(vertex_boundary_circle(oct6, v)) for v in range(6)}
print("6* classes == vertex circles:", keys == vkeys)

# compressibility
print("curl vertex circle compressible:",
      is_compressible(vertex_boundary_circle(curl, 0), curl))
print("trefoil v0 compressible:",
      is_compressible(vertex_boundary_circle(tre, 0), tre))

# parallelism
v = [vertex_boundary_circle(tre, i) for i in range(3)]
print("trefoil v0 || v1:", are_parallel(v[0], v[1], tre))
print("trefoil v0 || v0:", are_parallel(v[0], v[0], tre))
h = [vertex_boundary_circle(hopf, i) for i in range(2)]
print("hopf v0 || v1:", are_parallel(h[0], h[1], hopf))

# trefoil band region: enumerate inside a bounded subdiagram
arr = realize_family(tre, tuple(v))
assert arr is not None
band_region = next(
    r for r in range(arr.n_regions)
    if arr.submap(r).n_crossings == 0
)
sub = arr.submap(band_region)
inner = enumerate_haseman(sub)
bp = [is_boundary_parallel(c, sub) for c in inner]
print(f"band region: {len(inner)} classes, {sum(bp)} boundary-parallel")

# v=4 band: around-adjacent-pair circles are essential and cross
def closed_chain(n, positive=True):
    mate = [-1] * (4 * n)
    for t in range(n):
        u = (t + 1) % n
        if positive:
            a, b, c, d = 4*t+0, 4*u+1, 4*t+3, 4*u+2
        else:
            a, b, c, d = 4*t+3, 4*u+0, 4*t+2, 4*u+1
        mate[a], mate[b] = b, a
        mate[c], mate[d] = d, c
    return LinkProjection(mate=tuple(mate), over=(1,) * n)

ch4 = closed_chain(4)
validate(ch4)
w = [vertex_boundary_circle(ch4, i) for i in range(4)]
arr4 = realize_family(ch4, tuple(w))
band4 = next(r for r in range(arr4.n_regions)
             if arr4.submap(r).n_crossings == 0)
sub4 = arr4.submap(band4)
inner4 = enumerate_haseman(sub4)
bp4 = [is_boundary_parallel(c, sub4) for c in inner4]
print(f"4-band region: {len(inner4)} classes, {sum(bp4)} boundary-parallel")
others = [c for c, b in zip(inner4, bp4) if not b]
hits = 0
for i in range(len(others)):
    for j in range(i + 1, len(others)):
        try:
            are_parallel(others[i], others[j], sub4.proj)
        except NotDisjoint:
            hits += 1
print("NotDisjoint pairs among essential 4-band circles:", hits)

# singleton region: one class, boundary parallel
sing_region = next(
    r for r in range(arr.n_regions)
    if arr.submap(r).n_crossings == 1
)
ssub = arr.submap(sing_region)
sinner = enumerate_haseman(ssub)
print("singleton region classes:", len(sinner),
      "bp:", [is_boundary_parallel(c, ssub) for c in sinner])
