"""The twisted cubic: Hilbert data, a generic projection and the Chow constants."""

from stability_forge import (
    Ideal, bidegree_curve, buchberger, hilbert_polynomial, projection_node_count,
    stability_constants,
)
from stability_forge.chow import NonGenericCenterError, project_curve

curve = Ideal.parse(["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"], 4)

#%% reduced Groebner basis and Hilbert polynomial
for g in buchberger(curve).elements:
    print("  ", g)
hd = hilbert_polynomial(curve)
print(f"P(m) = {hd.P}, degree {hd.d}, genus {hd.arithmetic_genus}, mu = {hd.mu}")

#%% bidegree of the singular divisor, checked by projecting to the plane
bd = bidegree_curve(hd.d, int(hd.arithmetic_genus))
print(f"bidegree ({bd.d1}, {bd.d2})")
for center in [(1, 0, 0, 1), (2, -1, 5, 1), (0, 0, 1, 0), (1, 2, 3, 4)]:
    try:
        nodes = projection_node_count(curve, center)
        print(f"  from {center}: {project_curve(curve, center)} has {nodes} node(s)")
    except NonGenericCenterError as exc:
        print(f"  from {center}: rejected ({exc})")

#%% constants entering the double Chow inequality
b = stability_constants(hd.d, hd.n, 3, hd.mu)
print(f"D = {b.D}, beta = {b.beta}, nu1 = {b.nu1}, nu2 = {b.nu2}, volume = {b.volume}")
