"""Three ways to degenerate a smooth conic.

The conic x0*x2 = x1^2 is pushed to a limit by three diagonal 1-psgs.  One
limit is a pair of lines, one is a doubled line, and one leaves the conic
where it is.  The Futaki invariant sees all three; the Lu slope agrees with
it only when the limit stays reduced.
"""

from stability_forge import (
    HypersurfaceProblem, Ideal, donaldson_futaki, initial_ideal, lu_slope,
    psi_profile, weight_polynomial,
)
from stability_forge.groebner import is_multiplicity_free
from stability_forge.hypersurface import lu_integral

conic = Ideal.parse(["x0*x2 - x1^2"], 3)
f = conic.generators[0]

#%% the three weights
for w in [(1, -1, 0), (1, 1, -2), (1, 0, -1)]:
    limit = initial_ideal(conic, w)
    W = weight_polynomial(conic, w).W
    F1 = donaldson_futaki(conic, w)
    p = HypersurfaceProblem(f, w)
    print(f"w = {w}")
    print(f"  flat limit      {', '.join(map(str, limit.generators))}")
    print(f"  W(m)            {W}")
    print(f"  F1              {F1}   (4*F1 = {4 * F1})")
    print(f"  reduced limit   {is_multiplicity_free(f, w)}")
    print(f"  lu slope        {lu_slope(p)}")

#%% where the mismatch comes from
# For w = (1,1,-2) the limit is x1^2 = 0.  The profile in the x1 direction has
# a stretch of slope 2, and its defect integral eats the whole naive slope.
p = HypersurfaceProblem(f, (1, 1, -2))
psi = psi_profile(p, 1)
print("psi_1 pieces (start, slope, value):", [tuple(map(str, piece)) for piece in psi.pieces])
print("defect integral:", lu_integral(psi))
