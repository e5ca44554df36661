"""Jet-level bookkeeping: chart fibrations, stable levels, dimensions.

The resolution map induces affine-space fibrations on jet spaces; their
dimensions k_i (nu_i - 1) explain the degree shifts in the page assembly.
These are checked here by raw enumeration on a blowup chart, together
with the level at which the contact strata stabilize.
"""

from contactloci import (
    fiber_dimension,
    resolve_plane_curve,
    stabilization_level,
    stratum_dimension,
    verify_chart_fibration,
)

# x = y1 * y2, restricted to jets where y2 has order exactly m: every
# fiber of the induced map on level-l jets is an affine space of
# dimension (nu - 1) m = m here.
for m in (0, 1, 2):
    report = verify_chart_fibration(m, m + 1, 3, d=2, nu=2)
    print(f"chart fibration m={m}: fibers of size {report.expected_fiber} "
          f"over {report.n_images} images -> {'ok' if report.passed else 'BROKEN'}")

cusp, _ = resolve_plane_curve("x^2 + y^3")
print()
for m in (2, 3, 6):
    print(f"m = {m}:")
    print("  stabilization level:", stabilization_level(cusp, m))
    for d in cusp.divisors:
        if d.over_sigma and m % d.mult == 0:
            k = m // d.mult
            dim = stratum_dimension(cusp, d.id, m)
            fiber = fiber_dimension(cusp, {d.id: k})
            print(f"  {d.label}: contact stratum dimension {dim}, "
                  f"resolution fiber dimension {fiber}")
