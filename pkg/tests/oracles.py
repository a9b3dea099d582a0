"""Independent reference computations used by the tests.

Nothing here calls the package's own enumeration or coset code.
"""

import itertools

import numpy as np


def brute_force_rigid(max_degree: int, bound: int) -> set:
    """All (a, b, c, d) with entries in [-bound, bound], degree in
    [2, max_degree] and the four normalization inequalities, by vectorized
    filtering of the full box."""
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    found = set()
    a, d = np.meshgrid(r, r, indexing="ij")
    a, d = a.ravel(), d.ravel()
    for c in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            deg = a * d - b * c
            ok = (deg >= 2) & (deg <= max_degree)
            ok &= 2 * a >= -c
            ok &= (d >= a - c + 1) & (d >= -a) & (d <= a + c)
            ok &= b <= -c
            if b == -c:
                ok &= d >= a
            ok &= (a - d) ** 2 + 4 * b * c < 0
            for x, y in zip(a[ok], d[ok]):
                found.add((int(x), b, c, int(y)))
    return found


def subgroup_image_mod2(M) -> set:
    """Image of (alpha+1)Lambda + 2Lambda in Lambda/2Lambda, by listing every
    combination of the two generators."""
    a, b, c, d = M
    g1, g2 = ((a + 1) % 2, c % 2), (b % 2, (d + 1) % 2)
    return {((x * g1[0] + y * g2[0]) % 2, (x * g1[1] + y * g2[1]) % 2)
            for x, y in itertools.product((0, 1), repeat=2)}


def coset_reps_ok(M, reps) -> bool:
    image = subgroup_image_mod2(M)
    if len(reps) != 4 // len(image):
        return False
    for r, s in itertools.combinations(reps, 2):
        if ((r[0] - s[0]) % 2, (r[1] - s[1]) % 2) in image:
            return False
    return True
