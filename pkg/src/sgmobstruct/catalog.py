"""Fixed catalog of manifolds addressable by name.

Each entry ships ring data that passes the model validators: complex
projective planes and 3-folds with their full integral rings, real
projective spaces with hand-written mod-2 rings, the Wu manifold, and a
six-dimensional fixture with three independent degree-2 classes, 2-torsion
in degree 3, and exactly one declared mod-2 product.  Data the entry does
not pin down stays unknown rather than being guessed.
"""

from __future__ import annotations

from .cohomology import CohomologyModel, ManifoldModel, homs_from_matrices
from .errors import BuildError


def complex_projective(c: int) -> ManifoldModel:
    """Complex projective space of complex dimension c (2 or 3)."""
    c = int(c)
    if c not in (2, 3):
        raise BuildError(f"complex projective entries cover complex dimension 2 and 3, not {c}")
    m = 2 * c
    groups = {2 * i: (0,) for i in range(c + 1)}
    names = {0: ("1",), 2: ("g",)}
    for i in range(2, c + 1):
        names[2 * i] = (f"g^{i}",)
    products = {(2, 0, 2, 0): (1,)}
    if c == 3:
        products[(2, 0, 4, 0)] = (1,)
    manifold = ManifoldModel(f"cp({c})", m, orientable=True, simply_connected=True)
    manifold.add_ring(CohomologyModel(m, 0, groups, names, products))
    manifold.catalog_tags.add("complex-projective")
    return manifold


def real_projective(n: int) -> ManifoldModel:
    """Real projective n-space for 1 <= n <= 7, with its hand mod-2 ring.

    Integral products are left unknown; the mod-2 ring is the complete
    truncated polynomial ring on the degree-1 class w.
    """
    n = int(n)
    if not 1 <= n <= 7:
        raise BuildError(f"real projective entries cover dimensions 1..7, not {n}")
    orientable = n % 2 == 1
    groups = {0: (0,)}
    names = {0: ("1",)}
    for j in range(2, n + 1, 2):
        groups[j] = (2,)
        names[j] = (f"t{j}",)
    if n % 2 == 1:
        groups[n] = (0,)
        names[n] = ("top",)
    integral = CohomologyModel(n, 0, groups, names, orientable=orientable)

    mod_groups = {j: (2,) for j in range(n + 1)}
    mod_names = {0: ("1",), 1: ("w",)}
    for j in range(2, n + 1):
        mod_names[j] = (f"w^{j}",)
    mod_products = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1 - i):
            mod_products[(i, 0, j, 0)] = (1,)
    modular = CohomologyModel(n, 2, mod_groups, mod_names, mod_products, orientable=orientable)

    matrices = {0: [[1]]}
    for j in range(2, n + 1, 2):
        matrices[j] = [[1]]
    if n % 2 == 1:
        matrices[n] = [[1]]

    manifold = ManifoldModel(f"rp({n})", n, orientable=orientable, simply_connected=False)
    manifold.add_ring(integral)
    manifold.attach_reduction(modular, homs_from_matrices(integral, modular, matrices))
    manifold.catalog_tags.add("real-projective")
    return manifold


def wu_manifold() -> ManifoldModel:
    """The simply-connected 5-manifold with 2-torsion second homology.

    Integrally there is nothing between degrees 0 and 5 but a Z/2 in degree
    3; mod 2 the ring has classes z2, z3 with z2 cup z3 the top class.
    """
    integral = CohomologyModel(
        5,
        0,
        {0: (0,), 3: (2,), 5: (0,)},
        {0: ("1",), 3: ("t",), 5: ("top",)},
    )
    modular = CohomologyModel(
        5,
        2,
        {0: (2,), 2: (2,), 3: (2,), 5: (2,)},
        {0: ("1",), 2: ("z2",), 3: ("z3",), 5: ("top",)},
        {(2, 0, 3, 0): (1,)},
    )
    matrices = {0: [[1]], 3: [[1]], 5: [[1]]}
    manifold = ManifoldModel("wu", 5, orientable=True, simply_connected=True)
    manifold.add_ring(integral)
    manifold.attach_reduction(modular, homs_from_matrices(integral, modular, matrices))
    return manifold


def m0_fixture() -> ManifoldModel:
    """A six-dimensional fixture with partially-known mod-2 products.

    Second cohomology has rank 3, degree 3 carries a Z/2, and degree 4 is
    Z/2 + Z^3.  Mod 2 each middle degree gains a torsion-born class; the
    one declared product is e2 cup e4 = f1, the reduction of the degree-4
    torsion class.  All other middle products are left unknown.
    """
    integral = CohomologyModel(
        6,
        0,
        {0: (0,), 2: (0, 0, 0), 3: (2,), 4: (2, 0, 0, 0), 6: (0,)},
        {
            0: ("1",),
            2: ("a1", "a2", "a3"),
            3: ("t",),
            4: ("u", "b1", "b2", "b3"),
            6: ("top",),
        },
    )
    modular = CohomologyModel(
        6,
        2,
        {0: (2,), 2: (2, 2, 2, 2), 3: (2, 2), 4: (2, 2, 2, 2), 6: (2,)},
        {
            0: ("1",),
            2: ("e1", "e2", "e3", "e4"),
            3: ("c1", "c2"),
            4: ("f1", "f2", "f3", "f4"),
            6: ("top",),
        },
        {(2, 1, 2, 3): (1, 0, 0, 0)},
    )
    matrices = {
        0: [[1]],
        # e1 is torsion-born; a1, a2, a3 land on e2, e3, e4
        2: [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
        3: [[1], [0]],
        4: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        6: [[1]],
    }
    manifold = ManifoldModel("m0", 6, orientable=True, simply_connected=True)
    manifold.add_ring(integral)
    manifold.attach_reduction(modular, homs_from_matrices(integral, modular, matrices))
    return manifold


_BUILDERS = {
    "cp2": lambda: complex_projective(2),
    "cp3": lambda: complex_projective(3),
    "wu": wu_manifold,
    "m0": m0_fixture,
}
for _n in range(1, 8):
    _BUILDERS[f"rp{_n}"] = (lambda n: lambda: real_projective(n))(_n)


def catalog(name: str) -> ManifoldModel:
    """Look up a catalog entry by case-insensitive name."""
    builder = _BUILDERS.get(str(name).strip().lower())
    if builder is None:
        raise BuildError(f"unknown catalog name {name!r}")
    return builder()
