"""Builders for spheres, cartesian products, and connected sums.

Product rings come from the tensor decomposition of the factor rings.  Over
the integers this is exact only when all but at most one factor is torsion
free, so no correction terms appear; over a prime modulus it is exact with
no side condition.  Connected sums glue the positive-degree parts of the
summands blockwise under a shared unit and top class.
"""

import math
from collections import namedtuple

from .abelian import FgAbGroup, Hom, normalized_cyclic_sum
from .cohomology import (
    UNKNOWN,
    CohomologyModel,
    ManifoldModel,
    _is_prime,
    assemble_products,
)
from .errors import BuildError, UnsupportedProductError


def sphere(n: int, label=None) -> ManifoldModel:
    """The n-sphere, n >= 1.  label overrides the top generator's name."""
    n = int(n)
    if n < 1:
        raise BuildError(f"sphere dimension must be at least 1, got {n}")
    name = str(label) if label else f"s{n}#1"
    model = CohomologyModel(n, 0, {0: (0,), n: (0,)}, {0: ("1",), n: (name,)})
    out = ManifoldModel(f"sphere({n})", n, True, n >= 2)
    out.add_ring(model)
    return out


def ensure_moduli(manifold: ManifoldModel, moduli) -> None:
    """Derive any missing mod k rings from the integral one."""
    for k in sorted({int(k) for k in moduli}):
        if k < 2 or k in manifold.rings:
            continue
        manifold.derive_modular(k)


# -- tensor decomposition of a product of two rings -----------------------

# one summand per pair of factor generators; descs[pos] = (i, a, j, b) says
# summand pos is (degree-i generator a of the left ring) times (degree-j
# generator b of the right ring)
TensorLayout = namedtuple("TensorLayout", "group names injections sections descs index")


def _join(na: str, nb: str) -> str:
    if na == "1" and nb == "1":
        return "1"
    return f"{na}⊗{nb}"


def _has_torsion(model: CohomologyModel) -> bool:
    return any(model.group(j).torsion_factors for j in model.positive_degrees())


def tensor_pair(a: CohomologyModel, b: CohomologyModel):
    """The ring of a product of two manifolds, from the factor rings.

    Both models must share a coefficient ring: the integers with at most one
    torsion factor, or a prime modulus.  Returns (model, layouts) where
    layouts maps each degree to the TensorLayout underlying its group.
    """
    if a.coefficients != b.coefficients:
        raise BuildError("product factors use different coefficient rings")
    k = a.coefficients.k
    if k == 0 and _has_torsion(a) and _has_torsion(b):
        raise UnsupportedProductError(
            "integral product rings allow at most one factor with torsion; "
            "both factors have torsion in their integral cohomology"
        )
    if k >= 2 and not _is_prime(k):
        raise UnsupportedProductError(
            f"product rings over Z/{k} need a prime modulus; "
            "derive them from the integral product instead"
        )
    m = a.dimension + b.dimension

    layouts = {}
    groups = {}
    names = {}
    for t in range(m + 1):
        summands = []
        descs = []
        for i in range(min(t, a.dimension) + 1):
            j = t - i
            if j > b.dimension:
                continue
            ga, gb = a.group(i), b.group(j)
            for aa, da in enumerate(ga.factors):
                for bb, db in enumerate(gb.factors):
                    order = math.gcd(da, db) if (da and db) else (da or db)
                    summands.append((_join(a.gen_names(i)[aa], b.gen_names(j)[bb]), order))
                    descs.append((i, aa, j, bb))
        group, nms, injections, sections = normalized_cyclic_sum(summands)
        layouts[t] = TensorLayout(
            group, nms, injections, sections, descs,
            {d: pos for pos, d in enumerate(descs)},
        )
        if not group.is_trivial():
            groups[t] = group
            names[t] = tuple(nms)

    def summand_product(i, p, j, q):
        ia, aa, ib, ab = layouts[i].descs[p]
        ja, ba, jb, bb = layouts[j].descs[q]
        pa = a.gen_product(ia, aa, ja, ba)
        pb = b.gen_product(ib, ab, jb, bb)
        # a known zero on either side kills the product outright
        if (pa is not UNKNOWN and not any(pa)) or (pb is not UNKNOWN and not any(pb)):
            return layouts[i + j].group.zero()
        if pa is UNKNOWN or pb is UNKNOWN:
            return UNKNOWN
        sign = -1 if (ib * ja) % 2 else 1
        target = layouts[i + j]
        acc = [0] * len(target.group.factors)
        for r, cr in enumerate(pa):
            if not cr:
                continue
            for s, cs in enumerate(pb):
                if not cs:
                    continue
                inj = target.injections[target.index[(ia + ja, r, ib + jb, s)]]
                c = sign * cr * cs
                for x, vx in enumerate(inj):
                    acc[x] += c * vx
        return target.group.reduce(acc)

    slim = {t: (layouts[t].group, layouts[t].sections) for t in layouts}
    products = assemble_products(m, slim, summand_product)
    model = CohomologyModel(
        dimension=m,
        coefficients=a.coefficients,
        groups=groups,
        names=names,
        products=products,
        orientable=a.orientable and b.orientable,
    )
    return model, layouts


def _tensor_reductions(p_model, p_lay, q_model, q_lay, homs_a, homs_b):
    # reduction maps of a product from the factor reductions, summand by
    # summand through the matching bidegrees of the two layouts
    homs = {}
    for t in range(p_model.dimension + 1):
        src = p_model.group(t)
        tgt = q_model.group(t)
        images = []
        for g in range(len(src.factors)):
            acc = [0] * len(tgt.factors)
            for pos, coeff in enumerate(p_lay[t].sections[g]):
                if not coeff:
                    continue
                i, aa, j, bb = p_lay[t].descs[pos]
                va = homs_a[i].images[aa]
                vb = homs_b[j].images[bb]
                for r, cr in enumerate(va):
                    if not cr:
                        continue
                    for s, cs in enumerate(vb):
                        if not cs:
                            continue
                        inj = q_lay[t].injections[q_lay[t].index[(i, r, j, s)]]
                        c = coeff * cr * cs
                        for x, vx in enumerate(inj):
                            acc[x] += c * vx
            images.append(tgt.reduce(acc))
        homs[t] = Hom(src, tgt, images)
    return homs


def product_manifold(children, description=None, moduli=()) -> ManifoldModel:
    """The product of the given manifolds, folded left to right.

    Modular rings for the requested moduli are built mod k when k is prime
    and every factor's mod k ring is fully known; otherwise they are derived
    from the integral product, which leaves products touching torsion-born
    classes unknown (a notice records this when it loses information).
    """
    children = list(children)
    if len(children) < 2:
        raise BuildError("a product needs at least two factors")
    for child in children:
        if child.integral() is None:
            raise BuildError(f"product factor {child.description} has no integral ring")
    dimension = sum(c.dimension for c in children)
    orientable = all(c.orientable for c in children)
    simply_connected = all(c.simply_connected for c in children)
    if description is None:
        description = f"product({', '.join(c.description for c in children)})"

    ks = sorted(k for k in {int(k) for k in moduli} if k >= 2)
    torsion_count = sum(1 for c in children if _has_torsion(c.integral()))
    fold_ks = []
    skipped = []
    if torsion_count:
        for k in ks:
            if _is_prime(k):
                for c in children:
                    ensure_moduli(c, [k])
                if all(c.ring(k).is_fully_known() for c in children):
                    fold_ks.append(k)
                    continue
            skipped.append(k)

    acc_int = children[0].integral()
    acc_mods = {k: (children[0].ring(k), children[0].reductions[k]) for k in fold_ks}
    for child in children[1:]:
        new_int, lay_int = tensor_pair(acc_int, child.integral())
        new_mods = {}
        for k in fold_ks:
            qa, homs_a = acc_mods[k]
            new_mod, lay_mod = tensor_pair(qa, child.ring(k))
            new_mods[k] = (
                new_mod,
                _tensor_reductions(
                    new_int, lay_int, new_mod, lay_mod, homs_a, child.reductions[k]
                ),
            )
        acc_int, acc_mods = new_int, new_mods

    out = ManifoldModel(description, dimension, orientable, simply_connected)
    out.add_ring(acc_int)
    for k in fold_ks:
        modular, homs = acc_mods[k]
        out.attach_reduction(modular, homs)
    for k in ks:
        if k not in out.rings:
            out.derive_modular(k)
    for k in skipped:
        if not out.ring(k).is_fully_known():
            out.add_notice(
                f"mod {k} ring derived from the integral product; "
                "products touching torsion-born classes stay unknown"
            )
    return out


# -- connected sums -------------------------------------------------------


def _blockwise_layouts(models, prefix=True):
    # per degree 1..m-1: normalized direct sum over the children's groups,
    # descs[pos] = (child, generator)
    m = models[0].dimension
    lay = {}
    for t in range(1, m):
        summands = []
        descs = []
        for ci, model in enumerate(models):
            gt = model.group(t)
            for idx, d in enumerate(gt.factors):
                name = model.gen_names(t)[idx]
                if prefix:
                    name = f"summand{ci + 1}.{name}"
                summands.append((name, d))
                descs.append((ci, idx))
        group, nms, injections, sections = normalized_cyclic_sum(summands)
        lay[t] = (group, nms, injections, sections, descs,
                  {d: pos for pos, d in enumerate(descs)})
    return lay


def _glued_model(models, top_order: int):
    """One coefficient ring of a connected sum: blockwise middles, shared
    unit and top, same-child products carried over, cross-child products
    zero."""
    m = models[0].dimension
    lay = _blockwise_layouts(models)
    top_group = FgAbGroup((top_order,))

    groups = {0: (top_order,), m: (top_order,)}
    names = {0: ("1",), m: ("top",)}
    for t in range(1, m):
        if not lay[t][0].is_trivial():
            groups[t] = lay[t][0]
            names[t] = tuple(lay[t][1])

    def summand_product(i, p, j, q):
        ci, aa = lay[i][4][p]
        cj, bb = lay[j][4][q]
        if i + j == m:
            if ci != cj:
                return top_group.zero()
            val = models[ci].gen_product(i, aa, j, bb)
            if val is UNKNOWN:
                return UNKNOWN
            return top_group.reduce((val[0],)) if val else top_group.zero()
        target = lay[i + j]
        if ci != cj:
            return target[0].zero()
        val = models[ci].gen_product(i, aa, j, bb)
        if val is UNKNOWN:
            return UNKNOWN
        acc = [0] * len(target[0].factors)
        for r, cr in enumerate(val):
            if not cr:
                continue
            inj = target[2][target[5][(ci, r)]]
            for x, vx in enumerate(inj):
                acc[x] += cr * vx
        return target[0].reduce(acc)

    slim = {t: (lay[t][0], lay[t][3]) for t in lay}
    slim[m] = (top_group, [])
    products = assemble_products(m, slim, summand_product)
    model = CohomologyModel(
        dimension=m,
        coefficients=models[0].coefficients,
        groups=groups,
        names=names,
        products=products,
        orientable=True,
    )
    return model, lay


def connected_sum(children, description=None, moduli=()) -> ManifoldModel:
    """The connected sum of the given manifolds.

    All summands must share one dimension m >= 3 and be simply connected and
    orientable with infinite cyclic top cohomology.  Modular rings for the
    requested moduli are glued from the summands' rings, deriving any that
    are missing.
    """
    children = list(children)
    if len(children) < 2:
        raise BuildError("a connected sum needs at least two summands")
    dims = sorted({c.dimension for c in children})
    if len(dims) != 1:
        raise BuildError(f"connected summands disagree on dimension: {dims}")
    m = dims[0]
    if m < 3:
        raise BuildError(f"connected sums need dimension at least 3, got {m}")
    for child in children:
        if not child.simply_connected:
            raise BuildError(f"connected summand {child.description} is not simply connected")
        if not child.orientable:
            raise BuildError(f"connected summand {child.description} is not orientable")
        integral = child.integral()
        if integral is None:
            raise BuildError(f"connected summand {child.description} has no integral ring")
        if integral.group(m).factors != (0,):
            raise BuildError(
                f"connected summand {child.description} lacks an infinite cyclic top group"
            )
    if description is None:
        description = f"connected_sum({', '.join(c.description for c in children)})"

    ks = sorted(k for k in {int(k) for k in moduli} if k >= 2)
    for child in children:
        ensure_moduli(child, ks)

    int_models = [c.integral() for c in children]
    int_model, int_lay = _glued_model(int_models, 0)

    out = ManifoldModel(description, m, True, True)
    out.add_ring(int_model)

    for k in ks:
        mod_models = [c.ring(k) for c in children]
        mod_model, mod_lay = _glued_model(mod_models, k)
        homs = {}
        for t in range(m + 1):
            src = int_model.group(t)
            tgt = mod_model.group(t)
            if t == 0 or t == m:
                homs[t] = Hom(src, tgt, [(1,)])
                continue
            images = []
            for g in range(len(src.factors)):
                acc = [0] * len(tgt.factors)
                for pos, coeff in enumerate(int_lay[t][3][g]):
                    if not coeff:
                        continue
                    ci, idx = int_lay[t][4][pos]
                    va = children[ci].reductions[k][t].images[idx]
                    for r, cr in enumerate(va):
                        if not cr:
                            continue
                        inj = mod_lay[t][2][mod_lay[t][5][(ci, r)]]
                        c = coeff * cr
                        for x, vx in enumerate(inj):
                            acc[x] += c * vx
                images.append(tgt.reduce(acc))
            homs[t] = Hom(src, tgt, images)
        out.attach_reduction(mod_model, homs)
    return out
