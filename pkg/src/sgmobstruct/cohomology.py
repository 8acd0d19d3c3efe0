"""Graded cohomology ring models over Z or Z/k, with validation.

A model stores the groups H^0..H^m of a closed connected manifold in
invariant factor form, named generators, and a partial table of cup products
of generators.  A missing table entry with a nontrivial target means the
product is unknown; products landing in a trivial group, or above the top
degree, are known to vanish without being stored.
"""

from __future__ import annotations

import math

from .abelian import FgAbGroup, Hom, combo_name, normalized_cyclic_sum, tensor_factors, tor_factors
from .errors import DegreeError, ModelValidationError, OwnershipError, PresentationError
from .intmat import det_bareiss


class _Unknown:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNKNOWN"

    def __bool__(self):
        raise TypeError("an unknown product has no truth value; compare with `is UNKNOWN`")


UNKNOWN = _Unknown()


class CoefficientRing:
    """Z when k == 0, Z/k when k >= 2; k == 1 is rejected."""

    __slots__ = ("k",)

    def __init__(self, k: int):
        k = int(k)
        if k < 0 or k == 1:
            raise PresentationError(f"coefficient modulus {k} is not 0 or >= 2")
        self.k = k

    @property
    def label(self) -> str:
        return "Z" if self.k == 0 else f"Z/{self.k}"

    def group_factor(self) -> int:
        # invariant factor of the ring as a module over itself
        return self.k

    def __eq__(self, other):
        return isinstance(other, CoefficientRing) and self.k == other.k

    def __hash__(self):
        return hash(("CoefficientRing", self.k))

    def __repr__(self):
        return f"CoefficientRing({self.k})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _scaling_nonzero(group: FgAbGroup, c: int) -> bool:
    # whether multiplication by c is a nonzero map on the group
    for d in group.factors:
        if d == 0:
            if c:
                return True
        elif c % d:
            return True
    return False


_TRIVIAL = FgAbGroup(())


class CohomologyModel:
    """One coefficient ring's worth of cohomology data for a closed manifold."""

    def __init__(self, dimension, coefficients, groups, names, products=None, orientable=True):
        self.dimension = int(dimension)
        if not isinstance(coefficients, CoefficientRing):
            coefficients = CoefficientRing(coefficients)
        self.coefficients = coefficients
        self.orientable = bool(orientable)
        self.groups = {}
        self.names = {}
        for j, g in dict(groups).items():
            if not isinstance(g, FgAbGroup):
                g = FgAbGroup(g)
            if g.is_trivial():
                continue
            self.groups[int(j)] = g
        for j, ns in dict(names).items():
            j = int(j)
            if j in self.groups:
                self.names[j] = tuple(str(n) for n in ns)
        self.products = {}
        for key, val in dict(products or {}).items():
            i, a, j, b = key
            key = (int(i), int(a), int(j), int(b))
            if val is UNKNOWN:
                self.products[key] = UNKNOWN
                continue
            tgt = self.group(key[0] + key[2])
            self.products[key] = tgt.reduce(val)

    def group(self, j: int) -> FgAbGroup:
        return self.groups.get(j, _TRIVIAL)

    def gen_names(self, j: int) -> tuple:
        return self.names.get(j, ())

    def positive_degrees(self) -> list:
        return sorted(j for j in self.groups if j > 0)

    def gen_index(self, j: int, name: str) -> int:
        try:
            return self.gen_names(j).index(name)
        except ValueError:
            raise OwnershipError(f"no generator named {name!r} in degree {j}") from None

    def basis_element(self, j: int, idx: int) -> tuple:
        g = self.group(j)
        if not 0 <= idx < len(g.factors):
            raise OwnershipError(f"generator index {idx} out of range in degree {j}")
        return tuple(1 if r == idx else 0 for r in range(len(g.factors)))

    def element_from_name(self, j: int, name: str) -> tuple:
        return self.basis_element(j, self.gen_index(j, name))

    def format_element(self, j: int, coords) -> str:
        g = self.group(j)
        return combo_name(g.reduce(coords), self.gen_names(j))

    def gen_product(self, i: int, a: int, j: int, b: int):
        """Product of the a-th degree-i generator with the b-th degree-j one."""
        if i == 0:
            return self.basis_element(j, b) if j else self.group(0).reduce((1,))
        if j == 0:
            return self.basis_element(i, a)
        target = self.group(i + j) if i + j <= self.dimension else _TRIVIAL
        if target.is_trivial():
            return target.zero()
        val = self.products.get((i, a, j, b))
        if val is not None:
            return val
        flipped = self.products.get((j, b, i, a))
        if flipped is not None:
            if flipped is UNKNOWN:
                return UNKNOWN
            sign = -1 if (i * j) % 2 else 1
            return target.scale(sign, flipped)
        return UNKNOWN

    def cup(self, i: int, x, j: int, y):
        """Bilinear product of elements; UNKNOWN only when an unknown
        generator product contributes with a coefficient that acts nontrivially
        on the target group."""
        gx, gy = self.group(i), self.group(j)
        x = gx.reduce(x)
        y = gy.reduce(y)
        if i == 0:
            return gy.scale(x[0] if x else 0, y) if x else gy.zero()
        if j == 0:
            return gx.scale(y[0] if y else 0, x) if y else gx.zero()
        target = self.group(i + j) if i + j <= self.dimension else _TRIVIAL
        if target.is_trivial():
            return target.zero()
        acc = [0] * len(target.factors)
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                c = xa * yb
                val = self.gen_product(i, a, j, b)
                if val is UNKNOWN:
                    if _scaling_nonzero(target, c):
                        return UNKNOWN
                    continue
                for r, vr in enumerate(val):
                    acc[r] += c * vr
        return target.reduce(acc)

    def cup_sequence(self, elements):
        """Left fold of cup over (degree, coords) pairs.

        Returns (total_degree, value), where value may be UNKNOWN.  An
        unknown partial product still collapses to zero once the running
        degree leaves the nontrivial range, and multiplying by a zero
        element gives zero no matter what came before.
        """
        if not elements:
            raise DegreeError("cup_sequence needs at least one element")
        deg = int(elements[0][0])
        acc = self.group(deg).reduce(elements[0][1])
        for d, x in elements[1:]:
            d = int(d)
            x = self.group(d).reduce(x)
            new_deg = deg + d
            target = self.group(new_deg) if new_deg <= self.dimension else _TRIVIAL
            if target.is_trivial() or self.group(d).is_zero(x):
                acc = target.zero()
            elif acc is UNKNOWN:
                acc = UNKNOWN
            else:
                acc = self.cup(deg, acc, d, x)
            deg = new_deg
        return deg, acc

    def is_fully_known(self) -> bool:
        m = self.dimension
        for i in self.positive_degrees():
            for j in self.positive_degrees():
                if i + j > m or self.group(i + j).is_trivial():
                    continue
                for a in range(len(self.group(i).factors)):
                    for b in range(len(self.group(j).factors)):
                        if self.gen_product(i, a, j, b) is UNKNOWN:
                            return False
        return True

    # -- validation -------------------------------------------------------

    def validate(self) -> list:
        """Collect structural diagnostics; an empty list means consistent.

        Structural problems with the groups or names make the later checks
        meaningless (or unsafe to run), so those gate the rest.
        """
        diags = []
        self._check_groups(diags)
        self._check_names(diags)
        if not diags:
            self._check_product_table(diags)
            self._check_associativity(diags)
            self._check_field_duality(diags)
        return [f"[{self.coefficients.label}] {msg}" for msg in diags]

    def _check_groups(self, diags):
        m = self.dimension
        if m < 1:
            diags.append(f"dimension {m} is not positive")
            return
        k = self.coefficients.k
        for j, g in sorted(self.groups.items()):
            if j < 0 or j > m:
                diags.append(f"cohomology in degree {j} outside 0..{m}")
            if k >= 2:
                for d in g.factors:
                    if d == 0:
                        diags.append(f"free summand in degree {j} over {self.coefficients.label}")
                    elif k % d:
                        diags.append(f"factor {d} in degree {j} does not divide the modulus {k}")
        expected0 = (0,) if k == 0 else (k,)
        if self.group(0).factors != expected0:
            diags.append(f"H^0 must be ({expected0[0]},) for a connected closed manifold")
        if self.orientable and k == 0 and self.group(m).factors != (0,):
            diags.append("orientable integral model must have H^top of rank one")

    def _check_names(self, diags):
        for j, g in sorted(self.groups.items()):
            ns = self.gen_names(j)
            if len(ns) != len(g.factors):
                diags.append(f"{len(ns)} names for {len(g.factors)} generators in degree {j}")
                continue
            if len(set(ns)) != len(ns):
                diags.append(f"duplicate generator names in degree {j}")
            for n in ns:
                if not n or any(ch.isspace() for ch in n):
                    diags.append(f"bad generator name {n!r} in degree {j}")
                elif n == "0":
                    diags.append("generator name '0' is reserved")
                elif n == "1" and j != 0:
                    diags.append("generator name '1' is reserved for the unit")
        if 0 in self.groups and self.gen_names(0) != ("1",):
            diags.append("the degree-0 generator must be named '1'")

    def _check_product_table(self, diags):
        m = self.dimension
        for key, val in sorted(self.products.items(), key=repr):
            i, a, j, b = key
            if i < 1 or j < 1:
                diags.append(f"product table entry {key} involves degree 0")
                continue
            if i + j > m:
                diags.append(f"product table entry {key} lands above the top degree")
                continue
            tgt = self.group(i + j)
            if tgt.is_trivial():
                diags.append(f"product table entry {key} has a trivial target")
                continue
            bad_gen = False
            for deg, idx in ((i, a), (j, b)):
                if not 0 <= idx < len(self.group(deg).factors):
                    diags.append(f"product table entry {key} names a missing generator")
                    bad_gen = True
            if bad_gen or val is UNKNOWN:
                continue
            da = self.group(i).factors[a]
            db = self.group(j).factors[b]
            for d in (da, db):
                if d > 0 and not tgt.is_zero(tgt.scale(d, val)):
                    diags.append(
                        f"entry {key} is not killed by the order {d} of its factor"
                    )
        # graded commutativity wherever both orders are stored, and on odd diagonals
        for key, val in sorted(self.products.items(), key=repr):
            i, a, j, b = key
            if i < 1 or j < 1 or i + j > m or self.group(i + j).is_trivial():
                continue
            flip = (j, b, i, a)
            if flip in self.products and flip >= key:
                other = self.products[flip]
                if (val is UNKNOWN) != (other is UNKNOWN):
                    diags.append(f"entries {key} and {flip} disagree about being known")
                elif val is not UNKNOWN:
                    tgt = self.group(i + j)
                    sign = -1 if (i * j) % 2 else 1
                    if tgt.reduce(val) != tgt.scale(sign, other):
                        diags.append(f"entries {key} and {flip} break graded commutativity")
            if i == j and a == b and i % 2 and val is not UNKNOWN:
                tgt = self.group(2 * i)
                if not tgt.is_zero(tgt.scale(2, val)):
                    diags.append(f"odd-degree square {key} is not 2-torsion")

    def _check_associativity(self, diags):
        m = self.dimension
        degs = self.positive_degrees()
        triples = [
            (i, j, l)
            for i in degs
            for j in degs
            for l in degs
            if i + j + l <= m and not self.group(i + j + l).is_trivial()
        ]
        for i, j, l in triples:
            for a in range(len(self.group(i).factors)):
                ea = self.basis_element(i, a)
                for b in range(len(self.group(j).factors)):
                    ab = self.gen_product(i, a, j, b)
                    if ab is UNKNOWN:
                        continue
                    for c in range(len(self.group(l).factors)):
                        ec = self.basis_element(l, c)
                        left = self.cup(i + j, ab, l, ec)
                        if left is UNKNOWN:
                            continue
                        bc = self.gen_product(j, b, l, c)
                        if bc is UNKNOWN:
                            continue
                        right = self.cup(i, ea, j + l, bc)
                        if right is UNKNOWN:
                            continue
                        if left != right:
                            diags.append(
                                f"associativity fails on generators ({i},{a}),({j},{b}),({l},{c})"
                            )

    def _check_field_duality(self, diags):
        """Over a prime field, a fully known orientable model (or any model
        mod 2) must satisfy Poincare duality: complementary pairings have
        full rank."""
        p = self.coefficients.k
        if not _is_prime(p):
            return
        if not (self.orientable or p == 2):
            return
        if not self.is_fully_known():
            return
        m = self.dimension
        if self.group(m).factors != (p,):
            diags.append(f"H^top over {self.coefficients.label} must be one copy of the field")
            return
        for i in range(1, m):
            gi, gj = self.group(i), self.group(m - i)
            if len(gi.factors) != len(gj.factors):
                diags.append(f"H^{i} and H^{m - i} have different ranks, duality fails")
                continue
            n = len(gi.factors)
            if n == 0:
                continue
            mat = []
            for a in range(n):
                row = []
                for b in range(n):
                    val = self.gen_product(i, a, m - i, b)
                    row.append(val[0] % p)
                mat.append(row)
            if det_bareiss(mat) % p == 0:
                diags.append(f"degenerate pairing between H^{i} and H^{m - i}")


# -- assembling product tables from direct sum decompositions -------------


def assemble_products(dimension: int, layout, summand_product):
    """Build a generator product table for groups presented as normalized
    direct sums.

    layout maps each degree to (group, sections), where sections[a] expresses
    output generator a as integer coefficients over that degree's summands.
    summand_product(i, p, j, q) returns the product of summand p (degree i)
    and summand q (degree j) as an element of the degree i+j group, or
    UNKNOWN.  Only known values are stored, canonically at i <= j and a <= b
    on the diagonal; unknown contributions are dropped when their coefficient
    kills the whole target group.
    """
    products = {}
    degs = sorted(d for d in layout if d >= 1 and layout[d][1])
    for i in degs:
        _gi, seci = layout[i]
        for j in degs:
            if j < i or i + j > dimension:
                continue
            _gj, secj = layout[j]
            gt = layout.get(i + j, (_TRIVIAL, []))[0]
            if gt.is_trivial():
                continue
            for a, sa in enumerate(seci):
                for b in range(a if i == j else 0, len(secj)):
                    sb = secj[b]
                    acc = [0] * len(gt.factors)
                    known = True
                    for p, cp in enumerate(sa):
                        if not cp:
                            continue
                        for q, cq in enumerate(sb):
                            if not cq:
                                continue
                            c = cp * cq
                            val = summand_product(i, p, j, q)
                            if val is UNKNOWN:
                                if _scaling_nonzero(gt, c):
                                    known = False
                                    break
                                continue
                            for r, vr in enumerate(val):
                                acc[r] += c * vr
                        if not known:
                            break
                    if known:
                        products[(i, a, j, b)] = gt.reduce(acc)
    return products


# -- modular reduction ----------------------------------------------------


def reduce_model(integral: CohomologyModel, k: int):
    """Derive the mod-k model of an integral model, with its reduction maps.

    Groups come from the coefficient sequence: H^j mod k is (H^j tensor Z/k)
    plus Tor(H^{j+1}, Z/k).  Tensor generators keep their integral names and
    are the image of the reduction; torsion-born generators are named
    tor(<name>) and products touching them stay unknown.  Returns
    (modular_model, homs) with one Hom per degree 0..dimension.
    """
    if integral.coefficients.k != 0:
        raise PresentationError("reduction starts from an integral model")
    k = int(k)
    if k < 2:
        raise PresentationError(f"reduction modulus must be >= 2, got {k}")
    m = integral.dimension

    groups = {}
    names = {}
    # per degree: normalized group, injections per summand, sections,
    # summand source tags ("t", integral index) or ("tor",)
    layout = {}
    for j in range(m + 1):
        summands = []
        tags = []
        gj = integral.group(j)
        for idx, d in enumerate(gj.factors):
            summands.append((integral.gen_names(j)[idx], k if d == 0 else math.gcd(d, k)))
            tags.append(("t", idx))
        gnext = integral.group(j + 1) if j + 1 <= m else _TRIVIAL
        for idx, d in enumerate(gnext.factors):
            if d > 0:
                summands.append((f"tor({integral.gen_names(j + 1)[idx]})", math.gcd(d, k)))
                tags.append(("tor", idx))
        group, nms, injections, sections = normalized_cyclic_sum(summands)
        if not group.is_trivial():
            groups[j] = group
            names[j] = tuple(nms)
        layout[j] = (group, injections, sections, tags)

    def rho(j, coords):
        group, injections, _sections, tags = layout[j]
        out = [0] * len(group.factors)
        for pos, tag in enumerate(tags):
            if tag[0] != "t":
                continue
            c = coords[tag[1]]
            if c:
                inj = injections[pos]
                for r, vr in enumerate(inj):
                    out[r] += c * vr
        return group.reduce(out)

    def summand_product(i, p, j, q):
        tp, tq = layout[i][3][p], layout[j][3][q]
        if tp[0] != "t" or tq[0] != "t":
            # torsion-born factor: no natural formula
            return UNKNOWN
        iv = integral.gen_product(i, tp[1], j, tq[1])
        if iv is UNKNOWN:
            return UNKNOWN
        return rho(i + j, iv)

    slim = {j: (layout[j][0], layout[j][2]) for j in layout}
    products = assemble_products(m, slim, summand_product)

    modular = CohomologyModel(
        dimension=m,
        coefficients=CoefficientRing(k),
        groups=groups,
        names=names,
        products=products,
        orientable=integral.orientable,
    )
    homs = {}
    for j in range(m + 1):
        src = integral.group(j)
        tgt = modular.group(j)
        images = [rho(j, integral.basis_element(j, idx)) for idx in range(len(src.factors))]
        homs[j] = Hom(src, tgt, images)
    return modular, homs


def check_reduction_link(integral: CohomologyModel, modular: CohomologyModel, homs) -> None:
    """Validate hand-supplied reduction data against both models.

    Checks shape and well-definedness of every map, that each modular group
    matches the coefficient-sequence prediction from the integral groups, and
    naturality of products wherever all three products involved are known.
    """
    k = modular.coefficients.k
    if k < 2:
        raise ModelValidationError("reduction target must have modulus >= 2")
    if integral.coefficients.k != 0:
        raise ModelValidationError("reduction source must be integral")
    if integral.dimension != modular.dimension:
        raise ModelValidationError("reduction links models of different dimensions")
    m = integral.dimension
    for j in range(m + 1):
        src, tgt = integral.group(j), modular.group(j)
        hom = homs.get(j)
        if hom is None:
            raise ModelValidationError(f"missing reduction map in degree {j}")
        if hom.source != src or hom.target != tgt:
            raise ModelValidationError(f"reduction map in degree {j} has the wrong shape")
        if not hom.is_well_defined():
            raise ModelValidationError(f"reduction map in degree {j} is not well defined")
        expected = tensor_factors(src.factors, k)
        nxt = integral.group(j + 1) if j + 1 <= m else _TRIVIAL
        expected = expected + tor_factors(nxt.factors, k)
        predicted, _, _, _ = normalized_cyclic_sum([("x", d) for d in expected])
        if predicted.factors != tgt.factors:
            raise ModelValidationError(
                f"H^{j} mod {k} is {tgt.factors}, coefficient sequence predicts {predicted.factors}"
            )
    if len(integral.group(0).factors) == 1 and len(modular.group(0).factors) == 1:
        if homs[0].apply((1,)) != (1,):
            raise ModelValidationError("reduction does not send the unit to the unit")
    for i in range(1, m):
        for j in range(i, m + 1 - i):
            for a in range(len(integral.group(i).factors)):
                for b in range(len(integral.group(j).factors)):
                    iv = integral.gen_product(i, a, j, b)
                    if iv is UNKNOWN:
                        continue
                    xa = homs[i].apply(integral.basis_element(i, a))
                    xb = homs[j].apply(integral.basis_element(j, b))
                    mv = modular.cup(i, xa, j, xb)
                    if mv is UNKNOWN:
                        continue
                    if mv != homs[i + j].apply(iv):
                        raise ModelValidationError(
                            f"reduction is not multiplicative on generators ({i},{a}) and ({j},{b})"
                        )


def homs_from_matrices(integral, modular, matrices):
    """Per-degree reduction maps from column-per-integral-generator matrices.

    matrices[j][r][c] is the coefficient of the r-th modular generator in
    the image of the c-th integral generator.  Degrees without a matrix get
    the zero map, which is only correct when one side is trivial; the link
    validator catches abuse.
    """
    homs = {}
    for j in range(integral.dimension + 1):
        src = integral.group(j)
        tgt = modular.group(j)
        mat = matrices.get(j)
        if mat is None:
            images = [tgt.zero() for _ in src.factors]
        else:
            if len(mat) != len(tgt.factors) or any(
                len(row) != len(src.factors) for row in mat
            ):
                raise PresentationError(
                    f"reduction matrix in degree {j} has the wrong shape"
                )
            images = [
                tgt.reduce([mat[r][c] for r in range(len(tgt.factors))])
                for c in range(len(src.factors))
            ]
        homs[j] = Hom(src, tgt, images)
    return homs


class ManifoldModel:
    """A manifold's rings over several coefficient systems, plus the maps
    connecting the integral ring to each modular one."""

    def __init__(self, description, dimension, orientable, simply_connected):
        self.description = str(description)
        self.dimension = int(dimension)
        self.orientable = bool(orientable)
        self.simply_connected = bool(simply_connected)
        self.rings = {}
        self.reductions = {}
        self.notices = []
        self.catalog_tags = set()

    def add_ring(self, model: CohomologyModel) -> None:
        k = model.coefficients.k
        if k in self.rings:
            raise PresentationError(f"coefficients {model.coefficients.label} added twice")
        if model.dimension != self.dimension:
            raise PresentationError("ring dimension disagrees with the manifold")
        if model.orientable != self.orientable:
            raise PresentationError("ring orientability flag disagrees with the manifold")
        self.rings[k] = model

    def integral(self):
        return self.rings.get(0)

    def ring(self, k: int):
        return self.rings.get(k)

    def modular_moduli(self) -> list:
        return sorted(k for k in self.rings if k >= 2)

    def attach_reduction(self, modular: CohomologyModel, homs) -> None:
        integral = self.integral()
        if integral is None:
            raise PresentationError("cannot attach a reduction without an integral ring")
        check_reduction_link(integral, modular, homs)
        self.add_ring(modular)
        self.reductions[modular.coefficients.k] = dict(homs)

    def derive_modular(self, k: int) -> None:
        integral = self.integral()
        if integral is None:
            raise PresentationError("cannot derive a modular ring without an integral ring")
        modular, homs = reduce_model(integral, k)
        self.add_ring(modular)
        self.reductions[k] = homs

    def reduction(self, k: int, j: int):
        homs = self.reductions.get(k)
        return None if homs is None else homs.get(j)

    def add_notice(self, text: str) -> None:
        if text not in self.notices:
            self.notices.append(str(text))

    def validate(self) -> None:
        if not self.rings:
            raise ModelValidationError("model carries no coefficient rings")
        for k in sorted(self.rings):
            diags = self.rings[k].validate()
            if diags:
                raise ModelValidationError("; ".join(diags))
        integral = self.integral()
        if integral is not None and self.simply_connected:
            if not integral.group(1).is_trivial():
                raise ModelValidationError("simply connected but H^1 is nonzero")
            if integral.group(2).torsion_factors:
                raise ModelValidationError("simply connected but H^2 has torsion")
        for k in self.modular_moduli():
            if integral is None:
                raise ModelValidationError("modular ring present without an integral ring")
            homs = self.reductions.get(k)
            if homs is None:
                raise ModelValidationError(f"no reduction maps attached for modulus {k}")
            check_reduction_link(integral, self.rings[k], homs)
