"""Finitely generated abelian groups in invariant factor form.

A group is a tuple of factors (d1, ..., ds): each di >= 0, no di equal to 1,
finite factors first in an ascending divisibility chain, zeros (free ranks)
last.  Elements are integer coordinate tuples, one coordinate per factor,
reduced modulo the finite factors.
"""

from __future__ import annotations

import itertools
import math

from .errors import PresentationError
from .intmat import identity, mat_vec, smith_normal_form, solve_integer


def _validate_factors(factors) -> tuple:
    out = tuple(int(d) for d in factors)
    seen_zero = False
    prev = None
    for d in out:
        if d < 0:
            raise PresentationError(f"negative invariant factor {d}")
        if d == 1:
            raise PresentationError("trivial factor 1 is not allowed in canonical form")
        if d == 0:
            seen_zero = True
            continue
        if seen_zero:
            raise PresentationError("finite factors must precede free factors")
        if prev is not None and d % prev:
            raise PresentationError(f"factors {prev},{d} break the divisibility chain")
        prev = d
    return out


class FgAbGroup:
    """A finitely generated abelian group with a fixed coordinate system."""

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        self.factors = _validate_factors(factors)

    def __eq__(self, other):
        return isinstance(other, FgAbGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"FgAbGroup({self.factors!r})"

    def __len__(self):
        return len(self.factors)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d == 0)

    @property
    def torsion_factors(self) -> tuple:
        return tuple(d for d in self.factors if d > 0)

    def is_trivial(self) -> bool:
        return not self.factors

    def order(self):
        """Group order; math.inf for groups of positive rank."""
        if self.rank:
            return math.inf
        return math.prod(self.factors) if self.factors else 1

    def zero(self) -> tuple:
        return (0,) * len(self.factors)

    def reduce(self, coords) -> tuple:
        if len(coords) != len(self.factors):
            raise PresentationError(
                f"element has {len(coords)} coordinates, group has {len(self.factors)}"
            )
        return tuple(
            int(x) % d if d else int(x) for x, d in zip(coords, self.factors)
        )

    def add(self, x, y) -> tuple:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x) -> tuple:
        return self.reduce([-a for a in x])

    def scale(self, n: int, x) -> tuple:
        return self.reduce([n * a for a in x])

    def is_zero(self, x) -> bool:
        return not any(self.reduce(x))

    def element_order(self, x):
        """Order of x; math.inf when x has a nonzero free coordinate."""
        x = self.reduce(x)
        out = 1
        for c, d in zip(x, self.factors):
            if d == 0:
                if c:
                    return math.inf
            elif c:
                out = math.lcm(out, d // math.gcd(d, c))
        return out

    def is_divisible_by(self, x, n: int) -> bool:
        """Whether x = n*y has a solution y in the group."""
        x = self.reduce(x)
        n = abs(int(n))
        if n == 0:
            return not any(x)
        for c, d in zip(x, self.factors):
            if d == 0:
                if c % n:
                    return False
            elif c % math.gcd(n, d):
                return False
        return True

    def elements(self):
        """Iterate all elements in lexicographic coordinate order (finite only)."""
        if self.rank:
            raise PresentationError("cannot enumerate a group of positive rank")
        return itertools.product(*(range(d) for d in self.factors))

    def free_part(self, x) -> tuple:
        x = self.reduce(x)
        return tuple(c for c, d in zip(x, self.factors) if d == 0)

    def coset_has_infinite_order(self, base, gens) -> bool:
        """Whether base + span(gens) contains an element of infinite order.

        True iff the base or any generator has a nonzero free coordinate: a
        coset of a nonzero lattice in the free quotient misses zero infinitely
        often, and a nonzero constant free part is itself enough.
        """
        if any(self.free_part(base)):
            return True
        return any(any(self.free_part(g)) for g in gens)


def tensor_factors(factors, k: int) -> list:
    """Invariant-style factor list of G (x) Z/k, in input order (may need
    normalization only when concatenated with other summands)."""
    return [k if d == 0 else math.gcd(d, k) for d in factors]


def tor_factors(factors, k: int) -> list:
    """Factor list of Tor(G, Z/k); free summands contribute nothing."""
    if k == 0:
        return []
    return [math.gcd(d, k) for d in factors if d > 0]


def tensor_with_cyclic(g: FgAbGroup, k: int) -> FgAbGroup:
    """G (x) Z/k as a group; k = 0 gives G back."""
    return FgAbGroup(tuple(d for d in tensor_factors(g.factors, int(k)) if d != 1))


def tor_with_cyclic(g: FgAbGroup, k: int) -> FgAbGroup:
    """Tor(G, Z/k) as a group; k = 0 gives the trivial group."""
    return FgAbGroup(tuple(d for d in tor_factors(g.factors, int(k)) if d != 1))


def group_from_presentation(generator_count: int, relations):
    """Cokernel of a relation matrix in invariant factor form.

    relations is a matrix whose rows are relations over generator_count
    generators.  Returns (group, projection) where projection is the Hom
    from the free group on the generators onto the cokernel.
    """
    g = int(generator_count)
    if g < 0:
        raise PresentationError(f"negative generator count {g}")
    rel = [list(map(int, row)) for row in relations]
    for row in rel:
        if len(row) != g:
            raise PresentationError(
                f"relation has {len(row)} entries for {g} generators"
            )
    # columns of a are the relation vectors; the cokernel of a is the group
    a = [[row[i] for row in rel] for i in range(g)]
    nrel = len(rel)
    u, d, _v = smith_normal_form(a, cols=nrel)
    keep = []
    factors = []
    for t in range(g):
        dt = d[t][t] if t < min(g, nrel) else 0
        if dt != 1:
            keep.append(t)
            factors.append(dt)
    group = FgAbGroup(tuple(factors))
    free = FgAbGroup((0,) * g)
    images = [
        group.reduce([u[t][i] for t in keep]) for i in range(g)
    ]
    return group, Hom(free, group, images)


class Hom:
    """A homomorphism between two groups, given on source generators.

    images[i] is the target element the i-th source generator maps to.  The
    solver works over the integers with one auxiliary unknown per finite
    target factor, so preimages come back as full integer cosets.
    """

    def __init__(self, source: FgAbGroup, target: FgAbGroup, images):
        if len(images) != len(source.factors):
            raise PresentationError(
                f"{len(images)} generator images for {len(source.factors)} generators"
            )
        self.source = source
        self.target = target
        self.images = [target.reduce(v) for v in images]
        self._prep = None

    def apply(self, x) -> tuple:
        x = self.source.reduce(x)
        out = [0] * len(self.target.factors)
        for c, img in zip(x, self.images):
            if c:
                for r, val in enumerate(img):
                    out[r] += c * val
        return self.target.reduce(out)

    def is_well_defined(self) -> bool:
        for d, img in zip(self.source.factors, self.images):
            if d > 0 and not self.target.is_zero(self.target.scale(d, img)):
                return False
        return True

    def _prepare(self):
        if self._prep is not None:
            return self._prep
        s = len(self.source.factors)
        tfac = self.target.factors
        nrows = len(tfac)
        aux = [j for j, d in enumerate(tfac) if d > 0]
        ncols = s + len(aux)
        a = [[0] * ncols for _ in range(nrows)]
        for c, img in enumerate(self.images):
            for r, val in enumerate(img):
                a[r][c] = val
        for c, j in enumerate(aux):
            a[j][s + c] = tfac[j]
        if nrows == 0:
            u, d, v = [], [], identity(ncols)
        else:
            u, d, v = smith_normal_form(a, cols=ncols)
        free = []
        for t in range(ncols):
            dt = d[t][t] if t < min(nrows, ncols) else 0
            if dt == 0:
                free.append(t)
        kernel = [
            self.source.reduce([v[i][t] for i in range(s)]) for t in free
        ]
        kernel = [g for g in kernel if any(g)]
        self._prep = (s, nrows, ncols, u, d, v, kernel)
        return self._prep

    def preimage(self, w):
        """Return (base, kernel_gens) describing the full preimage of w, or
        None when w is not in the image."""
        w = self.target.reduce(w)
        s, nrows, ncols, u, d, v, kernel = self._prepare()
        c = mat_vec(u, list(w)) if nrows else []
        y = [0] * ncols
        for t in range(ncols):
            dt = d[t][t] if t < min(nrows, ncols) else 0
            if dt:
                if c[t] % dt:
                    return None
                y[t] = c[t] // dt
            elif t < nrows and c[t]:
                return None
        for t in range(ncols, nrows):
            if c[t]:
                return None
        x0 = mat_vec(v, y)
        base = self.source.reduce(x0[:s])
        return base, kernel

    def image_contains(self, w) -> bool:
        return self.preimage(w) is not None


def _chain_ok(orders) -> bool:
    prev = None
    for d in orders:
        if d == 0:
            continue
        if prev is not None and d % prev:
            return False
        prev = d
    return True


def combo_name(coeffs, names) -> str:
    """Render an integer combination of named generators, e.g. "2*a-b"."""
    terms = []
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        if c == 1:
            terms.append(name)
        elif c == -1:
            terms.append(f"-{name}")
        else:
            terms.append(f"{c}*{name}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def normalized_cyclic_sum(summands):
    """Normalize a direct sum of named cyclic groups to invariant factor form.

    summands: list of (name, order) pairs, order >= 0, 0 meaning infinite
    cyclic.  Order-1 summands are dropped.  Returns (group, names,
    injections, sections): injections[i] is the image of input summand i in
    the normalized group, sections[j] expresses output generator j as integer
    coefficients over the input summands.

    When the sorted orders already form a valid chain the generators are just
    reordered and keep their names; otherwise a Smith reduction merges them
    and names are synthesized from the combination.
    """
    live = [(i, name, int(order)) for i, (name, order) in enumerate(summands) if order != 1]
    n_in = len(summands)
    if not live:
        g = FgAbGroup(())
        return g, [], [() for _ in range(n_in)], []

    key = lambda item: (1 if item[2] == 0 else 0, item[2])
    ordered = sorted(live, key=key)
    orders = [d for _, _, d in ordered]
    if _chain_ok(orders):
        g = FgAbGroup(orders)
        names = [name for _, name, _ in ordered]
        injections = [g.zero() for _ in range(n_in)]
        sections = []
        for pos, (i, _, _) in enumerate(ordered):
            vec = [0] * len(orders)
            vec[pos] = 1
            injections[i] = g.reduce(vec)
            sec = [0] * n_in
            sec[i] = 1
            sections.append(sec)
        return g, names, injections, sections

    # mixed orders: diagonal relation matrix, Smith-merge the presentation
    s = len(live)
    rel = [[0] * s for _ in range(s)]
    for t, (_, _, d) in enumerate(live):
        rel[t][t] = d
    u, diag, _v = smith_normal_form(rel)
    keep = []
    for t in range(s):
        if diag[t][t] != 1:
            keep.append(t)
    factors = tuple(diag[t][t] for t in keep)
    g = FgAbGroup(factors)

    injections = [g.zero()] * n_in
    for col, (i, _, _) in enumerate(live):
        vec = [u[t][col] for t in keep]
        injections[i] = g.reduce(vec)

    # sections: columns of the inverse transform at the kept positions
    uinv_cols = []
    for t in keep:
        e = [1 if r == t else 0 for r in range(s)]
        sol = solve_integer(u, e)
        if sol is None:
            raise PresentationError("non-invertible transform in sum normalization")
        uinv_cols.append(sol[0])
    live_names = [name for _, name, _ in live]
    names = []
    sections = []
    for col, t in enumerate(keep):
        coeffs_live = []
        for r in range(s):
            c = uinv_cols[col][r]
            d = live[r][2]
            coeffs_live.append(c % d if d else c)
        names.append(combo_name(coeffs_live, live_names))
        sec = [0] * n_in
        for r, (i, _, _) in enumerate(live):
            sec[i] = coeffs_live[r]
        sections.append(sec)
    return g, names, injections, sections
