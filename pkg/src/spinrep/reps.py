"""Matrix representations over cyclotomic scalars: evaluation, verification,
characters, equivalence, tensor products, and sectional restriction to
projective (spin) representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .cyclotomic import Cyclotomic, ONE, ZERO, omega, rational, zeta
from .matrices import Matrix, scalar_ratio
from .pcgroup import CentralExtension, Element, PcGroup, Subgroup


class SpinTypeError(ValueError):
    """The representation is not scalar on the central subgroup."""


@dataclass(frozen=True)
class RepLabel:
    """Structured irrep name: kind is 'linear-type' or 'spin', params carry
    the defining integer data, spin is the central character exponent when
    one applies."""

    name: str
    kind: str = "linear-type"
    params: tuple = ()
    spin: Optional[int] = None


class MatrixRep:
    """Representation given by one matrix per generator, evaluated on
    arbitrary elements along the normal form."""

    def __init__(self, group: PcGroup, images: dict[str, Matrix],
                 label: Optional[RepLabel] = None, provenance=None) -> None:
        self.group = group
        self.images = dict(images)
        missing = [g for g in group.gens if g not in self.images]
        if missing:
            raise ValueError(f"missing generator images: {missing}")
        dims = {m.size for m in self.images.values()}
        if len(dims) != 1:
            raise ValueError("generator images differ in size")
        self.dim = dims.pop()
        self.label = label or RepLabel(name="rep")
        self.provenance = provenance
        self._eval: dict[Element, Matrix] = {group.identity: Matrix.identity(self.dim)}
        self._powers: dict[tuple[int, int], Matrix] = {}
        self._character: Optional[ClassFunction] = None

    def _gen_power(self, idx: int, e: int) -> Matrix:
        key = (idx, e)
        cached = self._powers.get(key)
        if cached is None:
            if e == 1:
                cached = self.images[self.group.gens[idx]]
            else:
                cached = self._gen_power(idx, e - 1) * self.images[self.group.gens[idx]]
            self._powers[key] = cached
        return cached

    def evaluate(self, el: Element) -> Matrix:
        cached = self._eval.get(el)
        if cached is None:
            cached = Matrix.identity(self.dim)
            for idx, e in enumerate(el):
                if e:
                    cached = cached * self._gen_power(idx, e)
            self._eval[el] = cached
        return cached

    def character(self) -> "ClassFunction":
        if self._character is None:
            values = {c.representative: self.evaluate(c.representative).trace()
                      for c in self.group.conjugacy_classes()}
            self._character = ClassFunction(self.group, values)
        return self._character

    def relabel(self, label: RepLabel) -> "MatrixRep":
        out = MatrixRep(self.group, self.images, label, self.provenance)
        out._eval = self._eval
        out._powers = self._powers
        return out

    def __repr__(self) -> str:
        return f"MatrixRep({self.label.name}, dim={self.dim}, group={self.group.name})"


@dataclass
class HomReport:
    ok: bool
    witness: Optional[tuple[Element, Element]] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_homomorphism(rep: MatrixRep) -> HomReport:
    """Exhaustively check evaluate(a)*evaluate(b) == evaluate(a*b)."""
    G = rep.group
    els = G.elements()
    mats = [rep.evaluate(el) for el in els]
    idx = {el: i for i, el in enumerate(els)}
    tab = G.table()
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            if mats[i] * mats[j] != mats[tab[i][j]]:
                return HomReport(False, (a, b))
    return HomReport(True)


class ClassFunction:
    """Exact values on conjugacy-class representatives."""

    def __init__(self, group: PcGroup, values: dict[Element, Cyclotomic]) -> None:
        self.group = group
        self.values = dict(values)

    def value(self, el: Element) -> Cyclotomic:
        return self.values[self.group.class_representative(el)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, ClassFunction) and self.group is other.group
                and self.values == other.values)

    def __repr__(self) -> str:
        cells = ", ".join(f"{k}:{v}" for k, v in sorted(self.values.items()))
        return f"ClassFunction({cells})"


def inner_product(f: ClassFunction, g: ClassFunction) -> Cyclotomic:
    """(1/|G|) * sum over G of f(x) conj(g(x)), computed classwise."""
    if f.group is not g.group:
        raise ValueError("class functions live on different groups")
    total = ZERO
    for c in f.group.conjugacy_classes():
        total = total + f.values[c.representative] \
            * g.values[c.representative].conj() * c.size
    return total * rational(1) / rational(f.group.order)


def is_irreducible(rep: MatrixRep) -> bool:
    chi = rep.character()
    return inner_product(chi, chi) == ONE


def are_equivalent(r1: MatrixRep, r2: MatrixRep) -> bool:
    """Character equality decides equivalence in characteristic zero."""
    if r1.group is not r2.group:
        raise ValueError("representations live on different groups")
    return r1.character() == r2.character()


def boxdot(r0: MatrixRep, r1: MatrixRep, label: Optional[RepLabel] = None) -> MatrixRep:
    """Inner tensor product: generator-wise Kronecker product."""
    if r0.group is not r1.group:
        raise ValueError("representations live on different groups")
    images = {g: r0.images[g].kron(r1.images[g]) for g in r0.group.gens}
    label = label or RepLabel(name=f"{r0.label.name}*{r1.label.name}")
    return MatrixRep(r0.group, images, label)


def direct_sum(r0: MatrixRep, r1: MatrixRep) -> MatrixRep:
    """Block-diagonal sum; internal testing helper, not part of any dual."""
    if r0.group is not r1.group:
        raise ValueError("representations live on different groups")
    n, m = r0.dim, r1.dim
    images = {}
    for g in r0.group.gens:
        a, b = r0.images[g], r1.images[g]
        rows = [[a[i, j] for j in range(n)] + [ZERO] * m for i in range(n)]
        rows += [[ZERO] * n + [b[i, j] for j in range(m)] for i in range(m)]
        images[g] = Matrix(rows)
    return MatrixRep(r0.group, images,
                     RepLabel(name=f"{r0.label.name}+{r1.label.name}"))


def conjugate_rep(rep: MatrixRep, w: Element) -> MatrixRep:
    """The twist (^w rho)(u) = rho(w^-1 u w)."""
    G = rep.group
    winv = G.inverse(w)
    images = {g: rep.evaluate(G.multiply(G.multiply(winv, G.gen_element(g)), w))
              for g in G.gens}
    return MatrixRep(G, images, RepLabel(name=f"^w{rep.label.name}"))


def lift_representation(rep: MatrixRep, target: PcGroup,
                        gen_map: dict[str, Element],
                        label: Optional[RepLabel] = None) -> MatrixRep:
    """Pull a representation back along the homomorphism sending each target
    generator to gen_map[name] in rep's group."""
    images = {g: rep.evaluate(gen_map[g]) for g in target.gens}
    return MatrixRep(target, images, label or rep.label)


@dataclass
class SpinType:
    """Central character chi_eps with chi_eps(z^a) = omega^(eps*a)."""

    center: Subgroup
    epsilon: int
    values: dict[Element, Cyclotomic]


def read_spin_type(rep: MatrixRep, center: Subgroup, z: Element) -> SpinType:
    """Read eps from the scalar action of the central generator z; exponents
    above d/2 are reported negatively, so order 3 gives eps in {0, 1, -1}."""
    d = rep.group.element_order(z)
    scalar = rep.evaluate(z).is_scalar()
    if scalar is None:
        raise SpinTypeError(f"{rep.label.name} is not scalar on the center")
    eps = next((e for e in range(d) if scalar == zeta(d, e)), None)
    if eps is None:
        raise SpinTypeError(f"central scalar {scalar} is not a power of zeta_{d}")
    signed = eps - d if eps > d // 2 else eps
    values = {}
    cur = rep.group.identity
    for a in range(d):
        values[cur] = scalar ** a
        cur = rep.group.multiply(cur, z)
    return SpinType(center, signed, values)


class FactorSet:
    """Root-of-unity valued 2-cocycle table on a finite element domain."""

    def __init__(self, group: PcGroup, elements: tuple[Element, ...],
                 table: dict[tuple[Element, Element], Cyclotomic]) -> None:
        self.group = group
        self.elements = tuple(elements)
        self.table = dict(table)

    def value(self, g: Element, h: Element) -> Cyclotomic:
        return self.table[(g, h)]

    def distinct_values(self) -> set[Cyclotomic]:
        return set(self.table.values())

    def is_trivial(self) -> bool:
        return all(v == ONE for v in self.table.values())

    def cocycle_witness(self) -> Optional[tuple[Element, Element, Element]]:
        """First triple violating r_{g,h} r_{gh,k} == r_{h,k} r_{g,hk},
        or None when the identity holds everywhere."""
        mul = self.group.multiply
        t = self.table
        for g in self.elements:
            for h in self.elements:
                gh = mul(g, h)
                r_gh = t[(g, h)]
                for k in self.elements:
                    lhs = r_gh * t[(gh, k)]
                    rhs = t[(h, k)] * t[(g, mul(h, k))]
                    if lhs != rhs:
                        return (g, h, k)
        return None


class ProjectiveRep:
    """Section-indexed matrices pi(g) with pi(g) pi(h) = r_{g,h} pi(gh)."""

    def __init__(self, group: PcGroup, images: dict[Element, Matrix],
                 factor_set: FactorSet, spin_type: SpinType,
                 label: Optional[RepLabel] = None) -> None:
        self.group = group
        self.images = dict(images)
        self.factor_set = factor_set
        self.spin_type = spin_type
        self.label = label

    def verify_witness(self) -> Optional[tuple[Element, Element]]:
        """First pair violating the defining relation, or None."""
        mul = self.group.multiply
        for g in self.group.elements():
            for h in self.group.elements():
                lhs = self.images[g] * self.images[h]
                rhs = self.images[mul(g, h)].scale(self.factor_set.value(g, h))
                if lhs != rhs:
                    return (g, h)
        return None


def sectional_restriction(Pi: MatrixRep, ext: CentralExtension,
                          section: Optional[Callable[[Element], Element]] = None
                          ) -> ProjectiveRep:
    """Restrict a linear representation of the covering group along a section
    of the projection, producing a projective representation of the base
    whose factor set is the spin type evaluated on the section defect."""
    H, G = ext.group, ext.base
    if not (Pi.group is H or Pi.group.same_presentation(H)):
        raise ValueError("representation does not live on the covering group")
    s = section or ext.section
    kernel = ext.kernel
    chi: dict[Element, Cyclotomic] = {}
    for zel in kernel.elements:
        scalar = Pi.evaluate(zel).is_scalar()
        if scalar is None:
            raise SpinTypeError(
                f"{Pi.label.name} is not scalar on the kernel; "
                "spin type undefined")
        chi[zel] = scalar
    z_gen = H.gen_element(ext.kernel_gen)
    spin = read_spin_type(Pi, kernel, z_gen)
    images = {g: Pi.evaluate(s(g)) for g in G.elements()}
    table = {}
    for g in G.elements():
        for h in G.elements():
            prod = H.multiply(s(g), s(h))
            lifted = s(G.multiply(g, h))
            defect = H.multiply(prod, H.inverse(lifted))
            if defect not in chi:
                raise ValueError("section defect left the kernel")
            table[(g, h)] = chi[defect]
    fs = FactorSet(G, G.elements(), table)
    return ProjectiveRep(G, images, fs, spin, Pi.label)
