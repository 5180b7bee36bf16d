"""Mackey machine for iterated semidirect products with abelian bottom layer.

The pipeline follows the classical four-step method: orbits of the acting
layer on the dual of the normal part, stabilizers, intertwining operators
with their factor set, inner tensor with a stabilizer character, and
induction along an explicit coset section.  Factor sets that do not
normalize to 1 are reported as unsupported rather than silently handled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from .cyclotomic import Cyclotomic, ONE, ZERO, rational, zeta
from .matrices import Matrix, nullspace, scalar_ratio
from .pcgroup import Element, PcGroup, Subgroup
from .reps import (ClassFunction, FactorSet, MatrixRep, RepLabel,
                   inner_product)


class MackeyError(RuntimeError):
    """Internal inconsistency in the construction (bad input data)."""


class UnsupportedConstruction(RuntimeError):
    """A branch of the classical method this library deliberately does not
    build (nontrivial factor set, nonabelian stabilizer, ...)."""

    def __init__(self, message: str, orbit: Optional[str] = None):
        super().__init__(message)
        self.orbit = orbit


# -- dual of an abelian group with independent generators --

@dataclass(frozen=True)
class AbelianCharacter:
    """Linear character of an abelian group, gen_i -> zeta_{n_i}^{m_i}."""

    group: PcGroup
    exponents: tuple[int, ...]

    def value(self, el: Element) -> Cyclotomic:
        out = ONE
        for e, m, n in zip(el, self.exponents, self.group.orders):
            if e and m:
                out = out * zeta(n, (m * e) % n)
        return out

    def rep(self, label: Optional[RepLabel] = None) -> MatrixRep:
        images = {g: Matrix([[self.value(self.group.gen_element(g))]])
                  for g in self.group.gens}
        name = "chi(" + ",".join(str(m) for m in self.exponents) + ")"
        return MatrixRep(self.group, images,
                         label or RepLabel(name=name, params=(self.exponents, ())))


def abelian_dual(U: PcGroup) -> list[AbelianCharacter]:
    """All characters of an abelian group whose generators are independent
    (trivial power rules), in lexicographic exponent order."""
    if not U.is_abelian():
        raise ValueError(f"{U.name} is not abelian")
    if U.power_rules:
        raise ValueError(f"{U.name} generators are not independent")
    return [AbelianCharacter(U, exps)
            for exps in itertools.product(*(range(n) for n in U.orders))]


# -- semidirect layer bookkeeping --

@dataclass
class SemidirectLayer:
    """Decomposition ambient = base x| complement, with base the prefix group
    of the first base_len generators."""

    ambient: PcGroup
    base: PcGroup
    base_len: int
    base_sub: Subgroup
    complement: Subgroup

    def embed(self, el: Element) -> Element:
        return self.ambient.embed_from_prefix(el, self.base_len)

    def to_base(self, el: Element) -> Element:
        if any(el[self.base_len:]):
            raise MackeyError(f"element {el} is outside the base subgroup")
        return el[:self.base_len]


def semidirect_layer(ambient: PcGroup, base_len: int) -> SemidirectLayer:
    base = ambient.prefix_group(base_len)
    base_elems = [ambient.embed_from_prefix(el, base_len) for el in base.elements()]
    base_sub = Subgroup.from_elements(ambient, base_elems, check=False)
    comp_gens = [ambient.gen_element(g) for g in ambient.gens[base_len:]]
    complement = Subgroup.generated(ambient, comp_gens)
    for s in comp_gens:
        for gname in ambient.gens[:base_len]:
            conj = ambient.conjugate(s, ambient.gen_element(gname))
            if any(conj[base_len:]):
                raise MackeyError(
                    f"base is not normal under {ambient.name} layer action")
    for el in complement.elements:
        if any(el[:base_len]):
            raise UnsupportedConstruction(
                f"layer generators of {ambient.name} do not form a complement")
    return SemidirectLayer(ambient, base, base_len, base_sub, complement)


def twist(layer: SemidirectLayer, rho: MatrixRep, s: Element) -> MatrixRep:
    """(^s rho)(u) = rho(s^-1 u s) as a representation of the base group."""
    amb = layer.ambient
    sinv = amb.inverse(s)
    images = {}
    for g in layer.base.gens:
        u = layer.embed(layer.base.gen_element(g))
        conj = amb.multiply(amb.multiply(sinv, u), s)
        images[g] = rho.evaluate(layer.to_base(conj))
    return MatrixRep(layer.base, images, RepLabel(name=f"^s{rho.label.name}"))


# -- orbits and stabilizers --

@dataclass
class Orbit:
    representative: MatrixRep
    members: tuple[MatrixRep, ...]
    stabilizer: Subgroup


@dataclass
class OrbitDecomposition:
    acting: Subgroup
    orbits: tuple[Orbit, ...]


def _char_key(rep: MatrixRep):
    chi = rep.character()
    return (rep.dim,) + tuple(chi.values[c.representative].sort_key()
                              for c in rep.group.conjugacy_classes())


def _rep_sort_key(rep: MatrixRep):
    """Deterministic order: lexicographically least defining parameters,
    matching the published representative choices for character orbits."""
    if rep.label.params:
        return (rep.dim, rep.label.params)
    return (rep.dim, _char_key(rep))


def orbit_decomposition(layer: SemidirectLayer,
                        reps: Sequence[MatrixRep]) -> OrbitDecomposition:
    """Partition a complete list of base irreps into orbits of the layer
    action, with stabilizers."""
    by_key = {}
    for r in reps:
        key = _char_key(r)
        if key in by_key:
            raise MackeyError("duplicate representation in dual list")
        by_key[key] = r
    acting = layer.complement
    unassigned = dict(by_key)
    orbits = []
    while unassigned:
        key = next(iter(unassigned))
        rho = unassigned[key]
        members = {}
        stab = []
        for s in acting.elements:
            tkey = _char_key(twist(layer, rho, s))
            if tkey not in by_key:
                raise MackeyError("layer action leaves the dual list")
            members[tkey] = by_key[tkey]
            if tkey == key:
                stab.append(s)
        for tkey in members:
            unassigned.pop(tkey, None)
        rep = min(members.values(), key=_rep_sort_key)
        if rep is not rho:
            rkey = _char_key(rep)
            stab = [s for s in acting.elements
                    if _char_key(twist(layer, rep, s)) == rkey]
        stabilizer = Subgroup.from_elements(layer.ambient, stab, check=False)
        orbit = Orbit(rep, tuple(sorted(members.values(), key=_rep_sort_key)),
                      stabilizer)
        if len(orbit.members) * orbit.stabilizer.order != acting.order:
            raise MackeyError("orbit-stabilizer count mismatch")
        orbits.append(orbit)
    orbits.sort(key=lambda o: _rep_sort_key(o.representative))
    return OrbitDecomposition(acting, tuple(orbits))


# -- coset sections and induction --

@dataclass
class CosetSection:
    """Representatives for the right cosets H\\G, identity coset first with
    the identity as its representative."""

    subgroup: Subgroup
    representatives: tuple[Element, ...]

    def coset_index(self) -> dict[Element, int]:
        G = self.subgroup.group
        out: dict[Element, int] = {}
        for i, s in enumerate(self.representatives):
            for h in self.subgroup.elements:
                el = G.multiply(h, s)
                if el in out:
                    raise ValueError(f"cosets overlap at {el}")
                out[el] = i
        if len(out) != len(G.elements()):
            raise ValueError("section does not cover the group")
        return out


def default_section(G: PcGroup, H: Subgroup) -> CosetSection:
    """Normal-form transversal: the lexicographically least element of each
    right coset, cosets ordered by their representative."""
    members = set(H.elements)
    covered: set[Element] = set()
    reps = []
    for el in G.elements():
        if el in covered:
            continue
        reps.append(el)
        for h in members:
            covered.add(G.multiply(h, el))
    return CosetSection(H, tuple(reps))


@dataclass
class InducedProvenance:
    """Data needed to re-derive the character by the sum formula."""

    subgroup: Subgroup
    chi: dict[Element, Cyclotomic]
    section: tuple[Element, ...]


PointwiseRep = tuple  # (dim, eval) pair used internally


def _as_pointwise(G: PcGroup, H: Subgroup, rho) -> tuple[int, Callable[[Element], Matrix]]:
    if isinstance(rho, AbelianCharacter):
        base_len = len(rho.group.gens)

        def ev(el: Element, _rho=rho, _m=base_len) -> Matrix:
            if any(el[_m:]):
                raise MackeyError(f"element {el} outside character domain")
            return Matrix([[_rho.value(el[:_m])]])

        return 1, ev
    if isinstance(rho, MatrixRep):
        base_len = len(rho.group.gens)

        def ev(el: Element, _rho=rho, _m=base_len) -> Matrix:
            if any(el[_m:]):
                raise MackeyError(f"element {el} outside representation domain")
            return _rho.evaluate(el[:_m])

        return rho.dim, ev
    dim, fn = rho
    return dim, fn


def induce(G: PcGroup, H: Subgroup, rho,
           section: Optional[Union[CosetSection, Sequence[Element]]] = None,
           label: Optional[RepLabel] = None) -> MatrixRep:
    """Induced representation on functions over the section S: the (s, s')
    block of the image of g is rho(u) where s*g = u*s'."""
    if section is None:
        section = default_section(G, H)
    elif not isinstance(section, CosetSection):
        section = CosetSection(H, tuple(section))
    dim, ev = _as_pointwise(G, H, rho)
    coset_of = section.coset_index()
    S = section.representatives
    nblocks = len(S)
    images = {}
    for gname in G.gens:
        g0 = G.gen_element(gname)
        rows = [[None] * nblocks for _ in range(nblocks)]
        for i, s in enumerate(S):
            sg = G.multiply(s, g0)
            j = coset_of[sg]
            u = G.multiply(sg, G.inverse(S[j]))
            rows[i][j] = ev(u)
        big = []
        for i in range(nblocks):
            for p in range(dim):
                row = []
                for j in range(nblocks):
                    block = rows[i][j]
                    if block is None:
                        row.extend([ZERO] * dim)
                    else:
                        row.extend(block.rows[p])
                big.append(row)
        images[gname] = Matrix(big)
    chi = {h: ev(h).trace() for h in H.elements}
    prov = InducedProvenance(H, chi, tuple(S))
    if label is None:
        inner = rho.label.name if hasattr(rho, "label") else "rep"
        label = RepLabel(name=f"Ind[{inner}]")
    return MatrixRep(G, images, label, provenance=prov)


def induced_character(G: PcGroup, H: Subgroup,
                      chi: dict[Element, Cyclotomic]) -> ClassFunction:
    """chi_Pi(g) = (1/|H|) sum over k in G of chi(k g k^-1), with chi
    extended by zero outside H."""
    members = set(H.elements)
    inv_order = rational(1) / rational(H.order)
    values = {}
    for c in G.conjugacy_classes():
        g = c.representative
        total = ZERO
        for k in G.elements():
            x = G.multiply(G.multiply(k, g), G.inverse(k))
            if x in members:
                total = total + chi[x]
        values[g] = total * inv_order
    return ClassFunction(G, values)


# -- intertwiners --

class IntertwinerError(ValueError):
    """The stabilizer condition fails or the base representation is
    reducible."""


def solve_intertwiner(layer: SemidirectLayer, rho: MatrixRep,
                      w: Element) -> Matrix:
    """The operator J with rho(w(u)) = J rho(u) J^-1, from the exact linear
    system over the base generators.  The solution line is verified to be
    one-dimensional; J is scaled so that J^order(w) = I whenever the scalar
    defect is a root of unity, picking the smallest-argument valid factor."""
    amb = layer.ambient
    d = rho.dim
    nvars = d * d
    rows = []
    for gname in layer.base.gens:
        u = layer.embed(layer.base.gen_element(gname))
        wu = amb.conjugate(w, u)
        mu = rho.evaluate(layer.to_base(u))
        mwu = rho.evaluate(layer.to_base(wu))
        # J * rho(u) - rho(w(u)) * J == 0, entry (i, j)
        for i in range(d):
            for j in range(d):
                row = [ZERO] * nvars
                for q in range(d):
                    row[i * d + q] = row[i * d + q] + mu[q, j]
                for p in range(d):
                    row[p * d + j] = row[p * d + j] - mwu[i, p]
                rows.append(row)
    basis = nullspace(rows, nvars)
    if not basis:
        raise IntertwinerError("stabilizer condition fails: no intertwiner")
    if len(basis) > 1:
        raise IntertwinerError(
            f"intertwiner space has dimension {len(basis)}; "
            "base representation is reducible")
    vec = basis[0]
    J = Matrix([vec[i * d:(i + 1) * d] for i in range(d)])
    m = amb.element_order(w)
    c = (J ** m).is_scalar()
    if c is None:
        raise IntertwinerError("J^order(w) is not scalar")
    root = c.as_root_of_unity()
    if root is not None and c != ONE:
        t, _ = root
        L = t * m
        lam = next(lam for lam in (zeta(L, s) for s in range(L))
                   if lam ** m == c.inverse())
        J = J.scale(lam)
        assert (J ** m).is_scalar() == ONE
    return J


@dataclass
class IntertwinerFamily:
    """Intertwiners J(s) for every stabilizer element, extended
    multiplicatively from an independent generating set."""

    rho: MatrixRep
    stabilizer: Subgroup
    operators: dict[Element, Matrix]

    def factor_set(self) -> FactorSet:
        amb = self.stabilizer.group
        table = {}
        for v in self.stabilizer.elements:
            for w in self.stabilizer.elements:
                prod = self.operators[v] * self.operators[w]
                alpha = scalar_ratio(prod, self.operators[amb.multiply(v, w)])
                if alpha is None:
                    raise IntertwinerError(
                        "intertwiner product is not a scalar multiple; "
                        "base representation is reducible")
                if alpha.as_root_of_unity() is None:
                    raise IntertwinerError(f"factor set value {alpha} is not "
                                           "a root of unity")
                table[(v, w)] = alpha
        return FactorSet(amb, self.stabilizer.elements, table)


def _cyclic_decomposition(group: PcGroup, sub: Subgroup) -> list[Element]:
    """Independent generators of an abelian subgroup, greedily by maximal
    element order."""
    if sub.order == 1:
        return []
    if not sub.is_abelian():
        raise UnsupportedConstruction("nonabelian stabilizer is unsupported")
    chosen: list[Element] = []
    span = {group.identity}

    def extend_span(base: set[Element], g: Element) -> set[Element]:
        out = set(base)
        cur = g
        while cur != group.identity:
            out |= {group.multiply(b, cur) for b in base}
            cur = group.multiply(cur, g)
        return out

    while len(span) < sub.order:
        candidates = sorted(
            (el for el in sub.elements if el not in span),
            key=lambda el: (-group.element_order(el), el))
        for el in candidates:
            new_span = extend_span(span, el)
            if len(new_span) == len(span) * group.element_order(el):
                chosen.append(el)
                span = new_span
                break
        else:
            raise UnsupportedConstruction(
                "could not split the stabilizer into independent cycles")
    return chosen


def intertwiner_family(layer: SemidirectLayer, rho: MatrixRep,
                       stabilizer: Subgroup) -> IntertwinerFamily:
    amb = layer.ambient
    gens = _cyclic_decomposition(amb, stabilizer)
    orders = [amb.element_order(g) for g in gens]
    jgens = [solve_intertwiner(layer, rho, g) for g in gens]
    operators = {}
    for exps in itertools.product(*(range(n) for n in orders)):
        el = amb.identity
        op = Matrix.identity(rho.dim)
        for g, J, e in zip(gens, jgens, exps):
            el = amb.multiply(el, amb.power(g, e))
            op = op * (J ** e)
        if el in operators:
            raise MackeyError("stabilizer decomposition is not independent")
        operators[el] = op
    if set(operators) != set(stabilizer.elements):
        raise MackeyError("stabilizer decomposition does not span")
    return IntertwinerFamily(rho, stabilizer, operators)


# -- stabilizer characters --

def _complement_characters(layer: SemidirectLayer) -> list[AbelianCharacter]:
    amb = layer.ambient
    names = amb.gens[layer.base_len:]
    orders = amb.orders[layer.base_len:]
    expected = 1
    for n in orders:
        expected *= n
    if layer.complement.order != expected or not layer.complement.is_abelian():
        raise UnsupportedConstruction(
            "layer complement is not an abelian group with independent "
            "generators; its projective duals are unsupported")
    comp = PcGroup(f"{amb.name}.layer", names, orders,
                   swap_rules={})
    return abelian_dual(comp)


def stabilizer_characters(layer: SemidirectLayer, stabilizer: Subgroup
                          ) -> list[tuple[tuple[int, ...], dict[Element, Cyclotomic]]]:
    """Characters of the stabilizer, as restrictions of the complement's
    characters; every character of a subgroup of a finite abelian group
    arises this way."""
    chars = _complement_characters(layer)
    base_len = layer.base_len
    seen = {}
    for chi in chars:
        values = tuple(chi.value(s[base_len:]) for s in stabilizer.elements)
        if values not in seen:
            seen[values] = chi.exponents
    if len(seen) != stabilizer.order:
        raise MackeyError("stabilizer character count mismatch")
    out = []
    for values, exps in sorted(seen.items(), key=lambda kv: kv[1]):
        table = dict(zip(stabilizer.elements, values))
        out.append((exps, table))
    return out


# -- the classical method --

def classical_method(layer: SemidirectLayer, rho: MatrixRep,
                     section: Optional[Sequence[Element]] = None,
                     stabilizer: Optional[Subgroup] = None
                     ) -> list[MatrixRep]:
    """All irreducibles of the ambient group attached to the orbit of rho:
    one induced representation per stabilizer character, built from
    rho . J . pi1 on base x| stabilizer."""
    amb = layer.ambient
    if stabilizer is None:
        stabilizer = Subgroup.from_elements(
            amb,
            [s for s in layer.complement.elements
             if _char_key(twist(layer, rho, s)) == _char_key(rho)],
            check=False)
    family = intertwiner_family(layer, rho, stabilizer)
    alpha = family.factor_set()
    if not alpha.is_trivial():
        raise UnsupportedConstruction(
            f"orbit of {rho.label.name}: factor set of the intertwiner "
            "family does not normalize to 1; the central-extension branch "
            "of the classical method is not built",
            orbit=rho.label.name)
    # subgroup H_s = base . stabilizer
    elems = [amb.multiply(layer.embed(u), s)
             for u in layer.base.elements() for s in stabilizer.elements]
    Hs = Subgroup.from_elements(amb, elems, check=False)
    base_len = layer.base_len

    results = []
    for exps, pi1 in stabilizer_characters(layer, stabilizer):

        def ev(el: Element, _pi1=pi1) -> Matrix:
            u = el[:base_len] + (0,) * (len(amb.gens) - base_len)
            s = (0,) * base_len + el[base_len:]
            if s not in _pi1:
                raise MackeyError(f"element {el} outside base.stabilizer")
            mat = rho.evaluate(layer.to_base(u)) * family.operators[s]
            return mat.scale(_pi1[s])

        head = rho.label.params[0] if rho.label.params else rho.label.name
        label = RepLabel(
            name=f"Pi[{rho.label.name}|{','.join(map(str, exps))}]",
            params=(head, exps))
        results.append(induce(amb, Hs, (rho.dim, ev), section=section,
                              label=label))
    return results


# -- the full dual --

class DualError(RuntimeError):
    """The computed dual failed a completeness or orthogonality check."""


@dataclass
class DualResult:
    group: PcGroup
    tower: tuple[tuple[str, ...], ...]
    reps: tuple[MatrixRep, ...]

    def summary(self) -> list[tuple[int, int]]:
        counts: dict[int, int] = {}
        for r in self.reps:
            counts[r.dim] = counts.get(r.dim, 0) + 1
        return sorted(counts.items())


def verify_dual(group: PcGroup, reps: Sequence[MatrixRep]) -> None:
    """Burnside count, orthonormality, and class-count check; raises
    DualError with the deficit on failure."""
    total = sum(r.dim ** 2 for r in reps)
    if total != group.order:
        raise DualError(f"sum of squared dimensions is {total}, "
                        f"expected {group.order}")
    nclasses = len(group.conjugacy_classes())
    if len(reps) != nclasses:
        raise DualError(f"{len(reps)} irreducibles but {nclasses} classes")
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            if j < i:
                continue
            val = inner_product(a.character(), b.character())
            want = ONE if i == j else ZERO
            if val != want:
                raise DualError(
                    f"<{a.label.name}, {b.label.name}> = {val}, "
                    f"expected {want}")


def full_dual(G: PcGroup, tower: Optional[tuple[tuple[str, ...], ...]] = None
              ) -> DualResult:
    """Complete dual of G along its declared semidirect tower, verified
    complete and orthonormal."""
    tower = tower or G.tower
    if not tower:
        raise ValueError(f"{G.name} has no declared tower")
    flat = [g for layer in tower for g in layer]
    if flat != list(G.gens):
        raise ValueError("tower layers must list every generator once, "
                         "in declaration order")
    m = len(tower[0])
    U = G.prefix_group(m)
    reps = [chi.rep() for chi in abelian_dual(U)]
    for layer_names in tower[1:]:
        m += len(layer_names)
        ambient = G.prefix_group(m)
        layer = semidirect_layer(ambient, m - len(layer_names))
        decomposition = orbit_decomposition(layer, reps)
        new_reps: list[MatrixRep] = []
        for orbit in decomposition.orbits:
            new_reps.extend(
                classical_method(layer, orbit.representative,
                                 stabilizer=orbit.stabilizer))
        reps = new_reps
    reps.sort(key=lambda r: (r.dim, r.label.name))
    verify_dual(G, reps)
    return DualResult(G, tower, tuple(reps))
