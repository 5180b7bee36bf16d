"""Finite groups presented by ordered generators with relative orders and
rewriting rules.

Elements are exponent tuples (e_1, ..., e_k) denoting g_1^e_1 ... g_k^e_k in
normal form.  Multiplication collects from the left: the leftmost out-of-order
adjacent pair (or completed power run) is rewritten until the word is normal.
Consistency is established empirically by exhaustive associativity, which is
affordable at the scale this library targets.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

Element = tuple[int, ...]

COLLECTION_BUDGET = 10**6


class CollectionError(RuntimeError):
    """Collection exceeded its iteration budget; the presentation is
    inconsistent or badly ordered."""


class ExtensionError(ValueError):
    """Invalid input to a central-extension construction."""


@dataclass(frozen=True)
class Subgroup:
    """Subgroup stored extensionally as a sorted member tuple."""

    group: "PcGroup"
    elements: tuple[Element, ...]
    gens: Optional[tuple[Element, ...]] = None

    @classmethod
    def from_elements(cls, group: "PcGroup", elements: Iterable[Element],
                      gens=None, check: bool = True) -> "Subgroup":
        elems = tuple(sorted(set(elements)))
        sub = cls(group, elems, tuple(gens) if gens else None)
        if check and not sub.is_closed():
            raise ValueError("element set is not closed under multiplication")
        return sub

    @classmethod
    def generated(cls, group: "PcGroup", gens: Iterable[Element]) -> "Subgroup":
        gens = tuple(gens)
        seen = {group.identity}
        frontier = [group.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = group.multiply(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return cls(group, tuple(sorted(seen)), gens)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, el: Element) -> bool:
        return el in set(self.elements)

    def is_closed(self) -> bool:
        members = set(self.elements)
        if self.group.identity not in members:
            return False
        for a in self.elements:
            for b in self.elements:
                if self.group.multiply(a, b) not in members:
                    return False
        return True

    def is_abelian(self) -> bool:
        for a in self.elements:
            for b in self.elements:
                if self.group.multiply(a, b) != self.group.multiply(b, a):
                    return False
        return True


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Element
    members: tuple[Element, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class ConsistencyReport:
    group_name: str
    ok: bool
    order: int
    expected_order: int
    associative: bool
    assoc_witness: Optional[tuple[Element, Element, Element]]
    inverses_ok: bool
    inverse_witness: Optional[Element]
    message: str = ""

    def lines(self) -> list[str]:
        out = [f"consistency {self.group_name}: {'pass' if self.ok else 'FAIL'}"]
        out.append(f"  order {self.order} (expected {self.expected_order})")
        out.append(f"  associativity on {self.order}^3 triples: "
                   f"{'pass' if self.associative else 'FAIL'}")
        if self.assoc_witness:
            out.append(f"  witness triple: {self.assoc_witness}")
        out.append(f"  two-sided inverses: {'pass' if self.inverses_ok else 'FAIL'}")
        if self.inverse_witness:
            out.append(f"  witness element: {self.inverse_witness}")
        if self.message:
            out.append(f"  note: {self.message}")
        return out


class PcGroup:
    """Group given by a polycyclic-style presentation.

    swap_rules maps (j, i) with j > i to the normal form of g_j * g_i; any
    missing pair defaults to a commuting rule.  power_rules maps i to the
    normal form of g_i^orders[i]; missing means identity.  Instances are
    immutable; derived data (element table, classes, ...) is cached lazily.
    """

    def __init__(self, name: str, gens: Iterable[str], orders: Iterable[int],
                 power_rules: Optional[dict[int, Element]] = None,
                 swap_rules: Optional[dict[tuple[int, int], Element]] = None,
                 tower: Optional[tuple[tuple[str, ...], ...]] = None) -> None:
        self.name = name
        self.gens = tuple(gens)
        self.orders = tuple(orders)
        k = len(self.gens)
        if len(self.orders) != k:
            raise ValueError("gens and orders length mismatch")
        if len(set(self.gens)) != k:
            raise ValueError("duplicate generator names")
        for n in self.orders:
            if n < 2:
                raise ValueError("relative orders must be >= 2")
        self.power_rules: dict[int, Element] = {}
        for i, vec in (power_rules or {}).items():
            self._check_word(vec)
            if any(vec):
                self.power_rules[i] = tuple(vec)
        self.swap_rules: dict[tuple[int, int], Element] = {}
        for j in range(k):
            for i in range(j):
                self.swap_rules[(j, i)] = self._commute_word(j, i)
        for (j, i), vec in (swap_rules or {}).items():
            if not j > i:
                raise ValueError(f"swap rule ({j},{i}) must have j > i")
            self._check_word(vec)
            self.swap_rules[(j, i)] = tuple(vec)
        self.tower = tower
        self.identity: Element = (0,) * k
        self._elements: Optional[tuple[Element, ...]] = None
        self._index: Optional[dict[Element, int]] = None
        self._table: Optional[list[list[int]]] = None
        self._inverses: dict[Element, Element] = {}
        self._classes: Optional[tuple[ConjugacyClass, ...]] = None
        self._class_of: Optional[dict[Element, Element]] = None
        self._center: Optional[Subgroup] = None
        self._derived: Optional[Subgroup] = None
        self._prefix_cache: dict[int, "PcGroup"] = {}

    # -- presentation helpers --

    def _check_word(self, vec) -> None:
        if len(vec) != len(self.gens):
            raise ValueError("rule word has wrong length")
        for e, n in zip(vec, self.orders):
            if not 0 <= e < n:
                raise ValueError(f"rule word exponent {e} out of range")

    def _commute_word(self, j: int, i: int) -> Element:
        vec = [0] * len(self.gens)
        vec[i] = 1
        vec[j] = 1
        return tuple(vec)

    def gen_element(self, name: str) -> Element:
        idx = self.gens.index(name)
        vec = [0] * len(self.gens)
        vec[idx] = 1
        return tuple(vec)

    @property
    def order(self) -> int:
        n = 1
        for m in self.orders:
            n *= m
        return n

    def describe(self) -> str:
        sig = " ".join(f"{g}^{n}" for g, n in zip(self.gens, self.orders))
        return f"{self.name} <{sig}>"

    # -- collection --

    def _expand(self, vec: Element) -> list[int]:
        out: list[int] = []
        for idx, e in enumerate(vec):
            out.extend([idx] * e)
        return out

    def _collect(self, letters: list[int]) -> Element:
        orders = self.orders
        steps = 0
        i = 0
        while i < len(letters):
            g = letters[i]
            run_start = i
            while run_start > 0 and letters[run_start - 1] == g:
                run_start -= 1
            if i - run_start + 1 == orders[g]:
                repl = self._expand(self.power_rules.get(g, self.identity))
                letters[run_start:i + 1] = repl
                i = max(run_start - 1, 0)
            elif i + 1 < len(letters) and g > letters[i + 1]:
                repl = self._expand(self.swap_rules[(g, letters[i + 1])])
                letters[i:i + 2] = repl
                i = max(i - 1, 0)
            else:
                i += 1
                continue
            steps += 1
            if steps > COLLECTION_BUDGET:
                raise CollectionError(
                    f"collection budget exceeded in {self.name}; "
                    "presentation is inconsistent or badly ordered")
        vec = [0] * len(self.gens)
        for g in letters:
            vec[g] += 1
        return tuple(vec)

    # -- core operations --

    def multiply(self, a: Element, b: Element) -> Element:
        if self._table is not None:
            idx = self._index
            return self._elements[self._table[idx[a]][idx[b]]]
        return self._collect(self._expand(a) + self._expand(b))

    def power(self, a: Element, k: int) -> Element:
        if k < 0:
            return self.power(self.inverse(a), -k)
        out = self.identity
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def inverse(self, a: Element) -> Element:
        cached = self._inverses.get(a)
        if cached is not None:
            return cached
        prev, cur = a, self.multiply(a, a)
        while cur != self.identity:
            prev, cur = cur, self.multiply(cur, a)
        if a == self.identity:
            prev = a
        self._inverses[a] = prev
        return prev

    def conjugate(self, x: Element, g: Element) -> Element:
        """x g x^-1, the action phi(x) on g."""
        return self.multiply(self.multiply(x, g), self.inverse(x))

    def commutator(self, a: Element, b: Element) -> Element:
        """[a, b] = a^-1 b^-1 a b."""
        return self.multiply(self.multiply(self.inverse(a), self.inverse(b)),
                             self.multiply(a, b))

    def element_order(self, a: Element) -> int:
        n, cur = 1, a
        while cur != self.identity:
            cur = self.multiply(cur, a)
            n += 1
        return n

    # -- enumeration and cached structure --

    def elements(self) -> tuple[Element, ...]:
        if self._elements is None:
            self._elements = tuple(itertools.product(*(range(n) for n in self.orders)))
            self._index = {el: i for i, el in enumerate(self._elements)}
        return self._elements

    def element_index(self, el: Element) -> int:
        self.elements()
        return self._index[el]

    def table(self) -> list[list[int]]:
        if self._table is None:
            els = self.elements()
            idx = self._index
            tab = []
            for a in els:
                ea = self._expand(a)
                tab.append([idx[self._collect(ea + self._expand(b))] for b in els])
            self._table = tab
        return self._table

    def is_abelian(self) -> bool:
        gens = [self.gen_element(g) for g in self.gens]
        return all(self.multiply(a, b) == self.multiply(b, a)
                   for a in gens for b in gens)

    def verify_consistency(self) -> ConsistencyReport:
        name = self.name
        try:
            tab = self.table()
        except CollectionError as exc:
            return ConsistencyReport(name, False, 0, self.order, False, None,
                                     False, None, str(exc))
        els = self.elements()
        n = len(els)
        witness = None
        for i in range(n):
            row_i = tab[i]
            for j in range(n):
                ij = row_i[j]
                row_ij = tab[ij]
                row_j = tab[j]
                for k in range(n):
                    if row_ij[k] != row_i[row_j[k]]:
                        witness = (els[i], els[j], els[k])
                        break
                if witness:
                    break
            if witness:
                break
        associative = witness is None
        e = self.element_index(self.identity)
        inverses_ok = True
        inv_witness = None
        for i in range(n):
            if not any(tab[i][j] == e and tab[j][i] == e for j in range(n)):
                inverses_ok = False
                inv_witness = els[i]
                break
        ok = associative and inverses_ok and n == self.order
        return ConsistencyReport(name, ok, n, self.order, associative, witness,
                                 inverses_ok, inv_witness)

    def center(self) -> Subgroup:
        if self._center is None:
            tab = self.table()
            els = self.elements()
            n = len(els)
            members = [els[i] for i in range(n)
                       if all(tab[i][j] == tab[j][i] for j in range(n))]
            self._center = Subgroup.from_elements(self, members, check=False)
        return self._center

    def derived_subgroup(self) -> Subgroup:
        if self._derived is None:
            els = self.elements()
            comms = {self.commutator(a, b) for a in els for b in els}
            self._derived = Subgroup.generated(self, sorted(comms))
        return self._derived

    def conjugacy_classes(self) -> tuple[ConjugacyClass, ...]:
        if self._classes is None:
            els = self.elements()
            seen: set[Element] = set()
            classes = []
            class_of: dict[Element, Element] = {}
            for g in els:
                if g in seen:
                    continue
                orbit = sorted({self.conjugate(x, g) for x in els})
                rep = orbit[0]
                classes.append(ConjugacyClass(rep, tuple(orbit)))
                for m in orbit:
                    seen.add(m)
                    class_of[m] = rep
            classes.sort(key=lambda c: c.representative)
            self._classes = tuple(classes)
            self._class_of = class_of
        return self._classes

    def class_representative(self, el: Element) -> Element:
        self.conjugacy_classes()
        return self._class_of[el]

    def element_order_census(self) -> dict[int, int]:
        return dict(sorted(Counter(self.element_order(g)
                                   for g in self.elements()).items()))

    def invariant_census(self) -> dict:
        """Isomorphism-invariant fingerprint used in place of explicit
        isomorphism testing."""
        return {
            "order": self.order,
            "abelian": self.is_abelian(),
            "center_order": self.center().order,
            "derived_order": self.derived_subgroup().order,
            "abelianization_order": self.order // self.derived_subgroup().order,
            "class_count": len(self.conjugacy_classes()),
            "element_order_census": self.element_order_census(),
        }

    # -- subgroups --

    def generated_subgroup(self, gen_names: Iterable[str]) -> Subgroup:
        return Subgroup.generated(self, [self.gen_element(g) for g in gen_names])

    def prefix_group(self, m: int, name: Optional[str] = None) -> "PcGroup":
        """The subgroup of the first m generators as a group in its own
        right.  Requires every internal rule to stay inside the prefix."""
        if m in self._prefix_cache:
            return self._prefix_cache[m]
        if not 1 <= m <= len(self.gens):
            raise ValueError("prefix length out of range")
        if m == len(self.gens):
            self._prefix_cache[m] = self
            return self
        for i, vec in self.power_rules.items():
            if i < m and any(vec[m:]):
                raise ValueError(f"power rule for {self.gens[i]} leaves the prefix")
        swaps = {}
        for (j, i), vec in self.swap_rules.items():
            if j < m:
                if any(vec[m:]):
                    raise ValueError(
                        f"swap rule ({self.gens[j]},{self.gens[i]}) leaves the prefix")
                swaps[(j, i)] = vec[:m]
        powers = {i: vec[:m] for i, vec in self.power_rules.items() if i < m}
        sub = PcGroup(name or f"{self.name}[:{m}]", self.gens[:m], self.orders[:m],
                      powers, swaps)
        self._prefix_cache[m] = sub
        return sub

    def embed_from_prefix(self, el: Element, m: int) -> Element:
        return tuple(el) + (0,) * (len(self.gens) - m)

    def same_presentation(self, other: "PcGroup") -> bool:
        return (self.gens == other.gens and self.orders == other.orders
                and self.power_rules == other.power_rules
                and self.swap_rules == other.swap_rules)

    def __repr__(self) -> str:
        return f"PcGroup({self.describe()})"


@dataclass
class ExtensionReport:
    consistent: bool
    order_ok: bool
    kernel_central: bool
    kernel_in_derived: bool
    projection_is_hom: bool
    kernel_is_cyclic_z: bool
    consistency: ConsistencyReport = None

    @property
    def efficient(self) -> bool:
        return (self.consistent and self.order_ok and self.kernel_central
                and self.kernel_in_derived and self.projection_is_hom
                and self.kernel_is_cyclic_z)

    def lines(self) -> list[str]:
        flags = [
            ("presentation consistent", self.consistent),
            ("order = d * |G|", self.order_ok),
            ("z central", self.kernel_central),
            ("z inside derived subgroup", self.kernel_in_derived),
            ("projection is a homomorphism onto G", self.projection_is_hom),
            ("projection kernel = <z>", self.kernel_is_cyclic_z),
        ]
        out = [f"  {'pass' if v else 'FAIL'}  {k}" for k, v in flags]
        verdict = "pass" if self.efficient else "FAIL"
        out.append(f"efficient central extension: {verdict}")
        return out


@dataclass
class CentralExtension:
    base: PcGroup
    group: PcGroup
    kernel_gen: str
    report: ExtensionReport

    def projection(self, h: Element) -> Element:
        return h[1:]

    def section(self, g: Element) -> Element:
        """Normal-form section: the kernel generator exponent is 0."""
        return (0,) + tuple(g)

    @property
    def kernel(self) -> Subgroup:
        return self.group.generated_subgroup([self.kernel_gen])


def one_step_extension(G: PcGroup, x_name: str, y_name: str) -> CentralExtension:
    """Replace the commuting relation [x, y] = 1 by [xi, eta] = z with z a
    new central generator of the common order, placed first in the ordering.
    All other rules lift verbatim."""
    if x_name not in G.gens or y_name not in G.gens:
        raise ExtensionError(f"pair must name generators of {G.name}")
    if x_name == y_name:
        raise ExtensionError("pair must be two distinct generators")
    ix, iy = G.gens.index(x_name), G.gens.index(y_name)
    gx, gy = G.gen_element(x_name), G.gen_element(y_name)
    if G.multiply(gx, gy) != G.multiply(gy, gx):
        raise ExtensionError(f"{x_name} and {y_name} do not commute in {G.name}")
    d = G.element_order(gx)
    if d != G.element_order(gy):
        raise ExtensionError(
            f"{x_name} and {y_name} have different orders "
            f"({d} vs {G.element_order(gy)})")
    if d < 2:
        raise ExtensionError("pair must have order > 1")

    z_name = "z"
    while z_name in G.gens:
        z_name += "z"
    k = len(G.gens)
    lift = lambda vec: (0,) + tuple(vec)
    powers = {i + 1: lift(vec) for i, vec in G.power_rules.items()}
    swaps = {(j + 1, i + 1): lift(vec) for (j, i), vec in G.swap_rules.items()}
    new_key = (max(ix, iy) + 1, min(ix, iy) + 1)
    vec = [0] * (k + 1)
    vec[0] = d - 1 if iy > ix else 1
    vec[ix + 1] = 1
    vec[iy + 1] = 1
    swaps[new_key] = tuple(vec)
    H = PcGroup(f"{G.name}.ext({x_name},{y_name})", (z_name,) + G.gens,
                (d,) + G.orders, powers, swaps)

    consistency = H.verify_consistency()
    z_el = H.gen_element(z_name)
    if consistency.ok:
        order_ok = H.order == d * G.order
        kernel_central = z_el in set(H.center().elements)
        kernel_in_derived = z_el in set(H.derived_subgroup().elements)
        proj_ok = all(
            G.multiply(a[1:], b[1:]) == H.multiply(a, b)[1:]
            for a in H.elements() for b in H.elements())
        kernel = {h for h in H.elements() if h[1:] == G.identity}
        z_powers = {tuple(v) for v in
                    ((e,) + G.identity for e in range(d))}
        kernel_ok = kernel == z_powers
    else:
        order_ok = kernel_central = kernel_in_derived = False
        proj_ok = kernel_ok = False
    report = ExtensionReport(consistency.ok, order_ok, kernel_central,
                             kernel_in_derived, proj_ok, kernel_ok, consistency)
    return CentralExtension(G, H, z_name, report)
