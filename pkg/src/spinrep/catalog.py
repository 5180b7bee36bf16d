"""The library's three built-in groups with their published data: parsed
presentations, duals labeled the way the source tables label them, pinned
coset sections so matrices come out entry for entry, closed-form character
oracles, and the normalized generator-triple check."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional

from .cyclotomic import Cyclotomic, ONE, omega, rational
from .dsl import parse
from .matrices import Matrix
from .mackey import (AbelianCharacter, classical_method, full_dual, induce,
                     semidirect_layer)
from .pcgroup import CentralExtension, Element, PcGroup, Subgroup, one_step_extension
from .reps import MatrixRep, RepLabel, lift_representation

NAMES = ("g18_4", "r54_8", "g54_5")
ALIASES = {"g20": "g18_4", "g54_8": "r54_8"}


class UnknownCatalogName(KeyError):
    pass


class CatalogError(RuntimeError):
    pass


def resolve_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in NAMES:
        known = ", ".join(NAMES + tuple(ALIASES))
        raise UnknownCatalogName(f"unknown catalog group {name!r}; one of: {known}")
    return name


@lru_cache(maxsize=None)
def source(name: str) -> str:
    name = resolve_name(name)
    return resources.files("spinrep.data").joinpath(f"{name}.pcp").read_text()


@lru_cache(maxsize=None)
def build(name: str) -> PcGroup:
    group = parse(source(name))
    report = group.verify_consistency()
    if not report.ok:
        raise CatalogError(f"catalog presentation {name} is inconsistent:\n"
                           + "\n".join(report.lines()))
    return group


@lru_cache(maxsize=None)
def expected_values() -> dict:
    text = resources.files("spinrep.data").joinpath("expected_values.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def representation_group() -> CentralExtension:
    """R(g18_4) built live by the one-step extension; its presentation is
    checked against the stored r54_8 entry."""
    ext = one_step_extension(build("g18_4"), "x1", "x2")
    if not ext.report.efficient:
        raise CatalogError("one-step extension of g18_4 failed the "
                           "efficiency checks")
    if not ext.group.same_presentation(build("r54_8")):
        raise CatalogError("extension of g18_4 does not match the stored "
                           "r54_8 presentation")
    return ext


def _signed(e: int, n: int) -> int:
    return e - n if e > n // 2 else e


# -- duals with published labels --

@lru_cache(maxsize=None)
def spin_rep_base(eps: int) -> MatrixRep:
    """Q_eps on H0 = <z, x1, x2>, induced from the character (eps, 0) of
    U0 = <z, x1> with the pinned section (x2^-1, 1, x2)."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    e = eps % 3
    G = build("r54_8")
    H0 = G.prefix_group(3)
    U0 = H0.prefix_group(2)
    u0_sub = Subgroup.from_elements(
        H0, [el + (0,) for el in U0.elements()], check=False)
    chi = AbelianCharacter(U0, (e, 0))
    section = ((0, 0, 2), (0, 0, 0), (0, 0, 1))
    return induce(H0, u0_sub, chi, section=section,
                  label=RepLabel(name=f"Q({eps})", params=((e, 0), ())))


@lru_cache(maxsize=None)
def spin_duals() -> tuple[MatrixRep, ...]:
    """The four spin irreps R(eps;k) of r54_8, matrices in the published
    basis."""
    G = build("r54_8")
    layer = semidirect_layer(G, 3)
    out = []
    for eps in (1, -1):
        for rep in classical_method(layer, spin_rep_base(eps)):
            k = rep.label.params[1][0]
            label = RepLabel(name=f"R({eps};{k})", kind="spin",
                             params=(eps, k), spin=eps)
            out.append(rep.relabel(label))
    return tuple(out)


@lru_cache(maxsize=None)
def dual(name: str) -> tuple[MatrixRep, ...]:
    """Complete dual with catalog labels, deterministically ordered by
    (dimension, label name)."""
    name = resolve_name(name)
    G = build(name)
    if name == "g18_4":
        reps = []
        for rep in full_dual(G).reps:
            head, tail = rep.label.params
            m1, m2 = (_signed(e, 3) for e in head)
            if head == (0, 0):
                k = tail[0]
                label = RepLabel(name=f"Pi(0,0;{k})", params=(0, 0, k))
            else:
                label = RepLabel(name=f"Pi({m1},{m2})", params=(m1, m2))
            reps.append(rep.relabel(label))
    elif name == "r54_8":
        G18 = build("g18_4")
        gen_map = {"z": G18.identity,
                   "x1": G18.gen_element("x1"),
                   "x2": G18.gen_element("x2"),
                   "w": G18.gen_element("w")}
        reps = []
        for rep in dual("g18_4"):
            label = RepLabel(name=rep.label.name, kind="linear-type",
                             params=rep.label.params, spin=0)
            reps.append(lift_representation(rep, G, gen_map, label))
        reps.extend(spin_duals())
    else:
        reps = []
        for rep in full_dual(G).reps:
            head, tail = rep.label.params
            hs = ",".join(str(_signed(e, n))
                          for e, n in zip(head, (3, 3)))
            ts = ",".join(str(e) for e in tail)
            label = RepLabel(name=f"Pi({hs};{ts})", params=(head, tail))
            reps.append(rep.relabel(label))
    reps.sort(key=lambda r: (r.dim, r.label.name))
    return tuple(reps)


# -- published matrices --

def paper_intertwiner() -> Matrix:
    """J exchanging the basis functions at x2^q and x2^-q."""
    return Matrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def lemma_q_images(eps: int) -> dict[str, Matrix]:
    """The three Q_eps generator matrices of the order-27 subgroup."""
    w = omega(eps)
    wi = omega(-eps)
    return {
        "z": Matrix.scalar(3, w),
        "x1": Matrix([[w, 0, 0], [0, 1, 0], [0, 0, wi]]),
        "x2": Matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
    }


def paper_pi_images(m1: int, m2: int) -> dict[str, Matrix]:
    """The two-dimensional irrep of g18_4 on the section (1, w)."""
    return {
        "x1": Matrix([[omega(m1), 0], [0, omega(-m1)]]),
        "x2": Matrix([[omega(m2), 0], [0, omega(-m2)]]),
        "w": Matrix([[0, 1], [1, 0]]),
    }


def paper_spin_triple(eps: int, k: int) -> tuple[Matrix, Matrix, Matrix]:
    """Normalized (A, B, C) for the three-dimensional spin irreps."""
    sign = rational((-1) ** k)
    A = paper_intertwiner().scale(sign)
    B = Matrix([[0, 0, omega(-eps)], [0, 1, 0], [omega(eps), 0, 0]]).scale(sign)
    C = Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).scale(sign)
    return A, B, C


def paper_pi_triple(m1: int, m2: int) -> tuple[Matrix, Matrix, Matrix]:
    """Normalized (A, B, C) for the two-dimensional irreps."""
    A = Matrix([[0, 1], [1, 0]])
    B = Matrix([[0, omega(-m1)], [omega(m1), 0]])
    C = Matrix([[0, omega(m2)], [omega(-m2), 0]])
    return A, B, C


# -- closed-form character cells --

def expected_character(name: str, label: RepLabel,
                       element: Element) -> Optional[Cyclotomic]:
    """The published closed-form character value for a catalog irrep at an
    element, or None when no closed form was published for that cell."""
    name = resolve_name(name)
    if name == "g18_4" and label.kind == "linear-type" and len(label.params) == 2:
        m1, m2 = label.params
        b1, b2, s = element
        if s == 1:
            return rational(0)
        t = b1 * m1 + b2 * m2
        return omega(t) + omega(-t)
    if name == "r54_8" and label.kind == "spin":
        eps, k = label.params
        a, b1, b2, s = element
        lead = omega(a * eps)
        if s == 0:
            if b1 == 0 and b2 == 0:
                return lead * 3
            return rational(0)
        signed = lead * rational((-1) ** k)
        if b2 == 0:
            return signed
        if b2 == 1:
            return signed * omega(-b1 * eps)
        return signed * omega(b1 * eps)
    return None


# -- normalized triple --

@dataclass
class NormalizedTriple:
    """Images of the original involution triple, with the scalar tau from
    the squared product."""

    rep: MatrixRep
    A: Matrix
    B: Matrix
    C: Matrix
    tau: Cyclotomic

    def verify(self) -> list[str]:
        """Names of the failed relations, empty when all hold."""
        n = self.A.size
        I = Matrix.identity(n)
        failures = []
        for label, mat in (("A^2", self.A ** 2), ("B^2", self.B ** 2),
                           ("C^2", self.C ** 2),
                           ("(AB)^3", (self.A * self.B) ** 3),
                           ("(AC)^3", (self.A * self.C) ** 3)):
            if mat != I:
                failures.append(f"{label} != I")
        if (self.A * self.B * self.C) ** 2 != Matrix.scalar(n, self.tau):
            failures.append("(ABC)^2 != tau*I")
        if self.tau ** 3 != ONE:
            failures.append("tau^3 != 1")
        return failures


def normalized_triple(rep: MatrixRep) -> NormalizedTriple:
    """A = Pi(w), B = Pi(w^-1 x1), C = Pi(x2 w^-1), with tau the scalar of
    (ABC)^2."""
    G = rep.group
    w = G.gen_element("w")
    winv = G.inverse(w)
    A = rep.evaluate(w)
    B = rep.evaluate(G.multiply(winv, G.gen_element("x1")))
    C = rep.evaluate(G.multiply(G.gen_element("x2"), winv))
    tau = ((A * B * C) ** 2).is_scalar()
    if tau is None:
        raise CatalogError(f"(ABC)^2 is not scalar for {rep.label.name}")
    return NormalizedTriple(rep, A, B, C, tau)
