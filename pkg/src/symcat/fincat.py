"""Finite categories given by explicit composition tables, and law checkers.

Everything here is table-driven and exhaustive: a checker visits every
case its law quantifies over and returns a :class:`LawReport` whose
witnesses are tuples of ids that can be replayed against the tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .errors import BudgetExceeded, MalformedDocument, NotComposable, NotInHyp, NotIso
from .report import Collector, LawReport
from .symgrp import FinGroup

ENUMERATION_BUDGET = 10**7

Id = Hashable


@dataclass(frozen=True, eq=False)
class FinCategory:
    objects: tuple
    morphisms: Mapping[Id, tuple[Id, Id]]  # id -> (source, target)
    identities: Mapping[Id, Id]
    composition: Mapping[tuple[Id, Id], Id]  # (g, f) -> g o f

    @classmethod
    def build(cls, objects, morphisms, identities, composition) -> "FinCategory":
        """``morphisms`` may be a mapping or an iterable of ``(id, src, tgt)``."""
        if not isinstance(morphisms, Mapping):
            morphisms = {m: (s, t) for m, s, t in morphisms}
        return cls(tuple(objects), dict(morphisms), dict(identities), dict(composition))

    def src(self, f) -> Id:
        return self.morphisms[f][0]

    def tgt(self, f) -> Id:
        return self.morphisms[f][1]

    def hom(self, x, y) -> list:
        return [m for m, (s, t) in self.morphisms.items() if s == x and t == y]

    def composable(self, g, f) -> bool:
        return self.morphisms[f][1] == self.morphisms[g][0]

    def composable_pairs(self):
        for g in self.morphisms:
            for f in self.morphisms:
                if self.composable(g, f):
                    yield g, f

    def compose(self, g, f) -> Id:
        if not self.composable(g, f):
            raise NotComposable(f"{g!r} o {f!r}: target of {f!r} is not the source of {g!r}")
        return self.composition[(g, f)]

    def inverses(self, f) -> list:
        s, t = self.morphisms[f]
        return [
            h for h in self.hom(t, s)
            if self.composition.get((h, f)) == self.identities[s]
            and self.composition.get((f, h)) == self.identities[t]
        ]

    def is_iso(self, f) -> bool:
        return bool(self.inverses(f))

    def with_composition(self, key, value) -> "FinCategory":
        comp = dict(self.composition)
        comp[key] = value
        return FinCategory(self.objects, self.morphisms, self.identities, comp)

    def with_identity(self, obj, value) -> "FinCategory":
        ids = dict(self.identities)
        ids[obj] = value
        return FinCategory(self.objects, self.morphisms, ids, self.composition)


@dataclass(frozen=True)
class FunctorData:
    obj_map: Mapping[Id, Id]
    mor_map: Mapping[Id, Id]

    def __call__(self, x):
        return self.mor_map[x]

    def key(self) -> tuple:
        return (tuple(sorted(self.obj_map.items(), key=repr)), tuple(sorted(self.mor_map.items(), key=repr)))

    def __hash__(self):
        return hash(self.key())

    def with_obj(self, k, v) -> "FunctorData":
        return FunctorData({**self.obj_map, k: v}, dict(self.mor_map))

    def with_mor(self, k, v) -> "FunctorData":
        return FunctorData(dict(self.obj_map), {**self.mor_map, k: v})


@dataclass(frozen=True)
class NatTransformData:
    components: Mapping[Id, Id]

    def __getitem__(self, x):
        return self.components[x]

    def key(self) -> tuple:
        return tuple(sorted(self.components.items(), key=repr))

    def __hash__(self):
        return hash(self.key())

    def with_component(self, k, v) -> "NatTransformData":
        return NatTransformData({**self.components, k: v})


def identity_functor(c: FinCategory) -> FunctorData:
    return FunctorData({x: x for x in c.objects}, {m: m for m in c.morphisms})


def compose_functors(G: FunctorData, F: FunctorData) -> FunctorData:
    """``G o F``."""
    return FunctorData(
        {x: G.obj_map[y] for x, y in F.obj_map.items()},
        {m: G.mor_map[n] for m, n in F.mor_map.items()},
    )


def identity_transformation(F: FunctorData, c: FinCategory) -> NatTransformData:
    return NatTransformData({x: c.identities[F.obj_map[x]] for x in F.obj_map})


# -- category laws -----------------------------------------------------------

def _structure_errors(c: FinCategory) -> None:
    objs = set(c.objects)
    if len(objs) != len(c.objects):
        raise MalformedDocument("duplicate object ids")
    for m, (s, t) in c.morphisms.items():
        if s not in objs or t not in objs:
            raise MalformedDocument(f"morphism {m!r} has dangling endpoint")
    for x, i in c.identities.items():
        if x not in objs:
            raise MalformedDocument(f"identity declared for unknown object {x!r}")
        if i not in c.morphisms:
            raise MalformedDocument(f"identity of {x!r} is unknown morphism {i!r}")
    for (g, f), h in c.composition.items():
        for m in (g, f, h):
            if m not in c.morphisms:
                raise MalformedDocument(f"composition entry ({g!r}, {f!r}) mentions unknown morphism {m!r}")
        if not c.composable(g, f):
            raise MalformedDocument(f"composition entry on non-composable pair ({g!r}, {f!r})")


def validate_category(c: FinCategory, max_violations: int | None = None, groupoid: bool = False) -> LawReport:
    """Check identities, closure, unit laws and associativity.

    With ``groupoid=True`` every morphism must also be invertible, which is
    the extra law satisfied by deloopings of groups.
    """
    _structure_errors(c)
    col = Collector("validate_category", max_violations)
    for x in c.objects:
        i = c.identities.get(x)
        if col.case(i is not None, "identity_exists", (x,)):
            col.case(c.morphisms[i] == (x, x), "identity_endpoints", (x, i))
    for g, f in c.composable_pairs():
        h = c.composition.get((g, f))
        if col.case(h is not None, "composition_total", (g, f)):
            col.case(c.morphisms[h] == (c.src(f), c.tgt(g)), "composition_closed", (g, f))
    for f, (s, t) in c.morphisms.items():
        i_s, i_t = c.identities.get(s), c.identities.get(t)
        if i_t is not None and (i_t, f) in c.composition:
            col.case(c.composition[(i_t, f)] == f, "left_identity", (i_t, f))
        if i_s is not None and (f, i_s) in c.composition:
            col.case(c.composition[(f, i_s)] == f, "right_identity", (f, i_s))
    comp = c.composition
    for (g, f), gf in comp.items():
        for h in c.morphisms:
            if not c.composable(h, g):
                continue
            hg = comp.get((h, g))
            if hg is None or (h, gf) not in comp or (hg, f) not in comp:
                continue
            col.case(comp[(hg, f)] == comp[(h, gf)], "associativity", (h, g, f))
    if groupoid:
        for f in c.morphisms:
            col.case(c.is_iso(f), "invertible", (f,))
    return col.report()


def check_functor(F: FunctorData, src: FinCategory, dst: FinCategory, max_violations: int | None = None) -> LawReport:
    for x in src.objects:
        if x not in F.obj_map or F.obj_map[x] not in dst.identities:
            raise MalformedDocument(f"object {x!r} unmapped or mapped outside the target")
    for m in src.morphisms:
        if m not in F.mor_map or F.mor_map[m] not in dst.morphisms:
            raise MalformedDocument(f"morphism {m!r} unmapped or mapped outside the target")
    col = Collector("check_functor", max_violations)
    for m, (s, t) in src.morphisms.items():
        col.case(dst.morphisms[F(m)] == (F.obj_map[s], F.obj_map[t]), "endpoints", (m,))
    for x in src.objects:
        col.case(F(src.identities[x]) == dst.identities[F.obj_map[x]], "identities", (x,))
    for g, f in src.composable_pairs():
        Fg, Ff = F(g), F(f)
        ok = dst.composable(Fg, Ff) and dst.composition.get((Fg, Ff)) == F(src.composition[(g, f)])
        col.case(ok, "composition", (g, f))
    return col.report()


def check_natural(
    eta: NatTransformData,
    F: FunctorData,
    G: FunctorData,
    src: FinCategory,
    dst: FinCategory,
    max_violations: int | None = None,
) -> LawReport:
    for x in src.objects:
        if x not in eta.components or eta[x] not in dst.morphisms:
            raise MalformedDocument(f"component at {x!r} missing or unknown")
    col = Collector("check_natural", max_violations)
    for x in src.objects:
        col.case(dst.morphisms[eta[x]] == (F.obj_map[x], G.obj_map[x]), "component_type", (x,))
    for f, (a, b) in src.morphisms.items():
        lhs = dst.composition.get((eta[b], F(f))) if dst.composable(eta[b], F(f)) else None
        rhs = dst.composition.get((G(f), eta[a])) if dst.composable(G(f), eta[a]) else None
        col.case(lhs is not None and lhs == rhs, "naturality", (f,))
    return col.report()


# -- composition of transformations ------------------------------------------

def vertical_compose(beta: NatTransformData, alpha: NatTransformData, c: FinCategory) -> NatTransformData:
    """``(beta o alpha)_X = beta_X o alpha_X``."""
    out = {}
    for x, a in alpha.components.items():
        b = beta[x]
        if not c.composable(b, a):
            raise NotComposable(f"components at {x!r} do not compose")
        out[x] = c.composition[(b, a)]
    return NatTransformData(out)


def horizontal_compose(
    beta: NatTransformData,
    alpha: NatTransformData,
    c: FinCategory,
    F: FunctorData,
    G: FunctorData,
    H: FunctorData,
    K: FunctorData,
) -> NatTransformData:
    """For ``alpha: F => G`` and ``beta: H => K`` return ``beta * alpha: HF => KG``.

    Component: ``beta_{G X} o H(alpha_X)``.
    """
    out = {}
    for x in c.objects:
        if c.morphisms[alpha[x]] != (F.obj_map[x], G.obj_map[x]):
            raise NotComposable(f"alpha is not a transformation F => G at {x!r}")
        left = beta[G.obj_map[x]]
        right = H(alpha[x])
        if c.morphisms[left][0] != H.obj_map[G.obj_map[x]] or not c.composable(left, right):
            raise NotComposable(f"beta is not a transformation H => K at {G.obj_map[x]!r}")
        out[x] = c.composition[(left, right)]
    return NatTransformData(out)


def compose_nat(kind: str, beta: NatTransformData, alpha: NatTransformData, category: FinCategory, functors) -> NatTransformData:
    """Dispatch vertical/horizontal composition.

    ``functors`` is ``(F, G, H)`` for vertical (``alpha: F => G``,
    ``beta: G => H``) and ``(F, G, H, K)`` for horizontal.
    """
    if kind == "vertical":
        F, G, H = functors
        for x in category.objects:
            if category.morphisms[alpha[x]] != (F.obj_map[x], G.obj_map[x]):
                raise NotComposable(f"alpha is not F => G at {x!r}")
            if category.morphisms[beta[x]] != (G.obj_map[x], H.obj_map[x]):
                raise NotComposable(f"beta is not G => H at {x!r}")
        return vertical_compose(beta, alpha, category)
    if kind == "horizontal":
        return horizontal_compose(beta, alpha, category, *functors)
    raise ValueError(f"unknown composition kind {kind!r}")


# -- hyper-symmetry category, 2-truncated -------------------------------------

@dataclass(frozen=True, eq=False)
class EndoCat:
    """Endofunctors of ``base`` with all natural transformations between them."""

    base: FinCategory
    endofunctors: tuple[FunctorData, ...]
    homs: Mapping[tuple[int, int], tuple[NatTransformData, ...]]
    vertical: Mapping[tuple[int, int, int], Mapping[tuple[int, int], int]] = field(default_factory=dict)

    def functor_index(self, F: FunctorData) -> int:
        for i, E in enumerate(self.endofunctors):
            if E == F:
                return i
        raise NotInHyp("functor is not among the enumerated endofunctors")

    def hom_sizes(self) -> list[int]:
        n = len(self.endofunctors)
        return [len(self.homs[(i, j)]) for i in range(n) for j in range(n)]

    def identity(self, i: int) -> NatTransformData:
        return identity_transformation(self.endofunctors[i], self.base)

    def transformations(self):
        for (i, j), ts in self.homs.items():
            for t in ts:
                yield i, j, t


def enumeration_bound(c: FinCategory) -> int:
    no, nm = len(c.objects), len(c.morphisms)
    return no**no * nm**nm


def enumerate_endofunctors(c: FinCategory, budget: int = ENUMERATION_BUDGET) -> list[FunctorData]:
    bound = enumeration_bound(c)
    if bound > budget:
        raise BudgetExceeded(f"|O|^|O| * |M|^|M| = {bound} exceeds budget {budget}", bound)
    mors = list(c.morphisms)
    found = []
    for images in itertools.product(c.objects, repeat=len(c.objects)):
        om = dict(zip(c.objects, images))
        choices = [c.hom(om[c.src(m)], om[c.tgt(m)]) for m in mors]
        for mimg in itertools.product(*choices):
            F = FunctorData(om, dict(zip(mors, mimg)))
            if all(F(c.identities[x]) == c.identities[om[x]] for x in c.objects) and all(
                F(c.composition[(g, f)]) == c.composition[(F(g), F(f))]
                for g, f in c.composable_pairs()
            ):
                found.append(F)
    return found


def enumerate_transformations(F: FunctorData, G: FunctorData, c: FinCategory) -> list[NatTransformData]:
    choices = [c.hom(F.obj_map[x], G.obj_map[x]) for x in c.objects]
    out = []
    for comps in itertools.product(*choices):
        eta = NatTransformData(dict(zip(c.objects, comps)))
        if all(
            c.composition[(eta[b], F(f))] == c.composition[(G(f), eta[a])]
            for f, (a, b) in c.morphisms.items()
        ):
            out.append(eta)
    return out


def enumerate_hyp(c: FinCategory, budget: int = ENUMERATION_BUDGET) -> EndoCat:
    functors = enumerate_endofunctors(c, budget)
    n = len(functors)
    homs = {(i, j): tuple(enumerate_transformations(functors[i], functors[j], c)) for i in range(n) for j in range(n)}
    vertical: dict = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        index = {t: p for p, t in enumerate(homs[(i, k)])}
        table = {}
        for a, alpha in enumerate(homs[(i, j)]):
            for b, beta in enumerate(homs[(j, k)]):
                table[(b, a)] = index[vertical_compose(beta, alpha, c)]
        vertical[(i, j, k)] = table
    return EndoCat(c, tuple(functors), homs, vertical)


def validate_endocat(hyp: EndoCat, max_violations: int | None = None) -> LawReport:
    """Unit and associativity laws for vertical composition, and interchange."""
    c = hyp.base
    n = len(hyp.endofunctors)
    col = Collector("validate_endocat", max_violations)
    for (i, j), ts in hyp.homs.items():
        for a, t in enumerate(ts):
            col.case(vertical_compose(hyp.identity(j), t, c) == t, "left_unit", (i, j, a))
            col.case(vertical_compose(t, hyp.identity(i), c) == t, "right_unit", (i, j, a))
    for i, j, k, l in itertools.product(range(n), repeat=4):
        for (a, al), (b, be), (g, ga) in itertools.product(
            enumerate(hyp.homs[(i, j)]), enumerate(hyp.homs[(j, k)]), enumerate(hyp.homs[(k, l)])
        ):
            lhs = vertical_compose(ga, vertical_compose(be, al, c), c)
            rhs = vertical_compose(vertical_compose(ga, be, c), al, c)
            col.case(lhs == rhs, "vertical_associativity", (i, j, k, l, a, b, g))
    report = check_interchange(hyp, max_violations)
    for v in report.violations:
        col.violation(v.law, v.witness)
    col.cases += report.cases
    return col.report()


def check_interchange(hyp: EndoCat, max_violations: int | None = None) -> LawReport:
    """``(b' o b) * (a' o a) = (b' * a') o (b * a)`` on every composable quadruple."""
    c = hyp.base
    fs = hyp.endofunctors
    n = len(fs)
    col = Collector("interchange", max_violations)
    chains = [
        (i, j, k, al, al2)
        for i, j, k in itertools.product(range(n), repeat=3)
        for al in hyp.homs[(i, j)]
        for al2 in hyp.homs[(j, k)]
    ]
    for (i, j, k, al, al2), (p, q, r, be, be2) in itertools.product(chains, repeat=2):
        F, G, H = fs[i], fs[j], fs[k]
        Fp, Gp, Hp = fs[p], fs[q], fs[r]
        lhs = horizontal_compose(
            vertical_compose(be2, be, c), vertical_compose(al2, al, c), c, F, H, Fp, Hp
        )
        rhs = vertical_compose(
            horizontal_compose(be2, al2, c, G, H, Gp, Hp),
            horizontal_compose(be, al, c, F, G, Fp, Gp),
            c,
        )
        col.case(lhs == rhs, "interchange", (i, j, k, p, q, r, al.key(), al2.key(), be.key(), be2.key()))
    return col.report()


def check_stability(gamma: NatTransformData, hyp: EndoCat, functor: int | None = None, max_violations=None) -> LawReport:
    """Check ``gamma o beta = beta`` for every ``beta`` composable with ``gamma``.

    ``gamma`` must be an endo-transformation ``F => F`` of an enumerated
    endofunctor ``F``.  The report also records whether ``gamma`` is the
    identity on ``F``; the two verdicts must coincide, and a disagreement is
    itself reported as a violation.
    """
    c = hyp.base
    if functor is None:
        cands = [i for i in range(len(hyp.endofunctors)) if gamma in hyp.homs[(i, i)]]
        if not cands:
            raise NotInHyp("gamma is not an endo-transformation of any enumerated endofunctor")
        functor = cands[0]
    elif gamma not in hyp.homs[(functor, functor)]:
        raise NotInHyp(f"gamma is not in hom({functor}, {functor})")
    col = Collector("check_stability", max_violations)
    n_nontrivial = 0
    for i in range(len(hyp.endofunctors)):
        for b, beta in enumerate(hyp.homs[(i, functor)]):
            if not (i == functor and beta == hyp.identity(functor)):
                n_nontrivial += 1
            col.case(vertical_compose(gamma, beta, c) == beta, "absorbs", (i, b))
    is_identity = gamma == hyp.identity(functor)
    stable = not col._found
    if stable != is_identity:
        col.violation("identity_crosscheck", (functor,))
    col.details.update(functor=functor, is_identity=is_identity, vacuous=n_nontrivial == 0)
    return col.report()


# -- invariants, bifunctors, group actions -----------------------------------

@dataclass(frozen=True, eq=False)
class FixedSubcategory:
    strict: FinCategory
    iso_fixed_objects: tuple
    report: LawReport


def fixed_subcategory(F: FunctorData, c: FinCategory) -> FixedSubcategory:
    """Objects and morphisms left strictly fixed by the endofunctor ``F``.

    The report lists each morphism between strictly fixed objects that ``F``
    moves; objects isomorphic but not equal to their image are returned
    separately.
    """
    objs = tuple(x for x in c.objects if F.obj_map[x] == x)
    mors = {m: st for m, st in c.morphisms.items() if F(m) == m and st[0] in objs and st[1] in objs}
    col = Collector("fixed_subcategory")
    for m, (s, t) in c.morphisms.items():
        if s in objs and t in objs:
            col.case(F(m) == m, "moved_between_fixed", (m,))
    comp = {}
    for (g, f), h in c.composition.items():
        if g in mors and f in mors:
            comp[(g, f)] = h
            col.case(h in mors, "not_closed", (g, f))
    strict = FinCategory(objs, mors, {x: c.identities[x] for x in objs}, comp)
    iso_fixed = tuple(
        x for x in c.objects
        if F.obj_map[x] != x and any(c.is_iso(m) for m in c.hom(x, F.obj_map[x]))
    )
    col.details["iso_fixed_objects"] = list(iso_fixed)
    return FixedSubcategory(strict, iso_fixed, col.report())


def product_category(c1: FinCategory, c2: FinCategory) -> FinCategory:
    objs = tuple(itertools.product(c1.objects, c2.objects))
    mors = {
        (f1, f2): ((s1, s2), (t1, t2))
        for f1, (s1, t1) in c1.morphisms.items()
        for f2, (s2, t2) in c2.morphisms.items()
    }
    ids = {(x1, x2): (c1.identities[x1], c2.identities[x2]) for x1, x2 in objs}
    comp = {
        ((g1, g2), (f1, f2)): (h1, h2)
        for (g1, f1), h1 in c1.composition.items()
        for (g2, f2), h2 in c2.composition.items()
    }
    return FinCategory(objs, mors, ids, comp)


@dataclass(frozen=True)
class BifunctorData:
    """``obj_map[(A1, A2)]`` and ``mor_map[(f1, f2)]``."""

    obj_map: Mapping[tuple, Id]
    mor_map: Mapping[tuple, Id]

    def as_functor(self) -> FunctorData:
        return FunctorData(dict(self.obj_map), dict(self.mor_map))


def check_bifunctor(B: BifunctorData, c1: FinCategory, c2: FinCategory, d: FinCategory, max_violations=None) -> LawReport:
    r = check_functor(B.as_functor(), product_category(c1, c2), d, max_violations)
    return LawReport("check_bifunctor", r.violations, r.cases, r.n_violations, r.details)


@dataclass(frozen=True)
class IsoLift:
    pair: tuple | None
    tried: tuple

    @property
    def found(self) -> bool:
        return self.pair is not None


def iso_lift(B: BifunctorData, c1: FinCategory, c2: FinCategory, d: FinCategory, h) -> IsoLift:
    """Search for ``(f, g)`` with ``B(f, g)`` an iso between ``h``'s endpoints.

    Returns ``pair=None`` with every candidate pair tried when none exists.
    """
    if not d.is_iso(h):
        raise NotIso(f"{h!r} is not invertible")
    X, Y = d.morphisms[h]
    tried = []
    sources = [p for p in itertools.product(c1.objects, c2.objects) if B.obj_map[p] == X]
    targets = [p for p in itertools.product(c1.objects, c2.objects) if B.obj_map[p] == Y]
    for (a1, b1), (a2, b2) in itertools.product(sources, targets):
        for f in c1.hom(a1, a2):
            for g in c2.hom(b1, b2):
                tried.append((f, g))
                img = B.mor_map[(f, g)]
                if d.morphisms[img] == (X, Y) and d.is_iso(img):
                    return IsoLift((f, g), tuple(tried))
    return IsoLift(None, tuple(tried))


@dataclass(frozen=True, eq=False)
class GroupActionOnCat:
    group: FinGroup
    functors: tuple[FunctorData, ...]  # indexed by group element

    def __call__(self, g: int) -> FunctorData:
        return self.functors[g]


def validate_cat_action(act: GroupActionOnCat, c: FinCategory, max_violations=None) -> LawReport:
    G = act.group
    col = Collector("validate_cat_action", max_violations)
    if len(act.functors) != G.order:
        raise MalformedDocument("need one functor per group element")
    for g in G:
        r = check_functor(act(g), c, c)
        for v in r.violations:
            col.violation("functor:" + v.law, (G.names[g],) + v.witness)
        col.cases += r.cases
        F = act(g)
        col.case(
            len(set(F.obj_map.values())) == len(c.objects) and len(set(F.mor_map.values())) == len(c.morphisms),
            "invertible",
            (G.names[g],),
        )
    col.case(act(G.identity) == identity_functor(c), "identity", (G.names[G.identity],))
    for g, h in itertools.product(G, repeat=2):
        col.case(act(G.mul(g, h)) == compose_functors(act(g), act(h)), "homomorphism", (G.names[g], G.names[h]))
    return col.report()


def check_equivariant_functor(F: FunctorData, act: GroupActionOnCat, c: FinCategory, max_violations=None) -> LawReport:
    G = act.group
    col = Collector("check_equivariant_functor", max_violations)
    for g in G:
        A = act(g)
        for x in c.objects:
            col.case(F.obj_map[A.obj_map[x]] == A.obj_map[F.obj_map[x]], "objects", (G.names[g], x))
        for m in c.morphisms:
            col.case(F(A(m)) == A(F(m)), "morphisms", (G.names[g], m))
    return col.report()


# -- fixtures -----------------------------------------------------------------

def arrow() -> FinCategory:
    """Two objects ``a, b`` and one non-identity arrow ``f: a -> b``."""
    return FinCategory.build(
        ["a", "b"],
        [("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b")],
        {"a": "id_a", "b": "id_b"},
        {
            ("id_a", "id_a"): "id_a",
            ("id_b", "id_b"): "id_b",
            ("f", "id_a"): "f",
            ("id_b", "f"): "f",
        },
    )


def delooping(G: FinGroup, obj="*") -> FinCategory:
    """One object, one morphism per group element, composition = group law."""
    names = G.names
    return FinCategory.build(
        [obj],
        [(n, obj, obj) for n in names],
        {obj: names[G.identity]},
        {(names[g], names[h]): names[G.mul(g, h)] for g in G for h in G},
    )


def bz2() -> FinCategory:
    from .symgrp import z2

    return delooping(z2())


def terminal() -> FinCategory:
    return FinCategory.build(["*"], [("id", "*", "*")], {"*": "id"}, {("id", "id"): "id"})


def parallel_pair() -> FinCategory:
    """``a`` with two arrows ``u, v`` to ``b``."""
    return FinCategory.build(
        ["a", "b"],
        [("id_a", "a", "a"), ("id_b", "b", "b"), ("u", "a", "b"), ("v", "a", "b")],
        {"a": "id_a", "b": "id_b"},
        {
            ("id_a", "id_a"): "id_a",
            ("id_b", "id_b"): "id_b",
            ("u", "id_a"): "u",
            ("v", "id_a"): "v",
            ("id_b", "u"): "u",
            ("id_b", "v"): "v",
        },
    )


def walking_iso() -> FinCategory:
    """Objects ``x, y`` with mutually inverse ``i: x -> y`` and ``j: y -> x``."""
    return FinCategory.build(
        ["x", "y"],
        [("id_x", "x", "x"), ("id_y", "y", "y"), ("i", "x", "y"), ("j", "y", "x")],
        {"x": "id_x", "y": "id_y"},
        {
            ("id_x", "id_x"): "id_x",
            ("id_y", "id_y"): "id_y",
            ("i", "id_x"): "i",
            ("id_y", "i"): "i",
            ("j", "id_y"): "j",
            ("id_x", "j"): "j",
            ("j", "i"): "id_x",
            ("i", "j"): "id_y",
        },
    )


def swap_action_on_parallel_pair() -> GroupActionOnCat:
    from .symgrp import z2

    c = parallel_pair()
    swap = FunctorData({"a": "a", "b": "b"}, {"id_a": "id_a", "id_b": "id_b", "u": "v", "v": "u"})
    return GroupActionOnCat(z2(), (identity_functor(c), swap))


def collapse_functor(c: FinCategory, obj) -> FunctorData:
    """Constant functor at ``obj`` (all morphisms to its identity)."""
    return FunctorData({x: obj for x in c.objects}, {m: c.identities[obj] for m in c.morphisms})


def mutants(table: Mapping, values: Iterable) -> Iterable[tuple]:
    """Yield ``(key, new_value)`` for every single-entry change of ``table``."""
    values = list(values)
    for k, v in table.items():
        for w in values:
            if w != v:
                yield k, w
