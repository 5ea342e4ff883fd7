"""Single-entry mutant sweeps over category, functor and transformation tables.

Each sweep returns one record per mutant: whether the checker flagged it,
whether an independent oracle says the mutant is lawful anyway, whether
every witness replays against the raw tables, and whether some witness
names the mutated entry.
"""

from __future__ import annotations

from dataclasses import dataclass

from symcat import fincat

import oracles


@dataclass
class MutantResult:
    table: str
    key: object
    value: object
    detected: bool
    lawful: bool
    replayed: bool
    named: bool

    @property
    def ok(self) -> bool:
        # lawful mutants must pass; lawless ones must fail with honest witnesses
        if self.lawful:
            return not self.detected
        return self.detected and self.replayed and self.named


def _raw(c: fincat.FinCategory):
    return (list(c.objects), dict(c.morphisms), dict(c.identities), dict(c.composition))


def _mentions(witness, items) -> bool:
    flat = set()
    for w in witness:
        flat.update(w if isinstance(w, tuple) else (w,))
    return any(i in flat for i in items)


def composition_mutants(c: fincat.FinCategory, groupoid: bool) -> list[MutantResult]:
    out = []
    for key, value in fincat.mutants(c.composition, list(c.morphisms)):
        m = c.with_composition(key, value)
        rep = fincat.validate_category(m, groupoid=groupoid)
        objs, mors, ids, comp = _raw(m)
        lawful = oracles.category_lawful(objs, mors, ids, comp, groupoid)
        replayed = all(oracles.replay_category(v.law, v.witness, objs, mors, ids, comp) for v in rep.violations)
        named = any(_mentions(v.witness, key) for v in rep.violations)
        out.append(MutantResult("composition", key, value, not rep.passed, lawful, replayed, named))
    return out


def identity_mutants(c: fincat.FinCategory, groupoid: bool) -> list[MutantResult]:
    out = []
    for key, value in fincat.mutants(c.identities, list(c.morphisms)):
        m = c.with_identity(key, value)
        rep = fincat.validate_category(m, groupoid=groupoid)
        objs, mors, ids, comp = _raw(m)
        lawful = oracles.category_lawful(objs, mors, ids, comp, groupoid)
        replayed = all(oracles.replay_category(v.law, v.witness, objs, mors, ids, comp) for v in rep.violations)
        named = any(_mentions(v.witness, (key, value)) for v in rep.violations)
        out.append(MutantResult("identities", key, value, not rep.passed, lawful, replayed, named))
    return out


def functor_mutants(F: fincat.FunctorData, c: fincat.FinCategory) -> list[MutantResult]:
    raw = _raw(c)
    out = []
    cases = [("obj_map", k, v, F.with_obj(k, v)) for k, v in fincat.mutants(F.obj_map, c.objects)]
    cases += [("mor_map", k, v, F.with_mor(k, v)) for k, v in fincat.mutants(F.mor_map, list(c.morphisms))]
    for table, key, value, G in cases:
        rep = fincat.check_functor(G, c, c)
        lawful = oracles.functor_lawful(G.obj_map, G.mor_map, raw, raw)
        replayed = all(oracles.replay_functor(v.law, v.witness, G.obj_map, G.mor_map, raw, raw) for v in rep.violations)
        if table == "obj_map":
            touching = [key] + [m for m, (s, t) in c.morphisms.items() if key in (s, t)]
        else:
            touching = [key]
        named = any(_mentions(v.witness, touching) for v in rep.violations)
        out.append(MutantResult(table, key, value, not rep.passed, lawful, replayed, named))
    return out


def nat_mutants(eta, F, G, c: fincat.FinCategory) -> list[MutantResult]:
    raw = _raw(c)
    Fr, Gr = (F.obj_map, F.mor_map), (G.obj_map, G.mor_map)
    out = []
    for key, value in fincat.mutants(eta.components, list(c.morphisms)):
        e = eta.with_component(key, value)
        rep = fincat.check_natural(e, F, G, c, c)
        lawful = oracles.nat_lawful(e.components, Fr, Gr, raw, raw)
        replayed = all(oracles.replay_nat(v.law, v.witness, e.components, Fr, Gr, raw, raw) for v in rep.violations)
        touching = [key] + [m for m, (s, t) in c.morphisms.items() if key in (s, t)]
        named = any(_mentions(v.witness, touching) for v in rep.violations)
        out.append(MutantResult("components", key, value, not rep.passed, lawful, replayed, named))
    return out


def full_sweep() -> dict[str, list[MutantResult]]:
    """All single-entry mutants of the Arrow and BZ2 fixtures."""
    sweeps: dict[str, list[MutantResult]] = {}
    for name, c, groupoid in (("arrow", fincat.arrow(), False), ("bz2", fincat.bz2(), True)):
        sweeps[f"{name}/composition"] = composition_mutants(c, groupoid)
        sweeps[f"{name}/identities"] = identity_mutants(c, groupoid)
        hyp = fincat.enumerate_hyp(c)
        sweeps[f"{name}/functors"] = [r for F in hyp.endofunctors for r in functor_mutants(F, c)]
        sweeps[f"{name}/naturality"] = [
            r
            for (i, j), ts in hyp.homs.items()
            for eta in ts
            for r in nat_mutants(eta, hyp.endofunctors[i], hyp.endofunctors[j], c)
        ]
    return sweeps


def simplicial_mutants(m) -> list[MutantResult]:
    """Every single-entry change of every face and degeneracy table."""
    from symcat import sobj

    out = []
    tables = [("faces", key, t, m.sizes[key[0] - 1], m.with_face) for key, t in sorted(m.faces.items())]
    tables += [("degeneracies", key, t, m.sizes[key[0]], m.with_degeneracy) for key, t in sorted(m.degeneracies.items())]
    for name, (k, i), t, target_size, mutate in tables:
        for x, old in enumerate(t):
            for v in range(target_size):
                if v == old:
                    continue
                mm = mutate(k, i, x, v)
                rep = sobj.validate_simplicial(mm)
                lawful = oracles.simplicial_lawful(mm.sizes, mm.faces, mm.degeneracies)
                # witnesses name identities by (level, i, j, element); the law name is the useful part
                named = all(v_.law in {"dd", "ss", "ds_identity", "ds_lower", "ds_upper"} for v_ in rep.violations)
                out.append(MutantResult(name, (k, i, x), v, not rep.passed, lawful, True, named))
    return out
