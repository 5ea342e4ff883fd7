"""Acceptance criteria, one test each.

Every test records a single ``ACCEPTANCE n PASS/FAIL: ...`` line, printed in
the pytest terminal summary.  ``python3 tests/test_acceptance.py`` runs the
same checks without pytest and prints the lines directly.
"""

import itertools
import math
import os
import sys
import time
from collections import Counter

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import conftest
import mutants
import oracles
import strategies as S
from cli_catalog import all_commands, run_cli
from symcat import autodiff as ad, equinet, fincat, optdyn, pinn, sobj, symgrp, topo

INF = math.inf


class Check:
    """Collects failed conditions for one criterion and times it."""

    def __init__(self, n, title):
        self.n, self.title = n, title
        self.failures = []
        self.start = time.perf_counter()

    def need(self, cond, what):
        if not cond:
            self.failures.append(what)
        return cond

    def elapsed(self):
        return time.perf_counter() - self.start

    def within(self, seconds):
        t = self.elapsed()
        self.need(t < seconds, f"took {t:.2f}s, limit {seconds}s")
        return t

    def finish(self, summary):
        ok = not self.failures
        detail = summary if ok else "; ".join(self.failures[:5])
        line = f"ACCEPTANCE {self.n} {'PASS' if ok else 'FAIL'}: {self.title} ({detail})"
        conftest.ACCEPTANCE_LINES[self.n] = line
        print(line)
        assert ok, line


# -- 1. law suite ------------------------------------------------------------------------

def test_1_law_suite_mutants():
    c = Check(1, "single-entry mutants of Arrow and BZ2")
    sweeps = mutants.full_sweep()
    n_lawless = 0
    for name, rs in sweeps.items():
        for r in rs:
            c.need(r.ok, f"{name} mutant {r.key}->{r.value} mishandled")
            n_lawless += not r.lawful
            if not r.lawful:
                c.need(r.detected and r.replayed, f"{name} {r.key} not detected with a replayable witness")
    for cat, groupoid in ((fincat.arrow(), False), (fincat.bz2(), True)):
        c.need(fincat.validate_category(cat, groupoid=groupoid).passed, "false positive on a fixture")
        hyp = fincat.enumerate_hyp(cat)
        for F in hyp.endofunctors:
            c.need(fincat.check_functor(F, cat, cat).passed, "false positive on a functor")
        for (i, j), ts in hyp.homs.items():
            for eta in ts:
                c.need(fincat.check_natural(eta, hyp.endofunctors[i], hyp.endofunctors[j], cat, cat).passed,
                       "false positive on a transformation")
    t = c.within(5.0)
    total = sum(map(len, sweeps.values()))
    c.finish(f"{n_lawless} lawless of {total} mutants detected, 0 false positives, {t:.2f}s")


# -- 2. Hyp enumeration --------------------------------------------------------------------

def test_2_hyp_enumeration():
    c = Check(2, "Hyp enumeration and stability")
    A, B = fincat.arrow(), fincat.bz2()
    ha, hb = fincat.enumerate_hyp(A), fincat.enumerate_hyp(B)
    c.need(len(ha.endofunctors) == 3, f"Arrow has {len(ha.endofunctors)} endofunctors")
    c.need(len(hb.endofunctors) == 2, f"BZ2 has {len(hb.endofunctors)} endofunctors")
    c.need(Counter(hb.hom_sizes()) == Counter([2, 2, 0, 0]), f"BZ2 hom sizes {hb.hom_sizes()}")
    checked = 0
    for hyp in (ha, hb):
        for i in range(len(hyp.endofunctors)):
            for gamma in hyp.homs[(i, i)]:
                checked += 1
                c.need(fincat.check_stability(gamma, hyp, i).passed == (gamma == hyp.identity(i)),
                       f"stability wrong at functor {i}")
    t = c.within(1.0)
    c.finish(f"3 and 2 endofunctors, BZ2 homs {sorted(hb.hom_sizes())}, {checked} stability cases, {t:.3f}s")


# -- 3. orbits ---------------------------------------------------------------------------------

def test_3_burnside():
    c = Check(3, "Burnside equals orbit count")
    rng = np.random.default_rng(3)
    names = sorted(S.SMALL_GROUPS)
    for k in range(200):
        G = S.SMALL_GROUPS[names[k % len(names)]]()
        a = S.random_action(G, rng, max_size=12)
        want = oracles.orbit_count(a.table, a.size)
        c.need(symgrp.burnside(a) == symgrp.orbits(a).count == want, f"case {k} on {a.size} points")
    grid = symgrp.SetAction.from_table(symgrp.cyclic(4), [[(i + g) % 4 for i in range(4)] for g in range(4)])
    pairs = symgrp.product_action(grid, grid)
    n = symgrp.burnside(pairs)
    c.need(n == 4, f"C4 pair action gives {n}")
    c.finish("200 random actions exact, C4 pair action 4 orbits")


# -- 4. intertwiners --------------------------------------------------------------------------------

def test_4_intertwiners():
    c = Check(4, "intertwiner basis dimensions")
    reps = S.small_reps()
    n_pairs, worst = 0, 0.0
    for (a, ra), (b, rb) in itertools.product(reps, repeat=2):
        if ra.group != rb.group:
            continue
        n_pairs += 1
        basis = symgrp.intertwiner_basis(ra, rb)
        exact = oracles.intertwiner_dimension_exact(ra.matrices.tolist(), rb.matrices.tolist())
        c.need(len(basis) == exact, f"{a}->{b}: {len(basis)} vs {exact}")
        for W in basis:
            worst = max(worst, symgrp.equivariance_residual(ra, rb, W))
    c.need(worst <= 1e-12, f"residual {worst:.2e}")
    sw = symgrp.swap_rep()
    grid = symgrp.SetAction.from_table(symgrp.cyclic(4), [[(i + g) % 4 for i in range(4)] for g in range(4)])
    c4 = symgrp.permutation_representation(grid)
    c.need(len(symgrp.intertwiner_basis(sw, sw)) == 2, "Swap->Swap")
    c.need(len(symgrp.intertwiner_basis(c4, c4)) == 4, "C4->C4")
    c.finish(f"{n_pairs} pairs match exact rank, max residual {worst:.1e}, Swap 2, C4 4")


# -- 5. constructed equivariance -------------------------------------------------------------------

def test_5_constructed_equivariance():
    c = Check(5, "constructed models are equivariant")
    rng = np.random.default_rng(5)
    names = sorted(S.SMALL_GROUPS)
    worst = 0.0
    for k in range(12):
        G = S.SMALL_GROUPS[names[k % len(names)]]()
        depth = 1 + k % 4
        reps = [symgrp.permutation_representation(S.random_action(G, rng, max_size=6)) for _ in range(depth + 1)]
        m = equinet.equivariant_stack(reps, seed=k, activation="tanh")
        rep = equinet.check_model_equivariance(m, reps[0], reps[-1], n_samples=100, seed=k)
        worst = max(worst, rep.details["max_violation"])
    c.need(worst <= 1e-9, f"constructed violation {worst:.2e}")
    grid = symgrp.SetAction.from_table(symgrp.cyclic(4), [[(i + g) % 4 for i in range(4)] for g in range(4)])
    c4 = symgrp.permutation_representation(grid)
    least = INF
    for seed in range(5):
        rep = equinet.check_model_equivariance(equinet.random_model([4, 4, 4], seed=seed), c4, c4, n_samples=100)
        least = min(least, rep.details["max_violation"])
        c.need(not rep.passed and rep.violations, f"random model {seed} has no witness")
    c.need(least > 1e-3, f"random model violation only {least:.2e}")
    _, comp = equinet.compress((4, 4), grid, grid)
    c.need((comp.raw_weights, comp.tied_weights) == (16, 4), f"compression {comp.raw_weights}->{comp.tied_weights}")
    c.finish(f"constructed max {worst:.1e}, random min {least:.2f}, compression 16 -> 4")


# -- 6. optimization dynamics ---------------------------------------------------------------------

def test_6_optimization_dynamics():
    c = Check(6, "Banach, contraction, semigroup, flow, meta")
    F = lambda x: 0.5 * x + 1.0
    fp = optdyn.banach_iterate(F, 0.0, tol=1e-10)
    c.need(abs(fp.theta - 2.0) <= 1e-10 and fp.iterations <= 60, f"Banach {fp.theta} in {fp.iterations}")
    cert = optdyn.estimate_contraction(F, optdyn.box_sampler(1), seed=0)
    c.need(abs(cert.ratio - 0.5) <= 1e-6, f"ratio {cert.ratio}")
    flow = optdyn.FlowMap(optdyn.gradient_step(optdyn.quad_loss(), 0.1))
    cases = optdyn.random_semigroup_cases(100, 16, seed=0)
    c.need(optdyn.check_semigroup(flow, cases, np.array([1.0, -2.0, 0.5])).passed, "semigroup")
    sw = symgrp.swap_rep()
    eq = optdyn.check_flow_equivariance(optdyn.FlowMap(optdyn.gradient_step(optdyn.sumsq_loss(), 0.1)), sw,
                                        t_max=16, tol=1e-9)
    c.need(eq.passed, "flow equivariance")
    res = optdyn.meta_fixed_point(lambda x: 0.5 * x + 0.5, sw, [0.0, 0.0])
    c.need(np.max(np.abs(res.theta - 1.0)) <= 1e-12, f"meta fixed point {res.theta}")
    c.need(res.invariance_defect <= 1e-12, f"invariance defect {res.invariance_defect}")
    t = c.within(10.0)
    c.finish(f"{fp.iterations} iterations, ratio {cert.ratio:.6f}, 100 semigroup cases, {t:.2f}s")


# -- 7. convergence ------------------------------------------------------------------------------

def test_7_convergence():
    c = Check(7, "trajectory convergence")
    geo = optdyn.Trajectory.from_values([2.0 ** -t for t in range(21)])
    got = optdyn.detect_convergence(geo, 0.1)
    c.need(got == 4, f"2^-t gives {got}")
    rng = np.random.default_rng(7)
    for k in range(100):
        base = rng.uniform(1.05, 4.0)
        traj = optdyn.Trajectory.from_values([base ** -t for t in range(int(rng.integers(2, 30)))])
        e1, e2 = np.sort(rng.uniform(1e-4, 1.0, size=2))
        t1, t2 = optdyn.detect_convergence(traj, e1), optdyn.detect_convergence(traj, e2)
        c.need(t1 is None or (t2 is not None and t1 >= t2), f"monotonicity case {k}")
    c.finish("2^-t converges at 4, 100 monotone trajectories")


# -- 8. persistence ---------------------------------------------------------------------------------

def test_8_persistence():
    c = Check(8, "persistence and bottleneck")
    D = topo.PersistenceDiagram
    d = topo.persistence(topo.triangle_filtration())
    c.need(d == D(((0, 0.0, INF), (0, 0.0, 1.0), (0, 0.0, 1.0), (1, 1.0, 2.0))), f"TriangleFilt {d}")
    rng = np.random.default_rng(8)
    for k in range(200):
        f = S.random_filtration(rng)
        bars = topo.persistence(f).bars
        for t in sorted(set(f.values.values())):
            sub = [s for s, v in f.values.items() if v <= t]
            c.need(oracles.betti_numbers(sub) == oracles.alive_counts(bars, t), f"Betti case {k} at {t}")
    for k in range(200):
        A, B = S.random_diagram_points(rng), S.random_diagram_points(rng)
        got = topo.bottleneck(D(tuple((0, *p) for p in A)), D(tuple((0, *p) for p in B)), dim=0)
        c.need(got == oracles.bottleneck_all_matchings(A, B), f"bottleneck case {k}")
    half = topo.bottleneck(D(((0, 0.0, 2.0),)), D(((0, 0.0, 2.5),)))
    c.need(half == 0.5, f"example gives {half}")
    t = c.within(30.0)
    c.finish(f"TriangleFilt exact, 200 Betti and 200 bottleneck cases exact, 0.5 example, {t:.2f}s")


# -- 9. equivariant filtrations ----------------------------------------------------------------------

def test_9_invariant_filtrations_have_invariant_diagrams():
    c = Check(9, "invariant filtration implies invariant diagram")
    rng = np.random.default_rng(9)
    n_inv, planted = 0, 0
    for k in range(50):
        act, f = S.symmetric_filtration(rng)
        if topo.check_equivariant_filtration(act, f).passed:
            n_inv += 1
            c.need(topo.diagram_invariance(act, f).passed, f"counterexample at case {k}")
        moved = [s for s in f.complex.simplices if any(topo.act_on_simplex(p, s) != s for p in act.perms)]
        for s in moved[:3]:
            for delta in (0.1, -0.1, 1e-9):
                vals = dict(f.values)
                vals[s] += delta
                planted += 1
                c.need(not topo.check_equivariant_filtration(act, topo.Filtration(f.complex, vals)).passed,
                       f"planted change at {s} missed in case {k}")
    c.need(n_inv == 50, f"only {n_inv} of 50 filtrations are invariant")
    c.finish(f"{n_inv} invariant filtrations, 0 counterexamples, {planted} planted changes detected")


# -- 10. PINN --------------------------------------------------------------------------------------

def test_10_pinn_demo():
    c = Check(10, "PINN poisson1d, 2x16 tanh, 2000 steps, seed 0")
    spec = pinn.PdeSpec()
    out = pinn.train_compare(spec, "2x16", 2000, seed=0)
    base, sym = out["baseline"], out["symmetrized"]
    for name, r in (("baseline", base), ("symmetrized", sym)):
        c.need(len(r.losses) == 2001 and all(map(math.isfinite, r.losses)), f"{name} curve")
        c.need(r.losses[-1] < 1e-2, f"{name} loss {r.losses[-1]:.3g}")
    c.need(max(sym.invariance_defects) <= 1e-12, f"defect {max(sym.invariance_defects):.2e}")
    again = pinn.train_compare(spec, "2x16", 2000, seed=0)
    for a, b in ((base, again["baseline"]), (sym, again["symmetrized"])):
        c.need(a.to_dict() == b.to_dict() and np.array_equal(a.theta, b.theta), "rerun differs")
    t = c.within(300.0)
    steps = {k: (v["baseline"], v["symmetrized"]) for k, v in out["steps_to_threshold"].items()}
    c.finish(f"loss {base.losses[-1]:.2e} / {sym.losses[-1]:.2e}, max defect {max(sym.invariance_defects):.0e}, "
             f"steps to threshold (baseline, symmetrized) {steps}, bitwise rerun, {t:.1f}s")


# -- 11. adversarial orbit mode --------------------------------------------------------------------

def test_11_adversarial_orbit_mode():
    c = Check(11, "adversarial orbit mode")
    rng = np.random.default_rng(11)
    names = sorted(S.SMALL_GROUPS)
    worst = 0.0
    for k in range(20):
        G = S.SMALL_GROUPS[names[k % len(names)]]()
        reps = [symgrp.permutation_representation(S.random_action(G, rng, max_size=6)) for _ in range(1 + k % 3)]
        m = equinet.equivariant_stack(reps, seed=k, invariant_head=True)
        x = rng.normal(size=reps[0].dim)
        rep = equinet.adversarial_invariance(m, equinet.half_sq_loss, x, reps[0])
        worst = max(worst, rep.details["max_delta_loss"])
    c.need(worst <= 1e-12, f"invariant model change {worst:.2e}")
    grid = symgrp.SetAction.from_table(symgrp.cyclic(4), [[(i + g) % 4 for i in range(4)] for g in range(4)])
    c4 = symgrp.permutation_representation(grid)
    for seed in range(5):
        rep = equinet.adversarial_invariance(equinet.random_model([4, 4, 1], seed=seed), equinet.half_sq_loss,
                                             rng.normal(size=4), c4)
        c.need(rep.details["max_delta_loss"] > 0 and rep.details["witness"] is not None, f"no witness, seed {seed}")
    c.finish(f"invariant models max change {worst:.0e}, generic models all have a witness")


# -- 12. simplicial suite --------------------------------------------------------------------------

def test_12_simplicial_suite():
    c = Check(12, "simplicial suite")
    m = sobj.nerve(fincat.arrow(), 2)
    c.need(sobj.validate_simplicial(m).passed, "Arrow nerve fails")
    results = mutants.simplicial_mutants(m)
    missed = [r for r in results if not r.lawful and not r.detected]
    c.need(not missed and all(r.ok for r in results), f"{len(missed)} mutants missed")
    P = fincat.parallel_pair()
    mp = sobj.nerve(P, 2)
    fam = sobj.nerve_map(fincat.swap_action_on_parallel_pair()(1), P, mp)
    c.need(sobj.check_simplicial_invariance(fam, mp).passed, "automorphism family fails")
    c.finish(f"Arrow nerve valid, {len(results)} mutants detected, swap family commutes")


# -- 13. gradient correctness ------------------------------------------------------------------------

def test_13_gradient_correctness():
    c = Check(13, "AD vs finite differences")
    rng = np.random.default_rng(13)
    worst = 0.0
    fixtures = S.loss_fixtures()
    for name, (f, dim) in sorted(fixtures.items()):
        for _ in range(50):
            theta = rng.uniform(-1.5, 1.5, size=dim)
            fd = ad.central_difference(f.value, theta)
            err = np.max(np.abs(f.gradient(theta) - fd)) / max(np.max(np.abs(fd)), 1.0)
            worst = max(worst, err)
            c.need(err <= 1e-6, f"{name} error {err:.1e}")
    worst2 = 0.0
    h = 1e-4
    for k in range(50):
        ans = pinn.Ansatz((16, 16), pinn.flatten(pinn.init_params((16, 16), k)))
        x = rng.uniform(-1, 1, size=1)
        u2 = ans.jets(x)[2][0]
        fd = ((ans(x + h) - 2 * ans(x) + ans(x - h)) / h ** 2)[0]
        err = abs(u2 - fd) / max(abs(fd), 1.0)
        worst2 = max(worst2, err)
        c.need(err <= 1e-4, f"pinn u'' error {err:.1e}")
    c.finish(f"{len(fixtures)} losses x 50 probes max rel {worst:.1e}, pinn u'' max rel {worst2:.1e}")


# -- 14. determinism -------------------------------------------------------------------------------

def test_14_cli_determinism():
    c = Check(14, "byte-identical CLI reports")
    cmds = all_commands()
    for argv, _ in cmds:
        a = run_cli([*argv, "--json", "--seed", "0"])
        b = run_cli([*argv, "--json", "--seed", "0"])
        c.need(a == b, " ".join(argv))
    c.finish(f"{len(cmds)} commands, two runs each, identical bytes")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(((n, f) for n, f in globals().items() if n.startswith("test_")),
                           key=lambda kv: int(kv[0].split("_")[1])):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
