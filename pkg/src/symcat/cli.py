"""``symcat`` command line: one binary, many subcommands, canonical reports.

Exit codes: 0 when every executed check passes, 1 when at least one check
reports a violation, 2 for input or usage errors (no check executed).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Sequence

import numpy as np

from . import documents as D
from . import enriched, equinet, fincat, optdyn, pinn, sobj, symgrp, topo
from .errors import (
    BudgetExhausted, NonConvergence, SymcatError, UsageError, ValidationFailure,
)
from .report import Collector, LawReport

SEED_ENV = "SYMCAT_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- small parsers for flag values ----------------------------------------------------

def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",") if x.strip() != ""], dtype=np.float64)
    except ValueError as exc:
        raise UsageError(f"cannot read vector {text!r}") from exc


def parse_loss(text: str) -> optdyn.DiffFunction:
    name, _, arg = text.partition(":")
    if name == "quad":
        return optdyn.quad_loss()
    if name == "sumsq":
        return optdyn.sumsq_loss()
    if name == "custom-poly" and arg:
        return optdyn.poly_loss(parse_vector(arg))
    raise UsageError(f"unknown loss {text!r}; use quad, sumsq or custom-poly:<c0,c1,...>")


def parse_map(text: str, rep: symgrp.Representation | None = None, loss: str | None = None) -> Callable:
    """``scale:c``, ``offset:v``, ``affine:a:v``, ``reynolds``, ``canonical``, ``gradstep:eta``."""
    name, _, arg = text.partition(":")
    try:
        if name == "scale":
            return enriched.scale_map(float(arg))
        if name == "offset":
            return enriched.offset_map(parse_vector(arg))
        if name == "affine":
            a, _, v = arg.partition(":")
            return enriched.affine_map(float(a), parse_vector(v))
    except ValueError as exc:
        raise UsageError(f"bad map argument in {text!r}") from exc
    if name in ("reynolds", "canonical"):
        if rep is None:
            raise UsageError(f"map {name} needs --rep")
        return enriched.reynolds_projector(rep) if name == "reynolds" else enriched.canonical_map(rep)
    if name == "gradstep":
        if loss is None:
            raise UsageError("map gradstep needs --loss")
        return optdyn.gradient_step(parse_loss(loss), float(arg) if arg else optdyn.DEFAULT_STEP)
    raise UsageError(f"unknown map {text!r}")


TARGETS: dict[str, Callable] = {
    "sum": lambda x: float(np.sum(x)),
    "const": lambda x: 1.0,
    "sumsq": lambda x: float(np.sum(x * x)),
    "max": lambda x: float(np.max(x)),
    "diff": lambda x: float(x[0] - x[1]),
}


# -- subcommand implementations --------------------------------------------------------
# Each takes a Run and fills run.report.findings / run.report.results.

class Run:
    def __init__(self, args):
        self.args = args
        self.report = D.RunReport(args.command, args.seed)

    def load(self, path: str, kind: str | tuple | None = None) -> D.Document:
        doc = D.load_document(path)
        if kind is not None and doc.kind not in ((kind,) if isinstance(kind, str) else kind):
            raise UsageError(f"{path} has kind {doc.kind!r}, expected {kind!r}")
        self.report.add_input(doc)
        return doc

    def tol(self, default: float) -> float:
        return default if self.args.tol is None else self.args.tol


def _laws_for(doc: D.Document, args, run: Run) -> list[LawReport]:
    mv = getattr(args, "max_violations", None)
    o = doc.obj
    if doc.kind == "category":
        return [fincat.validate_category(o.category, mv, groupoid=o.groupoid or getattr(args, "groupoid", False))]
    if doc.kind == "functor":
        return [fincat.check_functor(o.functor, o.source, o.target, mv)]
    if doc.kind == "nat":
        return [fincat.check_natural(o.nat, o.source, o.target, o.category, o.category, mv)]
    if doc.kind == "cat_action":
        out = [fincat.validate_cat_action(o.action, o.category, mv)]
        if getattr(args, "functor", None):
            F = run.load(args.functor, "functor").obj
            out.append(fincat.check_equivariant_functor(F.functor, o.action, o.category, mv))
        return out
    if doc.kind == "group":
        return [symgrp.validate_group(o, mv)]
    if doc.kind == "action":
        return [symgrp.validate_action(o, mv)]
    if doc.kind == "representation":
        return [symgrp.validate_representation(o, run.tol(symgrp.ALG_TOL), mv)]
    if doc.kind == "enriched_object":
        return [symgrp.validate_representation(o.rep, run.tol(symgrp.ALG_TOL), mv)]
    if doc.kind == "simplicial_object":
        return [sobj.validate_simplicial(o, mv)]
    if doc.kind == "complex":
        return [topo.validate_complex(o)]
    if doc.kind == "filtration":
        return [topo.validate_filtration(o)]
    return []


def cmd_validate(run: Run):
    for path in run.args.documents:
        doc = run.load(path)
        laws = _laws_for(doc, run.args, run)
        col = Collector(f"schema:{doc.kind}")
        col.case(True, "schema", (path,))
        run.report.findings.extend(laws or [col.report()])


def cmd_laws(run: Run):
    doc = run.load(run.args.document)
    laws = _laws_for(doc, run.args, run)
    if not laws:
        raise UsageError(f"no laws are defined for kind {doc.kind!r}")
    run.report.findings.extend(laws)


def cmd_hyp(run: Run):
    c = run.load(run.args.category, "category").obj.category
    hyp = fincat.enumerate_hyp(c, run.args.budget)
    run.report.findings.append(fincat.validate_endocat(hyp, run.args.max_violations))
    run.report.results.update(
        n_endofunctors=len(hyp.endofunctors),
        hom_sizes=hyp.hom_sizes(),
        endofunctors=[D.functor_map_payload(F) for F in hyp.endofunctors],
        enumeration_bound=fincat.enumeration_bound(c),
    )


def cmd_stability(run: Run):
    c = run.load(run.args.category, "category").obj.category
    hyp = fincat.enumerate_hyp(c, run.args.budget)
    a = run.args
    if a.functor is not None:
        ts = hyp.homs.get((a.functor, a.functor))
        if ts is None or not 0 <= a.index < len(ts):
            raise UsageError(f"no transformation {a.index} in hom({a.functor}, {a.functor})")
        run.report.findings.append(fincat.check_stability(ts[a.index], hyp, a.functor, a.max_violations))
        return
    col = Collector("stability_characterization")
    rows = []
    for i in range(len(hyp.endofunctors)):
        for j, gamma in enumerate(hyp.homs[(i, i)]):
            rep = fincat.check_stability(gamma, hyp, i)
            stable = not rep.laws_violated() - {"identity_crosscheck"}
            is_id = rep.details["is_identity"]
            col.case(stable == is_id and "identity_crosscheck" not in rep.laws_violated(), "stable_iff_identity", (i, j))
            rows.append({"functor": i, "index": j, "stable": stable, "is_identity": is_id})
    run.report.findings.append(col.report())
    run.report.results["transformations"] = rows


def cmd_orbits(run: Run):
    a = run.load(run.args.action, "action").obj
    part = symgrp.orbits(a)
    count = symgrp.burnside(a)
    col = Collector("burnside_crosscheck")
    col.case(count == part.count, "orbit_count", (count, part.count))
    run.report.findings.append(col.report())
    run.report.results.update(orbit_count=part.count, burnside=count, orbit_of=list(part.orbit_of))


def cmd_intertwiner(run: Run):
    r_in = run.load(run.args.rep_in, "representation").obj
    r_out = run.load(run.args.rep_out, "representation").obj
    if r_in.group != r_out.group:
        raise UsageError("representations use different groups")
    basis = symgrp.intertwiner_basis(r_in, r_out, run.args.piv_tol)
    tol = run.tol(symgrp.ALG_TOL)
    col = Collector("intertwiner_residuals")
    res = [symgrp.equivariance_residual(r_in, r_out, B) for B in basis]
    for k, v in enumerate(res):
        col.case(v <= tol, "equivariance", (k,))
    col.details["max_residual"] = max(res, default=0.0)
    run.report.findings.append(col.report())
    run.report.results.update(dimension=len(basis), basis=[B.tolist() for B in basis])


def _rep_pair(run: Run):
    r_in = run.load(run.args.rep_in, "representation").obj
    r_out = run.load(run.args.rep_out, "representation").obj if run.args.rep_out else None
    return r_in, r_out


def cmd_equivariance(run: Run):
    m = run.load(run.args.model, "model").obj
    r_in, r_out = _rep_pair(run)
    if r_out is None:
        same = m.n_out == r_in.dim
        r_out = r_in if same else symgrp.trivial_representation(r_in.group, m.n_out)
    rep = equinet.check_model_equivariance(m, r_in, r_out, run.args.samples, run.args.seed, run.tol(symgrp.ALG_TOL))
    run.report.findings.append(rep)


def cmd_compress(run: Run):
    a_in = run.load(run.args.action_in, "action").obj
    a_out = run.load(run.args.action_out, "action").obj
    tying, rep = equinet.compress((a_out.size, a_in.size), a_out, a_in)
    run.report.findings.append(equinet.check_tying(tying, a_out, a_in))
    run.report.results.update(rep.to_dict())
    run.report.results["tying"] = tying.tolist()
    if run.args.tying_out:
        D.write_document(run.args.tying_out, "tying", {"orbit": tying.tolist()})


def cmd_fit_invariant(run: Run):
    r = run.load(run.args.rep, "representation").obj
    if run.args.target not in TARGETS:
        raise UsageError(f"unknown target {run.args.target!r}; choose from {sorted(TARGETS)}")
    arch = run.args.arch if run.args.arch == "linear" else int(run.args.arch)
    col = Collector("fit_invariant")
    try:
        res = equinet.fit_invariant(TARGETS[run.args.target], r, arch, run.args.budget, run.args.seed,
                                    run.args.eta, target_error=run.args.target_error)
        col.case(True, "target_error", (run.args.target,))
    except BudgetExhausted as exc:
        res = exc.best
        col.case(False, "target_error", (run.args.target,))
    col.details["sup_error"] = res.sup_error
    run.report.findings.append(col.report())
    run.report.results.update(sup_error=res.sup_error, final_loss=res.losses[-1], best_loss=min(res.losses))
    if run.args.model_out:
        D.write_document(run.args.model_out, "model", D.model_payload(res.model))


def cmd_adversarial(run: Run):
    m = run.load(run.args.model, "model").obj
    r = run.load(run.args.rep_in, "representation").obj
    x = parse_vector(run.args.x)
    rep = equinet.adversarial_invariance(m, equinet.half_sq_loss, x, r, run.args.mode, run.args.eps,
                                         run.args.samples, run.args.seed, run.tol(1e-12))
    run.report.findings.append(rep)


def _maybe_rep(run: Run):
    return run.load(run.args.rep, "representation").obj if getattr(run.args, "rep", None) else None


def cmd_contract(run: Run):
    r = _maybe_rep(run)
    F = parse_map(run.args.map, r, run.args.loss)
    dim = run.args.dim if run.args.dim is not None else (r.dim if r is not None else None)
    if dim is None:
        raise UsageError("contract needs --dim or --rep")
    cert = optdyn.estimate_contraction(F, optdyn.box_sampler(dim, run.args.low, run.args.high), run.args.pairs,
                                       run.args.seed)
    col = Collector("contraction")
    col.case(cert.contractive, "ratio_below_one", (cert.ratio,))
    col.details["ratio"] = cert.ratio
    run.report.findings.append(col.report())
    run.report.results.update(ratio=cert.ratio, n_pairs=cert.n_pairs, sampler=cert.sampler, skipped=cert.skipped)


def cmd_iterate(run: Run):
    r = _maybe_rep(run)
    F = parse_map(run.args.map, r, run.args.loss)
    theta0 = parse_vector(run.args.theta0)
    col = Collector("banach_iterate")
    try:
        fp = optdyn.banach_iterate(F, theta0, run.tol(1e-10), run.args.max_iter)
        col.case(True, "converged", (fp.iterations,))
        run.report.results.update(theta=fp.theta, iterations=fp.iterations, residual=fp.residual,
                                  residuals=list(fp.residuals))
    except NonConvergence as exc:
        col.case(False, "converged", (run.args.max_iter,))
        run.report.results.update(last=exc.last, residuals=exc.residuals)
    run.report.findings.append(col.report())


def cmd_flow(run: Run):
    r = _maybe_rep(run)
    name, _, eta = run.args.flow.partition(":")
    if name != "gradstep":
        raise UsageError(f"unknown flow {run.args.flow!r}; use gradstep:<eta>")
    loss = parse_loss(run.args.loss)
    flow = optdyn.FlowMap(optdyn.gradient_step(loss, float(eta) if eta else optdyn.DEFAULT_STEP), "gradstep")
    theta0 = parse_vector(run.args.theta0)
    cases = optdyn.random_semigroup_cases(run.args.cases, run.args.t_max, run.args.seed)
    run.report.findings.append(optdyn.check_semigroup(flow, cases, theta0))
    if r is not None:
        run.report.findings.append(
            optdyn.check_flow_equivariance(flow, r, run.args.t_max, run.args.samples, run.args.seed,
                                           run.tol(symgrp.ALG_TOL)))
    traj = flow.trajectory(theta0, run.args.steps)
    run.report.results["final"] = traj.points[-1][1]
    if run.args.trajectory_out:
        D.write_document(run.args.trajectory_out, "trajectory", D.trajectory_payload(traj))


def cmd_converge(run: Run):
    traj = run.load(run.args.trajectory, "trajectory").obj
    r = _maybe_rep(run)
    T = optdyn.detect_convergence(traj, run.args.eps, run.args.metric, r)
    col = Collector("detect_convergence")
    col.case(T is not None, "converged", (run.args.eps,))
    run.report.findings.append(col.report())
    run.report.results["T"] = T


def cmd_meta(run: Run):
    r = run.load(run.args.rep, "representation").obj
    Phi = parse_map(run.args.map, r, run.args.loss)
    theta0 = parse_vector(run.args.theta0) if run.args.theta0 else np.zeros(r.dim)
    try:
        res = optdyn.meta_fixed_point(Phi, r, theta0, run.tol(1e-12), run.args.max_iter, run.args.samples,
                                      run.args.seed)
    except NonConvergence as exc:
        col = Collector("meta_fixed_point")
        col.case(False, "converged", (run.args.max_iter,))
        run.report.findings.append(col.report())
        run.report.results["last"] = exc.last
        return
    run.report.findings.extend([res.hypothesis, res.invariance])
    run.report.results.update(theta=res.theta, iterations=res.iterations, invariance_defect=res.invariance_defect)


def cmd_train_pinn(run: Run):
    a = run.args
    if a.pde != "poisson1d":
        raise UsageError(f"unknown pde {a.pde!r}")
    try:
        spec = pinn.PdeSpec(a.a, a.b, a.source, a.ua, a.ub, a.colloc, a.penalty)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    modes = {"on": [True], "off": [False], "both": [False, True]}[a.symmetric]
    runs = {}
    for sym in modes:
        rep = pinn.train(spec, a.arch, a.steps, a.seed, sym, a.eta)
        runs["symmetrized" if sym else "baseline"] = rep
        col = Collector("pinn_" + ("symmetrized" if sym else "baseline"))
        col.case(rep.losses[-1] < a.threshold, "final_loss_below_threshold", (a.threshold,))
        if sym:
            for k, d in enumerate(rep.invariance_defects):
                col.case(d <= run.tol(1e-12), "invariance_defect", (k,))
        run.report.findings.append(col.report())
    run.report.results.update({k: v.to_dict() for k, v in runs.items()})
    if len(runs) == 2:
        run.report.results["steps_to_threshold"] = {
            repr(t): {k: v.steps_to(t) for k, v in runs.items()} for t in pinn.THRESHOLDS
        }
    if a.report:
        with open(a.report, "wb") as fh:
            fh.write(D.emit_report(run.report, "json"))


def cmd_persistence(run: Run):
    f = run.load(run.args.filtration, "filtration").obj
    d = topo.persistence(f, run.args.keep_zero)
    run.report.findings.append(topo.validate_diagram(d, f))
    run.report.results["diagram"] = d.to_list()
    if run.args.diagram_out:
        D.write_document(run.args.diagram_out, "diagram", D.diagram_payload(d))


def _diagram_arg(run: Run, path: str) -> topo.PersistenceDiagram:
    doc = run.load(path, ("diagram", "filtration"))
    if doc.kind == "diagram":
        d, f = doc.obj, None
    else:
        d, f = topo.persistence(doc.obj), doc.obj
    run.report.findings.append(topo.validate_diagram(d, f))
    return d


def cmd_bottleneck(run: Run):
    d1, d2 = _diagram_arg(run, run.args.first), _diagram_arg(run, run.args.second)
    run.report.results["distance"] = topo.bottleneck(d1, d2, run.args.dim)


def complex_action(a: symgrp.SetAction, k: topo.SimplicialComplex) -> topo.ComplexAction:
    """Read a set action on ``{0..n-1}`` as acting on the sorted vertex list of ``k``."""
    verts = k.vertices
    if a.size != len(verts):
        raise UsageError(f"action on {a.size} points for a complex with {len(verts)} vertices")
    return topo.ComplexAction(a.group, tuple({verts[i]: verts[a.table[g][i]] for i in range(a.size)} for g in a.group))


def cmd_ph_check(run: Run):
    f = run.load(run.args.filtration, "filtration").obj
    act = complex_action(run.load(run.args.action, "action").obj, f.complex)
    run.report.findings.append(topo.validate_complex_action(act, f.complex))
    run.report.findings.append(topo.check_equivariant_filtration(act, f))
    run.report.findings.append(topo.diagram_invariance(act, f))
    d = topo.persistence(f)
    ref = _diagram_arg(run, run.args.ref) if run.args.ref else None
    mode = run.args.ph_mode or ("bottleneck_to" if ref is not None else "total_persistence")
    run.report.results["ph_loss"] = {"mode": mode, "value": topo.ph_loss(d, mode, ref)}


def cmd_simplicial(run: Run):
    m = run.load(run.args.object, "simplicial_object").obj
    run.report.findings.append(sobj.validate_simplicial(m, run.args.max_violations))
    if run.args.functor:
        F = run.load(run.args.functor, "functor").obj
        if not m.labels:
            raise UsageError("--functor needs a simplicial object given as a nerve")
        try:
            fam = sobj.nerve_map(F.functor, F.source, m)
        except KeyError as exc:
            raise UsageError(f"functor does not act on this nerve ({exc})") from exc
        run.report.findings.append(sobj.check_simplicial_invariance(fam, m, run.args.max_violations))
    if run.args.scores is not None:
        if run.args.threshold is None:
            raise UsageError("--scores needs --threshold")
        run.report.results["level"] = sobj.adapt_level(m, list(parse_vector(run.args.scores)), run.args.threshold)


def cmd_report(run: Run):
    col = Collector("reports")
    summary = []
    for path in run.args.reports:
        doc = run.load(path, "report")
        p = doc.obj
        col.case(p["status"] == "pass", "status", (path,))
        summary.append({"path": path, "subcommand": p.get("subcommand"), "status": p["status"],
                        "n_findings": len(p["findings"])})
    run.report.findings.append(col.report())
    run.report.results["reports"] = summary


# -- argument parsing -------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None, help=f"default 0, or ${SEED_ENV}")
    p.add_argument("--tol", type=float, default=None, help="override the check tolerance")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--out", help="also write the JSON report to this path")
    p.add_argument("--max-violations", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symcat", description="Symmetry and category law checks for learning systems.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, "load and structurally validate documents")
    p.add_argument("documents", nargs="+")
    p.add_argument("--groupoid", action="store_true")

    p = add("laws", cmd_laws, "run the law checks for one document")
    p.add_argument("document")
    p.add_argument("--groupoid", action="store_true", help="also require every morphism to be invertible")
    p.add_argument("--functor", help="functor document to check for equivariance (cat_action only)")

    for name, fn, h in (("hyp", cmd_hyp, "enumerate endofunctors and transformations"),
                        ("stability", cmd_stability, "stability of endo-transformations")):
        p = add(name, fn, h)
        p.add_argument("--category", required=True)
        p.add_argument("--budget", type=int, default=fincat.ENUMERATION_BUDGET)
        if name == "stability":
            p.add_argument("--functor", type=int)
            p.add_argument("--index", type=int, default=0)

    p = add("orbits", cmd_orbits, "orbit partition and Burnside count")
    p.add_argument("--action", required=True)

    p = add("intertwiner", cmd_intertwiner, "basis of equivariant linear maps")
    p.add_argument("--rep-in", required=True)
    p.add_argument("--rep-out", required=True)
    p.add_argument("--piv-tol", type=float, default=symgrp.PIV_TOL)

    p = add("equivariance", cmd_equivariance, "sampled equivariance of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--rep-in", required=True)
    p.add_argument("--rep-out", help="default: --rep-in when dimensions match, else trivial")
    p.add_argument("--samples", type=int, default=100)

    p = add("compress", cmd_compress, "weight tying along index-pair orbits")
    p.add_argument("--action-in", required=True)
    p.add_argument("--action-out", required=True)
    p.add_argument("--tying-out")

    p = add("fit-invariant", cmd_fit_invariant, "fit an exactly invariant network")
    p.add_argument("--rep", required=True)
    p.add_argument("--target", default="sum")
    p.add_argument("--arch", default="linear")
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--target-error", type=float, default=None)
    p.add_argument("--model-out")

    p = add("adversarial", cmd_adversarial, "loss change under symmetry perturbations")
    p.add_argument("--model", required=True)
    p.add_argument("--rep-in", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--mode", choices=("orbit", "fixed"), default="orbit")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=100)

    for name, fn, h in (("contract", cmd_contract, "sampled contraction ratio"),
                        ("iterate", cmd_iterate, "Banach fixed-point iteration"),
                        ("meta", cmd_meta, "fixed point of an update and its invariance")):
        p = add(name, fn, h)
        p.add_argument("--map", required=True, help="scale:c | offset:v | affine:a:v | reynolds | canonical | gradstep:eta")
        p.add_argument("--rep")
        p.add_argument("--loss")
        if name == "contract":
            p.add_argument("--dim", type=int)
            p.add_argument("--pairs", type=int, default=100)
            p.add_argument("--low", type=float, default=-1.0)
            p.add_argument("--high", type=float, default=1.0)
        else:
            p.add_argument("--theta0", required=name == "iterate")
            p.add_argument("--max-iter", type=int, default=1000 if name == "iterate" else 10_000)
        if name == "meta":
            p.add_argument("--samples", type=int, default=100)

    p = add("flow", cmd_flow, "semigroup and equivariance of a discrete flow")
    p.add_argument("--loss", required=True)
    p.add_argument("--flow", default="gradstep:0.1")
    p.add_argument("--theta0", required=True)
    p.add_argument("--rep")
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--t-max", type=int, default=16)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--trajectory-out")

    p = add("converge", cmd_converge, "first time a trajectory stays within eps")
    p.add_argument("--trajectory", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--metric", choices=("euclidean", "orbit"), default="euclidean")
    p.add_argument("--rep")

    p = add("train-pinn", cmd_train_pinn, "train a 1D Poisson PINN")
    p.add_argument("--pde", default="poisson1d")
    p.add_argument("--source", default="cospi", choices=sorted(pinn.SOURCES))
    p.add_argument("--symmetric", choices=("on", "off", "both"), default="both")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--arch", default="2x16")
    p.add_argument("--eta", type=float, default=pinn.DEFAULT_STEP)
    p.add_argument("--a", type=float, default=-1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--ua", type=float, default=-1.0)
    p.add_argument("--ub", type=float, default=-1.0)
    p.add_argument("--colloc", type=int, default=pinn.PdeSpec.n_colloc)
    p.add_argument("--penalty", type=float, default=pinn.PdeSpec.penalty)
    p.add_argument("--threshold", type=float, default=1e-2)
    p.add_argument("--report")

    p = add("persistence", cmd_persistence, "persistence diagram of a filtration")
    p.add_argument("--filtration", required=True)
    p.add_argument("--keep-zero", action="store_true")
    p.add_argument("--diagram-out")

    p = add("bottleneck", cmd_bottleneck, "bottleneck distance between two diagrams")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--dim", type=int)

    p = add("ph-check", cmd_ph_check, "filtration equivariance and diagram invariance")
    p.add_argument("--filtration", required=True)
    p.add_argument("--action", required=True, help="action on the sorted vertex list")
    p.add_argument("--ref")
    p.add_argument("--ph-mode", choices=("total_persistence", "bottleneck_to"))

    p = add("simplicial", cmd_simplicial, "simplicial identities, invariance, level choice")
    p.add_argument("--object", required=True)
    p.add_argument("--functor")
    p.add_argument("--scores")
    p.add_argument("--threshold", type=float)

    p = add("report", cmd_report, "summarize saved run reports")
    p.add_argument("reports", nargs="+")
    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"${SEED_ENV} is not an integer: {env!r}") from exc


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, execute, print the report; returns the exit code."""
    stdout = stdout or sys.stdout.buffer
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.seed = _resolve_seed(args)
        r = Run(args)
        try:
            args.func(r)
        except ValidationFailure as exc:
            if exc.report is None:
                raise
            r.report.findings.append(exc.report)
            r.report.results["error"] = str(exc)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except SymcatError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return getattr(exc, "exit_code", 2)
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    report = r.report
    data = D.emit_report(report, "json" if args.json else "human")
    stdout.write(data)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(D.emit_report(report, "json"))
    return 1 if report.status == "fail" else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
