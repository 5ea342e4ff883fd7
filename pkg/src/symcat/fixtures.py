"""Example documents shipped under ``fixtures/``.

``python3 -m symcat.fixtures [DIR]`` regenerates them; the test suite checks
that the committed files match this builder byte for byte.
"""

from __future__ import annotations

import io
import json
import os
import sys
import tempfile

from . import documents as D
from . import equinet, fincat, sobj, symgrp, topo

ROOT = os.path.join(os.path.dirname(__file__), "..", "..", "fixtures")


def _cat(c, groupoid=False):
    return "category", D.category_payload(c, groupoid)


def _functor(src: str, F: fincat.FunctorData, target: str | None = None):
    p = {"source": src, **D.functor_map_payload(F)}
    if target:
        p["target"] = target
    return "functor", p


def _nat(cat: str, F, G, comps: dict):
    return "nat", {
        "category": cat,
        "source_functor": D.functor_map_payload(F),
        "target_functor": D.functor_map_payload(G),
        "components": {str(k): v for k, v in comps.items()},
    }


def _rep(r: symgrp.Representation, group: str):
    return "representation", D.representation_payload(r, group)


def _action(group: str, table):
    return "action", {"group": group, "table": [list(row) for row in table]}


def build() -> dict[str, tuple[str, dict]]:
    """``name -> (kind, payload)``; names become ``<name>.json``."""
    fx: dict[str, tuple[str, dict]] = {}
    arrow, bz2, pp = fincat.arrow(), fincat.bz2(), fincat.parallel_pair()

    # categories
    fx["arrow"] = _cat(arrow)
    fx["bz2"] = _cat(bz2, groupoid=True)
    fx["bz2_mutant_ss"] = _cat(bz2.with_composition(("s", "s"), "s"), groupoid=True)
    fx["terminal"] = _cat(fincat.terminal())
    fx["parallel_pair"] = _cat(pp)
    fx["walking_iso"] = _cat(fincat.walking_iso(), groupoid=True)

    # functors and transformations
    idA = fincat.identity_functor(arrow)
    fx["arrow_identity_functor"] = _functor("arrow.json", idA)
    fx["arrow_endpoint_mutant"] = _functor("arrow.json", idA.with_mor("f", "id_b"))
    fx["bz2_collapse"] = _functor("bz2.json", fincat.collapse_functor(bz2, "*"))
    swap = fincat.swap_action_on_parallel_pair()
    fx["pp_swap"] = _functor("parallel_pair.json", swap(1))
    fx["pp_collapse_u"] = _functor("parallel_pair.json", fincat.identity_functor(pp).with_mor("v", "u"))
    fx["arrow_identity_nat"] = _nat("arrow.json", idA, idA, {"a": "id_a", "b": "id_b"})
    idB, colB = fincat.identity_functor(bz2), fincat.collapse_functor(bz2, "*")
    fx["bz2_sigma_id_id"] = _nat("bz2.json", idB, idB, {"*": "s"})
    fx["bz2_sigma_id_collapse"] = _nat("bz2.json", idB, colB, {"*": "s"})
    fx["pp_swap_action"] = ("cat_action", {
        "category": "parallel_pair.json",
        "group": "z2.json",
        "functors": {n: D.functor_map_payload(swap(g)) for g, n in enumerate(swap.group.names)},
    })

    # groups, actions, representations
    z2, c4, s3 = symgrp.z2(), symgrp.cyclic(4), symgrp.symmetric(3)
    fx["z2"] = ("group", D.group_payload(z2))
    fx["c4"] = ("group", D.group_payload(c4))
    fx["s3"] = ("group", D.group_payload(s3))
    fx["z2_bad_inverse"] = ("group", {**D.group_payload(z2), "identity": "e", "inverse": ["e", "e"]})
    fx["not_latin"] = ("group", {"elements": ["e", "a", "b"], "table": [[0, 1, 2], [1, 1, 0], [2, 0, 1]]})
    c4grid = symgrp.SetAction.from_table(c4, [[(i + k) % 4 for i in range(4)] for k in range(4)])
    fx["c4grid"] = _action("c4.json", c4grid.table)
    fx["c4_trivial_on_3"] = _action("c4.json", symgrp.trivial_action(c4, 3).table)
    fx["z2_repeat_image"] = _action("z2.json", [[0, 1], [0, 0]])
    fx["c4_pairs"] = _action("c4.json", symgrp.product_action(c4grid, c4grid).table)
    swap_act = symgrp.SetAction.from_table(z2, [[0, 1], [1, 0]])
    fx["z2_swap"] = _action("z2.json", swap_act.table)
    fx["z2_swap_pairs"] = _action("z2.json", symgrp.product_action(swap_act, swap_act).table)
    fx["swaprep"] = _rep(symgrp.swap_rep(), "z2.json")
    c4perm = symgrp.permutation_representation(c4grid)
    fx["c4perm"] = _rep(c4perm, "c4.json")
    fx["c4_trivial1"] = _rep(symgrp.trivial_representation(c4, 1), "c4.json")
    fx["z2_trivial1"] = _rep(symgrp.trivial_representation(z2, 1), "z2.json")
    fx["z2_regular"] = _rep(symgrp.regular_representation(z2), "z2.json")
    fx["z2_double"] = ("representation", {"group": "z2.json", "matrices": [[[1, 0], [0, 1]], [[2, 0], [0, 2]]]})
    fx["swap_object"] = ("enriched_object", {"representation": "swaprep.json"})

    # models
    fx["c4_random_model"] = ("model", D.model_payload(equinet.random_model([4, 4, 4], seed=0)))
    fx["c4_equivariant_model"] = ("model", D.model_payload(equinet.equivariant_stack([c4perm] * 3, seed=0)))
    fx["c4_invariant_model"] = ("model", D.model_payload(
        equinet.equivariant_stack([c4perm] * 2, seed=0, invariant_head=True)))
    fx["two_layer_model"] = ("model", {"layers": [
        {"W": [[1.0, 2.0], [0.0, -1.0]], "b": [0.5, 0.0], "activation": "tanh"},
        {"W": [[1.0, 1.0]], "b": [-0.25], "activation": "identity"},
    ]})
    tying, _ = equinet.compress((4, 4), c4grid, c4grid)
    fx["c4_tying"] = ("tying", {"orbit": tying.tolist()})

    # complexes, filtrations, diagrams
    tri = topo.triangle_filtration()
    fx["triangle_boundary"] = ("complex", {"simplices": [[1], [2], [3], [1, 2], [2, 3], [1, 3]]})
    fx["triangle_missing_edge"] = ("complex", {"simplices": [[1], [2], [3], [2, 3], [1, 3], [1, 2, 3]]})
    fx["triangle_filt"] = ("filtration", D.filtration_payload(tri))
    fx["triangle_asym"] = ("filtration", D.filtration_payload(topo.triangle_filtration((1.0, 1.5, 2.0), 3.0)))
    fx["triangle_perturbed"] = ("filtration", D.filtration_payload(topo.triangle_filtration((1.1, 1.0, 1.0))))
    fx["nonmonotone"] = ("filtration", {"values": [[[1], 1.0], [[2], 0.0], [[1, 2], 0.5]]})
    fx["single_vertex"] = ("filtration", {"values": [[[0], 0.0]]})
    fx["two_vertices"] = ("filtration", {"values": [[[0], 0.0], [[1], 0.0], [[0, 1], 1.0]]})
    fx["c3_rotation"] = _action("c3.json", [[(i + k) % 3 for i in range(3)] for k in range(3)])
    fx["c3"] = ("group", D.group_payload(symgrp.cyclic(3)))
    fx["diagram_02"] = ("diagram", {"bars": [[0, 0.0, 2.0]]})
    fx["diagram_025"] = ("diagram", {"bars": [[0, 0.0, 2.5]]})
    fx["diagram_empty"] = ("diagram", {"bars": []})
    fx["diagram_two_bars"] = ("diagram", {"bars": [[0, 0.0, 1.0], [1, 1.0, 2.0]]})

    # simplicial objects
    fx["constant_sobj"] = ("simplicial_object", D.simplicial_payload(sobj.constant(2)))
    fx["arrow_nerve"] = ("simplicial_object", {"nerve": {"category": "arrow.json", "n": 2}})
    fx["pp_nerve"] = ("simplicial_object", {"nerve": {"category": "parallel_pair.json", "n": 2}})
    nerve = sobj.nerve(arrow, 2)
    bad = nerve.with_face(2, 1, 0, (nerve.d(2, 1, 0) + 1) % nerve.sizes[1])
    fx["arrow_nerve_mutant"] = ("simplicial_object", D.simplicial_payload(bad))

    # trajectories
    fx["geometric"] = ("trajectory", {"values": [2.0 ** -t for t in range(21)]})
    fx["constant_traj"] = ("trajectory", {"values": [1.0] * 5})
    fx["alternating"] = ("trajectory", {"values": [(-1.0) ** t for t in range(10)]})

    # a saved run report, produced by the command line itself
    fx["orbits_report"] = ("report", _cli_report(fx, ["orbits", "--action", "c4grid.json"], ["c4grid", "c4"]))
    return fx


def _cli_report(fx: dict, argv: list[str], needed: list[str]) -> dict:
    from . import cli

    with tempfile.TemporaryDirectory() as tmp:
        for name in needed:
            D.write_document(os.path.join(tmp, name + ".json"), *fx[name])
        out = io.BytesIO()
        old = os.getcwd()
        os.chdir(tmp)
        try:
            cli.run([*argv, "--json", "--seed", "0"], stdout=out, stderr=io.StringIO())
        finally:
            os.chdir(old)
    return json.loads(out.getvalue())["payload"]


def write(directory: str = ROOT) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, (kind, payload) in sorted(build().items()):
        path = os.path.join(directory, name + ".json")
        D.write_document(path, kind, payload)
        paths.append(path)
    return paths


if __name__ == "__main__":
    for p in write(sys.argv[1] if len(sys.argv) > 1 else ROOT):
        print(p)
