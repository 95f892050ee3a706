import json
from typing import Any, Dict, List

import pandas as pd

from .helpers import (
    basis_frame,
    betti_frame,
    dims_frame,
    grading_frame,
    products_frame,
    steps_frame,
    witness_frame,
)


def _table(frame: pd.DataFrame, empty: str) -> str:
    if frame.empty:
        return empty
    return frame.to_string(index=False)


def _value(v: Any) -> str:
    if isinstance(v, dict):
        return " + ".join(name if c == "1" else f"{c} {name}" for name, c in v.items()) or "0"
    return str(v)


def _derivation_lines(label: str, images: Dict[str, Any]) -> List[str]:
    if not images:
        return [f"  {label}: 0"]
    body = ", ".join(f"{k} -> {_value(v)}" for k, v in images.items())
    return [f"  {label}: {body}"]


def show_cohomology(results: Dict[str, Any]) -> str:
    lines = ["Betti numbers", _table(betti_frame(results), "(none)")]
    reps = results.get("representatives", {})
    for n, classes in reps.items():
        if classes:
            lines.append(f"H^{n}: " + ", ".join(f"[{c}]" for c in classes))
    return "\n".join(lines)


def show_ring(results: Dict[str, Any]) -> str:
    lines = ["Basis", _table(basis_frame(results), "(empty)"), "", "Nonzero products"]
    lines.append(_table(products_frame(results), "(all products involving positive degrees vanish)"))
    lines.append("")
    lines.append(f"Poincare duality in dimension {results.get('formal_dimension')}: {results.get('poincare')}")
    return "\n".join(lines)


def show_derivations(results: Dict[str, Any]) -> str:
    lines = ["Derivation spaces", _table(dims_frame(results), "(no degrees)")]
    for n, basis in results.get("bases", {}).items():
        for i, images in enumerate(basis):
            lines.extend(_derivation_lines(f"Der_{n}[{i}]", images))
    return "\n".join(lines)


def show_chain_derivations(results: Dict[str, Any]) -> str:
    lines = [f"Chain derivations of degree {results['degree']}: dimension {results['dim']}"]
    for i, images in enumerate(results.get("basis", [])):
        lines.extend(_derivation_lines(f"D[{i}]", images))
    if "induced" in results:
        lines.append(f"Induced on cohomology: dimension {len(results['induced'])}")
        for i, images in enumerate(results["induced"]):
            lines.extend(_derivation_lines(f"m(D)[{i}]", images))
    return "\n".join(lines)


def show_rigidity(results: Dict[str, Any]) -> str:
    lines = [
        f"Verdict: {results['verdict']} (mode {results['mode']}, dim T = {results['dim_t']}, k = {results['k']})",
        f"Checked subspace: {results['target']} of dimension {results['target_dim']}",
        f"Converse hypothesis holds: {results['converse_holds']}",
    ]
    if "class_h" in results:
        lines.append(f"No negative derivations (class H): {results['class_h']}")
    lines += [
        "",
        _table(dims_frame(results), "(no degrees checked)"),
    ]
    witnesses = witness_frame(results)
    if not witnesses.empty:
        lines += ["", "Witnesses", _table(witnesses, "")]
    return "\n".join(lines)


def show_lower_grading(results: Dict[str, Any]) -> str:
    return "\n".join([
        "dim H^n_k",
        _table(grading_frame(results), "(zero)"),
        f"rank difference {results['rank_difference']}: bound holds = {results['bound_holds']}",
        f"even part equals H_0: {results['even_part_is_h0']}",
    ])


def show_peel(results: Dict[str, Any]) -> str:
    lines = ["Steps", _table(steps_frame(results), "(none)")]
    for s in results.get("steps", []):
        if s["derivation"]:
            lines.extend(_derivation_lines(f"t_{s['index']} ({s['torus']})", s["derivation"]))
    lines.append(f"Recomposition matches: {results.get('recomposes')}")
    return "\n".join(lines)


def show_morphism_check(results: Dict[str, Any]) -> str:
    if results["ok"]:
        return "phi commutes with d"
    return "\n".join(
        ["phi does not commute with d:"] + [f"  {f['generator']}: {f['residue']}" for f in results["failures"]]
    )


def show_text(results: Dict[str, Any]) -> str:
    if "dsl" in results:
        extra = "" if "pure" not in results else f"\n# pure: {results['pure']}"
        return results["dsl"].rstrip() + extra
    if "entries" in results:
        return "\n".join(results["entries"])
    return json.dumps(results, indent=2, sort_keys=True)


def show_error(results: Dict[str, Any]) -> str:
    return f"error: {results['error']}: {results['message']}"
