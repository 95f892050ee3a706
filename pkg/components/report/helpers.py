from typing import Any, Dict

import pandas as pd


def betti_frame(results: Dict[str, Any]) -> pd.DataFrame:
    betti = results.get("betti", {})
    return pd.DataFrame(
        {"degree": [int(n) for n in betti], "betti": list(betti.values())}
    )


def basis_frame(results: Dict[str, Any]) -> pd.DataFrame:
    return pd.DataFrame(results.get("basis", []), columns=["name", "degree"])


def products_frame(results: Dict[str, Any]) -> pd.DataFrame:
    return pd.DataFrame(results.get("products", []), columns=["left", "right", "value"])


def dims_frame(results: Dict[str, Any]) -> pd.DataFrame:
    dims = results.get("dims", {})
    return pd.DataFrame({"degree": [int(n) for n in dims], "dimension": list(dims.values())})


def grading_frame(results: Dict[str, Any]) -> pd.DataFrame:
    frame = pd.DataFrame(results.get("dims", []), columns=["degree", "k", "dim"])
    if frame.empty:
        return frame
    return frame.pivot_table(index="degree", columns="k", values="dim", fill_value=0).reset_index()


def witness_frame(results: Dict[str, Any]) -> pd.DataFrame:
    rows = [
        {"degree": w["degree"], "element": w["element"], "image": w["image"]}
        for w in results.get("witnesses", [])
    ]
    return pd.DataFrame(rows, columns=["degree", "element", "image"])


def steps_frame(results: Dict[str, Any]) -> pd.DataFrame:
    rows = [
        {"index": s["index"], "torus": s["torus"], "nonzero": bool(s["derivation"])}
        for s in results.get("steps", [])
    ]
    return pd.DataFrame(rows, columns=["index", "torus", "nonzero"])


TABLES = {
    "cohomology": {"betti": betti_frame},
    "ring": {"basis": basis_frame, "products": products_frame},
    "derivations": {"dims": dims_frame},
    "rigidity": {"dims": dims_frame, "witnesses": witness_frame},
    "lower-grading": {"grading": grading_frame},
    "peel": {"steps": steps_frame},
}


def tables_for(command: str, results: Dict[str, Any]) -> Dict[str, pd.DataFrame]:
    return {name: build(results) for name, build in TABLES.get(command, {}).items()}
