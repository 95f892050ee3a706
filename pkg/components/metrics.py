from typing import Any, Dict

from cohomology_engine import cartan_model, is_pure
from model_dsl import ModelFile


def model_metrics(mf: ModelFile) -> Dict[str, Any]:
    """Key numbers about a loaded model, shown above every command's output."""
    metrics: Dict[str, Any] = {"name": mf.name, "kind": mf.kind}
    if mf.kind == "fd":
        H = mf.obj
        metrics.update(dimension=H.dim, top_degree=H.top_degree)
    else:
        M = cartan_model(mf.obj) if mf.kind == "biquotient" else mf.obj
        gens = M.algebra.generators
        metrics.update(
            generators=len(gens),
            even=sum(1 for g in gens if not g.is_odd),
            odd=sum(1 for g in gens if g.is_odd),
            pure=is_pure(M),
        )
    if mf.top is not None:
        metrics["top"] = mf.top
    return metrics


def format_metrics(metrics: Dict[str, Any]) -> str:
    return "  ".join(f"{k}: {v}" for k, v in metrics.items())
