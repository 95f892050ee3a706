from pathlib import Path
from typing import Tuple

from catalog import catalog_source
from model_dsl import ModelFile, parse_model


def read_source(source: str) -> str:
    """Model text from a file path, an inline description, or a catalog name."""
    if "{" in source:
        return source
    path = Path(source)
    if path.suffix in (".rho", ".txt", ".model") or path.is_file():
        return path.read_text(encoding="utf-8")
    return catalog_source(source)


def load_model(source: str) -> Tuple[ModelFile, str]:
    text = read_source(source)
    return parse_model(text), text
