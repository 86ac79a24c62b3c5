"""Built-in example maps shipped with the package."""

from __future__ import annotations

from importlib.resources import files

from .dsl import Problem, load

DESCRIPTIONS = {
    "theta": "theta graph, edges permuted with reversal; no exponential growth",
    "dkl": "theta graph plus a loop, four-edge train track; lambda = 1 + sqrt(2)",
    "rose_poly": "rose x1 -> x1 x2, x2 -> x2; polynomially growing, two strata",
    "golden": "rose x1 -> x2, x2 -> x1 x2; lambda = golden ratio",
}


def names() -> list[str]:
    return list(DESCRIPTIONS)


def text(name: str) -> str:
    if name not in DESCRIPTIONS:
        raise KeyError(f"no built-in example {name!r}; choose from {', '.join(DESCRIPTIONS)}")
    return files("l2tt").joinpath("data", f"{name}.ttmap").read_text(encoding="utf-8")


def example(name: str) -> Problem:
    return load(text(name))


def schema_text() -> str:
    return files("l2tt").joinpath("data", "report.schema.json").read_text(encoding="utf-8")
