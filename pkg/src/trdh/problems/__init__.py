"""Benchmark problem families and a JSON manifest for rebuilding instances."""

from __future__ import annotations

import json

import numpy as np

from .base import EvaluationError, RegularizedProblem
from .bpdn import gen_bpdn
from .fh import FhConfig, fh_problem
from .idx import IdxFormatError, parse_idx, read_idx, serialize_idx, write_idx
from .nnmf import gen_nnmf
from .svm import load_mnist_svm, synthetic_svm

FAMILIES = ("bpdn", "bpdn-cstr", "nnmf", "svm", "svm-synthetic", "fh", "fh-cstr")


def build_problem(family: str, seed: int = 0, **params):
    """Construct a benchmark instance by family name.

    Returns ``(problem, evaluate)``; ``evaluate`` is ``None`` except for the
    SVM families, where it maps ``x`` to (train, test) accuracy.
    """
    if family in ("bpdn", "bpdn-cstr"):
        return gen_bpdn(seed=seed, constrained=family == "bpdn-cstr", **params), None
    if family == "nnmf":
        return gen_nnmf(seed=seed, **params), None
    if family == "svm":
        return load_mnist_svm(**params)
    if family == "svm-synthetic":
        return synthetic_svm(seed=seed, **params)
    if family in ("fh", "fh-cstr"):
        cfg = FhConfig(**{k: tuple(v) if isinstance(v, list) else v for k, v in params.items()})
        return fh_problem(cfg, constrained=family == "fh-cstr"), None
    raise ValueError(f"unknown problem family {family!r}; choose from {', '.join(FAMILIES)}")


def _finite_or_none(a):
    return [float(v) if np.isfinite(v) else None for v in np.asarray(a, dtype=float)]


def manifest(problem: RegularizedProblem, family: str, seed: int = 0, **params) -> dict:
    """Everything needed to rebuild ``problem`` plus a summary of what was built.

    Infinite bounds are written as ``null``.
    """
    reg = problem.reg
    return {
        "family": family,
        "seed": seed,
        "params": params,
        "dim": problem.dim,
        "lam": reg.lam,
        "kind": reg.kind.value,
        "lower": _finite_or_none(reg.lower),
        "upper": _finite_or_none(reg.upper),
        "meta": problem.meta,
    }


def dump_manifest(problem, path, family: str, seed: int = 0, **params) -> None:
    with open(path, "w") as fh:
        json.dump(manifest(problem, family, seed, **params), fh, indent=2, sort_keys=True)


def load_manifest(path):
    """Rebuild the instance recorded by :func:`dump_manifest`; returns ``(problem, evaluate)``."""
    with open(path) as fh:
        m = json.load(fh)
    return build_problem(m["family"], seed=m["seed"], **m["params"])


__all__ = [
    "EvaluationError",
    "FAMILIES",
    "FhConfig",
    "IdxFormatError",
    "RegularizedProblem",
    "build_problem",
    "dump_manifest",
    "fh_problem",
    "gen_bpdn",
    "gen_nnmf",
    "load_manifest",
    "load_mnist_svm",
    "manifest",
    "parse_idx",
    "read_idx",
    "serialize_idx",
    "synthetic_svm",
    "write_idx",
]
