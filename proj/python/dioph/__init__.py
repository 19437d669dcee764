"""Python front end for the dioph solver engine.

Verdicts come back as plain dicts with the same shape as ``dioph solve --json``.
"""

from __future__ import annotations

import json
import os
from typing import Iterable, Mapping, Optional

from . import _core
from ._core import CorpusError, MalformedInput, ProblemSyntaxError, UnknownDomainName

__all__ = [
    "solve",
    "check_certificate",
    "verify_solutions",
    "run_corpus",
    "normalize",
    "CorpusError",
    "MalformedInput",
    "ProblemSyntaxError",
    "UnknownDomainName",
]


def _int(v):
    # integers beyond 64 bits travel as decimal strings
    return int(v) if isinstance(v, str) else v


def _decode(verdict: dict) -> dict:
    for s in verdict.get("solutions", []):
        s.update({k: _int(v) for k, v in s.items()})
    for t in verdict.get("trace", []):
        for s in t.get("solutions", []):
            s.update({k: _int(v) for k, v in s.items()})
    return verdict


def solve(
    problem: str,
    *,
    max_modulus: Optional[int] = None,
    box: Optional[tuple[int, int]] = None,
    probe_budget: Optional[int] = None,
    enum_budget: Optional[int] = None,
    timeout_ms: Optional[int] = None,
    trace: bool = False,
) -> dict:
    """Solve an equation or system, e.g. ``solve("x^2 + y^2 = 25 ; x,y in N")``."""
    text = _core.solve_json(
        problem,
        max_modulus=max_modulus,
        box=None if box is None else f"{box[0]}..{box[1]}",
        probe_budget=probe_budget,
        enum_budget=enum_budget,
        timeout_ms=timeout_ms,
        trace=trace,
    )
    return _decode(json.loads(text))


def check_certificate(problem: str, certificate: Mapping) -> tuple[bool, str]:
    """Re-check a certificate (or a whole no_solution verdict) against the problem."""
    return _core.check_certificate_json(problem, json.dumps(certificate))


def verify_solutions(
    problem: str, solutions: Iterable[Mapping[str, int]] = (), families: Iterable[Mapping] = ()
) -> tuple[bool, list[str]]:
    """Substitute assignments and sampled family members into the problem."""
    sols = [{k: (v if -(2**63) <= v < 2**63 else str(v)) for k, v in s.items()} for s in solutions]
    return _core.verify_solutions_json(problem, json.dumps(sols), json.dumps(list(families)))


def run_corpus(source: str, jobs: int = 1) -> dict:
    """Run a corpus given as a file path or as TOML text."""
    text = source
    if "\n" not in source and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(_core.run_corpus_json(text, jobs))


def normalize(problem: str) -> str:
    """Canonical rendering of a parsed problem."""
    return _core.normalize(problem)
