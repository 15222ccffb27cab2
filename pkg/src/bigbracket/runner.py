"""Scheduling identity checks over definitions and assembling reports."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Iterable

from .catalog import Example, builtin_examples
from .fileformat import SetupDefinition, TaskSpec, emit_definition, parse_definition
from .hierarchy import IDENTITIES, Bounds, Harness, verify_identity

__all__ = ["example_definition", "builtin_definitions", "expand_tasks", "run_definitions"]


def example_definition(ex: Example, tasks: Iterable[str] = ("all",)) -> SetupDefinition:
    return SetupDefinition(
        ex.name,
        ex.signature,
        ex.theta.theta,
        dict(ex.tensors),
        {k: v for k, v in ex.roles.items() if v is not None},
        [TaskSpec(t) for t in tasks],
    )


def builtin_definitions() -> list[SetupDefinition]:
    return [example_definition(ex) for ex in builtin_examples()]


def expand_tasks(defn: SetupDefinition) -> list[TaskSpec]:
    out = []
    for t in defn.tasks:
        if t.identity_id == "all":
            out += [TaskSpec(tid, dict(t.params), dict(t.roles)) for tid in IDENTITIES]
        else:
            out.append(t)
    return out


_CACHE: dict = {}


def _harness(text: str, defn: SetupDefinition, task: TaskSpec, bounds: Bounds) -> Harness:
    I, J = defn.tensor_for(task, "I"), defn.tensor_for(task, "J")
    key = (text, task.roles.get("I", defn.roles.get("I")), task.roles.get("J", defn.roles.get("J")), bounds)
    h = _CACHE.get(key)
    if h is None:
        if len(_CACHE) > 64:
            _CACHE.clear()
        h = Harness(defn.theta, I, J, name=defn.name, bounds=bounds)
        _CACHE[key] = h
    return h


def _run_one(job) -> dict:
    text, index, bounds = job
    defn = parse_definition(text)
    task = expand_tasks(defn)[index]
    h = _harness(text, defn, task, bounds)
    rep = verify_identity(task.identity_id, None, harness=h, fixed=task.params)
    out = rep.as_dict()
    if task.params:
        out["params"] = dict(sorted(task.params.items()))
    return out


def run_definitions(defns: list, bounds: Bounds = Bounds(), jobs: int = 1) -> dict:
    """Run every task of every definition; the report does not depend on ``jobs``."""
    work = []
    for defn in defns:
        text = emit_definition(defn)
        work += [(text, i, bounds) for i in range(len(expand_tasks(defn)))]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_run_one(w) for w in work]
    summary = {"passed": 0, "failed": 0, "not-applicable": 0}
    for r in results:
        summary[r["status"]] += 1
    summary["total"] = len(results)
    return {
        "setup": {
            "bounds": {"max_k": bounds.max_k, "max_n": bounds.max_n, "experimental": bounds.experimental},
            "instances": [d.echo() for d in defns],
        },
        "tasks": results,
        "summary": summary,
        "not_applicable": [f"{r['id']} {r['instance']}: {'; '.join(r['notes'][-1:])}" for r in results if r["status"] == "not-applicable"],
    }
