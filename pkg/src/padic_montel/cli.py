"""Batch front-end.

A task file is YAML::

    prime: 3
    precision: 64
    polynomial: ["0", "0", "3"]       # a_0 .. a_d, quoted rationals
    tasks:
      - {type: green, point: "1/3", epsilon: "1/1000000"}
      - {type: orbit, disk: {center: "1", radius_exp: "-1"}, budget: 10}
      - {type: certify, disk: {center: "1", radius_exp: "-1"}, alpha: "0", budget: 10}
      - {type: probe, disk: {center: "1", radius_exp: "-1"}, samples: 20, kmax: 20}

Exit status: 0 when every task succeeds, 1 when some task failed (its error
is embedded in the result document), 2 on a malformed task file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import yaml

from .disks import UltraDisk, orbit_disks
from .errors import PadicError, PrecisionExhausted
from .green import DEFAULT_EPSILON, display_decimal, green_value
from .montel import (
    CERTIFIED,
    DEFAULT_BUDGET,
    REFUTED,
    certify,
    equicontinuity_probe,
    norm_invariance_probe,
    verify_certificate,
)
from .padic import DEFAULT_PRECISION, embed, format_rational, is_prime, parse_rational
from .polynomial import Poly

SCHEMA = 1

TASK_FIELDS = {
    "green": {"point": True, "epsilon": False},
    "orbit": {"disk": True, "budget": False},
    "certify": {"disk": True, "alpha": False, "budget": False},
    "probe": {"disk": True, "samples": False, "kmax": False, "seed": False, "budget": False},
}

VERDICTS = {
    CERTIFIED: "every forward image avoids the omitted point: equicontinuous on this disk",
    REFUTED: "hypothesis fails on this disk",
    "inconclusive": "no verdict within the iteration budget",
}


class TaskFileError(ValueError):
    def __init__(self, message, line=None, path=""):
        super().__init__(message)
        self.line = line
        self.path = path

    def render(self, filename):
        where = filename if self.line is None else f"{filename}:{self.line}"
        field = f" {self.path}:" if self.path else ""
        return f"{where}:{field} {self}"


def _line_map(node, path=(), out=None):
    """Map key paths to 1-based source lines."""
    if out is None:
        out = {}
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            _line_map(value, path + (key.value,), out)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            _line_map(item, path + (i,), out)
    return out


def _path_str(path):
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out


class _Reader:
    def __init__(self, lines):
        self.lines = lines

    def fail(self, path, message):
        line = None
        for cut in range(len(path), -1, -1):
            if path[:cut] in self.lines:
                line = self.lines[path[:cut]]
                break
        raise TaskFileError(message, line, _path_str(path))

    def rational(self, value, path):
        if not isinstance(value, str):
            self.fail(path, f"rationals must be quoted strings, got {value!r}")
        try:
            return parse_rational(value)
        except ValueError as exc:
            self.fail(path, str(exc))

    def count(self, value, path, minimum):
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            self.fail(path, f"expected an integer >= {minimum}, got {value!r}")
        return value

    def disk(self, value, path, prime):
        if not isinstance(value, dict) or set(value) != {"center", "radius_exp"}:
            self.fail(path, "disk must be {center: \"a/b\", radius_exp: \"q\"}")
        center = self.rational(value["center"], path + ("center",))
        radius = self.rational(value["radius_exp"], path + ("radius_exp",))
        return {"center": format_rational(center), "radius_exp": format_rational(radius)}, UltraDisk.make(prime, center, radius)


def load_task_file(text: str) -> dict:
    """Parse and validate; returns a normalized, JSON-ready description."""
    try:
        data = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise TaskFileError(f"invalid YAML: {getattr(exc, 'problem', exc)}", None if mark is None else mark.line + 1)
    rd = _Reader(_line_map(root) if root is not None else {})
    if not isinstance(data, dict):
        rd.fail((), "task file must be a mapping")
    unknown = set(data) - {"prime", "precision", "polynomial", "tasks"}
    if unknown:
        rd.fail((sorted(unknown)[0],), "unknown key")
    if "prime" not in data:
        rd.fail((), "missing 'prime'")
    p = rd.count(data["prime"], ("prime",), 2)
    if not is_prime(p):
        rd.fail(("prime",), f"{p} is not prime")
    n = rd.count(data.get("precision", DEFAULT_PRECISION), ("precision",), 1)
    coeffs = data.get("polynomial")
    if not isinstance(coeffs, list) or not coeffs:
        rd.fail(("polynomial",), "polynomial must be a non-empty list of rational strings")
    parsed = [rd.rational(c, ("polynomial", i)) for i, c in enumerate(coeffs)]
    poly = Poly(p, tuple(parsed)) if any(parsed) else None
    if poly is None or poly.degree < 2:
        rd.fail(("polynomial",), "polynomial must have degree at least 2")
    tasks = data.get("tasks")
    if not tasks:
        rd.fail(("tasks",), "no tasks")
    if not isinstance(tasks, list):
        rd.fail(("tasks",), "tasks must be a list")
    return {
        "prime": p,
        "precision": n,
        "polynomial": poly.to_json(),
        "tasks": [_task(rd, t, ("tasks", i), p) for i, t in enumerate(tasks)],
    }


def _task(rd: _Reader, task, path, p) -> dict:
    if not isinstance(task, dict) or task.get("type") not in TASK_FIELDS:
        rd.fail(path, f"task needs a type among {sorted(TASK_FIELDS)}")
    kind = task["type"]
    fields = TASK_FIELDS[kind]
    for key in task:
        if key != "type" and key not in fields:
            rd.fail(path + (key,), f"unknown field for {kind} task")
    for key, required in fields.items():
        if required and key not in task:
            rd.fail(path, f"{kind} task needs '{key}'")
    out = {"type": kind}
    if kind == "green":
        out["point"] = format_rational(rd.rational(task["point"], path + ("point",)))
        eps = rd.rational(task.get("epsilon", format_rational(DEFAULT_EPSILON)), path + ("epsilon",))
        if eps <= 0:
            rd.fail(path + ("epsilon",), "epsilon must be positive")
        out["epsilon"] = format_rational(eps)
        return out
    out["disk"], disk = rd.disk(task["disk"], path + ("disk",), p)
    default_budget = 10 if kind == "orbit" else DEFAULT_BUDGET
    out["budget"] = rd.count(task.get("budget", default_budget), path + ("budget",), 1)
    if kind == "certify":
        out["alpha"] = format_rational(rd.rational(task.get("alpha", "0"), path + ("alpha",)))
    if kind == "probe":
        out["samples"] = rd.count(task.get("samples", 20), path + ("samples",), 1)
        out["kmax"] = rd.count(task.get("kmax", 20), path + ("kmax",), 0)
        out["seed"] = rd.count(task.get("seed", 0), path + ("seed",), 0)
    return out


def _green_task(f: Poly, task: dict, n: int) -> dict:
    z = embed(parse_rational(task["point"]), f.prime, n)
    g = green_value(f, z, parse_rational(task["epsilon"]))
    return {
        "value": g.to_json(),
        "display": {
            "lo": display_decimal(g.lo, f.prime),
            "hi": display_decimal(g.hi, f.prime),
            "note": "display only: coefficient times ln p, 12 significant digits",
        },
    }


def _orbit_task(f: Poly, task: dict, n: int) -> dict:
    orbit = orbit_disks(f, UltraDisk.from_json(task["disk"], f.prime), task["budget"])
    event = orbit.final_event
    return {"outcome": "budget_exhausted" if event is None else event.kind, "orbit": orbit.to_json()}


def _certify_task(f: Poly, task: dict, n: int) -> dict:
    cert = certify(f, UltraDisk.from_json(task["disk"], f.prime), parse_rational(task["alpha"]), task["budget"])
    return {
        "status": cert.status,
        "rule": cert.rule,
        "witness": None if cert.witness is None else list(cert.witness),
        "verdict": VERDICTS[cert.status],
        "verified": verify_certificate(cert, f),
        "certificate": cert.to_json(),
    }


def _probe_task(f: Poly, task: dict, n: int) -> dict:
    disk = UltraDisk.from_json(task["disk"], f.prime)
    cert = certify(f, disk, 0, task["budget"])
    out = {"certificate_status": cert.status}
    if cert.certified:
        out["norm_invariance"] = norm_invariance_probe(
            f, disk, cert, task["samples"], task["kmax"], task["seed"], n
        ).to_json()
    out["equicontinuity"] = equicontinuity_probe(
        f, disk, task["samples"], task["kmax"], task["seed"], cert if cert.certified else None, n
    ).to_json()
    return out


RUNNERS = {"green": _green_task, "orbit": _orbit_task, "certify": _certify_task, "probe": _probe_task}


def run_task(args) -> tuple:
    """Execute one task; returns (result entry, elapsed seconds)."""
    prime, precision, coeffs, task, retry = args
    f = Poly.parse(coeffs, prime)
    start = time.perf_counter()
    entry = {"task": task}
    n = precision
    while True:
        try:
            entry["result"] = RUNNERS[task["type"]](f, task, n)
            entry["status"] = "ok"
            break
        except PrecisionExhausted as exc:
            if retry and n == precision:
                n = 4 * precision
                continue
            entry["status"] = "error"
            entry["error"] = {"type": type(exc).__name__, "message": str(exc), "index": exc.index}
            break
        except PadicError as exc:
            entry["status"] = "error"
            entry["error"] = {"type": type(exc).__name__, "message": str(exc)}
            break
    if n != precision:
        entry["precision_used"] = n
    return entry, time.perf_counter() - start


def run(plan: dict, jobs: int = 1, retry: bool = False, timing: bool = True) -> dict:
    payloads = [(plan["prime"], plan["precision"], plan["polynomial"], t, retry) for t in plan["tasks"]]
    start = time.perf_counter()
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_task, payloads))
    else:
        outcomes = [run_task(pl) for pl in payloads]
    doc = {
        "schema": SCHEMA,
        "input": plan,
        "results": [dict(entry, index=i) for i, (entry, _) in enumerate(outcomes)],
    }
    if timing:
        doc["timing"] = {
            "total_seconds": round(time.perf_counter() - start, 6),
            "task_seconds": [round(t, 6) for _, t in outcomes],
        }
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="padic-montel", description="Green functions and Montel certificates over Q_p.")
    parser.add_argument("task_file")
    parser.add_argument("--out", help="result document path (default: standard output)")
    parser.add_argument("--jobs", type=int, default=1, help="run tasks concurrently")
    parser.add_argument("--retry-precision", action="store_true", help="retry a task once at 4x precision on cancellation")
    parser.add_argument("--no-timing", action="store_true", help="omit the timing block")
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        with open(args.task_file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"{args.task_file}: {exc.strerror}", file=sys.stderr)
        return 2
    try:
        plan = load_task_file(text)
    except TaskFileError as exc:
        print(exc.render(args.task_file), file=sys.stderr)
        return 2
    doc = run(plan, args.jobs, args.retry_precision, not args.no_timing)
    out = dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 1 if any(r["status"] == "error" for r in doc["results"]) else 0


if __name__ == "__main__":
    sys.exit(main())
