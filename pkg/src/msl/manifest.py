"""Manifest-driven experiment runs.

A manifest is a diffable plain-text file of key = value lines: a header
(name, seed, cache_dir, output_dir) followed by ordered `[step <command>]`
sections whose bodies are the command's parameters. Steps execute in order;
sieve tables flow through the block cache; every output file carries the
manifest hash in its header so a run report can be audited afterwards.

All sampled steps draw from a counter-based generator keyed by the manifest
seed and the step index, so a fixed seed reproduces byte-identical outputs.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import ValidationError

STEP_COMMANDS = ("sieve", "typical", "chars", "correlate", "chowla", "hl",
                 "divcorr", "arcs", "vino", "fint", "mvp", "pretend", "plotdata")


@dataclass(frozen=True)
class ManifestStep:
    command: str
    params: dict[str, str]


@dataclass(frozen=True)
class ExperimentManifest:
    name: str
    seed: int
    cache_dir: Path
    output_dir: Path
    steps: tuple[ManifestStep, ...]
    text_hash: str


def manifest_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def parse_manifest(path: Path | str) -> ExperimentManifest:
    path = Path(path)
    text = path.read_text()
    header: dict[str, str] = {}
    steps: list[ManifestStep] = []
    current: dict[str, str] | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            inner = line[1:-1].strip()
            parts = inner.split(None, 1)
            if len(parts) != 2 or parts[0] != "step":
                raise ValidationError(f"{path}:{lineno}: expected [step <command>]")
            cmd = parts[1].strip()
            if cmd not in STEP_COMMANDS:
                raise ValidationError(f"{path}:{lineno}: unknown step command {cmd!r}")
            current = {}
            steps.append(ManifestStep(cmd, current))
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if current is None:
            header[key] = value
        else:
            current[key] = value
    name = header.get("name", path.stem)
    try:
        seed = int(header.get("seed", "0"))
    except ValueError:
        raise ValidationError(f"{path}: seed must be an integer") from None
    base = path.parent
    cache_dir = Path(header.get("cache_dir", base / "cache"))
    output_dir = Path(header.get("output_dir", base / "out"))
    if not cache_dir.is_absolute():
        cache_dir = base / cache_dir
    if not output_dir.is_absolute():
        output_dir = base / output_dir
    return ExperimentManifest(name, seed, cache_dir, output_dir,
                              tuple(ManifestStep(s.command, dict(s.params)) for s in steps),
                              manifest_hash(text))


@dataclass
class RunContext:
    """Everything a step needs to run: directories, seed, output labeling."""

    cache_dir: Path | None
    output_dir: Path
    seed: int = 0
    step_index: int = 0
    run_hash: str | None = None
    outputs: list[Path] = field(default_factory=list)

    def rng(self):
        import numpy as np
        return np.random.Generator(np.random.Philox(key=self.seed,
                                                    counter=[0, 0, 0, self.step_index]))

    def header_lines(self) -> list[str]:
        tag = self.run_hash if self.run_hash is not None else "standalone"
        return [f"# manifest {tag}", f"# msl {__version__}"]

    def out_path(self, default_name: str, override: str | None = None) -> Path:
        name = override if override else default_name
        p = Path(name)
        if not p.is_absolute():
            p = self.output_dir / p
        p.parent.mkdir(parents=True, exist_ok=True)
        self.outputs.append(p)
        return p

    def write_json(self, path: Path, payload: dict) -> None:
        doc = {"_manifest": self.run_hash or "standalone", "_tool": f"msl {__version__}"}
        doc.update(payload)
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    def write_rows(self, path: Path, columns: list[str], rows) -> None:
        lines = self.header_lines() + [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass(frozen=True)
class RunReport:
    manifest_hash: str
    name: str
    tool_version: str
    steps: tuple[dict, ...]

    def verify_outputs(self) -> list[str]:
        """Check that referenced outputs exist and carry the manifest hash."""
        problems = []
        for step in self.steps:
            for out in step["outputs"]:
                p = Path(out)
                if not p.exists():
                    problems.append(f"missing output {p}")
                    continue
                head = p.read_text()[:4096]
                if self.manifest_hash not in head:
                    problems.append(f"{p} does not carry manifest hash")
        return problems


def run_manifest(manifest: ExperimentManifest,
                 cache_dir_override: Path | None = None) -> RunReport:
    """Execute the manifest's steps in order and write runreport.json.

    Sieve blocks are reused through the block cache (checksummed; corrupt
    blocks are resieved). Step randomness is derived from (seed, step index).
    """
    from . import cli  # step implementations live next to the CLI

    cache_dir = Path(cache_dir_override) if cache_dir_override else manifest.cache_dir
    cache_dir.mkdir(parents=True, exist_ok=True)
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    report_path = manifest.output_dir / "runreport.json"

    def flush(steps_done):
        # written after every step: later steps (plotdata) and interrupted
        # runs both get a usable partial report
        report_path.write_text(json.dumps({
            "manifest_hash": manifest.text_hash,
            "name": manifest.name,
            "tool_version": __version__,
            "steps": steps_done,
        }, indent=2, sort_keys=True) + "\n")

    steps_out = []
    flush(steps_out)
    for i, step in enumerate(manifest.steps):
        ctx = RunContext(cache_dir=cache_dir, output_dir=manifest.output_dir,
                         seed=manifest.seed, step_index=i, run_hash=manifest.text_hash)
        t0 = time.perf_counter()
        cli.run_step(step.command, dict(step.params), ctx)
        steps_out.append({
            "command": step.command,
            "params": dict(step.params),
            "outputs": [str(p) for p in ctx.outputs],
            "seconds": round(time.perf_counter() - t0, 6),
        })
        flush(steps_out)
    return RunReport(manifest.text_hash, manifest.name, __version__, tuple(steps_out))


def load_run_report(path: Path | str) -> RunReport:
    doc = json.loads(Path(path).read_text())
    return RunReport(doc["manifest_hash"], doc["name"], doc["tool_version"],
                     tuple(doc["steps"]))


def emit_plotdata(report: RunReport, kind: str, out_path: Path | str,
                  eps_list: list[float] | None = None) -> Path:
    """Write labeled plain-text plot data extracted from a run's outputs.

    corr-decay: one (H, aggregate) row per correlate step, sorted by H.
    exceptional-fraction: (epsilon, fraction of shifts with |C(h)| above
    epsilon * normalizer) from the last correlate step; nonincreasing in
    epsilon by construction.
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# manifest {report.manifest_hash}", f"# msl {report.tool_version}"]
    if kind == "corr-decay":
        rows = []
        for step in report.steps:
            if step["command"] != "correlate":
                continue
            summary = _find_summary(step)
            if summary is not None:
                rows.append((summary["H"], summary["aggregate"]))
        rows.sort()
        lines.append("# columns: H, aggregate   (aggregate = sum_h |C(h)| / (H * normalizer))")
        for H, agg in rows:
            lines.append(f"{H} {agg!r}")
    elif kind == "exceptional-fraction":
        eps_list = eps_list or [0.0, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.5, 1.0]
        lines.append("# columns: epsilon, exceptional_fraction   (|C(h)| > eps * normalizer)")
        last = None
        for step in report.steps:
            if step["command"] == "correlate":
                last = step
        if last is not None:
            summary = _find_summary(last)
            csv_path = next((o for o in last["outputs"] if o.endswith(".csv")), None)
            if summary is None or csv_path is None:
                raise ValidationError("correlate step lacks summary/csv outputs")
            import numpy as np
            C = np.array([float(l.split(",")[1]) for l in
                          Path(csv_path).read_text().splitlines()
                          if l and not l.startswith(("#", "h,"))])
            norm = summary["normalizer"]
            for eps in sorted(eps_list):
                frac = float(np.mean(np.abs(C) > eps * norm))
                lines.append(f"{eps!r} {frac!r}")
    else:
        raise ValidationError(f"unknown plotdata kind {kind!r}")
    out_path.write_text("\n".join(lines) + "\n")
    return out_path


def _find_summary(step: dict) -> dict | None:
    for out in step["outputs"]:
        if out.endswith(".json"):
            return json.loads(Path(out).read_text())
    return None
