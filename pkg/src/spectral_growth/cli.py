"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 enumeration cap hit, 4 result
emitted but a certificate is unavailable.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import kernels as K
from . import reconstruct as RC
from . import relative as R
from .groups import ResourceLimitError, ball_enumerate
from .parsing import GrammarError, parse_group, parse_inclusion, parse_kernel
from .report import dumps, profile_csv
from .spectral import (
    CertificateError,
    classify,
    growth_profile,
    omega_estimate,
    partition_function,
    spectrum_from_kernel,
)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, EXIT_CERTIFICATE = 0, 2, 3, 4

DEFAULT_CUTOFF_GRID = (0.0, 1.0, 2.0, 5.0, 10.0)


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in str(text).split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in str(text).split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# name -> (type, default, help)
OPTIONS: dict[str, tuple[Callable, object, str]] = {
    "group": (str, None, "group spec, e.g. free(2), zd(2), product(zd(1), cyclic(3))"),
    "kernel": (str, "wordlength", "kernel spec, e.g. wordlength, l2sq, pullback(coord(1), wordlength)"),
    "inclusion": (str, "trivial", "subgroup spec: trivial, full, axis(i), cyclic-free(a)"),
    "n": (int, 3, "ball radius"),
    "radius": (int, 3, "ball radius for Gram-matrix checks"),
    "Lambda": (float, None, "spectral cutoff"),
    "N": (int, None, "counting-function depth"),
    "t": (_float_list, K.DEFAULT_T_GRID, "comma-separated t values"),
    "depth": (int, 60, "bins summed explicitly from an exact tail model"),
    "max_radius": (int, 32, "largest ball radius explored"),
    "tol": (float, 1e-9, "eigenvalue tolerance"),
    "probe_radius": (int, 1, "quotient ball radius for quasi-normality probes"),
    "horizons": (_int_list, (1, 2, 3), "comma-separated horizons for orbit counts"),
    "K": (int, RC.DEFAULT_DEPTH, "reconstruction truncation depth"),
    "format": (str, "json", "json or csv"),
    "output": (str, None, "output path (default stdout)"),
}

COMMON = ("group", "kernel", "max_radius", "tol", "format", "output")
SPECTRAL = ("Lambda", "N", "t", "depth")
COMMANDS: dict[str, tuple[str, ...]] = {
    "ball": ("group", "n", "format", "output"),
    "cnd-check": COMMON + ("radius", "t"),
    "spectrum": COMMON + SPECTRAL,
    "growth": COMMON + SPECTRAL,
    "partition": COMMON + SPECTRAL,
    "classify": COMMON + SPECTRAL,
    "relative": COMMON + SPECTRAL + ("inclusion", "radius", "probe_radius", "horizons"),
    "reconstruct": COMMON + ("inclusion", "K", "N", "radius", "t"),
}


@dataclass
class JobSpec:
    command: str
    params: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.params[key]

    @property
    def fmt(self) -> str:
        return self.params.get("format", "json")


class JobError(ValueError):
    """Bad job parameters (exit code 2)."""


def read_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise JobError(f"{path}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-growth", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, names in COMMANDS.items():
        p = sub.add_parser(command)
        p.add_argument("--config", default=argparse.SUPPRESS, help="flat key = value file; flags override it")
        for name in names:
            typ, default, help_ = OPTIONS[name]
            flags = [f"--{name}", f"--{name.replace('_', '-')}"] if "_" in name else [f"--{name}"]
            if name == "Lambda":
                flags.append("--cutoff")
            p.add_argument(*flags, dest=name, type=typ, default=argparse.SUPPRESS, help=f"{help_} (default {default})")
    return parser


def parse_job(argv: Sequence[str]) -> tuple[JobSpec, bool]:
    args = vars(build_parser().parse_args(list(argv)))
    command = args.pop("command")
    verbose = args.pop("verbose", False)
    allowed = COMMANDS[command]
    params = {name: OPTIONS[name][1] for name in allowed}
    if "config" in args:
        config = read_config(args.pop("config"))
        unknown = sorted(set(config) - set(allowed))
        if unknown:
            raise JobError(f"unknown config key(s) for {command}: {', '.join(unknown)}")
        for key, raw in config.items():
            try:
                params[key] = OPTIONS[key][0](raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise JobError(f"config key {key}: {exc}") from None
    params.update(args)
    if params.get("group") is None:
        raise JobError("--group is required")
    if params.get("format") not in ("json", "csv"):
        raise JobError("--format must be json or csv")
    return JobSpec(command, params), verbose


# ------------------------------------------------------------ pipelines


def _spectral_block(spec, depth, kernel_tail, ts, extra_depth):
    out = {
        "cutoff": spec.cutoff,
        "complete": spec.complete,
        "exhaustive": spec.exhaustive,
        "entries": [[lam, m] for lam, m in spec.entries],
    }
    profile = growth_profile(spec, depth)
    requested = [partition_function(spec, t, kernel_tail, extra_depth) for t in ts]
    grid = [partition_function(spec, t, kernel_tail, extra_depth) for t in K.DEFAULT_T_GRID]
    cls = classify(profile, grid)
    out.update(
        beta=list(profile.beta),
        gamma=list(profile.gamma),
        omega={"root": profile.omega_root, "ratio": profile.omega_ratio},
        spectral_dimension=profile.spectral_dimension_seq,
        omega_estimate=omega_estimate(profile).to_dict() if len(profile.beta) >= 4 else None,
        partitions=[p.to_dict() for p in requested],
        classification=cls.to_dict(),
        lower_bound_only=not profile.certified,
    )
    return out, profile


def _depth_for(job: JobSpec) -> tuple[float, int]:
    cutoff, depth = job["Lambda"], job["N"]
    if cutoff is None:
        cutoff = float(depth) if depth is not None else 10.0
    if depth is None:
        depth = int(math.floor(cutoff))
    return cutoff, depth


def run_ball(job: JobSpec):
    model = parse_group(job["group"])
    ball = ball_enumerate(model, job["n"])
    report = {
        "command": "ball",
        "group": model.spec,
        "radius": ball.radius,
        "count": len(ball),
        "sphere_sizes": list(ball.sphere_sizes),
        "exhaustive": ball.exhaustive,
        "elements": [model.format(g) for g in ball.elements] if len(ball) <= 10_000 else None,
    }
    rows, acc = [], 0
    for n, s in enumerate(ball.sphere_sizes):
        acc += s
        rows.append({"n": n, "sphere_size": s, "count": acc})
    return report, rows, ("n", "sphere_size", "count"), EXIT_OK


def run_cnd(job: JobSpec):
    model = parse_group(job["group"])
    kernel = parse_kernel(job["kernel"], model)
    sch = K.schoenberg_check(model, kernel, job["radius"], job["t"], job["tol"])
    direct = K.direct_cnd_check(model, kernel, job["radius"], job["tol"])
    report = {
        "command": "cnd-check",
        "group": model.spec,
        "kernel": job["kernel"],
        "schoenberg": sch.to_dict(),
        "direct": direct.to_dict(),
        "certificates": {"grid_evidence_only": True},
    }
    return report, None, None, EXIT_OK


def run_spectral(job: JobSpec):
    model = parse_group(job["group"])
    kernel = parse_kernel(job["kernel"], model)
    cutoff, depth = _depth_for(job)
    spec = spectrum_from_kernel(model, kernel, cutoff, job["max_radius"])
    block, profile = _spectral_block(spec, depth, kernel.tail, job["t"], job["depth"])
    report = {
        "command": job.command,
        "group": model.spec,
        "kernel": job["kernel"],
        "tail_model": kernel.tail.to_dict() if kernel.tail else None,
        **block,
        "certificates": {
            "complete": spec.complete,
            "lower_bound_only": not spec.complete,
            "finite_horizon_estimate": True,
        },
    }
    code = EXIT_OK if spec.complete else EXIT_CERTIFICATE
    return report, profile.rows(), None, code


def run_relative(job: JobSpec):
    model = parse_group(job["group"])
    kernel = parse_kernel(job["kernel"], model)
    cosets = parse_inclusion(job["inclusion"], model)
    cutoff, depth = _depth_for(job)
    invariance = R.h_invariance_check(cosets, kernel, job["radius"], job["tol"])
    cutoffs = sorted({c for c in DEFAULT_CUTOFF_GRID if c <= cutoff} | {cutoff})
    properness = [R.quotient_properness(cosets, kernel, c, job["max_radius"]) for c in cutoffs]
    qn = R.quasi_normality(cosets, job["probe_radius"], job["horizons"])
    relspec = R.relative_spectrum(cosets, kernel, cutoff, job["max_radius"])
    tail = R.relative_tail(cosets, kernel)
    block, profile = _spectral_block(relspec, depth, tail, job["t"], job["depth"])
    grid = [R.relative_partition(relspec, t, tail, job["depth"]) for t in K.DEFAULT_T_GRID]
    satisfied = invariance.passed and R.criterion_satisfied(properness, grid)
    report = {
        "command": "relative",
        "group": model.spec,
        "kernel": job["kernel"],
        "inclusion": cosets.label,
        "invariance": invariance.to_dict(),
        "properness": [p.to_dict() for p in properness],
        "quasi_normality": qn.to_dict(),
        "relative_entries": [[lam, m] for lam, m in relspec.entries],
        **block,
        "criterion": R.CRITERION_LABEL if satisfied else None,
        "certificates": {
            "complete": relspec.complete,
            "properness_certified": all(p.complete for p in properness),
            "invariance": invariance.passed,
            "horizon_bounded": True,
            "grid_evidence_only": True,
        },
    }
    ok = relspec.complete and invariance.passed and all(p.complete for p in properness)
    return report, profile.rows(), None, EXIT_OK if ok else EXIT_CERTIFICATE


def run_reconstruct(job: JobSpec):
    model = parse_group(job["group"])
    kernel = parse_kernel(job["kernel"], model)
    cosets = parse_inclusion(job["inclusion"], model)
    depth = job["K"]
    levels = job["N"] if job["N"] is not None else 4
    schedule = RC.epsilon_schedule(model, kernel, depth)
    rk = RC.reconstruct(model, kernel, schedule, depth)
    sch = K.schoenberg_check(model, rk.as_kernel(), job["radius"], job["t"], job["tol"])
    code = EXIT_OK
    try:
        audit = RC.properness_audit(rk, cosets, levels, max_radius=max(job["max_radius"], 4096))
        audit_dict = audit.to_dict()
        gamma_sizes = list(audit.gamma_sizes)
    except CertificateError as exc:
        log.warning("%s", exc)
        audit_dict, gamma_sizes, code = None, None, EXIT_CERTIFICATE
    report = {
        "command": "reconstruct",
        "group": model.spec,
        "kernel": job["kernel"],
        "inclusion": cosets.label,
        "K": depth,
        "schedule": schedule.to_list(),
        "gamma_sets": gamma_sizes,
        "audit": audit_dict,
        "schoenberg": sch.to_dict(),
        "certificates": {"properness_certified": audit_dict is not None, "grid_evidence_only": True},
    }
    return report, None, None, code


RUNNERS = {
    "ball": run_ball,
    "cnd-check": run_cnd,
    "spectrum": run_spectral,
    "growth": run_spectral,
    "partition": run_spectral,
    "classify": run_spectral,
    "relative": run_relative,
    "reconstruct": run_reconstruct,
}


def _emit(job: JobSpec, text: str) -> None:
    out = job.params.get("output")
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        job, verbose = parse_job(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_PARSE if exc.code else EXIT_OK
    except (JobError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        report, rows, columns, code = RUNNERS[job.command](job)
    except (GrammarError, JobError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if job.fmt == "csv":
        if rows is None:
            print(f"error: {job.command} has no CSV form", file=sys.stderr)
            return EXIT_PARSE
        text = profile_csv(rows, columns) if columns else profile_csv(rows)
    else:
        text = dumps(report)
    _emit(job, text)
    return code


def main() -> None:
    sys.exit(run())
