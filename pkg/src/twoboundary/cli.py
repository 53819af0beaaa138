"""Command-line entry point.

    twoboundary <subcommand> --config FILE [--output FILE] [--seed N]
                [--workers N] [--format csv|table|ascii]

Exit codes: 0 success, 1 config or validation error, 2 runtime error
(e.g. an undefined weak value).  Data goes to the output file or stdout;
diagnostics go to stderr.  Output files are written to a temporary file
and renamed, so a failed run never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import interference, laser, tsvf, walk
from .config import ConfigDocument, parse_config
from .errors import ComputationError, ConfigError, InputError, TwoBoundaryError
from .render import FORMATS, Table, render

log = logging.getLogger("twoboundary")

WALK_KEYS = ("width", "horizon", "epsilon", "initial_x", "initial_v", "final_x", "final_v")
KEYS = {
    "walk": WALK_KEYS + ("tries", "seed", "workers"),
    "walk-exact": WALK_KEYS + ("tries", "seed", "workers"),
    "abl": ("pre", "post", "observable", "evolution", "measurement_index", "split_index"),
    "weak": ("pre", "post", "observable", "evolution", "measurement_index"),
    "hbt": ("phase", "mode"),
    "splitter": ("phi1", "phi2"),
    "slit": ("source", "detector", "slit_a_center", "slit_b_center", "slit_a_width",
             "slit_b_width", "wave_number", "method"),
    "laser": ("n2", "n1", "w", "kappa", "n0", "t_end", "dt"),
    "born-recovery": ("pre", "observable", "samples", "seed"),
}
SUBCOMMANDS = tuple(KEYS)
WORKERS_ENV = "TWOBOUNDARY_WORKERS"


@dataclass(frozen=True)
class RunSpec:
    subcommand: str
    config_path: str
    output_path: str | None = None
    seed: int | None = None
    workers: int | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.subcommand not in KEYS:
            raise InputError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in FORMATS:
            raise InputError(f"unknown format {self.format!r}")
        if not os.path.isfile(self.config_path):
            raise InputError(f"config file not found: {self.config_path}")


# ---------------------------------------------------------------------------
# Config -> domain objects
# ---------------------------------------------------------------------------

def _int(doc: ConfigDocument, key: str, default=None) -> int:
    v = doc.get(key, default) if default is not None else doc.require(key)
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
        raise ConfigError(f"'{key}' must be an integer, got {v!r}", doc.line_of(key))
    return int(v)


def _real(doc: ConfigDocument, key: str, default=None) -> float:
    v = doc.get(key, default) if default is not None else doc.require(key)
    if isinstance(v, complex):
        if v.imag != 0:
            raise ConfigError(f"'{key}' must be real, got {v!r}", doc.line_of(key))
        v = v.real
    if not isinstance(v, (int, float)):
        raise ConfigError(f"'{key}' must be a number, got {v!r}", doc.line_of(key))
    return float(v)


def _array(doc: ConfigDocument, key: str, ndim: int) -> np.ndarray:
    v = doc.require(key)
    try:
        arr = np.array(v, dtype=complex)
    except (TypeError, ValueError):
        raise ConfigError(f"'{key}' must be a numeric array", doc.line_of(key)) from None
    if arr.ndim != ndim:
        raise ConfigError(f"'{key}' must have {ndim} bracket level(s), got {arr.ndim}", doc.line_of(key))
    return arr


def walk_config(doc: ConfigDocument) -> walk.WalkConfig:
    defaults = walk.WalkConfig()
    return walk.WalkConfig(
        width=_int(doc, "width", defaults.width),
        horizon=_int(doc, "horizon", defaults.horizon),
        epsilon=_real(doc, "epsilon", defaults.epsilon),
        initial_x=_int(doc, "initial_x", defaults.initial_x),
        initial_v=_int(doc, "initial_v", defaults.initial_v),
        final_x=_int(doc, "final_x", defaults.final_x),
        final_v=_int(doc, "final_v", defaults.final_v),
    )


def scenario(doc: ConfigDocument) -> tsvf.TwoStateScenario:
    steps = ()
    if "evolution" in doc:
        ev = np.array(doc["evolution"], dtype=complex)
        if ev.ndim == 2:
            ev = ev[None]
        if ev.ndim != 3:
            raise ConfigError("'evolution' must be a matrix or a list of matrices", doc.line_of("evolution"))
        steps = tuple(ev)
    return tsvf.TwoStateScenario(
        pre=tsvf.StateVector.normalized(_array(doc, "pre", 1)),
        post=tsvf.StateVector.normalized(_array(doc, "post", 1)),
        observable=_array(doc, "observable", 2),
        evolution_steps=steps,
        measurement_index=_int(doc, "measurement_index", 0),
    )


def slit_geometry(doc: ConfigDocument) -> interference.SlitGeometry:
    def pair(key):
        v = _array(doc, key, 1)
        if v.size != 2 or np.any(v.imag != 0):
            raise ConfigError(f"'{key}' must be a real pair [x, y]", doc.line_of(key))
        return float(v[0].real), float(v[1].real)

    return interference.SlitGeometry(
        source=pair("source"),
        detector=pair("detector"),
        slit_a_center=_real(doc, "slit_a_center"),
        slit_b_center=_real(doc, "slit_b_center"),
        slit_a_width=_real(doc, "slit_a_width"),
        slit_b_width=_real(doc, "slit_b_width"),
        wave_number=_real(doc, "wave_number"),
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _resolve_workers(spec: RunSpec, doc: ConfigDocument) -> int:
    if spec.workers is not None:
        return spec.workers
    if "workers" in doc:
        return _int(doc, "workers")
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return 1


def _quantities(pairs) -> Table:
    return Table(("quantity", "value"), [(k, v) for k, v in pairs])


def _run(spec: RunSpec, doc: ConfigDocument):
    cmd = spec.subcommand
    if cmd == "walk":
        cfg = walk_config(doc)
        seed = spec.seed if spec.seed is not None else _int(doc, "seed", 0)
        profile = walk.run_ensemble(cfg, _int(doc, "tries", 100000), seed, _resolve_workers(spec, doc))
        log.info("accepted %d of %d tries (rate %.6g)", profile.accepted, profile.tries,
                 profile.acceptance_rate)
        return profile
    if cmd == "walk-exact":
        exact = walk.exact_conditioned_density(walk_config(doc))
        log.info("total path weight (acceptance probability) %.12g", exact.total_weight)
        return exact
    if cmd == "abl":
        sc = scenario(doc)
        basis = tsvf.eigendecompose(sc.observable)
        if "split_index" in doc:
            probs = tsvf.match_time_invariance(sc, _int(doc, "split_index"))
        else:
            probs = tsvf.abl_probability(sc)
        return Table(("eigenvalue", "probability"), list(zip(basis.eigenvalues, probs)))
    if cmd == "weak":
        wv = tsvf.weak_value(scenario(doc))
        return _quantities([("weak_value_real", wv.real), ("weak_value_imag", wv.imag)])
    if cmd == "hbt":
        setup = interference.HbtSetup(_real(doc, "phase", 0.0), doc.get("mode", "coherent"))
        return _quantities([("enhancement", interference.hbt_coincidence(setup))])
    if cmd == "splitter":
        p1, p2 = interference.splitter_outputs(_real(doc, "phi1"), _real(doc, "phi2"))
        return _quantities([("p_out1", p1), ("p_out2", p2)])
    if cmd == "slit":
        rep = interference.slit_intensities(slit_geometry(doc), doc.get("method", "quadrature"))
        return _quantities([
            ("stationary_point", rep.stationary_point),
            ("bracket_b", rep.bracket_b),
            ("amp_a_real", rep.amp_a.real), ("amp_a_imag", rep.amp_a.imag),
            ("amp_b_real", rep.amp_b.real), ("amp_b_imag", rep.amp_b.imag),
            ("intensity_a", rep.intensity_a), ("intensity_b", rep.intensity_b),
            ("detour_ratio", rep.detour_ratio),
        ])
    if cmd == "laser":
        params = laser.LaserParams(_real(doc, "n2"), _real(doc, "n1"), _real(doc, "w"), _real(doc, "kappa"))
        return laser.simulate(params, _real(doc, "n0"), _real(doc, "t_end"), _real(doc, "dt"))
    if cmd == "born-recovery":
        seed = spec.seed if spec.seed is not None else _int(doc, "seed", 0)
        res = tsvf.born_recovery(
            tsvf.StateVector.normalized(_array(doc, "pre", 1)),
            _array(doc, "observable", 2),
            _int(doc, "samples", 10000),
            seed,
        )
        if res.discarded:
            log.warning("discarded %d zero-denominator draws", res.discarded)
        rows = list(zip(res.eigenvalues, res.mean, res.stderr, res.born))
        return Table(("eigenvalue", "mean", "stderr", "born"), rows)
    raise InputError(f"unknown subcommand {cmd!r}")


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dispatch(spec: RunSpec, stdout=None) -> int:
    """Run one subcommand; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    try:
        with open(spec.config_path, encoding="utf-8") as fh:
            doc = parse_config(fh.read())
        doc.check_keys(KEYS[spec.subcommand], spec.subcommand)
        text = render(_run(spec, doc), spec.format)
    except InputError as exc:
        log.error("%s", exc)
        return 1
    except (ComputationError, TwoBoundaryError) as exc:
        log.error("%s", exc)
        return 2
    except OSError as exc:
        log.error("%s", exc)
        return 1
    except Exception as exc:  # noqa: BLE001 - every failure must map to an exit code
        log.error("runtime error: %s", exc)
        return 2
    try:
        if spec.output_path:
            _write_atomic(spec.output_path, text)
        else:
            stdout.write(text)
    except OSError as exc:
        log.error("%s", exc)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twoboundary", description="Two-boundary quantum toy experiments.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", required=True, help="key = value config file")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--workers", type=int, help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    return p


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        spec = RunSpec(args.subcommand, args.config, args.output, args.seed, args.workers, args.format)
    except InputError as exc:
        log.error("%s", exc)
        return 1
    return dispatch(spec)


if __name__ == "__main__":
    sys.exit(main())
