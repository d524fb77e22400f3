"""Command-line entry point: ``qwolct {transform,analyze,reconstruct,verify,oracle}``."""
from __future__ import annotations

import argparse
import json
import logging
import platform
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .errors import QwolctError
from .grid import GridSpec, QField, l2_norm
from .io import (
    RunConfig,
    ingest,
    read_csv_field,
    read_tensor,
    write_csv_field,
    write_magnitude_png,
    write_tensor,
    write_tensor_stream,
)
from .oracle import GaussianSpec, RectWindowSpec, box_chirp_closed_form, make_gaussian, make_rect_window
from .qolct import FreqGrid, qolct
from .qwolct import CoeffTensor, WindowSpec, analyze_blocks, synthesize
from .quat import qnorm
from .verify import SCALES, check_box_chirp, box_chirp_setup, run_all

log = logging.getLogger("qwolct")

REPORT_SCHEMA = {
    "type": "object",
    "required": ["checks", "env"],
    "properties": {
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "lhs", "rhs", "metric", "tol", "pass"],
                "properties": {
                    "name": {"type": "string"},
                    "lhs": {"type": ["number", "string"]},
                    "rhs": {"type": ["number", "string"]},
                    "metric": {"type": ["number", "string"]},
                    "tol": {"type": "number"},
                    "pass": {"type": "boolean"},
                    "detail": {"type": "object"},
                },
            },
        },
        "env": {
            "type": "object",
            "required": ["version", "seed", "scale"],
        },
        "pass": {"type": "boolean"},
    },
}


def _scale_config(scale: str) -> RunConfig:
    n = 16 if scale == "smoke" else 32
    return RunConfig(n1=n, n2=n, dt1=16.0 / n, dt2=16.0 / n)


def load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else _scale_config(args.scale)
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def default_signal(cfg: RunConfig) -> QField:
    """Seeded smooth quaternion field used when no input file is given."""
    grid = cfg.grid
    rng = np.random.default_rng(cfg.seed)
    t1, t2 = grid.coords()
    c = rng.uniform(-1.0, 1.0, 2)
    env = np.exp(-((t1 - c[0]) ** 2 + (t2 - c[1]) ** 2) / 2.0)
    amp = rng.standard_normal(4)
    return QField(grid, env[..., None] * amp / np.linalg.norm(amp))


def load_signal(cfg: RunConfig, path) -> QField:
    return default_signal(cfg) if path is None else ingest(path, cfg.input_mode, cfg.grid)


def make_window(cfg: RunConfig) -> WindowSpec:
    grid = cfg.grid
    if cfg.window == "gaussian":
        return WindowSpec.gaussian(grid, cfg.window_sigma)
    if cfg.window == "rect":
        return WindowSpec(make_rect_window(RectWindowSpec(cfg.window_a), grid))
    if cfg.window == "file":
        return WindowSpec(read_csv_field(cfg.window_file, grid))
    raise QwolctError(f"unknown window kind {cfg.window!r}")


def u_grid(cfg: RunConfig) -> GridSpec:
    g, s = cfg.grid, max(1, cfg.u_stride)
    return GridSpec(-(-g.n1 // s), -(-g.n2 // s), g.dt1 * s, g.dt2 * s, g.origin1, g.origin2)


def _meta(cfg: RunConfig) -> dict:
    return {"grid": [cfg.n1, cfg.n2, cfg.dt1, cfg.dt2], "A1": list(cfg.A1), "A2": list(cfg.A2), "seed": cfg.seed}


# -- subcommands -----------------------------------------------------------


def cmd_transform(cfg: RunConfig, args) -> int:
    out = Path(args.output)
    f = load_signal(cfg, args.input)
    A1, A2 = cfg.params
    spec = qolct(f, A1, A2)
    single = GridSpec(1, 1, f.grid.dt1, f.grid.dt2, 0.0, 0.0)
    C = CoeffTensor(f.grid, single, spec.grid, spec.samples[None, None], A1, A2)
    write_tensor(out / "spectrum.qwol", C)
    peak = write_magnitude_png(qnorm(spec.samples), out / "spectrum.png", _meta(cfg))
    log.info("transform: energy %.12g, peak %.6g", spec.energy(), peak)
    return 0


def cmd_analyze(cfg: RunConfig, args) -> int:
    out = Path(args.output)
    f = load_signal(cfg, args.input)
    g = make_window(cfg)
    A1, A2 = cfg.params
    ugrid = u_grid(cfg)
    wgrid = FreqGrid.aligned_for(f.grid, A1, A2)
    spectro = []

    def blocks():
        for rows, block in analyze_blocks(f, g, A1, A2, ugrid, wgrid):
            if cfg.spectrograms != "none":
                spectro.append((rows, qnorm(block)))
            yield block

    write_tensor_stream(out / "coeffs.qwol", f.grid, ugrid, wgrid, A1, A2, blocks())
    if cfg.spectrograms == "center":
        c1, c2 = ugrid.n1 // 2, ugrid.n2 // 2
        for rows, mag in spectro:
            if rows.start <= c1 < rows.stop:
                write_magnitude_png(mag[c1 - rows.start, c2], out / f"spectrogram_{c1}_{c2}.png", _meta(cfg))
    elif cfg.spectrograms == "all":
        for rows, mag in spectro:
            for r in range(mag.shape[0]):
                for c in range(mag.shape[1]):
                    write_magnitude_png(mag[r, c], out / f"spectrogram_{rows.start + r}_{c}.png", _meta(cfg))
    write_csv_field(f, out / "signal.csv")
    log.info("analyze: %d x %d window positions written", ugrid.n1, ugrid.n2)
    return 0


def cmd_reconstruct(cfg: RunConfig, args) -> int:
    if args.input is None:
        raise QwolctError("reconstruct needs --input pointing at a coefficient file")
    out = Path(args.output)
    C = read_tensor(args.input)
    cfg.n1, cfg.n2, cfg.dt1, cfg.dt2 = C.tgrid.n1, C.tgrid.n2, C.tgrid.dt1, C.tgrid.dt2
    g = make_window(cfg)
    fh = synthesize(C, g)
    write_csv_field(fh, out / "reconstructed.csv")
    if cfg.reference:
        ref = read_csv_field(cfg.reference, C.tgrid)
        err = l2_norm(fh - ref) / l2_norm(ref)
        print(f"relative L2 error: {err:.6e}")
        (out / "reconstruct.json").write_text(json.dumps({"relative_error": err}, indent=2))
    return 0


def build_report(records, scale: str, seed: int) -> dict:
    checks = [r.as_json() for r in records]
    return {
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
        "env": {
            "version": __version__,
            "seed": seed,
            "scale": scale,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
    }


def cmd_verify(cfg: RunConfig, args) -> int:
    out = Path(args.output)
    records = run_all(args.scale, cfg.seed)
    report = build_report(records, args.scale, cfg.seed)
    jsonschema.validate(report, REPORT_SCHEMA)
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    for c in report["checks"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}: metric={c['metric']} tol={c['tol']}")
    return 0 if report["pass"] else 1


def cmd_oracle(cfg: RunConfig, args) -> int:
    """Closed-form coefficients of the chirped Gaussian under a square window."""
    out = Path(args.output)
    sc = SCALES[args.scale]
    grid, A1, A2, beta, a, _ = box_chirp_setup(sc)
    wg = FreqGrid.aligned_for(grid, A1, A2)
    w1, w2 = wg.coords()
    ref = box_chirp_closed_form((0.0, 0.0), (w1, w2), A1, A2, a, beta, limit=True)
    peak = write_magnitude_png(qnorm(ref), out / "oracle_u0.png", {"a": a, "A1": list(A1.as_tuple()), "A2": list(A2.as_tuple())})
    f = make_gaussian(GaussianSpec.chirp_cancelling(A1, A2, beta), grid)
    write_csv_field(f, out / "oracle_signal.csv")
    rec = check_box_chirp(sc, cfg.seed)
    (out / "oracle.json").write_text(json.dumps(rec.as_json(), indent=2, sort_keys=True))
    print(f"{'PASS' if rec.passed else 'FAIL'} box_chirp: deviation={rec.metric:.4e} tol={rec.tol} peak={peak:.6g}")
    return 0 if rec.passed else 1


HELP = {
    "transform": "plain transform of a signal; writes spectrum.qwol and spectrum.png",
    "analyze": "windowed coefficients; writes coeffs.qwol, signal.csv and optional spectrograms",
    "reconstruct": "invert a coefficient file (--input) back to reconstructed.csv",
    "verify": "run the acceptance checks; writes report.json, exit 1 if any fail",
    "oracle": "closed-form chirped Gaussian under a square window vs the engine",
}

COMMANDS = {
    "transform": cmd_transform,
    "analyze": cmd_analyze,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qwolct", description="Quaternion windowed offset linear canonical transform tools")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name, help=HELP[name])
        s.add_argument("--config", type=Path, help="key = value run configuration")
        s.add_argument("--input", type=Path, help="signal (csv or png, see input_mode) or coefficient file")
        s.add_argument("--output", type=Path, default=Path("."), help="output directory (created if missing)")
        s.add_argument("--seed", type=int, help="overrides the config seed")
        s.add_argument("--scale", choices=sorted(SCALES), default="desk", help="grid sizes when no config is given")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
        args.output.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, args)
    except (QwolctError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
