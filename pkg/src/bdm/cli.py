"""Command-line front end.

Subcommands: eig, map, green, measure, wtm, verify.  Problems are described
by a JSON config; numeric output is CSV with complex values split into
paired _re/_im columns, floats printed with 17 significant digits, and a
version header comment so files are byte-reproducible.

Exit codes: 0 ok, 1 config error, 2 numerical failure, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from functools import partial

from . import __version__
from .bdmap import bdmap_general, bdmap_robin, measure_point_mass
from .errors import ConfigError, NumericalError
from .odecore import DEFAULT_TOL, map_over_z
from .potential import PotentialSpec
from .resolvent import green
from .spectrum import eig_selfadjoint
from .traces import AnglePair, AngleQuad
from .verify import format_table, run_suite
from .weyl import wt_matrix

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _complex_cols(prefix: str):
    return [f"{prefix}_re", f"{prefix}_im"]


def _angle(block: dict, prefix: str) -> complex:
    return complex(block.get(f"{prefix}_re", 0.0), block.get(f"{prefix}_im", 0.0))


def load_potential(cfg: dict, R: float) -> PotentialSpec:
    pot = cfg.get("potential", {"type": "zero"})
    kind = pot.get("type")
    try:
        if kind == "zero":
            return PotentialSpec.zero(R)
        vre = pot.get("values_re", [])
        vim = pot.get("values_im", [0.0] * len(vre))
        if len(vim) != len(vre):
            raise ConfigError("values_re and values_im lengths differ")
        values = [complex(a, b) for a, b in zip(vre, vim)]
        if kind == "piecewise_constant":
            return PotentialSpec.piecewise_constant(pot.get("breakpoints", []),
                                                    values, R)
        if kind == "sampled":
            return PotentialSpec.sampled(pot.get("grid", []), values, R)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"invalid potential block: {exc}") from exc
    raise ConfigError(f"unknown potential type {kind!r}")


@dataclass(frozen=True)
class ProblemConfig:
    """A parsed problem description; angles are strip-normalized and the
    JSON emitted by to_json round-trips to an equal config."""

    R: float
    V: PotentialSpec
    pair: AnglePair
    primed: AnglePair | None
    tol: float
    raw: dict

    def to_json(self) -> dict:
        pot = {"type": self.V.kind}
        if self.V.kind == "piecewise_constant":
            pot["breakpoints"] = list(self.V.breakpoints)
        if self.V.kind == "sampled":
            pot["grid"] = list(self.V.grid)
        if self.V.kind != "zero":
            pot["values_re"] = [v.real for v in self.V.values]
            pot["values_im"] = [v.imag for v in self.V.values]
        out = {"R": self.R, "potential": pot,
               "theta": {"theta0_re": self.pair.theta0.real,
                         "theta0_im": self.pair.theta0.imag,
                         "thetaR_re": self.pair.thetaR.real,
                         "thetaR_im": self.pair.thetaR.imag},
               "tol": self.tol}
        if self.primed is not None:
            out["theta_prime"] = {"theta0_re": self.primed.theta0.real,
                                  "theta0_im": self.primed.theta0.imag,
                                  "thetaR_re": self.primed.thetaR.real,
                                  "thetaR_im": self.primed.thetaR.imag}
        for key in ("z_grid", "x_grid", "xp_grid", "x_points", "x0", "alpha"):
            if key in self.raw:
                out[key] = self.raw[key]
        return out


def parse_config(cfg: dict, tol_override=None) -> ProblemConfig:
    if "R" not in cfg:
        raise ConfigError("config must set R")
    R = float(cfg["R"])
    V = load_potential(cfg, R)
    th = cfg.get("theta", {})
    pair = AnglePair(_angle(th, "theta0"), _angle(th, "thetaR"))
    primed = None
    if "theta_prime" in cfg:
        tp = cfg["theta_prime"]
        primed = AnglePair(_angle(tp, "theta0"), _angle(tp, "thetaR"))
    tol = cfg.get("tol", None)
    if tol is None:
        tol = float(os.environ.get("BDM_TOL", DEFAULT_TOL))
    if tol_override is not None:
        tol = tol_override
    return ProblemConfig(R=R, V=V, pair=pair, primed=primed,
                         tol=float(tol), raw=cfg)


def load_config(path: str, tol_override=None) -> ProblemConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(cfg, tol_override)


def z_grid_from_config(cfg: dict, z_arg=None):
    if z_arg is not None:
        return [complex(*[float(p) for p in z_arg.split(",")])] \
            if "," in z_arg else [complex(float(z_arg), 0.0)]
    zg = cfg.get("z_grid")
    if zg is None:
        return [complex(0.0, 1.0)]
    if "list" in zg:
        return [complex(p.get("re", 0.0), p.get("im", 0.0)) for p in zg["list"]]
    if "rect" in zg:
        re0, re1, im0, im1 = (float(v) for v in zg["rect"])
        n_re = int(zg.get("n_re", 5))
        n_im = int(zg.get("n_im", 5))
        res = [re0 + (re1 - re0) * i / max(n_re - 1, 1) for i in range(n_re)]
        ims = [im0 + (im1 - im0) * j / max(n_im - 1, 1) for j in range(n_im)]
        return [complex(a, b) for b in ims for a in res]
    raise ConfigError("z_grid must carry either 'list' or 'rect'")


def write_csv(path: str, header: list, rows) -> None:
    lines = [f"# bdm {__version__}", ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _mat_row(prefix_vals) -> list:
    out = []
    for v in prefix_vals:
        v = complex(v)
        out.extend((v.real, v.imag))
    return out


def cmd_eig(cfg, args) -> int:
    res = eig_selfadjoint(cfg.V, cfg.R, cfg.pair, args.n, cfg.tol)
    rows = [[i, lam.real, lam.imag, r]
            for i, (lam, r) in enumerate(zip(res.eigenvalues, res.residuals))]
    write_csv(args.out, ["index", "eigenvalue_re", "eigenvalue_im", "residual"],
              rows)
    return EXIT_OK


def _map_at_z(payload, z):
    V, R, pair, primed, tol = payload
    if primed is not None:
        lam = bdmap_general(V, R, AngleQuad(pair, primed), z, tol).matrix
    else:
        lam = bdmap_robin(V, R, pair, z, tol).matrix
    return [z.real, z.imag] + _mat_row([lam[0, 0], lam[0, 1], lam[1, 0], lam[1, 1]])


def cmd_map(cfg, args) -> int:
    zs = z_grid_from_config(cfg.raw, args.z)
    payload = (cfg.V, cfg.R, cfg.pair, cfg.primed, cfg.tol)
    rows = map_over_z(partial(_map_at_z, payload), zs, args.jobs)
    header = (["z_re", "z_im"] + _complex_cols("l11") + _complex_cols("l12")
              + _complex_cols("l21") + _complex_cols("l22"))
    write_csv(args.out, header, rows)
    return EXIT_OK


def _green_at_z(payload, z):
    V, R, pair, xs, xps, tol = payload
    rows = []
    for x in xs:
        for xp in xps:
            g = green(V, R, pair, z, x, xp, tol)
            rows.append([z.real, z.imag, x, xp, g.value.real, g.value.imag])
    return rows


def cmd_green(cfg, args) -> int:
    zs = z_grid_from_config(cfg.raw, args.z)
    raw = cfg.raw
    n = int(raw.get("x_points", 5))
    xs = raw.get("x_grid") or [cfg.R * (i + 1) / (n + 1) for i in range(n)]
    xps = raw.get("xp_grid") or xs
    payload = (cfg.V, cfg.R, cfg.pair, [float(v) for v in xs],
               [float(v) for v in xps], cfg.tol)
    chunks = map_over_z(partial(_green_at_z, payload), zs, args.jobs)
    rows = [row for chunk in chunks for row in chunk]
    write_csv(args.out, ["z_re", "z_im", "x", "xp", "g_re", "g_im"], rows)
    return EXIT_OK


def cmd_measure(cfg, args) -> int:
    V, R, pair, tol = cfg.V, cfg.R, cfg.pair, cfg.tol
    primed = cfg.primed or pair.robin_primed()
    spec = eig_selfadjoint(V, R, pair, args.n, tol)
    rows = []
    for lam in spec.eigenvalues:
        sig = measure_point_mass(V, R, AngleQuad(pair, primed), lam.real,
                                 tol=tol)
        rows.append([lam.real] + _mat_row([sig[0, 0], sig[0, 1],
                                           sig[1, 0], sig[1, 1]]))
    header = (["lambda"] + _complex_cols("sigma11") + _complex_cols("sigma12")
              + _complex_cols("sigma21") + _complex_cols("sigma22"))
    write_csv(args.out, header, rows)
    return EXIT_OK


def _wtm_at_z(payload, z):
    V, R, pair, x0, alpha, tol = payload
    M = wt_matrix(V, R, z, x0, pair, alpha, tol).matrix
    return [z.real, z.imag] + _mat_row([M[0, 0], M[0, 1], M[1, 0], M[1, 1]])


def cmd_wtm(cfg, args) -> int:
    zs = z_grid_from_config(cfg.raw, args.z)
    x0 = args.x0 if args.x0 is not None else cfg.raw.get("x0", cfg.R / 2)
    alpha = args.alpha if args.alpha is not None else cfg.raw.get("alpha", 0.0)
    payload = (cfg.V, cfg.R, cfg.pair, float(x0), float(alpha),
               cfg.tol)
    rows = map_over_z(partial(_wtm_at_z, payload), zs, args.jobs)
    header = (["z_re", "z_im"] + _complex_cols("m11") + _complex_cols("m12")
              + _complex_cols("m21") + _complex_cols("m22"))
    write_csv(args.out, header, rows)
    return EXIT_OK


def cmd_verify(cfg, args) -> int:
    results = run_suite(cfg.V, cfg.R, cfg.pair, cfg.primed,
                        cfg.tol)
    print(format_table(results))
    if args.out and args.out != "-":
        rows = [[r.residual, r.threshold, 1.0 if r.passed else 0.0]
                for r in results]
        lines = [f"# bdm {__version__}", "identity,residual,threshold,passed"]
        for r, row in zip(results, rows):
            lines.append(",".join([r.name] + [_fmt(v) for v in row]))
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bdm",
                                 description="boundary data maps for 1-D "
                                 "Schrodinger operators on [0, R]")
    ap.add_argument("--version", action="version", version=f"bdm {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, default_out):
        p.add_argument("--config", required=True, help="JSON problem config")
        p.add_argument("--tol", type=float, default=None,
                       help="override tolerance (also via BDM_TOL)")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker processes for z grids")
        p.add_argument("--out", default=default_out,
                       help="output CSV path ('-' for stdout)")

    p = sub.add_parser("eig", help="eigenvalues of the self-adjoint problem")
    common(p, "eig.csv")
    p.add_argument("--n", type=int, default=5, help="number of eigenvalues")

    p = sub.add_parser("map", help="boundary data map entries over a z grid")
    common(p, "map.csv")
    p.add_argument("--z", default=None, help="single z as 're,im'")

    p = sub.add_parser("green", help="Green's function over an (x, x', z) grid")
    common(p, "green.csv")
    p.add_argument("--z", default=None, help="single z as 're,im'")

    p = sub.add_parser("measure", help="spectral point masses at eigenvalues")
    common(p, "measure.csv")
    p.add_argument("--n", type=int, default=5, help="number of eigenvalues")

    p = sub.add_parser("wtm", help="Weyl-Titchmarsh matrix over a z grid")
    common(p, "wtm.csv")
    p.add_argument("--z", default=None, help="single z as 're,im'")
    p.add_argument("--x0", type=float, default=None, help="interior reference point")
    p.add_argument("--alpha", type=float, default=None, help="rotation in [0, pi)")

    p = sub.add_parser("verify", help="run the identity suite")
    common(p, None)
    return ap


_COMMANDS = {"eig": cmd_eig, "map": cmd_map, "green": cmd_green,
             "measure": cmd_measure, "wtm": cmd_wtm, "verify": cmd_verify}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.tol)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
