"""Command-line front-end.

Subcommands::

    rpolar solve        minimizer set for a user-supplied matrix (JSON report)
    rpolar sweep-planar pitchfork branch data over tr U (CSV)
    rpolar scatter-mc   Monte-Carlo relative angles vs prediction (CSV)
    rpolar iso-grid     reduced-energy samples over a singular-value grid (CSV)
    rpolar ndim         global minimum data for a list of singular values (JSON)

Matrices are accepted as JSON rows (``[[...],[...]]``) or whitespace
separated lines, inline via ``--matrix`` or from a file. All numbers are
serialized with full round-trip precision so downstream checks are exact.
Exit codes: 0 success, 2 parse error, 3 invalid weights/domain input,
4 unwritable output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import ndim, oracle, planar, spatial
from .energy import (
    CosseratWeights,
    DeformationGradient,
    absolute_rotation,
    energy,
    reduce_parameters,
    reduced_energy,
    relative_rotation,
)
from .errors import MatrixParseError, TooLarge

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

DEFAULT_SEED = 161803
SEED_ENV_VAR = "RELAXED_POLAR_SEED"


def fmt(x: float) -> str:
    """Shortest decimal string that round-trips the double exactly."""
    return repr(float(x))


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def parse_matrix_text(text: str) -> list[list[float]]:
    """Parse JSON rows or whitespace CSV into a list of rows."""
    stripped = text.strip()
    if not stripped:
        raise MatrixParseError("empty matrix input")
    rows = None
    if stripped.startswith("["):
        try:
            rows = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"invalid JSON matrix: {exc}") from exc
    else:
        rows = []
        for line in stripped.splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.replace(",", " ").split()])
            except ValueError as exc:
                raise MatrixParseError(f"invalid matrix line {line!r}") from exc
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise MatrixParseError("matrix must be an array of rows")
    return rows


def load_gradient(args) -> DeformationGradient:
    if getattr(args, "shear", None) is not None:
        return planar.simple_shear(args.shear)
    if args.matrix is not None:
        rows = parse_matrix_text(args.matrix)
    elif args.file is not None:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                rows = parse_matrix_text(fh.read())
        except OSError as exc:
            raise MatrixParseError(f"cannot read {args.file}: {exc}") from exc
    else:
        raise MatrixParseError("no matrix given (use --matrix, --file or --shear)")
    try:
        return DeformationGradient(rows)
    except ValueError as exc:
        raise MatrixParseError(str(exc)) from exc


def resolve_seed(flag_value) -> int:
    """Flag beats the RELAXED_POLAR_SEED environment variable beats default."""
    if flag_value is not None:
        return int(flag_value)
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None and env.strip():
        return int(env)
    return DEFAULT_SEED


def _weights(args) -> CosseratWeights:
    return CosseratWeights(args.mu, args.muc)


def _write_csv(path: str, header: list[str], rows: list[list[str]]):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _solve_report(W: CosseratWeights, F: DeformationGradient) -> dict:
    regime, _, _ = reduce_parameters(W, F)
    report: dict = {
        "dim": F.dim,
        "mu": W.mu,
        "muc": W.muc,
        "regime": regime.value,
        "singular_values": F.singular_values,
        "polar": F.polar.rotation,
        "reduced_energy": reduced_energy(W, F),
    }
    if W.is_classical:
        report["domain"] = "classical"
        report["minimizers"] = [F.polar.rotation]
        report["branch_labels"] = ["polar"]
        report["relative_angles"] = [0.0]
        return report
    if F.dim == 2:
        sol = planar.optimal_angles(W, F)
        tr_u = float(F.singular_values.sum())
        rho = W.singular_radius
        if sol.bifurcated:
            report["domain"] = "non-classical"
        elif abs(tr_u - rho) <= 1e-12 * rho:
            report["domain"] = "boundary"
        else:
            report["domain"] = "classical"
        report["minimizers"] = [planar.rotation_2d(a) for a in sol.branch_angles]
        report["branch_labels"] = ["+", "-"] if sol.bifurcated else ["polar"]
        report["relative_angles"] = list(sol.relative_angles)
        report["branch_angles"] = list(sol.branch_angles)
        report["polar_angle"] = sol.polar_angle
    elif F.dim == 3:
        sol = spatial.rpolar_3d(W, F)
        report["domain"] = sol.domain.value
        report["minimizers"] = list(sol.minimizers)
        report["branch_labels"] = ["+", "-"] if len(sol.minimizers) == 2 else ["polar"]
        report["relative_angles"] = list(sol.relative_angles)
        report["axis"] = sol.axis
        report["u_mmp"] = sol.u_mmp
        report["s_mmp"] = sol.s_mmp
        report["degenerate"] = sol.degenerate
    else:
        _, _, ft = reduce_parameters(W, F)
        gm = ndim.global_minimizers_nd(ft.singular_values)
        report["domain"] = "non-classical" if gm.k > 0 else "classical"
        report["minimizers"] = [absolute_rotation(rh, F) for rh in gm.rotations]
        report["branch_labels"] = [
            "".join("+" if s > 0 else "-" for s in bits)
            for bits in _sign_tuples(gm.k)
        ]
        report["partition"] = _partition_1based(gm.partition)
        report["k"] = gm.k
    return report


def _sign_tuples(k: int):
    import itertools

    return list(itertools.product((1, -1), repeat=k))


def _partition_1based(p: ndim.CriticalPartition) -> list[dict]:
    return [
        {"indices": [i + 1 for i in b], "sign": s} for b, s in zip(p.blocks, p.signs)
    ]


def cmd_solve(args) -> int:
    W = _weights(args)
    F = load_gradient(args)
    report = _solve_report(W, F)
    if args.verify:
        cfg = oracle.OracleConfig(
            seed=resolve_seed(args.seed), samples=args.samples, tol_grad=1e-9
        )
        res = oracle.global_minimize(W, F, cfg, threads=args.threads)
        report["oracle"] = {
            "best_energy": res.best_energy,
            "gap": res.best_energy - report["reduced_energy"],
            "grad_norm": res.grad_norm_at_best,
            "restarts_converged": res.restarts_converged,
        }
    print(json.dumps(_jsonify(report)))
    return EXIT_OK


def cmd_sweep_planar(args) -> int:
    W = _weights(args)
    lo, hi, count = args.range
    count = int(count)
    if count < 2 or not lo < hi:
        raise ValueError("sweep range must satisfy min < max and count >= 2")
    nu2 = args.nu2
    if nu2 <= 0.0 or lo <= nu2:
        raise ValueError("fixed singular value must be positive and below the range")
    rows = []
    for tr_u in np.linspace(lo, hi, count):
        F = DeformationGradient(np.diag([tr_u - nu2, nu2]))
        sol = planar.optimal_angles(W, F)
        if sol.bifurcated:
            beta_plus, beta_minus = sol.relative_angles
        else:
            beta_plus = beta_minus = 0.0
        rows.append(
            [
                fmt(tr_u),
                fmt(beta_plus),
                fmt(beta_minus),
                fmt(sol.reduced_energy),
                "true" if sol.bifurcated else "false",
            ]
        )
    _write_csv(args.out, ["tr_U", "beta_plus", "beta_minus", "wred", "bifurcated"], rows)
    return EXIT_OK


def _z_angle(rhat: np.ndarray) -> float:
    """Signed in-plane angle of a (near) block rotation about e3."""
    return float(np.arctan2(rhat[1, 0] - rhat[0, 1], rhat[0, 0] + rhat[1, 1]))


def cmd_scatter_mc(args) -> int:
    W = _weights(args)
    lo, hi, count = args.range
    count = int(count)
    if count < 2 or not lo < hi:
        raise ValueError("scatter range must satisfy min < max and count >= 2")
    seed = resolve_seed(args.seed)
    nu3 = args.nu3
    if nu3 <= 0.0:
        raise ValueError("nu3 must be positive")
    rows = []
    for i, s in enumerate(np.linspace(lo, hi, count)):
        rng = np.random.default_rng((seed, 0xA0, i))
        split = rng.uniform(0.55, 0.75)
        nu1, nu2 = s * split, s * (1.0 - split)
        if nu3 >= nu2:
            raise ValueError(
                f"nu3={nu3:g} must stay below the smaller in-plane value {nu2:g}"
            )
        q1 = oracle.haar_sample(3, rng)
        q2 = oracle.haar_sample(3, rng)
        F = DeformationGradient(q1 @ np.diag([nu1, nu2, nu3]) @ q2.T)
        cfg = oracle.OracleConfig(
            seed=int(rng.integers(2**32)), samples=args.samples, tol_grad=1e-9
        )
        res = oracle.global_minimize(W, F, cfg, warm_starts=False, threads=args.threads)
        beta_mc = _z_angle(relative_rotation(res.best_rotation, F))
        if W.is_classical:
            beta_pred = 0.0
        else:
            rho = W.singular_radius
            beta_pred = float(np.copysign(np.arccos(min(1.0, rho / s)), beta_mc)) if s > rho else 0.0
        rows.append(
            [fmt(s), fmt(beta_mc), fmt(beta_pred), fmt(W.mu), fmt(W.muc), str(seed)]
        )
    _write_csv(
        args.out,
        ["nu1_plus_nu2", "beta_mc", "beta_predicted", "weights_mu", "weights_muc", "seed"],
        rows,
    )
    return EXIT_OK


def cmd_iso_grid(args) -> int:
    levels = [float(v) for v in args.levels]
    if any(v <= 0.0 for v in levels):
        raise ValueError("isosurface levels must be positive")
    lo, hi, count = args.grid
    count = int(count)
    if count < 2 or not 0.0 < lo < hi:
        raise ValueError("grid range must satisfy 0 < min < max and count >= 2")
    w10 = CosseratWeights(1.0, 0.0)
    axis = np.linspace(lo, hi, count)
    rows = []
    for nu1 in axis:
        for nu2 in axis:
            for nu3 in axis:
                wred = spatial.wred_3d_values(w10, (nu1, nu2, nu3))
                rows.append([fmt(nu1), fmt(nu2), fmt(nu3), fmt(wred)])
    _write_csv(args.out, ["nu1", "nu2", "nu3", "wred"], rows)
    return EXIT_OK


def cmd_ndim(args) -> int:
    nus = sorted((float(v) for v in args.nus), reverse=True)
    if not nus or any(v <= 0.0 for v in nus):
        raise ValueError("singular values must be positive")
    gm = ndim.global_minimizers_nd(np.array(nus))
    report = {
        "nus_sorted": nus,
        "k": gm.k,
        "partition": _partition_1based(gm.partition),
        "wred": gm.reduced_energy,
        "num_minimizers": 2**gm.k,
        "degenerate": gm.degenerate,
    }
    if args.census:
        parts = ndim.enumerate_critical_partitions(np.array(nus))
        report["census"] = [
            {
                "partition": _partition_1based(p),
                "value": ndim.critical_value(p, np.array(nus)),
            }
            for p in parts
        ]
    print(json.dumps(_jsonify(report)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="rpolar",
        description="Optimal Cosserat rotations: closed forms and Monte-Carlo checks",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_weights(p):
        p.add_argument("--mu", type=float, default=1.0, help="shear weight mu > 0")
        p.add_argument("--muc", type=float, default=0.0, help="couple modulus muc >= 0")

    def add_oracle(p):
        p.add_argument("--seed", type=int, default=None, help="RNG seed (beats env)")
        p.add_argument("--samples", type=int, default=200, help="oracle restarts")
        p.add_argument("--threads", type=int, default=1, help="oracle thread count")

    p = sub.add_parser("solve", help="minimizer set for one matrix")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--matrix", help="inline matrix (JSON rows or whitespace CSV)")
    src.add_argument("--file", help="matrix file path")
    src.add_argument("--shear", type=float, help="planar simple shear of this amount")
    add_weights(p)
    p.add_argument("--verify", action="store_true", help="append oracle best energy")
    add_oracle(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep-planar", help="pitchfork sweep over tr U (CSV)")
    add_weights(p)
    p.add_argument("--range", nargs=3, type=float, required=True, metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--nu2", type=float, default=0.25, help="fixed second singular value")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_sweep_planar)

    p = sub.add_parser("scatter-mc", help="Monte-Carlo relative angles (CSV)")
    add_weights(p)
    p.add_argument("--range", nargs=3, type=float, required=True, metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--nu3", type=float, default=0.1, help="fixed smallest singular value")
    add_oracle(p)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_scatter_mc)

    p = sub.add_parser("iso-grid", help="reduced-energy grid samples (CSV)")
    p.add_argument("--levels", nargs="+", type=float, default=[0.1, 0.4, 0.8],
                   help="target contour levels (metadata for the consumer)")
    p.add_argument("--grid", nargs=3, type=float, required=True, metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_iso_grid)

    p = sub.add_parser("ndim", help="global minimum for a singular-value list")
    p.add_argument("nus", nargs="+", type=float, help="singular values (any order)")
    p.add_argument("--census", action="store_true", help="include the full critical census")
    p.set_defaults(func=cmd_ndim)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MatrixParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, TooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry():  # pragma: no cover - console-script shim
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
