"""``polyssp`` command line.

Exit status: 0 when the command ran (the verdict is in the output), 2 on a
usage error, 3 on bad input data.  ``selftest`` exits 1 if a check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import kernels
from .algebra import IntMatrix
from .io import DataError, dumps, load_json, load_matrix, save_json
from .reduction import SspInstance, ZoeInstance, gen_zoe, reduce_zoe, solve_ssp, verify_equivalence

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3

CORPUS_HEADER = ["file", "k", "verdict", "nodes", "seconds"]


@dataclass
class RunConfig:
    command: str
    input: Optional[Path] = None
    output: Optional[Path] = None
    matrix: Optional[Path] = None
    seed: int = 0
    k: Optional[int] = None
    lam: Optional[int] = None
    solver: str = "brute"
    format: str = "json"
    options: dict = field(default_factory=dict)


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _pos(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyssp", description="Subset sum in polycyclic groups.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-zoe", help="write a random or planted ZOE instance")
    g.add_argument("--k", type=_pos, required=True)
    g.add_argument("--mode", choices=["random", "planted"], default="random")
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--seed", type=_nonneg, default=0)
    g.add_argument("-o", "--output", type=Path)

    r = sub.add_parser("reduce", help="reduce a ZOE instance to an SSP instance")
    r.add_argument("input", type=Path)
    r.add_argument("--matrix", type=Path, required=True)
    r.add_argument("--lambda", dest="lam", type=_pos)
    r.add_argument("--gap", choices=["minimal", "analytic"], default="minimal")
    r.add_argument("-o", "--output", type=Path)

    s = sub.add_parser("solve", help="solve an SSP instance")
    s.add_argument("input", type=Path)
    s.add_argument("--solver", choices=["brute", "mitm"], default="brute")
    s.add_argument("--timing", action="store_true", help="include wall time and backend")
    s.add_argument("-o", "--output", type=Path)

    v = sub.add_parser("verify", help="check ZOE and reduced SSP verdicts agree")
    v.add_argument("input", type=Path)
    v.add_argument("--matrix", type=Path, required=True)
    v.add_argument("--lambda", dest="lam", type=_pos)

    t = sub.add_parser("table", help="distortion table as CSV")
    t.add_argument("--matrix", type=Path, required=True)
    t.add_argument("--kmax", type=_pos, default=10)

    pl = sub.add_parser("plan", help="distortion plan as JSON")
    pl.add_argument("--matrix", type=Path, required=True)
    pl.add_argument("--lambda", dest="lam", type=_pos, required=True)
    pl.add_argument("--count", type=_pos, required=True)
    pl.add_argument("--gap", choices=["minimal", "analytic"], default="minimal")

    c = sub.add_parser("collect", help="Malcev coordinates of a word in N(r, c)")
    c.add_argument("--r", type=_pos, required=True)
    c.add_argument("--c", type=_pos, required=True)
    c.add_argument("--word", required=True)

    b = sub.add_parser("bench", help="time compiled vs pure kernels")
    b.add_argument("--matrix", type=Path)
    b.add_argument("--k", type=_pos, nargs="+", default=[10, 14, 18])
    b.add_argument("--seeds", type=_nonneg, default=2, help="seeds 0..N-1")

    sub.add_parser("selftest", help="run the acceptance checks")

    co = sub.add_parser("corpus", help="solve every SSP JSON in a directory")
    co.add_argument("input", type=Path)
    co.add_argument("--solver", choices=["brute", "mitm"], default="brute")
    co.add_argument("--generate", type=_nonneg, default=0, help="first write N planted instances")
    co.add_argument("--k", type=_pos, default=8)
    co.add_argument("--seed", type=_nonneg, default=0)
    co.add_argument("--matrix", type=Path)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = {"command", "input", "output", "matrix", "seed", "k", "lam", "solver"}
    return RunConfig(
        command=ns.command,
        input=getattr(ns, "input", None),
        output=getattr(ns, "output", None),
        matrix=getattr(ns, "matrix", None),
        seed=getattr(ns, "seed", 0),
        k=getattr(ns, "k", None),
        lam=getattr(ns, "lam", None),
        solver=getattr(ns, "solver", "brute"),
        format="csv" if ns.command in ("table", "bench", "corpus") else "json",
        options={k: v for k, v in vars(ns).items() if k not in known},
    )


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _default_matrix(path: Optional[Path]) -> IntMatrix:
    if path is None:
        return IntMatrix.from_rows([[2, 1], [1, 1]])
    return load_matrix(path)


def corpus_run(directory: Path, solver: str = "brute") -> str:
    """CSV with one row per ``*.json`` file, in filename order."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CORPUS_HEADER)
    for path in sorted(Path(directory).glob("*.json")):
        start = time.perf_counter()
        try:
            inst = SspInstance.from_json(load_json(path))
            res = solve_ssp(inst, solver)
        except (ValueError, ArithmeticError) as exc:
            writer.writerow([path.name, "", "error", "", ""])
            print(f"polyssp: {path.name}: {exc}", file=sys.stderr)
            continue
        verdict = "positive" if res.positive else "negative"
        writer.writerow([path.name, inst.k, verdict, res.stats["nodes"], f"{time.perf_counter() - start:.6f}"])
    return out.getvalue()


def dispatch(cfg: RunConfig) -> int:
    opt = cfg.options
    cmd = cfg.command
    if cmd == "gen-zoe":
        _emit(dumps(gen_zoe(cfg.k, opt["mode"], opt["density"], cfg.seed).to_json()), cfg.output)
    elif cmd == "reduce":
        A = ZoeInstance.from_json(load_json(cfg.input))
        inst = reduce_zoe(A, load_matrix(cfg.matrix), cfg.lam, opt["gap"])
        _emit(dumps(inst.to_json()), cfg.output)
    elif cmd == "solve":
        inst = SspInstance.from_json(load_json(cfg.input))
        _emit(dumps(solve_ssp(inst, cfg.solver).to_json(timing=opt["timing"])), cfg.output)
    elif cmd == "verify":
        A = ZoeInstance.from_json(load_json(cfg.input))
        _emit(dumps(verify_equivalence(A, load_matrix(cfg.matrix), cfg.lam)), None)
    elif cmd == "table":
        from .distortion import distortion_table, table_csv

        _emit(table_csv(distortion_table(load_matrix(cfg.matrix), opt["kmax"])), None)
    elif cmd == "plan":
        from .distortion import build_plan

        plan = build_plan(load_matrix(cfg.matrix), cfg.lam, opt["count"], opt["gap"])
        _emit(dumps(plan.to_json()), None)
    elif cmd == "collect":
        from .nilpotent import collector

        col = collector(opt["r"], opt["c"])
        ev = col.collect(col.basis.generator_alphabet.word(opt["word"]))
        _emit(dumps(ev.to_json()), None)
    elif cmd == "bench":
        from .bench import bench_csv, bench_rows

        rows = bench_rows(_default_matrix(cfg.matrix), cfg.k, range(opt["seeds"]))
        _emit(bench_csv(rows), None)
        print(f"polyssp: default backend {kernels.BACKEND}", file=sys.stderr)
    elif cmd == "selftest":
        from .acceptance import run_all

        checks = run_all()
        for ch in checks:
            print(ch.line())
        return EXIT_OK if all(ch.passed for ch in checks) else EXIT_FAIL
    elif cmd == "corpus":
        directory = cfg.input
        if opt["generate"]:
            directory.mkdir(parents=True, exist_ok=True)
            X = _default_matrix(cfg.matrix)
            for i in range(opt["generate"]):
                A = gen_zoe(cfg.k, "planted", 0.5, cfg.seed + i)
                save_json(reduce_zoe(A, X).to_json(), directory / f"planted_k{cfg.k}_{cfg.seed + i:04d}.json")
        elif not directory.is_dir():
            raise DataError(f"{directory} is not a directory")
        _emit(corpus_run(directory, cfg.solver), None)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = config_from_args(ns)
    try:
        return dispatch(cfg)
    except (ValueError, ArithmeticError, KeyError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"polyssp: error: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
