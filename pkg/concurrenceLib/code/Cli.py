# -*- coding: utf-8 -*-
"""
Command-line front end.

    concurrence-bounds bounds state.json
    concurrence-bounds bounds --family 0.5 0.5
    concurrence-bounds figure1 --m-list 4,6,10 --per-m 100 --out fig1.csv
    concurrence-bounds family-scan --x-grid 0:1:21 --y-grid 0 --out scan.csv
    concurrence-bounds gap-scan --out gaps.csv
"""

import argparse
import enum
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np
import pandas as pd

from .Bounds import Bounds
from .Errors import ConcurrenceError, ConvergenceFailureError, DomainError, InvalidParamsError
from .LinAlg import BipartiteDims
from .Optim import OptimizerConfig
from .States import DensityMatrix, FamilyParams, States

logger = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"
CSV_SCHEMA_VERSION = 1

FIGURE1_COLUMNS = ["seed", "M", "rank", "lb_standard", "lb_optimized", "ub", "gap", "eof_lb", "ppt_min_eig", "certified"]
FAMILY_COLUMNS = ["x", "y", "classification", "c_tilde", "lb_standard", "lb_optimized", "ub", "certified"]
GAP_COLUMNS = ["source", "seed", "M", "x", "y", "lb_optimized", "ub", "gap"]


class ExitCode(enum.IntEnum):
    OK = 0
    VALIDATION = 2
    IO = 3
    NUMERICAL = 4


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


@dataclass
class RunManifest:
    command: str
    parameters: dict
    outputs: list
    toolVersion: str = TOOL_VERSION
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def toDict(self):
        return {"command": self.command, "parameters": self.parameters, "tool_version": self.toolVersion,
                "timestamp": self.timestamp, "outputs": self.outputs}

    @staticmethod
    def pathFor(outPath):
        return f"{outPath}.manifest.json"

    def write(self, outPath):
        path = self.pathFor(outPath)
        try:
            with open(path, "w") as f:
                json.dump(self.toDict(), f, indent=2)
        except OSError as exc:
            raise CliError(ExitCode.IO, f"Cannot write manifest {path}: {exc}") from exc
        return path


def parseGrid(text):
    """'start:stop:num' (inclusive linspace) or a comma-separated list"""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return [float(v) for v in np.linspace(float(start), float(stop), int(num))]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(ExitCode.VALIDATION, f"Invalid grid '{text}': {exc}") from exc


def parseCounts(text):
    try:
        counts = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(ExitCode.VALIDATION, f"Invalid count list '{text}': {exc}") from exc
    if not counts or min(counts) < 1:
        raise CliError(ExitCode.VALIDATION, f"Count list '{text}' must be non-empty with entries >= 1")
    return counts


def optimizerConfig(args):
    try:
        return OptimizerConfig(restarts=args.restarts, maxIters=args.max_iters, tol=args.tol, step=args.step,
                               seed=args.seed, method=args.method, itersPerParam=args.iters_per_param)
    except ValueError as exc:
        raise CliError(ExitCode.VALIDATION, f"Invalid optimizer configuration: {exc}") from exc


def parameters(args):
    return {key: value for key, value in sorted(vars(args).items()) if key not in ("handler",)}


def writeCsv(frame, path, command):
    try:
        with open(path, "w", newline="") as f:
            f.write(f"# concurrence-bounds {command} schema v{CSV_SCHEMA_VERSION}\n")
            frame.to_csv(f, index=False, float_format="%.12g")
    except OSError as exc:
        raise CliError(ExitCode.IO, f"Cannot write {path}: {exc}") from exc


def mapRows(function, tasks, threads):
    """Ordered results regardless of completion order"""
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(function, tasks))
    return [function(task) for task in tasks]


def figure1Row(task):
    seed, m, cfg, ubLength = task
    rho = States.randomInducedState(m, BipartiteDims(2, 3), seed)
    report = Bounds.report(rho, cfg.withSeed(seed), ubLength)
    return {"seed": seed, "M": m, "rank": rho.rank(), "lb_standard": report.lbStandard,
            "lb_optimized": report.lbOptimized, "ub": report.ub, "gap": report.gap, "eof_lb": report.eofLb,
            "ppt_min_eig": report.pptMinEigenvalue, "certified": report.exactness.certified}


def familyRow(task):
    x, y, cfg, ubLength = task
    params = FamilyParams(x, y)
    family = States.familyExactConcurrence(params)
    report = Bounds.report(States.familyState(params), cfg, ubLength)
    return {"x": x, "y": y, "classification": family.classification.value, "c_tilde": family.cTilde,
            "lb_standard": report.lbStandard, "lb_optimized": report.lbOptimized, "ub": report.ub,
            "certified": report.exactness.certified}


def gapRow(task):
    source, seed, m, x, y, cfg, ubLength = task
    if source == "family":
        rho = States.familyState(FamilyParams(x, y))
    else:
        rho = States.randomInducedState(m, BipartiteDims(2, 3), seed)
        cfg = cfg.withSeed(seed)
    lb = Bounds.lowerBoundOptimized(rho, cfg).value
    ub = Bounds.upperBound(rho, cfg, ubLength).value
    return {"source": source, "seed": seed, "M": m, "x": x, "y": y, "lb_optimized": lb, "ub": ub, "gap": ub - lb}


def cmdBounds(args):
    cfg = optimizerConfig(args)
    if args.family is not None and args.input:
        raise CliError(ExitCode.VALIDATION, "Give either a density-matrix JSON file or --family X Y, not both")
    if args.family is not None:
        x, y = args.family
        rho = States.familyState(FamilyParams(x, y))
        source = {"family": [x, y]}
    elif args.input:
        rho = DensityMatrix.load(args.input)
        source = {"input": args.input}
    else:
        raise CliError(ExitCode.VALIDATION, "Give a density-matrix JSON file or --family X Y")
    report = Bounds.report(rho, cfg, args.ub_length)
    text = json.dumps({**source, **report.toDict()}, indent=2)
    if args.out:
        try:
            with open(args.out, "w") as f:
                f.write(text + "\n")
        except OSError as exc:
            raise CliError(ExitCode.IO, f"Cannot write {args.out}: {exc}") from exc
        RunManifest("bounds", parameters(args), [args.out]).write(args.out)
    else:
        print(text)
    return ExitCode.OK


def cmdFigure1(args):
    cfg = optimizerConfig(args)
    mList = parseCounts(args.m_list)
    if args.per_m < 1:
        raise CliError(ExitCode.VALIDATION, f"--per-m {args.per_m} must be >= 1")
    tasks = [(States.deriveSeed(args.seed, m, i), m, cfg, args.ub_length)
             for m in mList for i in range(args.per_m)]
    logger.info("figure1: %d states over M=%s", len(tasks), mList)
    frame = pd.DataFrame(mapRows(figure1Row, tasks, args.threads), columns=FIGURE1_COLUMNS)
    writeCsv(frame, args.out, "figure1")
    RunManifest("figure1", parameters(args), [args.out]).write(args.out)
    return ExitCode.OK


def familyGrid(xs, ys, clip):
    points = []
    for x in xs:
        for y in ys:
            try:
                FamilyParams(x, y)
            except InvalidParamsError as exc:
                if clip:
                    continue
                raise CliError(ExitCode.VALIDATION, f"Grid point ({x}, {y}) rejected: {exc}") from exc
            points.append((x, y))
    if not points:
        raise CliError(ExitCode.VALIDATION, "No grid point lies in the triangle x >= y >= 0, x + y <= 1")
    return points


def cmdFamilyScan(args):
    cfg = optimizerConfig(args)
    points = familyGrid(parseGrid(args.x_grid), parseGrid(args.y_grid), args.clip)
    tasks = [(x, y, cfg, args.ub_length) for x, y in points]
    logger.info("family-scan: %d grid points", len(tasks))
    frame = pd.DataFrame(mapRows(familyRow, tasks, args.threads), columns=FAMILY_COLUMNS)
    writeCsv(frame, args.out, "family-scan")
    RunManifest("family-scan", parameters(args), [args.out]).write(args.out)
    return ExitCode.OK


def cmdGapScan(args):
    cfg = optimizerConfig(args)
    mList = parseCounts(args.m_list)
    if args.random < 0:
        raise CliError(ExitCode.VALIDATION, f"--random {args.random} must be >= 0")
    tasks = [("random", States.deriveSeed(args.seed, mList[i % len(mList)], i), mList[i % len(mList)],
              None, None, cfg, args.ub_length) for i in range(args.random)]
    tasks += [("family", None, None, x, y, cfg, args.ub_length)
              for x, y in familyGrid(parseGrid(args.x_grid), parseGrid(args.y_grid), clip=True)]
    logger.info("gap-scan: %d random states, %d family points", args.random, len(tasks) - args.random)
    frame = pd.DataFrame(mapRows(gapRow, tasks, args.threads), columns=GAP_COLUMNS)
    frame = frame.sort_values("gap", ascending=False, kind="mergesort").reset_index(drop=True)
    writeCsv(frame, args.out, "gap-scan")
    RunManifest("gap-scan", parameters(args), [args.out]).write(args.out)
    return ExitCode.OK


def buildParser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Master seed")
    common.add_argument("--restarts", type=int, default=20, help="Optimizer restarts per search")
    common.add_argument("--max-iters", type=int, default=2000, help="Iterations per restart")
    common.add_argument("--iters-per-param", type=int, default=200,
                        help="Minimum iterations per restart per search parameter (0 disables scaling)")
    common.add_argument("--tol", type=float, default=1e-9, help="Convergence tolerance on the objective")
    common.add_argument("--step", type=float, default=0.1, help="Initial simplex step")
    common.add_argument("--method", default="nelder-mead", choices=["nelder-mead", "powell"])
    common.add_argument("--threads", type=int, default=1, help="Worker processes for sweeps")
    common.add_argument("--ub-length", type=int, default=None, help="Decomposition length L for the upper bound")
    common.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    parser = argparse.ArgumentParser(prog="concurrence-bounds",
                                     description="Lower and upper bounds on the concurrence of 2xK mixed states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="BoundReport of one state as JSON")
    p.add_argument("input", nargs="?", help="Density-matrix JSON file")
    p.add_argument("--family", nargs=2, type=float, metavar=("X", "Y"), help="Use rho_{x,y} instead of a file")
    p.add_argument("--out", help="Write the report here instead of stdout")
    p.set_defaults(handler=cmdBounds)

    p = sub.add_parser("figure1", parents=[common], help="LB/UB over random induced 2x3 ensembles as CSV")
    p.add_argument("--m-list", default="4,6,10", help="Environment dimensions M")
    p.add_argument("--per-m", type=int, default=100, help="States per ensemble")
    p.add_argument("--out", default="figure1.csv")
    p.set_defaults(handler=cmdFigure1)

    p = sub.add_parser("family-scan", parents=[common], help="Bounds across the rho_{x,y} family as CSV")
    p.add_argument("--x-grid", default="0:1:11")
    p.add_argument("--y-grid", default="0")
    p.add_argument("--clip", action="store_true", help="Drop grid points outside the valid triangle")
    p.add_argument("--out", default="family_scan.csv")
    p.set_defaults(handler=cmdFamilyScan)

    p = sub.add_parser("gap-scan", parents=[common], help="ub - lb over random and family states, largest first")
    p.add_argument("--random", type=int, default=20, help="Number of random induced states")
    p.add_argument("--m-list", default="4,6,10")
    p.add_argument("--x-grid", default="0.25,0.5,0.75,1")
    p.add_argument("--y-grid", default="0,0.25,0.5")
    p.add_argument("--out", default="gap_scan.csv")
    p.set_defaults(handler=cmdGapScan)
    return parser


def main(argv=None):
    args = buildParser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), stream=sys.stderr,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    try:
        return int(args.handler(args))
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(exc.code)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.IO)
    except (ConvergenceFailureError, DomainError) as exc:
        print(f"error: numerical fault ({type(exc).__name__}): {exc}", file=sys.stderr)
        return int(ExitCode.NUMERICAL)
    except ConcurrenceError as exc:
        print(f"error: invalid input ({type(exc).__name__}): {exc}", file=sys.stderr)
        return int(ExitCode.VALIDATION)


if __name__ == "__main__":
    sys.exit(main())
