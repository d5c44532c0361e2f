import json
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Optional

import numpy as np
import typer
from loguru import logger
from pydantic import BaseModel

from prymtools.config import PrymSettings, load_settings
from prymtools.errors import DomainError, InputFormatError, NonGenericTargetError, PrymError
from prymtools.graphs.core import Graph, first_spanning_tree, genus
from prymtools.graphs.cover import FreeDoubleCover, loopless_model
from prymtools.graphs.divisors import jacobian_order, jacobian_structure, spanning_tree_count
from prymtools.graphs.documents import dump_cover, dump_graph, load_cover, load_graph
from prymtools.prym.abel import (
    FiberSolver,
    TorsorPoint,
    codimension_one_scan,
    degree_patterns,
    global_degree,
    scan_cells,
    volume_cover_total,
)
from prymtools.prym.group import PRYM_METHODS, PrymMethod, kernel_norm_structure, prym_orders, prym_structure
from prymtools.prym.lattice import prym_basis, prym_volumes, vol2_jacobian_gram
from prymtools.prym.ogods import enumerate_ogods, rank_counts, vol2_jacobian, vol2_prym
from prymtools.selftest.fixtures import load_fixture
from prymtools.selftest.runner import SelfTestRunner
from prymtools.utils import elapsed_ms, parse_fraction, to_json_value
from prymtools.zeta.euler import euler_product_reciprocal
from prymtools.zeta.ihara import (
    ZetaReport,
    artin_L_reciprocal,
    factorization_holds,
    ihara_zeta_reciprocal,
    lfunction_prym_order,
    northshield_jacobian_order,
    prym_order_from_zeta,
)

app = typer.Typer(no_args_is_help=True, add_completion=False)
prym_app = typer.Typer(no_args_is_help=True)
abel_app = typer.Typer(no_args_is_help=True)
app.add_typer(prym_app, name="prym", help="Prym group orders and Prym volumes.")
app.add_typer(abel_app, name="abel-prym", help="Cells, harmonicity and fibers of the Abel-Prym map.")

GraphOption = Annotated[Optional[Path], typer.Option("--graph", help="Graph JSON document.")]
CoverOption = Annotated[Optional[Path], typer.Option("--cover", help="Cover JSON document.")]
FixtureOption = Annotated[Optional[str], typer.Option("--fixture", help="Name of a bundled example cover.")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Seed for random choices.")]
CasesOption = Annotated[Optional[int], typer.Option("--cases", help="Number of random cases or targets.")]

METHOD_SPELLINGS: dict[str, PrymMethod] = {"ratio": "ratio", "signed-det": "signed_det", "ogod": "ogod_sum"}
# result keys are also accepted on input
METHOD_NAMES: dict[str, PrymMethod] = {**METHOD_SPELLINGS, **{name: name for name in PRYM_METHODS}}


class Report(BaseModel):
    command: str
    inputs: dict[str, Any]
    results: Any
    agreement: Optional[bool] = None
    timing_ms: int


def _settings(ctx: typer.Context, **overrides: Any) -> PrymSettings:
    settings: PrymSettings = ctx.obj
    updates = {key: value for key, value in overrides.items() if value is not None}
    return settings.model_copy(update=updates)


def _configure_logging(settings: PrymSettings) -> None:
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level)
    logger.add(f"{settings.log_dir}/log_{{time:YYYY-MM-DD}}.log", rotation="1 day", level=settings.log_level)


@app.callback()
def main(
    ctx: typer.Context,
    config: Annotated[Optional[Path], typer.Option("--config", help="Path of the ini file.")] = None,
) -> None:
    """Prym groups, Prym volumes, zeta functions and the Abel-Prym map of graph double covers."""
    settings = load_settings(config)
    _configure_logging(settings)
    ctx.obj = settings


def _load_cover(graph: Optional[Path], cover: Optional[Path], fixture: Optional[str]) -> FreeDoubleCover:
    if fixture is not None:
        return load_fixture(fixture)
    if cover is None:
        raise InputFormatError("a cover is required: pass --cover or --fixture")
    return load_cover(cover, load_graph(graph) if graph is not None else None)


def _load_graph(graph: Optional[Path], cover: Optional[Path], fixture: Optional[str]) -> Graph:
    if graph is not None and cover is None:
        return load_graph(graph)
    return _load_cover(graph, cover, fixture).base


def _cover_inputs(cov: FreeDoubleCover, **extra: Any) -> dict[str, Any]:
    return {"cover": dump_cover(cov), **extra}


def _emit(command: str, inputs: dict[str, Any], results: Any, agreement: Optional[bool], timing: list[int]) -> None:
    report = Report(
        command=command,
        inputs=to_json_value(inputs),
        results=to_json_value(results),
        agreement=agreement,
        timing_ms=timing[0],
    )
    typer.echo(json.dumps(report.model_dump(), sort_keys=True))
    if agreement is False:
        raise typer.Exit(code=2)


@app.command("genus")
def genus_command(graph: GraphOption = None, cover: CoverOption = None, fixture: FixtureOption = None) -> None:
    """Genus of a graph, or of the base and total graph of a cover."""
    with elapsed_ms() as timing:
        if graph is not None and cover is None:
            g = load_graph(graph)
            inputs = {"graph": dump_graph(g)}
            results: dict[str, Any] = {"genus": genus(g)}
            agreement = None
        else:
            cov = _load_cover(graph, cover, fixture)
            inputs = _cover_inputs(cov)
            results = {"base": genus(cov.base), "total": genus(cov.total)}
            agreement = results["total"] == 2 * results["base"] - 1
    _emit("genus", inputs, results, agreement, timing)


@app.command("jacobian")
def jacobian_command(graph: GraphOption = None, cover: CoverOption = None, fixture: FixtureOption = None) -> None:
    """Jacobian group structure, spanning tree count and Jacobian volume."""
    with elapsed_ms() as timing:
        g = _load_graph(graph, cover, fixture)
        order = jacobian_order(g)
        trees = spanning_tree_count(g)
        volumes = {"kirchhoff": vol2_jacobian(g), "trees": vol2_jacobian(g, "trees"), "gram": vol2_jacobian_gram(g)}
        results = {
            "order": order,
            "structure": jacobian_structure(g),
            "spanning_trees": trees,
            "least_spanning_tree": sorted(first_spanning_tree(g)),
            "vol2": volumes,
        }
        agreement = order == trees and len(set(volumes.values())) == 1
    _emit("jacobian", {"graph": dump_graph(g)}, results, agreement, timing)


@prym_app.command("order")
def prym_order_command(
    graph: GraphOption = None,
    cover: CoverOption = None,
    fixture: FixtureOption = None,
    method: Annotated[str, typer.Option("--method", help="all, ratio, signed-det or ogod.")] = "all",
) -> None:
    """|Prym| by one or all of the three formulas."""
    if method == "all":
        methods: tuple[PrymMethod, ...] = PRYM_METHODS
    elif method in METHOD_NAMES:
        methods = (METHOD_NAMES[method],)
    else:
        raise InputFormatError(f"unknown method {method!r}, choose from all, {', '.join(METHOD_SPELLINGS)}")
    with elapsed_ms() as timing:
        cov = _load_cover(graph, cover, fixture)
        report = prym_orders(cov, methods)
        kernel = kernel_norm_structure(cov)
        results = {
            **report.values,
            "kernel_norm": kernel,
            "prym_structure": prym_structure(cov),
        }
        agreement = report.agreement and kernel.order == 2 * next(iter(report.values.values()))
    _emit("prym order", _cover_inputs(cov, method=method), results, agreement, timing)


@prym_app.command("volume")
def prym_volume_command(graph: GraphOption = None, cover: CoverOption = None, fixture: FixtureOption = None) -> None:
    """Squared Prym volume by ogod sum, Gram determinant and Jacobian ratio."""
    with elapsed_ms() as timing:
        cov = _load_cover(graph, cover, fixture)
        report = prym_volumes(cov)
    _emit("prym volume", _cover_inputs(cov), report, report.agreement, timing)


@app.command("ogods")
def ogods_command(graph: GraphOption = None, cover: CoverOption = None, fixture: FixtureOption = None) -> None:
    """Odd genus-one decompositions with their ranks and weights."""
    with elapsed_ms() as timing:
        cov = _load_cover(graph, cover, fixture)
        records = enumerate_ogods(cov)
        order_sum = sum(record.multiplicity for record in records)
        results = {
            "ogods": records,
            "count": len(records),
            "rank_counts": rank_counts(records),
            "vol2_prym": vol2_prym(cov, records),
            "order_sum": order_sum,
        }
        agreement = order_sum == prym_orders(cov, ("ratio",)).order
    _emit("ogods", _cover_inputs(cov), results, agreement, timing)


@app.command("zeta")
def zeta_command(
    ctx: typer.Context, graph: GraphOption = None, cover: CoverOption = None, fixture: FixtureOption = None
) -> None:
    """Reciprocal Ihara zeta function and its expansion at s = 1."""
    limit = _settings(ctx).max_path_length
    with elapsed_ms() as timing:
        g = _load_graph(graph, cover, fixture)
        polynomial = ihara_zeta_reciprocal(g)
        results: dict[str, Any] = {"reciprocal": ZetaReport.of(polynomial)}
        checks = []
        if genus(g) >= 2:
            results["jacobian_order"] = northshield_jacobian_order(g)
            checks.append(results["jacobian_order"] == jacobian_order(g))
        if len(g.edges) <= 6:
            oracle = euler_product_reciprocal(g, limit)
            results["euler_product"] = oracle.as_list()
            checks.append(oracle == polynomial.truncate(limit))
    _emit("zeta", {"graph": dump_graph(g)}, results, all(checks) if checks else None, timing)


@app.command("lfunction")
def lfunction_command(graph: GraphOption = None, cover: CoverOption = None, fixture: FixtureOption = None) -> None:
    """Reciprocal Artin-Ihara L-function of the cover and the Prym order it encodes."""
    with elapsed_ms() as timing:
        cov = _load_cover(graph, cover, fixture)
        order = lfunction_prym_order(cov)
        results: dict[str, Any] = {
            "reciprocal": ZetaReport.of(artin_L_reciprocal(cov)),
            "prym_order": order,
            "factorization": factorization_holds(cov),
        }
        if cov.genus >= 2:
            results["prym_order_from_zeta"] = prym_order_from_zeta(cov)
        expected = prym_orders(cov, ("signed_det",)).order
        agreement = bool(results["factorization"]) and order == results.get("prym_order_from_zeta", expected) == expected
    _emit("lfunction", _cover_inputs(cov), results, agreement, timing)


@abel_app.command("cells")
def cells_command(
    ctx: typer.Context,
    graph: GraphOption = None,
    cover: CoverOption = None,
    fixture: FixtureOption = None,
    svg: Annotated[Optional[Path], typer.Option("--svg", help="Write the cell picture (g - 1 = 2 only).")] = None,
) -> None:
    """Every cell of the symmetric product with its matrix and degree."""
    settings = _settings(ctx)
    with elapsed_ms() as timing:
        cov = _load_cover(graph, cover, fixture)
        model = loopless_model(cov)
        basis = prym_basis(model.cover)
        cells = scan_cells(model.cover, basis, settings.workers)
        lhs, rhs = volume_cover_total(model.cover, basis)
        results: dict[str, Any] = {
            "cells": [
                {**cell.as_dict(), "original_edges": [model.original_total_edge(e) for e in cell.edges]}
                for cell in cells
                if cell.degree
            ],
            "cell_count": len(cells),
            "contracted": sum(1 for cell in cells if not cell.degree),
            "volume_cover": {"cells": lhs, "expected": rhs},
        }
        if svg is not None:
            from prymtools.prym.svg import draw_tessellation

            results["svg"] = {"path": str(svg), "cells": draw_tessellation(model.cover, basis, svg)}
    _emit("abel-prym cells", _cover_inputs(cov), results, lhs == rhs, timing)


@abel_app.command("harmonicity")
def harmonicity_command(
    ctx: typer.Context, graph: GraphOption = None, cover: CoverOption = None, fixture: FixtureOption = None
) -> None:
    """Balance at every codimension-one cell."""
    settings = _settings(ctx)
    with elapsed_ms() as timing:
        cov = _load_cover(graph, cover, fixture)
        reports = codimension_one_scan(loopless_model(cov).cover, workers=settings.workers)
        balanced = sum(1 for report in reports if report.balanced)
        results = {"cells": len(reports), "balanced": balanced, "patterns": degree_patterns(reports)}
    _emit("abel-prym harmonicity", _cover_inputs(cov), results, balanced == len(reports), timing)


def _parse_target(target: str) -> TorsorPoint:
    return TorsorPoint(tuple(parse_fraction(part, "target coordinate") for part in target.split(",")))


@abel_app.command("fiber")
def fiber_command(
    ctx: typer.Context,
    graph: GraphOption = None,
    cover: CoverOption = None,
    fixture: FixtureOption = None,
    target: Annotated[Optional[str], typer.Option("--target", help="Comma separated coordinates, e.g. 1/2,3.")] = None,
    seed: SeedOption = None,
) -> None:
    """All preimages of a target point; a random generic target when none is given."""
    settings = _settings(ctx, seed=seed)
    with elapsed_ms() as timing:
        cov = _load_cover(graph, cover, fixture)
        solver = FiberSolver(loopless_model(cov).cover)
        if target is not None:
            point = _parse_target(target)
            points = solver.fiber(point)
        else:
            point, points = _random_fiber(solver, np.random.default_rng(settings.seed))
        total = sum(p.local_degree for p in points)
        expected = 2**solver.basis.rank
        results = {"target": point, "points": points, "degree_sum": total, "expected": expected}
    _emit("abel-prym fiber", _cover_inputs(cov, target=target, seed=settings.seed), results, total == expected, timing)


def _random_fiber(solver: FiberSolver, rng: np.random.Generator, attempts: int = 1000) -> tuple[TorsorPoint, list[Any]]:
    for _ in range(attempts):
        point = solver.random_target(rng)
        try:
            return point, solver.fiber(point)
        except NonGenericTargetError:
            logger.info("non-generic target, resampling")
    raise DomainError("could not find a generic target")


@abel_app.command("global-degree")
def global_degree_command(
    ctx: typer.Context,
    graph: GraphOption = None,
    cover: CoverOption = None,
    fixture: FixtureOption = None,
    seed: SeedOption = None,
    cases: CasesOption = None,
) -> None:
    """Sum of local degrees over the fibers of random generic targets."""
    settings = _settings(ctx, seed=seed, cases=cases)
    with elapsed_ms() as timing:
        cov = _load_cover(graph, cover, fixture)
        report = global_degree(loopless_model(cov).cover, settings.cases, settings.seed)
    inputs = _cover_inputs(cov, seed=settings.seed, targets=settings.cases)
    _emit("abel-prym global-degree", inputs, report, report.agreement, timing)


@app.command("selftest")
def selftest_command(ctx: typer.Context, seed: SeedOption = None, cases: CasesOption = None) -> None:
    """Run the bundled example checks and the randomized suites."""
    settings = _settings(ctx, seed=seed, cases=cases)
    with elapsed_ms() as timing:
        report = SelfTestRunner(settings).run()
    inputs = {"seed": settings.seed, "cases": settings.cases}
    _emit("selftest", inputs, report, report.passed, timing)


def _command_name(argv: Sequence[str]) -> str:
    words = []
    for arg in argv:
        if arg.startswith("-"):
            break
        words.append(arg)
    return " ".join(words[:2]) or "prym"


def _error(command: str, code: str, message: str) -> None:
    typer.echo(json.dumps({"command": command, "error": {"code": code, "message": message}}, sort_keys=True))


def _click_kinds(error: BaseException) -> set[str]:
    """Class names along the MRO; typer may raise from its own bundled click."""
    return {cls.__name__ for cls in type(error).__mro__}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return its exit code instead of exiting."""
    args = list(sys.argv[1:] if argv is None else argv)
    command = _command_name(args)
    try:
        result = app(args=args, prog_name="prym", standalone_mode=False)
    except PrymError as e:
        logger.error(f"{command}: {e}")
        _error(command, e.error_code, str(e))
        return e.exit_code
    except Exception as e:
        kinds = _click_kinds(e)
        if "ClickException" in kinds:
            _error(command, "usage", e.format_message())  # type: ignore[attr-defined]
            return 1
        if "Abort" in kinds:
            return 1
        raise
    return result if isinstance(result, int) else 0


def entrypoint() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entrypoint()
