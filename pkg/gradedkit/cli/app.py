"""
Batch surface: check spec files, build constructions, run the state-monad demo,
execute or denote effect programs, and compute resolutions.

Exit codes: 0 all laws pass, 1 a law fails, 2 the input was rejected.
"""
import logging
import sys
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import typer
from tqdm import tqdm
from typing_extensions import Annotated

from gradedkit.cli.render import dumps, render_report, render_table, report_payload
from gradedkit.core.config import ToolkitConfig, set_active_config
from gradedkit.core.duals import CoEMGradedCategory, CoEMIndexedCategory, CoKleisliCategory
from gradedkit.core.effectlang import (
    check_adequacy,
    check_layouts,
    denote,
    infer_effect,
    load_corpus,
    load_program,
    run,
    state_monads_for,
)
from gradedkit.core.em_graded import EMGradedCategory, em_graded_enumerate
from gradedkit.core.em_indexed import em_indexed_build, em_indexed_projection
from gradedkit.core.errors import GradedKitError, PreconditionError, SizeBoundError, SpecError
from gradedkit.core.fincat import Category
from gradedkit.core.graded import GradedComonadData, GradedMonadData, check_graded_comonad, check_graded_monad, compare_lax_actions
from gradedkit.core.indexed import (
    IndexedComonadData,
    IndexedMonadData,
    MonadData,
    check_indexed_comonad,
    check_indexed_monad,
    graded_from_indexed,
)
from gradedkit.core.kleisli import KleisliCategory
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.resolutions import resolve
from gradedkit.core.sections import sections_category
from gradedkit.core.specfiles import LoadedSpec, category_document, check_loaded, load_spec, revalidate, write_document
from gradedkit.core.statemonads import apply_state, build_state_monads, stores
from gradedkit.core.utils import now_stamp, safe_stem
from gradedkit.core.zoo import graded_over_terminal

log = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, no_args_is_help=True, help="Check and build graded and indexed (co)monads.")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class OutputFormat(str, Enum):
    text = "text"
    json = "json"


class SpecKind(str, Enum):
    category = "category"
    graded = "graded"
    indexed = "indexed"
    monad = "monad"
    graded_comonad = "graded_comonad"
    indexed_comonad = "indexed_comonad"
    mutation = "mutation"


class Construction(str, Enum):
    em_graded = "em-graded"
    kl_graded = "kl-graded"
    em_indexed = "em-indexed"
    co_em = "co-em"
    co_kl = "co-kl"
    sections = "sections"


class EffectAction(str, Enum):
    run = "run"
    denote = "denote"
    check = "check"


FormatOpt = Annotated[Optional[OutputFormat], typer.Option("--format", "-f", help="text or json (default from config.json)")]
VerboseOpt = Annotated[int, typer.Option("--verbose", "-v", count=True, help="-v info logging and every entry, -vv debug")]
MaxMorphismsOpt = Annotated[Optional[int], typer.Option("--max-morphisms", min=1, help="size bound for enumerations")]
AuditOpt = Annotated[bool, typer.Option("--audit/--no-audit", help="run the uniqueness audits on factorizations")]


# ---------- Plumbing ----------


def _setup(verbose: int, max_morphisms: Optional[int]) -> ToolkitConfig:
    cfg = ToolkitConfig.load()
    if max_morphisms is not None:
        cfg.max_morphisms = max_morphisms
    set_active_config(cfg)
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(cfg.log_level).upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)
    return cfg


def _format(fmt: Optional[OutputFormat], cfg: ToolkitConfig) -> OutputFormat:
    if fmt is not None:
        return fmt
    try:
        return OutputFormat(cfg.output_format)
    except ValueError:
        return OutputFormat.text


@contextmanager
def _progress(desc: str) -> Iterator:
    """A tqdm bar on stderr fed by percent callbacks; silent when stderr is not a terminal."""
    bar = tqdm(total=100, desc=desc, file=sys.stderr, disable=None, leave=False)
    seen = [0]

    def on_progress(pct: int):
        pct = max(0, min(100, pct))
        if pct > seen[0]:
            bar.update(pct - seen[0])
            seen[0] = pct

    try:
        yield on_progress
    finally:
        bar.close()


@contextmanager
def _input_errors(fmt: OutputFormat) -> Iterator[None]:
    try:
        yield
    except GradedKitError as e:
        payload: Dict[str, Any] = {"error": type(e).__name__, "message": str(e)}
        if isinstance(e, SpecError) and e.errors:
            payload["errors"] = e.errors
        report = getattr(e, "report", None)
        if isinstance(report, LawReport):
            payload["report"] = report_payload(report)
        if fmt is OutputFormat.json:
            typer.echo(dumps(payload))
        else:
            typer.echo(f"error: {e}", err=True)
            if isinstance(report, LawReport):
                typer.echo(render_report(report), err=True)
        raise typer.Exit(EXIT_INPUT)


def _emit_report(rep: LawReport, fmt: OutputFormat, verbose: int, extra: Optional[Dict[str, Any]] = None):
    if fmt is OutputFormat.json:
        payload = report_payload(rep)
        if extra:
            payload.update(extra)
        typer.echo(dumps(payload))
    else:
        for k, v in (extra or {}).items():
            typer.echo(f"{k}: {v}")
        typer.echo(render_report(rep, verbose))
    raise typer.Exit(EXIT_PASS if rep.passed else EXIT_FAIL)


def _as_graded(spec: LoadedSpec) -> GradedMonadData:
    v = spec.value
    if isinstance(v, GradedMonadData):
        return v
    if isinstance(v, MonadData):
        return graded_over_terminal(v)
    raise SpecError(f"{spec.source} holds a {spec.kind} spec; a graded monad or a monad is needed")


def _as_indexed(spec: LoadedSpec) -> IndexedMonadData:
    if not isinstance(spec.value, IndexedMonadData):
        raise SpecError(f"{spec.source} holds a {spec.kind} spec; an indexed monad is needed")
    return spec.value


def _require_laws(rep: LawReport, name: str):
    if not rep.passed:
        first = rep.first_failure()
        raise PreconditionError(f"{name} fails {first.axiom if first else 'its laws'}", rep)


def _construct(spec: LoadedSpec, construction: Construction, cfg: ToolkitConfig) -> Category:
    v = spec.value
    if construction in (Construction.em_graded, Construction.kl_graded):
        gm = _as_graded(spec)
        _require_laws(check_graded_monad(gm), gm.name)
        if construction is Construction.kl_graded:
            return KleisliCategory(gm, max_morphisms=cfg.max_morphisms)
        try:
            return em_graded_enumerate(gm)
        except SizeBoundError as e:
            log.warning("%s; listing the free algebras only", e)
            return EMGradedCategory(gm)
    if construction in (Construction.em_indexed, Construction.sections):
        im = _as_indexed(spec)
        _require_laws(check_indexed_monad(im), im.name)
        em = em_indexed_build(im)
        return em if construction is Construction.em_indexed else sections_category(em_indexed_projection(em))
    if isinstance(v, GradedComonadData):
        _require_laws(check_graded_comonad(v), v.name)
        return CoEMGradedCategory(v) if construction is Construction.co_em else CoKleisliCategory(v, max_morphisms=cfg.max_morphisms)
    if isinstance(v, IndexedComonadData) and construction is Construction.co_em:
        _require_laws(check_indexed_comonad(v), v.name)
        return CoEMIndexedCategory(v)
    raise SpecError(f"{construction.value} cannot be built from a {spec.kind} spec")


# ---------- Commands ----------


@app.command()
def check(
    path: Annotated[Path, typer.Argument(help="spec file (JSON)")],
    kind: Annotated[Optional[SpecKind], typer.Option("--kind", help="expected kind of the spec")] = None,
    fmt: FormatOpt = None,
    verbose: VerboseOpt = 0,
    max_morphisms: MaxMorphismsOpt = None,
):
    """Run the law suite matching the spec file."""
    cfg = _setup(verbose, max_morphisms)
    out = _format(fmt, cfg)
    with _input_errors(out):
        spec = load_spec(path, cfg.max_morphisms)
        if kind is not None and kind.value != spec.kind:
            raise SpecError(f"{path} holds a {spec.kind} spec, not {kind.value}")
        with _progress(f"check {spec.name}") as on_progress:
            rep = check_loaded(spec, on_progress=on_progress)
    _emit_report(rep, out, verbose)


@app.command()
def build(
    path: Annotated[Path, typer.Argument(help="spec file (JSON)")],
    construction: Annotated[Construction, typer.Argument(help="which category to build")],
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="write the category to this file, or a stamped file inside this directory")] = None,
    audit: Annotated[bool, typer.Option("--audit/--no-audit", help="list every member triple of each Kleisli class")] = False,
    verbose: VerboseOpt = 0,
    max_morphisms: MaxMorphismsOpt = None,
):
    """Build a category and emit it in the spec-file format with a provenance block."""
    cfg = _setup(verbose, max_morphisms)
    with _input_errors(OutputFormat.text):
        spec = load_spec(path, cfg.max_morphisms)
        cat = _construct(spec, construction, cfg)
        doc = category_document(cat, construction.value, spec, max_morphisms=cfg.max_morphisms, members=audit)
        fc = revalidate(doc)
    if out is None:
        typer.echo(dumps(doc))
    else:
        if out.is_dir():
            out = out / f"{safe_stem(str(path))}_{construction.value}_{now_stamp()}.json"
        write_document(doc, out)
        typer.echo(f"wrote {out}: {len(fc.objects())} objects, {len(fc.morphisms())} morphisms")
    raise typer.Exit(EXIT_PASS)


@app.command("state-demo")
def state_demo(
    v: Annotated[int, typer.Option("--v", min=1, help="number of values")] = 2,
    n: Annotated[int, typer.Option("--n", min=0, help="Inj truncation bound")] = 2,
    probe: Annotated[Optional[int], typer.Option("--probe", min=0, help="largest probe set")] = None,
    fmt: FormatOpt = None,
    verbose: VerboseOpt = 0,
):
    """Graded and indexed state monads: both law suites, shared tables, the derived graded monad."""
    cfg = _setup(verbose, None)
    out = _format(fmt, cfg)
    with _input_errors(out):
        sm = build_state_monads(v, n, probe)
        rep = LawReport(f"state monads |V|={v}, N={n}")
        with _progress("graded") as on_progress:
            rep.merge(check_graded_monad(sm.graded, on_progress=on_progress), prefix="graded ")
        with _progress("indexed") as on_progress:
            rep.merge(check_indexed_monad(sm.indexed, on_progress=on_progress), prefix="indexed ")
        gm, im, M = sm.graded, sm.indexed, sm.grading
        for m in M.objects():
            for X in sm.category.objects():
                rep.check("shared T tables", VALUES, lambda m=m, X=X: (gm.T_ob(m, X), im.T_ob(m, X)), m=m, object=X)
        for u in M.morphisms():
            for X in sm.category.objects():
                rep.check("shared T tables", sm.category, lambda u=u, X=X: (gm.T_u(u, X), im.T_u(u, X)), u=u, object=X)
        rep.merge(compare_lax_actions(graded_from_indexed(im, M), gm), prefix="derived from indexed ")
    _emit_report(rep, out, verbose)


def _parse_store(text: Optional[str]) -> List[int]:
    if text is None or not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise SpecError(f"store {text!r} must be comma-separated integers") from None


@app.command()
def effect(
    action: Annotated[EffectAction, typer.Argument(help="run, denote or check")],
    path: Annotated[Path, typer.Argument(help="program file, or a directory of .efl files for check")],
    store: Annotated[Optional[str], typer.Option("--store", help="initial store, e.g. 0,1")] = None,
    width: Annotated[Optional[int], typer.Option("--width", min=0, help="layout width for check")] = None,
    fmt: FormatOpt = None,
    verbose: VerboseOpt = 0,
):
    """Execute a program, print its denotation, or check run = denote over a corpus."""
    cfg = _setup(verbose, None)
    out = _format(fmt, cfg)
    with _input_errors(out):
        sm = state_monads_for()
        V = sm.values
        if action is EffectAction.check:
            programs = load_corpus(path, len(V)) if path.is_dir() else [load_program(path, len(V))]
            if not programs:
                raise SpecError(f"no .efl programs in {path}")
            w = cfg.max_grade if width is None else width
            rep = check_adequacy(programs, sm)
            for p in programs:
                if infer_effect(p).footprint <= w:
                    rep.merge(check_layouts(p, w, sm))
            _emit_report(rep, out, verbose, {"programs": len(programs)})
        if not path.is_file():
            raise SpecError(f"program file {path} does not exist")
        p = load_program(path, len(V))
        grade = infer_effect(p)
        if action is EffectAction.run:
            w0 = tuple(_parse_store(store))
            result_store, value = run(p, w0, V)
            agrees = apply_state(V, denote(p, sm), w0) == (result_store, value)
            if out is OutputFormat.json:
                typer.echo(dumps({"program": p.name, "store": w0, "result_store": result_store, "value": value, "agrees_with_denotation": agrees}))
            else:
                typer.echo(f"store: {result_store}")
                typer.echo(f"value: {value}")
                if not agrees:
                    typer.echo("denotation disagrees", err=True)
            raise typer.Exit(EXIT_PASS if agrees else EXIT_FAIL)
        e = denote(p, sm)
        rows = [(w0, *apply_state(V, e, w0)) for w0 in stores(V, e.grade)]
    if out is OutputFormat.json:
        typer.echo(dumps({
            "program": p.name,
            "footprint": grade.footprint,
            "registers": list(p.registers()),
            "table": [{"store": a, "result_store": b, "value": c} for a, b, c in rows],
        }))
    else:
        typer.echo(f"{p.name}: grade {grade.footprint}, registers {list(p.registers())}")
        typer.echo(render_table([[str(a), str(b), str(c)] for a, b, c in rows], ["store", "store'", "value"]))
    raise typer.Exit(EXIT_PASS)


@app.command("resolve")
def resolve_cmd(
    path: Annotated[Path, typer.Argument(help="graded monad spec file")],
    audit: AuditOpt = False,
    fmt: FormatOpt = None,
    verbose: VerboseOpt = 0,
    max_morphisms: MaxMorphismsOpt = None,
):
    """EM and Kleisli resolutions of a graded monad with the comparison witnesses."""
    cfg = _setup(verbose, max_morphisms)
    out = _format(fmt, cfg)
    with _input_errors(out):
        gm = _as_graded(load_spec(path, cfg.max_morphisms))
        _require_laws(check_graded_monad(gm), gm.name)
        em_res, kl_res, rep = resolve(gm, audit=audit)
        extra = {
            "EM resolution": f"{em_res.name}, {len(em_res.carrier.objects())} objects",
            "Kl resolution": f"{kl_res.name}, {len(kl_res.carrier.objects())} objects",
        }
    _emit_report(rep, out, verbose, extra)
