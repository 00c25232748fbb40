"""
Command line for hybrid space analysis

    hybridspace [--project DIR] [--out DIR] [--locale-comma] [--verbose] COMMAND

Exit status: 0 success, 1 invalid data, 2 usage, configuration or I/O problem.
"""
import contextlib
import functools
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional

import click

from charts import (
    ChartKind,
    ChartSpec,
    render_density_map,
    render_metrics_bubbles,
    render_modality,
    render_ranking,
    render_topology,
    to_svg,
)
from errors import AnalysisError, ConfigError, HybridSpaceError, InputFormatError
from import_data import parse_answer_key, parse_event_ledger, parse_media_registry, parse_survey, read_event_ledger
from ledger_validation import validate_ledger
from media_metrics import (
    MetricKey,
    format_percent,
    metrics_table,
    modality,
    place_density,
    survey_response_rate,
)
from models import MEDIA_TYPE_ORDER, EventLedger, MediaRegistry, QuestionKind
from project_config import ProjectConfig, load_project_config
from rankings import compare_spaces, default_segments, rank_media, type_share
from report_tables import TableFormat, emit_table
from survey_scoring import correlate_activity, score_survey, survey_modality
from topology import topology_series

logger = logging.getLogger(__name__)

METRIC_CHOICES = [key.value for key in MetricKey]


@dataclass(frozen=True)
class CliState:
    project: Optional[str]
    out: Optional[str]
    decimal_comma: bool


def handles_errors(command: Callable[..., Any]) -> Callable[..., Any]:
    """Turn domain errors into messages on stderr and the documented exit codes"""
    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except (ConfigError, InputFormatError, AnalysisError) as e:
            click.echo(f'error: {e}', err=True)
            ctx.exit(2)
        except HybridSpaceError as e:
            click.echo(f'error: {e}', err=True)
            ctx.exit(1)
        except BrokenPipeError:
            # reader went away (| head); stay quiet, including at interpreter exit
            with contextlib.suppress(OSError, ValueError):
                stdout = sys.stdout.fileno()
                os.dup2(os.open(os.devnull, os.O_WRONLY), stdout)
            ctx.exit(0)
        except OSError as e:
            click.echo(f'error: {e}', err=True)
            ctx.exit(2)
    return wrapper


def _load_config(state: CliState, **overrides: Any) -> ProjectConfig:
    return load_project_config(state.project, output=state.out, **overrides)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise InputFormatError(f'{path.name} is not UTF-8 (byte offset {e.start})') from e


def _load_registry(config: ProjectConfig) -> MediaRegistry:
    return parse_media_registry(_read(config.media))


def _load_ledger(config: ProjectConfig, registry: MediaRegistry) -> EventLedger:
    if config.events is None:
        logger.warning('No events file configured, using an empty ledger')
        return EventLedger(window=config.window)
    return parse_event_ledger(_read(config.events), registry, config.window)


def _write(config: ProjectConfig, name: str, text: str) -> Path:
    config.output.mkdir(parents=True, exist_ok=True)
    path = config.output / name
    path.write_text(text, encoding='utf-8', newline='\n')
    logger.debug('Wrote %s', path)
    return path


def _write_tables(config: ProjectConfig, stem: str, table: Any, comma: bool) -> None:
    for fmt in TableFormat:
        _write(config, f'{stem}.{fmt.suffix}', emit_table(table, fmt, comma))


@click.group()
@click.option('--project', type=click.Path(file_okay=False), help='Project directory (default: $HYBRIDSPACE_PROJECT or .)')
@click.option('--out', type=click.Path(file_okay=False), help='Output directory (overrides project.conf)')
@click.option('--locale-comma', is_flag=True, help='Use a decimal comma in percentages, e.g. 7,9%')
@click.option('--verbose', is_flag=True, help='Log debug details to stderr')
@click.pass_context
def cli(ctx: click.Context, project: Optional[str], out: Optional[str], locale_comma: bool, verbose: bool) -> None:
    """Media analytics for hybrid spaces of real places and virtual media."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    ctx.obj = CliState(project=project, out=out, decimal_comma=locale_comma)


@cli.command()
@click.pass_obj
@handles_errors
def validate(state: CliState) -> None:
    """Check the media registry, event ledger and survey files."""
    config = _load_config(state)
    registry = _load_registry(config)
    if config.events is None:
        raise ConfigError('project.conf names no events file to validate')

    ledger = read_event_ledger(_read(config.events), config.window)
    report = validate_ledger(ledger, registry)
    for line in report.lines():
        click.echo(line, err=True)

    if config.survey is not None and config.answer_key is not None:
        key = parse_answer_key(_read(config.answer_key))
        dataset = parse_survey(_read(config.survey), key)
        click.echo(f'survey: {len(dataset.participants)} participants, {len(dataset.completers)} completers', err=True)

    if not report.accepted:
        click.get_current_context().exit(1)


@cli.command()
@click.pass_obj
@handles_errors
def metrics(state: CliState) -> None:
    """Modality, range, interactions and response rate per medium."""
    config = _load_config(state)
    registry = _load_registry(config)
    ledger = _load_ledger(config, registry)
    comma = state.decimal_comma

    mix = modality(registry)
    shares = ' | '.join(f'{t.value} {format_percent(mix.share(t), 2, comma)}' for t in MEDIA_TYPE_ORDER)
    click.echo(f'modality: {shares}')

    table = metrics_table(ledger, registry)
    _write_tables(config, 'metrics', table, comma)
    _write_tables(config, 'metrics-modality', mix, comma)
    _write(config, 'metrics-modality.svg', to_svg(render_modality(
        mix, ChartSpec(ChartKind.MODALITY_BAR, title=f'{config.display_label}: media types'),
    )))
    _write(config, 'metrics-bubbles.svg', to_svg(render_metrics_bubbles(
        table, registry, ChartSpec(ChartKind.METRICS_BUBBLES, title=f'{config.display_label}: range, interactions, response rate'),
    )))
    click.echo(emit_table(table, TableFormat.MARKDOWN, comma), nl=False)


@cli.command()
@click.option('--by', 'by', type=click.Choice(METRIC_CHOICES), default=MetricKey.RANGE.value, show_default=True)
@click.option('--top-n', type=click.IntRange(min=1), help='Size of the top segment (default 10)')
@click.option('--bottom-m', type=click.IntRange(min=1), help='Size of the bottom segment (default: the rest)')
@click.pass_obj
@handles_errors
def rank(state: CliState, by: str, top_n: Optional[int], bottom_m: Optional[int]) -> None:
    """Rank media by a metric and break the ranking down by media type."""
    config = _load_config(state, top_n=top_n, bottom_m=bottom_m)
    registry = _load_registry(config)
    ledger = _load_ledger(config, registry)
    key = MetricKey(by)
    comma = state.decimal_comma

    ranking = rank_media(metrics_table(ledger, registry), key, registry)
    segments = [s for s in default_segments(len(ranking), config.top_n, config.bottom_m) if s.size > 0]
    shares = [type_share(ranking, segment, registry) for segment in segments]

    _write_tables(config, f'rank-{key.value}', ranking, comma)
    _write_tables(config, f'rank-{key.value}-shares', shares, comma)
    _write(config, f'rank-{key.value}.svg', to_svg(render_ranking(
        ranking, registry,
        ChartSpec(ChartKind.RANKING_BARS, log_scale=key is MetricKey.RANGE, title=f'Media by {key.heading.lower()}'),
    )))
    click.echo(emit_table(ranking, TableFormat.MARKDOWN, comma), nl=False)
    for share in shares:
        parts = ', '.join(f'{t.value} {format_percent(f, 2, comma)}' for t, f in share.shares.items())
        click.echo(f'{share.segment.label}: {parts}')


@cli.command()
@click.option('--metric', type=click.Choice(METRIC_CHOICES), default=MetricKey.INTERACTIONS.value, show_default=True)
@click.option('--svg/--no-svg', default=True, show_default=True, help='Also render the bubble chart')
@click.pass_obj
@handles_errors
def topology(state: CliState, metric: str, svg: bool) -> None:
    """Per-day, per-medium bubbles over the project window."""
    config = _load_config(state)
    registry = _load_registry(config)
    ledger = _load_ledger(config, registry)
    key = MetricKey(metric)

    series = topology_series(ledger, metrics_table(ledger, registry), key)
    _write_tables(config, f'topology-{key.value}', series, state.decimal_comma)
    if svg:
        _write(config, f'topology-{key.value}.svg', to_svg(render_topology(
            series, registry, ChartSpec(ChartKind.TOPOLOGY_BUBBLES, title=f'{key.heading} over {series.window_days} days'),
        )))
    click.echo(f'{len(series)} points over {series.window_days} days')


@cli.command('density-map')
@click.pass_obj
@handles_errors
def density_map(state: CliState) -> None:
    """Persons per real place and per virtual medium, drawn 1 person = 1 pixel."""
    config = _load_config(state)
    registry = _load_registry(config)
    ledger = _load_ledger(config, registry)

    densities = place_density(ledger, registry)
    _write_tables(config, 'density-map', densities, state.decimal_comma)
    _write(config, 'density-map.svg', to_svg(render_density_map(
        densities, registry, ChartSpec(ChartKind.DENSITY_MAP, width=1200, height=800, title='Range and spatial density'),
    )))
    click.echo(f'{len(densities)} locations')


@cli.command('survey-report')
@click.pass_obj
@handles_errors
def survey_report(state: CliState) -> None:
    """Score the survey against its answer key."""
    config = _load_config(state)
    if config.survey is None or config.answer_key is None:
        raise ConfigError('project.conf must name both survey and answer_key')
    comma = state.decimal_comma

    key = parse_answer_key(_read(config.answer_key))
    dataset = parse_survey(_read(config.survey), key)
    report = score_survey(dataset, key, config.popper_worlds)
    _write_tables(config, 'survey-report', report, comma)

    click.echo(f'participants: {report.participants}')
    click.echo(f'completers: {report.completion.completers}')
    click.echo(f'completion_rate: {format_percent(report.completion.completion_rate, 2, comma)}')

    if config.survey_medium and config.events is not None:
        registry = _load_registry(config)
        ledger = _load_ledger(config, registry)
        click.echo(f'response_rate: {format_percent(survey_response_rate(ledger, config.survey_medium), 1, comma)}')

    totals = report.understanding_totals
    click.echo('understanding: ' + ', '.join(f'{u.value} {n}' for u, n in totals.items()))
    result = correlate_activity(report)
    rho = '-' if result.rho is None else f'{result.rho:.3f}'
    click.echo(f'{result.label_x} vs {result.label_y}: rho {rho} ({result.note.value}, n={result.n})')

    if key.codes_of_kind(QuestionKind.MEDIA_USE):
        mix = survey_modality(key)
        click.echo('offered media: ' + ' | '.join(
            f'{t.value} {format_percent(mix.share(t), 2, comma)}' for t in MEDIA_TYPE_ORDER
        ))


@cli.command()
@click.argument('other_project', type=click.Path(file_okay=False, exists=True))
@click.pass_obj
@handles_errors
def compare(state: CliState, other_project: str) -> None:
    """Compare the media-type mix of this project with OTHER_PROJECT."""
    config = _load_config(state)
    other = load_project_config(other_project)
    comparison = compare_spaces(
        (_load_registry(config), config.display_label),
        (_load_registry(other), other.display_label),
    )
    _write_tables(config, 'compare', comparison, state.decimal_comma)
    click.echo(emit_table(comparison, TableFormat.MARKDOWN, state.decimal_comma), nl=False)
    click.echo(f'L1 distance: {format_percent(comparison.l1_distance, 2, state.decimal_comma)}')


def main() -> None:
    cli()


if __name__ == '__main__':
    main()
