"""
CSV and Markdown emitters for every report table
Absent values are written as "-", percentages with the shared rounding rule.
"""
import logging
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

import pandas as pd

from media_metrics import MetricKey, MetricsTable, ModalityMix, PlaceDensity, format_percent
from models import MEDIA_TYPE_ORDER
from rankings import ModalityComparison, Ranking, TypeShare
from survey_scoring import SurveyReport
from topology import TopologySeries

logger = logging.getLogger(__name__)

ABSENT = '-'


class TableFormat(str, Enum):
    CSV = 'csv'
    MARKDOWN = 'markdown'

    @property
    def suffix(self) -> str:
        return 'csv' if self is TableFormat.CSV else 'md'


Table = Union[
    MetricsTable, Ranking, TypeShare, Sequence[TypeShare], SurveyReport, ModalityMix,
    ModalityComparison, TopologySeries, Sequence[PlaceDensity],
]


def _count(value: Optional[int]) -> str:
    return ABSENT if value is None else str(value)


def _metric_value(value: Union[int, Fraction, None], key: MetricKey, comma: bool) -> str:
    if value is None:
        return ABSENT
    if key is MetricKey.RESPONSE_RATE:
        return format_percent(value, 0, comma)
    return str(value)


def metrics_rows(table: MetricsTable, comma: bool = False) -> tuple[list[str], list[list[str]]]:
    headers = ['medium_id', 'range', 'interactions', 'response_rate']
    rows = [
        [row.medium_id, _count(row.range), _count(row.interactions), format_percent(row.response_rate, 0, comma)]
        for row in table.rows
    ]
    return headers, rows


def ranking_rows(ranking: Ranking, comma: bool = False) -> tuple[list[str], list[list[str]]]:
    headers = ['rank', 'medium_id', ranking.key.value]
    rows = [
        [str(i), entry.medium_id, _metric_value(entry.value, ranking.key, comma)]
        for i, entry in enumerate(ranking.entries, start=1)
    ]
    rows += [[ABSENT, medium_id, ABSENT] for medium_id in ranking.unranked]
    return headers, rows


def type_share_rows(shares: Sequence[TypeShare], comma: bool = False) -> tuple[list[str], list[list[str]]]:
    headers = ['segment', 'media_type', 'count', 'share']
    rows = []
    for share in shares:
        for media_type in MEDIA_TYPE_ORDER:
            count = share.counts.get(media_type, 0)
            if count:
                rows.append([
                    share.segment.label, media_type.value, str(count),
                    format_percent(Fraction(count, len(share.media)), 2, comma),
                ])
    return headers, rows


def modality_rows(mix: ModalityMix, comma: bool = False) -> tuple[list[str], list[list[str]]]:
    headers = ['media_type', 'media', 'share']
    rows = [
        [t.value, str(mix.counts.get(t, 0)), format_percent(mix.share(t), 2, comma)]
        for t in MEDIA_TYPE_ORDER
    ]
    return headers, rows


def comparison_rows(comparison: ModalityComparison, comma: bool = False) -> tuple[list[str], list[list[str]]]:
    headers = ['media_type', comparison.label_a, comparison.label_b, 'delta']
    rows = [
        [
            row.media_type.value,
            format_percent(row.share_a, 2, comma),
            format_percent(row.share_b, 2, comma),
            format_percent(row.delta, 2, comma),
        ]
        for row in comparison.rows
    ]
    return headers, rows


def topology_rows(series: TopologySeries, comma: bool = False) -> tuple[list[str], list[list[str]]]:
    headers = ['day_index', 'medium_id', series.metric.value]
    rows = [
        [str(p.day_index), p.medium_id, _metric_value(p.value, series.metric, comma)]
        for p in series.points
    ]
    return headers, rows


def density_rows(densities: Sequence[PlaceDensity]) -> tuple[list[str], list[list[str]]]:
    headers = ['place', 'medium_id', 'persons']
    rows = [
        [d.place.name or ABSENT, d.medium_id or ABSENT, str(d.persons)]
        for d in densities
    ]
    return headers, rows


def survey_rows(report: SurveyReport, comma: bool = False) -> tuple[list[str], list[list[str]]]:
    """Long-form survey report: one (section, item, count, share) line per figure"""
    headers = ['section', 'item', 'count', 'share']
    n = report.participants

    def share(count: int) -> str:
        return format_percent(Fraction(count, n), 2, comma) if n else ABSENT

    rows = [
        ['completion', 'participants', str(n), ABSENT],
        ['completion', 'completers', str(report.completion.completers), format_percent(report.completion.completion_rate, 2, comma)],
    ]
    for group, answered in report.answered_by_group.items():
        rows.append(['answered', group, str(answered), share(answered)])
        rows.append(['unanswered', group, str(report.unanswered(group)), share(report.unanswered(group))])
    for code, counts in report.option_counts.items():
        for option, count in counts.items():
            rows.append(['option', f'{code}:{option}', str(count), share(count)])

    totals = report.understanding_totals
    coded = sum(totals.values())
    for category, count in totals.items():
        rows.append([
            'understanding', category.value, str(count),
            format_percent(Fraction(count, coded), 2, comma) if coded else ABSENT,
        ])
    for pid, tally in sorted(report.understanding_by_participant.items()):
        for category, count in tally.items():
            rows.append(['understanding_by_participant', f'ID {pid}:{category.value}', str(count), ABSENT])

    for code, count in report.correct_by_question.items():
        rows.append(['correct', code, str(count), share(count)])
    for pid, scores in sorted(report.knowledge_by_participant.items()):
        for group, score in sorted(scores.items()):
            rows.append(['knowledge', f'ID {pid}:{group}', f'{score}/{report.knowledge_group_size.get(group, 0)}', ABSENT])

    for pid, activity in sorted(report.activity_by_participant.items()):
        rows.append(['activity', f'ID {pid}', str(activity), ABSENT])
    for pid, media_use in sorted(report.media_use_by_participant.items()):
        rows.append(['media_use', f'ID {pid}', str(media_use), ABSENT])
    for world, weight in report.activity_by_world.items():
        rows.append(['world', world.value, str(weight), ABSENT])

    for code, tab in report.cross_tabs.items():
        for option, tally in tab.items():
            for category, count in tally.items():
                if count:
                    rows.append(['cross_tab', f'{code}:{option}:{category.value}', str(count), ABSENT])
    return headers, rows


def table_rows(table: Table, comma: bool = False) -> tuple[list[str], list[list[str]]]:
    if isinstance(table, MetricsTable):
        return metrics_rows(table, comma)
    if isinstance(table, Ranking):
        return ranking_rows(table, comma)
    if isinstance(table, TypeShare):
        return type_share_rows([table], comma)
    if isinstance(table, ModalityMix):
        return modality_rows(table, comma)
    if isinstance(table, ModalityComparison):
        return comparison_rows(table, comma)
    if isinstance(table, TopologySeries):
        return topology_rows(table, comma)
    if isinstance(table, SurveyReport):
        return survey_rows(table, comma)
    items = list(table)
    if all(isinstance(item, TypeShare) for item in items) and items:
        return type_share_rows(items, comma)  # type: ignore[arg-type]
    if all(isinstance(item, PlaceDensity) for item in items):
        return density_rows(items)  # type: ignore[arg-type]
    raise TypeError(f'cannot emit a table for {type(table).__name__}')


def to_csv(headers: list[str], rows: list[list[str]]) -> str:
    df = pd.DataFrame(rows, columns=headers, dtype=str)
    return df.to_csv(index=False, lineterminator='\n')


def to_markdown(headers: list[str], rows: list[list[str]]) -> str:
    def line(cells: list[str]) -> str:
        return '| ' + ' | '.join(cell.replace('|', '\\|') for cell in cells) + ' |'

    lines = [line(headers), '|' + '|'.join('---' for _ in headers) + '|']
    lines += [line(row) for row in rows]
    return '\n'.join(lines) + '\n'


def emit_table(table: Table, fmt: TableFormat = TableFormat.CSV, decimal_comma: bool = False) -> str:
    """Render a report table as CSV or Markdown text"""
    headers, rows = table_rows(table, decimal_comma)
    logger.debug('Emitting %d rows as %s', len(rows), fmt.value)
    if fmt is TableFormat.CSV:
        return to_csv(headers, rows)
    return to_markdown(headers, rows)
