"""
SVG charts for hybrid space reports

Ranking bars, topology bubbles, the range/density map, the combined
range-interactions-response-rate bubble chart and the modality bar.
Output is byte-deterministic: no ids, no timestamps, every coordinate is
written with two decimals.
"""
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

import svgwrite
from pydantic import Field
from pydantic.dataclasses import dataclass

from errors import EmptyRanking, EmptySeries
from media_metrics import MetricKey, MetricsTable, ModalityMix, PlaceDensity, format_percent
from models import MEDIA_TYPE_ORDER, NEUTRAL_GREY, MediaRegistry, hex_color_of
from rankings import Ranking
from topology import TopologySeries

logger = logging.getLogger(__name__)

SvgDocument = svgwrite.Drawing

FONT_FAMILY = 'sans-serif'

# Bubble radius = sqrt(value) * scale
DEFAULT_BUBBLE_SCALE = {
    MetricKey.RANGE: 0.1,
    MetricKey.INTERACTIONS: 1.0,
    MetricKey.RESPONSE_RATE: 20.0,
}


class ChartKind(str, Enum):
    RANKING_BARS = 'ranking-bars'
    TOPOLOGY_BUBBLES = 'topology-bubbles'
    DENSITY_MAP = 'density-map'
    METRICS_BUBBLES = 'metrics-bubbles'
    MODALITY_BAR = 'modality-bar'


@dataclass(frozen=True)
class ChartSpec:
    """Layout of one chart; sizes are in px and validated on construction"""
    kind: ChartKind
    width: int = Field(800, gt=0)
    height: Optional[int] = Field(None, gt=0)
    margin: int = Field(20, ge=0)
    row_height: int = Field(20, gt=0)
    label_width: int = Field(160, ge=0)
    day_height: float = Field(3.0, gt=0)
    lane_width: int = Field(40, gt=0)
    side_column_width: int = Field(200, ge=0)
    bubble_scale: Optional[float] = Field(None, gt=0)
    log_scale: bool = False
    show_labels: bool = True
    show_values: bool = True
    title: str = ''


def px(value: float) -> str:
    return f'{value:.2f}'


def _drawing(width: float, height: float) -> SvgDocument:
    return svgwrite.Drawing(size=(px(width), px(height)), debug=False)


def _text(dwg: SvgDocument, content: str, x: float, y: float, anchor: str = 'start', size: int = 10) -> None:
    dwg.add(dwg.text(
        content, insert=(px(x), px(y)), fill=NEUTRAL_GREY,
        font_family=FONT_FAMILY, font_size=str(size), text_anchor=anchor,
    ))


def _line(dwg: SvgDocument, x1: float, y1: float, x2: float, y2: float) -> None:
    dwg.add(dwg.line(start=(px(x1), px(y1)), end=(px(x2), px(y2)), stroke=NEUTRAL_GREY, stroke_width='1'))


def _title(dwg: SvgDocument, spec: ChartSpec) -> float:
    """Draw the title if any; returns the y offset for the chart body"""
    if not spec.title:
        return spec.margin
    _text(dwg, spec.title, spec.margin, spec.margin + 12, size=14)
    return spec.margin + 24


def to_svg(dwg: SvgDocument) -> str:
    return '<?xml version="1.0" encoding="utf-8" ?>\n' + dwg.tostring() + '\n'


def _format_value(value: Union[int, Fraction, None]) -> str:
    if value is None:
        return '-'
    if isinstance(value, Fraction):
        return format_percent(value, 0)
    return str(value)


def render_ranking(ranking: Ranking, registry: MediaRegistry, spec: ChartSpec) -> SvgDocument:
    """One bar per medium in ranked order, colored by media type; unranked media greyed at the end"""
    if len(ranking) == 0:
        raise EmptyRanking('nothing to draw, the ranking is empty')

    rows = len(ranking)
    top = _title_offset(spec)
    height = spec.height or int(top + rows * spec.row_height + spec.margin)
    dwg = _drawing(spec.width, height)
    _title(dwg, spec)

    value_width = 60 if spec.show_values else 0
    bar_area = spec.width - 2 * spec.margin - spec.label_width - value_width
    values = [float(e.value) for e in ranking.entries]
    peak = max(values, default=0.0)

    def length(value: float) -> float:
        if peak <= 0 or value <= 0:
            return 0.0
        if spec.log_scale:
            return bar_area * math.log10(1 + value) / math.log10(1 + peak)
        return bar_area * value / peak

    x0 = spec.margin + spec.label_width
    bar_height = spec.row_height * 0.7
    for i, entry in enumerate(ranking.entries):
        y = top + i * spec.row_height
        color = hex_color_of(registry.type_of(entry.medium_id))
        dwg.add(dwg.rect(
            insert=(px(x0), px(y)), size=(px(max(length(float(entry.value)), 1.0)), px(bar_height)),
            fill=color, class_='bar',
        ))
        if spec.show_labels:
            _text(dwg, f'{entry.medium_id} {registry.get(entry.medium_id).name}', x0 - 6, y + bar_height - 3, 'end')
        if spec.show_values:
            _text(dwg, _format_value(entry.value), x0 + length(float(entry.value)) + 6, y + bar_height - 3)

    for j, medium_id in enumerate(ranking.unranked):
        y = top + (len(ranking.entries) + j) * spec.row_height
        dwg.add(dwg.rect(
            insert=(px(x0), px(y)), size=(px(4), px(bar_height)), fill=NEUTRAL_GREY, class_='bar unranked',
        ))
        if spec.show_labels:
            _text(dwg, f'{medium_id} {registry.get(medium_id).name}', x0 - 6, y + bar_height - 3, 'end')
        if spec.show_values:
            _text(dwg, '-', x0 + 10, y + bar_height - 3)
    return dwg


def bubble_radius(value: Union[int, Fraction, float], scale: float) -> float:
    """Area-proportional radius; zero and negative values get no bubble"""
    if value <= 0:
        return 0.0
    return math.sqrt(float(value)) * scale


def render_topology(series: TopologySeries, registry: MediaRegistry, spec: ChartSpec) -> SvgDocument:
    """
    Bubbles at (medium lane, day). Lanes follow registry order, time runs
    from the bottom (window start) to the top.
    """
    if len(series) == 0:
        raise EmptySeries(f'the {series.metric.value} series has no points')

    scale = spec.bubble_scale if spec.bubble_scale is not None else DEFAULT_BUBBLE_SCALE[series.metric]
    axis_width = 50
    lane_labels = 30
    top = _title_offset(spec)
    plot_height = spec.height - top - spec.margin - lane_labels if spec.height else series.window_days * spec.day_height
    day_height = plot_height / max(series.window_days, 1)
    width = max(spec.width, int(2 * spec.margin + axis_width + len(registry) * spec.lane_width))
    height = spec.height or int(top + plot_height + lane_labels + spec.margin)

    dwg = _drawing(width, height)
    _title(dwg, spec)
    x_axis = spec.margin + axis_width
    y_bottom = top + plot_height
    _line(dwg, x_axis, top, x_axis, y_bottom)
    _line(dwg, x_axis, y_bottom, x_axis + len(registry) * spec.lane_width, y_bottom)

    for day in range(0, series.window_days, 30):
        y = y_bottom - day * day_height
        _line(dwg, x_axis - 4, y, x_axis, y)
        _text(dwg, f'day {day}', x_axis - 6, y + 3, 'end', size=8)

    lane_x = {}
    for i, medium in enumerate(registry.media):
        lane_x[medium.id] = x_axis + (i + 0.5) * spec.lane_width
        if spec.show_labels:
            _text(dwg, medium.id, lane_x[medium.id], y_bottom + 14, 'middle', size=8)

    drawn = 0
    for point in series.points:
        radius = bubble_radius(point.value, scale)
        if radius <= 0 or point.medium_id not in lane_x:
            continue
        dwg.add(dwg.circle(
            center=(px(lane_x[point.medium_id]), px(y_bottom - (point.day_index + 0.5) * day_height)),
            r=px(radius),
            fill=hex_color_of(registry.type_of(point.medium_id)),
            fill_opacity='0.6',
            class_='bubble',
        ))
        drawn += 1
    logger.debug('Drew %d of %d topology points', drawn, len(series))
    return dwg


def _title_offset(spec: ChartSpec) -> float:
    return spec.margin + (24 if spec.title else 0)


def render_density_map(densities: list[PlaceDensity], registry: MediaRegistry, spec: ChartSpec) -> SvgDocument:
    """
    One circle per place with diameter = persons in pixels. Places with
    coordinates are placed by an equirectangular projection over their
    bounding box; virtual media and places without coordinates go into a
    side column.
    """
    top = _title_offset(spec)
    map_height = (spec.height or 600) - top - spec.margin
    map_width = spec.width - 2 * spec.margin - spec.side_column_width

    located = [d for d in densities if d.persons > 0 and d.place.has_coordinates]
    side = [d for d in densities if d.persons > 0 and not d.place.has_coordinates]
    for d in densities:
        if d.place.name is not None and not d.place.has_coordinates:
            logger.warning('Place %s has no coordinates, drawing it in the side column', d.place.name)

    side_height = sum(d.persons + 20 for d in side)
    height = max(spec.height or 600, int(top + side_height + spec.margin))
    dwg = _drawing(spec.width, height)
    _title(dwg, spec)

    if located:
        lats = [d.place.lat for d in located if d.place.lat is not None]
        lons = [d.place.lon for d in located if d.place.lon is not None]
        min_lat, max_lat, min_lon, max_lon = min(lats), max(lats), min(lons), max(lons)
        for d in located:
            assert d.place.lat is not None and d.place.lon is not None
            x = spec.margin + (
                (d.place.lon - min_lon) / (max_lon - min_lon) * map_width if max_lon > min_lon else map_width / 2
            )
            y = top + (
                (max_lat - d.place.lat) / (max_lat - min_lat) * map_height if max_lat > min_lat else map_height / 2
            )
            _place_circle(dwg, d, registry, x, y, spec)

    x_side = spec.margin + map_width + spec.side_column_width / 2
    y = top
    for d in side:
        y += d.persons / 2 + 10
        _place_circle(dwg, d, registry, x_side, y, spec)
        y += d.persons / 2 + 10
    return dwg


def _place_circle(dwg: SvgDocument, density: PlaceDensity, registry: MediaRegistry, x: float, y: float, spec: ChartSpec) -> None:
    dominant = density.dominant_type(registry)
    color = hex_color_of(dominant) if dominant is not None else NEUTRAL_GREY
    dwg.add(dwg.circle(
        center=(px(x), px(y)),
        r=px(density.persons / 2),
        fill=color,
        fill_opacity='0.5',
        stroke=color,
        class_='place',
        data_diameter=str(density.persons),
    ))
    if spec.show_labels:
        if density.place.name is not None:
            label = density.place.name
        elif density.medium_id is not None and density.medium_id in registry:
            label = registry.get(density.medium_id).name
        else:
            label = density.label
        text = f'{label} ({density.persons})' if spec.show_values else label
        _text(dwg, text, x, y + 3, 'middle', size=8)


def render_metrics_bubbles(table: MetricsTable, registry: MediaRegistry, spec: ChartSpec) -> SvgDocument:
    """
    Range on a log10 x axis, response rate on the y axis, bubble area
    proportional to interactions. Media without a response rate are listed
    under the chart instead.
    """
    scale = spec.bubble_scale if spec.bubble_scale is not None else 1.5
    plotted = [row for row in table.rows if row.response_rate is not None and row.range]
    omitted = [row.medium_id for row in table.rows if row not in plotted]

    top = _title_offset(spec)
    height = spec.height or 500
    plot_left = spec.margin + 40
    plot_right = spec.width - spec.margin
    plot_bottom = height - spec.margin - 40
    dwg = _drawing(spec.width, height)
    _title(dwg, spec)
    _line(dwg, plot_left, top, plot_left, plot_bottom)
    _line(dwg, plot_left, plot_bottom, plot_right, plot_bottom)

    decades = max((math.ceil(math.log10(row.range)) for row in plotted if row.range), default=1) or 1
    peak_rate = max([float(row.response_rate) for row in plotted if row.response_rate is not None] + [1.0])

    for decade in range(decades + 1):
        x = plot_left + decade / decades * (plot_right - plot_left)
        _line(dwg, x, plot_bottom, x, plot_bottom + 4)
        _text(dwg, f'{10 ** decade}', x, plot_bottom + 14, 'middle', size=8)
    for step in range(5):
        rate = Fraction(step, 4) * Fraction(peak_rate)
        y = plot_bottom - float(rate) / peak_rate * (plot_bottom - top)
        _line(dwg, plot_left - 4, y, plot_left, y)
        _text(dwg, format_percent(rate, 0), plot_left - 6, y + 3, 'end', size=8)

    for row in plotted:
        assert row.range is not None and row.response_rate is not None
        x = plot_left + math.log10(row.range) / decades * (plot_right - plot_left)
        y = plot_bottom - float(row.response_rate) / peak_rate * (plot_bottom - top)
        color = hex_color_of(registry.type_of(row.medium_id))
        radius = bubble_radius(row.interactions or 0, scale)
        if radius > 0:
            dwg.add(dwg.circle(center=(px(x), px(y)), r=px(radius), fill=color, fill_opacity='0.6', class_='bubble'))
        if spec.show_labels:
            _text(dwg, row.medium_id, x, y + 3, 'middle', size=8)

    if omitted:
        _text(dwg, 'no response rate: ' + ', '.join(omitted), plot_left, height - spec.margin, size=9)
    return dwg


def render_modality(mix: ModalityMix, spec: ChartSpec) -> SvgDocument:
    """Stacked bar of the media-type shares in canonical order"""
    top = _title_offset(spec)
    bar_height = 30
    height = spec.height or int(top + bar_height + 40 + spec.margin)
    dwg = _drawing(spec.width, height)
    _title(dwg, spec)

    full = spec.width - 2 * spec.margin
    x = float(spec.margin)
    for media_type in MEDIA_TYPE_ORDER:
        share = mix.share(media_type)
        if share == 0:
            continue
        width = float(share) * full
        dwg.add(dwg.rect(
            insert=(px(x), px(top)), size=(px(width), px(bar_height)),
            fill=hex_color_of(media_type), class_='segment',
        ))
        if spec.show_values:
            _text(dwg, f'{media_type.value} {format_percent(share, 2)}', x + width / 2, top + bar_height + 16, 'middle')
        x += width
    return dwg