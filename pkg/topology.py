"""
Dynamic topology: per-day, per-medium metric values over the project window
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from fractions import Fraction
from typing import Union

from errors import NoWindow
from media_metrics import MetricKey, MetricsTable
from models import EventLedger

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TopologyPoint:
    day_index: int
    medium_id: str
    value: Union[int, Fraction]


@dataclass(frozen=True)
class TopologySeries:
    metric: MetricKey
    window_days: int
    points: tuple[TopologyPoint, ...]

    def for_medium(self, medium_id: str) -> list[TopologyPoint]:
        return [p for p in self.points if p.medium_id == medium_id]

    def __len__(self) -> int:
        return len(self.points)


def topology_series(ledger: EventLedger, table: MetricsTable, metric: MetricKey) -> TopologySeries:
    """
    One point per (day, medium) with records. Range and interactions are the
    day's sums; response rate is cumulative interactions over cumulative range,
    and days before any range is recorded carry no point.
    """
    window = ledger.window
    if window is None:
        raise NoWindow('topology needs a project window')

    reach: dict[tuple[str, date], int] = defaultdict(int)
    replies: dict[tuple[str, date], int] = defaultdict(int)
    has_reach: set[tuple[str, date]] = set()
    has_replies: set[tuple[str, date]] = set()
    days_by_medium: dict[str, set[date]] = defaultdict(set)

    for record in ledger.records:
        if not window.contains(record.date):
            logger.warning('Skipping %s record dated %s outside the window', record.medium_id, record.date)
            continue
        cell = (record.medium_id, record.date)
        days_by_medium[record.medium_id].add(record.date)
        if record.persons_reached is not None:
            reach[cell] += record.persons_reached
            has_reach.add(cell)
        if record.interactions is not None:
            replies[cell] += record.interactions
            has_replies.add(cell)

    points = []
    for row in table.rows:
        medium_id = row.medium_id
        days = sorted(days_by_medium.get(medium_id, ()))
        if metric is MetricKey.RANGE:
            points += [
                TopologyPoint(window.day_index(d), medium_id, reach[(medium_id, d)])
                for d in days if (medium_id, d) in has_reach
            ]
        elif metric is MetricKey.INTERACTIONS:
            points += [
                TopologyPoint(window.day_index(d), medium_id, replies[(medium_id, d)])
                for d in days if (medium_id, d) in has_replies
            ]
        elif row.response_rate is not None:
            total_reach = total_replies = 0
            for d in days:
                total_reach += reach.get((medium_id, d), 0)
                total_replies += replies.get((medium_id, d), 0)
                if total_reach > 0:
                    points.append(TopologyPoint(window.day_index(d), medium_id, Fraction(total_replies, total_reach)))

    points.sort(key=lambda p: p.day_index)
    logger.debug('Topology %s: %d points over %d days', metric.value, len(points), window.days)
    return TopologySeries(metric=metric, window_days=window.days, points=tuple(points))
