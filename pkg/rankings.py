"""
Rankings of media by a metric, media-type shares within ranking segments,
and the modality comparison of two hybrid spaces
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from errors import EmptyRegistry, SegmentTooLarge
from media_metrics import MetricKey, MetricsTable, modality
from models import MEDIA_TYPE_ORDER, MediaRegistry, MediaType

logger = logging.getLogger(__name__)

RankValue = Union[int, Fraction]


@dataclass(frozen=True)
class RankEntry:
    medium_id: str
    value: RankValue


@dataclass(frozen=True)
class Ranking:
    key: MetricKey
    entries: tuple[RankEntry, ...]
    unranked: tuple[str, ...] = ()

    @property
    def display_order(self) -> list[str]:
        """Ranked media followed by the unranked ones, in table order"""
        return [e.medium_id for e in self.entries] + list(self.unranked)

    def __len__(self) -> int:
        return len(self.entries) + len(self.unranked)


class SegmentKind(str, Enum):
    TOP = 'top'
    BOTTOM = 'bottom'


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    size: int

    @classmethod
    def top(cls, n: int) -> 'Segment':
        return cls(SegmentKind.TOP, n)

    @classmethod
    def bottom(cls, m: int) -> 'Segment':
        return cls(SegmentKind.BOTTOM, m)

    @property
    def label(self) -> str:
        return f'{self.kind.value} {self.size}'


@dataclass(frozen=True)
class TypeShare:
    segment: Segment
    counts: dict[MediaType, int]
    media: tuple[str, ...]

    @property
    def shares(self) -> dict[MediaType, Fraction]:
        total = len(self.media)
        return {t: Fraction(n, total) for t, n in self.counts.items() if n > 0}


@dataclass(frozen=True)
class TypeComparison:
    media_type: MediaType
    share_a: Fraction
    share_b: Fraction

    @property
    def delta(self) -> Fraction:
        return self.share_a - self.share_b


@dataclass(frozen=True)
class ModalityComparison:
    label_a: str
    label_b: str
    size_a: int
    size_b: int
    rows: tuple[TypeComparison, ...]

    @property
    def l1_distance(self) -> Fraction:
        return sum((abs(row.delta) for row in self.rows), Fraction(0))


def _type_then_id(registry: MediaRegistry, medium_id: str) -> tuple[int, str]:
    return registry.type_of(medium_id).order, medium_id


def rank_media(table: MetricsTable, key: MetricKey, registry: MediaRegistry) -> Ranking:
    """
    Sort media by the exact metric value, highest first. Ties fall back to
    the canonical media-type order, then the medium id. Media without a
    value are appended as unranked.
    """
    ranked = []
    unranked = []
    for row in table.rows:
        value = key.value_of(row)
        if value is None:
            unranked.append(row.medium_id)
        else:
            ranked.append(RankEntry(row.medium_id, value))

    ranked.sort(key=lambda e: (-e.value, *_type_then_id(registry, e.medium_id)))
    unranked.sort(key=lambda medium_id: _type_then_id(registry, medium_id))
    logger.debug('Ranked %d media by %s, %d unranked', len(ranked), key.value, len(unranked))
    return Ranking(key=key, entries=tuple(ranked), unranked=tuple(unranked))


def default_segments(count: int, top_n: Optional[int] = None, bottom_m: Optional[int] = None) -> tuple[Segment, Segment]:
    """Top ten and the rest, unless sizes are given"""
    top = min(10, count) if top_n is None else top_n
    bottom = count - top if bottom_m is None else bottom_m
    return Segment.top(top), Segment.bottom(bottom)


def type_share(ranking: Ranking, segment: Segment, registry: MediaRegistry) -> TypeShare:
    """Media-type mix of the first or last media in display order"""
    order = ranking.display_order
    if segment.size > len(order):
        raise SegmentTooLarge(f'segment {segment.label} exceeds the {len(order)} ranked media')
    if segment.size < 1:
        raise SegmentTooLarge(f'segment {segment.label} must hold at least one medium')

    if segment.kind is SegmentKind.TOP:
        media = order[:segment.size]
    else:
        media = order[len(order) - segment.size:]

    counts = {t: 0 for t in MEDIA_TYPE_ORDER}
    for medium_id in media:
        counts[registry.type_of(medium_id)] += 1
    return TypeShare(segment=segment, counts=counts, media=tuple(media))


def compare_spaces(a: tuple[MediaRegistry, str], b: tuple[MediaRegistry, str]) -> ModalityComparison:
    """Modality of two hybrid spaces side by side, with the per-type delta a - b"""
    (registry_a, label_a), (registry_b, label_b) = a, b
    if len(registry_a) == 0 or len(registry_b) == 0:
        raise EmptyRegistry('both spaces need at least one medium')
    mix_a, mix_b = modality(registry_a), modality(registry_b)
    rows = tuple(
        TypeComparison(media_type=t, share_a=mix_a.share(t), share_b=mix_b.share(t))
        for t in MEDIA_TYPE_ORDER
    )
    return ModalityComparison(
        label_a=label_a, label_b=label_b, size_a=len(registry_a), size_b=len(registry_b), rows=rows
    )
