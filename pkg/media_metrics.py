"""
Media metrics over an event ledger
Modality, net range, interactions, response rate, completion rate and
persons per place. Ratios stay exact (Fraction) until they are displayed.
"""
import logging
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from errors import CompletersExceedParticipants, EmptyRegistry, UnknownMedium, ZeroParticipants, ZeroRange
from models import MEDIA_TYPE_ORDER, EventLedger, MediaRegistry, MediaType, Place

logger = logging.getLogger(__name__)

Number = Union[Fraction, int, float]


@dataclass(frozen=True)
class ModalityMix:
    """Share of each media type among all media of a space"""
    counts: dict[MediaType, int]
    total: int

    @property
    def shares(self) -> dict[MediaType, Fraction]:
        return {t: Fraction(n, self.total) for t, n in self.counts.items() if n > 0}

    def share(self, media_type: MediaType) -> Fraction:
        return Fraction(self.counts.get(media_type, 0), self.total)


@dataclass(frozen=True)
class MetricsRow:
    medium_id: str
    range: Optional[int] = None
    interactions: Optional[int] = None
    response_rate: Optional[Fraction] = None


class MetricKey(str, Enum):
    RANGE = 'range'
    INTERACTIONS = 'interactions'
    RESPONSE_RATE = 'response-rate'

    @property
    def heading(self) -> str:
        return {'range': 'Range', 'interactions': 'Interactions', 'response-rate': 'Response rate'}[self.value]

    def value_of(self, row: MetricsRow) -> Optional[Union[int, Fraction]]:
        if self is MetricKey.RANGE:
            return row.range
        if self is MetricKey.INTERACTIONS:
            return row.interactions
        return row.response_rate


@dataclass(frozen=True)
class MetricsTable:
    rows: tuple[MetricsRow, ...]

    def row(self, medium_id: str) -> MetricsRow:
        for row in self.rows:
            if row.medium_id == medium_id:
                return row
        raise UnknownMedium(f'medium {medium_id} has no metrics row')

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class CompletionStats:
    participants: int
    completers: int

    @property
    def completion_rate(self) -> Optional[Fraction]:
        if self.participants == 0:
            return None
        return completion_rate(self.completers, self.participants)


@dataclass(frozen=True)
class PlaceDensity:
    """Persons at one real place, or at one virtual medium"""
    place: Place
    persons: int
    medium_id: Optional[str] = None
    persons_by_medium: dict[str, int] = field(default_factory=dict)

    @property
    def label(self) -> str:
        if self.place.name is not None:
            return self.place.name
        return self.medium_id or 'virtual'

    def dominant_type(self, registry: MediaRegistry) -> Optional[MediaType]:
        """Media type contributing the most persons; ties go to the earlier type"""
        totals = {t: 0 for t in MEDIA_TYPE_ORDER}
        for medium_id, persons in self.persons_by_medium.items():
            if medium_id in registry:
                totals[registry.type_of(medium_id)] += persons
        best = max(MEDIA_TYPE_ORDER, key=lambda t: (totals[t], -t.order))
        return best if totals[best] > 0 else None


def modality(registry: MediaRegistry) -> ModalityMix:
    """Share of every media type in the total number of media"""
    if len(registry) == 0:
        raise EmptyRegistry('modality needs at least one medium')
    return ModalityMix(counts=registry.count_by_type(), total=len(registry))


def _check_medium(medium_id: str, registry: Optional[MediaRegistry]) -> None:
    if registry is not None and medium_id not in registry:
        raise UnknownMedium(f'medium {medium_id} is not in the registry')


def net_range(ledger: EventLedger, medium_id: str, registry: Optional[MediaRegistry] = None) -> Optional[int]:
    """Persons reached through a medium; None when no record states a range"""
    _check_medium(medium_id, registry)
    values = [r.persons_reached for r in ledger.records_for(medium_id) if r.persons_reached is not None]
    return sum(values) if values else None


def interactions(ledger: EventLedger, medium_id: str, registry: Optional[MediaRegistry] = None) -> Optional[int]:
    """Interactions attributed to a medium; None when none are recorded"""
    _check_medium(medium_id, registry)
    values = [r.interactions for r in ledger.records_for(medium_id) if r.interactions is not None]
    return sum(values) if values else None


def response_rate(m_ia: int, r_ng: int) -> Fraction:
    if r_ng == 0:
        raise ZeroRange('response rate is undefined for a range of 0')
    return Fraction(m_ia, r_ng)


def completion_rate(completers: int, participants: int) -> Fraction:
    if participants == 0:
        raise ZeroParticipants('completion rate is undefined without participants')
    if completers > participants:
        raise CompletersExceedParticipants(f'{completers} completers but only {participants} participants')
    return Fraction(completers, participants)


def metrics_table(ledger: EventLedger, registry: MediaRegistry) -> MetricsTable:
    """One row per registry medium, in registry order"""
    rows = []
    for medium in registry.media:
        r_ng = net_range(ledger, medium.id)
        m_ia = interactions(ledger, medium.id)
        rate = None
        if r_ng and m_ia is not None:
            rate = response_rate(m_ia, r_ng)
        rows.append(MetricsRow(medium_id=medium.id, range=r_ng, interactions=m_ia, response_rate=rate))
    logger.debug('Computed metrics for %d media', len(rows))
    return MetricsTable(rows=tuple(rows))


def survey_response_rate(ledger: EventLedger, medium_id: str) -> Optional[Fraction]:
    """Participants (interactions of the survey medium) over persons it reached"""
    r_ng = net_range(ledger, medium_id)
    m_ia = interactions(ledger, medium_id)
    if not r_ng or m_ia is None:
        return None
    return response_rate(m_ia, r_ng)


def range_by_type(table: MetricsTable, registry: MediaRegistry) -> dict[MediaType, Optional[int]]:
    totals: dict[MediaType, Optional[int]] = {t: None for t in MEDIA_TYPE_ORDER}
    for row in table.rows:
        if row.range is None:
            continue
        media_type = registry.type_of(row.medium_id)
        totals[media_type] = (totals[media_type] or 0) + row.range
    return totals


def _persons_of(persons_reached: Optional[int], interactions_count: Optional[int]) -> int:
    # a record without a range still places its responders at that location
    if persons_reached is not None:
        return persons_reached
    return interactions_count or 0


def place_density(ledger: EventLedger, registry: Optional[MediaRegistry] = None) -> list[PlaceDensity]:
    """
    Persons per location. Real places are listed in order of first appearance,
    then one entry per medium with virtual records (registry order when a
    registry is given).
    """
    real: dict[str, dict[str, int]] = {}
    real_places: dict[str, Place] = {}
    virtual: dict[str, int] = {}

    for record in ledger.records:
        persons = _persons_of(record.persons_reached, record.interactions)
        name = record.place.name
        if name is None:
            virtual[record.medium_id] = virtual.get(record.medium_id, 0) + persons
            continue
        by_medium = real.setdefault(name, {})
        by_medium[record.medium_id] = by_medium.get(record.medium_id, 0) + persons
        known = real_places.get(name)
        if known is None or (not known.has_coordinates and record.place.has_coordinates):
            real_places[name] = record.place

    densities = [
        PlaceDensity(place=real_places[name], persons=sum(by_medium.values()), persons_by_medium=dict(by_medium))
        for name, by_medium in real.items()
    ]

    virtual_order = list(virtual)
    if registry is not None:
        virtual_order.sort(key=lambda m: registry.ids.index(m) if m in registry else len(registry))
    for medium_id in virtual_order:
        densities.append(PlaceDensity(
            place=Place.virtual(),
            persons=virtual[medium_id],
            medium_id=medium_id,
            persons_by_medium={medium_id: virtual[medium_id]},
        ))
    logger.debug('Computed density for %d real places and %d virtual media', len(real), len(virtual))
    return densities


def format_percent(value: Optional[Number], decimals: int = 0, decimal_comma: bool = False) -> str:
    """Format a ratio as a percentage, rounding half away from zero; None is '-'"""
    if value is None:
        return '-'
    ratio = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = 50
        percent = Decimal(ratio.numerator) * 100 / Decimal(ratio.denominator)
        rounded = percent.quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP)
    if rounded == 0:
        rounded = abs(rounded)
    text = f'{rounded:f}'
    if decimal_comma:
        text = text.replace('.', ',')
    return f'{text}%'
