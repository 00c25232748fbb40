"""
Domain model for hybrid spaces: media types, media, places, activities,
the event ledger and the survey structures.

All models are immutable pydantic values.
"""
import logging
from datetime import date
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from errors import ConfigError, DuplicateId, EmptyRegistry, PrefixMismatch, UnknownMedium, UnknownPrefix

logger = logging.getLogger(__name__)

POPPER_WORLDS_FILE = Path(__file__).parent / 'data' / 'popper_worlds.json'


class MediaType(str, Enum):
    PRIMARY = 'Primary'
    SECONDARY = 'Secondary'
    TERTIARY = 'Tertiary'
    QUATERNARY = 'Quaternary'

    @property
    def order(self) -> int:
        """Canonical report position: Primary < Secondary < Tertiary < Quaternary"""
        return MEDIA_TYPE_ORDER.index(self)

    @property
    def prefix(self) -> str:
        return self.value[0]


MEDIA_TYPE_ORDER = [MediaType.PRIMARY, MediaType.SECONDARY, MediaType.TERTIARY, MediaType.QUATERNARY]

MEDIA_TYPE_BY_PREFIX = {t.prefix: t for t in MEDIA_TYPE_ORDER}

# Color convention shared by every renderer
MEDIA_TYPE_COLORS = {
    MediaType.PRIMARY: 'green',
    MediaType.SECONDARY: 'red',
    MediaType.TERTIARY: 'orange',
    MediaType.QUATERNARY: 'purple',
}

COLOR_HEX = {
    'green': '#2E8B57',
    'red': '#C0392B',
    'orange': '#E67E22',
    'purple': '#8E44AD',
}

# unranked / absent values
NEUTRAL_GREY = '#9E9E9E'


class ActivityKind(str, Enum):
    RECEPTION = 'Reception'
    REFLECTION = 'Reflection'
    DISCOURSE = 'Discourse'
    MEDIA_ACTIVITY = 'MediaActivity'
    ARTISTIC_ACTIVITY = 'ArtisticActivity'


class PopperWorld(str, Enum):
    WORLD1 = 'World1'
    WORLD2 = 'World2'
    WORLD3 = 'World3'


def media_type_of_id(medium_id: str) -> MediaType:
    """Derive the media type from the leading letter of a medium code (P_V -> Primary)"""
    if not medium_id or medium_id[0] not in MEDIA_TYPE_BY_PREFIX:
        raise UnknownPrefix(f'medium id {medium_id!r} does not start with one of P, S, T, Q')
    return MEDIA_TYPE_BY_PREFIX[medium_id[0]]


def color_of(media_type: MediaType) -> str:
    return MEDIA_TYPE_COLORS[media_type]


def hex_color_of(media_type: MediaType) -> str:
    return COLOR_HEX[MEDIA_TYPE_COLORS[media_type]]


_popper_worlds_adapter = TypeAdapter(dict[ActivityKind, PopperWorld])


@lru_cache(maxsize=8)
def load_popper_worlds(path: Optional[Path] = None) -> dict[ActivityKind, PopperWorld]:
    """Load the activity -> world mapping; every activity kind must be mapped"""
    source = Path(path or POPPER_WORLDS_FILE)
    try:
        mapping = _popper_worlds_adapter.validate_json(source.read_bytes())
    except OSError as e:
        raise ConfigError(f'cannot read {source}: {e.strerror}') from e
    except ValidationError as e:
        error = e.errors()[0]
        where = '.'.join(str(part) for part in error['loc'])
        raise ConfigError(f'{source.name}: {where + ": " if where else ""}{error["msg"]}') from e
    missing = [kind.value for kind in ActivityKind if kind not in mapping]
    if missing:
        raise ConfigError(f'{source.name}: no world assigned to {", ".join(missing)}')
    logger.debug('Loaded Popper world mapping from %s', source)
    return mapping


def popper_world_of(activity: ActivityKind, path: Optional[Path] = None) -> PopperWorld:
    return load_popper_worlds(path)[activity]


class Medium(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    name: str
    media_type: MediaType


class Place(BaseModel):
    """A real place (name, optional coordinates) or the virtual place (no name)"""
    model_config = ConfigDict(frozen=True)

    name: Optional[str] = None
    lat: Optional[float] = None
    lon: Optional[float] = None

    @classmethod
    def real(cls, name: str, lat: Optional[float] = None, lon: Optional[float] = None) -> 'Place':
        return cls(name=name, lat=lat, lon=lon)

    @classmethod
    def virtual(cls) -> 'Place':
        return cls()

    @property
    def is_virtual(self) -> bool:
        return self.name is None

    @property
    def has_coordinates(self) -> bool:
        return self.lat is not None and self.lon is not None


class DateWindow(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: date
    end: date

    @model_validator(mode='after')
    def check_order(self) -> 'DateWindow':
        if self.start > self.end:
            raise ValueError(f'window start {self.start} is after window end {self.end}')
        return self

    @property
    def days(self) -> int:
        """Number of calendar days, both ends included"""
        return (self.end - self.start).days + 1

    def contains(self, day: date) -> bool:
        return self.start <= day <= self.end

    def day_index(self, day: date) -> int:
        return (day - self.start).days


class MediaRegistry(BaseModel):
    model_config = ConfigDict(frozen=True)

    media: tuple[Medium, ...]

    @classmethod
    def from_media(cls, media: list[Medium]) -> 'MediaRegistry':
        """Build a registry, enforcing unique ids and prefix/type agreement"""
        if not media:
            raise EmptyRegistry('a media registry needs at least one medium')
        seen: set[str] = set()
        for medium in media:
            if medium.id in seen:
                raise DuplicateId(f'medium id {medium.id} appears more than once')
            seen.add(medium.id)
            if media_type_of_id(medium.id) != medium.media_type:
                raise PrefixMismatch(
                    f'medium id {medium.id} implies {media_type_of_id(medium.id).value}, '
                    f'registry says {medium.media_type.value}'
                )
        return cls(media=tuple(media))

    @property
    def ids(self) -> list[str]:
        return [m.id for m in self.media]

    def __len__(self) -> int:
        return len(self.media)

    def __contains__(self, medium_id: object) -> bool:
        return any(m.id == medium_id for m in self.media)

    def get(self, medium_id: str) -> Medium:
        for medium in self.media:
            if medium.id == medium_id:
                return medium
        raise UnknownMedium(f'medium {medium_id} is not in the registry')

    def type_of(self, medium_id: str) -> MediaType:
        return self.get(medium_id).media_type

    def count_by_type(self) -> dict[MediaType, int]:
        counts = {t: 0 for t in MEDIA_TYPE_ORDER}
        for medium in self.media:
            counts[medium.media_type] += 1
        return counts


class EventRecord(BaseModel):
    """One dated observation for a (medium, place); empty counts mean 'not recorded'"""
    model_config = ConfigDict(frozen=True)

    date: date
    medium_id: str
    place: Place
    persons_reached: Optional[int] = None
    reach_unit: str = ''
    interactions: Optional[int] = None
    interaction_unit: str = ''
    line: Optional[int] = Field(default=None, exclude=True)


class EventLedger(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: tuple[EventRecord, ...] = ()
    window: Optional[DateWindow] = None

    def records_for(self, medium_id: str) -> list[EventRecord]:
        return [r for r in self.records if r.medium_id == medium_id]


# Survey structure

QUESTION_GROUPS: dict[str, tuple[str, ...]] = {
    'A': ('A1', 'A2', 'A3', 'A4', 'A5'),
    'B': ('B1', 'B2', 'B3'),
    'C': ('C1', 'C2', 'C3'),
    'D': ('D1', 'D2', 'D3'),
    'E': ('E1', 'E2', 'E3'),
    'F': ('F1', 'F2', 'F3', 'F4', 'F5'),
}

QUESTION_CODES = frozenset(code for codes in QUESTION_GROUPS.values() for code in codes)


def group_of(question_code: str) -> str:
    return question_code[0]


class Understanding(str, Enum):
    MODERN = 'modern'
    TRADITIONAL = 'traditional'
    LOW = 'low'


class QuestionKind(str, Enum):
    DEMOGRAPHIC = 'demographic'
    SITUATION = 'situation'
    UNDERSTANDING = 'understanding'
    KNOWLEDGE = 'knowledge'
    ACTIVITY = 'activity'
    MEDIA_USE = 'media_use'
    FREE_TEXT = 'free_text'


class OptionKey(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    understanding: Optional[Understanding] = None
    correct: Optional[bool] = None
    activity: Optional[int] = Field(default=None, ge=0)
    media_type: Optional[MediaType] = None
    activity_kind: Optional[ActivityKind] = None
    note: str = ''

    def tags(self) -> list[str]:
        """Names of the tag fields that are set on this option"""
        names = ('understanding', 'correct', 'activity', 'media_type')
        return [name for name in names if getattr(self, name) is not None]


# Which tag each kind of question puts on its options
TAG_FOR_KIND: dict[QuestionKind, Optional[str]] = {
    QuestionKind.DEMOGRAPHIC: None,
    QuestionKind.SITUATION: None,
    QuestionKind.UNDERSTANDING: 'understanding',
    QuestionKind.KNOWLEDGE: 'correct',
    QuestionKind.ACTIVITY: 'activity',
    QuestionKind.MEDIA_USE: 'media_type',
    QuestionKind.FREE_TEXT: None,
}


class QuestionKey(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: QuestionKind
    label: str = ''
    multiple: bool = False
    options: dict[str, OptionKey] = Field(default_factory=dict)
    # free-text questions: weight and kind of the activity an answer represents
    activity: Optional[int] = Field(default=None, ge=0)
    activity_kind: Optional[ActivityKind] = None

    @property
    def is_keyed(self) -> bool:
        return self.kind != QuestionKind.FREE_TEXT


class AnswerKey(BaseModel):
    model_config = ConfigDict(frozen=True)

    questions: dict[str, QuestionKey] = Field(default_factory=dict)

    def question(self, code: str) -> Optional[QuestionKey]:
        return self.questions.get(code)

    def codes_of_kind(self, kind: QuestionKind) -> list[str]:
        return sorted(code for code, q in self.questions.items() if q.kind == kind)


Answer = Union[str, list[str]]


class Participant(BaseModel):
    model_config = ConfigDict(frozen=True)

    answer_id: int
    answers: dict[str, Answer] = Field(default_factory=dict)
    note: str = ''

    def selected(self, code: str) -> list[str]:
        """Selected option codes (or the free text) for a question; empty if unanswered"""
        value = self.answers.get(code)
        if value is None:
            return []
        if isinstance(value, str):
            return [value] if value.strip() else []
        return list(value)

    def answered(self, code: str) -> bool:
        return bool(self.selected(code))

    def answered_group(self, group: str) -> bool:
        return any(self.answered(code) for code in QUESTION_GROUPS[group])


class SurveyDataset(BaseModel):
    model_config = ConfigDict(frozen=True)

    participants: tuple[Participant, ...] = ()
    completers: frozenset[int] = frozenset()
