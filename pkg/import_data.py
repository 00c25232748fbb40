#!/usr/bin/env python3
"""
Data import utility for hybrid space projects
Reads the media registry, event ledger, survey responses and answer key
from their text formats and writes the canonical CSV forms back out
"""
import io
import json
import logging
from datetime import date
from typing import Any, Optional

import pandas as pd
from dateutil.parser import isoparse
from pydantic import TypeAdapter, ValidationError

from errors import (
    BadDate,
    DuplicateAnswerId,
    DuplicateId,
    MalformedRow,
    PrefixMismatch,
    UnknownOption,
    UnknownPrefix,
    UnknownQuestionCode,
)
from ledger_validation import validate_ledger
from models import (
    QUESTION_CODES,
    QUESTION_GROUPS,
    TAG_FOR_KIND,
    AnswerKey,
    DateWindow,
    EventLedger,
    EventRecord,
    MediaRegistry,
    MediaType,
    Medium,
    Participant,
    Place,
    QuestionKey,
    SurveyDataset,
    media_type_of_id,
)

logger = logging.getLogger(__name__)

MEDIA_COLUMNS = ['medium_id', 'name', 'media_type']
EVENT_COLUMNS = [
    'date', 'medium_id', 'place', 'lat', 'lon',
    'persons_reached', 'reach_unit', 'interactions', 'interaction_unit',
]


def _read_csv(text: str, columns: list[str]) -> pd.DataFrame:
    """Read CSV text as strings only; the header must match exactly.

    The frame is indexed by physical line number, blank lines included.
    """
    if not text.strip():
        raise MalformedRow(f'missing header, expected {",".join(columns)}', line=1)
    try:
        # header=None so a row with extra fields is a parser error instead of an index column
        raw = pd.read_csv(
            io.StringIO(text), header=None, dtype=str, keep_default_na=False, na_filter=False,
            skip_blank_lines=True,
        )
    except pd.errors.ParserError as e:
        raise MalformedRow(f'unreadable CSV: {e}') from e

    # pandas drops blank lines; quoted line breaks make the count disagree
    lines = [n for n, line in enumerate(text.split('\n'), start=1) if line.strip()]
    if len(lines) != len(raw):
        lines = list(range(1, len(raw) + 1))

    header = [str(c) for c in raw.iloc[0].tolist()]
    if header != columns:
        raise MalformedRow(f'header is {",".join(header)}, expected {",".join(columns)}', line=lines[0])

    df = raw.iloc[1:].copy()
    df.columns = columns
    df.index = pd.Index(lines[1:])

    # Rows with missing trailing fields come back with NaN cells
    for idx, row in df.iterrows():
        if any(not isinstance(value, str) for value in row.tolist()):
            raise MalformedRow(f'expected {len(columns)} fields', line=_line_of(idx))
    return df


def _line_of(idx: Any) -> int:
    return int(idx)


def parse_media_registry(text: str) -> MediaRegistry:
    """Parse media.csv into a registry, rows kept in file order"""
    df = _read_csv(text, MEDIA_COLUMNS)

    media = []
    seen: dict[str, int] = {}
    for idx, row in df.iterrows():
        line = _line_of(idx)
        medium_id = row['medium_id'].strip()
        if not medium_id:
            raise MalformedRow('empty medium_id', line=line)
        try:
            media_type = MediaType(row['media_type'].strip())
        except ValueError:
            raise MalformedRow(f'unknown media type {row["media_type"]!r}', line=line) from None

        if medium_id in seen:
            raise DuplicateId(f'medium id {medium_id} already defined on line {seen[medium_id]}', line=line)
        seen[medium_id] = line

        try:
            implied = media_type_of_id(medium_id)
        except UnknownPrefix as e:
            e.line = line
            raise
        if implied != media_type:
            raise PrefixMismatch(
                f'medium id {medium_id} implies {implied.value}, row says {media_type.value}', line=line
            )
        media.append(Medium(id=medium_id, name=row['name'], media_type=media_type))

    registry = MediaRegistry.from_media(media)
    logger.debug('Parsed media registry with %d media', len(registry))
    return registry


def _parse_count(value: str, column: str, line: int) -> Optional[int]:
    value = value.strip()
    if not value:
        return None
    try:
        return int(value)
    except ValueError:
        raise MalformedRow(f'{column} {value!r} is not an integer', line=line) from None


def _parse_coordinate(value: str, column: str, line: int) -> Optional[float]:
    value = value.strip()
    if not value:
        return None
    try:
        return float(value)
    except ValueError:
        raise MalformedRow(f'{column} {value!r} is not a number', line=line) from None


def _parse_date(value: str, line: int) -> date:
    try:
        return isoparse(value.strip()).date()
    except (ValueError, OverflowError):
        raise BadDate(f'{value!r} is not an ISO 8601 date', line=line) from None


def read_event_ledger(text: str, window: Optional[DateWindow] = None) -> EventLedger:
    """Structural read of events.csv; domain rules are left to validate_ledger"""
    df = _read_csv(text, EVENT_COLUMNS)

    records = []
    for idx, row in df.iterrows():
        line = _line_of(idx)
        name = row['place'].strip()
        lat = _parse_coordinate(row['lat'], 'lat', line)
        lon = _parse_coordinate(row['lon'], 'lon', line)
        if not name and (lat is not None or lon is not None):
            raise MalformedRow('a virtual place (empty place) cannot carry coordinates', line=line)
        if (lat is None) != (lon is None):
            raise MalformedRow('lat and lon must be given together', line=line)

        records.append(EventRecord(
            date=_parse_date(row['date'], line),
            medium_id=row['medium_id'].strip(),
            place=Place.real(name, lat, lon) if name else Place.virtual(),
            persons_reached=_parse_count(row['persons_reached'], 'persons_reached', line),
            reach_unit=row['reach_unit'],
            interactions=_parse_count(row['interactions'], 'interactions', line),
            interaction_unit=row['interaction_unit'],
            line=line,
        ))

    logger.debug('Read %d ledger records', len(records))
    return EventLedger(records=tuple(records), window=window)


def parse_event_ledger(
    text: str, registry: MediaRegistry, window: Optional[DateWindow] = None
) -> EventLedger:
    """Read events.csv and reject it on the first rule violation validate_ledger reports"""
    ledger = read_event_ledger(text, window)
    report = validate_ledger(ledger, registry)
    report.raise_first_error()
    return ledger


def parse_answer_key(text: str) -> AnswerKey:
    """Parse answer_key.json: an object mapping question codes to their key"""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedRow(f'answer key is not valid JSON: {e.msg}', line=e.lineno) from e
    if not isinstance(raw, dict):
        raise MalformedRow('answer key must be a JSON object of question codes')

    questions: dict[str, QuestionKey] = {}
    for code, body in raw.items():
        if code not in QUESTION_CODES:
            raise UnknownQuestionCode(f'answer key defines unknown question {code}')
        try:
            question = QuestionKey.model_validate(body)
        except ValidationError as e:
            raise MalformedRow(f'question {code}: {e.errors()[0]["msg"]}') from e

        expected = TAG_FOR_KIND[question.kind]
        for option_code, option in question.options.items():
            tags = option.tags()
            if tags != ([expected] if expected else []):
                raise UnknownOption(
                    f'{code} option {option_code} carries tags {tags or "none"}, '
                    f'a {question.kind.value} question needs {expected or "none"}'
                )
        questions[code] = question

    logger.debug('Parsed answer key with %d questions', len(questions))
    return AnswerKey(questions=questions)


_participants_adapter = TypeAdapter(list[Participant])


def parse_survey(text: str, key: AnswerKey) -> SurveyDataset:
    """Parse survey.json and mark participants who answered all six question groups"""
    try:
        participants = _participants_adapter.validate_json(text)
    except ValidationError as e:
        raise MalformedRow(f'survey is not a list of participants: {e.errors()[0]["msg"]}') from e

    seen: set[int] = set()
    for participant in participants:
        if participant.answer_id in seen:
            raise DuplicateAnswerId(f'answer id {participant.answer_id} appears more than once')
        seen.add(participant.answer_id)
        _check_answers(participant, key)

    completers = frozenset(
        p.answer_id for p in participants if all(p.answered_group(group) for group in QUESTION_GROUPS)
    )
    logger.debug('Parsed survey: %d participants, %d completers', len(participants), len(completers))
    return SurveyDataset(participants=tuple(participants), completers=completers)


def _check_answers(participant: Participant, key: AnswerKey) -> None:
    for code, value in participant.answers.items():
        if code not in QUESTION_CODES:
            raise UnknownQuestionCode(f'answer id {participant.answer_id} answers unknown question {code}')
        question = key.question(code)
        if question is None or not question.is_keyed:
            continue

        selected = participant.selected(code)
        if isinstance(value, list) and len(selected) > 1 and not question.multiple:
            raise MalformedRow(f'answer id {participant.answer_id}: {code} allows a single answer only')
        for option in selected:
            if option not in question.options:
                raise UnknownOption(f'answer id {participant.answer_id}: {code} has no option {option!r}')


def _format_count(value: Optional[int]) -> str:
    return '' if value is None else str(value)


def _format_coordinate(value: Optional[float]) -> str:
    if value is None:
        return ''
    if value.is_integer():
        return str(int(value))
    return repr(value)


def _to_csv(rows: list[dict[str, str]], columns: list[str]) -> str:
    df = pd.DataFrame(rows, columns=columns, dtype=str)
    return df.to_csv(index=False, lineterminator='\n')


def serialize_media_registry(registry: MediaRegistry) -> str:
    rows = [{'medium_id': m.id, 'name': m.name, 'media_type': m.media_type.value} for m in registry.media]
    return _to_csv(rows, MEDIA_COLUMNS)


def serialize_event_ledger(ledger: EventLedger) -> str:
    rows = []
    for record in ledger.records:
        rows.append({
            'date': record.date.isoformat(),
            'medium_id': record.medium_id,
            'place': record.place.name or '',
            'lat': _format_coordinate(record.place.lat),
            'lon': _format_coordinate(record.place.lon),
            'persons_reached': _format_count(record.persons_reached),
            'reach_unit': record.reach_unit,
            'interactions': _format_count(record.interactions),
            'interaction_unit': record.interaction_unit,
        })
    return _to_csv(rows, EVENT_COLUMNS)
