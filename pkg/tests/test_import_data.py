import json
import random
from datetime import date, timedelta

import pytest
from conftest import EVENTS_HEADER, EXHIBITION_DIR, MEDIA_HEADER, PROJECT_WINDOW, read_fixture

from errors import (
    BadDate,
    CoordinateOutOfRange,
    DuplicateAnswerId,
    DuplicateId,
    MalformedRow,
    NegativeCount,
    PrefixMismatch,
    UnknownMedium,
    UnknownOption,
    UnknownPrefix,
    UnknownQuestionCode,
    WindowViolation,
)
from import_data import (
    parse_answer_key,
    parse_event_ledger,
    parse_media_registry,
    parse_survey,
    read_event_ledger,
    serialize_event_ledger,
    serialize_media_registry,
)
from ledger_validation import validate_ledger
from media_metrics import net_range
from models import AnswerKey, MediaRegistry, MediaType, Place, QuestionKind, Understanding


def test_parse_media_registry_keeps_file_order(exhibition_registry: MediaRegistry) -> None:
    assert exhibition_registry.ids[:3] == ['P_V', 'P_K', 'P_P']
    assert exhibition_registry.ids[-1] == 'Q_Y'
    instagram = exhibition_registry.get('Q_I')
    assert (instagram.id, instagram.name, instagram.media_type) == ('Q_I', 'Instagram', MediaType.QUATERNARY)


def test_parse_media_registry_errors() -> None:
    with pytest.raises(DuplicateId) as excinfo:
        parse_media_registry(MEDIA_HEADER + 'P_V,Vernissage,Primary\nP_V,Vernissage,Primary\n')
    assert excinfo.value.line == 3

    with pytest.raises(PrefixMismatch):
        parse_media_registry(MEDIA_HEADER + 'P_V,Vernissage,Secondary\n')

    with pytest.raises(UnknownPrefix) as prefix_info:
        parse_media_registry(MEDIA_HEADER + 'Z_9,Nothing,Primary\n')
    assert prefix_info.value.line == 2

    with pytest.raises(MalformedRow):
        parse_media_registry('id,name,type\nP_V,Vernissage,Primary\n')
    with pytest.raises(MalformedRow):
        parse_media_registry(MEDIA_HEADER + 'P_V,Vernissage,Primary,extra\n')
    with pytest.raises(MalformedRow):
        parse_media_registry(MEDIA_HEADER + 'P_V,Vernissage,Digital\n')
    with pytest.raises(MalformedRow):
        parse_media_registry('')


def test_line_numbers_count_blank_lines(small_registry: MediaRegistry) -> None:
    with pytest.raises(DuplicateId) as excinfo:
        parse_media_registry(MEDIA_HEADER + 'P_V,Vernissage,Primary\n\nP_V,Vernissage,Primary\n')
    assert excinfo.value.line == 4
    assert 'already defined on line 2' in excinfo.value.message

    ledger = read_event_ledger(EVENTS_HEADER + '\n2023-02-01,Q_I,,,,5,persons,,\n\n\n2023-02-02,Q_I,,,,6,persons,,\n')
    assert [record.line for record in ledger.records] == [3, 6]

    with pytest.raises(NegativeCount) as negative:
        parse_event_ledger(EVENTS_HEADER + '\n2023-02-01,Q_I,,,,-1,persons,,\n', small_registry)
    assert negative.value.line == 3


def test_exhibition_ledger_sums(exhibition_ledger, exhibition_registry: MediaRegistry) -> None:
    assert net_range(exhibition_ledger, 'S_I', exhibition_registry) == 132
    assert len(exhibition_ledger.records) == 96
    virtual = [r for r in exhibition_ledger.records if r.place.is_virtual]
    assert all(not r.place.has_coordinates for r in virtual)
    ames = next(r for r in exhibition_ledger.records if r.place.name == 'Ames, Iowa')
    assert ames.place == Place.real('Ames, Iowa', 42.03, -93.62)


def test_exhibition_ledger_has_39_real_places(exhibition_ledger) -> None:
    names = {r.place.name for r in exhibition_ledger.records if not r.place.is_virtual}
    assert len(names) == 39


def test_empty_ledger_is_valid(small_registry: MediaRegistry) -> None:
    ledger = parse_event_ledger(EVENTS_HEADER, small_registry)
    assert ledger.records == ()


@pytest.mark.parametrize(
    ('row', 'error'),
    [
        ('2023-02-01,S_X,,,,5,persons,,\n', UnknownMedium),
        ('2023-02-01,S_I,,,,-5,persons,,\n', NegativeCount),
        ('2023-02-30,S_I,,,,5,persons,,\n', BadDate),
        ('yesterday,S_I,,,,5,persons,,\n', BadDate),
        ('2023-02-01,S_I,Pole,91,0,5,persons,,\n', CoordinateOutOfRange),
        ('2023-02-01,S_I,Dateline,0,-181,5,persons,,\n', CoordinateOutOfRange),
        ('2024-02-01,S_I,,,,5,persons,,\n', WindowViolation),
        ('2023-02-01,S_I,,,,five,persons,,\n', MalformedRow),
        ('2023-02-01,S_I,,48.1,11.5,5,persons,,\n', MalformedRow),
        ('2023-02-01,S_I,Munich,48.1,,5,persons,,\n', MalformedRow),
    ],
)
def test_parse_event_ledger_errors(small_registry: MediaRegistry, row: str, error: type[Exception]) -> None:
    with pytest.raises(error) as excinfo:
        parse_event_ledger(EVENTS_HEADER + row, small_registry, PROJECT_WINDOW)
    assert getattr(excinfo.value, 'line', None) in (2, None)


def test_parser_and_validator_agree(small_registry: MediaRegistry) -> None:
    rng = random.Random(20230101)
    rows = [
        '2023-02-01,S_I,Herrsching,47.99,11.17,5,persons,,',
        '2023-02-01,S_X,,,,5,persons,,',
        '2023-02-01,S_I,,,,-1,persons,,',
        '2024-02-01,S_I,,,,5,persons,,',
        '2023-02-01,S_I,Pole,95,0,5,persons,,',
        '2023-02-01,Q_I,,,,586,views,311,likes',
        '2023-02-01,T_T,,,,,calls,,calls',
    ]
    for _ in range(200):
        chosen = [rng.choice(rows) for _ in range(rng.randint(0, 4))]
        text = EVENTS_HEADER + ''.join(row + '\n' for row in chosen)
        report = validate_ledger(read_event_ledger(text, PROJECT_WINDOW), small_registry)
        if report.accepted:
            parse_event_ledger(text, small_registry, PROJECT_WINDOW)
        else:
            with pytest.raises(Exception) as excinfo:
                parse_event_ledger(text, small_registry, PROJECT_WINDOW)
            assert excinfo.value.code == report.errors[0].code  # type: ignore[attr-defined]


def test_round_trip_of_canonical_fixtures(exhibition_registry: MediaRegistry, exhibition_ledger) -> None:
    media_text = read_fixture(EXHIBITION_DIR / 'media.csv')
    events_text = read_fixture(EXHIBITION_DIR / 'events.csv')
    assert serialize_media_registry(exhibition_registry) == media_text
    assert serialize_event_ledger(exhibition_ledger) == events_text


def test_round_trip_of_generated_ledgers(small_registry: MediaRegistry) -> None:
    rng = random.Random(7)
    places = [('Herrsching', '47.99', '11.17'), ('Ames, Iowa', '42.03', '-93.62'), ('', '', ''), ('Basel', '', '')]
    for _ in range(50):
        lines = []
        for _ in range(rng.randint(0, 6)):
            day = date(2023, 1, 1) + timedelta(days=rng.randint(0, 183))
            name, lat, lon = rng.choice(places)
            place = f'"{name}"' if ',' in name else name
            reach = str(rng.randint(0, 500))
            replies = rng.choice(['', str(rng.randint(0, 50))])
            medium = rng.choice(small_registry.ids)
            lines.append(f'{day.isoformat()},{medium},{place},{lat},{lon},{reach},persons,{replies},likes\n')
        text = EVENTS_HEADER + ''.join(lines)
        ledger = parse_event_ledger(text, small_registry, PROJECT_WINDOW)
        assert serialize_event_ledger(ledger) == text
        assert parse_event_ledger(text, small_registry, PROJECT_WINDOW) == ledger


def test_parse_answer_key(answer_key: AnswerKey) -> None:
    assert answer_key.question('C2').options['opt1'].understanding is Understanding.MODERN  # type: ignore[union-attr]
    assert answer_key.question('D1').options['interaction'].correct is True  # type: ignore[union-attr]
    assert answer_key.codes_of_kind(QuestionKind.KNOWLEDGE) == ['D1', 'D2', 'D3', 'E1', 'E2', 'E3']
    assert answer_key.question('F4').is_keyed is False  # type: ignore[union-attr]


def test_parse_answer_key_errors() -> None:
    with pytest.raises(UnknownQuestionCode):
        parse_answer_key(json.dumps({'G1': {'kind': 'demographic'}}))
    with pytest.raises(UnknownOption):
        parse_answer_key(json.dumps({'D1': {'kind': 'knowledge', 'options': {'a': {'label': 'a'}}}}))
    with pytest.raises(UnknownOption):
        parse_answer_key(json.dumps({
            'C1': {'kind': 'understanding', 'options': {'a': {'label': 'a', 'understanding': 'low', 'correct': True}}},
        }))
    with pytest.raises(MalformedRow):
        parse_answer_key(json.dumps({'A1': {'kind': 'opinion'}}))
    with pytest.raises(MalformedRow):
        parse_answer_key('[1, 2')


def test_parse_survey_fixture(survey) -> None:
    assert len(survey.participants) == 14
    assert survey.completers == frozenset({3, 7, 15})
    assert [p.answer_id for p in survey.participants] == list(range(3, 17))


def test_parse_survey_errors(answer_key: AnswerKey) -> None:
    assert parse_survey('[]', answer_key).participants == ()
    with pytest.raises(DuplicateAnswerId):
        parse_survey('[{"answer_id": 3, "answers": {}}, {"answer_id": 3, "answers": {}}]', answer_key)
    with pytest.raises(UnknownQuestionCode):
        parse_survey('[{"answer_id": 3, "answers": {"G1": "x"}}]', answer_key)
    with pytest.raises(UnknownOption):
        parse_survey('[{"answer_id": 3, "answers": {"A1": "sir"}}]', answer_key)
    with pytest.raises(MalformedRow):
        parse_survey('[{"answer_id": 3, "answers": {"A1": ["mr", "mrs"]}}]', answer_key)
    with pytest.raises(MalformedRow):
        parse_survey('{"answer_id": 3}', answer_key)


def test_free_text_answers_are_not_checked_against_options(answer_key: AnswerKey) -> None:
    dataset = parse_survey('[{"answer_id": 1, "answers": {"F4": "Lovely show"}}]', answer_key)
    assert dataset.participants[0].selected('F4') == ['Lovely show']
    assert dataset.completers == frozenset()
