from datetime import date

import pytest
from conftest import EVENTS_HEADER, PROJECT_WINDOW

from errors import NegativeCount, RecordWithoutMeasure
from import_data import read_event_ledger
from ledger_validation import Finding, ValidationReport, validate_ledger
from models import EventLedger, EventRecord, MediaRegistry, Place


def test_exhibition_fixture_has_only_warnings(exhibition_ledger, exhibition_registry: MediaRegistry) -> None:
    report = validate_ledger(exhibition_ledger, exhibition_registry)
    assert report.accepted
    assert report.errors == []
    assert [(w.code, w.message.split()[0]) for w in report.warnings] == [
        ('NoReachRecords', 'P_P'),
        ('NoInteractionRecords', 'S_Z'),
        ('NoInteractionRecords', 'Q_M'),
    ]


def test_window_violation(small_registry: MediaRegistry) -> None:
    ledger = read_event_ledger(EVENTS_HEADER + '2023-07-04,S_I,,,,5,persons,,\n', PROJECT_WINDOW)
    report = validate_ledger(ledger, small_registry)
    assert not report.accepted
    assert report.errors == [
        Finding(2, 'WindowViolation', '2023-07-04 outside project window 2023-01-01..2023-07-03'),
    ]


def test_single_well_formed_record(small_registry: MediaRegistry) -> None:
    registry = MediaRegistry.from_media([small_registry.get('Q_I')])
    ledger = read_event_ledger(EVENTS_HEADER + '2023-05-12,Q_I,,,,586,views,311,likes\n', PROJECT_WINDOW)
    report = validate_ledger(ledger, registry)
    assert report.errors == []
    assert report.warnings == []
    assert report.lines() == ['0 error(s), 0 warning(s)']


def test_every_problem_is_reported_in_input_order(small_registry: MediaRegistry) -> None:
    text = EVENTS_HEADER + '2023-02-01,S_X,,,,5,persons,,\n' + '2023-02-01,S_I,,,,-1,persons,-2,likes\n'
    report = validate_ledger(read_event_ledger(text), small_registry)
    assert [(f.line, f.code) for f in report.errors] == [
        (2, 'UnknownMedium'),
        (3, 'NegativeCount'),
        (3, 'NegativeCount'),
    ]
    assert report.lines()[0] == 'error: line 2: [UnknownMedium] medium S_X is not in the registry'
    assert report.lines()[-1] == '3 error(s), 3 warning(s)'


def test_missing_measures_are_warnings_per_measure(small_registry: MediaRegistry) -> None:
    ledger = EventLedger(records=(
        EventRecord(date=date(2023, 2, 1), medium_id='P_V', place=Place.real('Herrsching'), interactions=7),
        EventRecord(date=date(2023, 2, 1), medium_id='S_I', place=Place.virtual(), persons_reached=132),
    ))
    report = validate_ledger(ledger, small_registry)
    codes = [(w.code, w.message.split()[0]) for w in report.warnings]
    assert codes == [
        ('NoReachRecords', 'P_V'),
        ('NoInteractionRecords', 'S_I'),
        ('NoRecords', 'T_T'),
        ('NoRecords', 'Q_I'),
    ]


def test_raise_first_error_uses_the_error_class() -> None:
    report = ValidationReport()
    report.raise_first_error()
    report.add_error('RecordWithoutMeasure', 'both counts empty', 4)
    report.add_error('NegativeCount', 'negative', 5)
    with pytest.raises(RecordWithoutMeasure) as excinfo:
        report.raise_first_error()
    assert excinfo.value.line == 4
    assert not isinstance(excinfo.value, NegativeCount)
