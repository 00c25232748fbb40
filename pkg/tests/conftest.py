from datetime import date
from pathlib import Path

import pytest

from import_data import parse_answer_key, parse_event_ledger, parse_media_registry, parse_survey
from media_metrics import MetricsTable, metrics_table
from models import AnswerKey, DateWindow, EventLedger, MediaRegistry, SurveyDataset

FIXTURES = Path(__file__).resolve().parent.parent / 'fixtures'
EXHIBITION_DIR = FIXTURES / 'exhibition'
SURVEY_SPACE_DIR = FIXTURES / 'exhibition-survey'

PROJECT_WINDOW = DateWindow(start=date(2023, 1, 1), end=date(2023, 7, 3))

EVENTS_HEADER = 'date,medium_id,place,lat,lon,persons_reached,reach_unit,interactions,interaction_unit\n'
MEDIA_HEADER = 'medium_id,name,media_type\n'


def read_fixture(path: Path) -> str:
    return path.read_text(encoding='utf-8')


@pytest.fixture(scope='session')
def exhibition_registry() -> MediaRegistry:
    return parse_media_registry(read_fixture(EXHIBITION_DIR / 'media.csv'))


@pytest.fixture(scope='session')
def survey_space_registry() -> MediaRegistry:
    return parse_media_registry(read_fixture(SURVEY_SPACE_DIR / 'media.csv'))


@pytest.fixture(scope='session')
def exhibition_ledger(exhibition_registry: MediaRegistry) -> EventLedger:
    return parse_event_ledger(read_fixture(EXHIBITION_DIR / 'events.csv'), exhibition_registry, PROJECT_WINDOW)


@pytest.fixture(scope='session')
def exhibition_table(exhibition_ledger: EventLedger, exhibition_registry: MediaRegistry) -> MetricsTable:
    return metrics_table(exhibition_ledger, exhibition_registry)


@pytest.fixture(scope='session')
def answer_key() -> AnswerKey:
    return parse_answer_key(read_fixture(EXHIBITION_DIR / 'answer_key.json'))


@pytest.fixture(scope='session')
def survey(answer_key: AnswerKey) -> SurveyDataset:
    return parse_survey(read_fixture(EXHIBITION_DIR / 'survey.json'), answer_key)


@pytest.fixture
def small_registry() -> MediaRegistry:
    return parse_media_registry(
        MEDIA_HEADER
        + 'P_V,Vernissage,Primary\n'
        + 'S_I,Invitation cards,Secondary\n'
        + 'T_T,Telephone,Tertiary\n'
        + 'Q_I,Instagram,Quaternary\n'
    )
