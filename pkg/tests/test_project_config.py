from pathlib import Path

import pytest
from conftest import EXHIBITION_DIR, MEDIA_HEADER, SURVEY_SPACE_DIR

from errors import ConfigError
from project_config import PROJECT_ENV, load_project_config, read_project_conf, resolve_project_dir


def _project(tmp_path: Path, conf: str) -> Path:
    (tmp_path / 'media.csv').write_text(MEDIA_HEADER + 'P_V,Vernissage,Primary\n', encoding='utf-8')
    (tmp_path / 'project.conf').write_text(conf, encoding='utf-8')
    return tmp_path


def test_load_the_exhibition_project() -> None:
    config = load_project_config(str(EXHIBITION_DIR))
    assert config.media == EXHIBITION_DIR / 'media.csv'
    assert config.answer_key == EXHIBITION_DIR / 'answer_key.json'
    assert config.window is not None and config.window.days == 184
    assert (config.top_n, config.bottom_m) == (10, 9)
    assert config.display_label == 'Media analysis'
    assert config.survey_medium == 'Q_S'
    assert config.output == EXHIBITION_DIR / 'out'


def test_minimal_project() -> None:
    config = load_project_config(str(SURVEY_SPACE_DIR))
    assert config.events is None
    assert config.window is None
    assert config.top_n is None


def test_flags_override_the_file(tmp_path: Path) -> None:
    config = load_project_config(str(EXHIBITION_DIR), output=str(tmp_path), top_n=5, bottom_m=None)
    assert config.output == tmp_path
    assert config.top_n == 5
    assert config.bottom_m == 9


def test_project_dir_resolution(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.setenv(PROJECT_ENV, str(tmp_path))
    assert resolve_project_dir() == tmp_path
    assert resolve_project_dir('elsewhere') == Path('elsewhere')
    monkeypatch.delenv(PROJECT_ENV)
    monkeypatch.chdir(tmp_path)
    assert resolve_project_dir() == tmp_path


def test_label_defaults_to_the_directory_name(tmp_path: Path) -> None:
    target = tmp_path / 'spring-show'
    target.mkdir()
    config = load_project_config(str(_project(target, 'media = media.csv\n')))
    assert config.display_label == 'spring-show'


def test_comments_and_blank_lines_are_ignored(tmp_path: Path) -> None:
    values = read_project_conf(_project(tmp_path, '# note\n\nmedia = media.csv\nlabel = a = b\n') / 'project.conf')
    assert values == {'media': 'media.csv', 'label': 'a = b'}


@pytest.mark.parametrize(
    ('conf', 'line'),
    [
        ('media = media.csv\nwindow_start\n', 2),
        ('media = media.csv\ncolour = red\n', 2),
    ],
)
def test_malformed_lines_carry_a_line_number(tmp_path: Path, conf: str, line: int) -> None:
    with pytest.raises(ConfigError) as excinfo:
        load_project_config(str(_project(tmp_path, conf)))
    assert excinfo.value.line == line


@pytest.mark.parametrize(
    'conf',
    [
        'label = no media\n',
        'media = missing.csv\n',
        'media = media.csv\nwindow_start = 2023-01-01\n',
        'media = media.csv\nwindow_start = 2023-07-03\nwindow_end = 2023-01-01\n',
        'media = media.csv\nwindow_start = first of may\nwindow_end = 2023-07-03\n',
        'media = media.csv\ntop_n = 0\n',
        'media = media.csv\nevents = events.csv\n',
    ],
)
def test_invalid_projects(tmp_path: Path, conf: str) -> None:
    with pytest.raises(ConfigError):
        load_project_config(str(_project(tmp_path, conf)))


def test_missing_project_conf(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match='no project.conf'):
        load_project_config(str(tmp_path))
