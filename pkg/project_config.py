"""
Project configuration: a plain key = value file named project.conf in the
project directory. Command-line flags override file values.
"""
import logging
import os
from datetime import date
from pathlib import Path
from typing import Any, Optional

from dateutil.parser import isoparse
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from errors import ConfigError
from models import DateWindow

logger = logging.getLogger(__name__)

PROJECT_ENV = 'HYBRIDSPACE_PROJECT'
CONFIG_FILE = 'project.conf'

PATH_KEYS = ('media', 'events', 'survey', 'answer_key', 'popper_worlds')
DATE_KEYS = ('window_start', 'window_end')
KNOWN_KEYS = frozenset(PATH_KEYS + DATE_KEYS + ('output', 'top_n', 'bottom_m', 'label', 'survey_medium'))


class ProjectConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    project_dir: Path
    media: Path
    events: Optional[Path] = None
    survey: Optional[Path] = None
    answer_key: Optional[Path] = None
    popper_worlds: Optional[Path] = None
    window_start: Optional[date] = None
    window_end: Optional[date] = None
    output: Path
    top_n: Optional[int] = Field(default=None, ge=1)
    bottom_m: Optional[int] = Field(default=None, ge=1)
    label: str = ''
    survey_medium: Optional[str] = None

    @model_validator(mode='after')
    def check_inputs(self) -> 'ProjectConfig':
        if (self.window_start is None) != (self.window_end is None):
            raise ValueError('window_start and window_end must be set together')
        if self.window_start and self.window_end and self.window_start > self.window_end:
            raise ValueError(f'window_start {self.window_start} is after window_end {self.window_end}')
        for key in PATH_KEYS:
            path = getattr(self, key)
            if path is not None and not path.is_file():
                raise ValueError(f'{key} file {path} does not exist')
        return self

    @property
    def window(self) -> Optional[DateWindow]:
        if self.window_start is None or self.window_end is None:
            return None
        return DateWindow(start=self.window_start, end=self.window_end)

    @property
    def display_label(self) -> str:
        return self.label or self.project_dir.name


def resolve_project_dir(project: Optional[str] = None) -> Path:
    """--project flag, else HYBRIDSPACE_PROJECT, else the current directory"""
    if project:
        return Path(project)
    env_dir = os.getenv(PROJECT_ENV)
    if env_dir:
        return Path(env_dir)
    return Path.cwd()


def read_project_conf(path: Path) -> dict[str, str]:
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f'cannot read {path}: {e.strerror}') from e
    except UnicodeDecodeError as e:
        raise ConfigError(f'{path.name} is not UTF-8 (byte offset {e.start})') from e

    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ConfigError(f'{path.name}: expected key = value', line=number)
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f'{path.name}: unknown key {key!r}', line=number)
        values[key] = value
    return values


def _parse_date(key: str, value: str) -> date:
    try:
        return isoparse(value).date()
    except ValueError:
        raise ConfigError(f'{key} {value!r} is not an ISO 8601 date') from None


def load_project_config(project: Optional[str] = None, **overrides: Any) -> ProjectConfig:
    """Load project.conf; overrides with a value of None are ignored"""
    project_dir = resolve_project_dir(project)
    conf_path = project_dir / CONFIG_FILE
    if not conf_path.is_file():
        raise ConfigError(f'no {CONFIG_FILE} in {project_dir}')
    values = read_project_conf(conf_path)
    if 'media' not in values:
        raise ConfigError(f'{CONFIG_FILE} must name the media file')

    fields: dict[str, Any] = {'project_dir': project_dir}
    for key, value in values.items():
        if key in PATH_KEYS:
            fields[key] = project_dir / value
        elif key in DATE_KEYS:
            fields[key] = _parse_date(key, value)
        elif key == 'output':
            fields[key] = project_dir / value
        else:
            fields[key] = value
    fields.setdefault('output', project_dir / 'out')

    for key, value in overrides.items():
        if value is not None:
            fields[key] = Path(value) if key == 'output' else value

    try:
        config = ProjectConfig.model_validate(fields)
    except ValidationError as e:
        raise ConfigError(f'{conf_path}: {e.errors()[0]["msg"]}') from e
    logger.debug('Loaded project %s from %s', config.display_label, conf_path)
    return config
