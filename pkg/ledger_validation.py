"""
Rule checks for an event ledger against its media registry.

Findings are collected rather than raised, so a single pass reports every
problem in a file. ``parse_event_ledger`` runs the same rules and raises the
first error, which keeps parser and validator in agreement.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

from errors import ERRORS_BY_CODE, DataValidationError
from models import EventLedger, MediaRegistry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Finding:
    line: Optional[int]
    code: str
    message: str

    def __str__(self) -> str:
        location = f'line {self.line}: ' if self.line is not None else ''
        return f'{location}[{self.code}] {self.message}'


@dataclass
class ValidationReport:
    errors: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    def add_error(self, code: str, message: str, line: Optional[int] = None) -> None:
        self.errors.append(Finding(line, code, message))

    def add_warning(self, code: str, message: str, line: Optional[int] = None) -> None:
        self.warnings.append(Finding(line, code, message))

    @property
    def accepted(self) -> bool:
        return not self.errors

    def raise_first_error(self) -> None:
        """Raise the first error as its exception class; no-op for an accepted report"""
        if not self.errors:
            return
        first = self.errors[0]
        error_class = ERRORS_BY_CODE.get(first.code, DataValidationError)
        raise error_class(first.message, line=first.line)

    def summary(self) -> str:
        return f'{len(self.errors)} error(s), {len(self.warnings)} warning(s)'

    def lines(self) -> list[str]:
        """Report lines, errors first, in input order"""
        out = [f'error: {finding}' for finding in self.errors]
        out += [f'warning: {finding}' for finding in self.warnings]
        out.append(self.summary())
        return out


def validate_ledger(ledger: EventLedger, registry: MediaRegistry) -> ValidationReport:
    """Check every record; missing measures per medium become warnings, not errors"""
    report = ValidationReport()
    window = ledger.window

    for record in ledger.records:
        line = record.line
        if record.medium_id not in registry:
            report.add_error('UnknownMedium', f'medium {record.medium_id} is not in the registry', line)

        for column, value in (('persons_reached', record.persons_reached), ('interactions', record.interactions)):
            if value is not None and value < 0:
                report.add_error('NegativeCount', f'{column} is {value}, counts cannot be negative', line)

        if record.persons_reached is None and record.interactions is None:
            report.add_error('RecordWithoutMeasure', 'record leaves both persons_reached and interactions empty', line)

        place = record.place
        if place.lat is not None and not -90 <= place.lat <= 90:
            report.add_error('CoordinateOutOfRange', f'lat {place.lat} outside [-90, 90]', line)
        if place.lon is not None and not -180 <= place.lon <= 180:
            report.add_error('CoordinateOutOfRange', f'lon {place.lon} outside [-180, 180]', line)

        if window is not None and not window.contains(record.date):
            report.add_error(
                'WindowViolation',
                f'{record.date.isoformat()} outside project window '
                f'{window.start.isoformat()}..{window.end.isoformat()}',
                line,
            )

    for medium in registry.media:
        records = ledger.records_for(medium.id)
        if not records:
            report.add_warning('NoRecords', f'{medium.id} ({medium.name}) has no ledger records')
            continue
        if all(r.persons_reached is None for r in records):
            report.add_warning('NoReachRecords', f'{medium.id} ({medium.name}) has no range recorded')
        if all(r.interactions is None for r in records):
            report.add_warning('NoInteractionRecords', f'{medium.id} ({medium.name}) has no interactions recorded')

    logger.debug('Validated %d records: %s', len(ledger.records), report.summary())
    return report
