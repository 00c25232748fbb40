"""
Survey scoring driven by the answer key
Option counts, understanding-of-art coding, knowledge scores, individual
activity and media use per participant, and the media-use/activity
correlation.
"""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional

from scipy import stats

from errors import EmptyRegistry
from media_metrics import CompletionStats, ModalityMix
from models import (
    MEDIA_TYPE_ORDER,
    QUESTION_GROUPS,
    ActivityKind,
    AnswerKey,
    Participant,
    PopperWorld,
    QuestionKind,
    SurveyDataset,
    Understanding,
    group_of,
    load_popper_worlds,
)

logger = logging.getLogger(__name__)

# Questions the understanding coding is cross-tabulated against
CROSS_TAB_QUESTIONS = ('A1', 'A2', 'A3')
UNANSWERED = '-'


@dataclass
class SurveyReport:
    participants: int
    completion: CompletionStats
    option_counts: dict[str, dict[str, int]] = field(default_factory=dict)
    answered_by_group: dict[str, int] = field(default_factory=dict)
    understanding_by_participant: dict[int, dict[Understanding, int]] = field(default_factory=dict)
    knowledge_by_participant: dict[int, dict[str, int]] = field(default_factory=dict)
    knowledge_group_size: dict[str, int] = field(default_factory=dict)
    correct_by_question: dict[str, int] = field(default_factory=dict)
    activity_by_participant: dict[int, int] = field(default_factory=dict)
    media_use_by_participant: dict[int, int] = field(default_factory=dict)
    activity_by_world: dict[PopperWorld, int] = field(default_factory=dict)
    cross_tabs: dict[str, dict[str, dict[Understanding, int]]] = field(default_factory=dict)

    def unanswered(self, group: str) -> int:
        return self.participants - self.answered_by_group.get(group, 0)

    def share(self, code: str, option: str) -> Optional[Fraction]:
        """Share of all participants that chose an option"""
        if self.participants == 0:
            return None
        return Fraction(self.option_counts.get(code, {}).get(option, 0), self.participants)

    @property
    def understanding_totals(self) -> dict[Understanding, int]:
        totals = {u: 0 for u in Understanding}
        for tally in self.understanding_by_participant.values():
            for category, n in tally.items():
                totals[category] += n
        return totals


class CorrelationNote(str, Enum):
    POSITIVE = 'positive'
    NEGATIVE = 'negative'
    NONE = 'none'
    UNDEFINED = 'undefined'


@dataclass(frozen=True)
class CorrelationResult:
    label_x: str
    label_y: str
    n: int
    rho: Optional[float]
    note: CorrelationNote


def _activity_kind(option_kind: Optional[ActivityKind], question_kind: Optional[ActivityKind]) -> Optional[ActivityKind]:
    return option_kind or question_kind


def score_survey(dataset: SurveyDataset, key: AnswerKey, popper_worlds: Optional[Path] = None) -> SurveyReport:
    """Tally every keyed question; unanswered questions simply do not count"""
    worlds = load_popper_worlds(popper_worlds)
    report = SurveyReport(
        participants=len(dataset.participants),
        completion=CompletionStats(participants=len(dataset.participants), completers=len(dataset.completers)),
    )
    report.activity_by_world = {w: 0 for w in PopperWorld}

    for code, question in sorted(key.questions.items()):
        if question.is_keyed:
            report.option_counts[code] = {option: 0 for option in question.options}
        if question.kind == QuestionKind.KNOWLEDGE:
            report.correct_by_question[code] = 0
            group = group_of(code)
            report.knowledge_group_size[group] = report.knowledge_group_size.get(group, 0) + 1

    for group in QUESTION_GROUPS:
        report.answered_by_group[group] = sum(1 for p in dataset.participants if p.answered_group(group))

    for participant in dataset.participants:
        _score_participant(participant, key, worlds, report)

    report.cross_tabs = _cross_tabs(dataset, key, report)
    logger.debug(
        'Scored survey: %d participants, %d completers', report.participants, report.completion.completers
    )
    return report


def _score_participant(
    participant: Participant, key: AnswerKey, worlds: dict[ActivityKind, PopperWorld], report: SurveyReport
) -> None:
    pid = participant.answer_id
    understanding: dict[Understanding, int] = defaultdict(int)
    knowledge: dict[str, int] = {}
    activity: Optional[int] = None
    media_use: Optional[int] = None

    for code, question in sorted(key.questions.items()):
        selected = participant.selected(code)
        if not selected:
            continue

        if question.is_keyed:
            for option_code in selected:
                report.option_counts[code][option_code] += 1

        if question.kind == QuestionKind.UNDERSTANDING:
            for option_code in selected:
                category = question.options[option_code].understanding
                if category is not None:
                    understanding[category] += 1

        elif question.kind == QuestionKind.KNOWLEDGE:
            correct = sum(1 for o in selected if question.options[o].correct)
            group = group_of(code)
            knowledge[group] = knowledge.get(group, 0) + (1 if correct else 0)
            if correct:
                report.correct_by_question[code] += 1

        elif question.kind == QuestionKind.ACTIVITY:
            for option_code in selected:
                option = question.options[option_code]
                weight = option.activity or 0
                activity = (activity or 0) + weight
                kind = _activity_kind(option.activity_kind, question.activity_kind)
                if kind is not None:
                    report.activity_by_world[worlds[kind]] += weight

        elif question.kind == QuestionKind.MEDIA_USE:
            media_use = (media_use or 0) + len(selected)
            if question.activity_kind is not None:
                report.activity_by_world[worlds[question.activity_kind]] += len(selected)

        elif question.kind == QuestionKind.FREE_TEXT and question.activity is not None:
            activity = (activity or 0) + question.activity
            if question.activity_kind is not None:
                report.activity_by_world[worlds[question.activity_kind]] += question.activity

    if understanding:
        report.understanding_by_participant[pid] = {u: understanding.get(u, 0) for u in Understanding}
    if knowledge:
        report.knowledge_by_participant[pid] = knowledge
    if activity is not None:
        report.activity_by_participant[pid] = activity
    if media_use is not None:
        report.media_use_by_participant[pid] = media_use


def _cross_tabs(
    dataset: SurveyDataset, key: AnswerKey, report: SurveyReport
) -> dict[str, dict[str, dict[Understanding, int]]]:
    """Understanding tallies split by the demographic answers; counts only"""
    tabs: dict[str, dict[str, dict[Understanding, int]]] = {}
    for code in CROSS_TAB_QUESTIONS:
        question = key.question(code)
        if question is None:
            continue
        columns = list(question.options) + [UNANSWERED]
        tab = {option: {u: 0 for u in Understanding} for option in columns}
        for participant in dataset.participants:
            tally = report.understanding_by_participant.get(participant.answer_id)
            if tally is None:
                continue
            chosen = participant.selected(code) or [UNANSWERED]
            for option in chosen:
                for category, n in tally.items():
                    tab[option][category] += n
        tabs[code] = tab
    return tabs


def correlate_activity(report: SurveyReport) -> CorrelationResult:
    """Spearman's rho between media use and individual activity"""
    ids = sorted(set(report.media_use_by_participant) & set(report.activity_by_participant))
    media_use = [report.media_use_by_participant[i] for i in ids]
    activity = [report.activity_by_participant[i] for i in ids]
    return spearman(media_use, activity, label_x='media use', label_y='activity')


def spearman(x: list[int], y: list[int], label_x: str = 'x', label_y: str = 'y') -> CorrelationResult:
    n = len(x)
    if n < 2 or len(set(x)) < 2 or len(set(y)) < 2:
        return CorrelationResult(label_x, label_y, n, None, CorrelationNote.UNDEFINED)

    rho = float(stats.spearmanr(x, y)[0])
    if math.isnan(rho):
        return CorrelationResult(label_x, label_y, n, None, CorrelationNote.UNDEFINED)
    if abs(rho) < 1e-12:
        note = CorrelationNote.NONE
    elif rho > 0:
        note = CorrelationNote.POSITIVE
    else:
        note = CorrelationNote.NEGATIVE
    return CorrelationResult(label_x, label_y, n, rho, note)


def survey_modality(key: AnswerKey) -> ModalityMix:
    """Modality of the media offered as answers to the media-use questions"""
    counts = {t: 0 for t in MEDIA_TYPE_ORDER}
    for code in key.codes_of_kind(QuestionKind.MEDIA_USE):
        for option in key.questions[code].options.values():
            if option.media_type is not None:
                counts[option.media_type] += 1
    total = sum(counts.values())
    if total == 0:
        raise EmptyRegistry('the answer key offers no media')
    return ModalityMix(counts=counts, total=total)
