# escape_classify/components.py
"""Complement components and the spider's-web evidence verdict."""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from core.exceptions import OriginNotInComplement
from .classify import GridClassification

logger = logging.getLogger(__name__)

FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)

VERDICT_CHOICES = (
    ('evidence_positive', 'Bounded origin component at this depth and resolution'),
    ('negative_at_depth', 'Origin component reaches the grid boundary'),
)


def border_labels(labels: np.ndarray) -> set:
    edge = np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    return set(int(v) for v in np.unique(edge) if v != 0)


@dataclass(frozen=True, eq=False)
class ComponentMap:
    """labels: 0 on in-level cells, 1..count on complement components."""
    labels: np.ndarray = field(repr=False)
    count: int
    bounded: tuple
    depth: int = 0
    resolution: int = 0

    def label_at(self, cell) -> int:
        return int(self.labels[cell])

    def is_bounded(self, label: int) -> bool:
        return self.bounded[label - 1]


def label_components(mask: np.ndarray) -> ComponentMap:
    """4-connected labelling of a boolean mask; components on the border are unbounded."""
    labels, count = ndimage.label(np.asarray(mask, dtype=bool), structure=FOUR_CONNECTED)
    touching = border_labels(labels)
    bounded = tuple(label not in touching for label in range(1, count + 1))
    return ComponentMap(labels=labels.astype(np.int32), count=int(count), bounded=bounded)


def complement_components(gc: GridClassification) -> ComponentMap:
    cm = label_components(gc.complement)
    cm = ComponentMap(cm.labels, cm.count, cm.bounded, gc.gridspec.depth, gc.gridspec.resolution)
    logger.info(f"Complement has {cm.count} components, {sum(cm.bounded)} bounded")
    return cm


@dataclass(frozen=True)
class SpiderWebVerdict:
    verdict: str
    origin_label: int
    component_cells: int
    depth: int
    resolution: int

    @property
    def evidence_positive(self) -> bool:
        return self.verdict == 'evidence_positive'


def spiders_web_verdict(cm: ComponentMap, origin_cell) -> SpiderWebVerdict:
    """Evidence-positive iff the complement component holding the origin is bounded."""
    if origin_cell is None:
        raise OriginNotInComplement('The origin lies outside the grid.')
    label = cm.label_at(origin_cell)
    if label == 0:
        raise OriginNotInComplement(
            f'Origin cell {tuple(origin_cell)} is in-level; the grid and ladder disagree (|0| < R must hold).',
            cell=tuple(origin_cell),
        )
    bounded = cm.is_bounded(label)
    verdict = SpiderWebVerdict(
        verdict='evidence_positive' if bounded else 'negative_at_depth',
        origin_label=label,
        component_cells=int(np.count_nonzero(cm.labels == label)),
        depth=cm.depth,
        resolution=cm.resolution,
    )
    if bounded:
        logger.info(f"✅ Spider's web evidence: origin component of {verdict.component_cells} cells is bounded")
    else:
        logger.info("⚠️ Origin component reaches the grid boundary (negative at this depth)")
    return verdict
