"""Evidence-threshold decision support.

Acting requires both that the fused evidence clears a threshold and that the
perceived risk of inaction exceeds the risk of action. The threshold

    threshold = 1 - min(risk_inaction / (risk_inaction + risk_action), 0.5)

rises toward 1 as action becomes the riskier choice: the higher the
humanitarian risk of acting, the more evidence is demanded. High residual
uncertainty short-circuits to CollectMore, the cue to task more
reconnaissance before deciding.
"""

from __future__ import annotations

import enum

from pause.errors import DomainError
from pause.trust.opinion import Opinion


class Decision(enum.Enum):
    ACT = "Act"
    HOLD = "Hold"
    COLLECT_MORE = "CollectMore"


def evidence_threshold(risk_of_inaction: float, risk_of_action: float) -> float:
    if risk_of_inaction < 0 or risk_of_action < 0:
        raise DomainError("risks must be non-negative")
    total = risk_of_inaction + risk_of_action
    if total == 0:
        return 1.0
    return 1.0 - min(risk_of_inaction / total, 0.5)


def decision_support(
    opinion: Opinion,
    risk_of_inaction: float,
    risk_of_action: float,
    u_max: float = 0.4,
) -> Decision:
    threshold = evidence_threshold(risk_of_inaction, risk_of_action)
    if opinion.u > u_max:
        return Decision.COLLECT_MORE
    if opinion.expectation >= threshold and risk_of_inaction > risk_of_action:
        return Decision.ACT
    return Decision.HOLD
