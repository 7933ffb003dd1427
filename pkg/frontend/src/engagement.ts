// Engagement review: conflicts and machine percepts arriving on the stream
// queue up for a human judgment; the operator's call goes to the node and
// the returned outcome row is displayed verbatim.

import type { ApiClient } from "./api.js";
import { renderEngagement } from "./render.js";
import type { PendingReview, ViewState } from "./state.js";
import type { EngagementCaseJson, StreamEvent } from "./types.js";

export function absorbStreamEvent(state: ViewState, event: StreamEvent): void {
  if (event.type === "conflict") {
    state.pushAlert({
      code: event.code,
      reason: event.reason,
      related_digest: event.related_digest,
    });
    // Conflicts force deliberate review; the machine side is its assessment
    // context, which the operator will judge against.
    state.queueReview("Protected", [event.reason]);
  } else if (event.type === "engagement") {
    state.queueReview(event.machine.assessment, event.machine.rationale);
  }
}

export async function recordJudgment(
  api: ApiClient,
  review: PendingReview,
  truth: string,
  operatorAssessment: string,
): Promise<EngagementCaseJson> {
  const outcome = await api.engagement(
    truth,
    operatorAssessment,
    review.machineAssessment,
  );
  review.resolved = outcome;
  return outcome;
}

export function renderReview(review: PendingReview): string {
  const rationale = review.rationale.join("; ");
  const head =
    `<div class="review" data-review-id="${review.id}">` +
    `machine: ${review.machineAssessment} (${rationale})`;
  if (!review.resolved) {
    return (
      head +
      ' <button data-judgment="Protected">Protected</button>' +
      ' <button data-judgment="NotProtected">NotProtected</button></div>'
    );
  }
  return head + renderEngagement(review.resolved) + "</div>";
}
