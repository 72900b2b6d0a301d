// The three validation criteria as explicit toggles, plus the consistency
// guard: a mention may be accepted only with every criterion confirmed, and
// rejected only with at least one criterion unconfirmed and a reason picked.
// The server enforces the same rule; this guard just refuses to send
// requests that would bounce.

import type { Judgment, RejectReason, Verdict } from './types';

export interface Criteria {
  trigger_in_span: boolean;
  context_sufficient: boolean;
  not_subevent: boolean;
}

export const ALL_CONFIRMED: Criteria = {
  trigger_in_span: true,
  context_sufficient: true,
  not_subevent: true,
};

// Which criterion a reject reason contradicts; pressing a reject key clears
// that criterion so the checklist state matches the verdict.
export const REASON_CRITERION: Record<RejectReason, keyof Criteria> = {
  insufficient_context: 'context_sufficient',
  boundary_not_trigger: 'trigger_in_span',
  event_time: 'trigger_in_span',
  event_location: 'trigger_in_span',
  subevent: 'not_subevent',
  other: 'context_sufficient',
};

export function allConfirmed(criteria: Criteria): boolean {
  return criteria.trigger_in_span && criteria.context_sufficient && criteria.not_subevent;
}

export function canSubmit(
  criteria: Criteria,
  verdict: Verdict,
  reason?: RejectReason,
): boolean {
  if (verdict === 'valid') {
    return allConfirmed(criteria) && reason === undefined;
  }
  return !allConfirmed(criteria) && reason !== undefined;
}

export function buildJudgment(
  taskId: number,
  annotator: string,
  criteria: Criteria,
  reason: RejectReason | undefined,
  submissionId: string,
): Judgment {
  const verdict: Verdict = allConfirmed(criteria) ? 'valid' : 'rejected';
  if (!canSubmit(criteria, verdict, reason)) {
    throw new Error(
      verdict === 'valid'
        ? 'a valid verdict must not carry a reject reason'
        : 'a rejection needs at least one unconfirmed criterion and a reason',
    );
  }
  return {
    task_id: taskId,
    annotator_id: annotator,
    verdict,
    ...(verdict === 'rejected' ? { reject_reason: reason } : {}),
    submission_id: submissionId,
  };
}
