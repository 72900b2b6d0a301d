import { describe, expect, it } from 'vitest';

import {
  ALL_CONFIRMED,
  Criteria,
  REASON_CRITERION,
  buildJudgment,
  canSubmit,
} from '../src/checklist';
import { REJECT_REASONS } from '../src/types';

function allCriteriaStates(): Criteria[] {
  const states: Criteria[] = [];
  for (const a of [true, false]) {
    for (const b of [true, false]) {
      for (const c of [true, false]) {
        states.push({ trigger_in_span: a, context_sufficient: b, not_subevent: c });
      }
    }
  }
  return states;
}

describe('verdict consistency guard', () => {
  it('permits valid only with every criterion confirmed', () => {
    for (const criteria of allCriteriaStates()) {
      const confirmed =
        criteria.trigger_in_span && criteria.context_sufficient && criteria.not_subevent;
      expect(canSubmit(criteria, 'valid')).toBe(confirmed);
      expect(canSubmit(criteria, 'valid', 'subevent')).toBe(false);
    }
  });

  it('permits rejection only with a reason and an unconfirmed criterion', () => {
    for (const criteria of allCriteriaStates()) {
      const confirmed =
        criteria.trigger_in_span && criteria.context_sufficient && criteria.not_subevent;
      for (const reason of REJECT_REASONS) {
        expect(canSubmit(criteria, 'rejected', reason)).toBe(!confirmed);
      }
      expect(canSubmit(criteria, 'rejected')).toBe(false);
    }
  });

  it('buildJudgment can never produce an inconsistent judgment', () => {
    // sweep every criteria state x reason option; whatever comes out obeys
    // the invariant, and inconsistent inputs throw instead of leaking
    for (const criteria of allCriteriaStates()) {
      for (const reason of [...REJECT_REASONS, undefined]) {
        let judgment;
        try {
          judgment = buildJudgment(7, 'ann', criteria, reason, 'sub-1');
        } catch {
          continue;
        }
        if (judgment.verdict === 'valid') {
          expect(judgment.reject_reason).toBeUndefined();
        } else {
          expect(REJECT_REASONS).toContain(judgment.reject_reason);
        }
      }
    }
  });

  it('every reject reason clears a real criterion', () => {
    for (const reason of REJECT_REASONS) {
      expect(Object.keys(ALL_CONFIRMED)).toContain(REASON_CRITERION[reason]);
    }
  });
});
