// Offline tolerance: judgments that cannot reach the service are buffered
// in order and flushed on reconnect.  Every judgment carries a submission id
// chosen by the caller, so a flush that races a retry is idempotent on the
// server side and nothing is ever persisted twice.

import { ServiceClient, ServiceError } from './client';
import type { Judgment, SubmitResponse } from './types';

export type SubmitOutcome =
  | { kind: 'stored'; response: SubmitResponse }
  | { kind: 'duplicate'; response: SubmitResponse }
  | { kind: 'queued' }
  | { kind: 'rejected'; error: ServiceError };

export class OfflineQueue {
  private pending: Judgment[] = [];

  constructor(private readonly client: ServiceClient) {}

  get size(): number {
    return this.pending.length;
  }

  snapshot(): Judgment[] {
    return [...this.pending];
  }

  /** Submit now if possible, otherwise buffer for a later flush. */
  async submitOrQueue(judgment: Judgment): Promise<SubmitOutcome> {
    try {
      const response = await this.client.submit(judgment);
      return { kind: response.status === 'duplicate' ? 'duplicate' : 'stored', response };
    } catch (err) {
      if (err instanceof ServiceError && err.status < 500) {
        // the service refused the judgment; retrying cannot help
        return { kind: 'rejected', error: err };
      }
      this.pending.push(judgment);
      return { kind: 'queued' };
    }
  }

  /**
   * Drain the buffer in order.  Stops at the first transport failure so
   * order is preserved; invalid judgments are dropped with their error
   * reported rather than blocking the rest.
   */
  async flush(): Promise<{ flushed: number; rejected: ServiceError[] }> {
    const rejected: ServiceError[] = [];
    let flushed = 0;
    while (this.pending.length > 0) {
      const judgment = this.pending[0];
      try {
        await this.client.submit(judgment);
        this.pending.shift();
        flushed += 1;
      } catch (err) {
        if (err instanceof ServiceError && err.status < 500) {
          this.pending.shift();
          rejected.push(err);
          continue;
        }
        break; // still offline
      }
    }
    return { flushed, rejected };
  }
}
