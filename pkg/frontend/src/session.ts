// The keyboard-first judging loop.
//
// One keystroke decides a task and advances to the next: the accept key
// confirms all three criteria and submits a valid verdict; a reject key
// picks the reason, clears the criterion that reason contradicts, and
// submits the rejection.  Criteria can also be toggled individually before
// accepting.
//
// A small prefetch buffer keeps upcoming tasks on hand so judging continues
// through a network outage: submissions made offline are buffered by the
// OfflineQueue (and excluded from further prefetches via the service's
// `skip` parameter), and everything flushes exactly once on reconnect.
// Keystrokes are serialized through a promise chain, so a recorded script
// replays into a deterministic judgment sequence.

import { ServiceClient } from './client';
import {
  ALL_CONFIRMED,
  Criteria,
  REASON_CRITERION,
  allConfirmed,
  buildJudgment,
} from './checklist';
import { OfflineQueue } from './queue';
import type { Progress, RejectReason, Task } from './types';
import { REJECT_REASONS } from './types';

export const KEYMAP: Record<
  string,
  | { action: 'accept' }
  | { action: 'reject'; reason: RejectReason }
  | { action: 'toggle'; criterion: keyof Criteria }
> = {
  a: { action: 'accept' },
  '1': { action: 'reject', reason: 'insufficient_context' },
  '2': { action: 'reject', reason: 'boundary_not_trigger' },
  '3': { action: 'reject', reason: 'event_time' },
  '4': { action: 'reject', reason: 'event_location' },
  '5': { action: 'reject', reason: 'subevent' },
  '6': { action: 'reject', reason: 'other' },
  t: { action: 'toggle', criterion: 'trigger_in_span' },
  c: { action: 'toggle', criterion: 'context_sufficient' },
  s: { action: 'toggle', criterion: 'not_subevent' },
};

export interface SessionState {
  task: Task | null;
  done: boolean;
  criteria: Criteria;
  progress: Progress | null;
  unsynced: number;
  banner: string | null;
}

export interface SessionOptions {
  split?: string;
  includePractice?: boolean;
  prefetch?: number;
}

export class SessionController {
  readonly state: SessionState = {
    task: null,
    done: false,
    criteria: { ...ALL_CONFIRMED },
    progress: null,
    unsynced: 0,
    banner: null,
  };

  private buffer: Task[] = [];
  private attempts = new Map<number, number>();
  private chain: Promise<void> = Promise.resolve();
  private listeners: Array<(s: SessionState) => void> = [];
  private readonly prefetch: number;

  constructor(
    private readonly client: ServiceClient,
    private readonly annotator: string,
    private readonly queue: OfflineQueue = new OfflineQueue(client),
    private readonly options: SessionOptions = {},
  ) {
    this.prefetch = options.prefetch ?? 3;
  }

  onChange(listener: (s: SessionState) => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  /** Serialize an async step behind every previously queued step. */
  private enqueue(step: () => Promise<void>): Promise<void> {
    this.chain = this.chain.then(step, step);
    return this.chain;
  }

  start(): Promise<void> {
    return this.enqueue(async () => {
      await this.refreshProgress();
      await this.advance();
    });
  }

  handleKey(key: string): Promise<void> {
    const binding = KEYMAP[key];
    if (!binding) return this.chain;
    return this.enqueue(async () => {
      if (!this.state.task) return;
      if (binding.action === 'toggle') {
        this.state.criteria[binding.criterion] = !this.state.criteria[binding.criterion];
        this.notify();
        return;
      }
      if (binding.action === 'accept') {
        this.state.criteria = { ...ALL_CONFIRMED };
        await this.submitCurrent(undefined);
        return;
      }
      this.state.criteria = {
        ...this.state.criteria,
        [REASON_CRITERION[binding.reason]]: false,
      };
      await this.submitCurrent(binding.reason);
    });
  }

  /** Explicit submit for pointer-driven use; throws on inconsistent state. */
  submit(reason?: RejectReason): Promise<void> {
    return this.enqueue(() => this.submitCurrent(reason));
  }

  private async submitCurrent(reason: RejectReason | undefined): Promise<void> {
    const task = this.state.task;
    if (!task) return;
    const attempt = (this.attempts.get(task.task_id) ?? 0) + 1;
    this.attempts.set(task.task_id, attempt);
    const judgment = buildJudgment(
      task.task_id,
      this.annotator,
      this.state.criteria,
      allConfirmed(this.state.criteria) ? undefined : reason,
      `${this.annotator}-${task.task_id}-${attempt}`,
    );
    const outcome = await this.queue.submitOrQueue(judgment);
    switch (outcome.kind) {
      case 'stored':
        this.state.banner = null;
        break;
      case 'queued':
        this.state.banner = 'offline: judgment buffered locally';
        break;
      case 'duplicate':
        this.state.banner = 'already recorded: a newer judgment supersedes this one';
        break;
      case 'rejected':
        this.state.banner = `service refused the judgment: ${outcome.error.message}`;
        this.state.unsynced = this.queue.size;
        this.notify();
        return; // stay on the task; nothing was stored
    }
    this.state.unsynced = this.queue.size;
    await this.advance();
  }

  /** Task ids held locally or judged-but-unsynced; the server must not
   *  re-serve these while prefetching. */
  private skipIds(): number[] {
    const ids = new Set<number>();
    if (this.state.task) ids.add(this.state.task.task_id);
    for (const task of this.buffer) ids.add(task.task_id);
    for (const judgment of this.queue.snapshot()) ids.add(judgment.task_id);
    return [...ids];
  }

  private async topUp(): Promise<void> {
    try {
      while (this.buffer.length < this.prefetch) {
        const next = await this.client.nextTask(this.annotator, {
          split: this.options.split,
          includePractice: this.options.includePractice,
          skipIds: this.skipIds(),
        });
        if (!next.task) break;
        this.buffer.push(next.task);
      }
    } catch {
      /* offline: judge from whatever is already buffered */
    }
  }

  private async advance(): Promise<void> {
    this.state.criteria = { ...ALL_CONFIRMED };
    if (this.buffer.length === 0) {
      await this.topUp();
    }
    const task = this.buffer.shift() ?? null;
    if (task) {
      this.state.task = task;
      this.state.done = false;
    } else {
      try {
        const next = await this.client.nextTask(this.annotator, {
          split: this.options.split,
          includePractice: this.options.includePractice,
          skipIds: this.skipIds(),
        });
        this.state.task = next.task;
        this.state.done = next.done;
      } catch {
        this.state.task = null;
        this.state.done = false;
        this.state.banner = 'offline: cannot fetch the next task';
      }
    }
    await this.topUp();
    await this.refreshProgress();
    this.notify();
  }

  private async refreshProgress(): Promise<void> {
    try {
      this.state.progress = await this.client.progress();
    } catch {
      /* progress is advisory; stale values are fine offline */
    }
  }

  /** Flush buffered judgments after connectivity returns. */
  reconnect(): Promise<void> {
    return this.enqueue(async () => {
      const { flushed, rejected } = await this.queue.flush();
      this.state.unsynced = this.queue.size;
      if (rejected.length > 0) {
        this.state.banner = `service refused ${rejected.length} buffered judgment(s)`;
      } else if (flushed > 0 && this.queue.size === 0) {
        this.state.banner = null;
      }
      if (this.state.task === null && !this.state.done) {
        await this.advance();
      } else {
        await this.topUp();
        await this.refreshProgress();
        this.notify();
      }
    });
  }

  /** Await every queued keystroke; used by tests and scripted replays. */
  idle(): Promise<void> {
    return this.chain;
  }
}

export function rejectReasonForKey(key: string): RejectReason | null {
  const binding = KEYMAP[key];
  return binding && binding.action === 'reject' ? binding.reason : null;
}

export { REJECT_REASONS };
