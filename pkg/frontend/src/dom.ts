// Browser rendering: one render function over SessionState.  All judgment
// logic lives in session.ts; this layer only draws and forwards keystrokes.

import { splitTokens } from './highlight';
import type { SessionState } from './session';
import { REJECT_REASONS } from './types';

const REASON_LABELS: Record<string, string> = {
  insufficient_context: '1 insufficient context',
  boundary_not_trigger: '2 boundary misses trigger',
  event_time: '3 link on event time',
  event_location: '4 link on event location',
  subevent: '5 subevent',
  other: '6 other',
};

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function render(root: HTMLElement, state: SessionState): void {
  root.replaceChildren();

  const header = el('header', 'header');
  if (state.progress) {
    const { judged, total } = state.progress;
    const bar = el('div', 'progress');
    const fill = el('div', 'progress-fill');
    fill.style.width = total ? `${(100 * judged) / total}%` : '0%';
    bar.appendChild(fill);
    header.appendChild(bar);
    header.appendChild(el('span', 'progress-text', `${judged} / ${total} judged`));
  }
  if (state.unsynced > 0) {
    header.appendChild(el('span', 'unsynced-badge', `${state.unsynced} unsynced`));
  }
  root.appendChild(header);

  if (state.banner) {
    root.appendChild(el('div', 'banner', state.banner));
  }

  if (!state.task) {
    root.appendChild(
      el('main', 'done', state.done ? 'All tasks judged. Thank you!' : 'Loading…'),
    );
    return;
  }

  const task = state.task;
  const main = el('main', 'task');

  const pivot = el('section', 'pivot');
  pivot.appendChild(el('h2', 'pivot-title', task.pivot_title));
  pivot.appendChild(el('p', 'pivot-summary', task.pivot_summary));
  main.appendChild(pivot);

  const context = el('section', 'context');
  const { before, mention, after } = splitTokens(task.mention);
  context.appendChild(el('span', 'tokens', before.join(' ') + (before.length ? ' ' : '')));
  context.appendChild(el('mark', 'mention', mention.join(' ')));
  context.appendChild(el('span', 'tokens', (after.length ? ' ' : '') + after.join(' ')));
  main.appendChild(context);

  const checklist = el('section', 'checklist');
  const labels: Array<[keyof typeof state.criteria, string]> = [
    ['trigger_in_span', '[t] boundaries contain the event trigger'],
    ['context_sufficient', '[c] paragraph suffices to verify the reference'],
    ['not_subevent', '[s] not a subevent of the referenced event'],
  ];
  for (const [criterion, label] of labels) {
    const row = el('label', 'criterion');
    const box = document.createElement('input');
    box.type = 'checkbox';
    box.checked = state.criteria[criterion];
    box.dataset.criterion = criterion;
    row.appendChild(box);
    row.appendChild(el('span', '', label));
    checklist.appendChild(row);
  }
  main.appendChild(checklist);

  const actions = el('section', 'actions');
  actions.appendChild(el('button', 'accept', '[a] accept'));
  const reasons = el('div', 'reasons');
  for (const reason of REJECT_REASONS) {
    const btn = el('button', 'reject', REASON_LABELS[reason]);
    btn.dataset.reason = reason;
    reasons.appendChild(btn);
  }
  actions.appendChild(reasons);
  main.appendChild(actions);

  root.appendChild(main);
}
