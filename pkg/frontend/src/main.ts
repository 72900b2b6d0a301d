// Browser bootstrap: wire the session controller to the DOM and keyboard.

import { ServiceClient } from './client';
import { render } from './dom';
import { SessionController, rejectReasonForKey } from './session';

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

const serviceUrl = param('service', 'http://127.0.0.1:8571');
const annotator = param('annotator', 'anonymous');

const client = new ServiceClient(serviceUrl);
const session = new SessionController(client, annotator, undefined, {
  split: param('split', '') || undefined,
});

const root = document.getElementById('app')!;
session.onChange((state) => render(root, state));

document.addEventListener('keydown', (event) => {
  if (event.target instanceof HTMLInputElement) return;
  if (event.key === 'a' || rejectReasonForKey(event.key) || 'tcs'.includes(event.key)) {
    event.preventDefault();
    void session.handleKey(event.key);
  }
});

root.addEventListener('click', (event) => {
  const target = event.target as HTMLElement;
  if (target.matches('button.accept')) void session.handleKey('a');
  const reason = target.dataset?.reason;
  if (reason) {
    const key = Object.entries({ 1: 'insufficient_context', 2: 'boundary_not_trigger', 3: 'event_time', 4: 'event_location', 5: 'subevent', 6: 'other' }).find(([, r]) => r === reason)?.[0];
    if (key) void session.handleKey(key);
  }
  if (target instanceof HTMLInputElement && target.dataset.criterion) {
    const key = { trigger_in_span: 't', context_sufficient: 'c', not_subevent: 's' }[
      target.dataset.criterion
    ];
    if (key) void session.handleKey(key);
  }
});

window.addEventListener('online', () => void session.reconnect());

void session.start();
