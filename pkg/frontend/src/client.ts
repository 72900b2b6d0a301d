// Thin HTTP client for the validation service.  The fetch implementation is
// injectable so tests can simulate outages without touching the network
// stack, and so the same client runs in browsers and in node.

import type {
  ExportResult,
  Judgment,
  NextTaskResponse,
  Progress,
  SubmitResponse,
} from './types';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ServiceError(resp.status, payload.error ?? `HTTP ${resp.status}`);
    }
    return payload as T;
  }

  nextTask(
    annotator: string,
    opts: { split?: string; includePractice?: boolean; skipIds?: number[] } = {},
  ): Promise<NextTaskResponse> {
    const params = new URLSearchParams({ annotator });
    if (opts.split) params.set('split', opts.split);
    if (opts.includePractice === false) params.set('include_practice', '0');
    if (opts.skipIds && opts.skipIds.length > 0) {
      params.set('skip', opts.skipIds.join(','));
    }
    return this.request<NextTaskResponse>('GET', `/tasks/next?${params}`);
  }

  submit(judgment: Judgment): Promise<SubmitResponse> {
    return this.request<SubmitResponse>('POST', '/judgments', judgment);
  }

  progress(): Promise<Progress> {
    return this.request<Progress>('GET', '/progress');
  }

  exportSplit(split: string, partial = false): Promise<ExportResult> {
    const suffix = partial ? '&partial=1' : '';
    return this.request<ExportResult>('POST', `/export?split=${split}${suffix}`);
  }
}
