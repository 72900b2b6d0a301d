// Wire types mirroring the validation service's record schemas.

export interface MentionRecord {
  mention_id: number;
  tokens: string[];
  span: [number, number]; // inclusive token indices of the anchor
  mention_text: string;
  source_title: string;
  target_title: string;
  cluster_id: number;
  metadata: Record<string, string>;
}

export interface Task {
  task_id: number;
  split: string;
  cluster_id: number;
  pivot_title: string;
  pivot_summary: string;
  mention: MentionRecord;
  practice?: boolean;
}

export type Verdict = 'valid' | 'rejected';

export const REJECT_REASONS = [
  'insufficient_context',
  'boundary_not_trigger',
  'event_time',
  'event_location',
  'subevent',
  'other',
] as const;

export type RejectReason = (typeof REJECT_REASONS)[number];

export interface Judgment {
  task_id: number;
  annotator_id: string;
  verdict: Verdict;
  reject_reason?: RejectReason;
  note?: string;
  submission_id?: string;
}

export interface NextTaskResponse {
  task: Task | null;
  done: boolean;
}

export interface SubmitResponse {
  status: 'stored' | 'duplicate';
  task_id: number;
}

export interface Progress {
  total: number;
  judged: number;
  pending: number;
  by_split: Record<string, { total: number; judged: number; pending: number }>;
}

export interface ExportResult {
  split: string;
  exported_mentions: number;
  exported_clusters: number;
  path: string;
  train_purged_path?: string;
  train_mentions_after_purge?: number;
}
