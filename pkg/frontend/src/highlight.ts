// Mention highlighting: split the context tokens into before / mention /
// after segments.  The mention span is an inclusive token range, so the
// rendered highlight is exactly the anchor's tokens, never an approximation
// from string search.

import type { MentionRecord } from './types';

export interface HighlightSegments {
  before: string[];
  mention: string[];
  after: string[];
}

export function splitTokens(mention: MentionRecord): HighlightSegments {
  const [first, last] = mention.span;
  if (first < 0 || last < first || last >= mention.tokens.length) {
    throw new Error(`span [${first}, ${last}] outside ${mention.tokens.length} tokens`);
  }
  return {
    before: mention.tokens.slice(0, first),
    mention: mention.tokens.slice(first, last + 1),
    after: mention.tokens.slice(last + 1),
  };
}

// Whitespace-insensitive equality between the highlighted tokens and the
// mention surface string; this is the offset round-trip check the tests run
// against live service data.
export function highlightMatchesMention(mention: MentionRecord): boolean {
  const highlighted = splitTokens(mention).mention.join('');
  const squeezed = mention.mention_text.replace(/\s+/g, '');
  return highlighted === squeezed;
}
