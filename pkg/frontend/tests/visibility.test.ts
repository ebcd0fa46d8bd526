import { describe, expect, it } from 'vitest';

import type { ApiQuestion } from '../src/types';
import { isVisible, nextIndex, prevIndex, pruneAnswers, visibleQuestionIds } from '../src/visibility';

function question(
  id: string,
  answerIds: string[],
  triggers: string[] = [],
): ApiQuestion {
  return {
    id,
    text: id,
    choice_type: 'single',
    answers: answerIds.map((a) => ({ id: a, text: a })),
    trigger_answer_ids: triggers,
  };
}

// Mirrors the chain fixture used on the server side: q3 hangs off q1's a3,
// q4 hangs off q3's c2.
const CHAIN: ApiQuestion[] = [
  question('q1', ['a1', 'a3']),
  question('q2', ['b1', 'b2']),
  question('q3', ['c1', 'c2'], ['a3']),
  question('q4', ['d1', 'd2'], ['c2']),
];

// Visible pattern [q1, hidden, hidden, q4] under an empty selection.
const MULTI_SKIP: ApiQuestion[] = [
  question('q1', ['a1', 'a2']),
  question('q2', ['b1', 'b2'], ['a2']),
  question('q3', ['c1', 'c2'], ['b2']),
  question('q4', ['d1', 'd2']),
];

describe('visibility', () => {
  it('non-chained questions are always visible', () => {
    expect(isVisible(CHAIN[0]!, new Set())).toBe(true);
  });

  it('chained questions require a selected trigger', () => {
    expect(isVisible(CHAIN[2]!, new Set(['a1']))).toBe(false);
    expect(isVisible(CHAIN[2]!, new Set(['a3']))).toBe(true);
  });

  it('chains collapse transitively once answers are pruned', () => {
    expect(visibleQuestionIds(CHAIN, new Set(['a1']))).toEqual(['q1', 'q2']);
    expect(visibleQuestionIds(CHAIN, new Set(['a3', 'c2']))).toEqual(['q1', 'q2', 'q3', 'q4']);
  });
});

describe('navigation skipping', () => {
  it('skips a run of consecutive hidden questions forward', () => {
    expect(nextIndex(MULTI_SKIP, 0, new Set(['a1']))).toBe(3);
  });

  it('skips the same run backward', () => {
    expect(prevIndex(MULTI_SKIP, 3, new Set(['a1']))).toBe(0);
  });

  it('enters chained questions when their trigger is selected', () => {
    expect(nextIndex(MULTI_SKIP, 0, new Set(['a2']))).toBe(1);
  });

  it('signals section boundaries with null', () => {
    expect(nextIndex(MULTI_SKIP, 3, new Set())).toBeNull();
    expect(prevIndex(MULTI_SKIP, 0, new Set())).toBeNull();
  });
});

describe('pruning stale answers', () => {
  it('drops answers of questions that lost their trigger, transitively', () => {
    // a3 was deselected but the whole chain's answers are still stored.
    expect(pruneAnswers(CHAIN, ['a1', 'b1', 'c2', 'd2'])).toEqual(['a1', 'b1']);
  });

  it('keeps consistent selections untouched', () => {
    expect(pruneAnswers(CHAIN, ['a3', 'c2', 'd1'])).toEqual(['a3', 'c2', 'd1']);
  });

  it('passes through answers from other sections', () => {
    expect(pruneAnswers(CHAIN, ['elsewhere', 'a1'])).toEqual(['elsewhere', 'a1']);
  });
});
