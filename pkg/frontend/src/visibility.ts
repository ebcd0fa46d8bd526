// Client-side mirror of the server's chained-question rule, used only for
// navigation and pruning; all scoring stays on the server.

import type { ApiQuestion } from './types';

export function isVisible(question: ApiQuestion, selected: ReadonlySet<string>): boolean {
  if (question.trigger_answer_ids.length === 0) {
    return true;
  }
  return question.trigger_answer_ids.some((id) => selected.has(id));
}

export function visibleQuestionIds(
  questions: ApiQuestion[],
  selected: ReadonlySet<string>,
): string[] {
  return questions.filter((q) => isVisible(q, selected)).map((q) => q.id);
}

/** Nearest visible question after `current` (-1 for section start), or null. */
export function nextIndex(
  questions: ApiQuestion[],
  current: number,
  selected: ReadonlySet<string>,
): number | null {
  for (let i = current + 1; i < questions.length; i += 1) {
    const question = questions[i];
    if (question !== undefined && isVisible(question, selected)) {
      return i;
    }
  }
  return null;
}

/** Nearest visible question before `current`, or null at section start. */
export function prevIndex(
  questions: ApiQuestion[],
  current: number,
  selected: ReadonlySet<string>,
): number | null {
  for (let i = current - 1; i >= 0; i -= 1) {
    const question = questions[i];
    if (question !== undefined && isVisible(question, selected)) {
      return i;
    }
  }
  return null;
}

/**
 * Drop stored answers whose questions are hidden, repeating until stable:
 * deselecting a trigger may hide a question whose answers were themselves
 * triggers further down the chain. Triggers never cross sections, so the
 * section's own question list is all that is needed. Answers belonging to
 * other sections pass through untouched.
 */
export function pruneAnswers(questions: ApiQuestion[], answerIds: string[]): string[] {
  const owner = new Map<string, ApiQuestion>();
  for (const question of questions) {
    for (const answer of question.answers) {
      owner.set(answer.id, question);
    }
  }
  let current = answerIds;
  for (;;) {
    const selected = new Set(current);
    const kept = current.filter((id) => {
      const question = owner.get(id);
      return question === undefined || isVisible(question, selected);
    });
    if (kept.length === current.length) {
      return kept;
    }
    current = kept;
  }
}
