import type { ApiQuestion, ApiViolation, ResultsPayload, SectionSummary } from './types';

const API_BASE = '/api/v1';

export class ValidationError extends Error {
  violations: ApiViolation[];

  constructor(violations: ApiViolation[]) {
    super(violations.map((v) => v.message).join('; '));
    this.violations = violations;
  }
}

async function getJson<T>(path: string): Promise<T> {
  const response = await fetch(`${API_BASE}${path}`);
  if (!response.ok) {
    throw new Error(`request failed (${response.status}): ${path}`);
  }
  return (await response.json()) as T;
}

export function fetchSections(): Promise<SectionSummary[]> {
  return getJson('/sections');
}

export function fetchQuestions(sectionId: string): Promise<ApiQuestion[]> {
  return getJson(`/sections/${encodeURIComponent(sectionId)}/questions`);
}

export async function submitAnswers(
  sectionIds: string[],
  answerIds: string[],
): Promise<ResultsPayload> {
  const response = await fetch(`${API_BASE}/results`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ section_ids: sectionIds, answer_ids: answerIds }),
  });
  if (response.status === 422) {
    const body = (await response.json()) as { violations: ApiViolation[] };
    throw new ValidationError(body.violations);
  }
  if (!response.ok) {
    throw new Error(`results request failed (${response.status})`);
  }
  return (await response.json()) as ResultsPayload;
}
