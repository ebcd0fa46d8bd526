// Respondent state lives entirely in browser local storage, under one key.
// The server never sees it until results are requested.

export type Stage = 'landing' | 'sections' | 'questionnaire' | 'section' | 'results';

export interface LocalSession {
  schema_version: number;
  selected_section_ids: string[];
  selected_answer_ids: string[];
  completed_section_ids: string[];
  stage: Stage;
  active_section_id: string | null;
  question_index: number;
}

export const STORAGE_KEY = 'quantumwatch.session';
export const SCHEMA_VERSION = 1;

export function blankSession(): LocalSession {
  return {
    schema_version: SCHEMA_VERSION,
    selected_section_ids: [],
    selected_answer_ids: [],
    completed_section_ids: [],
    stage: 'landing',
    active_section_id: null,
    question_index: 0,
  };
}

/** Load the stored session; a missing, corrupt, or outdated one yields null. */
export function loadSession(storage: Storage = localStorage): LocalSession | null {
  const raw = storage.getItem(STORAGE_KEY);
  if (raw === null) {
    return null;
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(raw);
  } catch {
    storage.removeItem(STORAGE_KEY);
    return null;
  }
  if (
    typeof parsed !== 'object' ||
    parsed === null ||
    (parsed as LocalSession).schema_version !== SCHEMA_VERSION
  ) {
    // Format change: clear rather than migrate half-understood state.
    storage.removeItem(STORAGE_KEY);
    return null;
  }
  return parsed as LocalSession;
}

export function saveSession(session: LocalSession, storage: Storage = localStorage): void {
  storage.setItem(STORAGE_KEY, JSON.stringify(session));
}

export function clearSession(storage: Storage = localStorage): void {
  storage.removeItem(STORAGE_KEY);
}

/** A session is resumable once the respondent has picked sections. */
export function isResumable(session: LocalSession | null): session is LocalSession {
  return session !== null && session.selected_section_ids.length > 0;
}
