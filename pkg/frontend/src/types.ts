// Shapes of the three API payloads the client consumes.

export interface SectionSummary {
  id: string;
  name: string;
  description: string;
  mandatory: boolean;
  time_estimate_minutes: number;
}

export interface AnswerOption {
  id: string;
  text: string;
}

export interface ApiQuestion {
  id: string;
  text: string;
  choice_type: 'single' | 'multiple';
  answers: AnswerOption[];
  trigger_answer_ids: string[];
  help?: string;
}

export interface ApiRecommendation {
  id: string;
  question_id: string;
  text: string;
  importance: number;
  resource_link?: string;
}

// The raw risk number is intentionally absent: the server only sends it under
// an opt-in diagnostics key, and the UI never reads that key.
export interface ResultsPayload {
  risk_category: 'low' | 'medium' | 'high';
  category_explanation: string;
  recommendation_count: number;
  recommendations_top: ApiRecommendation[];
  recommendations_all: ApiRecommendation[];
}

export interface ApiViolation {
  code: string;
  subject_id: string;
  message: string;
}
