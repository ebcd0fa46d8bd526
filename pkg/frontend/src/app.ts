// Four-stage single-page flow: landing, section selection, questionnaire
// (progress + section pages), results. All respondent state stays in local
// storage; the server is only consulted for content and the final scoring.

import { ValidationError, fetchQuestions, fetchSections, submitAnswers } from './api';
import {
  LocalSession,
  blankSession,
  isResumable,
  loadSession,
  saveSession,
} from './session';
import type { ApiQuestion, ResultsPayload, SectionSummary } from './types';
import { isVisible, nextIndex, prevIndex, pruneAnswers } from './visibility';

type AttrValue = string | (() => void) | undefined;

function el(
  tag: string,
  attrs: Record<string, AttrValue> = {},
  children: (Node | string)[] = [],
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (value === undefined) {
      continue;
    }
    if (typeof value === 'function') {
      node.addEventListener(key === 'onClick' ? 'click' : key, value);
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function spinner(): HTMLElement {
  return el('div', { class: 'spinner', role: 'status', 'aria-label': 'Loading' });
}

const CATEGORY_BAR_WIDTH: Record<string, string> = { low: '33%', medium: '66%', high: '100%' };

export class App {
  private root: HTMLElement;
  private session: LocalSession;
  private sections: SectionSummary[] | null = null;
  private questionCache = new Map<string, ApiQuestion[]>();
  private results: ResultsPayload | null = null;
  private resultsError: string | null = null;
  private resultsPending = false;
  private showAllRecommendations = false;
  private pickerAlert = false;

  constructor(root: HTMLElement) {
    this.root = root;
    this.session = loadSession() ?? blankSession();
  }

  start(): void {
    this.render();
  }

  private persist(): void {
    saveSession(this.session);
  }

  private go(stage: LocalSession['stage']): void {
    this.session.stage = stage;
    this.pickerAlert = false;
    this.persist();
    this.render();
  }

  private async ensureSections(): Promise<SectionSummary[]> {
    if (this.sections === null) {
      this.sections = await fetchSections();
    }
    return this.sections;
  }

  private async ensureQuestions(sectionId: string): Promise<ApiQuestion[]> {
    const cached = this.questionCache.get(sectionId);
    if (cached !== undefined) {
      return cached;
    }
    const questions = await fetchQuestions(sectionId);
    this.questionCache.set(sectionId, questions);
    return questions;
  }

  /** Mandatory section first, then the chosen ones, in bank order. */
  private scopeSections(sections: SectionSummary[]): SectionSummary[] {
    return sections.filter(
      (s) => s.mandatory || this.session.selected_section_ids.includes(s.id),
    );
  }

  private render(): void {
    this.root.replaceChildren(this.header());
    const body = el('main', { class: 'stage' });
    this.root.append(body);
    switch (this.session.stage) {
      case 'landing':
        this.renderLanding(body);
        break;
      case 'sections':
        void this.renderSectionPicker(body);
        break;
      case 'questionnaire':
        void this.renderProgress(body);
        break;
      case 'section':
        void this.renderSectionPage(body);
        break;
      case 'results':
        void this.renderResults(body);
        break;
    }
  }

  private header(): HTMLElement {
    const logo = el(
      'button',
      { class: 'logo', id: 'logo', onClick: () => this.go('landing') },
      ['Quantum-Watch'],
    );
    return el('header', { class: 'topbar' }, [logo]);
  }

  // ---------------------------------------------------------------- landing

  private renderLanding(body: HTMLElement): void {
    const resumable = isResumable(loadSession());
    body.append(
      el('section', { class: 'hero' }, [
        el('h1', {}, ['How ready is your organisation for the quantum threat?']),
        el('p', { class: 'intro' }, [
          'Quantum computers capable of breaking today’s public-key cryptography ',
          'are an anticipated threat within the coming decades, and traffic captured ',
          'now can be stored and decrypted later. This assessment walks through your ',
          'organisation’s technology and practices, then returns a readiness ',
          'category with prioritised recommendations.',
        ]),
        el('div', { class: 'hero-buttons' }, [
          el('button', { class: 'primary', id: 'start', onClick: () => this.startAnalysis() }, [
            'Start the analysis',
          ]),
          el(
            'button',
            {
              id: 'resume',
              ...(resumable ? {} : { disabled: '' }),
              onClick: () => this.go('questionnaire'),
            },
            ['Resume previous analysis'],
          ),
          el(
            'button',
            {
              id: 'find-out-more',
              onClick: () => document.getElementById('about')?.scrollIntoView?.(),
            },
            ['Find out more'],
          ),
        ]),
      ]),
      el('section', { class: 'about', id: 'about' }, [
        el('h2', {}, ['Why act now?']),
        el('p', {}, [
          'Encrypted data exfiltrated today does not stay safe: an adversary that ',
          'records traffic can wait for cryptographically relevant quantum hardware ',
          'and decrypt it retroactively. Systems with long operational lives, and ',
          'data with long confidentiality requirements, need migration plans well ',
          'before that hardware arrives. Standards bodies have selected ',
          'quantum-resistant algorithms; the work left is finding where your ',
          'organisation still depends on vulnerable ones.',
        ]),
      ]),
    );
  }

  private startAnalysis(): void {
    // A fresh run: keep nothing from an earlier assessment.
    this.session = blankSession();
    this.session.stage = 'sections';
    this.results = null;
    this.showAllRecommendations = false;
    this.persist();
    this.render();
  }

  // --------------------------------------------------------------- sections

  private async renderSectionPicker(body: HTMLElement): Promise<void> {
    body.append(spinner());
    const sections = await this.ensureSections();
    body.replaceChildren();
    body.append(
      el('h2', {}, ['Which options best describe the technology your organisation relies upon?']),
    );
    if (this.pickerAlert) {
      body.append(
        el('div', { class: 'alert', role: 'alert' }, [
          'Select at least one relevant section to continue.',
        ]),
      );
    }
    const grid = el('div', { class: 'card-grid' });
    for (const section of sections) {
      if (section.mandatory) {
        continue; // always part of the assessment, never an option
      }
      const chosen = this.session.selected_section_ids.includes(section.id);
      grid.append(
        el(
          'button',
          {
            class: `card${chosen ? ' selected' : ''}`,
            'data-section': section.id,
            'aria-pressed': String(chosen),
            onClick: () => this.toggleSection(section.id),
          },
          [el('h3', {}, [section.name]), el('p', {}, [section.description])],
        ),
      );
    }
    body.append(grid);
    body.append(
      el('div', { class: 'stage-nav' }, [
        el('button', { class: 'primary', id: 'sections-next', onClick: () => this.confirmSections() }, [
          'Next',
        ]),
      ]),
    );
  }

  private toggleSection(sectionId: string): void {
    const chosen = this.session.selected_section_ids;
    this.session.selected_section_ids = chosen.includes(sectionId)
      ? chosen.filter((id) => id !== sectionId)
      : [...chosen, sectionId];
    this.pickerAlert = false;
    this.persist();
    this.render();
  }

  private confirmSections(): void {
    if (this.session.selected_section_ids.length === 0) {
      this.pickerAlert = true;
      this.render();
      return;
    }
    this.go('questionnaire');
  }

  // ----------------------------------------------------------- progress page

  private async renderProgress(body: HTMLElement): Promise<void> {
    body.append(spinner());
    const sections = await this.ensureSections();
    const scope = this.scopeSections(sections);
    const completed = scope.filter((s) =>
      this.session.completed_section_ids.includes(s.id),
    ).length;
    const percent = scope.length === 0 ? 0 : Math.round((100 * completed) / scope.length);

    body.replaceChildren();
    body.append(
      el('h2', {}, ['Your questionnaire']),
      el('p', { class: 'progress-counter', id: 'overall-progress' }, [
        `Overall progress: ${completed}/${scope.length} sections completed`,
      ]),
      el('div', { class: 'bar-track' }, [
        el('div', {
          class: 'bar-fill',
          style: `width: ${percent}%`,
          'aria-label': `${percent}% complete`,
        }),
      ]),
    );
    const grid = el('div', { class: 'card-grid' });
    for (const section of scope) {
      const done = this.session.completed_section_ids.includes(section.id);
      grid.append(
        el(
          'button',
          {
            class: `card${done ? ' done' : ''}`,
            'data-section': section.id,
            onClick: () => void this.enterSection(section.id),
          },
          [
            el('h3', {}, [section.name]),
            el('p', {}, [section.description]),
            el('p', { class: 'card-meta' }, [
              done ? 'Completed' : 'Not completed',
              ` · ~${section.time_estimate_minutes} min`,
            ]),
          ],
        ),
      );
    }
    body.append(grid);
    const allDone = scope.length > 0 && completed === scope.length;
    body.append(
      el('div', { class: 'stage-nav' }, [
        el(
          'button',
          {
            class: 'primary',
            id: 'to-results',
            ...(allDone ? {} : { disabled: '' }),
            onClick: () => this.go('results'),
          },
          ['Results'],
        ),
      ]),
    );
  }

  private async enterSection(sectionId: string): Promise<void> {
    const questions = await this.ensureQuestions(sectionId);
    const selected = new Set(this.session.selected_answer_ids);
    this.session.active_section_id = sectionId;
    this.session.question_index = nextIndex(questions, -1, selected) ?? 0;
    this.session.stage = 'section';
    this.persist();
    this.render();
  }

  // ------------------------------------------------------------ section page

  private async renderSectionPage(body: HTMLElement): Promise<void> {
    const sectionId = this.session.active_section_id;
    if (sectionId === null) {
      this.go('questionnaire');
      return;
    }
    body.append(spinner());
    const [sections, questions] = await Promise.all([
      this.ensureSections(),
      this.ensureQuestions(sectionId),
    ]);
    const section = sections.find((s) => s.id === sectionId);
    const selected = new Set(this.session.selected_answer_ids);

    let index = this.session.question_index;
    const indexed = questions[index];
    if (indexed === undefined || !isVisible(indexed, selected)) {
      index = nextIndex(questions, index, selected) ?? prevIndex(questions, index, selected) ?? 0;
      this.session.question_index = index;
      this.persist();
    }
    const question = questions[index];
    if (question === undefined || section === undefined) {
      this.go('questionnaire');
      return;
    }

    const typeLabel = question.choice_type === 'single' ? 'Single choice' : 'Multiple choice';
    body.replaceChildren();
    body.append(
      el('h2', { class: 'section-title' }, [section.name]),
      el('p', { class: 'question-type', id: 'question-type' }, [typeLabel]),
      el('h3', { class: 'question-text' }, [question.text]),
    );

    const answerList = el('div', { class: 'answers' });
    for (const answer of question.answers) {
      const chosen = selected.has(answer.id);
      answerList.append(
        el(
          'button',
          {
            class: `answer${chosen ? ' selected' : ''}`,
            'data-answer': answer.id,
            'aria-pressed': String(chosen),
            onClick: () => this.toggleAnswer(questions, question, answer.id),
          },
          [answer.text],
        ),
      );
    }
    body.append(answerList);

    if (question.help !== undefined) {
      body.append(
        el('button', { class: 'help-button', id: 'help', onClick: () => this.showHelp(question) }, [
          'Help',
        ]),
      );
    }

    body.append(
      el('p', { class: 'progress-counter', id: 'question-progress' }, [
        `Question ${index + 1} of ${questions.length}`,
      ]),
      el('div', { class: 'bar-track' }, [
        el('div', {
          class: 'bar-fill',
          style: `width: ${Math.round((100 * (index + 1)) / questions.length)}%`,
        }),
      ]),
    );

    const isLast = nextIndex(questions, index, selected) === null;
    const atStart = prevIndex(questions, index, selected) === null;
    body.append(
      el('div', { class: 'stage-nav' }, [
        el(
          'button',
          {
            id: 'prev',
            ...(atStart ? { disabled: '' } : {}),
            onClick: () => this.moveWithin(questions, index, -1),
          },
          ['Previous'],
        ),
        el('button', { id: 'exit', onClick: () => this.exitSection() }, ['Exit']),
        el(
          'button',
          {
            class: 'primary',
            id: 'next',
            onClick: () =>
              isLast ? this.submitSection(sectionId) : this.moveWithin(questions, index, +1),
          },
          [isLast ? 'Submit' : 'Next'],
        ),
      ]),
    );
  }

  private showHelp(question: ApiQuestion): void {
    const overlay = el('div', { class: 'modal-overlay', id: 'help-modal' });
    overlay.append(
      el('div', { class: 'modal', role: 'dialog' }, [
        el('p', {}, [question.help ?? '']),
        el('button', { id: 'help-close', onClick: () => overlay.remove() }, ['Close']),
      ]),
    );
    this.root.append(overlay);
  }

  private toggleAnswer(questions: ApiQuestion[], question: ApiQuestion, answerId: string): void {
    const inQuestion = new Set(question.answers.map((a) => a.id));
    let chosen = this.session.selected_answer_ids;
    if (chosen.includes(answerId)) {
      chosen = chosen.filter((id) => id !== answerId);
    } else if (question.choice_type === 'single') {
      // Selecting a single-choice answer unselects the previous one.
      chosen = [...chosen.filter((id) => !inQuestion.has(id)), answerId];
    } else {
      chosen = [...chosen, answerId];
    }
    // An edit can hide chained questions; their stored answers must go too.
    this.session.selected_answer_ids = pruneAnswers(questions, chosen);
    this.persist();
    this.render();
  }

  private moveWithin(questions: ApiQuestion[], index: number, direction: -1 | 1): void {
    const selected = new Set(this.session.selected_answer_ids);
    const target =
      direction === 1
        ? nextIndex(questions, index, selected)
        : prevIndex(questions, index, selected);
    if (target !== null) {
      this.session.question_index = target;
      this.persist();
      this.render();
    }
  }

  private exitSection(): void {
    this.session.active_section_id = null;
    this.go('questionnaire');
  }

  private submitSection(sectionId: string): void {
    if (!this.session.completed_section_ids.includes(sectionId)) {
      this.session.completed_section_ids.push(sectionId);
    }
    this.session.active_section_id = null;
    this.go('questionnaire');
  }

  // ---------------------------------------------------------------- results

  private async renderResults(body: HTMLElement): Promise<void> {
    if (this.results === null && this.resultsError === null && !this.resultsPending) {
      this.resultsPending = true;
      try {
        const sections = await this.ensureSections();
        const scopeIds = this.scopeSections(sections).map((s) => s.id);
        this.results = await submitAnswers(scopeIds, this.session.selected_answer_ids);
      } catch (error) {
        this.resultsError =
          error instanceof ValidationError
            ? error.violations.map((v) => `${v.code}: ${v.message}`).join('\n')
            : String(error);
      } finally {
        this.resultsPending = false;
      }
      this.render();
      return;
    }
    if (this.resultsPending) {
      body.append(spinner());
      return;
    }
    if (this.resultsError !== null) {
      body.append(
        el('div', { class: 'alert', role: 'alert', id: 'results-error' }, [this.resultsError]),
        el(
          'button',
          {
            onClick: () => {
              this.resultsError = null;
              this.go('questionnaire');
            },
          },
          ['Back to questionnaire'],
        ),
      );
      return;
    }
    const results = this.results;
    if (results === null) {
      return;
    }

    const category = results.risk_category;
    body.append(
      el('h2', {}, ['Your results']),
      el('p', { class: 'category-banner', id: 'risk-category' }, [
        'Risk category: ',
        el('strong', { class: `category-${category}` }, [category.toUpperCase()]),
      ]),
      el('div', { class: 'result-boxes' }, [
        el('div', { class: 'result-box', id: 'recommendation-count' }, [
          el('h3', {}, [String(results.recommendation_count)]),
          el('p', {}, ['recommendations for your organisation']),
          el(
            'button',
            { onClick: () => document.getElementById('recommendations')?.scrollIntoView?.() },
            ['See more'],
          ),
        ]),
        el('div', { class: 'result-box', id: 'risk-level' }, [
          el('h3', {}, ['Risk level']),
          el('div', { class: 'bar-track' }, [
            el('div', {
              class: `bar-fill category-${category}`,
              style: `width: ${CATEGORY_BAR_WIDTH[category] ?? '0%'}`,
            }),
          ]),
        ]),
        el('div', { class: 'result-box wide', id: 'category-explanation' }, [
          el('p', {}, [results.category_explanation]),
        ]),
      ]),
    );

    const list = el('div', { class: 'recommendations', id: 'recommendations' });
    const shown = this.showAllRecommendations
      ? results.recommendations_all
      : results.recommendations_top;
    if (results.recommendation_count === 0) {
      list.append(
        el('p', { class: 'empty-state' }, [
          'No recommendations: the selected answers already match good practice.',
        ]),
      );
    }
    for (const rec of shown) {
      const entry = el('div', { class: 'recommendation' }, [
        el('span', { class: 'importance' }, [`Importance ${rec.importance}`]),
        el('p', {}, [rec.text]),
      ]);
      if (rec.resource_link !== undefined) {
        entry.append(el('a', { href: rec.resource_link, target: '_blank', rel: 'noreferrer' }, ['Resource']));
      }
      list.append(entry);
    }
    if (results.recommendations_all.length > results.recommendations_top.length) {
      list.append(
        el(
          'button',
          {
            id: 'toggle-recommendations',
            onClick: () => {
              this.showAllRecommendations = !this.showAllRecommendations;
              this.render();
            },
          },
          [this.showAllRecommendations ? 'See less' : 'See more'],
        ),
      );
    }
    body.append(list);
  }
}
