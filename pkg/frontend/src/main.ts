/**
 * Debate board application.
 *
 * Wires the static page in index.html to the service: board columns per
 * hypothesis, the scheme form for posting arguments, per-CQ challenge
 * buttons, and the query builder. All state changes round-trip through
 * the API; after every mutation the affected view is re-fetched, never
 * locally predicted.
 */

import { ApiClient, ApiError } from './api.js';
import { caretLine, compileQuery, type QueryBuilderState } from './dsl.js';
import {
  applyReport,
  badgeNotice,
  conceptPicker,
  el,
  renderColumn,
  renderPending,
  renderQueryResults,
  type CardHandlers,
} from './render.js';
import { BoardState, challengeIdFromTrace } from './state.js';
import {
  emptyForm,
  fieldForServerError,
  toWireArgument,
  validateForm,
  type ArgumentForm,
} from './validate.js';
import type {
  SchemeDefinition,
  StatementPayload,
  TaxonomySummary,
} from './types.js';

export interface AppHandle {
  refreshBoard: () => Promise<void>;
  state: BoardState;
}

function need<T extends HTMLElement>(root: Document, id: string): T {
  const node = root.getElementById(id);
  if (!node) throw new Error(`page is missing #${id}`);
  return node as T;
}

export async function initApp(client: ApiClient, root: Document = document): Promise<AppHandle> {
  const state = new BoardState();

  const banner = need<HTMLElement>(root, 'banner');
  const actorInput = need<HTMLInputElement>(root, 'actor');
  const hypothesisSelect = need<HTMLSelectElement>(root, 'hypothesis-select');
  const refreshButton = need<HTMLButtonElement>(root, 'board-refresh');
  const pendingList = need<HTMLElement>(root, 'pending');
  const hypothesisText = need<HTMLElement>(root, 'hypothesis-text');
  const proColumn = need<HTMLElement>(root, 'pro-column');
  const conColumn = need<HTMLElement>(root, 'con-column');

  const argumentForm = need<HTMLFormElement>(root, 'argument-form');
  const schemeSelect = need<HTMLSelectElement>(root, 'scheme-select');
  const premiseFields = need<HTMLElement>(root, 'premise-fields');
  const idInput = need<HTMLInputElement>(root, 'arg-id');
  const conclusionSelect = need<HTMLSelectElement>(root, 'conclusion-select');
  const targetSelect = need<HTMLSelectElement>(root, 'target-hyp-select');
  const authorInput = need<HTMLInputElement>(root, 'arg-author');
  const locationInput = need<HTMLInputElement>(root, 'author-location');
  const evidenceList = need<HTMLElement>(root, 'evidence-list');
  const evidenceAdd = need<HTMLButtonElement>(root, 'evidence-add');
  const annotationChips = need<HTMLElement>(root, 'annotation-chips');
  const annotationMount = need<HTMLElement>(root, 'annotation-picker');
  const submitButton = need<HTMLButtonElement>(root, 'post-argument');
  const formError = need<HTMLElement>(root, 'form-error');

  const qbScheme = need<HTMLSelectElement>(root, 'qb-scheme');
  const qbStance = need<HTMLSelectElement>(root, 'qb-stance');
  const qbAuthor = need<HTMLInputElement>(root, 'qb-author');
  const qbTarget = need<HTMLInputElement>(root, 'qb-target');
  const qbTargetIsText = need<HTMLInputElement>(root, 'qb-target-is-text');
  const qbLocation = need<HTMLInputElement>(root, 'qb-location');
  const qbLocationMount = need<HTMLElement>(root, 'qb-location-picker');
  const qbAnnotated = need<HTMLInputElement>(root, 'qb-annotated');
  const qbFrom = need<HTMLInputElement>(root, 'qb-from');
  const qbBefore = need<HTMLInputElement>(root, 'qb-before');
  const qbOrder = need<HTMLSelectElement>(root, 'qb-order');
  const qbLimit = need<HTMLInputElement>(root, 'qb-limit');
  const dslPreview = need<HTMLElement>(root, 'dsl-preview');
  const qbRun = need<HTMLButtonElement>(root, 'qb-run');
  const rawDsl = need<HTMLTextAreaElement>(root, 'raw-dsl');
  const rawRun = need<HTMLButtonElement>(root, 'raw-run');
  const queryError = need<HTMLElement>(root, 'query-error');
  const queryResults = need<HTMLElement>(root, 'query-results');

  let definitions = new Map<string, SchemeDefinition>();
  let statements: StatementPayload[] = [];
  let taxonomies: TaxonomySummary[] = [];
  let form: ArgumentForm;
  const touched = new Set<string>();

  // ---- banner ------------------------------------------------------------

  function showBanner(message: string, retry: () => void): void {
    banner.replaceChildren();
    banner.hidden = false;
    banner.appendChild(el('span', 'banner-message', message));
    const button = el('button', 'banner-retry', 'retry');
    button.type = 'button';
    button.addEventListener('click', retry);
    banner.appendChild(button);
  }

  function clearBanner(): void {
    banner.hidden = true;
    banner.replaceChildren();
  }

  function describe(error: unknown): string {
    if (error instanceof ApiError) return `${error.code}: ${error.message}`;
    return error instanceof Error ? error.message : String(error);
  }

  // ---- board -------------------------------------------------------------

  const actor = (): string => actorInput.value.trim() || 'webuser';

  function cardOf(argumentId: string): HTMLElement | null {
    return root.querySelector<HTMLElement>(`.card[data-argument="${argumentId}"]`);
  }

  async function refreshCard(argumentId: string): Promise<void> {
    const report = await client.getCredibility(argumentId);
    const stale = state.observeVersion(report.corpus_version);
    const card = cardOf(argumentId);
    if (card && !stale) applyReport(card, report);
  }

  async function convey(argumentId: string, cqId: string): Promise<void> {
    const ticket = state.begin(`convey ${cqId} on ${argumentId}`);
    try {
      const response = await client.postChallenge(argumentId, cqId, actor());
      state.adoptVersion(response.corpus_version);
      state.rememberChallenge(argumentId, cqId, response.challenge.id);
      await refreshCard(argumentId);
    } catch (error) {
      const card = cardOf(argumentId);
      if (card) badgeNotice(card, cqId, describe(error));
      if (error instanceof ApiError && error.code === 'duplicate_open_challenge') {
        await refreshCard(argumentId); // resync the badge; it is challenged
      }
    } finally {
      state.finish(ticket);
    }
  }

  async function resolve(argumentId: string, cqId: string): Promise<void> {
    const ticket = state.begin(`resolve ${cqId} on ${argumentId}`);
    try {
      let challengeId = state.knownChallenge(argumentId, cqId);
      if (!challengeId) {
        const report = await client.getCredibility(argumentId);
        const cq = report.cqs.find((entry) => entry.cq_id === cqId);
        challengeId = cq ? challengeIdFromTrace(cq.trace) : undefined;
      }
      if (!challengeId) {
        const card = cardOf(argumentId);
        if (card) badgeNotice(card, cqId, 'open challenge not found');
        return;
      }
      const response = await client.postResolve(challengeId, `resolved by ${actor()}`);
      state.adoptVersion(response.corpus_version);
      state.forgetChallenge(argumentId, cqId);
      await refreshCard(argumentId);
    } catch (error) {
      const card = cardOf(argumentId);
      if (card) badgeNotice(card, cqId, describe(error));
      if (error instanceof ApiError && error.code === 'already_resolved') {
        state.forgetChallenge(argumentId, cqId);
        await refreshCard(argumentId);
      }
    } finally {
      state.finish(ticket);
    }
  }

  const handlers: CardHandlers = {
    onConvey: (argumentId, cqId) => void convey(argumentId, cqId),
    onResolve: (argumentId, cqId) => void resolve(argumentId, cqId),
  };

  async function refreshBoard(): Promise<void> {
    const hypothesisId = hypothesisSelect.value;
    if (!hypothesisId) return;
    try {
      const debate = await client.getDebate(hypothesisId);
      state.adoptVersion(debate.corpus_version);
      clearBanner();
      hypothesisText.textContent = `${debate.hypothesis.id}: ${debate.hypothesis.text}`;
      renderColumn(proColumn, debate.pro, definitions, handlers);
      renderColumn(conColumn, debate.con, definitions, handlers);
    } catch (error) {
      // never show stale cards as fresh
      proColumn.replaceChildren();
      conColumn.replaceChildren();
      hypothesisText.textContent = '';
      showBanner(`could not load the debate: ${describe(error)}`, () => void refreshBoard());
    }
  }

  state.onStale = () => void refreshBoard();
  state.onPendingChange = (actions) =>
    renderPending(pendingList, actions.map((action) => action.label));

  async function jumpTo(argumentId: string): Promise<void> {
    try {
      const response = await client.getArgument(argumentId);
      hypothesisSelect.value = response.argument.target_hypothesis;
      await refreshBoard();
      const card = cardOf(argumentId);
      if (card) {
        card.classList.add('highlight');
        card.scrollIntoView?.({ block: 'center' });
        setTimeout(() => card.classList.remove('highlight'), 2500);
      }
    } catch (error) {
      showBanner(describe(error), () => void jumpTo(argumentId));
    }
  }

  // ---- scheme form ---------------------------------------------------------

  function suggestId(): string {
    return `arg-${Date.now().toString(36)}`;
  }

  function fieldError(field: string): HTMLElement | null {
    return root.querySelector<HTMLElement>(`[data-error-for="${field}"]`);
  }

  function renderProblems(problems: Map<string, string>, showAll: boolean): void {
    for (const node of root.querySelectorAll<HTMLElement>('[data-error-for]')) {
      const field = node.dataset.errorFor ?? '';
      const message = problems.get(field);
      node.textContent = message && (showAll || touched.has(field)) ? message : '';
    }
    submitButton.disabled = problems.size > 0;
  }

  function revalidate(showAll = false): Map<string, string> {
    const definition = definitions.get(form.scheme);
    const problems = definition
      ? validateForm(definition, form)
      : new Map([['scheme', 'unknown scheme']]);
    renderProblems(problems, showAll);
    return problems;
  }

  function statementOptions(select: HTMLSelectElement, placeholder: string): void {
    select.replaceChildren();
    const blank = el('option', undefined, placeholder);
    blank.value = '';
    select.appendChild(blank);
    for (const statement of statements) {
      const option = el('option', undefined, `${statement.id}: ${statement.text}`);
      option.value = statement.id;
      select.appendChild(option);
    }
  }

  function premiseInput(slotName: string, kind: string): HTMLElement {
    const wrap = el('div', 'premise-field');
    const label = el('label', undefined, `${slotName} (${kind})`);
    wrap.appendChild(label);
    const set = (value: string): void => {
      form.fillers[slotName] = value;
      touched.add(`premise:${slotName}`);
      revalidate();
    };
    if (kind === 'statement-ref') {
      const select = el('select', 'premise-input');
      select.dataset.premise = slotName;
      statementOptions(select, 'pick a statement');
      select.addEventListener('change', () => set(select.value));
      wrap.appendChild(select);
    } else {
      const input = el('input', 'premise-input');
      input.dataset.premise = slotName;
      input.type = 'text';
      input.addEventListener('input', () => set(input.value));
      wrap.appendChild(input);
      if (kind === 'concept-ref') {
        const details = el('details', 'premise-picker');
        details.appendChild(el('summary', undefined, 'browse concepts'));
        details.appendChild(
          conceptPicker(client, taxonomies, 'expertise', (_taxonomy, concept) => {
            input.value = concept;
            set(concept);
          }),
        );
        wrap.appendChild(details);
      }
    }
    const error = el('span', 'field-error');
    error.dataset.errorFor = `premise:${slotName}`;
    wrap.appendChild(error);
    return wrap;
  }

  function rebuildPremises(): void {
    const definition = definitions.get(form.scheme);
    premiseFields.replaceChildren();
    for (const slot of definition?.premises ?? []) {
      premiseFields.appendChild(premiseInput(slot.name, slot.kind));
    }
  }

  function addEvidenceRow(value = ''): void {
    const index = form.evidenceLinks.length;
    form.evidenceLinks.push(value);
    const row = el('li', 'evidence-row');
    const input = el('input', 'evidence-input');
    input.type = 'text';
    input.value = value;
    input.addEventListener('input', () => {
      form.evidenceLinks[index] = input.value;
      touched.add(`evidence:${index}`);
      revalidate();
    });
    const remove = el('button', 'evidence-remove', 'remove');
    remove.type = 'button';
    remove.addEventListener('click', () => {
      form.evidenceLinks.splice(index, 1);
      renderEvidence();
      revalidate();
    });
    const error = el('span', 'field-error');
    error.dataset.errorFor = `evidence:${index}`;
    row.append(input, remove, error);
    evidenceList.appendChild(row);
  }

  function renderEvidence(): void {
    const links = [...form.evidenceLinks];
    form.evidenceLinks = [];
    evidenceList.replaceChildren();
    for (const link of links) addEvidenceRow(link);
  }

  function renderAnnotations(): void {
    annotationChips.replaceChildren();
    form.annotations.forEach(([taxonomy, concept], index) => {
      const chip = el('span', 'chip', `${taxonomy}:${concept}`);
      const remove = el('button', 'chip-remove', 'x');
      remove.type = 'button';
      remove.addEventListener('click', () => {
        form.annotations.splice(index, 1);
        renderAnnotations();
        revalidate();
      });
      chip.appendChild(remove);
      annotationChips.appendChild(chip);
    });
  }

  function resetForm(scheme: string): void {
    form = emptyForm(scheme);
    form.id = suggestId();
    form.targetHypothesis = hypothesisSelect.value;
    form.author = authorInput.value; // the author box persists across posts
    touched.clear();
    idInput.value = form.id;
    conclusionSelect.value = '';
    targetSelect.value = form.targetHypothesis;
    locationInput.value = '';
    formError.textContent = '';
    for (const radio of argumentForm.querySelectorAll<HTMLInputElement>('input[name="stance"]')) {
      radio.checked = false;
    }
    rebuildPremises();
    renderEvidence();
    renderAnnotations();
    revalidate();
  }

  async function submitArgument(): Promise<void> {
    const problems = revalidate(true);
    if (problems.size > 0) return; // inline violations shown, nothing sent
    const ticket = state.begin(`post argument ${form.id}`);
    submitButton.disabled = true;
    try {
      const response = await client.postArgument(toWireArgument(form));
      state.adoptVersion(response.corpus_version);
      formError.textContent = '';
      const posted = response.argument;
      resetForm(form.scheme);
      await refreshBoard(); // the new card appears with its fetched score
      const card = cardOf(posted.id);
      card?.classList.add('highlight');
    } catch (error) {
      // leave the form as typed so the caller can fix and resubmit
      if (error instanceof ApiError) {
        const field = fieldForServerError(error.message, form);
        const slot = fieldError(field);
        if (slot) slot.textContent = error.message;
        else formError.textContent = describe(error);
        if (field === 'form') formError.textContent = describe(error);
      } else {
        formError.textContent = describe(error);
      }
      submitButton.disabled = false;
    } finally {
      state.finish(ticket);
    }
  }

  // ---- query builder -------------------------------------------------------

  function builderState(): QueryBuilderState {
    const stance = qbStance.value === 'pro' || qbStance.value === 'con' ? qbStance.value : undefined;
    const order = qbOrder.value === 'posted' ? 'posted' : 'credibility';
    const limitRaw = qbLimit.value.trim();
    return {
      scheme: qbScheme.value || undefined,
      stance,
      author: qbAuthor.value,
      target: qbTarget.value,
      targetIsText: qbTargetIsText.checked,
      locationWithin: qbLocation.value,
      annotatedWith: qbAnnotated.value,
      postedFrom: qbFrom.value,
      postedBefore: qbBefore.value,
      orderBy: order,
      limit: limitRaw ? Number(limitRaw) : undefined,
    };
  }

  function previewQuery(): string | null {
    try {
      const text = compileQuery(builderState());
      dslPreview.textContent = text ?? '(set at least one filter)';
      return text;
    } catch (error) {
      dslPreview.textContent = describe(error);
      return null;
    }
  }

  async function runQuery(text: string): Promise<void> {
    queryError.textContent = '';
    try {
      const payload = await client.postQuery(text);
      state.observeVersion(payload.corpus_version);
      renderQueryResults(queryResults, payload.results, (id) => void jumpTo(id));
    } catch (error) {
      queryResults.replaceChildren();
      if (error instanceof ApiError && error.code === 'syntax_error'
          && error.detail?.offset !== undefined) {
        const expected = error.detail.expected ? `, expected ${error.detail.expected}` : '';
        queryError.textContent = `${caretLine(text, error.detail.offset)}\n${error.message}${expected}`;
      } else {
        queryError.textContent = describe(error);
      }
    }
  }

  // ---- bootstrap -----------------------------------------------------------

  try {
    const [schemesPayload, statementsPayload, taxonomiesPayload] = await Promise.all([
      client.getSchemes(),
      client.getStatements(),
      client.getTaxonomies(),
    ]);
    state.adoptVersion(schemesPayload.corpus_version);
    definitions = new Map(schemesPayload.schemes.map((scheme) => [scheme.id, scheme]));
    statements = statementsPayload.statements;
    taxonomies = taxonomiesPayload.taxonomies;
  } catch (error) {
    showBanner(`service unreachable: ${describe(error)}`, () => {
      void initApp(client, root);
    });
    return { refreshBoard, state };
  }

  // hypothesis and statement pickers
  statementOptions(hypothesisSelect, 'pick a hypothesis');
  statementOptions(conclusionSelect, 'pick a conclusion');
  statementOptions(targetSelect, 'pick a hypothesis');

  // land on the busiest debate so the page is not empty on first visit
  try {
    const listing = await client.getArguments();
    const byTarget = new Map<string, number>();
    for (const argument of listing.arguments) {
      byTarget.set(argument.target_hypothesis,
                   (byTarget.get(argument.target_hypothesis) ?? 0) + 1);
    }
    let best = '';
    let bestCount = -1;
    for (const [target, count] of byTarget) {
      if (count > bestCount) {
        best = target;
        bestCount = count;
      }
    }
    if (best) hypothesisSelect.value = best;
  } catch {
    // fine, the user can pick by hand
  }

  schemeSelect.replaceChildren();
  for (const id of [...definitions.keys()].sort()) {
    const option = el('option', undefined, id);
    option.value = id;
    schemeSelect.appendChild(option);
  }

  qbScheme.replaceChildren();
  const anyScheme = el('option', undefined, 'any scheme');
  anyScheme.value = '';
  qbScheme.appendChild(anyScheme);
  for (const id of [...definitions.keys()].sort()) {
    const option = el('option', undefined, id);
    option.value = id;
    qbScheme.appendChild(option);
  }

  qbLocationMount.appendChild(
    conceptPicker(client, taxonomies, 'locations', (_taxonomy, concept) => {
      qbLocation.value = concept;
      previewQuery();
    }),
  );

  const annotationPicker = conceptPicker(client, taxonomies, undefined, (taxonomy, concept) => {
    form.annotations.push([taxonomy, concept]);
    renderAnnotations();
    revalidate();
  });
  annotationMount.appendChild(annotationPicker);

  // events
  hypothesisSelect.addEventListener('change', () => void refreshBoard());
  refreshButton.addEventListener('click', () => void refreshBoard());
  schemeSelect.addEventListener('change', () => resetForm(schemeSelect.value));
  idInput.addEventListener('input', () => {
    form.id = idInput.value;
    touched.add('id');
    revalidate();
  });
  conclusionSelect.addEventListener('change', () => {
    form.conclusion = conclusionSelect.value;
    touched.add('conclusion');
    revalidate();
  });
  targetSelect.addEventListener('change', () => {
    form.targetHypothesis = targetSelect.value;
    touched.add('targetHypothesis');
    revalidate();
  });
  for (const radio of argumentForm.querySelectorAll<HTMLInputElement>('input[name="stance"]')) {
    radio.addEventListener('change', () => {
      if (radio.checked) {
        form.stance = radio.value as 'pro' | 'con';
        touched.add('stance');
        revalidate();
      }
    });
  }
  authorInput.addEventListener('input', () => {
    form.author = authorInput.value;
    touched.add('author');
    revalidate();
  });
  locationInput.addEventListener('input', () => {
    form.authorLocation = locationInput.value;
    revalidate();
  });
  evidenceAdd.addEventListener('click', () => {
    addEvidenceRow();
    revalidate();
  });
  argumentForm.addEventListener('submit', (event) => {
    event.preventDefault();
    void submitArgument();
  });

  for (const input of [qbAuthor, qbTarget, qbLocation, qbAnnotated, qbFrom, qbBefore, qbLimit]) {
    input.addEventListener('input', previewQuery);
  }
  for (const select of [qbScheme, qbStance, qbOrder]) {
    select.addEventListener('change', previewQuery);
  }
  qbTargetIsText.addEventListener('change', previewQuery);
  qbRun.addEventListener('click', () => {
    const text = previewQuery();
    if (text) void runQuery(text);
    else queryError.textContent = 'set at least one filter first';
  });
  rawRun.addEventListener('click', () => {
    const text = rawDsl.value.trim();
    if (text) void runQuery(text);
  });

  resetForm(schemeSelect.value || [...definitions.keys()].sort()[0] || '');
  previewQuery();
  await refreshBoard();

  return { refreshBoard, state };
}
