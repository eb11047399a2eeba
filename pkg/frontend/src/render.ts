/**
 * DOM builders for the debate board.
 *
 * Pure element factories: data in, elements out, behavior through the
 * handler callbacks. No credibility arithmetic happens here or anywhere
 * else in the UI; the bar renders whatever number (or null) the service
 * sent.
 */

import type { ApiClient } from './api.js';
import type {
  CredibilityPayload,
  DebateEntry,
  QueryResultRow,
  SchemeDefinition,
  TaxonomySummary,
} from './types.js';

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function formatCredibility(value: number | null): string {
  return value === null ? 'unrated' : String(value);
}

/** The bar shows the service-reported score; null renders as unrated. */
export function credibilityBar(value: number | null): HTMLElement {
  const wrap = el('div', 'credibility');
  const bar = el('div', 'bar');
  const fill = el('div', 'bar-fill');
  fill.style.width = value === null ? '0%' : `${value * 100}%`;
  bar.appendChild(fill);
  const label = el('span', 'bar-value', formatCredibility(value));
  if (value === null) wrap.classList.add('unrated');
  wrap.appendChild(bar);
  wrap.appendChild(label);
  return wrap;
}

export interface CardHandlers {
  onConvey: (argumentId: string, cqId: string) => void;
  onResolve: (argumentId: string, cqId: string) => void;
}

function cqBadge(
  argumentId: string,
  cq: SchemeDefinition['cqs'][number],
  challenged: boolean,
  handlers: CardHandlers,
): HTMLElement {
  const item = el('li', challenged ? 'badge challenged' : 'badge');
  item.dataset.cq = cq.cq_id;
  item.appendChild(el('span', 'badge-label', `${cq.cq_id} ${cq.label}`));
  const button = el('button', 'badge-btn', challenged ? 'resolve' : 'convey');
  button.type = 'button';
  button.title = cq.text;
  button.addEventListener('click', () => {
    if (item.classList.contains('challenged')) {
      handlers.onResolve(argumentId, cq.cq_id);
    } else {
      handlers.onConvey(argumentId, cq.cq_id);
    }
  });
  item.appendChild(button);
  const notice = el('span', 'badge-notice');
  notice.hidden = true;
  item.appendChild(notice);
  return item;
}

export function argumentCard(
  entry: DebateEntry,
  definition: SchemeDefinition | undefined,
  handlers: CardHandlers,
): HTMLElement {
  const argument = entry.argument;
  const card = el('article', `card card-${argument.stance}`);
  card.dataset.argument = argument.id;

  const header = el('header', 'card-header');
  header.appendChild(el('span', 'card-scheme', argument.scheme));
  header.appendChild(el('span', 'card-id', argument.id));
  card.appendChild(header);

  card.appendChild(el('p', 'card-conclusion', entry.conclusion_text));

  const premises = el('dl', 'card-premises');
  for (const [name, value] of Object.entries(argument.fillers)) {
    premises.appendChild(el('dt', undefined, name));
    premises.appendChild(el('dd', undefined, value));
  }
  card.appendChild(premises);

  const meta = el('p', 'card-meta');
  const location = argument.author_location ? ` (${argument.author_location})` : '';
  meta.textContent = `by ${argument.author}${location} at ${argument.posted_at}`;
  card.appendChild(meta);

  if (argument.evidence_links.length > 0) {
    const links = el('ul', 'card-evidence');
    for (const href of argument.evidence_links) {
      const item = el('li');
      const anchor = el('a', undefined, href);
      anchor.href = href;
      item.appendChild(anchor);
      links.appendChild(item);
    }
    card.appendChild(links);
  }

  card.appendChild(credibilityBar(entry.credibility));

  const badges = el('ul', 'cq-badges');
  const challenged = new Set(entry.challenged_cqs);
  for (const cq of definition?.cqs ?? []) {
    badges.appendChild(cqBadge(argument.id, cq, challenged.has(cq.cq_id), handlers));
  }
  card.appendChild(badges);

  const notice = el('p', 'card-notice');
  notice.hidden = true;
  card.appendChild(notice);
  return card;
}

/**
 * Swap a card's credibility bar and badge states to match a fresh report.
 * Used after convey/resolve so the update lands in place, no board reload.
 */
export function applyReport(card: HTMLElement, report: CredibilityPayload): void {
  const existing = card.querySelector('.credibility');
  const fresh = credibilityBar(report.credibility);
  if (existing) existing.replaceWith(fresh);

  for (const cq of report.cqs) {
    const badge = card.querySelector<HTMLElement>(`.badge[data-cq="${cq.cq_id}"]`);
    if (!badge) continue;
    const isChallenged = cq.basis === 'challenge-override';
    badge.classList.toggle('challenged', isChallenged);
    const button = badge.querySelector<HTMLButtonElement>('.badge-btn');
    if (button) button.textContent = isChallenged ? 'resolve' : 'convey';
  }
}

export function badgeNotice(card: HTMLElement, cqId: string, message: string): void {
  const badge = card.querySelector<HTMLElement>(`.badge[data-cq="${cqId}"]`);
  const notice = badge?.querySelector<HTMLElement>('.badge-notice');
  if (!notice) return;
  notice.textContent = message;
  notice.hidden = false;
  setTimeout(() => {
    notice.hidden = true;
  }, 4000);
}

export function cardNotice(card: HTMLElement, message: string): void {
  const notice = card.querySelector<HTMLElement>('.card-notice');
  if (!notice) return;
  notice.textContent = message;
  notice.hidden = false;
  setTimeout(() => {
    notice.hidden = true;
  }, 4000);
}

export function renderColumn(
  container: HTMLElement,
  entries: DebateEntry[],
  definitions: Map<string, SchemeDefinition>,
  handlers: CardHandlers,
): void {
  container.replaceChildren();
  if (entries.length === 0) {
    container.appendChild(el('p', 'empty-state', 'no arguments yet'));
    return;
  }
  for (const entry of entries) {
    container.appendChild(argumentCard(entry, definitions.get(entry.argument.scheme), handlers));
  }
}

export function renderPending(container: HTMLElement, labels: string[]): void {
  container.replaceChildren();
  container.hidden = labels.length === 0;
  for (const label of labels) {
    container.appendChild(el('li', 'pending-action', label));
  }
}

export function renderQueryResults(
  container: HTMLElement,
  rows: QueryResultRow[],
  onJump: (argumentId: string) => void,
): void {
  container.replaceChildren();
  if (rows.length === 0) {
    container.appendChild(el('p', 'empty-state', 'no arguments match'));
    return;
  }
  const list = el('ul', 'query-results-list');
  for (const row of rows) {
    const item = el('li', 'query-result');
    const link = el('a', 'result-link', row.argument);
    link.href = `#argument-${row.argument}`;
    link.addEventListener('click', (event) => {
      event.preventDefault();
      onJump(row.argument);
    });
    item.appendChild(link);
    item.appendChild(
      el('span', 'result-meta',
         ` credibility ${formatCredibility(row.credibility)}, by ${row.author}, ${row.posted_at}`),
    );
    list.appendChild(item);
  }
  container.appendChild(list);
}

/**
 * Drill-down concept picker backed by the taxonomy endpoints; keeps no
 * client-side copy of the tree, every step is a concept GET.
 */
export function conceptPicker(
  client: ApiClient,
  taxonomies: TaxonomySummary[],
  initialTaxonomy: string | undefined,
  onPick: (taxonomy: string, concept: string) => void,
): HTMLElement {
  const wrap = el('div', 'concept-picker');
  const select = el('select', 'picker-taxonomy');
  for (const taxonomy of taxonomies) {
    const option = el('option', undefined, taxonomy.name);
    option.value = taxonomy.name;
    select.appendChild(option);
  }
  if (initialTaxonomy) select.value = initialTaxonomy;
  const crumbs = el('div', 'picker-crumbs');
  const children = el('div', 'picker-children');
  const pick = el('button', 'picker-use', 'use this concept');
  pick.type = 'button';
  wrap.append(select, crumbs, children, pick);

  let current = '';

  async function show(concept: string): Promise<void> {
    let payload;
    try {
      payload = await client.getConcept(select.value, concept);
    } catch (error) {
      crumbs.replaceChildren(
        el('span', 'picker-error', error instanceof Error ? error.message : String(error)),
      );
      children.replaceChildren();
      current = '';
      return;
    }
    current = payload.id;
    crumbs.replaceChildren();
    payload.path_to_root.forEach((ancestor, index) => {
      if (index > 0) crumbs.appendChild(el('span', 'crumb-sep', ' > '));
      const crumb = el('button', 'crumb', ancestor);
      crumb.type = 'button';
      crumb.addEventListener('click', () => void show(ancestor));
      crumbs.appendChild(crumb);
    });
    children.replaceChildren();
    for (const child of payload.children) {
      const button = el('button', 'picker-child', child);
      button.type = 'button';
      button.addEventListener('click', () => void show(child));
      children.appendChild(button);
    }
  }

  function reset(): void {
    const taxonomy = taxonomies.find((t) => t.name === select.value);
    if (taxonomy) void show(taxonomy.root);
  }

  select.addEventListener('change', reset);
  pick.addEventListener('click', () => {
    if (current) onPick(select.value, current);
  });
  reset();
  return wrap;
}
