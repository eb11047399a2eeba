/**
 * Query-builder compilation.
 *
 * The builder form never lets a syntax error reach the service: it compiles
 * straight to the canonical DSL text (shown to the user before running).
 * Raw-DSL mode goes to the service as typed; syntax errors come back with a
 * byte offset, rendered by caretLine below.
 */

export interface QueryBuilderState {
  scheme?: string;
  stance?: 'pro' | 'con';
  author?: string;
  target?: string;
  targetIsText?: boolean;
  locationWithin?: string;
  annotatedWith?: string;
  postedFrom?: string;
  postedBefore?: string;
  orderBy?: 'credibility' | 'posted';
  limit?: number;
}

/** Double-quote a string the way the engine prints it back. */
export function quote(text: string): string {
  return '"' + text.replace(/\\/g, '\\\\').replace(/"/g, '\\"') + '"';
}

const DATE_RE = /^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2})?(Z|[+-]\d{2}:\d{2})?)?$/;

function clean(value: string | undefined): string | undefined {
  const trimmed = value?.trim();
  return trimmed ? trimmed : undefined;
}

/**
 * Compile the builder form to DSL text. Returns null when no filter is
 * set (the grammar requires at least one condition).
 */
export function compileQuery(state: QueryBuilderState): string | null {
  const conditions: string[] = [];
  const scheme = clean(state.scheme);
  if (scheme) conditions.push(`scheme=${scheme}`);
  if (state.stance) conditions.push(`stance=${state.stance}`);
  const author = clean(state.author);
  if (author) conditions.push(`author=${quote(author)}`);
  const target = clean(state.target);
  if (target) {
    conditions.push(`target=${state.targetIsText ? quote(target) : target}`);
  }
  const location = clean(state.locationWithin);
  if (location) conditions.push(`location WITHIN ${location}`);
  const annotated = clean(state.annotatedWith);
  if (annotated) conditions.push(`annotated WITH ${annotated}`);
  const from = clean(state.postedFrom);
  if (from) {
    if (!DATE_RE.test(from)) throw new Error(`not a date: ${from}`);
    conditions.push(`posted>=${from}`);
  }
  const before = clean(state.postedBefore);
  if (before) {
    if (!DATE_RE.test(before)) throw new Error(`not a date: ${before}`);
    conditions.push(`posted<${before}`);
  }
  if (conditions.length === 0) return null;

  let text = 'FIND ARGUMENTS WHERE ' + conditions.join(' AND ');
  if (state.orderBy === 'posted') text += ' ORDER BY posted';
  if (state.limit !== undefined && state.limit > 0) {
    text += ` LIMIT ${Math.floor(state.limit)}`;
  }
  return text;
}

/**
 * Two-line rendering of a syntax error: the query text with a caret under
 * the offending byte offset.
 */
export function caretLine(text: string, offset: number): string {
  const column = Math.max(0, Math.min(offset, text.length));
  return text + '\n' + ' '.repeat(column) + '^';
}
