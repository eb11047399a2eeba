/**
 * Thin fetch client for the argweave service.
 *
 * Every method maps to exactly one endpoint. Non-2xx responses become
 * ApiError with the service's error code and detail, so callers can route
 * syntax errors (with offsets) and conflicts to the right place in the UI.
 */

import type {
  ArgumentPayload,
  ChallengePayload,
  ConceptPayload,
  CredibilityPayload,
  DebatePayload,
  ErrorPayload,
  QueryPayload,
  SchemesPayload,
  StatementsPayload,
  TaxonomiesPayload,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: ErrorPayload['detail'] = null,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let payload: unknown = null;
    try {
      payload = text ? JSON.parse(text) : null;
    } catch {
      payload = null;
    }
    if (!response.ok) {
      const error = (payload ?? {}) as Partial<ErrorPayload>;
      throw new ApiError(
        response.status,
        error.code ?? 'http_error',
        error.message ?? `${method} ${path} failed with ${response.status}`,
        error.detail ?? null,
      );
    }
    return payload as T;
  }

  getSchemes(): Promise<SchemesPayload> {
    return this.request('GET', '/api/schemes');
  }

  getTaxonomies(): Promise<TaxonomiesPayload> {
    return this.request('GET', '/api/taxonomies');
  }

  getConcept(taxonomy: string, concept: string): Promise<ConceptPayload> {
    const name = encodeURIComponent(taxonomy);
    return this.request('GET', `/api/taxonomies/${name}/concepts/${encodeURIComponent(concept)}`);
  }

  getStatements(): Promise<StatementsPayload> {
    return this.request('GET', '/api/statements');
  }

  getArguments(): Promise<{ corpus_version: number; arguments: ArgumentPayload[] }> {
    return this.request('GET', '/api/arguments');
  }

  getDebate(hypothesisId: string): Promise<DebatePayload> {
    return this.request('GET', `/api/hypotheses/${encodeURIComponent(hypothesisId)}/debate`);
  }

  getArgument(argumentId: string): Promise<{ corpus_version: number; argument: ArgumentPayload }> {
    return this.request('GET', `/api/arguments/${encodeURIComponent(argumentId)}`);
  }

  getCredibility(argumentId: string): Promise<CredibilityPayload> {
    return this.request('GET', `/api/arguments/${encodeURIComponent(argumentId)}/credibility`);
  }

  postArgument(argument: Record<string, unknown>): Promise<{ corpus_version: number; argument: ArgumentPayload }> {
    return this.request('POST', '/api/arguments', argument);
  }

  postChallenge(argumentId: string, cqId: string, raisedBy: string): Promise<{ corpus_version: number; challenge: ChallengePayload }> {
    return this.request('POST', `/api/arguments/${encodeURIComponent(argumentId)}/challenges`, {
      cq_id: cqId,
      raised_by: raisedBy,
    });
  }

  postResolve(challengeId: string, note?: string): Promise<{ corpus_version: number; challenge: ChallengePayload }> {
    const body = note === undefined ? {} : { note };
    return this.request('POST', `/api/challenges/${encodeURIComponent(challengeId)}/resolve`, body);
  }

  postQuery(q: string, now?: string): Promise<QueryPayload> {
    const body: Record<string, string> = { q };
    if (now !== undefined) body.now = now;
    return this.request('POST', '/api/query', body);
  }
}
