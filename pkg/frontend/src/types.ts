/**
 * Wire types for the argweave JSON API.
 *
 * These mirror the service payloads one to one; nothing here is computed
 * client-side. Credibility values in particular only ever arrive in these
 * shapes and are rendered as received.
 */

export interface PremiseSlot {
  name: string;
  kind: 'source-ref' | 'concept-ref' | 'statement-ref' | string;
}

export interface CriticalQuestion {
  cq_id: string;
  label: string;
  text: string;
  evaluator: string;
}

export interface SchemeDefinition {
  id: string;
  premises: PremiseSlot[];
  conclusion_template: string;
  cqs: CriticalQuestion[];
}

export interface SchemesPayload {
  corpus_version: number;
  schemes: SchemeDefinition[];
}

export interface TaxonomySummary {
  name: string;
  root: string;
  concepts: number;
}

export interface TaxonomiesPayload {
  corpus_version: number;
  taxonomies: TaxonomySummary[];
}

export interface ConceptPayload {
  corpus_version: number;
  taxonomy: string;
  id: string;
  label: string | null;
  path_to_root: string[];
  children: string[];
}

export interface StatementPayload {
  id: string;
  text: string;
  topic_concepts: [string, string][];
  field: string | null;
}

export interface StatementsPayload {
  corpus_version: number;
  statements: StatementPayload[];
}

export interface ArgumentPayload {
  id: string;
  scheme: string;
  fillers: Record<string, string>;
  conclusion: string;
  target_hypothesis: string;
  stance: 'pro' | 'con';
  author: string;
  author_location: string | null;
  posted_at: string;
  evidence_links: string[];
  annotations: [string, string][];
}

export interface CqDegreePayload {
  cq_id: string;
  degree: number | null;
  basis: 'rule' | 'challenge-override' | 'not-evaluable';
  trace: string[];
}

export interface CredibilityPayload {
  argument: string;
  corpus_version: number;
  credibility: number | null;
  cqs: CqDegreePayload[];
}

export interface DebateEntry {
  argument: ArgumentPayload;
  credibility: number | null;
  conclusion_text: string;
  challenged_cqs: string[];
}

export interface DebatePayload {
  corpus_version: number;
  hypothesis: StatementPayload;
  pro: DebateEntry[];
  con: DebateEntry[];
}

export interface ChallengePayload {
  id: string;
  argument: string;
  cq_id: string;
  raised_by: string;
  raised_at: string;
  status: 'open' | 'resolved';
  resolution_note: string | null;
}

export interface QueryResultRow {
  argument: string;
  credibility: number | null;
  posted_at: string;
  author: string;
}

export interface QueryPayload {
  corpus_version: number;
  query: string;
  results: QueryResultRow[];
}

export interface ErrorPayload {
  code: string;
  message: string;
  detail: { offset?: number; expected?: string } | null;
}
