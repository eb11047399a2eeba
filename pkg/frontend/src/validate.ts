/**
 * Client-side validation for the scheme form.
 *
 * This is a gate, not an authority: the submit button stays disabled until
 * these checks pass, and whatever the server still rejects is rendered
 * inline against the offending field by the caller.
 */

import type { SchemeDefinition } from './types.js';

export interface ArgumentForm {
  id: string;
  scheme: string;
  fillers: Record<string, string>;
  conclusion: string;
  targetHypothesis: string;
  stance: 'pro' | 'con' | '';
  author: string;
  authorLocation: string;
  evidenceLinks: string[];
  annotations: [string, string][];
}

export function emptyForm(scheme: string): ArgumentForm {
  return {
    id: '',
    scheme,
    fillers: {},
    conclusion: '',
    targetHypothesis: '',
    stance: '',
    author: '',
    authorLocation: '',
    evidenceLinks: [],
    annotations: [],
  };
}

/** Field name -> problem; an empty map means the form may be submitted. */
export function validateForm(
  definition: SchemeDefinition,
  form: ArgumentForm,
): Map<string, string> {
  const problems = new Map<string, string>();
  if (!form.id.trim()) problems.set('id', 'argument id is required');
  if (form.scheme !== definition.id) {
    problems.set('scheme', 'scheme does not match the selected definition');
  }
  for (const slot of definition.premises) {
    if (!form.fillers[slot.name]?.trim()) {
      problems.set(`premise:${slot.name}`, `premise '${slot.name}' is required`);
    }
  }
  for (const name of Object.keys(form.fillers)) {
    if (!definition.premises.some((slot) => slot.name === name)) {
      problems.set(`premise:${name}`, `scheme has no premise '${name}'`);
    }
  }
  if (!form.conclusion.trim()) problems.set('conclusion', 'pick a conclusion statement');
  if (!form.targetHypothesis.trim()) {
    problems.set('targetHypothesis', 'pick the hypothesis this argument addresses');
  }
  if (form.stance !== 'pro' && form.stance !== 'con') {
    problems.set('stance', 'choose pro or con');
  }
  if (!form.author.trim()) problems.set('author', 'author is required');
  form.evidenceLinks.forEach((link, index) => {
    if (!link.trim()) problems.set(`evidence:${index}`, 'evidence link is blank');
  });
  return problems;
}

/** The POST /api/arguments body for a validated form. */
export function toWireArgument(form: ArgumentForm): Record<string, unknown> {
  const fillers: Record<string, string> = {};
  for (const [name, value] of Object.entries(form.fillers)) {
    fillers[name] = value.trim();
  }
  const body: Record<string, unknown> = {
    id: form.id.trim(),
    scheme: form.scheme,
    fillers,
    conclusion: form.conclusion.trim(),
    target_hypothesis: form.targetHypothesis.trim(),
    stance: form.stance,
    author: form.author.trim(),
    posted_at: new Date().toISOString(),
    evidence_links: form.evidenceLinks.map((link) => link.trim()).filter(Boolean),
    annotations: form.annotations,
  };
  const location = form.authorLocation.trim();
  if (location) body.author_location = location;
  return body;
}

/**
 * Map a server rejection message to the form field it talks about, so the
 * violation lands next to the input instead of in a global banner.
 */
export function fieldForServerError(message: string, form: ArgumentForm): string {
  for (const name of Object.keys(form.fillers)) {
    if (message.includes(`'${name}'`)) return `premise:${name}`;
  }
  if (message.includes(`'${form.id.trim()}'`) || message.includes('duplicate')) return 'id';
  if (message.includes('stance')) return 'stance';
  if (message.includes('location')) return 'authorLocation';
  if (message.includes('annotation') || message.includes('concept')) return 'annotations';
  return 'form';
}
