// UI state and its pure derivations. The UI never computes types:
// every highlight, star, and inlay is read off the diagnosis document.

import type { Cause, Diagnosis, Span, TypeError } from "./types.js";

export type Selection = {
	errorId: string | null;
	causeId: string | null;
};

export type UiState = {
	openFile: string | null;
	diagnosis: Diagnosis | null;
	selection: Selection;
};

export type Inlay = {
	span: Span;
	text: string;
	kind: "expected" | "inferred";
};

export type Decorations = {
	// cause locations to highlight, with their expected types
	highlights: { span: Span; expectedType: string }[];
	inlays: Inlay[];
};

export const emptyState = (): UiState => ({
	openFile: null,
	diagnosis: null,
	selection: { errorId: null, causeId: null },
});

export const findError = (diagnosis: Diagnosis, errorId: string | null): TypeError | null =>
	diagnosis.errors.find((e) => e.error_id === errorId) ?? null;

export const findCause = (error: TypeError, causeId: string | null): Cause | null =>
	error.causes.find((c) => c.cause_id === causeId) ?? null;

// The default cause of an error is its 3-star entry (causes arrive
// rank-ordered, so that is the first one).
export const defaultCauseId = (error: TypeError): string | null =>
	(error.causes.find((c) => c.stars === 3) ?? error.causes[0])?.cause_id ?? null;

export const defaultSelection = (diagnosis: Diagnosis): Selection => {
	const first = diagnosis.errors[0];
	if (!first) return { errorId: null, causeId: null };
	return { errorId: first.error_id, causeId: defaultCauseId(first) };
};

// Selecting an error resets the cause to that error's 3-star entry.
export const selectError = (diagnosis: Diagnosis, errorId: string): Selection => {
	const error = findError(diagnosis, errorId);
	if (!error) return defaultSelection(diagnosis);
	return { errorId, causeId: defaultCauseId(error) };
};

// A cause can only be selected within the currently selected error.
export const selectCause = (
	diagnosis: Diagnosis,
	selection: Selection,
	causeId: string,
): Selection => {
	const error = findError(diagnosis, selection.errorId);
	if (error && findCause(error, causeId)) {
		return { errorId: selection.errorId, causeId };
	}
	return selection;
};

// A fresh diagnosis replaces the old one atomically; selections that no
// longer resolve fall back to the defaults.
export const reconcileSelection = (diagnosis: Diagnosis, previous: Selection): Selection => {
	const error = findError(diagnosis, previous.errorId);
	if (!error) return defaultSelection(diagnosis);
	const cause = findCause(error, previous.causeId);
	return { errorId: error.error_id, causeId: cause ? cause.cause_id : defaultCauseId(error) };
};

// Decorations are a pure function of (diagnosis, selected error,
// selected cause, visible file).
export const deriveDecorations = (
	diagnosis: Diagnosis | null,
	selection: Selection,
	file: string | null,
): Decorations => {
	const none: Decorations = { highlights: [], inlays: [] };
	if (!diagnosis || !file) return none;
	const error = findError(diagnosis, selection.errorId);
	if (!error) return none;
	const cause = findCause(error, selection.causeId);
	if (!cause) return none;

	const inFile = (s: Span) => s.module === moduleOf(file);
	const highlights = cause.spans
		.filter((cs) => inFile(cs.span))
		.map((cs) => ({ span: cs.span, expectedType: cs.expected_type }));
	const hints = error.hints_by_cause[cause.cause_id] ?? [];
	const inlays = hints
		.filter((h) => inFile(h.span))
		.map((h) => ({ span: h.span, text: h.type, kind: h.kind }));
	return { highlights, inlays };
};

// Files are served as `<module>.mml`; spans carry module ids.
export const moduleOf = (file: string): string => {
	const base = file.split("/").pop() ?? file;
	return base.endsWith(".mml") ? base.slice(0, -4) : base;
};

export const fileOf = (module: string): string => `${module}.mml`;
