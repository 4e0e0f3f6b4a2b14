// Pure HTML renderers. Everything here is a string-in, string-out
// function so the widgets can be snapshot-tested without a browser.

import type { Decorations, Selection } from "./state.js";
import { fileOf } from "./state.js";
import type { Cause, Diagnosis, ModuleDeclGroup, TypeError } from "./types.js";

const escapeHtml = (text: string): string =>
	text
		.replace(/&/g, "&amp;")
		.replace(/</g, "&lt;")
		.replace(/>/g, "&gt;")
		.replace(/"/g, "&quot;");

const stars = (n: number): string => (n > 0 ? "★".repeat(n) : "");

const spanLabel = (module: string, line: number, col: number): string =>
	`${module}:${line}:${col}`;

// --- error selector ---------------------------------------------------------

export const renderErrorSelector = (
	diagnosis: Diagnosis | null,
	selection: Selection,
): string => {
	if (!diagnosis) {
		return `<div class="selector-empty">not checked yet</div>`;
	}
	if (diagnosis.errors.length === 0) {
		return `<div class="selector-empty banner-ok">no type errors</div>`;
	}
	const buttons = diagnosis.errors
		.map((e) => {
			const active = e.error_id === selection.errorId ? " active" : "";
			const first = e.spans[0];
			const where = first ? spanLabel(first.module, first.start_line, first.start_col) : "";
			return (
				`<button class="error-tab${active}" data-error-id="${escapeHtml(e.error_id)}">` +
				`${escapeHtml(e.error_id)} <span class="where">${escapeHtml(where)}</span>` +
				`</button>`
			);
		})
		.join("");
	const partial = diagnosis.partial
		? `<span class="banner-partial">partial result</span>`
		: "";
	return `<div class="error-selector">${buttons}${partial}</div>`;
};

// --- debugging panel ----------------------------------------------------------

const groupHeading = (groups: ModuleDeclGroup[]): string =>
	groups.map((g) => `${g.module} · ${g.decl}`).join(", ");

const renderCauseEntry = (cause: Cause, active: boolean): string => {
	const icon = active ? `<span class="icon active-icon">●</span>` : `<span class="icon idle-icon">●</span>`;
	const locations = cause.spans
		.map((cs) => {
			const s = cs.span;
			return (
				`<button class="loc" data-file="${escapeHtml(fileOf(s.module))}" ` +
				`data-line="${s.start_line}" data-col="${s.start_col}">` +
				`${escapeHtml(spanLabel(s.module, s.start_line, s.start_col))}` +
				`</button> <code class="expected">${escapeHtml(cs.expected_type)}</code>`
			);
		})
		.join(" ");
	return (
		`<li class="cause${active ? " active" : ""}" data-cause-id="${escapeHtml(cause.cause_id)}">` +
		`${icon}<span class="stars">${stars(cause.stars)}</span> ` +
		`<span class="cause-id">${escapeHtml(cause.cause_id)}</span> ${locations}` +
		`</li>`
	);
};

// Causes stay in rank order; entries are bucketed under module/decl
// headers so cross-module errors read like a stack trace.
export const renderCausePanel = (
	error: TypeError | null,
	selection: Selection,
): string => {
	if (!error) {
		return `<div class="panel-empty">select an error</div>`;
	}
	const buckets = new Map<string, Cause[]>();
	for (const cause of error.causes) {
		const key = groupHeading(cause.module_decl_groups);
		const bucket = buckets.get(key) ?? [];
		bucket.push(cause);
		buckets.set(key, bucket);
	}
	const sections = [...buckets.entries()]
		.map(([heading, causes]) => {
			const items = causes
				.map((c) => renderCauseEntry(c, c.cause_id === selection.causeId))
				.join("");
			return `<section class="cause-group"><h3>${escapeHtml(heading)}</h3><ul>${items}</ul></section>`;
		})
		.join("");
	return `<div class="cause-panel" data-error-id="${escapeHtml(error.error_id)}">${sections}</div>`;
};

// --- editor ---------------------------------------------------------------------

type LineMark = {
	startCol: number; // 1-based, inclusive
	endCol: number; // exclusive
	expectedType: string;
};

type LineInlay = {
	col: number; // insert position (1-based)
	text: string;
	kind: string;
};

// Renders one source file as line-numbered HTML with highlight marks on
// the selected cause's spans and inlay hints after their spans.
export const renderEditor = (
	file: string,
	source: string,
	decorations: Decorations,
): string => {
	const lines = source.replace(/\r\n/g, "\n").split("\n");
	if (lines[lines.length - 1] === "") lines.pop();

	const marksByLine = new Map<number, LineMark[]>();
	for (const h of decorations.highlights) {
		for (let line = h.span.start_line; line <= h.span.end_line; line++) {
			const text = lines[line - 1] ?? "";
			const startCol = line === h.span.start_line ? h.span.start_col : 1;
			const endCol = line === h.span.end_line ? h.span.end_col : text.length + 1;
			const bucket = marksByLine.get(line) ?? [];
			bucket.push({ startCol, endCol, expectedType: h.expectedType });
			marksByLine.set(line, bucket);
		}
	}
	const inlaysByLine = new Map<number, LineInlay[]>();
	for (const inlay of decorations.inlays) {
		const line = inlay.span.end_line;
		const bucket = inlaysByLine.get(line) ?? [];
		bucket.push({ col: inlay.span.end_col, text: inlay.text, kind: inlay.kind });
		inlaysByLine.set(line, bucket);
	}

	const rows = lines.map((text, i) => {
		const line = i + 1;
		const marks = (marksByLine.get(line) ?? []).sort((a, b) => a.startCol - b.startCol);
		const inlays = (inlaysByLine.get(line) ?? []).sort((a, b) => a.col - b.col);
		let html = "";
		let col = 1;
		const emitPlainUpTo = (target: number) => {
			while (inlays.length && inlays[0].col <= target) {
				const inlay = inlays.shift()!;
				html += escapeHtml(text.slice(col - 1, inlay.col - 1));
				col = inlay.col;
				html += `<span class="inlay ${inlay.kind}">:: ${escapeHtml(inlay.text)}</span>`;
			}
			html += escapeHtml(text.slice(col - 1, target - 1));
			col = target;
		};
		for (const mark of marks) {
			if (mark.startCol < col) continue; // overlapping mark, keep the first
			emitPlainUpTo(mark.startCol);
			html += `<mark title="expected: ${escapeHtml(mark.expectedType)}">`;
			html += escapeHtml(text.slice(mark.startCol - 1, mark.endCol - 1));
			html += `</mark>`;
			col = mark.endCol;
		}
		emitPlainUpTo(text.length + 1);
		return (
			`<div class="code-line" data-line="${line}">` +
			`<span class="lineno">${line}</span><code>${html}</code>` +
			`</div>`
		);
	});
	return `<div class="editor" data-file="${escapeHtml(file)}">${rows.join("")}</div>`;
};

// --- file explorer ---------------------------------------------------------------

export const renderFileList = (files: string[], openFile: string | null): string => {
	const items = files
		.map((f) => {
			const active = f === openFile ? " active" : "";
			return `<li><button class="file${active}" data-file="${escapeHtml(f)}">${escapeHtml(f)}</button></li>`;
		})
		.join("");
	return `<ul class="file-list">${items}</ul>`;
};
