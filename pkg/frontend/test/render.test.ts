// Snapshot tests over fixture diagnoses: the rendered widgets are a
// pure function of the document plus the selection.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
	defaultSelection,
	deriveDecorations,
	findError,
	selectCause,
	selectError,
} from "../src/state.js";
import {
	renderCausePanel,
	renderEditor,
	renderErrorSelector,
	renderFileList,
} from "../src/render.js";
import type { Diagnosis } from "../src/types.js";

const fixture = <T>(name: string): T =>
	JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8"));

const fig1 = fixture<Diagnosis>("fig1.diagnosis.json");
const fig1Files = fixture<Record<string, string>>("fig1.files.json");
const fig6 = fixture<Diagnosis>("fig6.diagnosis.json");
const fig6Files = fixture<Record<string, string>>("fig6.files.json");
const empty = fixture<Diagnosis>("empty.diagnosis.json");

describe("error selector", () => {
	it("renders one entry per error", () => {
		const html = renderErrorSelector(fig1, defaultSelection(fig1));
		expect(html.match(/error-tab/g)?.length).toBe(2);
		expect(html).toContain('data-error-id="E1"');
		expect(html).toContain('data-error-id="E2"');
		expect(html).toMatchSnapshot();
	});

	it("shows a banner instead of tabs for an empty diagnosis", () => {
		const html = renderErrorSelector(empty, defaultSelection(empty));
		expect(html).toContain("no type errors");
		expect(html).not.toContain("error-tab");
		expect(html).toMatchSnapshot();
	});
});

describe("cause panel", () => {
	it("lists causes in rank order with 3/2/1 stars, active cause marked", () => {
		const sel = defaultSelection(fig1);
		const html = renderCausePanel(findError(fig1, "E1"), sel);
		expect(html.match(/<li class="cause/g)?.length).toBe(6);
		const starRuns = [...html.matchAll(/class="stars">([^<]*)</g)].map((m) => m[1]);
		expect(starRuns.slice(0, 4)).toEqual(["★★★", "★★", "★", ""]);
		expect(html.match(/cause active/g)?.length).toBe(1);
		expect(html).toContain("active-icon");
		expect(html).toMatchSnapshot();
	});

	it("groups cross-module causes under module headers", () => {
		const sel = defaultSelection(fig6);
		const html = renderCausePanel(findError(fig6, "E1"), sel);
		expect(html).toContain("<h3>A · x</h3>");
		expect(html).toContain("<h3>B · y</h3>");
		expect(html.match(/<li class="cause/g)?.length).toBe(3);
		expect(html).toMatchSnapshot();
	});

	it("single-cause errors render one active entry", () => {
		const error = findError(fig1, "E2")!;
		const single = { ...error, causes: error.causes.slice(0, 1) };
		const html = renderCausePanel(single, {
			errorId: "E2",
			causeId: single.causes[0].cause_id,
		});
		expect(html.match(/<li class="cause/g)?.length).toBe(1);
		expect(html).toContain("cause active");
		expect(html).toContain("★★★");
	});
});

describe("editor decorations", () => {
	it("top cause: highlight on the '1' literal with an Int inlay", () => {
		const sel = defaultSelection(fig1);
		const deco = deriveDecorations(fig1, sel, "fig1.mml");
		const html = renderEditor("fig1.mml", fig1Files["fig1.mml"], deco);
		expect(html).toContain("<mark");
		expect(html).toContain("expected: Int");
		expect(html).toMatchSnapshot();
	});

	it("GHC-style cause: three highlighted literals, all expecting Char", () => {
		const error = findError(fig1, "E1")!;
		const ghcStyle = error.causes.find((c) => c.spans.length === 3)!;
		const sel = selectCause(fig1, defaultSelection(fig1), ghcStyle.cause_id);
		const deco = deriveDecorations(fig1, sel, "fig1.mml");
		const html = renderEditor("fig1.mml", fig1Files["fig1.mml"], deco);
		expect(html.match(/<mark/g)?.length).toBe(3);
		expect(html.match(/expected: Char/g)?.length).toBe(3);
		expect(html).toMatchSnapshot();
	});

	it("switching cause recomputes every inlay, none stale", () => {
		const error = findError(fig1, "E1")!;
		const base = defaultSelection(fig1);
		const htmlPerCause = error.causes.map((c) => {
			const sel = selectCause(fig1, base, c.cause_id);
			const deco = deriveDecorations(fig1, sel, "fig1.mml");
			return renderEditor("fig1.mml", fig1Files["fig1.mml"], deco);
		});
		expect(new Set(htmlPerCause).size).toBe(htmlPerCause.length);
	});

	it("cross-module: selecting the element cause decorates module B only", () => {
		const error = findError(fig6, "E1")!;
		const pair = error.causes.find((c) => c.spans.length === 2 && c.spans[0].span.module === "B")!;
		const sel = selectCause(fig6, defaultSelection(fig6), pair.cause_id);
		const inB = renderEditor("B.mml", fig6Files["B.mml"], deriveDecorations(fig6, sel, "B.mml"));
		const inA = renderEditor("A.mml", fig6Files["A.mml"], deriveDecorations(fig6, sel, "A.mml"));
		expect(inB.match(/<mark/g)?.length).toBe(2);
		expect(inA).not.toContain("<mark");
		expect(inB).toMatchSnapshot();
	});

	it("escapes source text", () => {
		const html = renderEditor("x.mml", 'x = "<b>&amp;</b>"\n', { highlights: [], inlays: [] });
		expect(html).not.toContain("<b>");
		expect(html).toContain("&lt;b&gt;");
	});
});

describe("file list", () => {
	it("marks the open file", () => {
		const html = renderFileList(["A.mml", "B.mml"], "B.mml");
		expect(html.match(/<button class="file/g)?.length).toBe(2);
		expect(html).toContain('file active" data-file="B.mml"');
	});
});
