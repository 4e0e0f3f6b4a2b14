// DOM shell: wires the pure renderers to the checker's API.
// All type information on screen comes from the diagnosis document.

import { fetchFile, fetchFiles, runCheck, saveFile } from "./api.js";
import {
	deriveDecorations,
	emptyState,
	fileOf,
	findError,
	reconcileSelection,
	selectCause,
	selectError,
	type UiState,
} from "./state.js";
import {
	renderCausePanel,
	renderEditor,
	renderErrorSelector,
	renderFileList,
} from "./render.js";
import { SUPPORTED_SCHEMA_VERSION } from "./types.js";

const state: UiState = emptyState();
let files: string[] = [];
const sources = new Map<string, string>();
let dirty = false;

// at most one in-flight check; a second trigger coalesces into one rerun
let checking = false;
let rerunWanted = false;

const $ = (id: string): HTMLElement => {
	const el = document.getElementById(id);
	if (!el) throw new Error(`missing element #${id}`);
	return el;
};

const renderAll = () => {
	$("files").innerHTML = renderFileList(files, state.openFile);
	const diagnosis = state.diagnosis;
	$("selector").innerHTML = renderErrorSelector(diagnosis, state.selection);
	const error = diagnosis ? findError(diagnosis, state.selection.errorId) : null;
	$("panel").innerHTML = renderCausePanel(error, state.selection);
	const file = state.openFile;
	if (file && sources.has(file)) {
		const decorations = deriveDecorations(diagnosis, state.selection, file);
		$("editor-host").innerHTML = renderEditor(file, sources.get(file)!, decorations);
	} else {
		$("editor-host").innerHTML = `<div class="panel-empty">open a file</div>`;
	}
	$("status").textContent = statusLine();
};

const statusLine = (): string => {
	if (!state.diagnosis) return "ready";
	const n = state.diagnosis.errors.length;
	const partial = state.diagnosis.partial ? " (partial)" : "";
	return n === 0 ? "well-typed" : `${n} type error${n === 1 ? "" : "s"}${partial}`;
};

const openFile = async (path: string) => {
	if (!sources.has(path)) {
		sources.set(path, await fetchFile(path));
	}
	state.openFile = path;
	renderAll();
};

const focusSpan = async (file: string, line: number) => {
	if (state.openFile !== file) await openFile(file);
	const row = document.querySelector(`.code-line[data-line="${line}"]`);
	row?.scrollIntoView({ block: "center" });
};

const check = async () => {
	if (checking) {
		rerunWanted = true;
		return;
	}
	checking = true;
	$("status").textContent = "checking…";
	try {
		const outcome = await runCheck();
		if (outcome.kind === "rejected") {
			state.diagnosis = null;
			$("status").textContent = `rejected: ${outcome.message}`;
		} else if (outcome.diagnosis.version !== SUPPORTED_SCHEMA_VERSION) {
			$("status").textContent = `unsupported diagnosis schema ${outcome.diagnosis.version}`;
		} else {
			state.diagnosis = outcome.diagnosis;
			state.selection = reconcileSelection(outcome.diagnosis, state.selection);
			renderAll();
		}
	} finally {
		checking = false;
		if (rerunWanted) {
			rerunWanted = false;
			void check();
		}
	}
};

const saveOpenFile = async () => {
	const file = state.openFile;
	if (!file) return;
	const editor = $("editor-source") as HTMLTextAreaElement;
	if (editor.hidden) return;
	sources.set(file, editor.value);
	await saveFile(file, editor.value);
	dirty = false;
	toggleEditMode(false);
	await check();
};

const toggleEditMode = (edit: boolean) => {
	const textarea = $("editor-source") as HTMLTextAreaElement;
	const host = $("editor-host");
	textarea.hidden = !edit;
	host.hidden = edit;
	if (edit && state.openFile) {
		textarea.value = sources.get(state.openFile) ?? "";
		textarea.focus();
	}
};

const onClick = (event: Event) => {
	const target = (event.target as HTMLElement).closest("[data-error-id],[data-cause-id],[data-file],.loc");
	if (!target || !(target instanceof HTMLElement)) return;
	if (target.classList.contains("error-tab")) {
		if (state.diagnosis) {
			state.selection = selectError(state.diagnosis, target.dataset.errorId!);
			renderAll();
		}
	} else if (target.classList.contains("cause")) {
		if (state.diagnosis) {
			state.selection = selectCause(state.diagnosis, state.selection, target.dataset.causeId!);
			renderAll();
		}
	} else if (target.classList.contains("loc")) {
		void focusSpan(target.dataset.file!, Number(target.dataset.line));
	} else if (target.classList.contains("file")) {
		void openFile(target.dataset.file!);
	}
};

const boot = async () => {
	files = await fetchFiles();
	if (files.length) await openFile(files[0]);
	renderAll();
	document.body.addEventListener("click", onClick);
	$("check-button").addEventListener("click", () => void check());
	$("edit-button").addEventListener("click", () => toggleEditMode(($("editor-host") as HTMLElement).hidden === false));
	$("save-button").addEventListener("click", () => void saveOpenFile());
	($("editor-source") as HTMLTextAreaElement).addEventListener("input", () => {
		dirty = true;
	});
	window.addEventListener("beforeunload", (e) => {
		if (dirty) e.preventDefault();
	});
};

void boot();
