// Thin wrappers over the checker's HTTP API.

import type { Diagnosis } from "./types.js";

export type CheckOutcome =
	| { kind: "diagnosis"; diagnosis: Diagnosis }
	| { kind: "rejected"; message: string };

export const fetchFiles = async (): Promise<string[]> => {
	const res = await fetch("/api/files");
	if (!res.ok) throw new Error(`GET /api/files: ${res.status}`);
	const body = (await res.json()) as { files: string[] };
	return body.files;
};

export const fetchFile = async (path: string): Promise<string> => {
	const res = await fetch(`/api/file?path=${encodeURIComponent(path)}`);
	if (!res.ok) throw new Error(`GET /api/file: ${res.status}`);
	const body = (await res.json()) as { content: string };
	return body.content;
};

export const saveFile = async (path: string, content: string): Promise<void> => {
	const res = await fetch("/api/file", {
		method: "PUT",
		headers: { "Content-Type": "application/json" },
		body: JSON.stringify({ path, content }),
	});
	if (!res.ok) throw new Error(`PUT /api/file: ${res.status}`);
};

export const runCheck = async (): Promise<CheckOutcome> => {
	const res = await fetch("/api/check", {
		method: "POST",
		headers: { "Content-Type": "application/json" },
		body: "{}",
	});
	if (res.status === 422) {
		const body = (await res.json()) as { error: { message: string; span?: unknown } };
		return { kind: "rejected", message: body.error.message };
	}
	if (!res.ok) throw new Error(`POST /api/check: ${res.status}`);
	return { kind: "diagnosis", diagnosis: (await res.json()) as Diagnosis };
};
