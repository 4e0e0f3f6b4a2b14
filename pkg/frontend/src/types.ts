// The diagnosis document is the only contract with the checker.
// Pinned schema version; the UI refuses documents it does not understand.

export const SUPPORTED_SCHEMA_VERSION = "1";

export type Span = {
	module: string;
	start_line: number;
	start_col: number;
	end_line: number;
	end_col: number;
};

export type CauseSpan = {
	span: Span;
	expected_type: string;
};

export type ModuleDeclGroup = {
	module: string;
	decl: string;
	span_indexes: number[];
};

export type Cause = {
	cause_id: string;
	stars: number;
	score: number;
	score_breakdown: {
		location_count: number;
		span_decl_count: number;
		free_var_count: number;
	};
	spans: CauseSpan[];
	module_decl_groups: ModuleDeclGroup[];
};

export type Hint = {
	span: Span;
	type: string;
	kind: "expected" | "inferred";
};

export type TypeError = {
	error_id: string;
	spans: Span[];
	causes: Cause[];
	hints_by_cause: Record<string, Hint[]>;
};

export type Diagnosis = {
	version: string;
	partial: boolean;
	errors: TypeError[];
	stats?: Record<string, number>;
	timing?: Record<string, number>;
};

export const sameSpan = (a: Span, b: Span): boolean =>
	a.module === b.module &&
	a.start_line === b.start_line &&
	a.start_col === b.start_col &&
	a.end_line === b.end_line &&
	a.end_col === b.end_col;
