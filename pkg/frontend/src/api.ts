// Typed client for the local HRIA service. Every mutating call takes the
// revision it acts on and sends it as If-Match; there is no way to write
// without one. Conflicts and validation failures come back as values, not
// exceptions, so the UI can render banners instead of losing drafts.

import type { LevelToken } from "./levels.js";
import type { Dimension } from "./descriptors.js";

export type Ratings = Record<Dimension, LevelToken>;

export interface WhatIfResult {
    l_score: number;
    likelihood: LevelToken;
    s_score: number;
    severity: LevelToken;
    overall: LevelToken;
}

export interface AssessmentSummary {
    id: string;
    revision: number;
    stage: string;
    title: string;
}

export interface RoundDoc {
    created_at: string;
    excluding_factors: { description: string; legal_basis: string }[];
    index: number;
    mitigation_measures: { description: string; category: string }[];
    rationale: string;
    residual: Ratings | "excluded";
}

export interface RiskDoc {
    description: string;
    guiding_answers: Record<string, string>;
    id: string;
    initial: Ratings | null;
    precautionary: boolean;
    right_key: string;
    rounds: RoundDoc[];
}

export interface ScopingDoc {
    controls_in_place: Record<string, string>;
    data_categories: string[];
    duty_bearers: string[];
    human_rights_context: Record<string, string>;
    processing_purposes: string[];
    product_description: string;
    rights_holders: string[];
    stakeholders: { category: string; engaged: boolean; name: string; notes: string }[];
    target_countries: string[];
}

export interface AssessmentDoc {
    checklists: Record<string, { done: boolean; task: string }[]>;
    created_at: string;
    metadata: { assessor: string; description: string; title: string };
    precautionary_flags: {
        recommended_measures: string[];
        resolution: string | null;
        risk_id: string;
        status: string;
        uncertainty_rationale: string;
    }[];
    risks: RiskDoc[];
    scoping: ScopingDoc;
    stage: string;
    stage_log: { at: string; from: string; rationale: string | null; to: string }[];
}

export interface ValidationProblem {
    message: string;
    path?: string;
}

export type SaveResult =
    | { status: "ok"; revision: number }
    | { status: "conflict"; serverRevision: number | null }
    | { status: "invalid"; problems: ValidationProblem[] };

export interface RoundBody {
    excluding_factors: { description: string; legal_basis: string }[];
    mitigation_measures: { description: string; category: string }[];
    rationale: string;
    residual: Ratings | "excluded";
}

export class ApiClient {
    constructor(
        private readonly baseUrl: string = "",
        private readonly fetchImpl: typeof fetch = globalThis.fetch.bind(globalThis),
    ) {}

    private async getJson<T>(path: string): Promise<T> {
        const response = await this.fetchImpl(this.baseUrl + path);
        if (!response.ok) {
            throw new Error(`GET ${path} failed: ${response.status}`);
        }
        return (await response.json()) as T;
    }

    private async write(
        method: "PUT" | "POST",
        path: string,
        revision: number,
        body: unknown,
    ): Promise<SaveResult> {
        const response = await this.fetchImpl(this.baseUrl + path, {
            method,
            headers: {
                "Content-Type": "application/json",
                "If-Match": String(revision),
            },
            body: JSON.stringify(body),
        });
        if (response.status === 409) {
            const data = (await response.json()) as { revision?: number };
            return { status: "conflict", serverRevision: data.revision ?? null };
        }
        if (response.status === 400 || response.status === 422) {
            const data = (await response.json()) as { detail: unknown };
            return { status: "invalid", problems: normalizeProblems(data.detail) };
        }
        if (!response.ok) {
            throw new Error(`${method} ${path} failed: ${response.status}`);
        }
        const data = (await response.json()) as { revision: number };
        return { status: "ok", revision: data.revision };
    }

    listAssessments(): Promise<AssessmentSummary[]> {
        return this.getJson("/assessments");
    }

    getAssessment(id: string): Promise<{ assessment: AssessmentDoc; id: string; revision: number }> {
        return this.getJson(`/assessments/${encodeURIComponent(id)}`);
    }

    whatIf(ratings: Ratings): Promise<WhatIfResult> {
        const query = new URLSearchParams(ratings as Record<string, string>);
        return this.getJson(`/whatif?${query.toString()}`);
    }

    report(id: string): Promise<Record<string, unknown>> {
        return this.getJson(`/assessments/${encodeURIComponent(id)}/report?format=json`);
    }

    chartUrl(id: string, includeFinal: boolean): string {
        const suffix = includeFinal ? "" : "?include_final=false";
        return `${this.baseUrl}/assessments/${encodeURIComponent(id)}/chart.svg${suffix}`;
    }

    putScoping(id: string, revision: number, scoping: ScopingDoc): Promise<SaveResult> {
        return this.write("PUT", `/assessments/${encodeURIComponent(id)}/scoping`, revision, scoping);
    }

    postRisk(
        id: string,
        revision: number,
        risk: {
            id: string;
            right_key: string;
            description: string;
            initial: Ratings | null;
            guiding_answers?: Record<string, string>;
            precautionary_rationale?: string;
        },
    ): Promise<SaveResult> {
        return this.write("POST", `/assessments/${encodeURIComponent(id)}/risks`, revision, risk);
    }

    putRatings(
        id: string,
        revision: number,
        riskId: string,
        ratings: Ratings,
        rationale?: string,
    ): Promise<SaveResult> {
        return this.write(
            "PUT",
            `/assessments/${encodeURIComponent(id)}/risks/${encodeURIComponent(riskId)}/ratings`,
            revision,
            { ratings, rationale: rationale ?? null },
        );
    }

    postRound(id: string, revision: number, riskId: string, round: RoundBody): Promise<SaveResult> {
        return this.write(
            "POST",
            `/assessments/${encodeURIComponent(id)}/risks/${encodeURIComponent(riskId)}/rounds`,
            revision,
            round,
        );
    }

    postStage(
        id: string,
        revision: number,
        to: string,
        rationale?: string,
        markCurrentDone = false,
    ): Promise<SaveResult> {
        return this.write("POST", `/assessments/${encodeURIComponent(id)}/stage`, revision, {
            to,
            rationale: rationale ?? null,
            mark_current_done: markCurrentDone,
        });
    }

    postFlag(
        id: string,
        revision: number,
        riskId: string,
        rationale: string,
        measures: string[] = [],
        accept = false,
    ): Promise<SaveResult> {
        return this.write("POST", `/assessments/${encodeURIComponent(id)}/flags`, revision, {
            risk_id: riskId,
            rationale,
            recommended_measures: measures,
            accept,
        });
    }
}

function normalizeProblems(detail: unknown): ValidationProblem[] {
    if (typeof detail === "string") {
        return [{ message: detail }];
    }
    if (Array.isArray(detail)) {
        return detail.map((item) => {
            if (item && typeof item === "object" && "message" in item) {
                const entry = item as { message: unknown; path?: unknown };
                return {
                    message: String(entry.message),
                    path: entry.path === undefined ? undefined : String(entry.path),
                };
            }
            return { message: JSON.stringify(item) };
        });
    }
    return [{ message: JSON.stringify(detail) }];
}
