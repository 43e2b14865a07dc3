// Workbench state: the open assessment, draft pickers, live preview, and
// the conflict banner. All writes go through saveX() methods that carry the
// revision the console last saw; a 409 surfaces as a banner offering
// reload-and-merge and never discards the draft.

import { ApiClient } from "./api.js";
import type {
    AssessmentDoc,
    Ratings,
    RoundBody,
    SaveResult,
    ScopingDoc,
    ValidationProblem,
    WhatIfResult,
} from "./api.js";
import type { Dimension } from "./descriptors.js";
import { DIMENSIONS } from "./descriptors.js";
import { ordinal } from "./levels.js";
import type { LevelToken } from "./levels.js";

export interface ConflictBanner {
    message: string;
    serverRevision: number | null;
}

export interface DraftRound {
    excluded: boolean;
    excludingFactors: { description: string; legal_basis: string }[];
    mitigationMeasures: { description: string; category: string }[];
    rationale: string;
    residual: Partial<Ratings>;
}

export function emptyDraftRound(): DraftRound {
    return {
        excluded: false,
        excludingFactors: [],
        mitigationMeasures: [],
        rationale: "",
        residual: {},
    };
}

export class WorkbenchStore {
    assessmentId: string | null = null;
    revision: number | null = null;
    doc: AssessmentDoc | null = null;
    selectedRiskId: string | null = null;
    draftRatings: Partial<Ratings> = {};
    draftRound: DraftRound = emptyDraftRound();
    preview: WhatIfResult | null = null;
    conflict: ConflictBanner | null = null;
    problems: ValidationProblem[] = [];
    listeners: (() => void)[] = [];

    constructor(private readonly client: ApiClient) {}

    subscribe(listener: () => void): void {
        this.listeners.push(listener);
    }

    private notify(): void {
        for (const listener of this.listeners) listener();
    }

    async open(id: string): Promise<void> {
        const body = await this.client.getAssessment(id);
        this.assessmentId = body.id;
        this.revision = body.revision;
        this.doc = body.assessment;
        this.conflict = null;
        this.problems = [];
        this.notify();
    }

    /** Reload server state after a conflict, keeping local drafts intact. */
    async reloadAfterConflict(): Promise<void> {
        if (!this.assessmentId) return;
        await this.open(this.assessmentId);
    }

    selectRisk(riskId: string | null): void {
        this.selectedRiskId = riskId;
        this.draftRatings = {};
        this.draftRound = emptyDraftRound();
        this.preview = null;
        this.notify();
    }

    selectedRisk() {
        if (!this.doc || !this.selectedRiskId) return null;
        return this.doc.risks.find((risk) => risk.id === this.selectedRiskId) ?? null;
    }

    draftComplete(draft: Partial<Ratings>): draft is Ratings {
        return DIMENSIONS.every((dim) => draft[dim] !== undefined);
    }

    /** Update one picker and refresh the live preview from the service. */
    async setDraftRating(dim: Dimension, token: LevelToken): Promise<void> {
        this.draftRatings = { ...this.draftRatings, [dim]: token };
        await this.refreshPreview(this.draftRatings);
    }

    async setDraftResidual(dim: Dimension, token: LevelToken): Promise<void> {
        this.draftRound = {
            ...this.draftRound,
            residual: { ...this.draftRound.residual, [dim]: token },
        };
        await this.refreshPreview(this.draftRound.residual);
    }

    private async refreshPreview(draft: Partial<Ratings>): Promise<void> {
        if (this.draftComplete(draft)) {
            this.preview = await this.client.whatIf(draft);
        } else {
            this.preview = null;
        }
        this.notify();
    }

    /** Ratings the selected risk's next round is judged against. */
    baseline(): Ratings | null {
        const risk = this.selectedRisk();
        if (!risk) return null;
        for (let i = risk.rounds.length - 1; i >= 0; i -= 1) {
            const residual = risk.rounds[i]!.residual;
            if (residual !== "excluded") return residual;
        }
        return risk.initial;
    }

    /** Client-checked invariants for the draft round; submit stays disabled
     * while any problem remains. Ordinal comparison of tokens only; levels
     * and scores still come from the service. */
    roundProblems(): string[] {
        const problems: string[] = [];
        const draft = this.draftRound;
        if (draft.excluded) {
            if (draft.excludingFactors.length === 0) {
                problems.push("an excluded risk needs at least one excluding factor");
            }
            for (const factor of draft.excludingFactors) {
                if (!factor.legal_basis.trim()) {
                    problems.push(`excluding factor "${factor.description}" needs a legal basis`);
                }
            }
            return problems;
        }
        if (!this.draftComplete(draft.residual)) {
            problems.push("all four residual ratings are required");
            return problems;
        }
        const baseline = this.baseline();
        if (baseline) {
            const decreased = DIMENSIONS.some(
                (dim) => ordinal(draft.residual[dim]!) < ordinal(baseline[dim]),
            );
            if (decreased && !draft.rationale.trim()) {
                problems.push("a residual below its baseline needs a rationale");
            }
        }
        return problems;
    }

    private applyResult(result: SaveResult): SaveResult {
        if (result.status === "ok") {
            this.revision = result.revision;
            this.conflict = null;
            this.problems = [];
        } else if (result.status === "conflict") {
            this.conflict = {
                message:
                    "This assessment changed since you loaded it. Reload to merge; your draft is kept.",
                serverRevision: result.serverRevision,
            };
        } else {
            this.problems = result.problems;
        }
        this.notify();
        return result;
    }

    private writable(): { id: string; revision: number } {
        if (this.assessmentId === null || this.revision === null) {
            throw new Error("no assessment open; refusing to write without a revision");
        }
        return { id: this.assessmentId, revision: this.revision };
    }

    async saveScoping(scoping: ScopingDoc): Promise<SaveResult> {
        const { id, revision } = this.writable();
        const result = this.applyResult(await this.client.putScoping(id, revision, scoping));
        if (result.status === "ok") await this.open(id);
        return result;
    }

    async saveInitialRatings(rationale?: string): Promise<SaveResult> {
        const { id, revision } = this.writable();
        if (!this.selectedRiskId || !this.draftComplete(this.draftRatings)) {
            throw new Error("select a risk and all four ratings first");
        }
        const result = this.applyResult(
            await this.client.putRatings(id, revision, this.selectedRiskId, this.draftRatings, rationale),
        );
        if (result.status === "ok") await this.open(id);
        return result;
    }

    async saveRound(): Promise<SaveResult> {
        const { id, revision } = this.writable();
        if (!this.selectedRiskId) throw new Error("select a risk first");
        const problems = this.roundProblems();
        if (problems.length > 0) {
            throw new Error(`draft round is not submittable: ${problems.join("; ")}`);
        }
        const draft = this.draftRound;
        const body: RoundBody = {
            excluding_factors: draft.excludingFactors,
            mitigation_measures: draft.mitigationMeasures,
            rationale: draft.rationale,
            residual: draft.excluded ? "excluded" : (draft.residual as Ratings),
        };
        const result = this.applyResult(
            await this.client.postRound(id, revision, this.selectedRiskId, body),
        );
        if (result.status === "ok") {
            this.draftRound = emptyDraftRound();
            await this.open(id);
        }
        return result;
    }

    async saveStage(to: string, rationale?: string, markCurrentDone = false): Promise<SaveResult> {
        const { id, revision } = this.writable();
        const result = this.applyResult(
            await this.client.postStage(id, revision, to, rationale, markCurrentDone),
        );
        if (result.status === "ok") await this.open(id);
        return result;
    }
}
