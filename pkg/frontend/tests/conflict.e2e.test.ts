// Optimistic-concurrency behaviour against the running service: every
// console write carries If-Match, and a forced stale revision produces the
// conflict banner instead of overwriting newer data.

import { describe, expect, inject, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { WorkbenchStore } from "../src/state.js";

declare module "vitest" {
    export interface ProvidedContext {
        baseUrl: string;
    }
}

describe("conflict handling (e2e)", () => {
    const baseUrl = inject("baseUrl");

    it("every console mutation carries If-Match", async () => {
        const seen: { method: string; ifMatch: string | null }[] = [];
        const recordingFetch: typeof fetch = async (input, init) => {
            const method = init?.method ?? "GET";
            if (method !== "GET") {
                seen.push({
                    method,
                    ifMatch: new Headers(init?.headers).get("If-Match"),
                });
            }
            return fetch(input, init);
        };
        const store = new WorkbenchStore(new ApiClient(baseUrl, recordingFetch));
        await store.open("doll");
        const scoping = store.doc!.scoping;
        await store.saveScoping({ ...scoping, product_description: scoping.product_description });
        await store.saveStage("analysis_assessment", "loop back for re-assessment");
        expect(seen.length).toBeGreaterThanOrEqual(2);
        for (const call of seen) {
            expect(call.ifMatch).not.toBeNull();
            expect(Number(call.ifMatch)).toBeGreaterThan(0);
        }
    });

    it("a stale revision yields the conflict banner, not data loss", async () => {
        const console1 = new WorkbenchStore(new ApiClient(baseUrl));
        await console1.open("doll");
        const staleRevision = console1.revision!;

        // Another writer lands first.
        const external = new ApiClient(baseUrl);
        const scoping = console1.doc!.scoping;
        const winner = await external.putScoping("doll", staleRevision, {
            ...scoping,
            product_description: "externally updated description",
        });
        expect(winner.status).toBe("ok");

        // The console's stale write must conflict and keep both the server
        // state and the local draft intact.
        console1.selectRisk("privacy");
        console1.draftRound.rationale = "draft to preserve";
        const result = await console1.saveScoping({
            ...scoping,
            product_description: "stale write that must not land",
        });
        expect(result.status).toBe("conflict");
        expect(console1.conflict).not.toBeNull();
        expect(console1.conflict!.message).toMatch(/Reload to merge/);
        expect(console1.draftRound.rationale).toBe("draft to preserve");

        const fresh = await external.getAssessment("doll");
        expect(fresh.assessment.scoping.product_description).toBe(
            "externally updated description",
        );

        // Reload-and-merge path: banner clears, revision catches up.
        await console1.reloadAfterConflict();
        expect(console1.conflict).toBeNull();
        expect(console1.revision).toBe(fresh.revision);
    });

    it("server refuses writes without If-Match outright", async () => {
        const response = await fetch(`${baseUrl}/assessments/doll/stage`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ to: "mitigation" }),
        });
        expect(response.status).toBe(428);
    });
});
