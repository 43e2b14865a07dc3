// The picker tooltips must stay verbatim; paraphrasing them would change
// how assessors rate.

import { describe, expect, it } from "vitest";

import { DESCRIPTORS, DIMENSIONS } from "../src/descriptors.js";
import { LEVEL_TOKENS } from "../src/levels.js";

describe("rating descriptors", () => {
    it("covers every dimension and level", () => {
        for (const dim of DIMENSIONS) {
            for (const token of LEVEL_TOKENS) {
                expect(DESCRIPTORS[dim][token].length).toBeGreaterThan(10);
            }
        }
    });

    it("keeps the anchor texts verbatim", () => {
        expect(DESCRIPTORS.probability.low).toBe(
            "The risk of prejudice is improbable or highly improbable",
        );
        expect(DESCRIPTORS.exposure.low).toBe(
            "Few or very few of the identified population of rights-holders are potentially affected",
        );
        expect(DESCRIPTORS.gravity.very_high).toBe(
            "Affected individuals and groups may encounter serious or even irreversible prejudices.",
        );
        expect(DESCRIPTORS.effort.medium).toBe(
            "Suffered prejudice can be overcome despite a few difficulties (e.g. extra costs, fear, lack of understanding, stress, minor physical ailments, etc.).",
        );
    });
});
