import { describe, expect, it } from "vitest";

import { formatBadges } from "../src/badge.js";
import type { WhatIfResult } from "../src/api.js";

describe("what-if badges", () => {
    it("renders the worked-example preview", () => {
        const result: WhatIfResult = {
            l_score: 12,
            likelihood: "very_high",
            s_score: 5,
            severity: "medium",
            overall: "high",
        };
        const badges = formatBadges(result);
        expect(badges.overall).toBe("overall: HIGH");
        expect(badges.likelihood).toBe("L 12 · VERY HIGH");
        expect(badges.severity).toBe("S 5 · MEDIUM");
    });

    it("embeds exactly the server values, nothing recomputed", () => {
        const result: WhatIfResult = {
            l_score: 2,
            likelihood: "low",
            s_score: 1,
            severity: "low",
            overall: "low",
        };
        const badges = formatBadges(result);
        expect(badges.likelihood).toContain("2");
        expect(badges.severity).toContain("1");
        expect(badges.overall).toMatch(/LOW$/);
    });
});
