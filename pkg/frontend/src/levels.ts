// Display metadata for the four-step scale. The console never computes
// scores or levels itself; these helpers only render and order what the
// service returns.

export const LEVEL_TOKENS = ["low", "medium", "high", "very_high"] as const;

export type LevelToken = (typeof LEVEL_TOKENS)[number];

export const LEVEL_CODES: Record<LevelToken, string> = {
    low: "L",
    medium: "M",
    high: "H",
    very_high: "VH",
};

export const LEVEL_LABELS: Record<LevelToken, string> = {
    low: "Low",
    medium: "Medium",
    high: "High",
    very_high: "Very high",
};

export function ordinal(token: LevelToken): number {
    return LEVEL_TOKENS.indexOf(token) + 1;
}

export function isLevelToken(value: unknown): value is LevelToken {
    return typeof value === "string" && (LEVEL_TOKENS as readonly string[]).includes(value);
}
