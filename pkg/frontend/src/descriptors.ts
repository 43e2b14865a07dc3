// Rating-picker tooltip texts, verbatim from the methodology's descriptor
// tables for probability, exposure, gravity and effort.

import type { LevelToken } from "./levels.js";

export type Dimension = "probability" | "exposure" | "gravity" | "effort";

export const DIMENSIONS: readonly Dimension[] = [
    "probability",
    "exposure",
    "gravity",
    "effort",
];

export const DIMENSION_LABELS: Record<Dimension, string> = {
    probability: "Probability",
    exposure: "Exposure",
    gravity: "Gravity of the prejudice",
    effort: "Effort to overcome the prejudice",
};

export const DESCRIPTORS: Record<Dimension, Record<LevelToken, string>> = {
    probability: {
        low: "The risk of prejudice is improbable or highly improbable",
        medium: "The risk may occur",
        high: "There is a high probability that the risk occurs",
        very_high: "The risk is highly likely to occur",
    },
    exposure: {
        low: "Few or very few of the identified population of rights-holders are potentially affected",
        medium: "Some of the identified population are potentially affected",
        high: "The majority of the identified population is potentially affected",
        very_high: "Almost the entire identified population is potentially affected",
    },
    gravity: {
        low: "Affected individuals and groups may encounter only minor prejudices in the exercise of their rights and freedoms.",
        medium: "Affected individuals and groups may encounter significant prejudices.",
        high: "Affected individuals and groups may encounter serious prejudices.",
        very_high: "Affected individuals and groups may encounter serious or even irreversible prejudices.",
    },
    effort: {
        low: "Suffered prejudice can be overcome without any problem (e.g. time spent amending information, annoyances, irritations, etc.)",
        medium: "Suffered prejudice can be overcome despite a few difficulties (e.g. extra costs, fear, lack of understanding, stress, minor physical ailments, etc.).",
        high: "Suffered prejudice can be overcome albeit with serious difficulties (e.g. economic loss, property damage, worsening of health, etc.).",
        very_high: "Suffered prejudice may not be overcome (e.g. long-term psychological or physical ailments, death, etc.).",
    },
};
