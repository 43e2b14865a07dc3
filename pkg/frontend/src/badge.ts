// Preview badges for the rating workbench. The strings embed exactly the
// values the service returned; nothing is recomputed client-side.

import { LEVEL_LABELS } from "./levels.js";
import type { WhatIfResult } from "./api.js";

export interface BadgeView {
    likelihood: string;
    severity: string;
    overall: string;
}

export function formatBadges(result: WhatIfResult): BadgeView {
    return {
        likelihood: `L ${result.l_score} · ${LEVEL_LABELS[result.likelihood].toUpperCase()}`,
        severity: `S ${result.s_score} · ${LEVEL_LABELS[result.severity].toUpperCase()}`,
        overall: `overall: ${LEVEL_LABELS[result.overall].toUpperCase()}`,
    };
}
