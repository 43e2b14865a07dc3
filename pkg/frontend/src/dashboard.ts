// Impact dashboard: the service-rendered radial chart, the comparative
// table in the canonical column order, and the precautionary/excluded
// panels. No client-side derivation of any score.

import { ApiClient } from "./api.js";
import type { WorkbenchStore } from "./state.js";

interface ComparativeRow {
    description: string;
    efs: string[];
    excluded: boolean;
    final: string | null;
    l: string;
    mms: string[];
    overall: string;
    rl: string | null;
    rs: string | null;
    s: string;
}

interface ReportShape {
    comparative: {
        aggregate_after: string | null;
        aggregate_before: string | null;
        columns: string[];
        rows: ComparativeRow[];
    };
    precautionary: {
        recommended_measures: string[];
        risk_id: string;
        status: string;
        uncertainty_rationale: string;
    }[];
    warnings: { dimensions: string[]; risk_id: string; round_index: number }[];
}

export async function renderDashboard(
    root: HTMLElement,
    store: WorkbenchStore,
    client: ApiClient,
): Promise<void> {
    root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = "Impact dashboard";
    root.append(heading);

    if (!store.assessmentId || !store.doc) return;
    const ratedRisks = store.doc.risks.filter((risk) => risk.initial !== null && !risk.precautionary);
    if (ratedRisks.length === 0) {
        const empty = document.createElement("p");
        empty.className = "empty-state";
        empty.textContent = "No rated risks yet: rate at least one risk in the workbench to see impacts.";
        root.append(empty);
        return;
    }

    const hasRounds = ratedRisks.some((risk) => risk.rounds.length > 0);
    if (!hasRounds) {
        const note = document.createElement("p");
        note.className = "empty-state";
        note.textContent = "No mitigation rounds yet — showing the initial impact only.";
        root.append(note);
    }

    // chart.svg is embedded as-is; the console never re-derives chart values
    const chart = document.createElement("object");
    chart.type = "image/svg+xml";
    chart.data = client.chartUrl(store.assessmentId, true) + (hasRounds ? "" : "");
    chart.className = "impact-chart";
    root.append(chart);

    const report = (await client.report(store.assessmentId)) as unknown as ReportShape;

    const table = document.createElement("table");
    table.className = "comparative";
    const head = document.createElement("tr");
    for (const column of ["Risk", ...report.comparative.columns]) {
        const cell = document.createElement("th");
        cell.textContent = column;
        head.append(cell);
    }
    table.append(head);
    for (const row of report.comparative.rows) {
        const tr = document.createElement("tr");
        const cells = [
            row.description,
            row.l,
            row.s,
            row.overall,
            row.efs.join("; "),
            row.mms.join("; "),
            row.excluded ? "excluded (EF)" : row.rl ?? "",
            row.excluded ? "excluded (EF)" : row.rs ?? "",
            row.excluded ? "excluded (EF)" : row.final ?? "",
        ];
        for (const value of cells) {
            const td = document.createElement("td");
            td.textContent = value;
            tr.append(td);
        }
        table.append(tr);
    }
    const aggregate = document.createElement("tr");
    aggregate.className = "aggregate";
    const cells = [
        "Overall impact (all impacted areas)",
        "", "",
        report.comparative.aggregate_before ?? "",
        "", "", "", "",
        report.comparative.aggregate_after ?? "",
    ];
    for (const value of cells) {
        const td = document.createElement("td");
        td.textContent = value;
        aggregate.append(td);
    }
    table.append(aggregate);
    root.append(table);

    const excludedRows = report.comparative.rows.filter((row) => row.excluded);
    if (excludedRows.length > 0) {
        const panel = document.createElement("section");
        panel.className = "excluded-panel";
        const title = document.createElement("h3");
        title.textContent = "Excluded (EF)";
        panel.append(title);
        for (const row of excludedRows) {
            const item = document.createElement("p");
            item.textContent = `${row.description} — ${row.efs.join("; ")}`;
            panel.append(item);
        }
        root.append(panel);
    }

    if (report.precautionary.length > 0) {
        const panel = document.createElement("section");
        panel.className = "precautionary-panel";
        const title = document.createElement("h3");
        title.textContent = "Precautionary items";
        panel.append(title);
        for (const flag of report.precautionary) {
            const item = document.createElement("p");
            item.textContent = `${flag.risk_id} (${flag.status}): ${flag.uncertainty_rationale}`;
            panel.append(item);
        }
        root.append(panel);
    }

    if (report.warnings.length > 0) {
        const panel = document.createElement("section");
        panel.className = "warnings-panel";
        const title = document.createElement("h3");
        title.textContent = "Escalation warnings";
        panel.append(title);
        for (const warning of report.warnings) {
            const item = document.createElement("p");
            item.textContent = `${warning.risk_id}, round ${warning.round_index}: worsened on ${warning.dimensions.join(", ")}`;
            panel.append(item);
        }
        root.append(panel);
    }
}
