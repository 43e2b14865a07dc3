// Scoping wizard: the four question blocks rendered as form sections, with
// per-block progress and inline validation errors next to offending fields.

import type { ScopingDoc } from "./api.js";
import type { WorkbenchStore } from "./state.js";

interface Block {
    id: string;
    title: string;
    fields: Field[];
}

interface Field {
    key: string;
    label: string;
    kind: "text" | "list" | "answers";
    required?: boolean;
}

export const SCOPING_BLOCKS: Block[] = [
    {
        id: "description",
        title: "Description and analysis of the product/service",
        fields: [
            {
                key: "product_description",
                label: "What are the main features of the product/service?",
                kind: "text",
                required: true,
            },
            { key: "target_countries", label: "In which countries will the product/service be offered?", kind: "list" },
            { key: "rights_holders", label: "Who are the rights-holders (direct users, supervisory users, third parties)?", kind: "list" },
            { key: "data_categories", label: "What types of data are collected?", kind: "list" },
            { key: "processing_purposes", label: "What are the main purposes of data processing?", kind: "list" },
            { key: "duty_bearers", label: "Which subjects are involved in data management (duty-bearers)?", kind: "list" },
        ],
    },
    {
        id: "context",
        title: "Human rights context",
        fields: [{ key: "human_rights_context", label: "Context questions", kind: "answers" }],
    },
    {
        id: "controls",
        title: "Controls in place",
        fields: [{ key: "controls_in_place", label: "Controls questions", kind: "answers" }],
    },
    {
        id: "stakeholders",
        title: "Stakeholder engagement",
        fields: [{ key: "stakeholders", label: "Stakeholders", kind: "list" }],
    },
];

export function blockComplete(scoping: ScopingDoc, block: Block): boolean {
    return block.fields.every((field) => {
        const value = (scoping as unknown as Record<string, unknown>)[field.key];
        if (field.kind === "text") return typeof value === "string" && value.trim().length > 0;
        if (field.kind === "list") return Array.isArray(value) && value.length > 0;
        return value !== null && typeof value === "object" && Object.keys(value as object).length > 0;
    });
}

export function renderScoping(root: HTMLElement, store: WorkbenchStore): void {
    const doc = store.doc;
    if (!doc) return;
    const scoping = structuredClone(doc.scoping);
    root.innerHTML = "";

    const heading = document.createElement("h2");
    heading.textContent = "Planning & scoping";
    root.append(heading);

    for (const block of SCOPING_BLOCKS) {
        const section = document.createElement("section");
        section.className = "scoping-block";
        const title = document.createElement("h3");
        const complete = blockComplete(scoping, block);
        title.textContent = `${block.title} ${complete ? "✓" : "·"}`;
        title.className = complete ? "block-complete" : "block-pending";
        section.append(title);

        for (const field of block.fields) {
            const wrap = document.createElement("div");
            wrap.className = "field";
            wrap.dataset.fieldKey = field.key;
            const label = document.createElement("label");
            label.textContent = field.label;
            wrap.append(label);
            if (field.kind === "text") {
                const area = document.createElement("textarea");
                area.value = (scoping as unknown as Record<string, string>)[field.key] ?? "";
                area.addEventListener("input", () => {
                    (scoping as unknown as Record<string, string>)[field.key] = area.value;
                });
                wrap.append(area);
            } else if (field.kind === "list") {
                const area = document.createElement("textarea");
                const values = (scoping as unknown as Record<string, unknown>)[field.key];
                area.value = Array.isArray(values)
                    ? values.map((v) => (typeof v === "string" ? v : JSON.stringify(v))).join("\n")
                    : "";
                area.placeholder = "one entry per line";
                area.addEventListener("input", () => {
                    const lines = area.value.split("\n").map((line) => line.trim()).filter(Boolean);
                    if (field.key === "stakeholders") {
                        (scoping.stakeholders as unknown) = lines.map((line) => ({
                            category: "stakeholder",
                            engaged: false,
                            name: line,
                            notes: "",
                        }));
                    } else {
                        (scoping as unknown as Record<string, unknown>)[field.key] = lines;
                    }
                });
                wrap.append(area);
            } else {
                const answers =
                    (scoping as unknown as Record<string, Record<string, string>>)[field.key] ?? {};
                const area = document.createElement("textarea");
                area.value = Object.entries(answers)
                    .map(([k, v]) => `${k} = ${v}`)
                    .join("\n");
                area.placeholder = "question-key = answer (one per line; custom keys need the x- prefix)";
                area.addEventListener("input", () => {
                    const parsed: Record<string, string> = {};
                    for (const line of area.value.split("\n")) {
                        const idx = line.indexOf("=");
                        if (idx > 0) parsed[line.slice(0, idx).trim()] = line.slice(idx + 1).trim();
                    }
                    (scoping as unknown as Record<string, unknown>)[field.key] = parsed;
                });
                wrap.append(area);
            }
            const problem = document.createElement("p");
            problem.className = "field-error";
            wrap.append(problem);
            section.append(wrap);
        }
        root.append(section);
    }

    const save = document.createElement("button");
    save.textContent = "Save scoping";
    save.addEventListener("click", async () => {
        clearFieldErrors(root);
        if (!scoping.product_description.trim()) {
            showFieldError(root, "product_description", "a product description is required");
            return; // client gate: no request is sent
        }
        const result = await store.saveScoping(scoping);
        if (result.status === "invalid") {
            for (const problem of result.problems) {
                const key = problem.path?.split(".")[1] ?? "";
                showFieldError(root, key || "product_description", problem.message);
            }
        }
    });
    root.append(save);
}

function clearFieldErrors(root: HTMLElement): void {
    root.querySelectorAll(".field-error").forEach((node) => (node.textContent = ""));
}

function showFieldError(root: HTMLElement, fieldKey: string, message: string): void {
    const field = root.querySelector(`[data-field-key="${fieldKey}"] .field-error`);
    if (field) field.textContent = message;
}
