// Single-page flow ordered as the workflow stages; the stage machine gates
// navigation and the conflict banner sits above everything.

import { ApiClient } from "./api.js";
import { WorkbenchStore } from "./state.js";
import { renderScoping } from "./scoping.js";
import { renderWorkbench } from "./workbench.js";
import { renderDashboard } from "./dashboard.js";

const STAGE_ORDER = [
    "preliminary_analysis",
    "scoping",
    "fieldwork",
    "analysis_assessment",
    "mitigation",
    "further_implementation",
] as const;

const STAGE_LABELS: Record<string, string> = {
    preliminary_analysis: "I.A Preliminary analysis",
    scoping: "I.B Scoping",
    fieldwork: "II.A Fieldwork",
    analysis_assessment: "II.B Analysis & assessment",
    mitigation: "III.A Mitigation",
    further_implementation: "III.B Further implementation",
};

// Panels unlocked per stage: scoping before analysis; the workbench and
// dashboard once the assessment has reached stage II.
const PANEL_STAGE: Record<string, number> = {
    scoping: 1,
    workbench: 3,
    dashboard: 3,
};

export function startApp(root: HTMLElement): void {
    const client = new ApiClient("");
    const store = new WorkbenchStore(client);

    const banner = document.createElement("div");
    banner.id = "conflict-banner";
    banner.hidden = true;

    const header = document.createElement("header");
    const title = document.createElement("h1");
    title.textContent = "HRIA assessor console";
    const picker = document.createElement("select");
    picker.id = "assessment-picker";
    const stages = document.createElement("nav");
    stages.id = "stage-nav";
    header.append(title, picker, stages);

    const tabs = document.createElement("nav");
    tabs.id = "tabs";
    const main = document.createElement("main");
    root.append(banner, header, tabs, main);

    let activePanel = "scoping";

    function renderBanner(): void {
        if (store.conflict) {
            banner.hidden = false;
            banner.innerHTML = "";
            const text = document.createElement("span");
            text.textContent = store.conflict.message;
            const reload = document.createElement("button");
            reload.textContent = "Reload and merge";
            reload.addEventListener("click", () => void store.reloadAfterConflict());
            banner.append(text, reload);
        } else {
            banner.hidden = true;
        }
    }

    function stageIndex(): number {
        return store.doc ? STAGE_ORDER.indexOf(store.doc.stage as (typeof STAGE_ORDER)[number]) : 0;
    }

    function renderStages(): void {
        stages.innerHTML = "";
        if (!store.doc) return;
        for (const stage of STAGE_ORDER) {
            const chip = document.createElement("span");
            chip.className = "stage-chip" + (store.doc.stage === stage ? " active" : "");
            chip.textContent = STAGE_LABELS[stage] ?? stage;
            stages.append(chip);
        }
        const current = stageIndex();
        if (current < STAGE_ORDER.length - 1) {
            const next = STAGE_ORDER[current + 1]!;
            const button = document.createElement("button");
            button.textContent = `Advance to ${STAGE_LABELS[next]}`;
            button.addEventListener("click", () => {
                void store.saveStage(next, undefined, true);
            });
            stages.append(button);
        }
    }

    function renderTabs(): void {
        tabs.innerHTML = "";
        for (const panel of ["scoping", "workbench", "dashboard"]) {
            const button = document.createElement("button");
            button.textContent = panel;
            button.className = activePanel === panel ? "active" : "";
            button.disabled = stageIndex() < (PANEL_STAGE[panel] ?? 0);
            button.addEventListener("click", () => {
                activePanel = panel;
                render();
            });
            tabs.append(button);
        }
    }

    function render(): void {
        renderBanner();
        renderStages();
        renderTabs();
        if (!store.doc) {
            main.innerHTML = "<p class='empty-state'>Pick an assessment to begin.</p>";
            return;
        }
        if (activePanel === "scoping") renderScoping(main, store);
        else if (activePanel === "workbench") renderWorkbench(main, store);
        else void renderDashboard(main, store, client);
    }

    store.subscribe(render);

    void (async () => {
        const items = await client.listAssessments();
        picker.innerHTML = "";
        for (const item of items) {
            const option = document.createElement("option");
            option.value = item.id;
            option.textContent = `${item.title} (${item.id})`;
            picker.append(option);
        }
        picker.addEventListener("change", () => void store.open(picker.value));
        if (items.length > 0) await store.open(items[0]!.id);
        render();
    })();
}

const rootElement = document.getElementById("app");
if (rootElement) startApp(rootElement);
