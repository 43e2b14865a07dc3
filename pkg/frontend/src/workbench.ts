// Rating workbench: four level pickers driving a live what-if preview, and
// the round editor for excluding factors, mitigation measures and residual
// ratings. All scores and levels on screen come from the service.

import { DESCRIPTORS, DIMENSIONS, DIMENSION_LABELS } from "./descriptors.js";
import type { Dimension } from "./descriptors.js";
import { LEVEL_LABELS, LEVEL_TOKENS } from "./levels.js";
import type { LevelToken } from "./levels.js";
import { formatBadges } from "./badge.js";
import type { WorkbenchStore } from "./state.js";

export function renderWorkbench(root: HTMLElement, store: WorkbenchStore): void {
    const doc = store.doc;
    if (!doc) return;
    root.innerHTML = "";

    const heading = document.createElement("h2");
    heading.textContent = "Risk rating workbench";
    root.append(heading);

    const picker = document.createElement("select");
    const placeholder = document.createElement("option");
    placeholder.value = "";
    placeholder.textContent = "— select a risk —";
    picker.append(placeholder);
    for (const risk of doc.risks) {
        const option = document.createElement("option");
        option.value = risk.id;
        option.textContent = `${risk.id}: ${risk.description}`;
        if (risk.id === store.selectedRiskId) option.selected = true;
        picker.append(option);
    }
    picker.addEventListener("change", () => store.selectRisk(picker.value || null));
    root.append(picker);

    const risk = store.selectedRisk();
    if (!risk) {
        const hint = document.createElement("p");
        hint.className = "empty-state";
        hint.textContent = "Select a risk to rate it or to add a mitigation round.";
        root.append(hint);
        return;
    }

    const mode: "initial" | "round" = risk.initial === null || risk.rounds.length === 0 ? "initial" : "round";
    const isRoundEditor = risk.initial !== null;

    if (risk.precautionary) {
        const note = document.createElement("p");
        note.className = "precautionary-note";
        note.textContent =
            "This risk carries a precautionary flag: rating it requires a rationale and resolves the flag.";
        root.append(note);
    }

    const stored = document.createElement("p");
    stored.className = "stored-ratings";
    stored.textContent = risk.initial
        ? "Stored initial ratings: " +
          DIMENSIONS.map((dim) => `${DIMENSION_LABELS[dim]} ${LEVEL_LABELS[risk.initial![dim]]}`).join(", ")
        : "No stored ratings yet.";
    root.append(stored);

    const pickers = document.createElement("div");
    pickers.className = "pickers";
    const draft = isRoundEditor && risk.rounds.length >= 0 && risk.initial ? "round" : "initial";
    for (const dim of DIMENSIONS) {
        pickers.append(renderDimension(store, dim, draft === "round" && isRoundEditor));
    }
    root.append(pickers);

    const badges = document.createElement("div");
    badges.className = "badges";
    badges.id = "whatif-badges";
    if (store.preview) {
        const view = formatBadges(store.preview);
        for (const text of [view.likelihood, view.severity, view.overall]) {
            const badge = document.createElement("span");
            badge.className = "badge";
            badge.textContent = text;
            badges.append(badge);
        }
    } else {
        const hint = document.createElement("span");
        hint.className = "badge badge-empty";
        hint.textContent = "pick all four levels for a live preview";
        badges.append(hint);
    }
    root.append(badges);

    if (!isRoundEditor || risk.initial === null) {
        const rationale = document.createElement("input");
        rationale.placeholder = risk.precautionary
            ? "rationale (required to resolve the precautionary flag)"
            : "rationale (optional)";
        root.append(rationale);
        const commit = document.createElement("button");
        commit.textContent = "Save initial ratings";
        commit.disabled = !store.draftComplete(store.draftRatings);
        commit.addEventListener("click", () => {
            void store.saveInitialRatings(rationale.value || undefined);
        });
        root.append(commit);
        return;
    }

    root.append(renderRoundEditor(store));
    void mode;
}

function renderDimension(store: WorkbenchStore, dim: Dimension, forRound: boolean): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "dimension";
    const label = document.createElement("span");
    label.textContent = DIMENSION_LABELS[dim];
    wrap.append(label);
    const current = forRound ? store.draftRound.residual[dim] : store.draftRatings[dim];
    for (const token of LEVEL_TOKENS) {
        const button = document.createElement("button");
        button.className = "level-pick" + (current === token ? " picked" : "");
        button.textContent = LEVEL_LABELS[token];
        button.title = DESCRIPTORS[dim][token]; // verbatim descriptor tooltip
        button.addEventListener("click", () => {
            void (forRound ? store.setDraftResidual(dim, token) : store.setDraftRating(dim, token));
        });
        wrap.append(button);
    }
    return wrap;
}

function renderRoundEditor(store: WorkbenchStore): HTMLElement {
    const section = document.createElement("section");
    section.className = "round-editor";
    const title = document.createElement("h3");
    const risk = store.selectedRisk()!;
    title.textContent = `Mitigation round ${risk.rounds.length + 1}`;
    section.append(title);

    const mmList = document.createElement("textarea");
    mmList.placeholder = "mitigation measures, one per line (description :: category)";
    mmList.value = store.draftRound.mitigationMeasures
        .map((mm) => `${mm.description} :: ${mm.category}`)
        .join("\n");
    mmList.addEventListener("input", () => {
        store.draftRound.mitigationMeasures = mmList.value
            .split("\n")
            .map((line) => line.trim())
            .filter(Boolean)
            .map((line) => {
                const [description = "", category = ""] = line.split("::").map((p) => p.trim());
                return { description, category };
            });
    });
    section.append(mmList);

    const excluded = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = store.draftRound.excluded;
    box.addEventListener("change", () => {
        store.draftRound.excluded = box.checked;
        efList.disabled = !box.checked;
    });
    excluded.append(box, document.createTextNode(" legally excluded (EF)"));
    section.append(excluded);

    const efList = document.createElement("textarea");
    efList.placeholder = "excluding factors, one per line (description :: legal basis)";
    efList.disabled = !store.draftRound.excluded;
    efList.addEventListener("input", () => {
        store.draftRound.excludingFactors = efList.value
            .split("\n")
            .map((line) => line.trim())
            .filter(Boolean)
            .map((line) => {
                const [description = "", legal_basis = ""] = line.split("::").map((p) => p.trim());
                return { description, legal_basis };
            });
    });
    section.append(efList);

    const rationale = document.createElement("input");
    rationale.placeholder = "rationale (required when any residual drops below its baseline)";
    rationale.value = store.draftRound.rationale;
    rationale.addEventListener("input", () => {
        store.draftRound.rationale = rationale.value;
    });
    section.append(rationale);

    const problems = document.createElement("ul");
    problems.className = "problems";
    section.append(problems);

    const submit = document.createElement("button");
    submit.textContent = "Apply round";
    const refreshGate = () => {
        const current = store.roundProblems();
        problems.innerHTML = "";
        for (const problem of current) {
            const item = document.createElement("li");
            item.textContent = problem;
            problems.append(item);
        }
        submit.disabled = current.length > 0;
    };
    refreshGate();
    section.addEventListener("input", refreshGate);
    section.addEventListener("click", refreshGate);
    submit.addEventListener("click", () => {
        if (store.roundProblems().length === 0) void store.saveRound();
    });
    section.append(submit);
    return section;
}

export function levelToken(value: string): LevelToken | null {
    return (LEVEL_TOKENS as readonly string[]).includes(value) ? (value as LevelToken) : null;
}
