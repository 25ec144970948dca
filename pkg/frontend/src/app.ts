import { ApiError, WorkbenchClient } from "./client.js";
import { formatOutcome } from "./ratingForm.js";
import { renderRadial } from "./radial.js";
import { WorkbenchSession } from "./session.js";
import { WhatifPanel } from "./whatif.js";
import type { CaseDocument, MitigationMeasure, RightAssessment } from "./types.js";

/**
 * Browser entry point. Wires the workbench widgets to a served case; all
 * state lives in WorkbenchSession and WhatifPanel, the DOM below is a view.
 */

const client = new WorkbenchClient(window.location.origin);

let session: WorkbenchSession | null = null;
let panel: WhatifPanel | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(text: string, isError = false): void {
  const box = el<HTMLElement>("status");
  box.textContent = text;
  box.className = isError ? "status error" : "status";
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  return String(error);
}

async function loadCaseList(): Promise<void> {
  const select = el<HTMLSelectElement>("case-select");
  const cases = await client.listCases();
  select.innerHTML = "";
  for (const summary of cases) {
    const option = document.createElement("option");
    option.value = summary.case_id;
    option.textContent = `${summary.case_id} (${summary.status}, v${summary.version})`;
    select.appendChild(option);
  }
  if (cases.length > 0 && cases[0] !== undefined) {
    await openCase(cases[0].case_id);
  } else {
    setStatus("no cases in the store");
  }
}

async function openCase(caseId: string): Promise<void> {
  session = new WorkbenchSession(client, caseId);
  panel = new WhatifPanel(client, caseId, () => session?.snapshotVersion ?? null);
  const doc = await session.refresh();
  renderCase(doc);
  await refreshRadial(caseId);
  await refreshLedgerBadge(caseId);
  setStatus(`loaded ${caseId} at version ${doc.version}`);
}

function renderCase(doc: CaseDocument): void {
  el<HTMLElement>("case-title").textContent = `${doc.title} [${doc.status}]`;
  renderRightsTable(doc.right_assessments);
  renderMeasureToggles(collectMeasures(doc.right_assessments));
  renderWhatifRows();
}

function renderRightsTable(rights: RightAssessment[]): void {
  const tbody = el<HTMLTableSectionElement>("rights-body");
  tbody.innerHTML = "";
  for (const right of rights) {
    const row = document.createElement("tr");
    const last = right.rounds[right.rounds.length - 1];
    const cells = [
      right.right_id,
      right.title,
      last ? formatOutcome(last.likelihood) : "not assessed",
      last ? formatOutcome(last.severity) : "",
      last ? formatOutcome(last.risk) : "",
      last ? last.acceptability : "",
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      row.appendChild(td);
    }
    if (last?.acceptability === "blocked") row.classList.add("blocked");
    tbody.appendChild(row);
  }
}

function collectMeasures(rights: RightAssessment[]): MitigationMeasure[] {
  const seen = new Map<string, MitigationMeasure>();
  for (const right of rights) {
    for (const measure of right.mitigations) {
      if (!seen.has(measure.id)) seen.set(measure.id, measure);
    }
  }
  return [...seen.values()];
}

function renderMeasureToggles(measures: MitigationMeasure[]): void {
  const box = el<HTMLElement>("measures");
  box.innerHTML = "";
  for (const measure of measures) {
    const label = document.createElement("label");
    const input = document.createElement("input");
    input.type = "checkbox";
    input.value = measure.id;
    input.checked = panel?.isToggled(measure.id) ?? false;
    input.addEventListener("change", () => {
      void toggleMeasure(measure.id);
    });
    label.appendChild(input);
    label.appendChild(document.createTextNode(` ${measure.id}: ${measure.description}`));
    box.appendChild(label);
  }
}

async function toggleMeasure(measureId: string): Promise<void> {
  if (panel === null) return;
  try {
    await panel.toggle(measureId);
    renderWhatifRows();
  } catch (error) {
    setStatus(describeError(error), true);
  }
}

function renderWhatifRows(): void {
  const tbody = el<HTMLTableSectionElement>("whatif-body");
  tbody.innerHTML = "";
  if (panel === null) return;
  for (const row of panel.displayRows()) {
    const tr = document.createElement("tr");
    const cells = [
      row.rightId,
      formatOutcome(row.current.risk),
      formatOutcome(row.hypothetical.risk),
      row.deltaText,
      row.hypothetical.acceptability,
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      tr.appendChild(td);
    }
    if (row.changed) tr.classList.add("changed");
    tbody.appendChild(tr);
  }
}

async function refreshRadial(caseId: string): Promise<void> {
  try {
    const data = await client.radial(caseId);
    el<HTMLElement>("radial").innerHTML = renderRadial(data, { size: 420 });
  } catch (error) {
    el<HTMLElement>("radial").textContent = describeError(error);
  }
}

async function refreshLedgerBadge(caseId: string): Promise<void> {
  const badge = el<HTMLElement>("ledger-badge");
  try {
    const verdict = await client.verifyLedger(caseId);
    badge.textContent = verdict.ok
      ? `ledger ok (${verdict.length} entries)`
      : `ledger BROKEN at #${verdict.first_break}`;
    badge.className = verdict.ok ? "badge ok" : "badge broken";
  } catch (error) {
    badge.textContent = describeError(error);
    badge.className = "badge broken";
  }
}

async function commitMeasures(): Promise<void> {
  if (panel === null || session === null) return;
  try {
    const summary = await panel.commit({ actor: "workbench-user" });
    setStatus(`round committed, case now at version ${summary.version}`);
    const doc = await session.refresh();
    renderCase(doc);
    await refreshRadial(session.caseId);
    await refreshLedgerBadge(session.caseId);
  } catch (error) {
    if (error instanceof ApiError && error.code === "version-conflict") {
      setStatus("someone else changed this case; reload before committing", true);
    } else {
      setStatus(describeError(error), true);
    }
  }
}

function wireControls(): void {
  el<HTMLSelectElement>("case-select").addEventListener("change", (event) => {
    const caseId = (event.target as HTMLSelectElement).value;
    void openCase(caseId).catch((error) => setStatus(describeError(error), true));
  });
  el<HTMLButtonElement>("commit-button").addEventListener("click", () => {
    void commitMeasures();
  });
  el<HTMLButtonElement>("report-button").addEventListener("click", () => {
    if (session !== null) {
      window.open(`/cases/${encodeURIComponent(session.caseId)}/report?format=markdown`);
    }
  });
}

wireControls();
void loadCaseList().catch((error) => setStatus(describeError(error), true));
