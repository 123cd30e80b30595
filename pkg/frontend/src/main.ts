/** Application wiring: toolbar, canvas, vertex inspector, results panel,
 * estimate dialog, and feedback panel, all driven by EditorState. */

import { ApiClient, ApiError } from "./api.js";
import { Canvas } from "./canvas.js";
import { isBasicEvent } from "./dot.js";
import { EstimateInputError, runEstimate } from "./estimate.js";
import { listingRows, renderErrorHtml, renderResultsHtml } from "./results.js";

function showAnalysisError(message: string): void {
  byId<HTMLElement>("results").innerHTML = renderErrorHtml(message);
}
import { EditorState, GATE_TYPES } from "./state.js";

const api = new ApiClient("");
const state = new EditorState(api);

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function setStatus(text: string, isError = false): void {
  const el = byId<HTMLElement>("status");
  el.textContent = text;
  el.className = isError ? "error" : "";
}

async function guarded(work: () => Promise<void>): Promise<void> {
  try {
    await work();
  } catch (err) {
    if (err instanceof ApiError) {
      setStatus(`${err.code}: ${err.message}`, true);
      renderDiagnostics(err.diagnostics);
    } else if (err instanceof EstimateInputError) {
      byId<HTMLElement>("estimate-error").textContent = err.message;
    } else {
      setStatus(String(err), true);
    }
  }
}

function renderDiagnostics(diags: { code: string; message: string; vertex?: string | null }[]): void {
  const panel = byId<HTMLElement>("feedback");
  panel.replaceChildren();
  for (const d of diags) {
    const li = document.createElement("li");
    li.textContent = `${d.code}: ${d.message}${d.vertex ? ` @${d.vertex}` : ""}`;
    if (d.vertex) li.dataset.vertex = d.vertex;
    panel.appendChild(li);
  }
}

function renderResults(): void {
  const panel = byId<HTMLElement>("results");
  if (!state.lastAnalysis) {
    panel.innerHTML = renderResultsHtml([], false);
    return;
  }
  const rows = listingRows(state.doc, state.lastAnalysis);
  panel.innerHTML = renderResultsHtml(rows, state.stale);
}

function renderInspector(canvas: Canvas): void {
  const panel = byId<HTMLElement>("inspector");
  panel.replaceChildren();
  const id = state.selection;
  if (!id) return;
  const v = state.doc.vertices.get(id);
  if (!v) return;

  const title = document.createElement("h3");
  title.textContent = `${id} (${v.attrs.label ?? "unlabeled"})`;
  panel.appendChild(title);

  const typeSel = document.createElement("select");
  for (const t of ["BE", ...GATE_TYPES]) {
    const opt = document.createElement("option");
    opt.value = t;
    opt.textContent = t;
    opt.selected = (v.attrs.type ?? "BE") === t;
    typeSel.appendChild(opt);
  }
  typeSel.addEventListener("change", () => {
    state.retype(id, typeSel.value);
    refresh(canvas);
  });
  panel.appendChild(typeSel);

  const fields: Array<[string, string]> = isBasicEvent(v)
    ? [["label", "label"], ["player", "player"], ["prob", "prob"],
       ["prob_eps", "ε"], ["prob_delta", "δ"],
       ["cost_s", "cost (succeed)"], ["cost_f", "cost (fail)"],
       ["delay_s", "delay (succeed)"], ["delay_f", "delay (fail)"]]
    : [["label", "label"]];
  for (const [attr, label] of fields) {
    const row = document.createElement("label");
    row.textContent = label + " ";
    const input = document.createElement("input");
    input.value = v.attrs[attr] ?? "";
    input.addEventListener("change", () => {
      state.setAttrs(id, { [attr]: input.value === "" ? null : input.value });
      refresh(canvas);
    });
    row.appendChild(input);
    panel.appendChild(row);
  }

  const del = document.createElement("button");
  del.textContent = "delete vertex";
  del.addEventListener("click", () => {
    state.removeVertex(id);
    refresh(canvas);
  });
  panel.appendChild(del);
}

function refresh(canvas: Canvas): void {
  canvas.render(state.doc, state.selection);
  renderInspector(canvas);
  renderResults();
  const dirty = state.dirty ? " (unsaved)" : "";
  setStatus(
    state.modelId ? `model ${state.modelId} rev ${state.revision}${dirty}` : "no model",
  );
}

async function analyzeNow(canvas: Canvas): Promise<void> {
  const domain = byId<HTMLSelectElement>("domain").value;
  const pac = byId<HTMLInputElement>("pac").checked;
  const deltaRule = byId<HTMLSelectElement>("delta-rule").value;
  try {
    await state.analyze({ domain, pac, deltaRule });
    renderDiagnostics(state.lastDiagnostics);
    refresh(canvas);
  } catch (err) {
    if (err instanceof ApiError) {
      showAnalysisError(`${err.code}: ${err.message}`);
      renderDiagnostics(err.diagnostics);
    } else {
      setStatus(String(err), true);
    }
  }
}

function init(): void {
  const canvas = new Canvas(byId<HTMLElement>("canvas") as unknown as SVGSVGElement, {
    onSelect(id) {
      state.selection = id;
      refresh(canvas);
    },
    onMove(id, x, y) {
      state.setPosition(id, x, y);
      canvas.render(state.doc, state.selection);
    },
    onConnect(from, to) {
      state.addEdge(from, to);
      refresh(canvas);
    },
  });

  byId<HTMLInputElement>("file").addEventListener("change", async (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    const text = await file.text();
    await guarded(async () => {
      await state.load(text);
      renderDiagnostics(state.lastDiagnostics);
      refresh(canvas);
    });
  });

  byId<HTMLButtonElement>("add-be").addEventListener("click", () => {
    state.addVertex("BE", { prob: "0.5" });
    refresh(canvas);
  });
  byId<HTMLButtonElement>("add-gate").addEventListener("click", () => {
    state.addVertex("AND");
    refresh(canvas);
  });
  byId<HTMLButtonElement>("add-edge").addEventListener("click", () => {
    if (state.selection) canvas.pendingEdgeFrom = state.selection;
    setStatus("click a target vertex to connect");
  });
  byId<HTMLButtonElement>("save").addEventListener("click", () =>
    guarded(async () => {
      renderDiagnostics(await state.save());
      refresh(canvas);
    }),
  );
  byId<HTMLButtonElement>("analyze").addEventListener("click", () =>
    analyzeNow(canvas),
  );
  byId<HTMLButtonElement>("feedback-btn").addEventListener("click", () =>
    guarded(async () => {
      const target = byId<HTMLSelectElement>("feedback-target").value;
      renderDiagnostics(await state.feedback(target));
    }),
  );

  byId<HTMLButtonElement>("estimate").addEventListener("click", () =>
    guarded(async () => {
      byId<HTMLElement>("estimate-error").textContent = "";
      if (!state.selection) {
        throw new EstimateInputError("select a basic event first");
      }
      const csv = byId<HTMLTextAreaElement>("samples").value;
      const delta = Number(byId<HTMLInputElement>("delta").value);
      const est = await runEstimate(state, state.selection, csv, delta);
      setStatus(`leaf estimate ${est.value} ± ${est.eps} (δ=${est.delta})`);
      refresh(canvas);
    }),
  );

  refresh(canvas);
}

document.addEventListener("DOMContentLoaded", init);
