/**
 * Wires the editor together: canvas clicks edit the design, edits schedule a
 * debounced simulation against the local service, and only responses for the
 * version still on display are shown.
 */

import { SimulationClient, ServiceError } from "./api.js";
import { emptyDesign } from "./model.js";
import { describeOutlets } from "./render.js";
import { renderEditor } from "./render.js";
import { EditorState } from "./state.js";

const DEBOUNCE_MS = 300;
const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8745";

const state = new EditorState(emptyDesign(8, 8));
const client = new SimulationClient(SERVICE_URL);

const svg = document.getElementById("grid") as unknown as SVGSVGElement;
const status = document.getElementById("status")!;
const results = document.getElementById("results")!;
const inletPanel = document.getElementById("inlets")!;

let timer: number | undefined;

function setStatus(text: string, isError = false): void {
  status.textContent = text;
  status.className = isError ? "error" : "";
}

function scheduleSimulation(): void {
  window.clearTimeout(timer);
  timer = window.setTimeout(runSimulation, DEBOUNCE_MS);
}

async function runSimulation(): Promise<void> {
  const issues = state.validationIssues();
  if (issues.length) {
    setStatus(`design incomplete: ${issues[0]}`, true);
    results.textContent = "no results yet";
    return;
  }
  const version = state.beginSimulation();
  setStatus("simulating…");
  try {
    const response = await client.simulate(state.design);
    if (state.applyResponse(version, response)) {
      setStatus("up to date");
      results.textContent = describeOutlets(state.design, response);
      redraw();
    }
  } catch (error) {
    if (error instanceof DOMException && error.name === "AbortError") return;
    if (error instanceof ServiceError) {
      setStatus(`service: ${error.message}`, true);
    } else {
      setStatus(`service unreachable at ${SERVICE_URL}`, true);
    }
  }
}

function afterEdit(): void {
  redraw();
  scheduleSimulation();
}

function redraw(): void {
  renderEditor(svg, state, {
    onChannelClick(kind, row, col) {
      state.toggleChannel(kind, row, col);
      afterEdit();
    },
    onTopClick(col) {
      const existing = state.design.inlets.find((i) => i.col === col);
      if (existing) {
        state.removeInlet(col);
        afterEdit();
        return;
      }
      const concentration = Number(prompt("inlet concentration (0..1)", "1") ?? "");
      const velocity = Number(prompt("inlet velocity (mm/s)", "1") ?? "");
      if (!Number.isFinite(concentration) || !Number.isFinite(velocity)) return;
      const error = state.setInlet({ col, concentration, velocity });
      if (error) {
        setStatus(error, true);
        return;
      }
      afterEdit();
    },
    onBottomClick(col) {
      state.toggleOutlet(col);
      afterEdit();
    },
  });
  renderInletPanel();
}

function renderInletPanel(): void {
  inletPanel.innerHTML = "";
  for (const [index, inlet] of state.design.inlets.entries()) {
    const row = document.createElement("div");
    row.className = "inlet-row";
    const label = document.createElement("span");
    label.textContent = `col ${inlet.col}`;
    const conc = document.createElement("input");
    conc.type = "number";
    conc.step = "0.05";
    conc.value = String(inlet.concentration);
    const vel = document.createElement("input");
    vel.type = "number";
    vel.step = "0.1";
    vel.value = String(inlet.velocity);
    const apply = () => {
      const error = state.editInlet(index, Number(conc.value), Number(vel.value));
      if (error) {
        setStatus(error, true);
        conc.value = String(state.design.inlets[index]!.concentration);
        vel.value = String(state.design.inlets[index]!.velocity);
        return;
      }
      afterEdit();
    };
    conc.addEventListener("change", apply);
    vel.addEventListener("change", apply);
    row.append(label, conc, vel);
    inletPanel.appendChild(row);
  }
}

document.getElementById("export")!.addEventListener("click", () => {
  const blob = new Blob([state.exportJson()], { type: "application/json" });
  const anchor = document.createElement("a");
  anchor.href = URL.createObjectURL(blob);
  anchor.download = "design.json";
  anchor.click();
  URL.revokeObjectURL(anchor.href);
});

document.getElementById("import")!.addEventListener("change", async (event) => {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  try {
    state.importJson(await file.text());
    afterEdit();
    setStatus("design imported");
  } catch (error) {
    setStatus(String(error), true);
  }
  input.value = "";
});

document.getElementById("randomize")!.addEventListener("click", async () => {
  try {
    setStatus("generating…");
    const design = await client.generate({
      rows: state.design.rows,
      cols: state.design.cols,
      seed: Math.floor(Math.random() * 1_000_000),
    });
    state.importJson(JSON.stringify(design));
    afterEdit();
  } catch (error) {
    setStatus(String(error), true);
  }
});

document.getElementById("resize")!.addEventListener("click", () => {
  const rows = Number(prompt("rows", String(state.design.rows)) ?? "");
  const cols = Number(prompt("cols", String(state.design.cols)) ?? "");
  if (Number.isInteger(rows) && Number.isInteger(cols) && rows >= 1 && cols >= 1) {
    state.resize(rows, cols);
    afterEdit();
  }
});

client.health().then((ok) => {
  setStatus(ok ? "service connected" : `service unreachable at ${SERVICE_URL}`, !ok);
});
redraw();
