/**
 * Browser glue: socket lifecycle, keyboard input, the capture form, and
 * the report browser. All rendering state flows through SessionFeed and
 * buildRenderModel; this file only wires DOM events.
 */

import { validateCaptureForm, CaptureFormValues, PredicateKind } from "./capture.js";
import { SessionFeed, actionForKey, actMessage } from "./protocol.js";
import { categoryCells, diffReports, displayScore, loadReport, Report, sortScenarios, SortKey } from "./report.js";
import { paint } from "./renderer.js";
import { buildRenderModel } from "./viewmodel.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

// ---------------------------------------------------------------- session

const feed = new SessionFeed();
let socket: WebSocket | null = null;
let lastActionAt = 0;

function setBanner(text: string, kind: "info" | "error") {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = text;
  banner.className = kind;
}

function renderCurrent() {
  if (!feed.layout || !feed.lastState) return;
  const canvas = el<HTMLCanvasElement>("board");
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const model = buildRenderModel(feed.layout, feed.lastState);
  requestAnimationFrame(() => paint(ctx, model));
  el<HTMLSpanElement>("hud-tick").textContent = String(model.hud.tick);
  el<HTMLSpanElement>("hud-reward").textContent = String(model.hud.rewardTotal);
  el<HTMLSpanElement>("hud-mode").textContent = model.hud.mode;
  el<HTMLSpanElement>("hud-agent").textContent = feed.layout.agent;
}

function connect() {
  const endpoint = el<HTMLInputElement>("endpoint").value;
  socket = new WebSocket(endpoint);
  socket.onopen = () => setBanner("connected", "info");
  socket.onclose = () => {
    setBanner("connection lost - inputs disabled, reconnect to resume", "error");
    socket = null;
  };
  socket.onmessage = (event) => {
    const { record, error } = feed.ingest(String(event.data));
    if (error) {
      setBanner(error, "error");
      return; // view unchanged
    }
    if (!record) return;
    if (record.type === "error") setBanner(record.message, "error");
    if (record.type === "captured") setBanner(`captured ${record.id} -> ${record.path}`, "info");
    if (record.type === "state" || record.type === "layout") renderCurrent();
  };
}

function send(message: string) {
  if (!socket || socket.readyState !== WebSocket.OPEN) {
    setBanner("not connected", "error");
    return;
  }
  socket.send(message);
}

function bindKeyboard() {
  document.addEventListener("keydown", (event) => {
    if ((event.target as HTMLElement)?.tagName === "INPUT") return;
    const action = actionForKey(event.key);
    if (!action) return;
    event.preventDefault();
    // one act per keypress, never faster than the tick rate echoes back
    const now = performance.now();
    if (event.repeat && now - lastActionAt < 150) return;
    lastActionAt = now;
    send(actMessage(action));
    el<HTMLSpanElement>("hud-last-action").textContent = action;
  });
}

// ---------------------------------------------------------------- capture

function captureFormValues(): CaptureFormValues {
  const num = (id: string) => {
    const raw = el<HTMLInputElement>(id).value.trim();
    return raw === "" ? undefined : Number(raw);
  };
  const text = (id: string) => el<HTMLInputElement>(id).value.trim();
  const cellRaw = text("capture-cell");
  const values: CaptureFormValues = {
    id: text("capture-id"),
    category: el<HTMLSelectElement>("capture-category").value as CaptureFormValues["category"],
    partner: text("capture-partner"),
    predicateKind: el<HTMLSelectElement>("capture-kind").value as PredicateKind,
    ticks: Number(text("capture-ticks") || "0"),
  };
  const object = text("capture-object");
  if (object) values.object = object as CaptureFormValues["object"];
  if (cellRaw) {
    const [x, y] = cellRaw.split(",").map((v) => Number(v.trim()));
    values.cell = [x, y];
  }
  const onions = num("capture-onions");
  if (onions !== undefined) values.onions = onions;
  const points = num("capture-points");
  if (points !== undefined) values.points = points;
  const horizon = num("capture-horizon");
  if (horizon !== undefined) values.horizon = horizon;
  return values;
}

function bindCapture() {
  el<HTMLButtonElement>("capture-submit").addEventListener("click", () => {
    const errors = el<HTMLDivElement>("capture-errors");
    const result = validateCaptureForm(captureFormValues());
    if (!result.ok) {
      errors.textContent = result.errors.join("; ");
      return; // nothing sent
    }
    errors.textContent = "";
    send(JSON.stringify(result.message));
  });
}

// ---------------------------------------------------------------- reports

let reports: Report[] = [];
let sortKey: SortKey = "id";
let sortDesc = false;

function renderReports() {
  const summary = el<HTMLDivElement>("report-summary");
  const table = el<HTMLTableElement>("report-table");
  summary.innerHTML = "";
  table.innerHTML = "";
  if (reports.length === 0) return;
  const report = reports[reports.length - 1];
  summary.textContent = `tested ${report.tested} (seed ${report.base_seed}) - ` +
    categoryCells(report).map((c) => `${c.category} ${c.mean}`).join("  ");

  const head = table.insertRow();
  for (const key of ["id", "category", "layout", "score", "errors"] as SortKey[]) {
    const cell = document.createElement("th");
    cell.textContent = key;
    cell.onclick = () => {
      sortDesc = sortKey === key ? !sortDesc : false;
      sortKey = key;
      renderReports();
    };
    head.appendChild(cell);
  }
  for (const row of sortScenarios(report.scenarios, sortKey, sortDesc)) {
    const tr = table.insertRow();
    tr.insertCell().textContent = row.id;
    tr.insertCell().textContent = row.category;
    tr.insertCell().textContent = row.layout;
    tr.insertCell().textContent = displayScore(row.score);
    tr.insertCell().textContent = String(row.errors);
  }
  const diff = el<HTMLTableElement>("report-diff");
  diff.innerHTML = "";
  if (reports.length >= 2) {
    const rows = diffReports(reports[reports.length - 2], reports[reports.length - 1]);
    const header = diff.insertRow();
    for (const label of ["row", "previous", "latest", "delta"]) {
      const th = document.createElement("th");
      th.textContent = label;
      header.appendChild(th);
    }
    for (const row of rows) {
      const tr = diff.insertRow();
      tr.insertCell().textContent = row.id;
      tr.insertCell().textContent = row.left;
      tr.insertCell().textContent = row.right;
      tr.insertCell().textContent = row.delta;
    }
  }
}

function bindReports() {
  el<HTMLInputElement>("report-file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    for (const file of Array.from(input.files ?? [])) {
      try {
        reports.push(loadReport(await file.text()));
      } catch (error) {
        setBanner(`report rejected: ${error}`, "error");
      }
    }
    renderReports();
  });
}

// ---------------------------------------------------------------- wiring

export function start(): void {
  el<HTMLButtonElement>("connect").addEventListener("click", connect);
  el<HTMLButtonElement>("pause").addEventListener("click", () => send(JSON.stringify({ type: "pause" })));
  el<HTMLButtonElement>("resume").addEventListener("click", () => send(JSON.stringify({ type: "resume" })));
  el<HTMLButtonElement>("step").addEventListener("click", () =>
    send(JSON.stringify({ type: "step", n: Number(el<HTMLInputElement>("step-n").value || "1") })),
  );
  bindKeyboard();
  bindCapture();
  bindReports();
}

if (typeof document !== "undefined" && document.getElementById("board")) {
  start();
}
