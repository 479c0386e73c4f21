// Browser entry point: wires the session model to the DOM.  The trace
// pane is re-rendered from the event log on every change, so the live
// path and the offline replay path share the same rendering code.

import { SessionViewModel } from "./model.js";
import { parseEventLine, type Request, type ViewMode } from "./protocol.js";
import { renderTraceRows, solutionLines } from "./render.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const banner = el<HTMLDivElement>("banner");
const header = el<HTMLDivElement>("session-header");
const tracePane = el<HTMLDivElement>("trace");
const sourcePane = el<HTMLPreElement>("source");
const solutionsPane = el<HTMLDivElement>("solutions");
const buttons = {
  connect: el<HTMLButtonElement>("btn-connect"),
  step: el<HTMLButtonElement>("btn-step"),
  cont: el<HTMLButtonElement>("btn-continue"),
  skip: el<HTMLButtonElement>("btn-skip"),
  abort: el<HTMLButtonElement>("btn-abort"),
  view: el<HTMLButtonElement>("btn-view"),
  showHidden: el<HTMLInputElement>("chk-hidden"),
};

let model = new SessionViewModel(transmit);
let eventSource: EventSource | null = null;
let programLines: string[] = [];

function transmit(req: Request): void {
  void fetch("/cmd", { method: "POST", body: JSON.stringify(req) });
}

function setBanner(text: string | null): void {
  banner.textContent = text ?? "";
  banner.style.display = text ? "block" : "none";
}

function refreshControls(): void {
  const live = model.connection === "live";
  const ready = live && model.pendingCommand;
  buttons.step.disabled = !ready;
  buttons.cont.disabled = !ready;
  buttons.skip.disabled = !ready;
  buttons.abort.disabled = !ready;
  buttons.view.disabled = !ready;
  buttons.view.textContent =
    model.view === "source" ? "View: source" : "View: target";
}

function refreshSource(): void {
  const current = model.currentStep();
  const highlight = current?.line ?? null;
  sourcePane.innerHTML = "";
  programLines.forEach((text, i) => {
    const line = document.createElement("div");
    line.textContent = `${String(i + 1).padStart(3, " ")}  ${text}`;
    if (highlight === i + 1) line.className = "current-line";
    sourcePane.appendChild(line);
  });
}

function refreshTrace(): void {
  tracePane.innerHTML = "";
  const rows = renderTraceRows(model.log, model.view);
  for (const row of rows) {
    if (row.hidden && !buttons.showHidden.checked) continue;
    const div = document.createElement("div");
    div.textContent = row.text;
    div.className = row.hidden ? "trace-row hidden-row" : "trace-row";
    tracePane.appendChild(div);
  }
  tracePane.scrollTop = tracePane.scrollHeight;
  solutionsPane.textContent = solutionLines(model.log).join("\n");
}

function refreshAll(): void {
  if (model.file) {
    header.textContent = `${model.file} ?- ${model.goal}`;
  }
  setBanner(model.lastError);
  refreshControls();
  refreshTrace();
  refreshSource();
}

async function fetchProgram(): Promise<void> {
  try {
    const res = await fetch("/program");
    if (res.ok) {
      programLines = (await res.text()).split("\n");
      refreshSource();
    }
  } catch {
    /* offline demo has no program endpoint */
  }
}

function connect(): void {
  eventSource?.close();
  model = new SessionViewModel(transmit);
  model.connection = "connecting";
  refreshAll();
  eventSource = new EventSource("/events");
  eventSource.onmessage = (msg) => {
    try {
      model.handleEvent(parseEventLine(msg.data));
    } catch (err) {
      setBanner(String(err));
      return;
    }
    if (model.log.length === 1) void fetchProgram(); // after hello
    refreshAll();
  };
  eventSource.onerror = () => {
    if (model.connection === "connecting") {
      model.connection = "failed";
      setBanner("connection refused - is `unexpand serve` running?");
    } else {
      model.disconnect(); // log stays, controls freeze
    }
    eventSource?.close();
    refreshControls();
  };
}

buttons.connect.addEventListener("click", connect);
buttons.step.addEventListener("click", () => {
  model.sendCommand({ cmd: "step" });
  refreshControls();
});
buttons.cont.addEventListener("click", () => {
  model.continueRun();
  refreshControls();
});
buttons.skip.addEventListener("click", () => {
  model.sendCommand({ cmd: "skip" });
  refreshControls();
});
buttons.abort.addEventListener("click", () => {
  model.sendCommand({ cmd: "abort" });
  refreshControls();
});
buttons.view.addEventListener("click", () => {
  const next: ViewMode = model.view === "source" ? "target" : "source";
  model.sendCommand({ cmd: "view", view: next });
  refreshAll();
});
buttons.showHidden.addEventListener("change", refreshTrace);

// Offline replay: load the recorded fixture when ?replay=1.
async function maybeReplay(): Promise<void> {
  if (!new URLSearchParams(location.search).has("replay")) return;
  const res = await fetch("/fixtures/session.json");
  const events = (await res.json()) as unknown[];
  model = new SessionViewModel(() => undefined);
  for (const raw of events) {
    model.handleEvent(parseEventLine(JSON.stringify(raw)));
    model.pendingCommand = false;
  }
  model.connection = "closed";
  refreshAll();
}

void maybeReplay();
refreshAll();
