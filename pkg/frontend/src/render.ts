// Pure rendering: the trace pane is a function of the event log and the
// view mode, so replaying a recorded session gives identical rows.

import { formatStep } from "./format.js";
import type { PortEvent, ProtocolEvent, ViewMode } from "./protocol.js";

export interface TraceRow {
  text: string;
  hidden: boolean;
  port: string;
  n: number;
  depth: number;
  line: number | null;
}

export function renderEvent(ev: PortEvent, view: ViewMode): TraceRow {
  const sourceText = ev.source ?? ev.target;
  const text =
    view === "target"
      ? formatStep(ev.n, ev.depth, ev.port, ev.target)
      : formatStep(ev.n, ev.depth, ev.port, sourceText);
  return {
    text,
    hidden: view === "source" && ev.hidden,
    port: ev.port,
    n: ev.n,
    depth: ev.depth,
    line: ev.line,
  };
}

export function renderTraceRows(
  log: readonly ProtocolEvent[],
  view: ViewMode,
): TraceRow[] {
  const rows: TraceRow[] = [];
  for (const ev of log) {
    if (ev.type === "port") rows.push(renderEvent(ev, view));
  }
  return rows;
}

export function visibleRowTexts(
  log: readonly ProtocolEvent[],
  view: ViewMode,
): string[] {
  return renderTraceRows(log, view)
    .filter((row) => !row.hidden)
    .map((row) => row.text);
}

export function solutionLines(log: readonly ProtocolEvent[]): string[] {
  const lines: string[] = [];
  for (const ev of log) {
    if (ev.type !== "solution") continue;
    const parts = Object.entries(ev.bindings).map(
      ([name, value]) => `${name} = ${value}`,
    );
    lines.push(parts.length ? parts.join(", ") : "yes");
  }
  return lines;
}
