// Wire types of the debug protocol: one JSON object per line.

export type Port = "call" | "exit" | "redo" | "fail";
export type ViewMode = "source" | "target";

export interface HelloEvent {
  type: "hello";
  version: number;
  file: string;
  goal: string;
}

export interface PortEvent {
  type: "port";
  n: number;
  depth: number;
  port: Port;
  source: string | null;
  target: string;
  module: string;
  line: number | null;
  hidden: boolean;
}

export interface SolutionEvent {
  type: "solution";
  bindings: Record<string, string>;
}

export interface DoneEvent {
  type: "done";
}

export interface ErrorEvent {
  type: "error";
  message: string;
}

export type ProtocolEvent =
  | HelloEvent
  | PortEvent
  | SolutionEvent
  | DoneEvent
  | ErrorEvent;

export type Request =
  | { cmd: "step" | "continue" | "skip" | "abort" }
  | { cmd: "spy" | "nospy"; pred: string }
  | { cmd: "view"; view: ViewMode };

const PORTS: ReadonlySet<string> = new Set(["call", "exit", "redo", "fail"]);

export function isProtocolEvent(value: unknown): value is ProtocolEvent {
  if (typeof value !== "object" || value === null) return false;
  const ev = value as Record<string, unknown>;
  switch (ev.type) {
    case "hello":
      return typeof ev.file === "string" && typeof ev.goal === "string";
    case "port":
      return (
        typeof ev.n === "number" &&
        typeof ev.depth === "number" &&
        typeof ev.port === "string" &&
        PORTS.has(ev.port) &&
        (ev.source === null || typeof ev.source === "string") &&
        typeof ev.target === "string" &&
        typeof ev.hidden === "boolean"
      );
    case "solution":
      return typeof ev.bindings === "object" && ev.bindings !== null;
    case "done":
      return true;
    case "error":
      return typeof ev.message === "string";
    default:
      return false;
  }
}

export function parseEventLine(line: string): ProtocolEvent {
  const value: unknown = JSON.parse(line);
  if (!isProtocolEvent(value)) {
    throw new Error(`not a protocol event: ${line}`);
  }
  return value;
}
