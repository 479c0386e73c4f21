// Session view model: an append-only event log plus the strict
// request-alternation state.  Exactly one request may be outstanding;
// commands sent while nothing is awaited are dropped, which makes
// double-clicks harmless.

import type {
  PortEvent,
  ProtocolEvent,
  Request,
  ViewMode,
} from "./protocol.js";

export type ConnectionState =
  | "idle"
  | "connecting"
  | "live"
  | "closed"
  | "failed";

export class SessionViewModel {
  readonly log: ProtocolEvent[] = [];
  connection: ConnectionState = "idle";
  view: ViewMode = "source";
  pendingCommand = false; // a non-hidden port event awaits one request
  autoContinue = false;
  file: string | null = null;
  goal: string | null = null;
  programText: string | null = null;
  lastError: string | null = null;

  private readonly transmit: (req: Request) => void;

  constructor(transmit: (req: Request) => void) {
    this.transmit = transmit;
  }

  handleEvent(ev: ProtocolEvent): void {
    this.log.push(ev);
    switch (ev.type) {
      case "hello":
        this.connection = "live";
        this.file = ev.file;
        this.goal = ev.goal;
        break;
      case "port":
        if (!ev.hidden) {
          this.pendingCommand = true;
          if (this.autoContinue) this.sendCommand({ cmd: "step" });
        }
        break;
      case "error":
        this.lastError = ev.message;
        break;
      case "done":
        this.connection = "closed";
        this.pendingCommand = false;
        this.autoContinue = false;
        break;
      case "solution":
        break;
    }
  }

  /** Send one request; returns false when no step is awaiting (the
   * out-of-turn guard). */
  sendCommand(req: Request): boolean {
    if (!this.pendingCommand || this.connection !== "live") return false;
    this.pendingCommand = false;
    if (req.cmd === "view") this.view = req.view;
    if (req.cmd === "abort") this.autoContinue = false;
    this.transmit(req);
    return true;
  }

  /** Keep answering "step" until the session finishes. */
  continueRun(): void {
    this.autoContinue = true;
    this.sendCommand({ cmd: "step" });
  }

  currentStep(): PortEvent | null {
    for (let i = this.log.length - 1; i >= 0; i--) {
      const ev = this.log[i];
      if (ev.type === "port" && !ev.hidden) return ev;
    }
    return null;
  }

  disconnect(): void {
    if (this.connection === "live") this.connection = "closed";
    this.pendingCommand = false;
  }
}
