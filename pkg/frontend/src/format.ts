// Step formatting, identical to the terminal debugger's layout:
// invocation number right-aligned in 4 columns, depth in 2, then the
// port name, the rendered goal, and the trailing prompt.

import type { Port } from "./protocol.js";

const PORT_NAMES: Record<Port, string> = {
  call: "Call",
  exit: "Exit",
  redo: "Redo",
  fail: "Fail",
};

export function formatStep(
  n: number,
  depth: number,
  port: Port,
  text: string,
): string {
  const nCol = String(n).padStart(4, " ");
  const dCol = String(depth).padStart(2, " ");
  return `${nCol} ${dCol}    ${PORT_NAMES[port]}: ${text} ? `;
}
