// Thin bridge between the browser and the TCP debug server: serves the
// static UI, relays protocol events as server-sent events, and forwards
// commands.  Browsers cannot open raw TCP sockets, so this process is
// part of the frontend deployment.
//
//   node dist/bridge.js [--listen 8080] [--debug-host 127.0.0.1]
//                       [--debug-port 7458]
//
// Endpoints:
//   GET  /            static assets (public/ + dist/)
//   GET  /events      opens a session to the debug server, streams its
//                     events as SSE ("data: <json>\n\n")
//   POST /cmd         forwards one request line to the live session
//   GET  /program     text of the file named in the session's hello

import * as fs from "node:fs";
import * as http from "node:http";
import * as net from "node:net";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { parseEventLine } from "./protocol.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const staticRoots = [path.join(here, "..", "public"), path.join(here)];

interface Args {
  listen: number;
  debugHost: string;
  debugPort: number;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { listen: 8080, debugHost: "127.0.0.1", debugPort: 7458 };
  for (let i = 0; i < argv.length; i++) {
    const next = () => argv[++i];
    if (argv[i] === "--listen") args.listen = Number(next());
    else if (argv[i] === "--debug-host") args.debugHost = String(next());
    else if (argv[i] === "--debug-port") args.debugPort = Number(next());
  }
  return args;
}

interface LiveSession {
  socket: net.Socket;
}

let session: LiveSession | null = null;
let lastHelloFile: string | null = null;

function closeSession(): void {
  if (session) {
    session.socket.destroy();
    session = null;
  }
}

function contentType(file: string): string {
  if (file.endsWith(".html")) return "text/html; charset=utf-8";
  if (file.endsWith(".js")) return "text/javascript; charset=utf-8";
  if (file.endsWith(".css")) return "text/css; charset=utf-8";
  if (file.endsWith(".map") || file.endsWith(".json")) return "application/json";
  return "application/octet-stream";
}

function serveStatic(res: http.ServerResponse, urlPath: string): void {
  const rel = urlPath === "/" ? "index.html" : urlPath.replace(/^\/+/, "");
  const roots = rel.startsWith("fixtures/")
    ? [path.join(here, "..")]
    : staticRoots;
  for (const root of roots) {
    const file = path.join(root, rel);
    if (!file.startsWith(root)) continue; // no traversal
    if (fs.existsSync(file) && fs.statSync(file).isFile()) {
      res.writeHead(200, { "content-type": contentType(file) });
      res.end(fs.readFileSync(file));
      return;
    }
  }
  res.writeHead(404);
  res.end("not found");
}

function openEvents(
  res: http.ServerResponse,
  args: Args,
): void {
  closeSession();
  res.writeHead(200, {
    "content-type": "text/event-stream",
    "cache-control": "no-cache",
    connection: "keep-alive",
  });
  const socket = net.createConnection(args.debugPort, args.debugHost);
  session = { socket };
  let buffer = "";
  socket.setEncoding("utf-8");
  socket.on("data", (chunk: string) => {
    buffer += chunk;
    let idx: number;
    while ((idx = buffer.indexOf("\n")) >= 0) {
      const line = buffer.slice(0, idx);
      buffer = buffer.slice(idx + 1);
      if (!line.trim()) continue;
      try {
        const ev = parseEventLine(line);
        if (ev.type === "hello") lastHelloFile = ev.file;
      } catch {
        // forward anyway; the browser model reports bad events
      }
      res.write(`data: ${line}\n\n`);
    }
  });
  socket.on("error", (err: Error) => {
    res.write(`data: ${JSON.stringify({ type: "error", message: err.message })}\n\n`);
    res.end();
  });
  socket.on("close", () => res.end());
  res.on("close", closeSession);
}

function main(): void {
  const args = parseArgs(process.argv.slice(2));
  const server = http.createServer((req, res) => {
    const url = new URL(req.url ?? "/", "http://bridge");
    if (req.method === "GET" && url.pathname === "/events") {
      openEvents(res, args);
      return;
    }
    if (req.method === "POST" && url.pathname === "/cmd") {
      let body = "";
      req.on("data", (chunk) => (body += chunk));
      req.on("end", () => {
        if (!session) {
          res.writeHead(409);
          res.end("no live session");
          return;
        }
        session.socket.write(body.trim() + "\n");
        res.writeHead(204);
        res.end();
      });
      return;
    }
    if (req.method === "GET" && url.pathname === "/program") {
      const file = lastHelloFile;
      if (!file || !fs.existsSync(file)) {
        res.writeHead(404);
        res.end("no program");
        return;
      }
      res.writeHead(200, { "content-type": "text/plain; charset=utf-8" });
      res.end(fs.readFileSync(file, "utf-8"));
      return;
    }
    serveStatic(res, url.pathname);
  });
  server.listen(args.listen, () => {
    console.log(
      `bridge on http://127.0.0.1:${args.listen} -> ` +
        `${args.debugHost}:${args.debugPort}`,
    );
  });
}

main();
