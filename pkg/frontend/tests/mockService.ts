// In-memory stand-in for the chat service, serving the bodies captured from
// the real replay-backed service (tests/fixtures/service_bodies.json) so the
// client is exercised against genuine wire payloads.

import { readFileSync } from "node:fs";

interface CapturedBodies {
  create: { status: number; body: string };
  message: { status: number; body: string };
  trace: { status: number; body: string };
  sessions: { status: number; body: string };
}

export const captured: CapturedBodies = JSON.parse(
  readFileSync("tests/fixtures/service_bodies.json", "utf-8"),
);

interface MockSession {
  id: string;
  context: [string, string][];
  traces: string[];
  created_at: number;
}

export class MockService {
  sessions = new Map<string, MockSession>();
  busy = false; // when true, message posts answer 409
  failNetwork = false; // when true, fetch rejects
  private counter = 0;

  messageBody(turn: number): string {
    const parsed = JSON.parse(captured.message.body);
    parsed.turn = turn;
    return JSON.stringify(parsed);
  }

  install(): void {
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
      if (this.failNetwork) throw new TypeError("network down");
      const url = typeof input === "string" ? input : input.toString();
      const method = init?.method ?? "GET";
      const path = url.replace(/^https?:\/\/[^/]+/, "");

      if (method === "POST" && path === "/api/sessions") {
        const id = `sess-${this.counter++}`;
        this.sessions.set(id, { id, context: [], traces: [], created_at: Date.now() / 1000 });
        return json(201, JSON.stringify({ id }));
      }

      let match = path.match(/^\/api\/sessions\/([^/]+)\/messages$/);
      if (method === "POST" && match) {
        const session = this.sessions.get(match[1]);
        if (!session) return json(404, JSON.stringify({ error: "no session", code: "UNKNOWN_SESSION" }));
        const text = JSON.parse(String(init?.body ?? "{}")).text ?? "";
        if (!text.trim()) return json(400, JSON.stringify({ error: "empty", code: "EMPTY_MESSAGE" }));
        if (this.busy) {
          return json(409, JSON.stringify({ error: "session is already processing a message", code: "SESSION_BUSY" }));
        }
        const turn = session.traces.length;
        const body = this.messageBody(turn);
        const response = JSON.parse(body).response as string;
        session.context.push(["USER", text], ["SYSTEM", response]);
        session.traces.push(captured.trace.body);
        return json(200, body);
      }

      match = path.match(/^\/api\/sessions\/([^/]+)\/trace\/(\d+)$/);
      if (method === "GET" && match) {
        const session = this.sessions.get(match[1]);
        if (!session) return json(404, JSON.stringify({ error: "no session", code: "UNKNOWN_SESSION" }));
        const turn = Number(match[2]);
        if (turn >= session.traces.length) {
          return json(404, JSON.stringify({ error: "no trace", code: "UNKNOWN_TRACE" }));
        }
        return json(200, session.traces[turn]);
      }

      if (method === "GET" && path === "/api/sessions") {
        const summaries = [...this.sessions.values()].map((s) => ({
          id: s.id,
          turns: s.traces.length,
          created_at: s.created_at,
          last_active: s.created_at,
          context: s.context,
        }));
        return json(200, JSON.stringify(summaries));
      }

      if (method === "GET" && path === "/healthz") {
        return json(200, JSON.stringify({ status: "ok" }));
      }
      return json(404, JSON.stringify({ error: `no route ${path}`, code: "NOT_FOUND" }));
    }) as typeof fetch;
  }
}

function json(status: number, body: string): Response {
  return new Response(body, { status, headers: { "Content-Type": "application/json" } });
}
