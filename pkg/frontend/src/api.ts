// Typed client for the chat-service HTTP+JSON API. The trace fetch keeps the
// raw response text so the inspector's raw-JSON view can match the API body
// byte-for-byte.

export interface SessionSummary {
  id: string;
  turns: number;
  created_at: number;
  last_active: number;
  context: [string, string][];
}

export interface TraceStep {
  action: string;
  query_text: string;
  parsed_query: string | null;
  parse_error: string | null;
  result_preview: string;
  extraction: string;
  verdict: "FULFILLED" | "CONTINUE" | "NOT_FOUND";
}

export interface TurnTrace {
  dialogue_id: string;
  turn_index: number;
  proxy_bs: string;
  steps: TraceStep[];
  outcome: { info: string; status: "FULFILLED" | "NOT_FOUND"; rounds_used: number };
  response: string;
  timings_ms: Record<string, number>;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function raise(res: Response): Promise<never> {
  let code = "HTTP_ERROR";
  let message = `HTTP ${res.status}`;
  try {
    const body = await res.json();
    if (body && typeof body.code === "string") code = body.code;
    if (body && typeof body.error === "string") message = body.error;
  } catch {
    // non-JSON error body; keep defaults
  }
  throw new ServiceError(res.status, code, message);
}

export class ChatApi {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(): Promise<string> {
    const res = await fetch(this.url("/api/sessions"), { method: "POST" });
    if (!res.ok) await raise(res);
    const body = await res.json();
    return body.id as string;
  }

  async sendMessage(id: string, text: string): Promise<{ response: string; turn: number }> {
    const res = await fetch(this.url(`/api/sessions/${id}/messages`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
    if (!res.ok) await raise(res);
    return res.json();
  }

  async fetchTrace(id: string, turn: number): Promise<{ trace: TurnTrace; raw: string }> {
    const res = await fetch(this.url(`/api/sessions/${id}/trace/${turn}`));
    if (!res.ok) await raise(res);
    const raw = await res.text();
    return { trace: JSON.parse(raw) as TurnTrace, raw };
  }

  async listSessions(): Promise<SessionSummary[]> {
    const res = await fetch(this.url("/api/sessions"));
    if (!res.ok) await raise(res);
    return res.json();
  }

  async health(): Promise<boolean> {
    try {
      const res = await fetch(this.url("/healthz"));
      return res.ok;
    } catch {
      return false;
    }
  }
}
