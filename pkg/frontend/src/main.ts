// Wiring: session bootstrap, message sending, and trace inspection.
// One in-flight message per session, enforced here and by the server.

import { ChatApi, ServiceError } from "./api.js";
import {
  ChatView,
  initialView,
  nextTurnIndex,
  restoreFromContext,
  selectTurn,
  toggleRaw,
  toggleStep,
  withBusyRejected,
  withOptimisticUser,
  withSendFailure,
  withSession,
  withSystemReply,
} from "./state.js";
import { renderSessionList, renderTracePanel, renderTranscript, TraceView } from "./render.js";

const SESSION_KEY = "zerotod_session";

export interface AppHandles {
  view: () => ChatView;
  send: (text: string) => Promise<void>;
  inspect: (turn: number) => Promise<void>;
  ready: Promise<void>;
}

export function mountApp(root: Document, api: ChatApi): AppHandles {
  const transcript = root.getElementById("transcript") as HTMLElement;
  const panel = root.getElementById("trace-panel") as HTMLElement;
  const sessionList = root.getElementById("session-list") as HTMLElement;
  const form = root.getElementById("composer") as HTMLFormElement;
  const input = root.getElementById("message-input") as HTMLInputElement;
  const sendButton = root.getElementById("send-button") as HTMLButtonElement;

  let view = initialView();
  let traceData: TraceView | null = null;
  let traceMissing = false;

  function render(): void {
    renderTranscript(transcript, view);
    renderTracePanel(panel, view, traceData, traceMissing);
    sendButton.disabled = view.busy || input.value.trim() === "";
    input.disabled = view.busy;
  }

  function setView(next: ChatView): void {
    view = next;
    render();
  }

  async function refreshSessions(): Promise<void> {
    const sessions = await api.listSessions();
    renderSessionList(sessionList, sessions.map((s) => s.id), view.sessionId);
  }

  async function boot(): Promise<void> {
    const stored = root.defaultView?.localStorage.getItem(SESSION_KEY) ?? null;
    if (stored) {
      const sessions = await api.listSessions();
      const mine = sessions.find((s) => s.id === stored);
      if (mine) {
        setView(restoreFromContext(view, mine.id, mine.context));
        await refreshSessions();
        return;
      }
    }
    const id = await api.createSession();
    root.defaultView?.localStorage.setItem(SESSION_KEY, id);
    setView(withSession(view, id));
    await refreshSessions();
  }

  async function send(text: string): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed || view.busy || !view.sessionId) return;
    const turn = nextTurnIndex(view);
    setView(withOptimisticUser(view, trimmed));
    try {
      const reply = await api.sendMessage(view.sessionId, trimmed);
      setView(withSystemReply(view, reply.turn, reply.response));
    } catch (err) {
      if (err instanceof ServiceError && err.code === "SESSION_BUSY") {
        setView(withBusyRejected(view, turn));
      } else {
        const reason = err instanceof Error ? err.message : String(err);
        setView(withSendFailure(view, turn, reason));
      }
    }
  }

  async function inspect(turn: number): Promise<void> {
    traceData = null;
    traceMissing = false;
    setView(selectTurn(view, turn));
    if (!view.sessionId) return;
    try {
      traceData = await api.fetchTrace(view.sessionId, turn);
    } catch (err) {
      if (err instanceof ServiceError && err.status === 404) {
        traceMissing = true;
      } else {
        traceMissing = true;
      }
    }
    render();
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value;
    input.value = "";
    void send(text);
  });
  input.addEventListener("input", () => {
    sendButton.disabled = view.busy || input.value.trim() === "";
  });
  transcript.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("inspect")) {
      void inspect(Number(target.dataset.turn));
    } else if (target.classList.contains("retry")) {
      const text = target.dataset.retryText ?? "";
      view = {
        ...view,
        messages: view.messages.filter(
          (m) => !(m.speaker === "USER" && m.turn === Number(target.dataset.retryTurn) && m.failed),
        ),
      };
      void send(text);
    }
  });
  panel.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("raw-toggle")) {
      setView(toggleRaw(view));
    } else if (target.classList.contains("round-header")) {
      setView(toggleStep(view, Number(target.dataset.stepIndex)));
    } else if (target.classList.contains("refresh") && view.selectedTurn !== null) {
      void inspect(view.selectedTurn);
    }
  });

  const ready = boot().then(render);
  return { view: () => view, send, inspect, ready };
}

declare global {
  interface Window {
    zerotodApp?: AppHandles;
  }
}

if (typeof document !== "undefined" && document.getElementById("transcript") && !window.zerotodApp) {
  window.zerotodApp = mountApp(document, new ChatApi(""));
}
