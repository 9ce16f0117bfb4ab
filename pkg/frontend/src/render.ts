// DOM rendering: transcript bubbles and the trace inspector panel.
// Display only — every shown value comes from the server responses.

import type { TurnTrace } from "./api.js";
import type { ChatView } from "./state.js";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderTranscript(container: HTMLElement, view: ChatView): void {
  container.replaceChildren();
  for (const message of view.messages) {
    const bubble = el("div", `bubble ${message.speaker.toLowerCase()}`);
    bubble.dataset.turn = String(message.turn);
    bubble.dataset.speaker = message.speaker;
    bubble.appendChild(el("div", "bubble-text", message.text));
    if (message.pending) bubble.classList.add("pending");
    if (message.failed) {
      bubble.classList.add("failed");
      bubble.appendChild(el("div", "bubble-error", message.failed));
      const retry = el("button", "retry", "retry") as HTMLButtonElement;
      retry.dataset.retryText = message.text;
      retry.dataset.retryTurn = String(message.turn);
      bubble.appendChild(retry);
    }
    if (message.speaker === "SYSTEM") {
      const inspect = el("button", "inspect", "trace") as HTMLButtonElement;
      inspect.dataset.turn = String(message.turn);
      bubble.appendChild(inspect);
    }
    container.appendChild(bubble);
  }
  if (view.notice) container.appendChild(el("div", "notice", view.notice));
}

export interface TraceView {
  trace: TurnTrace;
  raw: string;
}

export function renderTracePanel(
  panel: HTMLElement,
  view: ChatView,
  data: TraceView | null,
  missing: boolean,
): void {
  panel.replaceChildren();
  if (view.selectedTurn === null) {
    panel.appendChild(el("div", "trace-empty", "select a turn to inspect"));
    return;
  }
  const heading = el("div", "trace-heading", `trace for turn ${view.selectedTurn}`);
  panel.appendChild(heading);
  if (missing) {
    const placeholder = el("div", "trace-missing", "trace not available");
    const refresh = el("button", "refresh", "refresh") as HTMLButtonElement;
    placeholder.appendChild(refresh);
    panel.appendChild(placeholder);
    return;
  }
  if (data === null) {
    panel.appendChild(el("div", "trace-loading", "loading..."));
    return;
  }

  const rawToggle = el("button", "raw-toggle", view.tracePanel.raw ? "show panel" : "show raw JSON");
  panel.appendChild(rawToggle);

  if (view.tracePanel.raw) {
    const pre = el("pre", "trace-raw");
    pre.textContent = data.raw;
    panel.appendChild(pre);
    return;
  }

  const { trace } = data;
  const proxy = el("section", "trace-proxy");
  proxy.appendChild(el("h3", "", "Proxy Belief State"));
  proxy.appendChild(el("p", "proxy-text", trace.proxy_bs));
  panel.appendChild(proxy);

  trace.steps.forEach((step, index) => {
    const card = el("section", `round-card verdict-${step.verdict.toLowerCase()}`);
    if (step.verdict === "NOT_FOUND") card.classList.add("flagged");
    const header = el("h4", "round-header", `Round ${index + 1} — ${step.verdict}`);
    header.dataset.stepIndex = String(index);
    card.appendChild(header);
    const body = el("div", "round-body");
    body.appendChild(el("div", "round-action", `Action: ${step.action}`));
    body.appendChild(el("div", "round-query", `Query: ${step.parsed_query ?? step.query_text}`));
    if (step.parse_error) {
      body.appendChild(el("div", "round-error", `Error: ${step.parse_error}`));
    }
    const rows = el("pre", "round-rows");
    rows.textContent = step.result_preview;
    body.appendChild(rows);
    body.appendChild(el("div", "round-verdict", `Verdict: ${step.verdict}`));
    if (view.tracePanel.expanded[index] === false) body.classList.add("collapsed");
    card.appendChild(body);
    panel.appendChild(card);
  });

  const outcome = el("section", "trace-outcome");
  outcome.appendChild(el("h3", "", "Final Info"));
  outcome.appendChild(
    el("p", "outcome-text", trace.outcome.status === "FULFILLED" ? trace.outcome.info : "(not found)"),
  );
  panel.appendChild(outcome);

  const response = el("section", "trace-response");
  response.appendChild(el("h3", "", "Response"));
  response.appendChild(el("p", "response-text", trace.response));
  panel.appendChild(response);
}

export function renderSessionList(container: HTMLElement, ids: string[], current: string | null): void {
  container.replaceChildren();
  for (const id of ids) {
    const item = el("li", id === current ? "session current" : "session", id);
    item.dataset.sessionId = id;
    container.appendChild(item);
  }
}
