// Chat view state and its pure transitions. The view is a function of server
// responses plus local input; no pipeline logic lives client-side.

export type Speaker = "USER" | "SYSTEM";

export interface Message {
  speaker: Speaker;
  text: string;
  turn: number;
  pending?: boolean;
  failed?: string;
}

export interface TracePanel {
  raw: boolean;
  expanded: Record<number, boolean>;
}

export interface ChatView {
  sessionId: string | null;
  messages: Message[];
  selectedTurn: number | null;
  tracePanel: TracePanel;
  busy: boolean;
  notice: string | null;
}

export function initialView(): ChatView {
  return {
    sessionId: null,
    messages: [],
    selectedTurn: null,
    tracePanel: { raw: false, expanded: {} },
    busy: false,
    notice: null,
  };
}

export function withSession(view: ChatView, sessionId: string): ChatView {
  return { ...view, sessionId };
}

export function nextTurnIndex(view: ChatView): number {
  return view.messages.filter((m) => m.speaker === "USER").length;
}

export function withOptimisticUser(view: ChatView, text: string): ChatView {
  const turn = nextTurnIndex(view);
  return {
    ...view,
    busy: true,
    notice: null,
    messages: [...view.messages, { speaker: "USER", text, turn, pending: true }],
  };
}

export function withSystemReply(view: ChatView, turn: number, text: string): ChatView {
  const messages = view.messages.map((m) =>
    m.speaker === "USER" && m.turn === turn ? { ...m, pending: false } : m,
  );
  return {
    ...view,
    busy: false,
    messages: [...messages, { speaker: "SYSTEM", text, turn }],
  };
}

export function withSendFailure(view: ChatView, turn: number, reason: string): ChatView {
  const messages = view.messages.map((m) =>
    m.speaker === "USER" && m.turn === turn ? { ...m, pending: false, failed: reason } : m,
  );
  return { ...view, busy: false, messages };
}

export function withBusyRejected(view: ChatView, turn: number): ChatView {
  // 409: the server is still processing; drop the optimistic bubble and tell the user.
  const messages = view.messages.filter((m) => !(m.speaker === "USER" && m.turn === turn && m.pending));
  return { ...view, busy: false, notice: "still processing the previous message", messages };
}

export function withNotice(view: ChatView, notice: string | null): ChatView {
  return { ...view, notice };
}

export function selectTurn(view: ChatView, turn: number | null): ChatView {
  return { ...view, selectedTurn: turn, tracePanel: { raw: view.tracePanel.raw, expanded: {} } };
}

export function toggleRaw(view: ChatView): ChatView {
  return { ...view, tracePanel: { ...view.tracePanel, raw: !view.tracePanel.raw } };
}

export function toggleStep(view: ChatView, index: number): ChatView {
  const expanded = { ...view.tracePanel.expanded, [index]: !view.tracePanel.expanded[index] };
  return { ...view, tracePanel: { ...view.tracePanel, expanded } };
}

export function restoreFromContext(
  view: ChatView,
  sessionId: string,
  context: [string, string][],
): ChatView {
  const messages: Message[] = [];
  let turn = -1;
  for (const [speaker, text] of context) {
    if (speaker === "USER") turn += 1;
    messages.push({ speaker: speaker as Speaker, text, turn: Math.max(turn, 0) });
  }
  return { ...initialView(), sessionId, messages };
}
