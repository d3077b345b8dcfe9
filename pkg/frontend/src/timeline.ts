// Pure session-view state: everything the page shows is derived by folding
// sent and received messages through these reducers, so the timeline is the
// transcript, in order, by construction.

import type { ChoiceRequest, ClientMessage, ServerMessage } from "./protocol.js";

export type Tone = "info" | "ask" | "good" | "bad" | "warn";

export interface TimelineEntry {
  label: string;
  detail: string;
  tone: Tone;
}

export type Status = "idle" | "running" | "solved" | "failed" | "indeterminate";

export interface UiState {
  session: string | null;
  // the latest unanswered choice request; the only one a response may cite
  pending: ChoiceRequest | null;
  bindings: ReadonlyArray<readonly [string, string]> | null;
  status: Status;
  lastError: string | null;
  canMore: boolean;
  timeline: ReadonlyArray<TimelineEntry>;
}

export const initialState: UiState = {
  session: null,
  pending: null,
  bindings: null,
  status: "idle",
  lastError: null,
  canMore: false,
  timeline: [],
};

function push(state: UiState, entry: TimelineEntry): UiState {
  return { ...state, timeline: [...state.timeline, entry] };
}

export function applyClient(state: UiState, msg: ClientMessage): UiState {
  switch (msg.kind) {
    case "load_program":
      return push(state, { label: "load_program", detail: `${msg.program.length} chars`, tone: "info" });
    case "start_query":
      return push(
        { ...state, session: null, pending: null, bindings: null, status: "running", lastError: null, canMore: false },
        { label: "start_query", detail: `${msg.goal}  [${msg.semantics}]`, tone: "info" },
      );
    case "choice_response":
      return push(
        { ...state, pending: null, status: "running" },
        { label: "choice_response", detail: `${msg.request} -> ${msg.index}`, tone: "ask" },
      );
    case "more":
      return push(
        { ...state, bindings: null, status: "running", canMore: false },
        { label: "more", detail: msg.session, tone: "info" },
      );
  }
}

export function applyServer(state: UiState, msg: ServerMessage): UiState {
  switch (msg.kind) {
    case "choice_request":
      return push(
        { ...state, session: msg.session, pending: msg, status: "running" },
        { label: "choice_request", detail: `[0] ${msg.left}   [1] ${msg.right}`, tone: "ask" },
      );
    case "solution": {
      const bindings = Object.entries(msg.bindings) as ReadonlyArray<readonly [string, string]>;
      const detail = bindings.length
        ? bindings.map(([n, t]) => `${n} = ${t}`).join(", ")
        : "yes";
      return push(
        { ...state, session: msg.session, bindings, status: "solved", canMore: true },
        { label: "solution", detail, tone: "good" },
      );
    }
    case "failure":
      return push(
        { ...state, session: msg.session, status: "failed", canMore: false },
        { label: "failure", detail: "no", tone: "bad" },
      );
    case "indeterminate":
      return push(
        { ...state, session: msg.session, status: "indeterminate", canMore: false },
        { label: "indeterminate", detail: msg.reason, tone: "warn" },
      );
    case "done":
      return push(state, { label: "done", detail: msg.session, tone: "info" });
    case "error":
      // server error text is surfaced verbatim
      return push({ ...state, lastError: msg.message }, { label: "error", detail: msg.message, tone: "bad" });
  }
}

// Build the only legal answer to the pending request. Returns null when
// nothing is pending, so a stale click can never fabricate protocol state.
export function choiceToSend(state: UiState, index: 0 | 1): ClientMessage | null {
  if (!state.pending) {
    return null;
  }
  return {
    kind: "choice_response",
    session: state.pending.session,
    request: state.pending.request,
    index,
  };
}
