// Message schema of the query service (see protocol.md at the repo root).

export type Semantics = "prov" | "prove";

export interface ChoiceRequest {
  kind: "choice_request";
  session: string;
  request: string;
  left: string;
  right: string;
}

export interface Solution {
  kind: "solution";
  session: string;
  // variable name -> pretty-printed term, in query source order
  bindings: Record<string, string>;
}

export interface FailureMsg {
  kind: "failure";
  session: string;
}

export interface IndeterminateMsg {
  kind: "indeterminate";
  session: string;
  reason: string;
}

export interface DoneMsg {
  kind: "done";
  session: string;
}

export interface ErrorMsg {
  kind: "error";
  message: string;
  session?: string;
}

export type ServerMessage =
  | ChoiceRequest
  | Solution
  | FailureMsg
  | IndeterminateMsg
  | DoneMsg
  | ErrorMsg;

export type ClientMessage =
  | { kind: "load_program"; program: string }
  | { kind: "start_query"; goal: string; semantics: Semantics }
  | { kind: "choice_response"; session: string; request: string; index: 0 | 1 }
  | { kind: "more"; session: string };

export function parseServerMessage(raw: string): ServerMessage | null {
  try {
    const msg = JSON.parse(raw);
    if (msg && typeof msg === "object" && typeof msg.kind === "string") {
      return msg as ServerMessage;
    }
  } catch {
    // fall through
  }
  return null;
}
