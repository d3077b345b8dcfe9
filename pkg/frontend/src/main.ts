// Single-page client: program editor, query box with a semantics toggle, a
// choice dialog for & decisions, a bindings table, status banners and the
// session event timeline. All logic semantics live server-side; this page
// only folds protocol messages into view state (timeline.ts) and renders.

import { Connection, SocketFactory } from "./client.js";
import type { Semantics } from "./protocol.js";
import {
  UiState,
  applyClient,
  applyServer,
  choiceToSend,
  initialState,
} from "./timeline.js";

const DEFAULT_PROGRAM = `% two burger sets; the side dish is the restaurant's pick
hburger.
fburger.
coke.
onion.
hset :- hburger , coke , (onion ; cone).
fset :- fburger , coke , (onion ; cone).
`;

export interface AppOptions {
  url?: string;
  makeSocket?: SocketFactory;
}

export interface AppHandle {
  state(): UiState;
  dispose(): void;
}

export function mountApp(root: HTMLElement, options: AppOptions = {}): AppHandle {
  const url = options.url ?? `ws://${location.host}/ws`;
  root.innerHTML = `
    <div class="app">
      <div class="banner banner-conn" id="conn-banner" hidden>
        connection lost <button id="reconnect">reconnect</button>
      </div>
      <section class="panel">
        <h2>Program</h2>
        <textarea id="program" rows="10" spellcheck="false"></textarea>
        <button id="load">load program</button>
      </section>
      <section class="panel">
        <h2>Query</h2>
        <input id="goal" placeholder="hset &amp; fset" />
        <select id="semantics">
          <option value="prove" selected>prove (interactive &amp;)</option>
          <option value="prov">prov (classical, never asks)</option>
        </select>
        <button id="run">run</button>
        <button id="more" hidden>more</button>
      </section>
      <section class="panel dialog" id="dialog" hidden>
        <h2>Your choice</h2>
        <p>Pick the operand to pursue; the other is checked silently.</p>
        <button class="choice" id="choice-0" data-index="0"></button>
        <button class="choice" id="choice-1" data-index="1"></button>
      </section>
      <section class="panel">
        <h2>Result</h2>
        <div id="status" class="status"></div>
        <table id="bindings" hidden><tbody></tbody></table>
        <div id="last-error" class="banner banner-error" hidden></div>
      </section>
      <section class="panel">
        <h2>Timeline</h2>
        <ol id="timeline"></ol>
      </section>
    </div>`;

  const el = <T extends HTMLElement>(id: string): T =>
    root.querySelector(`#${id}`) as T;
  const programBox = el<HTMLTextAreaElement>("program");
  const goalBox = el<HTMLInputElement>("goal");
  const semanticsBox = el<HTMLSelectElement>("semantics");
  programBox.value = DEFAULT_PROGRAM;

  let state: UiState = initialState;
  let disposed = false;

  const connect = () =>
    new Connection(
      url,
      {
        onServer(msg) {
          state = applyServer(state, msg);
          render();
        },
        onOpen() {
          el("conn-banner").hidden = true;
        },
        onClose() {
          if (!disposed) {
            el("conn-banner").hidden = false;
          }
        },
      },
      options.makeSocket,
    );
  let connection = connect();

  function send(msg: ReturnType<typeof choiceToSend>): void {
    if (!msg) {
      return;
    }
    connection.send(msg);
    state = applyClient(state, msg);
    render();
  }

  el("load").addEventListener("click", () => {
    send({ kind: "load_program", program: programBox.value });
  });
  el("run").addEventListener("click", () => {
    const goal = goalBox.value.trim();
    if (goal) {
      send({ kind: "start_query", goal, semantics: semanticsBox.value as Semantics });
    }
  });
  el("more").addEventListener("click", () => {
    if (state.session && state.canMore) {
      send({ kind: "more", session: state.session });
    }
  });
  for (const index of [0, 1] as const) {
    el(`choice-${index}`).addEventListener("click", () => {
      send(choiceToSend(state, index));
    });
  }
  el("reconnect").addEventListener("click", () => {
    connection = connect();
  });

  function render(): void {
    const dialog = el("dialog");
    dialog.hidden = state.pending === null;
    if (state.pending) {
      el("choice-0").textContent = `[0] ${state.pending.left}`;
      el("choice-1").textContent = `[1] ${state.pending.right}`;
    }

    const status = el("status");
    status.className = `status status-${state.status}`;
    status.textContent = {
      idle: "",
      running: "running...",
      solved: "yes.",
      failed: "no.",
      indeterminate: "unknown. (a search limit fired; not a disproof)",
    }[state.status];

    const table = el<HTMLTableElement>("bindings");
    const body = table.querySelector("tbody") as HTMLTableSectionElement;
    body.innerHTML = "";
    table.hidden = !state.bindings || state.bindings.length === 0;
    for (const [name, term] of state.bindings ?? []) {
      const row = body.insertRow();
      row.insertCell().textContent = name;
      row.insertCell().textContent = term;
    }

    const err = el("last-error");
    err.hidden = state.lastError === null;
    err.textContent = state.lastError ?? "";

    el("more").hidden = !state.canMore;

    const list = el("timeline");
    list.innerHTML = "";
    for (const entry of state.timeline) {
      const item = document.createElement("li");
      item.className = `tl tl-${entry.tone}`;
      item.textContent = `${entry.label}: ${entry.detail}`;
      list.appendChild(item);
    }
  }

  render();
  return {
    state: () => state,
    dispose() {
      disposed = true;
      connection.close();
    },
  };
}

if (typeof document !== "undefined" && typeof location !== "undefined") {
  const appRoot = document.getElementById("app");
  if (appRoot) {
    mountApp(appRoot);
  }
}
