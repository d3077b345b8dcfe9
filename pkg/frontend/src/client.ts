// Thin WebSocket wrapper. The socket constructor is injectable so tests can
// run the exact same code over the `ws` package instead of the browser's
// WebSocket.

import type { ClientMessage, ServerMessage } from "./protocol.js";
import { parseServerMessage } from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open" | "close" | "error", listener: () => void): void;
  addEventListener(type: "message", listener: (event: { data: unknown }) => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ConnectionHooks {
  onServer(msg: ServerMessage): void;
  onOpen?(): void;
  onClose?(): void;
}

export class Connection {
  private socket: SocketLike;
  private open = false;
  private queue: string[] = [];

  constructor(url: string, hooks: ConnectionHooks, makeSocket?: SocketFactory) {
    const factory = makeSocket ?? ((u: string) => new WebSocket(u) as unknown as SocketLike);
    this.socket = factory(url);
    this.socket.addEventListener("open", () => {
      this.open = true;
      for (const line of this.queue.splice(0)) {
        this.socket.send(line);
      }
      hooks.onOpen?.();
    });
    this.socket.addEventListener("close", () => {
      this.open = false;
      hooks.onClose?.();
    });
    this.socket.addEventListener("error", () => {
      // close follows; the close hook owns the banner
    });
    this.socket.addEventListener("message", (event: { data: unknown }) => {
      const msg = parseServerMessage(String(event.data));
      if (msg) {
        hooks.onServer(msg);
      }
    });
  }

  send(msg: ClientMessage): void {
    const line = JSON.stringify(msg);
    if (this.open) {
      this.socket.send(line);
    } else {
      this.queue.push(line);
    }
  }

  close(): void {
    this.socket.close();
  }
}
