"""Network service: sessions over a bidirectional JSON message stream.

One TCP port serves three things:

* raw connections speak newline-delimited JSON (one message per line);
* an HTTP GET with an ``Upgrade: websocket`` header is upgraded (RFC 6455)
  and then speaks the same JSON messages, one per text frame — this is how
  the browser UI connects;
* any other HTTP GET is answered from the static directory, when configured
  (the built UI), else 404.

Message kinds and payloads are documented in ``protocol.md`` at the repo
root. Unknown kinds, malformed JSON and out-of-order messages produce an
``error`` message, never a disconnect or a crash. Each connection hosts its
own program and up to ``session_cap`` sequential sessions; session and
request ids are deterministic per connection (``q1``, ``q2`` / ``r1`` ...),
so captured conversations replay byte-for-byte.

Engine work runs synchronously inside the connection handler: one session's
search is serialized by construction, connections interleave between
messages. Step limits keep a runaway query from monopolizing the loop.
"""

from __future__ import annotations

import argparse
import asyncio
import base64
import hashlib
import itertools
import json
import sys
from pathlib import Path
from typing import Optional

from .ast import Program, Var
from .engine import Limits
from .parser import ParseError, parse_goal, parse_program, pretty
from .session import (
    ChoiceRequested,
    Failed,
    Indeterminate,
    Session,
    SessionError,
    Solved,
    start,
)

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def _dump(msg: dict) -> str:
    return json.dumps(msg, separators=(", ", ": "), ensure_ascii=False)


class Connection:
    """Per-connection state and message dispatch (transport-agnostic)."""

    def __init__(self, limits: Limits, session_cap: int = 16):
        self.limits = limits
        self.session_cap = session_cap
        self.program = Program()
        self.sessions: dict[str, Session] = {}
        self._ids = itertools.count(1)

    def handle(self, line: str) -> list[dict]:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as err:
            return [self._error(f"malformed JSON: {err.msg}")]
        if not isinstance(msg, dict):
            return [self._error("message must be a JSON object")]
        kind = msg.get("kind")
        handler = getattr(self, f"_on_{kind}", None) if isinstance(kind, str) else None
        if handler is None:
            return [self._error(f"unknown message kind {kind!r}")]
        try:
            return handler(msg)
        except SessionError as err:
            return [self._error(str(err), msg.get("session"))]

    def _error(self, message: str, session: Optional[str] = None) -> dict:
        out = {"kind": "error", "message": message}
        if session is not None:
            out["session"] = session
        return out

    # -- client message kinds -------------------------------------------------

    def _on_load_program(self, msg: dict) -> list[dict]:
        text = msg.get("program")
        if not isinstance(text, str):
            return [self._error("load_program needs a string 'program'")]
        try:
            self.program = parse_program(text)
        except ParseError as err:
            return [self._error(f"parse error at {err}")]
        return []  # silence means loaded

    def _on_start_query(self, msg: dict) -> list[dict]:
        goal_text = msg.get("goal")
        if not isinstance(goal_text, str):
            return [self._error("start_query needs a string 'goal'")]
        semantics = msg.get("semantics", "prove")
        if semantics not in ("prov", "prove"):
            return [self._error(f"semantics must be 'prov' or 'prove', got {semantics!r}")]
        if len(self.sessions) >= self.session_cap:
            return [self._error(f"session cap ({self.session_cap}) reached on this connection")]
        try:
            goal = parse_goal(goal_text)
        except ParseError as err:
            return [self._error(f"parse error at {err}")]
        sid = f"q{next(self._ids)}"
        session = start(self.program, goal, semantics, self.limits)
        self.sessions[sid] = session
        return self._settle(sid, session.advance())

    def _on_choice_response(self, msg: dict) -> list[dict]:
        sid, session, err = self._find_session(msg)
        if err:
            return [err]
        index = msg.get("index")
        if index not in (0, 1):
            return [self._error(f"index must be 0 or 1, got {index!r}", sid)]
        request = msg.get("request")
        try:
            event = session.resolve_choice(request, index)
        except (SessionError, ValueError) as e:
            return [self._error(str(e), sid)]
        return self._settle(sid, event)

    def _on_more(self, msg: dict) -> list[dict]:
        sid, session, err = self._find_session(msg)
        if err:
            return [err]
        try:
            event = session.more()
        except SessionError as e:
            return [self._error(str(e), sid)]
        return self._settle(sid, event)

    # -- helpers ----------------------------------------------------------------

    def _find_session(self, msg: dict):
        sid = msg.get("session")
        session = self.sessions.get(sid) if isinstance(sid, str) else None
        if session is None:
            return sid, None, self._error(f"unknown session {sid!r}")
        return sid, session, None

    def _settle(self, sid: str, event) -> list[dict]:
        if isinstance(event, ChoiceRequested):
            return [{
                "kind": "choice_request",
                "session": sid,
                "request": event.request_id,
                "left": pretty(event.cp.left),
                "right": pretty(event.cp.right),
            }]
        if isinstance(event, Solved):
            bindings = {}
            for name, term in event.bindings:
                if name.startswith("_"):
                    continue
                if isinstance(term, Var) and term.name == name:
                    continue
                bindings[name] = pretty(term)
            return [
                {"kind": "solution", "session": sid, "bindings": bindings},
                {"kind": "done", "session": sid},
            ]
        if isinstance(event, Failed):
            return [
                {"kind": "failure", "session": sid},
                {"kind": "done", "session": sid},
            ]
        assert isinstance(event, Indeterminate)
        return [
            {"kind": "indeterminate", "session": sid, "reason": event.reason},
            {"kind": "done", "session": sid},
        ]


# -- websocket framing --------------------------------------------------------


async def _ws_read_message(reader: asyncio.StreamReader,
                           writer: asyncio.StreamWriter) -> Optional[str]:
    """One text message; answers pings, handles fragmentation, None on close."""
    parts: list[bytes] = []
    while True:
        head = await reader.readexactly(2)
        fin = head[0] & 0x80
        opcode = head[0] & 0x0F
        masked = head[1] & 0x80
        length = head[1] & 0x7F
        if length == 126:
            length = int.from_bytes(await reader.readexactly(2), "big")
        elif length == 127:
            length = int.from_bytes(await reader.readexactly(8), "big")
        key = await reader.readexactly(4) if masked else b""
        payload = await reader.readexactly(length) if length else b""
        if masked:
            payload = bytes(b ^ key[i % 4] for i, b in enumerate(payload))
        if opcode == 0x8:  # close
            return None
        if opcode == 0x9:  # ping
            writer.write(_ws_frame(payload, opcode=0xA))
            await writer.drain()
            continue
        if opcode == 0xA:  # pong
            continue
        if opcode in (0x1, 0x2, 0x0):
            parts.append(payload)
            if fin:
                return b"".join(parts).decode("utf-8", errors="replace")
            continue
        return None  # unknown opcode: treat as close


def _ws_frame(payload: bytes, opcode: int = 0x1) -> bytes:
    length = len(payload)
    if length < 126:
        head = bytes([0x80 | opcode, length])
    elif length < 1 << 16:
        head = bytes([0x80 | opcode, 126]) + length.to_bytes(2, "big")
    else:
        head = bytes([0x80 | opcode, 127]) + length.to_bytes(8, "big")
    return head + payload


def _ws_accept_key(key: str) -> str:
    digest = hashlib.sha1((key + _WS_GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


# -- HTTP bits ----------------------------------------------------------------


def _http_response(status: str, headers: dict[str, str], body: bytes = b"") -> bytes:
    lines = [f"HTTP/1.1 {status}"]
    headers.setdefault("Connection", "close")
    headers.setdefault("Content-Length", str(len(body)))
    lines.extend(f"{k}: {v}" for k, v in headers.items())
    return ("\r\n".join(lines) + "\r\n\r\n").encode("ascii") + body


def _serve_static(root: Optional[Path], path: str) -> bytes:
    if root is None:
        return _http_response("404 Not Found", {"Content-Type": "text/plain"}, b"no static root\n")
    rel = path.split("?", 1)[0].lstrip("/") or "index.html"
    target = (root / rel).resolve()
    if not str(target).startswith(str(root.resolve())) or not target.is_file():
        return _http_response("404 Not Found", {"Content-Type": "text/plain"}, b"not found\n")
    ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
    return _http_response("200 OK", {"Content-Type": ctype}, target.read_bytes())


# -- the server ---------------------------------------------------------------


class Server:
    def __init__(self, limits: Optional[Limits] = None, session_cap: int = 16,
                 static_root: Optional[Path] = None):
        self.limits = limits or Limits()
        self.session_cap = session_cap
        self.static_root = static_root

    async def handle_connection(self, reader: asyncio.StreamReader,
                                writer: asyncio.StreamWriter) -> None:
        try:
            first = await reader.readline()
            if not first:
                return
            text = first.decode("utf-8", errors="replace").rstrip("\r\n")
            if text.split(" ")[0] in ("GET", "POST", "PUT", "HEAD", "DELETE", "OPTIONS"):
                await self._handle_http(text, reader, writer)
            else:
                await self._handle_ndjson(text, reader, writer)
        except (asyncio.IncompleteReadError, ConnectionResetError):
            pass
        finally:
            writer.close()
            try:
                await writer.wait_closed()
            except (ConnectionResetError, BrokenPipeError):
                pass

    async def _handle_ndjson(self, first_line: str, reader: asyncio.StreamReader,
                             writer: asyncio.StreamWriter) -> None:
        conn = Connection(self.limits, self.session_cap)
        line: Optional[str] = first_line
        while line is not None:
            if line.strip():
                for reply in conn.handle(line):
                    writer.write((_dump(reply) + "\n").encode("utf-8"))
                await writer.drain()
            raw = await reader.readline()
            line = raw.decode("utf-8", errors="replace").rstrip("\r\n") if raw else None

    async def _handle_http(self, request_line: str, reader: asyncio.StreamReader,
                           writer: asyncio.StreamWriter) -> None:
        headers: dict[str, str] = {}
        while True:
            raw = await reader.readline()
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                break
            if ":" in line:
                k, v = line.split(":", 1)
                headers[k.strip().lower()] = v.strip()
        parts = request_line.split(" ")
        method, path = parts[0], parts[1] if len(parts) > 1 else "/"
        if headers.get("upgrade", "").lower() == "websocket" and "sec-websocket-key" in headers:
            accept = _ws_accept_key(headers["sec-websocket-key"])
            writer.write(
                b"HTTP/1.1 101 Switching Protocols\r\n"
                b"Upgrade: websocket\r\nConnection: Upgrade\r\n"
                + f"Sec-WebSocket-Accept: {accept}\r\n\r\n".encode("ascii")
            )
            await writer.drain()
            await self._handle_websocket(reader, writer)
            return
        if method != "GET":
            writer.write(_http_response("405 Method Not Allowed", {"Content-Type": "text/plain"},
                                        b"method not allowed\n"))
        else:
            writer.write(_serve_static(self.static_root, path))
        await writer.drain()

    async def _handle_websocket(self, reader: asyncio.StreamReader,
                                writer: asyncio.StreamWriter) -> None:
        conn = Connection(self.limits, self.session_cap)
        while True:
            try:
                message = await _ws_read_message(reader, writer)
            except (asyncio.IncompleteReadError, ConnectionResetError):
                return
            if message is None:
                writer.write(_ws_frame(b"", opcode=0x8))
                await writer.drain()
                return
            if not message.strip():
                continue
            for reply in conn.handle(message):
                writer.write(_ws_frame(_dump(reply).encode("utf-8")))
            await writer.drain()

    async def serve(self, bind: str, port: int) -> None:
        server = await asyncio.start_server(self.handle_connection, bind, port)
        actual = server.sockets[0].getsockname()
        print(f"listening on {actual[0]}:{actual[1]}", flush=True)
        async with server:
            await server.serve_forever()


def main(argv: Optional[list[str]] = None) -> int:
    p = argparse.ArgumentParser(prog="addprolog-serve",
                                description="Serve interactive query sessions over JSON messages.")
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8731)
    p.add_argument("--static", help="directory of built UI assets to serve over HTTP")
    p.add_argument("--limit-steps", type=int, default=Limits().steps, metavar="N")
    p.add_argument("--limit-depth", type=int, default=Limits().depth, metavar="N")
    p.add_argument("--session-cap", type=int, default=16, metavar="N")
    args = p.parse_args(argv)
    server = Server(Limits(steps=args.limit_steps, depth=args.limit_depth),
                    session_cap=args.session_cap,
                    static_root=Path(args.static) if args.static else None)
    try:
        asyncio.run(server.serve(args.bind, args.port))
    except OSError as err:
        sys.stderr.write(f"error: cannot bind {args.bind}:{args.port}: {err.strerror}\n")
        return 1
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
