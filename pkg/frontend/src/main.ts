/**
 * Browser entry point: a small lobby to create a session, then the
 * live view driven by the session WebSocket.  All state shown comes
 * from the server's frames; this file only wires transport to the
 * controller and animates the countdown bar between frames.
 */

import { App } from "./app.js";
import { SessionSocket } from "./socket.js";
import type { Envelope } from "./wire.js";

const root = document.getElementById("app")!;

function lobby(): void {
  root.innerHTML = `
    <section id="lobby">
      <h1>Snake Story</h1>
      <p>Co-write a story about a snake.  In the game version you steer
         a snake to the candy carrying the continuation you want; in the
         plain version you simply pick.</p>
      <label>Seed <input id="seed-input" type="number" value="${Math.floor(
        Math.random() * 100000,
      )}"></label>
      <button id="start-game">Play the game version</button>
      <button id="start-nongame">Write without the game</button>
    </section>`;
  document.getElementById("start-game")!.addEventListener("click", () => {
    void createSession("game");
  });
  document.getElementById("start-nongame")!.addEventListener("click", () => {
    void createSession("nongame");
  });
}

async function createSession(version: "game" | "nongame"): Promise<void> {
  const seedField = document.getElementById("seed-input") as HTMLInputElement;
  const seed = Number(seedField?.value ?? 0) || 0;
  const response = await fetch("/sessions", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ version, seed }),
  });
  if (!response.ok) {
    const body = (await response.json().catch(() => null)) as {
      error?: string;
    } | null;
    root.insertAdjacentHTML(
      "afterbegin",
      `<div id="error-banner">${body?.error ?? response.statusText}</div>`,
    );
    return;
  }
  const data = (await response.json()) as { session_id: string };
  const url = new URL(location.href);
  url.searchParams.set("session", data.session_id);
  history.replaceState(null, "", url);
  join(data.session_id);
}

function join(sessionId: string): void {
  const protocol = location.protocol === "https:" ? "wss:" : "ws:";
  const wsUrl = `${protocol}//${location.host}/sessions/${sessionId}/ws`;

  let countdownDeadline: number | null = null;

  const socket = new SessionSocket({
    url: wsUrl,
    factory: (url) => new WebSocket(url),
    onFrame: (frame: Envelope) => {
      app.handleFrame(frame);
      if (frame.kind === "pause" || frame.kind === "state") {
        const state = app.getView().state;
        if (state?.phase === "paused") {
          countdownDeadline =
            performance.now() + (state.pause_remaining_ms ?? 0);
        } else {
          countdownDeadline = null;
        }
      }
      if (frame.kind === "result") {
        socket.stop(); // the server closes after the result; don't reconnect
      }
    },
    onStatus: (connected) => app.handleConnection(connected),
  });

  const app = new App(root, socket, {
    onNewSession: () => {
      socket.stop();
      const url = new URL(location.href);
      url.searchParams.delete("session");
      history.replaceState(null, "", url);
      lobby();
    },
  });

  app.start();
  socket.connect();

  // Cosmetic: glide the countdown bar between server frames.  The bar
  // itself is rendered from server state; this only interpolates.
  const tick = (): void => {
    if (countdownDeadline !== null) {
      const fill = document.getElementById("countdown-fill");
      const label = document.getElementById("countdown-label");
      const bar = document.getElementById("countdown");
      const total = app.getView().pause
        ? app.getView().pause!.seconds * 1000
        : 0;
      if (fill && bar && total > 0) {
        const remaining = Math.max(0, countdownDeadline - performance.now());
        fill.style.width = `${((remaining / total) * 100).toFixed(1)}%`;
        if (label)
          label.textContent = `${Math.ceil(remaining / 1000)}s — click to start moving`;
      }
    }
    requestAnimationFrame(tick);
  };
  requestAnimationFrame(tick);
}

const existing = new URL(location.href).searchParams.get("session");
if (existing !== null) {
  join(existing);
} else {
  lobby();
}
