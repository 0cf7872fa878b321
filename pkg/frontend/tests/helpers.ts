/** Shared scaffolding for the UI tests: a frame queue with awaitable
 * reads, a scripted transport, wire-frame builders matching the
 * server's payload shapes, and a live-server harness that runs the
 * real Python service as a child process. */

import { spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { basename, dirname, join } from "node:path";
import WebSocket from "ws";

import type {
  Envelope,
  InputAction,
  OptionsPayload,
  ResultPayload,
  StatePayload,
} from "../src/wire.js";

// --- deterministic frame builders (shapes mirror docs/wire_v1.md) ---

let seqCounter = 0;

export function resetSeq(): void {
  seqCounter = 0;
}

export function frame(kind: Envelope["kind"], payload: unknown): Envelope {
  seqCounter += 1;
  return { v: "wire_v1", kind, seq: seqCounter, payload } as Envelope;
}

export function nongameState(overrides: Partial<StatePayload> = {}): StatePayload {
  return {
    session_id: "s-test",
    version: "nongame",
    status: "active",
    story: "",
    story_word_count: 0,
    turns_completed: 0,
    holding: false,
    ...overrides,
  };
}

export function gameState(overrides: Partial<StatePayload> = {}): StatePayload {
  return {
    session_id: "s-test",
    version: "game",
    status: "active",
    story: "",
    story_word_count: 0,
    turns_completed: 0,
    holding: false,
    phase: "paused",
    map_size: 15,
    lives: 3,
    turn: 0,
    snake: {
      body: [
        [7, 7],
        [6, 7],
        [5, 7],
      ],
      heading: "right",
    },
    candies: [
      { kind: 2, slot: 0, position: [3, 11], inert: false },
      { kind: 4, slot: 1, position: [12, 2], inert: false },
    ],
    obstacles: [],
    eaten: {},
    snake_length: 3,
    self_write_open: false,
    pause_remaining_ms: 25000,
    tick_interval_ms: 167,
    ...overrides,
  };
}

export function optionsPayload(a = "Low option.", b = "High option."): OptionsPayload {
  return {
    options: [
      { slot: 0, temperature: 0.6, text: a },
      { slot: 1, temperature: 1.4, text: b },
    ],
  };
}

// --- transport fakes ---

export class RecordingTransport {
  sent: InputAction[] = [];
  send(action: InputAction): void {
    this.sent.push(action);
  }
}

// --- async helpers ---

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function waitFor(
  condition: () => boolean,
  what: string,
  timeoutMs = 15000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (condition()) return;
    await sleep(20);
  }
  throw new Error(`timed out waiting for ${what}`);
}

/** Awaitable FIFO of wire frames. */
export class FrameQueue {
  private frames: Envelope[] = [];
  private waiters: ((frame: Envelope) => void)[] = [];
  all: Envelope[] = [];

  push(frame: Envelope): void {
    this.all.push(frame);
    const waiter = this.waiters.shift();
    if (waiter !== undefined) waiter(frame);
    else this.frames.push(frame);
  }

  async next(timeoutMs = 15000): Promise<Envelope> {
    const queued = this.frames.shift();
    if (queued !== undefined) return queued;
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error("timed out waiting for a frame")),
        timeoutMs,
      );
      this.waiters.push((frame) => {
        clearTimeout(timer);
        resolve(frame);
      });
    });
  }
}

// --- live service harness ---

/** The repository root, whether vitest runs from frontend/ or the
 * repository checkout itself. */
function repoRoot(): string {
  const cwd = process.cwd();
  return basename(cwd) === "frontend" ? dirname(cwd) : cwd;
}

export interface LiveService {
  baseUrl: string;
  wsUrl(sessionId: string): string;
  stop(): Promise<void>;
}

export async function startService(): Promise<LiveService> {
  const port = 20000 + Math.floor(Math.random() * 20000);
  const logDir = mkdtempSync(join(tmpdir(), "snake-ui-"));
  const child: ChildProcess = spawn(
    "python3",
    [
      "-m",
      "snake_story.cli",
      "serve",
      "--port",
      String(port),
      "--offline",
      "--log-dir",
      logDir,
    ],
    { cwd: repoRoot(), stdio: ["ignore", "pipe", "pipe"] },
  );
  let stderr = "";
  child.stderr?.on("data", (chunk: Buffer) => {
    stderr += chunk.toString();
  });

  const baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 30000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early:\n${stderr}`);
    }
    try {
      const response = await fetch(`${baseUrl}/healthz`);
      if (response.ok) break;
    } catch {
      /* not up yet */
    }
    if (Date.now() > deadline) {
      child.kill();
      throw new Error(`service never became healthy:\n${stderr}`);
    }
    await sleep(100);
  }

  return {
    baseUrl,
    wsUrl: (sessionId: string) =>
      `ws://127.0.0.1:${port}/sessions/${sessionId}/ws`,
    stop: () =>
      new Promise<void>((resolve) => {
        child.once("exit", () => resolve());
        child.kill("SIGTERM");
        setTimeout(() => {
          child.kill("SIGKILL");
          resolve();
        }, 5000).unref();
      }),
  };
}

export async function createSession(
  service: LiveService,
  body: Record<string, unknown>,
): Promise<string> {
  const response = await fetch(`${service.baseUrl}/sessions`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (response.status !== 201) {
    throw new Error(`create failed: ${response.status} ${await response.text()}`);
  }
  const data = (await response.json()) as { session_id: string };
  return data.session_id;
}

/** Node WebSocket with the browser-style handler surface the app's
 * socket wrapper expects. */
export function nodeSocketFactory(url: string): WebSocket {
  return new WebSocket(url);
}
