/**
 * WebSocket transport for one session.
 *
 * Wraps a browser-style WebSocket (anything exposing `onopen` /
 * `onmessage` / `onclose` / `send` / `close`), parses `wire_v1`
 * envelopes, and reconnects with capped backoff until told to stop.
 * The constructor takes the socket factory so tests and headless
 * drivers can supply a Node implementation.
 */

import { inputMessage, parseEnvelope } from "./wire.js";
import type { Envelope, InputAction } from "./wire.js";

export interface BrowserStyleSocket {
  // Handler parameters are typed loosely so both the browser WebSocket
  // and Node implementations structurally satisfy this interface.
  /* eslint-disable @typescript-eslint/no-explicit-any */
  onopen: ((event: any) => void) | null;
  onmessage: ((event: any) => void) | null;
  onclose: ((event: any) => void) | null;
  onerror: ((event: any) => void) | null;
  /* eslint-enable @typescript-eslint/no-explicit-any */
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => BrowserStyleSocket;

export interface SessionSocketOptions {
  url: string;
  factory: SocketFactory;
  onFrame: (frame: Envelope) => void;
  onStatus?: (connected: boolean) => void;
  /** Reconnect on unexpected close (default true). */
  reconnect?: boolean;
}

const BACKOFF_START_MS = 500;
const BACKOFF_MAX_MS = 15000;

export class SessionSocket {
  private socket: BrowserStyleSocket | null = null;
  private stopped = false;
  private backoff = BACKOFF_START_MS;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(private readonly options: SessionSocketOptions) {}

  connect(): void {
    this.stopped = false;
    this.open();
  }

  /** Close for good; no reconnect. */
  stop(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
    this.socket?.close();
    this.socket = null;
  }

  send(action: InputAction): void {
    this.socket?.send(inputMessage(action));
  }

  get connected(): boolean {
    return this.socket !== null;
  }

  private open(): void {
    const socket = this.options.factory(this.options.url);
    socket.onopen = () => {
      this.backoff = BACKOFF_START_MS;
      this.options.onStatus?.(true);
    };
    socket.onmessage = (event) => {
      this.options.onFrame(parseEnvelope(String(event.data)));
    };
    socket.onerror = () => {
      /* close follows; nothing to do */
    };
    socket.onclose = () => {
      if (this.socket === socket) this.socket = null;
      this.options.onStatus?.(false);
      if (!this.stopped && (this.options.reconnect ?? true)) {
        this.timer = setTimeout(() => this.open(), this.backoff);
        this.backoff = Math.min(this.backoff * 2, BACKOFF_MAX_MS);
      }
    };
    this.socket = socket;
  }
}
