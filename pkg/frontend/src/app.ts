/**
 * The UI controller: folds incoming frames into the view, re-renders,
 * and translates DOM interactions into wire inputs.  It is given its
 * transport (anything with a `send`), so tests can drive it with a
 * scripted fake or over a live socket from Node.
 */

import { render } from "./render.js";
import {
  applyFrame,
  initialView,
  isEnded,
  noteChoiceSent,
  setConnected,
} from "./view.js";
import type { ViewState } from "./view.js";
import type { Envelope, InputAction } from "./wire.js";

export interface Transport {
  send(action: InputAction): void;
}

export interface AppHooks {
  /** "Write another" on the result page. */
  onNewSession?: () => void;
}

const KEY_DIRECTIONS: Record<string, "up" | "down" | "left" | "right"> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
  w: "up",
  s: "down",
  a: "left",
  d: "right",
  W: "up",
  S: "down",
  A: "left",
  D: "right",
};

export class App {
  private view: ViewState = initialView();
  private steerSentThisTick: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly transport: Transport,
    private readonly hooks: AppHooks = {},
  ) {}

  /** Attach delegated listeners and paint the initial screen. */
  start(): void {
    this.root.addEventListener("click", (event) => {
      const target = (event.target as HTMLElement).closest<HTMLElement>(
        "[data-action]",
      );
      if (target === null || target.hasAttribute("disabled")) return;
      this.handleAction(target.getAttribute("data-action")!);
    });
    const doc = this.root.ownerDocument;
    doc.addEventListener("keydown", (event) => this.handleKey(event));
    this.render();
  }

  getView(): ViewState {
    return this.view;
  }

  handleFrame(frame: Envelope): void {
    if (frame.kind === "state") this.steerSentThisTick = null;
    this.view = applyFrame(this.view, frame);
    this.render();
  }

  handleConnection(connected: boolean): void {
    this.view = setConnected(this.view, connected);
    this.render();
  }

  private render(): void {
    render(this.root, this.view);
  }

  private get version(): "game" | "nongame" | null {
    return this.view.state?.version ?? null;
  }

  private handleKey(event: KeyboardEvent): void {
    const direction = KEY_DIRECTIONS[event.key];
    if (direction === undefined) return;
    if (this.version !== "game" || isEnded(this.view)) return;
    const target = event.target as HTMLElement | null;
    if (target !== null && target.tagName === "INPUT") return;
    // Inputs render only what the server acknowledged: steering is
    // offered solely while the board says it is moving, and at most
    // one heading per tick goes out.
    if (this.view.state?.phase !== "moving") return;
    if (this.steerSentThisTick === direction) return;
    this.steerSentThisTick = direction;
    event.preventDefault();
    this.transport.send({ action: "steer", direction });
  }

  private handleAction(action: string): void {
    switch (action) {
      case "choose-0":
      case "choose-1": {
        const slot = action === "choose-0" ? 0 : 1;
        this.transport.send({ action: "choose_slot", slot });
        this.markGenerationPending();
        break;
      }
      case "commit-self": {
        const input = this.root.querySelector<HTMLInputElement>("#self-input");
        const text = input?.value.trim() ?? "";
        if (!text) return;
        this.transport.send({ action: "self_text", text });
        if (input) input.value = "";
        this.markGenerationPending();
        break;
      }
      case "end-story":
        this.transport.send({ action: "end_story" });
        this.markGenerationPending(); // the ending is being generated
        break;
      case "end-pause":
        this.transport.send({ action: "end_pause" });
        break;
      case "new-session":
        this.hooks.onNewSession?.();
        break;
    }
  }

  /** Non-game choices round-trip through text generation; disable the
   * option controls until the next `options` frame.  Game-version
   * inputs never regenerate texts mid-turn, so nothing is pending. */
  private markGenerationPending(): void {
    if (this.version !== "nongame") return;
    this.view = noteChoiceSent(this.view);
    this.render();
  }
}
