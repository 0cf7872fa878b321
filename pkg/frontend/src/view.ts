/**
 * View state: a pure fold over wire frames.
 *
 * The screen is a function of this state and nothing else, so
 * replaying a recorded frame transcript rebuilds the exact same final
 * page — the client adds no game rules of its own.  The only locally
 * sourced field is `awaitingTexts`, set when the player submits a
 * choice and cleared by the next `options` frame; it drives the
 * disabled state of the option controls while generation is pending.
 */

import type {
  Envelope,
  ErrorPayload,
  EventPayload,
  OptionsPayload,
  PausePayload,
  ResultPayload,
  StatePayload,
} from "./wire.js";

export interface ViewState {
  state: StatePayload | null;
  options: OptionsPayload | null;
  pause: PausePayload | null;
  result: ResultPayload | null;
  lastError: ErrorPayload | null;
  feed: EventPayload[]; // most recent last, capped
  lastSeq: number;
  awaitingTexts: boolean; // an input went out; next options not yet here
  connected: boolean;
}

export const FEED_LIMIT = 8;

export function initialView(): ViewState {
  return {
    state: null,
    options: null,
    pause: null,
    result: null,
    lastError: null,
    feed: [],
    lastSeq: 0,
    awaitingTexts: false,
    connected: false,
  };
}

/** Fold one server frame into the view.  Stale frames (seq not above
 * the last seen) are ignored so reconnect replays cannot regress the
 * screen. */
export function applyFrame(view: ViewState, frame: Envelope): ViewState {
  if (frame.seq <= view.lastSeq) return view;
  const next: ViewState = { ...view, lastSeq: frame.seq };
  switch (frame.kind) {
    case "state":
      next.state = frame.payload as StatePayload;
      break;
    case "options":
      next.options = frame.payload as OptionsPayload;
      next.awaitingTexts = false;
      next.lastError = null;
      break;
    case "pause":
      next.pause = frame.payload as PausePayload;
      break;
    case "event": {
      const feed = [...view.feed, frame.payload as EventPayload];
      next.feed = feed.slice(-FEED_LIMIT);
      break;
    }
    case "result":
      next.result = frame.payload as ResultPayload;
      next.awaitingTexts = false;
      break;
    case "error":
      next.lastError = frame.payload as ErrorPayload;
      next.awaitingTexts = false; // the input was rejected, not pending
      break;
  }
  return next;
}

/** Mark that a story-advancing input was sent: option controls stay
 * disabled until the next `options` frame lands. */
export function noteChoiceSent(view: ViewState): ViewState {
  return { ...view, awaitingTexts: true };
}

export function setConnected(view: ViewState, connected: boolean): ViewState {
  return { ...view, connected };
}

export function replayTranscript(frames: Envelope[]): ViewState {
  let view = initialView();
  for (const frame of frames) view = applyFrame(view, frame);
  return view;
}

// --- derived accessors the renderer uses ---

export function isGame(view: ViewState): boolean {
  return view.state?.version === "game";
}

export function isEnded(view: ViewState): boolean {
  return view.result !== null || view.state?.status === "ended";
}

/** Option buttons are usable only when texts are on screen and no
 * generation round-trip is in flight. */
export function optionsUsable(view: ViewState): boolean {
  return (
    !isEnded(view) &&
    !view.awaitingTexts &&
    view.options !== null &&
    view.state !== null &&
    !view.state.holding
  );
}
