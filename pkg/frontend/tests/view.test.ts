import { describe, expect, it, beforeEach } from "vitest";

import {
  applyFrame,
  initialView,
  isEnded,
  isGame,
  noteChoiceSent,
  optionsUsable,
  replayTranscript,
  FEED_LIMIT,
} from "../src/view.js";
import type { Envelope, EventPayload, ResultPayload } from "../src/wire.js";
import { frame, gameState, nongameState, optionsPayload, resetSeq } from "./helpers.js";

beforeEach(resetSeq);

describe("applyFrame", () => {
  it("folds state, options and pause frames into the view", () => {
    let view = initialView();
    view = applyFrame(view, frame("state", gameState()));
    view = applyFrame(view, frame("options", optionsPayload()));
    view = applyFrame(view, frame("pause", { seconds: 25, self_write: false }));

    expect(isGame(view)).toBe(true);
    expect(view.state?.lives).toBe(3);
    expect(view.options?.options).toHaveLength(2);
    expect(view.pause?.seconds).toBe(25);
    expect(isEnded(view)).toBe(false);
  });

  it("ignores frames whose seq does not advance", () => {
    let view = initialView();
    const first = frame("state", gameState({ lives: 3 }));
    view = applyFrame(view, first);
    const stale: Envelope = { ...frame("state", gameState({ lives: 1 })), seq: first.seq };
    view = applyFrame(view, stale);
    expect(view.state?.lives).toBe(3);
  });

  it("caps the event feed", () => {
    let view = initialView();
    for (let i = 0; i < FEED_LIMIT + 5; i++) {
      const payload: EventPayload = {
        type: "obstacles_added",
        kind: null,
        slot: null,
        cause: null,
        count: i,
        text: null,
      };
      view = applyFrame(view, frame("event", payload));
    }
    expect(view.feed).toHaveLength(FEED_LIMIT);
    expect(view.feed.at(-1)?.count).toBe(FEED_LIMIT + 4);
  });

  it("marks the session ended when the result frame lands", () => {
    let view = initialView();
    view = applyFrame(view, frame("state", nongameState()));
    const result: ResultPayload = {
      full_story: "A tale, and the story of the snake ends",
      story_word_count: 8,
      snake_length: null,
      candies_eaten: null,
      decision_times: [],
    };
    view = applyFrame(view, frame("result", result));
    expect(isEnded(view)).toBe(true);
    expect(view.result?.full_story).toMatch(/snake ends$/);
  });
});

describe("optionsUsable", () => {
  it("requires visible options and no pending generation", () => {
    let view = initialView();
    expect(optionsUsable(view)).toBe(false);

    view = applyFrame(view, frame("state", nongameState()));
    expect(optionsUsable(view)).toBe(false); // no options yet

    view = applyFrame(view, frame("options", optionsPayload()));
    expect(optionsUsable(view)).toBe(true);

    view = noteChoiceSent(view);
    expect(optionsUsable(view)).toBe(false); // choice sent, waiting

    view = applyFrame(view, frame("options", optionsPayload("Next low.", "Next high.")));
    expect(optionsUsable(view)).toBe(true); // fresh texts re-enable
  });

  it("stays unusable while the provider is retrying and after the end", () => {
    let view = initialView();
    view = applyFrame(view, frame("state", nongameState({ holding: true })));
    view = applyFrame(view, frame("options", optionsPayload()));
    expect(optionsUsable(view)).toBe(false);

    view = applyFrame(view, frame("state", nongameState({ status: "ended" })));
    expect(optionsUsable(view)).toBe(false);
  });

  it("clears the pending flag when the input is rejected", () => {
    let view = initialView();
    view = applyFrame(view, frame("state", nongameState()));
    view = applyFrame(view, frame("options", optionsPayload()));
    view = noteChoiceSent(view);
    view = applyFrame(view, frame("error", { code: "UsageError", message: "no" }));
    expect(optionsUsable(view)).toBe(true);
    expect(view.lastError?.code).toBe("UsageError");
  });
});

describe("replayTranscript", () => {
  it("equals the frame-by-frame fold", () => {
    const frames: Envelope[] = [
      frame("state", gameState()),
      frame("options", optionsPayload()),
      frame("pause", { seconds: 25, self_write: false }),
      frame("event", {
        type: "candy_eaten",
        kind: 4,
        slot: 1,
        cause: null,
        count: null,
        text: null,
      }),
      frame("state", gameState({ lives: 2, turn: 1 })),
    ];
    let folded = initialView();
    for (const one of frames) folded = applyFrame(folded, one);
    expect(replayTranscript(frames)).toEqual(folded);
  });
});
