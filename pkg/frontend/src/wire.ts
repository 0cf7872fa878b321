/**
 * Typed mirror of the `wire_v1` protocol (see docs/wire_v1.md).
 *
 * Every server message is an {@link Envelope}; the client sends
 * {@link InputMessage}s.  The UI renders exclusively from these
 * payloads — it holds no game rules of its own.
 */

export const WIRE_VERSION = "wire_v1";

// --- candy kinds (ids are stable and shared with the transcripts) ---

export const KIND_NAMES = [
  "white",
  "black",
  "red",
  "green",
  "blue",
  "yellow",
] as const;

export type KindName = (typeof KIND_NAMES)[number];

export function kindName(id: number): KindName {
  const name = KIND_NAMES[id];
  if (name === undefined) throw new Error(`unknown candy kind id ${id}`);
  return name;
}

// --- server -> client frames ---

export type FrameKind =
  | "state"
  | "options"
  | "pause"
  | "event"
  | "result"
  | "error";

export interface Envelope {
  v: typeof WIRE_VERSION;
  kind: FrameKind;
  seq: number;
  payload:
    | StatePayload
    | OptionsPayload
    | PausePayload
    | EventPayload
    | ResultPayload
    | ErrorPayload;
}

export interface SnakeView {
  body: [number, number][]; // head first, [x, y]
  heading: "up" | "down" | "left" | "right";
}

export interface CandyView {
  kind: number;
  slot: 0 | 1 | 2;
  position: [number, number];
  inert: boolean;
}

export interface StatePayload {
  session_id: string;
  version: "game" | "nongame";
  status: "active" | "ended";
  story: string;
  story_word_count: number;
  turns_completed: number;
  holding: boolean;
  // game sessions only:
  phase?: "awaiting_texts" | "paused" | "moving" | "ended";
  map_size?: number;
  lives?: number;
  turn?: number;
  snake?: SnakeView;
  candies?: CandyView[];
  obstacles?: [number, number][];
  eaten?: Record<string, number>;
  snake_length?: number;
  self_write_open?: boolean;
  pause_remaining_ms?: number;
  tick_interval_ms?: number;
}

export interface OptionEntry {
  slot: 0 | 1 | 2;
  text: string;
  temperature?: number; // slots 0 and 1
  kind?: number; // game sessions: the candy carrying this text
}

export interface OptionsPayload {
  options: OptionEntry[];
}

export interface PausePayload {
  seconds: number;
  self_write: boolean;
}

export interface EventPayload {
  type:
    | "candy_eaten"
    | "life_lost"
    | "life_gained"
    | "obstacles_added"
    | "self_write_unlocked"
    | "text_appended"
    | "game_ended";
  kind: number | null;
  slot: number | null;
  cause: "red_candy" | "wall_hit" | "self_hit" | "obstacle_hit" | null;
  count: number | null;
  text: string | null;
}

export interface ResultPayload {
  full_story: string;
  story_word_count: number;
  snake_length: number | null;
  candies_eaten: Record<string, number> | null;
  decision_times: number[];
}

export interface ErrorPayload {
  code: string;
  message: string;
}

export function parseEnvelope(raw: string): Envelope {
  const message = JSON.parse(raw) as Envelope;
  if (message.v !== WIRE_VERSION) {
    throw new Error(`unsupported wire version ${String(message.v)}`);
  }
  if (typeof message.seq !== "number" || typeof message.kind !== "string") {
    throw new Error("malformed envelope");
  }
  return message;
}

// --- client -> server messages ---

export type InputAction =
  | { action: "steer"; direction: "up" | "down" | "left" | "right" }
  | { action: "end_pause" }
  | { action: "self_text"; text: string }
  | { action: "choose_slot"; slot: 0 | 1 }
  | { action: "end_story" }
  | { action: "advance" };

export interface InputMessage {
  kind: "input";
  payload: InputAction;
}

export function inputMessage(action: InputAction): string {
  return JSON.stringify({ kind: "input", payload: action } as InputMessage);
}
