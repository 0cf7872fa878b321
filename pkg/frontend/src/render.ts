/**
 * DOM rendering: the page is rebuilt from {@link ViewState} on every
 * frame, so the screen is a pure function of server-acknowledged
 * state.  Buttons carry `data-action` attributes and are handled by
 * event delegation in main.ts — no listeners live inside the rebuilt
 * tree.
 *
 * Layout, game version: board on the left with life points at its
 * bottom-left; story on the right; the countdown bar sits between the
 * story and the two option texts; the own-text input appears under
 * the options once a blue candy unlocked it.  Non-game version: story
 * above two option panels with select buttons, the own-text input
 * beside them, and the End button underneath.  Ended sessions show
 * the result page: snake length, story length, per-kind candy counts.
 */

import { kindName } from "./wire.js";
import type { CandyView, OptionEntry, StatePayload } from "./wire.js";
import { isEnded, isGame, optionsUsable } from "./view.js";
import type { ViewState } from "./view.js";

/** Fig.-6-named palette; one visually distinct color per candy kind id. */
export const KIND_COLORS: readonly string[] = [
  "#f4f1e8", // white
  "#1d1d1f", // black
  "#d1362f", // red
  "#3fa34d", // green
  "#2f6fdb", // blue
  "#e8c22e", // yellow
];

export const BOARD_BG = "#a9b29b";
const BOARD_GRID = "#98a18b";
const OBSTACLE_COLOR = "#56504a";
const SNAKE_BODY = "#3e6b4f";
const SNAKE_HEAD = "#27513a";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function hearts(lives: number): string {
  return lives > 0 ? "♥".repeat(Math.min(lives, 12)) : "—";
}

function optionPanel(
  entry: OptionEntry,
  usable: boolean,
  game: boolean,
): string {
  const kind = entry.kind !== undefined ? kindName(entry.kind) : null;
  const badge =
    kind !== null
      ? `<span class="kind-dot kind-${kind}" title="${kind} candy"></span>`
      : "";
  const temp =
    entry.temperature !== undefined
      ? `<span class="temp">T=${entry.temperature}</span>`
      : "";
  const button = game
    ? "" // in the game version options are taken by eating, not clicking
    : `<button class="option-select" data-action="choose-${entry.slot}"
         ${usable ? "" : "disabled"}>Select</button>`;
  return `<div class="option" data-slot="${entry.slot}">
    <header>${badge}Option ${entry.slot + 1} ${temp}</header>
    <p class="option-text">${escapeHtml(entry.text)}</p>
    ${button}
  </div>`;
}

function optionsBlock(view: ViewState, game: boolean): string {
  const usable = optionsUsable(view);
  const entries = (view.options?.options ?? []).filter((o) => o.slot !== 2);
  const pending = view.awaitingTexts || view.state?.holding;
  const panels = entries.length
    ? entries.map((o) => optionPanel(o, usable, game)).join("\n")
    : `<p class="options-empty">${pending ? "Writing the next continuations…" : "No options yet."}</p>`;
  return `<div id="options" class="${usable ? "" : "options-pending"}">${panels}</div>`;
}

function selfWriteBlock(view: ViewState, open: boolean): string {
  if (!open) return "";
  const usable = optionsUsable(view);
  return `<div id="self-write">
    <label for="self-input">Or write your own continuation:</label>
    <input id="self-input" type="text" maxlength="400"
           placeholder="Your sentence…" ${usable ? "" : "disabled"} />
    <button id="self-commit" data-action="commit-self" ${usable ? "" : "disabled"}>
      Add to story
    </button>
  </div>`;
}

function storyBlock(state: StatePayload | null): string {
  const story = state?.story ?? "";
  const words = state?.story_word_count ?? 0;
  return `<section id="story-panel">
    <h2>The story so far</h2>
    <p id="story-text">${story ? escapeHtml(story) : "<em>…is unwritten.</em>"}</p>
    <footer id="story-words">${words} words</footer>
  </section>`;
}

function countdownBlock(view: ViewState): string {
  const state = view.state;
  if (!state || state.phase !== "paused" || view.pause === null) return "";
  const total = view.pause.self_write
    ? Math.max(view.pause.seconds, 1)
    : Math.max(view.pause.seconds, 1);
  const remaining = (state.pause_remaining_ms ?? total * 1000) / 1000;
  const percent = Math.max(0, Math.min(100, (remaining / total) * 100));
  return `<div id="countdown" data-action="end-pause"
       title="Click to end the pause early" data-remaining="${remaining.toFixed(1)}">
    <div id="countdown-fill" style="width: ${percent.toFixed(1)}%"></div>
    <span id="countdown-label">${remaining.toFixed(0)}s — click to start moving</span>
  </div>`;
}

function eventLine(viewFeedEntry: ViewState["feed"][number]): string {
  const e = viewFeedEntry;
  const bits: string[] = [e.type.replace(/_/g, " ")];
  if (e.kind !== null) bits.push(kindName(e.kind));
  if (e.cause !== null) bits.push(`(${e.cause.replace(/_/g, " ")})`);
  if (e.count !== null) bits.push(`×${e.count}`);
  return `<li>${escapeHtml(bits.join(" "))}</li>`;
}

function gameLayout(view: ViewState): string {
  const state = view.state!;
  const size = state.map_size ?? 15;
  // The input field appears during the (longer) pause of a turn that
  // offers self-writing; committing fills the yellow candy's text.
  const selfOpen = Boolean(state.self_write_open) && state.phase === "paused";
  return `<div id="game-layout">
    <section id="board-side">
      <canvas id="board" width="${size * 30}" height="${size * 30}"
              data-map-size="${size}"></canvas>
      <div id="hp" title="life points">
        <span id="hp-hearts">${hearts(state.lives ?? 0)}</span>
        <span id="hp-count">${state.lives ?? 0} ${state.lives === 1 ? "life" : "lives"}</span>
      </div>
      <ul id="event-feed">${view.feed.map(eventLine).join("")}</ul>
    </section>
    <section id="story-side">
      ${storyBlock(state)}
      ${countdownBlock(view)}
      ${optionsBlock(view, true)}
      ${selfWriteBlock(view, selfOpen)}
      <p class="hint">Steer with the arrow keys or WASD; eat the candy
      carrying the continuation you want.</p>
    </section>
  </div>`;
}

function nongameLayout(view: ViewState): string {
  const usable = optionsUsable(view);
  return `<div id="nongame-layout">
    ${storyBlock(view.state)}
    ${optionsBlock(view, false)}
    ${selfWriteBlock(view, true)}
    <button id="end-button" data-action="end-story" ${isEnded(view) ? "disabled" : ""}>
      End
    </button>
  </div>`;
}

function resultPage(view: ViewState): string {
  const result = view.result!;
  const rows =
    result.candies_eaten !== null
      ? Object.entries(result.candies_eaten)
          .sort(([a], [b]) => Number(a) - Number(b))
          .map(
            ([id, count]) => `<li data-kind="${id}" data-count="${count}">
              <span class="kind-dot kind-${kindName(Number(id))}"></span>
              ${kindName(Number(id))}: ${count}
            </li>`,
          )
          .join("")
      : "";
  const gameRows =
    result.snake_length !== null
      ? `<p id="result-snake" data-snake-length="${result.snake_length}">
           Final snake length: <strong>${result.snake_length}</strong></p>
         <ul id="result-candies">${rows}</ul>`
      : "";
  return `<section id="result-page" data-story-words="${result.story_word_count}">
    <h2>The story of the snake has ended</h2>
    ${gameRows}
    <p id="result-words">Story length: <strong>${result.story_word_count}</strong> words</p>
    <article id="result-story">${escapeHtml(result.full_story)}</article>
    <button id="again-button" data-action="new-session">Write another</button>
  </section>`;
}

function banner(view: ViewState): string {
  if (view.lastError) {
    return `<div id="error-banner">${escapeHtml(view.lastError.message)}</div>`;
  }
  if (!view.connected && view.state !== null && !isEnded(view)) {
    return `<div id="error-banner">Connection lost — reconnecting…</div>`;
  }
  return "";
}

/** Rebuild the page from the view.  Keeps the self-text input's
 * in-progress value and focus across rebuilds. */
export function render(root: HTMLElement, view: ViewState): void {
  const previous = root.querySelector<HTMLInputElement>("#self-input");
  const draft = previous?.value ?? "";
  const hadFocus = previous !== null && document.activeElement === previous;

  let body: string;
  if (view.state === null) {
    body = `<p id="connecting">Connecting…</p>`;
  } else if (isEnded(view) && view.result !== null) {
    body = resultPage(view);
  } else if (isGame(view)) {
    body = gameLayout(view);
  } else {
    body = nongameLayout(view);
  }
  root.innerHTML = `${banner(view)}${body}`;

  const input = root.querySelector<HTMLInputElement>("#self-input");
  if (input !== null && draft) input.value = draft;
  if (input !== null && hadFocus) input.focus();

  const canvas = root.querySelector<HTMLCanvasElement>("#board");
  if (canvas !== null && view.state !== null) {
    drawBoard(canvas, view.state);
  }
}

/** Paint the grid, snake, candies, and obstacles.  Also stamps a
 * compact text signature of what was drawn onto the canvas element so
 * non-graphical environments can assert board content. */
export function drawBoard(canvas: HTMLCanvasElement, state: StatePayload): void {
  const size = state.map_size ?? 15;
  const body = state.snake?.body ?? [];
  const candies = state.candies ?? [];
  const obstacles = state.obstacles ?? [];
  canvas.setAttribute(
    "data-board",
    [
      `size=${size}`,
      `snake=${body.map(([x, y]) => `${x},${y}`).join(";")}`,
      `candies=${candies.map((c) => `${c.kind}@${c.position[0]},${c.position[1]}`).join(";")}`,
      `obstacles=${obstacles.map(([x, y]) => `${x},${y}`).join(";")}`,
    ].join(" "),
  );

  const ctx = canvas.getContext("2d");
  if (ctx === null) return; // headless DOM without canvas support
  const tile = canvas.width / size;

  ctx.fillStyle = BOARD_BG;
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = BOARD_GRID;
  ctx.lineWidth = 1;
  for (let i = 1; i < size; i++) {
    ctx.beginPath();
    ctx.moveTo(i * tile, 0);
    ctx.lineTo(i * tile, canvas.height);
    ctx.moveTo(0, i * tile);
    ctx.lineTo(canvas.width, i * tile);
    ctx.stroke();
  }

  ctx.fillStyle = OBSTACLE_COLOR;
  for (const [x, y] of obstacles) {
    ctx.fillRect(x * tile + 1, y * tile + 1, tile - 2, tile - 2);
  }

  for (const candy of candies) {
    drawCandy(ctx, candy, tile);
  }

  body.forEach(([x, y], index) => {
    ctx.fillStyle = index === 0 ? SNAKE_HEAD : SNAKE_BODY;
    const inset = index === 0 ? 1 : 3;
    ctx.fillRect(
      x * tile + inset,
      y * tile + inset,
      tile - 2 * inset,
      tile - 2 * inset,
    );
  });
}

function drawCandy(
  ctx: CanvasRenderingContext2D,
  candy: CandyView,
  tile: number,
): void {
  const [x, y] = candy.position;
  const cx = (x + 0.5) * tile;
  const cy = (y + 0.5) * tile;
  ctx.beginPath();
  ctx.arc(cx, cy, tile * 0.36, 0, Math.PI * 2);
  ctx.fillStyle = KIND_COLORS[candy.kind] ?? "#ff00ff";
  if (candy.inert) ctx.globalAlpha = 0.45; // offered, no text committed yet
  ctx.fill();
  ctx.globalAlpha = 1;
  ctx.lineWidth = 1.5;
  ctx.strokeStyle = "#33322e"; // keeps the white candy visible
  ctx.stroke();
}
