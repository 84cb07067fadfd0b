// DOM view: buffer line, prediction strip, on-screen key grid, and a
// live keystroke-savings readout.  All state lives in the controller;
// this file only renders and forwards events.

import { KeyboardController, UiState, savingsRatio } from "./controller.js";

const KEY_ROWS = [
  "qwertyuiop".split(""),
  "asdfghjkl".split(""),
  ["ñ", ..."zxcvbnm".split(""), "'"],
];

export function mountKeyboard(root: HTMLElement, controller: KeyboardController): void {
  root.innerHTML = `
    <div class="kb-buffer" data-role="buffer"></div>
    <div class="kb-banner" data-role="banner" hidden></div>
    <div class="kb-strip" data-role="strip"></div>
    <div class="kb-grid" data-role="grid"></div>
    <div class="kb-meter" data-role="meter"></div>
  `;
  const buffer = root.querySelector<HTMLElement>('[data-role="buffer"]')!;
  const banner = root.querySelector<HTMLElement>('[data-role="banner"]')!;
  const strip = root.querySelector<HTMLElement>('[data-role="strip"]')!;
  const grid = root.querySelector<HTMLElement>('[data-role="grid"]')!;
  const meter = root.querySelector<HTMLElement>('[data-role="meter"]')!;

  for (const row of KEY_ROWS) {
    const rowEl = document.createElement("div");
    rowEl.className = "kb-row";
    for (const key of row) {
      rowEl.appendChild(makeKey(key, () => controller.keypress(key)));
    }
    grid.appendChild(rowEl);
  }
  const bottom = document.createElement("div");
  bottom.className = "kb-row";
  bottom.appendChild(makeKey("space", () => controller.keypress(" "), "kb-key-wide"));
  bottom.appendChild(makeKey("⌫", () => controller.backspace()));
  grid.appendChild(bottom);

  render(controller.state);

  function render(state: UiState): void {
    buffer.textContent = state.buffer.length > 0 ? state.buffer : " ";
    banner.hidden = state.banner === null;
    banner.textContent = state.banner ?? "";
    strip.replaceChildren(
      ...state.candidates.map((cand, i) => {
        const b = document.createElement("button");
        b.className = "kb-candidate";
        b.textContent = cand.display_text === " " ? "␣" : cand.display_text;
        b.title = `log prob ${cand.logprob.toFixed(2)}${cand.truncated ? " (cut off)" : ""}`;
        b.addEventListener("click", () => controller.selectCandidate(i));
        return b;
      }),
    );
    if (state.pendingRequest && state.candidates.length === 0) {
      const waiting = document.createElement("span");
      waiting.className = "kb-waiting";
      waiting.textContent = "…";
      strip.appendChild(waiting);
    }
    const ratio = savingsRatio(state);
    meter.textContent =
      `${state.keystrokesTyped} touches, ${state.keystrokesSaved} saved ` +
      `(${(ratio * 100).toFixed(0)}% savings)`;
  }

  controller.subscribe(render);
}

function makeKey(label: string, onPress: () => void, extraClass = ""): HTMLButtonElement {
  const b = document.createElement("button");
  b.className = `kb-key ${extraClass}`.trim();
  b.textContent = label;
  b.addEventListener("click", onPress);
  return b;
}
