import { fetchAnswer } from "./api.js";
import { renderAnswer, renderLowConfidence } from "./render.js";
import {
  ViewState,
  beginQuery,
  initialState,
  receiveBundle,
  receiveError,
  toggleLowConfidence,
} from "./state.js";

let state: ViewState = initialState();
let controller: AbortController | null = null;

function draw(): void {
  const results = document.getElementById("results")!;
  const banner = document.getElementById("error-banner")!;
  const status = document.getElementById("status")!;

  banner.textContent = state.error ?? "";
  banner.hidden = state.error === null;
  status.textContent = state.loading ? "Searching…" : "";

  if (state.error !== null) {
    return; // keep the previous view under the banner
  }
  results.replaceChildren();
  if (!state.bundle) return;
  results.appendChild(renderAnswer(state.bundle));

  if (state.bundle.low_confidence.length > 0) {
    const toggle = document.createElement("button");
    toggle.id = "low-confidence-toggle";
    toggle.className = "eye-toggle";
    toggle.textContent = state.lowConfidenceVisible
      ? "Hide low-confidence answers"
      : `👁 Show ${state.bundle.low_confidence.length} low-confidence answer(s)`;
    toggle.addEventListener("click", () => {
      state = toggleLowConfidence(state);
      draw();
    });
    results.appendChild(toggle);
    if (state.lowConfidenceVisible) {
      results.appendChild(renderLowConfidence(state.bundle.low_confidence));
    }
  }
}

async function submit(query: string): Promise<void> {
  const trimmed = query.trim();
  if (!trimmed) return;
  controller?.abort();
  controller = new AbortController();
  state = beginQuery(state, trimmed);
  draw();
  try {
    const bundle = await fetchAnswer(trimmed, "kg,text", controller.signal);
    state = receiveBundle(state, trimmed, bundle);
  } catch (error) {
    if ((error as Error).name === "AbortError") return;
    state = receiveError(state, trimmed, (error as Error).message);
  }
  draw();
}

export function wire(): void {
  const form = document.getElementById("search-form") as HTMLFormElement;
  const input = document.getElementById("search-input") as HTMLInputElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit(input.value);
  });
}

if (typeof document !== "undefined" && document.getElementById("search-form")) {
  wire();
}
