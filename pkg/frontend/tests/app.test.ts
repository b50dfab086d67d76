// Eye-toggle behavior through the wired DOM, with fetch stubbed.
import { beforeEach, describe, expect, it, vi } from "vitest";

import exploratoryBundle from "./fixtures/exploratory.json";
import panelBundle from "./fixtures/panel.json";

function mount(): void {
  document.body.innerHTML = `
    <form id="search-form"><input id="search-input"><button type="submit">go</button></form>
    <p id="status"></p>
    <p id="error-banner" hidden></p>
    <div id="results"></div>`;
}

async function search(question: string): Promise<void> {
  const { wire } = await import("../src/main.js");
  wire();
  const input = document.getElementById("search-input") as HTMLInputElement;
  input.value = question;
  const form = document.getElementById("search-form")!;
  form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
  await vi.waitFor(() => {
    expect(document.querySelectorAll("#results .answer").length).toBe(1);
  });
}

function stubFetch(body: unknown, ok = true, status = 200): void {
  vi.stubGlobal(
    "fetch",
    vi.fn(async () => ({
      ok,
      status,
      json: async () => body,
      text: async () => JSON.stringify(body),
    })),
  );
}

describe("search page", () => {
  beforeEach(() => {
    vi.resetModules();
    vi.unstubAllGlobals();
    mount();
  });

  it("one click reveals the low-confidence candidates, a second hides them", async () => {
    stubFetch(exploratoryBundle);
    await search("reasons to attend to the web conference");

    const toggle = document.getElementById("low-confidence-toggle")!;
    expect(toggle).not.toBeNull();
    expect(document.querySelector(".low-confidence-list")).toBeNull();

    toggle.click();
    expect(document.querySelector(".low-confidence-list")).not.toBeNull();
    expect(
      document.querySelectorAll(".low-confidence-item").length,
    ).toBe((exploratoryBundle as { low_confidence: unknown[] }).low_confidence.length);

    document.getElementById("low-confidence-toggle")!.click();
    expect(document.querySelector(".low-confidence-list")).toBeNull();
  });

  it("omits the toggle when there is nothing to reveal", async () => {
    stubFetch(panelBundle);
    await search("What's the capital of Italy?");
    expect(document.getElementById("low-confidence-toggle")).toBeNull();
  });

  it("shows an error banner and keeps the previous view on malformed bundles", async () => {
    stubFetch(panelBundle);
    await search("What's the capital of Italy?");
    expect(document.querySelector(".entity-label")!.textContent).toBe("Rome");

    stubFetch({ nonsense: true });
    const input = document.getElementById("search-input") as HTMLInputElement;
    input.value = "another question";
    document
      .getElementById("search-form")!
      .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await vi.waitFor(() => {
      const banner = document.getElementById("error-banner")!;
      expect(banner.hidden).toBe(false);
    });
    expect(document.getElementById("error-banner")!.textContent).toContain(
      "malformed answer bundle",
    );
    // previous panel still on screen
    expect(document.querySelector(".entity-label")!.textContent).toBe("Rome");
  });
});
