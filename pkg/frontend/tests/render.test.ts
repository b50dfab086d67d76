import { describe, expect, it } from "vitest";

import { renderAnswer, renderLowConfidence } from "../src/render.js";
import { AnswerBundle } from "../src/types.js";

import panelBundle from "./fixtures/panel.json";
import panelTwcBundle from "./fixtures/panel_twc.json";
import gridBundle from "./fixtures/grid.json";
import mapBundle from "./fixtures/map.json";
import spanBundle from "./fixtures/span.json";
import exploratoryBundle from "./fixtures/exploratory.json";

const bundles = {
  panel: panelBundle as unknown as AnswerBundle,
  panelTwc: panelTwcBundle as unknown as AnswerBundle,
  grid: gridBundle as unknown as AnswerBundle,
  map: mapBundle as unknown as AnswerBundle,
  span: spanBundle as unknown as AnswerBundle,
  exploratory: exploratoryBundle as unknown as AnswerBundle,
};

describe("panel view", () => {
  it("shows every present enrichment field verbatim", () => {
    const view = renderAnswer(bundles.panel);
    const enrichment = bundles.panel.answers[0].enrichment!;
    expect(view.querySelector(".entity-label")!.textContent).toBe("Rome");
    expect(view.querySelector(".entity-description")!.textContent).toBe(
      enrichment.description,
    );
    expect(view.querySelector<HTMLImageElement>(".entity-image")!.src).toBe(
      enrichment.image,
    );
    const hrefs = [...view.querySelectorAll<HTMLAnchorElement>(".entity-links a")].map(
      (a) => a.getAttribute("href"),
    );
    expect(hrefs).toContain(enrichment.homepage);
    expect(hrefs).toContain(enrichment.sitelink);
    expect(view.querySelector(".entity-summary")!.textContent).toBe(enrichment.summary);
  });

  it("matches the golden snapshot", () => {
    expect(renderAnswer(bundles.panel).outerHTML).toMatchSnapshot();
    expect(renderAnswer(bundles.panelTwc).outerHTML).toMatchSnapshot();
  });
});

describe("grid view", () => {
  it("renders one cell per entity", () => {
    const view = renderAnswer(bundles.grid);
    const cells = view.querySelectorAll(".grid-cell");
    expect(cells.length).toBe(bundles.grid.answers.length);
    expect(cells.length).toBeGreaterThanOrEqual(2);
    const captions = [...view.querySelectorAll(".grid-caption")].map((c) => c.textContent);
    expect(captions).toContain("Alice Rivera");
  });

  it("matches the golden snapshot", () => {
    expect(renderAnswer(bundles.grid).outerHTML).toMatchSnapshot();
  });
});

describe("map view", () => {
  it("plots one marker per located entity with a popup", () => {
    const view = renderAnswer(bundles.map);
    const markers = view.querySelectorAll(".map-marker");
    expect(markers.length).toBe(3);
    const popups = [...view.querySelectorAll(".map-marker title")].map(
      (t) => t.textContent,
    );
    expect(popups.some((p) => p!.includes("Rio Cinema"))).toBe(true);
    const legend = [...view.querySelectorAll(".map-legend-entry")].map(
      (entry) => entry.textContent,
    );
    expect(legend.length).toBe(3);
    expect(legend.some((entry) => entry!.includes("51.549"))).toBe(true);
  });
});

describe("span view", () => {
  it("highlights exactly the answer substring", () => {
    const view = renderAnswer(bundles.span);
    const mark = view.querySelector(".span-highlight")!;
    expect(mark.textContent).toBe(bundles.span.answers[0].value);
    expect(mark.textContent).toBe("Lyon, France");
  });

  it("shows the full source paragraph and the deep link", () => {
    const view = renderAnswer(bundles.span);
    const source = bundles.span.answers[0].source!;
    expect(view.querySelector(".span-paragraph")!.textContent).toBe(source.paragraph);
    const anchor = view.querySelector<HTMLAnchorElement>(".view-span a")!;
    expect(anchor.href).toContain("#:~:text=");
    expect(anchor.href).toBe(source.deep_link);
  });

  it("matches the golden snapshot", () => {
    expect(renderAnswer(bundles.span).outerHTML).toMatchSnapshot();
  });
});

describe("exploratory view", () => {
  it("shows the no-answer notice", () => {
    const view = renderAnswer(bundles.exploratory);
    expect(view.querySelector(".no-answer-notice")!.textContent).toBe(
      "No confident answer.",
    );
    expect(view.querySelectorAll(".entity-card").length).toBe(0);
  });

  it("matches the golden snapshot", () => {
    expect(renderAnswer(bundles.exploratory).outerHTML).toMatchSnapshot();
  });
});

describe("unknown presentation", () => {
  it("falls back to a raw JSON panel", () => {
    const odd = { ...bundles.panel, presentation: "hologram" } as AnswerBundle;
    const view = renderAnswer(odd);
    expect(view.querySelector(".raw-json")).not.toBeNull();
    expect(view.querySelector(".raw-json")!.textContent).toContain("hologram");
  });
});

describe("low-confidence list", () => {
  it("renders each candidate with branch and score", () => {
    const list = renderLowConfidence(bundles.exploratory.low_confidence);
    const items = list.querySelectorAll(".low-confidence-item");
    expect(items.length).toBe(bundles.exploratory.low_confidence.length);
    const first = bundles.exploratory.low_confidence[0];
    expect(items[0].querySelector(".candidate-branch")!.textContent).toBe(first.branch);
    expect(items[0].querySelector(".candidate-score")!.textContent).toBe(
      first.score.toFixed(3),
    );
  });

  it("highlights candidate paragraphs when a source is present", () => {
    const withSource = bundles.exploratory.low_confidence.find((c) => c.source);
    expect(withSource).toBeDefined();
    const list = renderLowConfidence([withSource!]);
    expect(list.querySelector(".candidate-highlight")!.textContent).toBe(
      withSource!.source!.paragraph.slice(
        withSource!.source!.start_char,
        withSource!.source!.end_char,
      ),
    );
  });
});

describe("verbatim rendering", () => {
  it("performs no answer logic: every displayed value exists in the bundle", () => {
    for (const bundle of [bundles.panel, bundles.grid, bundles.span]) {
      const text = renderAnswer(bundle).textContent!;
      for (const answer of bundle.answers) {
        if (answer.label) expect(text).toContain(answer.label);
        if (answer.type === "span") expect(text).toContain(answer.value);
      }
    }
  });
});
