import {
  Answer,
  AnswerBundle,
  Enrichment,
  LowConfidenceCandidate,
} from "./types.js";

// All renderers build DOM nodes directly; every displayed string comes
// verbatim from the bundle.

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function link(href: string, text: string): HTMLAnchorElement {
  const anchor = el("a", "external-link", text);
  anchor.href = href;
  anchor.target = "_blank";
  anchor.rel = "noopener";
  return anchor;
}

function entityCard(answer: Answer): HTMLElement {
  const card = el("article", "entity-card");
  card.appendChild(el("h2", "entity-label", answer.label ?? answer.value));
  const enrichment: Enrichment = answer.enrichment ?? {};
  if (enrichment.image) {
    const img = el("img", "entity-image");
    img.src = enrichment.image;
    img.alt = answer.label ?? answer.value;
    card.appendChild(img);
  }
  if (enrichment.description) {
    card.appendChild(el("p", "entity-description", enrichment.description));
  }
  const links = el("p", "entity-links");
  if (enrichment.homepage) links.appendChild(link(enrichment.homepage, "home page"));
  if (enrichment.sitelink) links.appendChild(link(enrichment.sitelink, "site page"));
  links.appendChild(link(answer.value, "knowledge graph"));
  card.appendChild(links);
  if (enrichment.summary) {
    card.appendChild(el("p", "entity-summary", enrichment.summary));
  }
  return card;
}

function renderPanel(bundle: AnswerBundle): HTMLElement {
  const panel = el("div", "view view-panel");
  for (const answer of bundle.answers) {
    panel.appendChild(entityCard(answer));
  }
  return panel;
}

function renderGrid(bundle: AnswerBundle): HTMLElement {
  const grid = el("div", "view view-grid");
  for (const answer of bundle.answers) {
    const cell = el("figure", "grid-cell");
    if (answer.enrichment?.image) {
      const img = el("img", "grid-image");
      img.src = answer.enrichment.image;
      img.alt = answer.label ?? answer.value;
      cell.appendChild(img);
    }
    cell.appendChild(el("figcaption", "grid-caption", answer.label ?? answer.value));
    grid.appendChild(cell);
  }
  return grid;
}

function renderMap(bundle: AnswerBundle): HTMLElement {
  const view = el("div", "view view-map");
  const located = bundle.answers.filter((a) => a.enrichment?.coordinates);
  const lats = located.map((a) => a.enrichment!.coordinates!.lat);
  const lons = located.map((a) => a.enrichment!.coordinates!.lon);
  const pad = 0.01;
  const minLat = Math.min(...lats) - pad;
  const maxLat = Math.max(...lats) + pad;
  const minLon = Math.min(...lons) - pad;
  const maxLon = Math.max(...lons) + pad;

  const svgNS = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(svgNS, "svg");
  svg.setAttribute("class", "map-canvas");
  svg.setAttribute("viewBox", "0 0 400 300");
  for (const answer of located) {
    const { lat, lon } = answer.enrichment!.coordinates!;
    const x = ((lon - minLon) / (maxLon - minLon)) * 380 + 10;
    const y = 300 - (((lat - minLat) / (maxLat - minLat)) * 280 + 10);
    const marker = document.createElementNS(svgNS, "circle");
    marker.setAttribute("class", "map-marker");
    marker.setAttribute("cx", x.toFixed(1));
    marker.setAttribute("cy", y.toFixed(1));
    marker.setAttribute("r", "6");
    const popup = document.createElementNS(svgNS, "title");
    popup.textContent = `${answer.label ?? answer.value} (${lat}, ${lon})`;
    marker.appendChild(popup);
    svg.appendChild(marker);
  }
  view.appendChild(svg);
  const legend = el("ul", "map-legend");
  for (const answer of located) {
    const { lat, lon } = answer.enrichment!.coordinates!;
    legend.appendChild(el("li", "map-legend-entry",
      `${answer.label ?? answer.value} — ${lat}, ${lon}`));
  }
  view.appendChild(legend);
  return view;
}

function renderSpan(bundle: AnswerBundle): HTMLElement {
  const view = el("div", "view view-span");
  const answer = bundle.answers[0];
  const source = answer?.source;
  if (answer && source) {
    const paragraph = el("p", "span-paragraph");
    paragraph.appendChild(
      document.createTextNode(source.paragraph.slice(0, source.start_char)),
    );
    const mark = el("mark", "span-highlight", source.paragraph.slice(source.start_char, source.end_char));
    paragraph.appendChild(mark);
    paragraph.appendChild(
      document.createTextNode(source.paragraph.slice(source.end_char)),
    );
    view.appendChild(paragraph);
    view.appendChild(link(source.deep_link, "open in page"));
  } else if (answer) {
    view.appendChild(el("p", "span-paragraph")).appendChild(
      el("mark", "span-highlight", answer.value),
    );
  }
  return view;
}

function renderExploratory(): HTMLElement {
  const view = el("div", "view view-exploratory");
  view.appendChild(el("p", "no-answer-notice", "No confident answer."));
  return view;
}

function renderRawJson(bundle: AnswerBundle): HTMLElement {
  const view = el("div", "view view-raw");
  view.appendChild(el("pre", "raw-json", JSON.stringify(bundle, null, 2)));
  return view;
}

const RENDERERS: Record<string, (bundle: AnswerBundle) => HTMLElement> = {
  panel: renderPanel,
  grid: renderGrid,
  map: renderMap,
  span: renderSpan,
  exploratory: () => renderExploratory(),
};

export function renderLowConfidence(candidates: LowConfidenceCandidate[]): HTMLElement {
  const list = el("ul", "low-confidence-list");
  for (const candidate of candidates) {
    const item = el("li", "low-confidence-item");
    item.appendChild(el("span", "candidate-branch", candidate.branch));
    item.appendChild(el("span", "candidate-score", candidate.score.toFixed(3)));
    if (candidate.source) {
      const paragraph = el("p", "candidate-paragraph");
      const src = candidate.source;
      paragraph.appendChild(document.createTextNode(src.paragraph.slice(0, src.start_char)));
      paragraph.appendChild(el("mark", "candidate-highlight",
        src.paragraph.slice(src.start_char, src.end_char)));
      paragraph.appendChild(document.createTextNode(src.paragraph.slice(src.end_char)));
      item.appendChild(paragraph);
    } else {
      item.appendChild(el("span", "candidate-value", candidate.value));
      if (candidate.interpretation) {
        item.appendChild(el("code", "candidate-interpretation", candidate.interpretation));
      }
    }
    list.appendChild(item);
  }
  return list;
}

export function renderAnswer(bundle: AnswerBundle): HTMLElement {
  const container = el("section", "answer");
  const header = el("p", "answer-meta",
    `${bundle.branch} · confidence ${bundle.confidence.toFixed(3)}`);
  container.appendChild(header);
  if (bundle.interpretation) {
    container.appendChild(el("code", "interpretation", bundle.interpretation));
  }
  const renderer = RENDERERS[bundle.presentation] ?? renderRawJson;
  container.appendChild(renderer(bundle));
  return container;
}
