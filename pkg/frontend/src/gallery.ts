// Visual overview: every generated variation rendered on one canvas.

import { clear, el, mount } from "./dom.js";
import { renderComponent } from "./registry.js";
import type { ComponentSchema, Variation } from "./types.js";

export function renderGallery(
  container: HTMLElement,
  schema: ComponentSchema,
  variations: Variation[],
  onSelect: (name: string) => void,
): void {
  clear(container);
  const grid = el("div", "gallery-grid");
  for (const variation of variations) {
    grid.appendChild(galleryCard(schema, variation, onSelect));
  }
  if (variations.length === 0) {
    mount(container,
          el("p", "gallery-empty",
             "No variations yet. Use the panel to generate some."));
  }
  container.appendChild(grid);
}

function galleryCard(
  schema: ComponentSchema,
  variation: Variation,
  onSelect: (name: string) => void,
): HTMLElement {
  const card = el("article", "gallery-card");
  card.dataset.variation = variation.name;
  const header = el("header", "gallery-card-header");
  mount(header, el("strong", "gallery-card-name", variation.name));
  if (variation.description) {
    mount(header, el("span", "gallery-card-description", variation.description));
  }
  const body = el("div", "gallery-card-body");
  body.appendChild(renderComponent(schema, variation.properties));
  mount(card, header, body);
  card.addEventListener("click", () => onSelect(variation.name));
  return card;
}
