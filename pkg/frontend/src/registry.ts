// Demo component registry: renderable stand-ins for the bundled fixture
// components. Each render function applies a variation's property values and
// returns a DOM subtree, so edits show up immediately without compiling any
// component source in the browser. Unknown components fall back to a
// schema-driven placeholder card.

import { el, mount } from "./dom.js";
import type { ComponentSchema } from "./types.js";

export type Props = Record<string, unknown>;
export type DemoRenderer = (props: Props) => HTMLElement;

function str(props: Props, key: string, fallback = ""): string {
  const value = props[key];
  return typeof value === "string" ? value : fallback;
}

function num(props: Props, key: string, fallback = 0): number {
  const value = props[key];
  return typeof value === "number" ? value : fallback;
}

function bool(props: Props, key: string, fallback = false): boolean {
  const value = props[key];
  return typeof value === "boolean" ? value : fallback;
}

function renderProductCard(props: Props): HTMLElement {
  const variant = str(props, "variant", "summary");
  const theme = str(props, "theme", "light");
  const borderStyle = str(props, "borderStyle", "solid");
  const imageUrl = str(props, "imageUrl");
  const root = el("div", `product-card ${theme} border-${borderStyle}`);
  if (variant === "detailed" && imageUrl) {
    const img = el("img");
    img.src = imageUrl;
    img.alt = str(props, "title");
    root.appendChild(img);
  }
  mount(root, el("h2", "", str(props, "title")));
  if (variant === "detailed") {
    mount(root, el("p", "price", `$${num(props, "price")}`));
  }
  if (bool(props, "showBadge")) {
    mount(root, el("span", "badge", "New"));
  }
  return root;
}

function renderWeatherCard(props: Props): HTMLElement {
  const condition = str(props, "condition", "sunny");
  const unit = str(props, "unit", "C");
  const root = el("div", `weather-card weather-${condition}`);
  const icons: Record<string, string> = {
    sunny: "☀️", cloudy: "☁️", rainy: "\u{1F327}️",
    snowy: "❄️", stormy: "⛈️",
  };
  mount(root, el("span", "weather-icon", icons[condition] ?? ""));
  mount(root, el("h2", "", str(props, "location")));
  mount(root, el("p", "temperature", `${num(props, "temperature")}°${unit}`));
  if (bool(props, "showHumidity", true)) {
    mount(root, el("p", "humidity", `Humidity ${num(props, "humidity")}%`));
  }
  const forecast = props.forecast;
  if (Array.isArray(forecast) && forecast.length > 0) {
    const list = el("ul", "forecast");
    for (const day of forecast) {
      const row = day as Props;
      const item = el("li");
      mount(item, el("span", "", str(row, "label")),
            el("span", "", `${num(row, "high")}° / ${num(row, "low")}°`));
      list.appendChild(item);
    }
    root.appendChild(list);
  }
  return root;
}

function renderProfileCard(props: Props): HTMLElement {
  const layout = str(props, "layout", "vertical");
  const root = el(
    "div",
    layout === "horizontal"
      ? "profile-card profile-card-row"
      : "profile-card profile-card-column",
  );
  const header = el("header", "profile-header");
  const avatarUrl = str(props, "avatarUrl");
  if (avatarUrl) {
    const img = el("img", "profile-avatar");
    img.src = avatarUrl;
    img.alt = str(props, "name");
    header.appendChild(img);
  }
  mount(header, el("h2", "", str(props, "name")));
  const badgeCount = num(props, "badgeCount");
  if (badgeCount > 0) {
    mount(header, el("span", "profile-badge", String(badgeCount)));
  }
  mount(header, el("p", "profile-role", str(props, "role")));
  root.appendChild(header);
  const bio = str(props, "bio");
  if (bio) {
    root.appendChild(el("p", "profile-bio", bio));
  }
  return root;
}

const REGISTRY: Record<string, DemoRenderer> = {
  ProductCard: renderProductCard,
  WeatherCard: renderWeatherCard,
  ProfileCard: renderProfileCard,
};

export function lookupRenderer(component: string): DemoRenderer | null {
  return REGISTRY[component] ?? null;
}

export function renderPlaceholder(
  schema: ComponentSchema,
  props: Props,
): HTMLElement {
  const root = el("div", "placeholder-card");
  mount(root, el("p", "placeholder-note",
                 `${schema.component_name} has no bundled demo renderer`));
  const table = el("table", "prop-table");
  for (const spec of schema.properties) {
    if (!(spec.name in props)) continue;
    const row = el("tr");
    mount(row, el("td", "prop-name", spec.name),
          el("td", "prop-value", JSON.stringify(props[spec.name])));
    table.appendChild(row);
  }
  root.appendChild(table);
  return root;
}

export function renderComponent(
  schema: ComponentSchema,
  props: Props,
): HTMLElement {
  const renderer = lookupRenderer(schema.component_name);
  if (renderer) return renderer(props);
  return renderPlaceholder(schema, props);
}
