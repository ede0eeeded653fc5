import { describe, expect, it } from "vitest";

import { lookupRenderer, renderComponent, renderPlaceholder } from "../src/registry.js";
import type { ComponentSchema } from "../src/types.js";

const SCHEMA: ComponentSchema = {
  component_name: "Mystery",
  has_children: false,
  properties: [
    { name: "label", kind: "string", required: true, default: null,
      allowed_values: null, description: "", element_schema: null },
    { name: "count", kind: "number", required: false, default: 3,
      allowed_values: null, description: "", element_schema: null },
  ],
  source_digest: "0".repeat(64),
};

describe("demo registry", () => {
  it("resolves every bundled demo component", () => {
    for (const name of ["ProductCard", "WeatherCard", "ProfileCard"]) {
      expect(lookupRenderer(name), name).not.toBeNull();
    }
  });

  it("ProductCard responds to theme, variant, and badge props", () => {
    const render = lookupRenderer("ProductCard")!;
    const dark = render({ title: "Mug", price: 9, theme: "dark",
                          variant: "detailed", showBadge: true,
                          imageUrl: "https://placehold.co/600x400" });
    expect(dark.className).toContain("dark");
    expect(dark.querySelector("img")).not.toBeNull();
    expect(dark.querySelector(".price")!.textContent).toBe("$9");
    expect(dark.querySelector(".badge")).not.toBeNull();

    const light = render({ title: "Mug", price: 9, variant: "summary" });
    expect(light.className).toContain("light");
    expect(light.querySelector("img")).toBeNull();
    expect(light.querySelector(".price")).toBeNull();
    expect(light.querySelector(".badge")).toBeNull();
  });

  it("WeatherCard renders condition icon and forecast rows", () => {
    const render = lookupRenderer("WeatherCard")!;
    const node = render({ condition: "snowy", location: "Oslo",
                          temperature: -4, unit: "C", humidity: 80,
                          forecast: [{ label: "Mon", high: 1, low: -6 }] });
    expect(node.className).toContain("weather-snowy");
    expect(node.querySelector("h2")!.textContent).toBe("Oslo");
    expect(node.querySelectorAll(".forecast li")).toHaveLength(1);
  });

  it("ProfileCard switches layout class", () => {
    const render = lookupRenderer("ProfileCard")!;
    const row = render({ name: "Ada", role: "Engineer", layout: "horizontal" });
    expect(row.className).toContain("profile-card-row");
    const column = render({ name: "Ada", role: "Engineer" });
    expect(column.className).toContain("profile-card-column");
  });

  it("unknown components fall back to a schema-driven prop table", () => {
    const node = renderComponent(SCHEMA, { label: "hi", count: 2 });
    expect(node.className).toContain("placeholder-card");
    const cells = [...node.querySelectorAll(".prop-name")].map(
      (c) => c.textContent);
    expect(cells).toEqual(["label", "count"]);
  });

  it("placeholder only lists assigned properties", () => {
    const node = renderPlaceholder(SCHEMA, { label: "hi" });
    expect(node.querySelectorAll("tr")).toHaveLength(1);
  });
});
