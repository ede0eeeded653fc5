// Inspect pane: the selected variation rendered in the center, its property
// values in an editor on the right, and a Show Code toggle that reveals the
// story snippet exactly as the service emits it.

import { clear, el, mount } from "./dom.js";
import { renderComponent } from "./registry.js";
import type { ComponentSchema, PropertySpec, Variation } from "./types.js";

export interface InspectCallbacks {
  onBack: () => void;
  onApply: (properties: Record<string, unknown>) => void;
  onToggleCode: () => void;
}

export function renderInspect(
  container: HTMLElement,
  schema: ComponentSchema,
  variation: Variation,
  showCode: boolean,
  storyCode: string | null,
  editErrors: string[],
  callbacks: InspectCallbacks,
): void {
  clear(container);
  const pane = el("div", "inspect-pane");

  const toolbar = el("div", "inspect-toolbar");
  const back = el("button", "inspect-back", "← Overview");
  back.addEventListener("click", callbacks.onBack);
  const toggle = el("button", "inspect-show-code",
                    showCode ? "Hide Code" : "Show Code");
  toggle.addEventListener("click", callbacks.onToggleCode);
  mount(toolbar, back,
        el("strong", "inspect-title", variation.name), toggle);

  const stage = el("div", "inspect-stage");
  const center = el("div", "inspect-render");
  center.appendChild(renderComponent(schema, variation.properties));
  const editor = buildEditor(schema, variation, editErrors, callbacks.onApply);
  mount(stage, center, editor);

  mount(pane, toolbar, stage);
  if (showCode) {
    const code = el("textarea", "inspect-code") as HTMLTextAreaElement;
    code.readOnly = true;
    code.value = storyCode ?? "";
    code.rows = Math.min(24, (storyCode ?? "").split("\n").length + 1);
    pane.appendChild(code);
  }
  container.appendChild(pane);
}

function buildEditor(
  schema: ComponentSchema,
  variation: Variation,
  editErrors: string[],
  onApply: (properties: Record<string, unknown>) => void,
): HTMLElement {
  const editor = el("form", "inspect-editor") as HTMLFormElement;
  const inputs = new Map<string, () => unknown>();

  for (const spec of schema.properties) {
    if (spec.kind === "node") continue;
    const row = el("label", "editor-row");
    mount(row, el("span", "editor-label", spec.name));
    const current = variation.properties[spec.name];
    const read = appendInput(row, spec, current);
    inputs.set(spec.name, read);
    const error = editErrors.find((v) => v.startsWith(`${spec.name}:`));
    if (error) {
      row.appendChild(el("span", "editor-error", error));
    }
    editor.appendChild(row);
  }
  for (const message of editErrors.filter((v) => !v.includes(":"))) {
    editor.appendChild(el("p", "editor-error", message));
  }

  const apply = el("button", "editor-apply", "Apply") as HTMLButtonElement;
  apply.type = "submit";
  editor.appendChild(apply);
  editor.addEventListener("submit", (event) => {
    event.preventDefault();
    const properties: Record<string, unknown> = {};
    for (const [name, read] of inputs) {
      const value = read();
      if (value !== undefined) properties[name] = value;
    }
    onApply(properties);
  });
  return editor;
}

function appendInput(
  row: HTMLElement,
  spec: PropertySpec,
  current: unknown,
): () => unknown {
  if (spec.kind === "boolean") {
    const box = el("input") as HTMLInputElement;
    box.type = "checkbox";
    box.name = spec.name;
    box.checked = current === true;
    row.appendChild(box);
    return () => box.checked;
  }
  if (spec.kind === "categorical") {
    const select = el("select") as HTMLSelectElement;
    select.name = spec.name;
    for (const allowed of spec.allowed_values ?? []) {
      const option = el("option", "", String(allowed)) as HTMLOptionElement;
      option.value = String(allowed);
      select.appendChild(option);
    }
    if (current !== undefined) select.value = String(current);
    row.appendChild(select);
    const values = spec.allowed_values ?? [];
    return () => values.find((v) => String(v) === select.value) ?? select.value;
  }
  if (spec.kind === "number") {
    const input = el("input") as HTMLInputElement;
    input.type = "number";
    input.step = "any";
    input.name = spec.name;
    if (typeof current === "number") input.value = String(current);
    row.appendChild(input);
    return () => (input.value === "" ? undefined : Number(input.value));
  }
  if (spec.kind === "object" || spec.kind === "array") {
    const area = el("textarea", "editor-json") as HTMLTextAreaElement;
    area.name = spec.name;
    area.value = current === undefined ? "" : JSON.stringify(current, null, 2);
    row.appendChild(area);
    return () => {
      if (area.value.trim() === "") return undefined;
      try {
        return JSON.parse(area.value);
      } catch {
        return area.value; // the service reports the type violation
      }
    };
  }
  const input = el("input") as HTMLInputElement;
  input.type = "text";
  input.name = spec.name;
  if (typeof current === "string") input.value = current;
  row.appendChild(input);
  return () => (input.value === "" && current === undefined
    ? undefined
    : input.value);
}
