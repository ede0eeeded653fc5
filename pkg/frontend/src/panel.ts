// Side panel: sampling instruction box + count selector, and the coverage
// analysis that lists per-property ratios and unexplored values.

import { clear, el, mount } from "./dom.js";
import type { CoverageEntry, CoverageReport, ImpactScore } from "./types.js";

export function renderPanel(
  container: HTMLElement,
  coverage: CoverageReport | null,
  impacts: ImpactScore[],
  generating: boolean,
  onGenerate: (count: number, instruction: string) => void,
): void {
  clear(container);

  const form = el("form", "generate-form") as HTMLFormElement;
  const instruction = el("textarea", "instruction-box") as HTMLTextAreaElement;
  instruction.name = "instruction";
  instruction.placeholder =
    "Optional instruction, e.g. “dark, compact cards for a kitchen shop”";
  const countRow = el("div", "count-row");
  const count = el("select", "count-select") as HTMLSelectElement;
  count.name = "count";
  for (const n of [1, 2, 4, 6, 8, 12]) {
    const option = el("option", "", String(n)) as HTMLOptionElement;
    option.value = String(n);
    count.appendChild(option);
  }
  count.value = "4";
  const submit = el("button", "generate-button",
                    generating ? "Generating…" : "Generate") as HTMLButtonElement;
  submit.type = "submit";
  submit.disabled = generating;
  mount(countRow, el("span", "", "Count"), count, submit);
  mount(form, instruction, countRow);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (generating) return;
    onGenerate(Number(count.value), instruction.value.trim());
  });
  container.appendChild(form);

  const panel = el("section", "coverage-panel");
  mount(panel, el("h3", "", "Coverage Analysis"));
  if (coverage === null) {
    mount(panel, el("p", "coverage-empty", "Analyze a component to begin."));
  } else {
    mount(panel, coverageTable(coverage, impacts));
    const summary = el("p", "coverage-aggregate");
    summary.textContent = coverage.fully_covered
      ? "Design space fully covered."
      : `Aggregate coverage ${(coverage.aggregate * 100).toFixed(0)}%`;
    panel.appendChild(summary);
  }
  container.appendChild(panel);
}

function coverageTable(
  coverage: CoverageReport,
  impacts: ImpactScore[],
): HTMLElement {
  const impactful = new Set(
    impacts.filter((s) => s.impactful).map((s) => s.property),
  );
  const table = el("table", "coverage-table");
  for (const entry of coverage.entries) {
    table.appendChild(coverageRow(entry, entry.property,
                                  impactful.has(entry.property)));
    for (const child of entry.children ?? []) {
      table.appendChild(coverageRow(child,
                                    childPath(entry, child), false));
    }
  }
  return table;
}

function childPath(parent: CoverageEntry, child: CoverageEntry): string {
  if (child.property === "item") return `${parent.property}[]`;
  return `${parent.property}.${child.property}`;
}

function coverageRow(
  entry: CoverageEntry,
  label: string,
  impactful: boolean,
): HTMLElement {
  const row = el("tr",
                 entry.ratio >= 1 ? "coverage-row covered" : "coverage-row");
  row.dataset.property = label;
  const name = el("td", "coverage-name", impactful ? `${label} ★` : label);
  const ratio = el("td", "coverage-ratio", `${(entry.ratio * 100).toFixed(0)}%`);
  const missing = el("td", "coverage-missing",
                     entry.missing.length ? entry.missing.join("; ") : "—");
  mount(row, name, ratio, missing);
  return row;
}

export function renderBanner(
  container: HTMLElement,
  message: string | null,
  onDismiss: () => void,
): void {
  clear(container);
  if (message === null) return;
  const banner = el("div", "error-banner");
  mount(banner, el("span", "", message));
  const dismiss = el("button", "banner-dismiss", "×");
  dismiss.addEventListener("click", onDismiss);
  banner.appendChild(dismiss);
  container.appendChild(banner);
}
