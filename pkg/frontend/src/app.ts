// Composition root: wires the API client, the store, and the three views
// into one page. Overview and inspect swap within the same page so session
// state never reloads.

import { ApiClient, ApiError } from "./api.js";
import { DEMO_SOURCES } from "./demoSources.js";
import { clear, el, mount } from "./dom.js";
import { renderGallery } from "./gallery.js";
import { renderInspect } from "./inspect.js";
import { renderBanner, renderPanel } from "./panel.js";
import { Store } from "./state.js";

export class ExplorerApp {
  readonly store = new Store();
  private canvas!: HTMLElement;
  private side!: HTMLElement;
  private bannerHost!: HTMLElement;
  private header!: HTMLElement;

  constructor(
    readonly api: ApiClient,
    readonly root: HTMLElement,
  ) {}

  mount(): void {
    clear(this.root);
    this.header = el("header", "app-header");
    const main = el("main", "app-main");
    this.canvas = el("section", "app-canvas");
    this.side = el("aside", "app-side");
    this.bannerHost = el("div", "app-banner");
    mount(main, this.canvas, this.side);
    mount(this.root, this.header, this.bannerHost, main);
    this.store.subscribe(() => this.render());
    this.renderHeader();
    this.render();
  }

  private renderHeader(): void {
    clear(this.header);
    mount(this.header, el("h1", "app-title", "facet explorer"));
    const picker = el("div", "demo-picker");
    mount(picker, el("span", "", "Demo component:"));
    for (const name of Object.keys(DEMO_SOURCES)) {
      const button = el("button", "demo-button", name);
      button.addEventListener("click", () => void this.loadDemo(name));
      picker.appendChild(button);
    }
    this.header.appendChild(picker);
  }

  async loadDemo(name: string): Promise<void> {
    // Re-analyzing would replace the session and drop its variations, so an
    // existing session is reused as-is.
    try {
      let listing;
      try {
        listing = await this.api.listVariations(name);
      } catch (error) {
        if (!(error instanceof ApiError && error.status === 404)) throw error;
        await this.api.analyze(DEMO_SOURCES[name], `${name}.tsx`);
        listing = await this.api.listVariations(name);
      }
      const coverage = await this.api.coverage(name);
      this.store.update({
        component: name,
        schema: listing.schema,
        impacts: listing.impacts,
        variations: listing.variations,
        coverage,
        selected: null,
        showCode: false,
        storyCode: null,
        banner: null,
        editErrors: [],
      });
    } catch (error) {
      this.fail(error);
    }
  }

  async refresh(): Promise<void> {
    const { component } = this.store.state;
    if (component !== null) await this.loadDemo(component);
  }

  async generate(count: number, instruction: string): Promise<void> {
    const { component, generating } = this.store.state;
    if (component === null || generating) return;
    this.store.update({ generating: true });
    try {
      const result = await this.api.generate(
        component, count, instruction || undefined);
      const rejectedNote = result.rejected.length
        ? `${result.rejected.length} config(s) rejected: ` +
          result.rejected.map((r) => r.reasons.join("; ")).join(" | ")
        : null;
      this.store.update({
        generating: false,
        variations: [...this.store.state.variations, ...result.accepted],
        coverage: result.coverage,
        banner: rejectedNote,
      });
    } catch (error) {
      this.store.update({ generating: false });
      this.fail(error);
    }
  }

  async select(name: string): Promise<void> {
    this.store.update({ selected: name, showCode: false, storyCode: null,
                        editErrors: [] });
  }

  backToOverview(): void {
    this.store.update({ selected: null, showCode: false, storyCode: null,
                        editErrors: [] });
  }

  async toggleCode(): Promise<void> {
    const { component, selected, showCode } = this.store.state;
    if (component === null || selected === null) return;
    if (showCode) {
      this.store.update({ showCode: false });
      return;
    }
    try {
      const code = await this.api.storyCode(component, selected);
      this.store.update({ showCode: true, storyCode: code });
    } catch (error) {
      this.fail(error);
    }
  }

  async applyEdit(properties: Record<string, unknown>): Promise<void> {
    const { component, selected } = this.store.state;
    if (component === null || selected === null) return;
    try {
      const result = await this.api.updateVariation(
        component, selected, properties);
      const variations = this.store.state.variations.map((v) =>
        v.name === selected ? result.config : v);
      const patch: Record<string, unknown> = {
        variations, coverage: result.coverage, editErrors: [],
      };
      if (this.store.state.showCode) {
        patch.storyCode = await this.api.storyCode(component, selected);
      }
      this.store.update(patch);
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.store.update({ editErrors: error.violations });
        return;
      }
      this.fail(error);
    }
  }

  private fail(error: unknown): void {
    const message =
      error instanceof Error ? error.message : String(error);
    this.store.update({ banner: message });
  }

  private render(): void {
    const state = this.store.state;
    renderBanner(this.bannerHost, state.banner,
                 () => this.store.update({ banner: null }));
    renderPanel(this.side, state.coverage, state.impacts, state.generating,
                (count, instruction) => void this.generate(count, instruction));
    if (state.schema === null) {
      clear(this.canvas);
      mount(this.canvas,
            el("p", "canvas-empty", "Pick a demo component to explore."));
      return;
    }
    const selected = state.variations.find((v) => v.name === state.selected);
    if (selected !== undefined) {
      renderInspect(this.canvas, state.schema, selected, state.showCode,
                    state.storyCode, state.editErrors, {
                      onBack: () => this.backToOverview(),
                      onApply: (props) => void this.applyEdit(props),
                      onToggleCode: () => void this.toggleCode(),
                    });
    } else {
      renderGallery(this.canvas, state.schema, state.variations,
                    (name) => void this.select(name));
    }
  }
}
