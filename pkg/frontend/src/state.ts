// Single application state with change notification. Views re-render from
// state; all scores and coverage numbers inside it came from the service.

import type {
  ComponentSchema,
  CoverageReport,
  ImpactScore,
  Variation,
} from "./types.js";

export interface AppState {
  component: string | null;
  schema: ComponentSchema | null;
  impacts: ImpactScore[];
  variations: Variation[];
  coverage: CoverageReport | null;
  selected: string | null;
  showCode: boolean;
  storyCode: string | null;
  generating: boolean;
  banner: string | null;
  editErrors: string[];
}

export function initialState(): AppState {
  return {
    component: null,
    schema: null,
    impacts: [],
    variations: [],
    coverage: null,
    selected: null,
    showCode: false,
    storyCode: null,
    generating: false,
    banner: null,
    editErrors: [],
  };
}

export class Store {
  state: AppState = initialState();
  private listeners: Array<(state: AppState) => void> = [];

  subscribe(listener: (state: AppState) => void): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<AppState>): void {
    Object.assign(this.state, patch);
    for (const listener of this.listeners) listener(this.state);
  }
}
