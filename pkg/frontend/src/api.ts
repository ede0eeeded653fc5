// Thin typed client over the explorer service. The UI never computes scores
// or coverage itself; every number displayed comes from these calls.

import type {
  AnalyzeResponse,
  CoverageReport,
  GenerateResponse,
  UpdateResponse,
  VariationsListing,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  violations: string[];

  constructor(status: number, message: string, violations: string[] = []) {
    super(message);
    this.status = status;
    this.violations = violations;
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let message = `${resp.status} ${resp.statusText}`;
  let violations: string[] = [];
  try {
    const body = await resp.json();
    if (typeof body.error === "string") message = body.error;
    if (Array.isArray(body.violations)) violations = body.violations;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(resp.status, message, violations);
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, init);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  analyze(source: string, filename: string): Promise<AnalyzeResponse> {
    return this.post("/api/analyze", { source, filename });
  }

  generate(
    component: string,
    count: number,
    instruction?: string,
  ): Promise<GenerateResponse> {
    const body: Record<string, unknown> = { component, count };
    if (instruction !== undefined && instruction !== "") {
      body.instruction = instruction;
    }
    return this.post("/api/generate", body);
  }

  coverage(component: string): Promise<CoverageReport> {
    return this.request(
      `/api/coverage?component=${encodeURIComponent(component)}`,
    );
  }

  listVariations(component: string): Promise<VariationsListing> {
    return this.request(`/api/variations/${encodeURIComponent(component)}`);
  }

  updateVariation(
    component: string,
    name: string,
    properties: Record<string, unknown>,
  ): Promise<UpdateResponse> {
    return this.request(
      `/api/variations/${encodeURIComponent(component)}/${encodeURIComponent(name)}`,
      {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ properties }),
      },
    );
  }

  async storyCode(component: string, name: string): Promise<string> {
    const resp = await fetch(
      `${this.baseUrl}/api/story/${encodeURIComponent(component)}/${encodeURIComponent(name)}`,
    );
    if (!resp.ok) throw await parseError(resp);
    return resp.text();
  }

  components(): Promise<{ components: string[]; stub: boolean }> {
    return this.request("/api/components");
  }
}
