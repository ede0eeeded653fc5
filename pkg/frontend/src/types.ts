// Wire types mirroring the service's JSON Schemas.

export type PropertyKind =
  | "boolean"
  | "number"
  | "string"
  | "categorical"
  | "object"
  | "array"
  | "function"
  | "node";

export interface PropertySpec {
  name: string;
  kind: PropertyKind;
  required: boolean;
  default: unknown;
  allowed_values: Array<string | number | boolean> | null;
  description: string;
  element_schema: PropertySpec[] | null;
}

export interface ComponentSchema {
  component_name: string;
  has_children: boolean;
  properties: PropertySpec[];
  source_digest: string;
}

export interface ImpactScore {
  property: string;
  n: number;
  base: number;
  coefficient: number;
  impact: number;
  level: "High" | "Medium" | "Low";
  impactful: boolean;
  occurrences: Array<{ kind: string; span: [number, number]; snippet: string }>;
}

export interface Variation {
  name: string;
  description: string;
  properties: Record<string, unknown>;
}

export interface CoverageEntry {
  property: string;
  domain_classes: string[];
  observed_classes: string[];
  ratio: number;
  missing: string[];
  children: CoverageEntry[] | null;
}

export interface CoverageReport {
  entries: CoverageEntry[];
  aggregate: number;
  fully_covered: boolean;
}

export interface AnalyzeResponse {
  schema: ComponentSchema;
  impacts: ImpactScore[];
}

export interface GenerateResponse {
  accepted: Variation[];
  rejected: Array<{ config: unknown; reasons: string[] }>;
  coverage: CoverageReport;
}

export interface UpdateResponse {
  config: Variation;
  coverage: CoverageReport;
}

export interface VariationsListing {
  component: string;
  schema: ComponentSchema;
  impacts: ImpactScore[];
  variations: Variation[];
}
