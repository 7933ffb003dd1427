// API payload shapes, mirroring docs/api.md. The console renders these
// verbatim; it never recomputes fusion, risk, or engagement outcomes.

export interface OpinionJson {
  b: number;
  d: number;
  u: number;
  a: number;
}

export interface TrackJson {
  track_id: string;
  kind: string;
  location: { latitude: number; longitude: number; radius_m: number };
  opinion: OpinionJson;
  expectation: number;
  contributing: string[];
  last_update: string;
  status: string;
  subject: string;
}

export interface PictureSnapshot {
  version: number;
  tracks: TrackJson[];
  geojson: unknown;
}

export interface MessageAccepted {
  digest: string;
  entry_id: string;
  originator_id: string;
  anonymized: boolean;
}

export interface AuditEventJson {
  event: string;
  actor: string;
  time: string;
  signature: string;
  digest: string;
}

export interface AuditTrail {
  digest: string;
  events: AuditEventJson[];
}

export interface RouteJson {
  route_id: string;
  polyline: [number, number][];
}

export interface ThreatContributionJson {
  track_id: string;
  subject: string;
  severity: number;
  expectation: number;
  distance_km: number;
  contribution: number;
}

export interface RiskAssessmentJson {
  scores: Record<string, number>;
  breakdown: Record<string, ThreatContributionJson[]>;
  chosen: string;
}

export interface TrustUpdated {
  source_id: string;
  trust: number;
  confirmed: number;
  refuted: number;
}

export interface PerceptionStateJson {
  perceiver: string;
  assessment: string;
  rationale: string[];
}

export interface EngagementCaseJson {
  truth: string;
  operator: PerceptionStateJson;
  machine: PerceptionStateJson;
  state: string;
  consequence: string;
  engaged: boolean;
}

export interface ConflictJson {
  code: string;
  reason: string;
  related_digest: string | null;
}

export type StreamEvent =
  | ({ type: "block" } & { height: number; block_hash: string; entries: number })
  | ({ type: "track_update" } & { track: TrackJson })
  | ({ type: "conflict" } & ConflictJson)
  | ({ type: "engagement" } & EngagementCaseJson)
  | { type: "trust"; source_id: string; trust: number }
  | { type: "sync"; peer: string; absorbed: number }
  | { type: "gap" };

export interface ProblemDocument {
  code: string;
  detail: string;
}
