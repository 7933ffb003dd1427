// Client-side view state. Nothing here is authoritative: tracks, risks and
// outcomes always come from the API; this only remembers how to show them.

import type { ConflictJson, EngagementCaseJson, TrackJson } from "./types.js";

export interface Viewport {
  minLat: number;
  maxLat: number;
  minLon: number;
  maxLon: number;
}

export interface LayerToggles {
  kinds: Record<string, boolean>;
  routes: boolean;
  conflicts: boolean;
}

export interface Alert {
  id: number;
  conflict: ConflictJson;
  dismissed: boolean;
}

export interface PendingReview {
  id: number;
  machineAssessment: string;
  rationale: string[];
  resolved?: EngagementCaseJson;
}

export const TRACK_KINDS = [
  "ProtectedSite",
  "CriticalInfrastructure",
  "Threat",
  "SurrenderEvent",
  "HumanitarianAsset",
] as const;

export class ViewState {
  viewport: Viewport = { minLat: 46.9, maxLat: 47.3, minLon: 37.3, maxLon: 37.8 };
  toggles: LayerToggles = {
    kinds: Object.fromEntries(TRACK_KINDS.map((k) => [k, true])),
    routes: true,
    conflicts: true,
  };
  selectedTrackId: string | null = null;
  alerts: Alert[] = [];
  reviews: PendingReview[] = [];
  private nextId = 1;

  visibleTracks(tracks: TrackJson[]): TrackJson[] {
    return tracks.filter((t) => this.toggles.kinds[t.kind] !== false);
  }

  toggleKind(kind: string): void {
    this.toggles.kinds[kind] = !(this.toggles.kinds[kind] !== false);
  }

  selectTrack(trackId: string | null): void {
    this.selectedTrackId = trackId;
  }

  pushAlert(conflict: ConflictJson): Alert {
    const alert = { id: this.nextId++, conflict, dismissed: false };
    this.alerts.push(alert);
    return alert;
  }

  dismissAlert(id: number): void {
    const alert = this.alerts.find((a) => a.id === id);
    if (alert) {
      alert.dismissed = true;
    }
  }

  activeAlerts(): Alert[] {
    return this.toggles.conflicts ? this.alerts.filter((a) => !a.dismissed) : [];
  }

  queueReview(machineAssessment: string, rationale: string[]): PendingReview {
    const review = { id: this.nextId++, machineAssessment, rationale };
    this.reviews.push(review);
    return review;
  }

  fitViewportTo(tracks: TrackJson[], marginDeg = 0.05): void {
    if (tracks.length === 0) {
      return;
    }
    const lats = tracks.map((t) => t.location.latitude);
    const lons = tracks.map((t) => t.location.longitude);
    this.viewport = {
      minLat: Math.min(...lats) - marginDeg,
      maxLat: Math.max(...lats) + marginDeg,
      minLon: Math.min(...lons) - marginDeg,
      maxLon: Math.max(...lons) + marginDeg,
    };
  }
}

// Role gating mirrors the server: observers see no mutation panels at all.
export type PanelName = "composer" | "whatif" | "engagement" | "trust";

export function visiblePanels(role: string): PanelName[] {
  if (role === "Observer") {
    return [];
  }
  return ["composer", "whatif", "engagement", "trust"];
}
