// Pure renderers: API values in, markup strings out. Numbers are always
// interpolated as String(value) straight off the wire-parsed JSON; any
// rounding would break the byte-fidelity contract with the node.

import type { Viewport } from "./state.js";
import type {
  Alert,
} from "./state.js";
import type {
  AuditTrail,
  EngagementCaseJson,
  RiskAssessmentJson,
  RouteJson,
  TrackJson,
} from "./types.js";

export const MAP_WIDTH = 800;
export const MAP_HEIGHT = 600;

const KIND_COLORS: Record<string, string> = {
  ProtectedSite: "#1f9d55",
  CriticalInfrastructure: "#3b82c4",
  Threat: "#c43b3b",
  SurrenderEvent: "#e0e0e0",
  HumanitarianAsset: "#c4a13b",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function project(
  lat: number,
  lon: number,
  view: Viewport,
): { x: number; y: number } {
  const x =
    ((lon - view.minLon) / (view.maxLon - view.minLon || 1)) * MAP_WIDTH;
  const y =
    MAP_HEIGHT -
    ((lat - view.minLat) / (view.maxLat - view.minLat || 1)) * MAP_HEIGHT;
  return { x, y };
}

// Opinion expectation drives opacity, uncertainty drives the halo radius;
// duress tracks get the pulsing class. The exact API numbers ride along as
// data attributes so the map is auditable against the wire.
export function renderMap(
  tracks: TrackJson[],
  routes: RouteJson[],
  view: Viewport,
): string {
  const parts: string[] = [
    `<svg viewBox="0 0 ${MAP_WIDTH} ${MAP_HEIGHT}" class="map" role="img">`,
    `<rect width="${MAP_WIDTH}" height="${MAP_HEIGHT}" class="map-bg"/>`,
  ];
  for (const route of routes) {
    const points = route.polyline
      .map(([lat, lon]) => {
        const { x, y } = project(lat, lon, view);
        return `${x},${y}`;
      })
      .join(" ");
    parts.push(
      `<polyline points="${points}" class="route" data-route-id="${escapeHtml(route.route_id)}"/>`,
    );
  }
  for (const track of tracks) {
    const { x, y } = project(track.location.latitude, track.location.longitude, view);
    const halo = 6 + 30 * track.opinion.u;
    const color = KIND_COLORS[track.kind] ?? "#888888";
    const classes = track.status === "UnderDuress" ? "track duress" : "track";
    parts.push(
      `<g class="${classes}" data-track-id="${escapeHtml(track.track_id)}" ` +
        `data-kind="${escapeHtml(track.kind)}" ` +
        `data-expectation="${String(track.expectation)}" ` +
        `data-uncertainty="${String(track.opinion.u)}" ` +
        `data-status="${escapeHtml(track.status)}">` +
        `<circle cx="${x}" cy="${y}" r="${halo}" class="halo" fill="${color}"/>` +
        `<circle cx="${x}" cy="${y}" r="6" fill="${color}" ` +
        `fill-opacity="${String(track.expectation)}" class="core"/>` +
        `</g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderTrackDetails(track: TrackJson): string {
  const rows = [
    ["track", escapeHtml(track.track_id)],
    ["kind", escapeHtml(track.kind)],
    ["subject", escapeHtml(track.subject)],
    ["E", String(track.expectation)],
    ["b", String(track.opinion.b)],
    ["d", String(track.opinion.d)],
    ["u", String(track.opinion.u)],
    ["status", escapeHtml(track.status)],
    ["last update", escapeHtml(track.last_update)],
    ["evidence", track.contributing.map(escapeHtml).join("<br>")],
  ];
  const body = rows
    .map(([label, value]) => `<tr><th>${label}</th><td>${value}</td></tr>`)
    .join("");
  return `<table class="track-details">${body}</table>`;
}

export function renderRiskAssessment(assessment: RiskAssessmentJson): string {
  const routeIds = Object.keys(assessment.scores).sort();
  const parts: string[] = ['<div class="risk-assessment">'];
  for (const routeId of routeIds) {
    const chosen = routeId === assessment.chosen ? " chosen" : "";
    parts.push(
      `<section class="route-risk${chosen}" data-route-id="${escapeHtml(routeId)}">` +
        `<h3>route ${escapeHtml(routeId)}: ` +
        `<span class="score" data-score="${String(assessment.scores[routeId])}">` +
        `${String(assessment.scores[routeId])}</span>` +
        (chosen ? " (chosen)" : "") +
        `</h3>`,
    );
    const contributions = assessment.breakdown[routeId] ?? [];
    if (contributions.length > 0) {
      parts.push(
        "<table><tr><th>threat</th><th>subject</th><th>severity</th>" +
          "<th>E</th><th>distance km</th><th>contribution</th></tr>",
      );
      for (const c of contributions) {
        parts.push(
          `<tr data-track-id="${escapeHtml(c.track_id)}">` +
            `<td>${escapeHtml(c.track_id)}</td>` +
            `<td>${escapeHtml(c.subject)}</td>` +
            `<td>${String(c.severity)}</td>` +
            `<td>${String(c.expectation)}</td>` +
            `<td>${String(c.distance_km)}</td>` +
            `<td class="contribution">${String(c.contribution)}</td></tr>`,
        );
      }
      parts.push("</table>");
    }
    parts.push("</section>");
  }
  parts.push("</div>");
  return parts.join("");
}

export function renderEngagement(engagement: EngagementCaseJson): string {
  return (
    `<div class="engagement" data-engaged="${engagement.engaged}">` +
    `<span class="state">${escapeHtml(engagement.state)}</span>: ` +
    `<span class="consequence">${escapeHtml(engagement.consequence)}</span>` +
    `<div class="perceptions">truth=${escapeHtml(engagement.truth)} ` +
    `operator=${escapeHtml(engagement.operator.assessment)} ` +
    `machine=${escapeHtml(engagement.machine.assessment)}</div>` +
    `</div>`
  );
}

export function renderAlerts(alerts: Alert[]): string {
  if (alerts.length === 0) {
    return '<div class="alerts empty">no active conflicts</div>';
  }
  const items = alerts
    .map(
      (alert) =>
        `<li class="alert" data-alert-id="${alert.id}" data-code="${escapeHtml(alert.conflict.code)}">` +
        `<strong>${escapeHtml(alert.conflict.code)}</strong> ` +
        `${escapeHtml(alert.conflict.reason)} ` +
        `<button class="dismiss" data-alert-id="${alert.id}">dismiss</button></li>`,
    )
    .join("");
  return `<ul class="alerts">${items}</ul>`;
}

export function renderReceiptStatus(trail: AuditTrail | null, digest: string): string {
  if (trail === null) {
    return `<div class="receipt pending" data-digest="${escapeHtml(digest)}">awaiting receipt...</div>`;
  }
  const receipts = trail.events.filter((e) => e.event === "receipt");
  const items = receipts
    .map((r) => `<li>receipted by ${escapeHtml(r.actor)} at ${escapeHtml(r.time)}</li>`)
    .join("");
  return (
    `<div class="receipt confirmed" data-digest="${escapeHtml(digest)}">` +
    `digest ${escapeHtml(digest)}<ul>${items}</ul></div>`
  );
}
