// DOM wiring: one ApiClient, one event-stream subscription, and the four
// panels. Role comes from the query string (?role=Observer gives the
// read-only view with mutation panels hidden).

import { ApiClient } from "./api.js";
import { CATEGORIES, submitAndAwaitReceipt } from "./composer.js";
import { absorbStreamEvent, recordJudgment, renderReview } from "./engagement.js";
import {
  renderAlerts,
  renderMap,
  renderReceiptStatus,
  renderTrackDetails,
} from "./render.js";
import { ViewState, visiblePanels } from "./state.js";
import { EventStream } from "./stream.js";
import type { PictureSnapshot, RouteJson, TrackJson } from "./types.js";
import { WhatIfPanel } from "./whatif.js";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node;
}

export function startConsole(baseUrl = ""): void {
  const params = new URLSearchParams(window.location.search);
  const role = params.get("role") ?? "Humanitarian";
  const clientId = params.get("client") ?? "console";
  const api = new ApiClient(baseUrl, clientId, role);
  const state = new ViewState();
  const whatIf = new WhatIfPanel([
    { route_id: "A", polyline: [[47.0, 37.4], [47.2, 37.4]] },
    { route_id: "B", polyline: [[47.0, 37.5], [47.2, 37.5]] },
  ]);
  let tracks: TrackJson[] = [];
  let routes: RouteJson[] = whatIf.routes;

  for (const panel of ["composer", "whatif", "engagement", "trust"]) {
    const element = document.getElementById(`panel-${panel}`);
    if (element && !visiblePanels(role).includes(panel as never)) {
      element.classList.add("hidden");
    }
  }

  function redrawMap(): void {
    el("map-container").innerHTML = renderMap(
      state.visibleTracks(tracks),
      state.toggles.routes ? routes : [],
      state.viewport,
    );
    for (const group of document.querySelectorAll("#map-container g.track")) {
      group.addEventListener("click", () => {
        state.selectTrack(group.getAttribute("data-track-id"));
        const track = tracks.find((t) => t.track_id === state.selectedTrackId);
        el("track-details").innerHTML = track ? renderTrackDetails(track) : "";
      });
    }
  }

  function redrawAlerts(): void {
    el("alerts").innerHTML = renderAlerts(state.activeAlerts());
    for (const button of document.querySelectorAll("#alerts button.dismiss")) {
      button.addEventListener("click", () => {
        state.dismissAlert(Number(button.getAttribute("data-alert-id")));
        redrawAlerts();
      });
    }
  }

  function redrawReviews(): void {
    el("reviews").innerHTML = state.reviews.map(renderReview).join("");
    for (const button of document.querySelectorAll("#reviews button[data-judgment]")) {
      button.addEventListener("click", async () => {
        const reviewId = Number(
          button.closest(".review")?.getAttribute("data-review-id"),
        );
        const review = state.reviews.find((r) => r.id === reviewId);
        if (!review) {
          return;
        }
        const truth =
          (el("truth-select") as HTMLSelectElement).value || "Protected";
        await recordJudgment(
          api,
          review,
          truth,
          button.getAttribute("data-judgment") ?? "Protected",
        );
        redrawReviews();
      });
    }
  }

  async function refreshPicture(): Promise<void> {
    const snapshot: PictureSnapshot = await api.picture();
    tracks = snapshot.tracks;
    state.fitViewportTo(tracks);
    redrawMap();
  }

  const stream = new EventStream(`${baseUrl}/events`, {
    onEvent(event) {
      absorbStreamEvent(state, event);
      if (event.type === "track_update" || event.type === "block") {
        void refreshPicture();
      }
      redrawAlerts();
      redrawReviews();
    },
    onGap() {
      void refreshPicture();
    },
    onStatusChange(connected) {
      el("stream-status").textContent = connected ? "live" : "reconnecting";
    },
  });

  // Composer wiring.
  const categorySelect = el("composer-category") as HTMLSelectElement;
  categorySelect.innerHTML = CATEGORIES.map(
    (c) => `<option value="${c.code}">${c.code}: ${c.label}</option>`,
  ).join("");
  function refreshSubjects(): void {
    const info = CATEGORIES.find((c) => c.code === categorySelect.value);
    (el("composer-subject") as HTMLSelectElement).innerHTML = Object.entries(
      info?.subjects ?? {},
    )
      .map(([code, label]) => `<option value="${code}">${label}</option>`)
      .join("");
  }
  categorySelect.addEventListener("change", refreshSubjects);
  refreshSubjects();

  el("composer-submit").addEventListener("click", async () => {
    const value = (id: string) => (el(id) as HTMLInputElement).value;
    try {
      const result = await submitAndAwaitReceipt(api, {
        originatorId: value("composer-originator"),
        category: categorySelect.value,
        subjectCode: Number(value("composer-subject")),
        latitude: value("composer-lat") ? Number(value("composer-lat")) : undefined,
        longitude: value("composer-lon") ? Number(value("composer-lon")) : undefined,
        radiusM: value("composer-radius") ? Number(value("composer-radius")) : undefined,
        payloadText: value("composer-payload") || undefined,
      }, value("composer-signature") || undefined);
      el("composer-receipt").innerHTML = renderReceiptStatus(
        result.trail,
        result.accepted.digest,
      );
    } catch (error) {
      el("composer-receipt").textContent = String(error);
    }
  });

  // What-if wiring.
  el("whatif-run").addEventListener("click", async () => {
    const text = (el("whatif-routes") as HTMLTextAreaElement).value;
    try {
      whatIf.setRoutes(JSON.parse(text));
      routes = whatIf.routes;
      await whatIf.run(api);
      el("whatif-result").innerHTML = whatIf.render();
      redrawMap();
    } catch (error) {
      el("whatif-result").textContent = String(error);
    }
  });
  (el("whatif-routes") as HTMLTextAreaElement).value = JSON.stringify(
    whatIf.routes,
    null,
    2,
  );

  // Trust tuning.
  el("trust-confirm").addEventListener("click", async () => {
    const sourceId = (el("trust-source") as HTMLInputElement).value;
    const updated = await api.trust(sourceId, "Confirmed");
    el("trust-result").textContent = `${updated.source_id}: trust ${String(updated.trust)}`;
  });
  el("trust-refute").addEventListener("click", async () => {
    const sourceId = (el("trust-source") as HTMLInputElement).value;
    const updated = await api.trust(sourceId, "Refuted");
    el("trust-result").textContent = `${updated.source_id}: trust ${String(updated.trust)}`;
  });

  stream.connect();
  void refreshPicture();
}

declare global {
  interface Window {
    startConsole: typeof startConsole;
  }
}

if (typeof window !== "undefined") {
  window.startConsole = startConsole;
}
