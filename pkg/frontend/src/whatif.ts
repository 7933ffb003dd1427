// What-if route panel: the operator edits candidate polylines, the node
// prices them, the breakdown feeds the next edit. All numbers rendered
// come from the last API response, never from local arithmetic.

import type { ApiClient } from "./api.js";
import { renderRiskAssessment } from "./render.js";
import type { RiskAssessmentJson, RouteJson } from "./types.js";

export class WhatIfPanel {
  routes: RouteJson[];
  lastAssessment: RiskAssessmentJson | null = null;

  constructor(routes: RouteJson[] = []) {
    this.routes = routes.map((r) => ({
      route_id: r.route_id,
      polyline: r.polyline.map((p) => [...p] as [number, number]),
    }));
  }

  addRoute(routeId: string, polyline: [number, number][]): void {
    this.routes.push({ route_id: routeId, polyline });
  }

  removeRoute(routeId: string): void {
    this.routes = this.routes.filter((r) => r.route_id !== routeId);
  }

  movePoint(
    routeId: string,
    pointIndex: number,
    lat: number,
    lon: number,
  ): void {
    const route = this.routes.find((r) => r.route_id === routeId);
    if (!route || pointIndex < 0 || pointIndex >= route.polyline.length) {
      throw new Error(`no point ${pointIndex} on route ${routeId}`);
    }
    route.polyline[pointIndex] = [lat, lon];
  }

  setRoutes(routes: RouteJson[]): void {
    this.routes = routes.map((r) => ({
      route_id: r.route_id,
      polyline: r.polyline.map((p) => [...p] as [number, number]),
    }));
  }

  async run(api: ApiClient): Promise<RiskAssessmentJson> {
    this.lastAssessment = await api.whatIf(this.routes);
    return this.lastAssessment;
  }

  render(): string {
    if (this.lastAssessment === null) {
      return '<div class="risk-assessment empty">no assessment yet</div>';
    }
    return renderRiskAssessment(this.lastAssessment);
  }
}
