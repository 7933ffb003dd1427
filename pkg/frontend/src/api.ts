// Thin typed client over the node API. fetch is injectable so tests can
// replay recorded sessions without a server.

import type {
  AuditTrail,
  EngagementCaseJson,
  MessageAccepted,
  PictureSnapshot,
  RiskAssessmentJson,
  RouteJson,
  TrustUpdated,
} from "./types.js";

export interface FetchResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<FetchResponseLike>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    super(`${status} ${code}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private clientId: string = "console",
    private role: string = "Humanitarian",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: {
        "Content-Type": "application/json",
        "X-Client-Id": this.clientId,
        "X-Client-Role": this.role,
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = (await response.json()) as Record<string, unknown>;
    if (!response.ok) {
      throw new ApiError(
        response.status,
        String(payload["code"] ?? "error"),
        String(payload["detail"] ?? ""),
      );
    }
    return payload as T;
  }

  picture(): Promise<PictureSnapshot> {
    return this.request("GET", "/picture");
  }

  submitMessage(
    message: Record<string, unknown>,
    signature?: string,
  ): Promise<MessageAccepted> {
    return this.request("POST", "/messages", { message, signature: signature ?? null });
  }

  audit(digest: string): Promise<AuditTrail> {
    return this.request("GET", `/audit/${digest}`);
  }

  whatIf(routes: RouteJson[]): Promise<RiskAssessmentJson> {
    return this.request("POST", "/whatif/route", { routes });
  }

  trust(sourceId: string, outcome: "Confirmed" | "Refuted"): Promise<TrustUpdated> {
    return this.request("POST", `/trust/${sourceId}`, { outcome });
  }

  engagement(
    truth: string,
    operator: string,
    machine: string,
  ): Promise<EngagementCaseJson> {
    return this.request("POST", "/engagements", { truth, operator, machine });
  }
}
