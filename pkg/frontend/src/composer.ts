// Message composer: builds the JSON mirror form for any category and
// submits it. No optimistic UI: the digest is shown once the node returns
// 201, and receipt status comes from the audit trail afterwards.

import type { ApiClient } from "./api.js";
import type { AuditTrail, MessageAccepted } from "./types.js";

export interface CategoryInfo {
  code: string;
  label: string;
  subjects: Record<number, string>;
  needsPayload: boolean;
}

export const CATEGORIES: CategoryInfo[] = [
  {
    code: "P",
    label: "protective sign",
    subjects: {
      1: "hospital",
      2: "safety_zone",
      3: "white_flag",
      4: "humanitarian_convoy",
      5: "cultural_property",
      6: "medical_unit",
    },
    needsPayload: false,
  },
  {
    code: "E",
    label: "emergency signal",
    subjects: { 1: "emergency_beacon", 2: "distress_signal" },
    needsPayload: false,
  },
  {
    code: "D",
    label: "danger sign",
    subjects: {
      1: "area_under_attack",
      2: "land_mines",
      3: "disaster",
      4: "belligerent",
      5: "military_activity",
    },
    needsPayload: false,
  },
  {
    code: "S",
    label: "status signal",
    subjects: {
      1: "personal_beacon",
      2: "persons_for_assistance",
      3: "infrastructure_status",
    },
    needsPayload: false,
  },
  {
    code: "I",
    label: "infrastructure sign",
    subjects: {
      1: "road",
      2: "school",
      3: "utility",
      4: "water_treatment",
      5: "hospital",
      6: "power_plant",
    },
    needsPayload: false,
  },
  {
    code: "M",
    label: "mission signal",
    subjects: { 1: "convoy_movement", 2: "deconfliction" },
    needsPayload: false,
  },
  {
    code: "Q",
    label: "request signal",
    subjects: { 1: "area_access", 2: "cease_fire" },
    needsPayload: false,
  },
  {
    code: "R",
    label: "resource message",
    subjects: { 1: "web_resource" },
    needsPayload: true,
  },
  {
    code: "F",
    label: "free text",
    subjects: { 1: "free_text" },
    needsPayload: true,
  },
];

export interface ComposerFields {
  originatorId: string;
  category: string;
  subjectCode: number;
  latitude?: number;
  longitude?: number;
  radiusM?: number;
  durationS?: number;
  payloadText?: string;
  referenceIndicator?: string;
  referencedHash?: string;
  timestamp?: string; // defaults to now, truncated to seconds
}

export function buildMessage(fields: ComposerFields): Record<string, unknown> {
  const timestamp =
    fields.timestamp ?? new Date().toISOString().replace(/\.\d{3}Z$/, "Z");
  const hasGeometry =
    fields.latitude !== undefined && fields.longitude !== undefined;
  return {
    version: 1,
    originator_id: fields.originatorId,
    category: fields.category,
    subject_code: fields.subjectCode,
    reference_indicator: fields.referenceIndicator ?? "New",
    referenced_hash: fields.referencedHash ?? null,
    timestamp,
    duration: fields.durationS ?? null,
    geometry: hasGeometry
      ? {
          latitude: fields.latitude,
          longitude: fields.longitude,
          radius_m: fields.radiusM ?? 0.0,
        }
      : null,
    payload_text: fields.payloadText ?? null,
  };
}

export interface SubmissionResult {
  accepted: MessageAccepted;
  trail: AuditTrail | null;
}

export async function submitAndAwaitReceipt(
  api: ApiClient,
  fields: ComposerFields,
  signature?: string,
): Promise<SubmissionResult> {
  const accepted = await api.submitMessage(buildMessage(fields), signature);
  let trail: AuditTrail | null = null;
  try {
    trail = await api.audit(accepted.digest);
  } catch {
    trail = null; // receipt not visible yet; the stream will tell us
  }
  return { accepted, trail };
}
