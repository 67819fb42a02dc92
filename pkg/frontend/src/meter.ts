/**
 * The horizontal disagreement meter. Values at or below 10% render as a
 * one-decimal percentage with a linear fill; anything above renders as
 * exactly ">10%" at full fill. The input is always the server's latest
 * DisagreementUpdate payload; the meter is never computed client-side.
 */

import { CLAMP_TOKEN, type DisagreementPayload } from "./protocol.js";

export interface MeterView {
  label: string;
  fill: number; // 0..1 of the bar
  clamped: boolean;
}

export function meterFromUpdate(payload: DisagreementPayload): MeterView {
  if (payload.display === CLAMP_TOKEN) {
    return { label: CLAMP_TOKEN, fill: 1, clamped: true };
  }
  const raw = Number.parseFloat(payload.raw);
  return {
    label: `${(raw * 100).toFixed(1)}%`,
    fill: Math.min(raw / 0.1, 1),
    clamped: false,
  };
}

export const EMPTY_METER: MeterView = { label: "0.0%", fill: 0, clamped: false };
