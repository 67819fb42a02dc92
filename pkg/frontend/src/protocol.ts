/**
 * Wire protocol schemas: one JSON object per line, five envelope fields.
 * Mirrors PROTOCOL.md at the repository root; every outgoing message is
 * validated against these schemas before it touches the channel.
 */

import { z } from "zod";

export const CLAMP_TOKEN = ">10%";

export const MessageKind = z.enum([
  "Hello",
  "Snapshot",
  "Adjust",
  "SelectProposal",
  "DisagreementUpdate",
  "CompareBallot",
  "TrialAdvance",
  "Error",
]);
export type MessageKind = z.infer<typeof MessageKind>;

export const Envelope = z
  .object({
    kind: MessageKind,
    session_id: z.string(),
    sender: z.string(),
    seq: z.number().int().nonnegative().nullable(),
    payload: z.record(z.string(), z.unknown()),
  })
  .strict();
export type WireMessage = z.infer<typeof Envelope>;

export const AdjustPayload = z
  .object({
    category: z.string().min(1),
    amount: z.number().int(),
    user: z.string().optional(),
  })
  .strict();

export const SelectProposalPayload = z
  .object({ proposal: z.string().min(1), user: z.string().optional() })
  .strict();

export const CompareBallotPayload = z
  .object({
    budget_a: z.string().min(1),
    budget_b: z.string().min(1),
    choice: z.string().min(1),
  })
  .strict();

export const TrialAdvancePayload = z
  .object({ action: z.enum(["advance", "mark_partial"]) })
  .strict();

// The meter value arrives as a decimal string with exactly six fractional
// digits; the client renders it and never recomputes it.
export const DisagreementPayload = z
  .object({ raw: z.string().regex(/^\d+\.\d{6}$/), display: z.string() })
  .strict();
export type DisagreementPayload = z.infer<typeof DisagreementPayload>;

export const ErrorPayload = z
  .object({ code: z.string(), detail: z.string() })
  .passthrough();
export type ErrorPayload = z.infer<typeof ErrorPayload>;

export const CategoryInfo = z.object({
  id: z.string(),
  name: z.string(),
  kind: z.enum(["revenue", "expense"]),
  description: z.string(),
});
export type CategoryInfo = z.infer<typeof CategoryInfo>;

export const Amounts = z.record(z.string(), z.number().int());
export type Amounts = z.infer<typeof Amounts>;

export const SnapshotPayload = z.object({
  kind: z.string(),
  participants: z.array(z.string()),
  goal: z.number().int().nullable(),
  baseline: z.object({
    id: z.string(),
    name: z.string(),
    fiscal_label: z.string(),
    categories: z.array(CategoryInfo),
    amounts: Amounts,
  }),
  budgets: z.record(
    z.string(),
    z.object({ selections: z.record(z.string(), z.string()), amounts: Amounts }),
  ),
  proposals: z.record(
    z.string(),
    z.object({
      category: z.string(),
      target: z.number().int(),
      rationale: z.string(),
      author: z.string(),
    }),
  ),
  deficits: z.record(z.string(), z.number().int()),
  disagreement: DisagreementPayload.nullable(),
  consensus: z.record(z.string(), z.unknown()).nullable(),
  trial: z.record(z.string(), z.unknown()).nullable(),
});
export type SnapshotPayload = z.infer<typeof SnapshotPayload>;

const CLIENT_PAYLOADS: Partial<Record<MessageKind, z.ZodTypeAny>> = {
  Hello: z.object({}).strict(),
  Adjust: AdjustPayload,
  SelectProposal: SelectProposalPayload,
  CompareBallot: CompareBallotPayload,
  TrialAdvance: TrialAdvancePayload,
};

export class ProtocolError extends Error {}

/** Strictly parse one incoming line. */
export function decodeLine(line: string): WireMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch (error) {
    throw new ProtocolError(`not valid JSON: ${(error as Error).message}`);
  }
  const parsed = Envelope.safeParse(raw);
  if (!parsed.success) {
    throw new ProtocolError(`bad envelope: ${parsed.error.message}`);
  }
  return parsed.data;
}

/** Validate and serialize one outgoing message to a single line. */
export function encodeLine(message: WireMessage): string {
  Envelope.parse(message);
  const payloadSchema = CLIENT_PAYLOADS[message.kind];
  if (payloadSchema) {
    payloadSchema.parse(message.payload);
  }
  const line = JSON.stringify(message);
  if (line.includes("\n")) {
    throw new ProtocolError("encoded message spans multiple lines");
  }
  return line;
}

export function clientMessage(
  kind: MessageKind,
  sessionId: string,
  sender: string,
  payload: Record<string, unknown>,
): WireMessage {
  return { kind, session_id: sessionId, sender, seq: null, payload };
}
