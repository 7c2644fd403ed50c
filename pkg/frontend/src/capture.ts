/**
 * Capture form: validates the operator's input and produces a capture
 * command the server's schema accepts. Invalid forms never reach the wire.
 */

import { z } from "zod";

export const PREDICATE_KINDS = [
  "delivered_within",
  "holds_object_within",
  "cell_vacated_within",
  "pot_contains_within",
  "counter_object_removed_within",
  "dropped_held_within",
  "reward_at_least_within",
] as const;

export type PredicateKind = (typeof PREDICATE_KINDS)[number];

export interface CaptureFormValues {
  id: string;
  category: "SR" | "AR" | "AMR";
  partner: string;
  predicateKind: PredicateKind;
  ticks: number;
  object?: "onion" | "dish" | "soup";
  cell?: [number, number];
  onions?: number;
  points?: number;
  horizon?: number;
}

const needs: Partial<Record<PredicateKind, (keyof CaptureFormValues)[]>> = {
  holds_object_within: ["object"],
  cell_vacated_within: ["cell"],
  pot_contains_within: ["cell", "onions"],
  counter_object_removed_within: ["cell"],
  reward_at_least_within: ["points"],
};

const formSchema = z.object({
  id: z
    .string()
    .min(1, "scenario id is required")
    .regex(/^[A-Za-z0-9][A-Za-z0-9_-]*$/, "id must be alphanumeric with - or _"),
  category: z.enum(["SR", "AR", "AMR"]),
  partner: z.string().min(1, "partner spec is required"),
  predicateKind: z.enum(PREDICATE_KINDS),
  ticks: z.number().int().positive("tick budget must be positive"),
  object: z.enum(["onion", "dish", "soup"]).optional(),
  cell: z.tuple([z.number().int(), z.number().int()]).optional(),
  onions: z.number().int().positive().optional(),
  points: z.number().int().positive().optional(),
  horizon: z.number().int().positive().optional(),
});

export type CaptureValidation =
  | { ok: true; message: object }
  | { ok: false; errors: string[] };

export function validateCaptureForm(values: CaptureFormValues): CaptureValidation {
  const parsed = formSchema.safeParse(values);
  if (!parsed.success) {
    return { ok: false, errors: parsed.error.issues.map((i) => i.message) };
  }
  const v = parsed.data;
  const errors: string[] = [];
  for (const field of needs[v.predicateKind] ?? []) {
    if (v[field as keyof typeof v] === undefined) {
      errors.push(`${v.predicateKind} needs ${String(field)}`);
    }
  }
  if (v.horizon !== undefined && v.ticks > v.horizon) {
    errors.push("tick budget exceeds the horizon");
  }
  if (errors.length > 0) return { ok: false, errors };
  const predicate: Record<string, unknown> = { kind: v.predicateKind, ticks: v.ticks };
  if (v.object !== undefined) predicate.object = v.object;
  if (v.cell !== undefined) predicate.cell = v.cell;
  if (v.onions !== undefined) predicate.onions = v.onions;
  if (v.points !== undefined) predicate.points = v.points;
  const message: Record<string, unknown> = {
    type: "capture",
    id: v.id,
    category: v.category,
    predicate,
    partner: v.partner,
  };
  if (v.horizon !== undefined) message.horizon = v.horizon;
  return { ok: true, message };
}
