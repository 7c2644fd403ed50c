/**
 * Socket protocol types and the inbound record feed.
 *
 * The client is a pure view: every visible change originates from a server
 * record, and state records must arrive with sequence numbers growing by
 * exactly one. Outbound messages are validated before they hit the wire.
 */

import { z } from "zod";

export const heldObject = z.enum(["onion", "dish", "soup"]);

export const snapshotSchema = z.object({
  players: z
    .array(
      z.object({
        pos: z.tuple([z.number().int(), z.number().int()]),
        orient: z.enum(["N", "S", "E", "W"]),
        held: heldObject.nullable(),
      }),
    )
    .length(2),
  pots: z.record(
    z.string(),
    z.object({ onions: z.number().int(), cook_timer: z.number().int().nullable() }),
  ),
  counters: z.record(z.string(), heldObject),
  tick: z.number().int(),
});

export type Snapshot = z.infer<typeof snapshotSchema>;

export const layoutRecordSchema = z.object({
  type: z.literal("layout"),
  name: z.string(),
  grid: z.array(z.string()).min(3),
  human_slot: z.union([z.literal(0), z.literal(1)]),
  agent: z.string(),
});

export const stateRecordSchema = z.object({
  type: z.literal("state"),
  seq: z.number().int().nonnegative(),
  tick: z.number().int().nonnegative(),
  state: z.string(),
  last_events: z.array(
    z.object({
      kind: z.string(),
      player: z.number().int().nullable(),
      cell: z.tuple([z.number(), z.number()]).nullable(),
    }),
  ),
  reward_total: z.number().int().nonnegative(),
  mode: z.enum(["running", "paused"]),
});

export const errorRecordSchema = z.object({ type: z.literal("error"), message: z.string() });

export const capturedRecordSchema = z.object({
  type: z.literal("captured"),
  id: z.string(),
  path: z.string(),
});

export const serverRecordSchema = z.discriminatedUnion("type", [
  layoutRecordSchema,
  stateRecordSchema,
  errorRecordSchema,
  capturedRecordSchema,
]);

export type LayoutRecord = z.infer<typeof layoutRecordSchema>;
export type StateRecord = z.infer<typeof stateRecordSchema>;
export type ServerRecord = z.infer<typeof serverRecordSchema>;

export type ActionName = "UP" | "DOWN" | "LEFT" | "RIGHT" | "STAY" | "INTERACT";

/** Keyboard bindings: arrows move, space interacts, period stays. */
export function actionForKey(key: string): ActionName | null {
  switch (key) {
    case "ArrowUp":
      return "UP";
    case "ArrowDown":
      return "DOWN";
    case "ArrowLeft":
      return "LEFT";
    case "ArrowRight":
      return "RIGHT";
    case " ":
      return "INTERACT";
    case ".":
      return "STAY";
    default:
      return null;
  }
}

export function actMessage(action: ActionName): string {
  return JSON.stringify({ type: "act", action });
}

export interface FeedUpdate {
  record: ServerRecord | null;
  error: string | null;
}

/**
 * Parses inbound frames, enforces seq contiguity on state records, and
 * never lets a malformed frame corrupt the last good view.
 */
export class SessionFeed {
  layout: LayoutRecord | null = null;
  lastState: StateRecord | null = null;
  statesSeen = 0;

  ingest(raw: string): FeedUpdate {
    let parsed: unknown;
    try {
      parsed = JSON.parse(raw);
    } catch {
      return { record: null, error: "malformed record: not JSON" };
    }
    const result = serverRecordSchema.safeParse(parsed);
    if (!result.success) {
      return { record: null, error: `malformed record: ${result.error.issues[0]?.message}` };
    }
    const record = result.data;
    if (record.type === "layout") {
      this.layout = record;
    } else if (record.type === "state") {
      if (this.lastState !== null && record.seq !== this.lastState.seq + 1) {
        return {
          record: null,
          error: `sequence break: got ${record.seq} after ${this.lastState.seq}`,
        };
      }
      this.lastState = record;
      this.statesSeen += 1;
    }
    return { record, error: null };
  }
}

export function parseSnapshot(text: string): Snapshot {
  return snapshotSchema.parse(JSON.parse(text));
}
