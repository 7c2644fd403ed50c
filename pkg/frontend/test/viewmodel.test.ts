import { describe, expect, it } from "vitest";

import { LayoutRecord, StateRecord } from "../src/protocol";
import { buildRenderModel, tilesFromGrid } from "../src/viewmodel";

const layout: LayoutRecord = {
  type: "layout",
  name: "mini",
  grid: ["XXOXX", "X1 PX", "X2 SX", "XXDXX"],
  human_slot: 0,
  agent: "tom:mle_like",
};

function stateRecord(snapshot: object, extra: Partial<StateRecord> = {}): StateRecord {
  return {
    type: "state",
    seq: 0,
    tick: 0,
    state: JSON.stringify(snapshot),
    last_events: [],
    reward_total: 0,
    mode: "running",
    ...extra,
  };
}

const baseSnapshot = {
  players: [
    { pos: [1, 1], orient: "N", held: null },
    { pos: [1, 2], orient: "E", held: "dish" },
  ],
  pots: { "3,1": { onions: 3, cook_timer: 4 } },
  counters: { "2,3": "onion" },
  tick: 12,
};

describe("render model", () => {
  it("maps tile characters", () => {
    const tiles = tilesFromGrid(layout.grid);
    expect(tiles[0][2]).toBe("onion_source");
    expect(tiles[1][3]).toBe("pot");
    expect(tiles[2][3]).toBe("serving");
    expect(tiles[3][2]).toBe("dish_source");
    expect(tiles[1][1]).toBe("floor"); // spawn markers are floor
    expect(() => tilesFromGrid(["Q"])).toThrow(/unknown tile/);
  });

  it("projects players, pots, and counter objects without any game logic", () => {
    const model = buildRenderModel(layout, stateRecord(baseSnapshot, { tick: 12, reward_total: 40 }));
    expect(model.players[0]).toMatchObject({ x: 1, y: 1, orient: "N", held: null, isHuman: true });
    expect(model.players[1]).toMatchObject({ x: 1, y: 2, held: "dish", isHuman: false });
    expect(model.pots).toEqual([{ x: 3, y: 1, onions: 3, cookTimer: 4, ready: false }]);
    expect(model.counterObjects).toEqual([{ x: 2, y: 3, object: "onion" }]);
    expect(model.hud).toMatchObject({ tick: 12, rewardTotal: 40, mode: "running" });
  });

  it("flips the pot badge to ready exactly when the timer hits zero", () => {
    const ticking = buildRenderModel(
      layout,
      stateRecord({ ...baseSnapshot, pots: { "3,1": { onions: 3, cook_timer: 1 } } }),
    );
    expect(ticking.pots[0].ready).toBe(false);
    const ready = buildRenderModel(
      layout,
      stateRecord({ ...baseSnapshot, pots: { "3,1": { onions: 3, cook_timer: 0 } } }),
    );
    expect(ready.pots[0].ready).toBe(true);
  });

  it("rejects snapshots that do not match the canonical schema", () => {
    expect(() =>
      buildRenderModel(layout, stateRecord({ ...baseSnapshot, players: [] })),
    ).toThrow();
  });
});
