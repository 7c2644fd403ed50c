/**
 * Pure projection of the latest records into a render model. No game
 * logic lives here: tiles come from the layout record, everything dynamic
 * comes from the canonical snapshot inside the state record.
 */

import { LayoutRecord, Snapshot, StateRecord, parseSnapshot } from "./protocol.js";

export type TileKind = "floor" | "counter" | "onion_source" | "dish_source" | "pot" | "serving";

const TILE_BY_CHAR: Record<string, TileKind> = {
  " ": "floor",
  "1": "floor",
  "2": "floor",
  X: "counter",
  O: "onion_source",
  D: "dish_source",
  P: "pot",
  S: "serving",
};

export interface PotBadge {
  x: number;
  y: number;
  onions: number;
  cookTimer: number | null;
  ready: boolean;
}

export interface PlayerView {
  index: number;
  x: number;
  y: number;
  orient: "N" | "S" | "E" | "W";
  held: "onion" | "dish" | "soup" | null;
  isHuman: boolean;
}

export interface RenderModel {
  width: number;
  height: number;
  tiles: TileKind[][];
  players: PlayerView[];
  pots: PotBadge[];
  counterObjects: { x: number; y: number; object: "onion" | "dish" | "soup" }[];
  hud: { tick: number; rewardTotal: number; mode: "running" | "paused"; seq: number };
}

function cellKey(key: string): [number, number] {
  const [x, y] = key.split(",").map(Number);
  return [x, y];
}

export function tilesFromGrid(grid: string[]): TileKind[][] {
  return grid.map((row) =>
    [...row].map((ch) => {
      const tile = TILE_BY_CHAR[ch];
      if (tile === undefined) throw new Error(`unknown tile character ${ch}`);
      return tile;
    }),
  );
}

export function buildRenderModel(layout: LayoutRecord, state: StateRecord): RenderModel {
  const snapshot: Snapshot = parseSnapshot(state.state);
  const tiles = tilesFromGrid(layout.grid);
  const players = snapshot.players.map((p, index) => ({
    index,
    x: p.pos[0],
    y: p.pos[1],
    orient: p.orient,
    held: p.held,
    isHuman: index === layout.human_slot,
  }));
  const pots = Object.entries(snapshot.pots).map(([key, pot]) => {
    const [x, y] = cellKey(key);
    return { x, y, onions: pot.onions, cookTimer: pot.cook_timer, ready: pot.cook_timer === 0 };
  });
  pots.sort((a, b) => a.y - b.y || a.x - b.x);
  const counterObjects = Object.entries(snapshot.counters).map(([key, object]) => {
    const [x, y] = cellKey(key);
    return { x, y, object };
  });
  counterObjects.sort((a, b) => a.y - b.y || a.x - b.x);
  return {
    width: layout.grid[0].length,
    height: layout.grid.length,
    tiles,
    players,
    pots,
    counterObjects,
    hud: { tick: state.tick, rewardTotal: state.reward_total, mode: state.mode, seq: state.seq },
  };
}
