/** Canvas painting of a render model. Data in, pixels out. */

import { RenderModel, TileKind } from "./viewmodel.js";

export const CELL = 48;

const TILE_COLORS: Record<TileKind, string> = {
  floor: "#f4e9d4",
  counter: "#b99b6b",
  onion_source: "#e0c341",
  dish_source: "#d7e3ea",
  pot: "#4a4a4a",
  serving: "#7fb069",
};

const HELD_COLORS: Record<string, string> = {
  onion: "#e8a33d",
  dish: "#f4f4f4",
  soup: "#c0512f",
};

const ORIENT_VECTORS: Record<string, [number, number]> = {
  N: [0, -1],
  S: [0, 1],
  W: [-1, 0],
  E: [1, 0],
};

export function paint(ctx: CanvasRenderingContext2D, model: RenderModel): void {
  ctx.canvas.width = model.width * CELL;
  ctx.canvas.height = model.height * CELL;
  for (let y = 0; y < model.height; y++) {
    for (let x = 0; x < model.width; x++) {
      ctx.fillStyle = TILE_COLORS[model.tiles[y][x]];
      ctx.fillRect(x * CELL, y * CELL, CELL, CELL);
      ctx.strokeStyle = "#00000022";
      ctx.strokeRect(x * CELL, y * CELL, CELL, CELL);
    }
  }
  for (const { x, y, object } of model.counterObjects) {
    drawObject(ctx, x, y, object, 0.3);
  }
  for (const pot of model.pots) {
    const cx = pot.x * CELL + CELL / 2;
    const cy = pot.y * CELL + CELL / 2;
    ctx.fillStyle = pot.ready ? "#7fb069" : "#222";
    ctx.beginPath();
    ctx.arc(cx, cy, CELL * 0.32, 0, Math.PI * 2);
    ctx.fill();
    ctx.fillStyle = "#fff";
    ctx.font = `${CELL * 0.3}px monospace`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    const badge = pot.ready ? "OK" : pot.cookTimer !== null ? String(pot.cookTimer) : `${pot.onions}/3`;
    ctx.fillText(badge, cx, cy);
  }
  for (const player of model.players) {
    const cx = player.x * CELL + CELL / 2;
    const cy = player.y * CELL + CELL / 2;
    ctx.fillStyle = player.isHuman ? "#3677c2" : "#56a05d";
    ctx.beginPath();
    ctx.arc(cx, cy, CELL * 0.34, 0, Math.PI * 2);
    ctx.fill();
    const [dx, dy] = ORIENT_VECTORS[player.orient];
    ctx.strokeStyle = "#fff";
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.lineTo(cx + dx * CELL * 0.3, cy + dy * CELL * 0.3);
    ctx.stroke();
    if (player.held) drawObject(ctx, player.x, player.y, player.held, 0.16, 0.26);
  }
}

function drawObject(
  ctx: CanvasRenderingContext2D,
  x: number,
  y: number,
  object: string,
  radius: number,
  offset = 0,
): void {
  const cx = x * CELL + CELL / 2 + offset * CELL;
  const cy = y * CELL + CELL / 2 - offset * CELL;
  ctx.fillStyle = HELD_COLORS[object] ?? "#000";
  ctx.beginPath();
  ctx.arc(cx, cy, CELL * radius, 0, Math.PI * 2);
  ctx.fill();
  ctx.strokeStyle = "#00000055";
  ctx.stroke();
}
