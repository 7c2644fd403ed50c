/**
 * Report browser model: every number shown comes verbatim from the report
 * file, rounded to two decimals for display only.
 */

import { z } from "zod";

const reportSchema = z.object({
  version: z.string(),
  base_seed: z.number().int(),
  tested: z.string(),
  categories: z.object({
    SR: z.number().nullable(),
    AR: z.number().nullable(),
    AMR: z.number().nullable(),
  }),
  layouts: z.record(z.string(), z.number()),
  error_rollouts: z.number().int(),
  total_rollouts: z.number().int(),
  scenarios: z.array(
    z.object({
      id: z.string(),
      category: z.enum(["SR", "AR", "AMR"]),
      layout: z.string(),
      score: z.number(),
      errors: z.number().int(),
      variants: z.record(z.string(), z.number()),
    }),
  ),
});

export type Report = z.infer<typeof reportSchema>;
export type ScenarioRow = Report["scenarios"][number];

export function loadReport(text: string): Report {
  return reportSchema.parse(JSON.parse(text));
}

/** Two-decimal display; absent categories show as n/a, never 0. */
export function displayScore(value: number | null | undefined): string {
  if (value === null || value === undefined) return "n/a";
  return value.toFixed(2);
}

export function categoryCells(report: Report): { category: string; mean: string }[] {
  return (["SR", "AR", "AMR"] as const).map((category) => ({
    category,
    mean: displayScore(report.categories[category]),
  }));
}

export type SortKey = "id" | "category" | "layout" | "score" | "errors";

export function sortScenarios(
  rows: ScenarioRow[],
  key: SortKey,
  descending = false,
): ScenarioRow[] {
  const sorted = [...rows].sort((a, b) => {
    const av = a[key];
    const bv = b[key];
    if (typeof av === "number" && typeof bv === "number") return av - bv;
    return String(av).localeCompare(String(bv)) || a.id.localeCompare(b.id);
  });
  if (descending) sorted.reverse();
  return sorted;
}

export interface DiffRow {
  id: string;
  left: string;
  right: string;
  delta: string;
}

/** Side-by-side category and scenario comparison, joined on id. */
export function diffReports(left: Report, right: Report): DiffRow[] {
  const rows: DiffRow[] = [];
  for (const cat of ["SR", "AR", "AMR"] as const) {
    const l = left.categories[cat];
    const r = right.categories[cat];
    rows.push({
      id: `category:${cat}`,
      left: displayScore(l),
      right: displayScore(r),
      delta: l !== null && r !== null ? displayScore(r - l) : "n/a",
    });
  }
  const rightById = new Map(right.scenarios.map((s) => [s.id, s]));
  const ids = new Set([...left.scenarios.map((s) => s.id), ...rightById.keys()]);
  for (const id of [...ids].sort()) {
    const l = left.scenarios.find((s) => s.id === id);
    const r = rightById.get(id);
    rows.push({
      id,
      left: displayScore(l?.score),
      right: displayScore(r?.score),
      delta: l && r ? displayScore(r.score - l.score) : "n/a",
    });
  }
  return rows;
}
