import { writeFileSync } from "fs";

import {
  distChart,
  lambdaHeatmapChart,
  muCurvesChart,
  payoffHeatmapChart,
  scaleSweepChart,
  scheduleCompareChart,
  timeseriesChart,
} from "./charts";
import { Table, readTable, requireColumns } from "./csv";

export interface FigureKind {
  columns: string[];
  draw: (table: Table) => string;
}

export const KINDS: Record<string, FigureKind> = {
  timeseries: { columns: ["t", "f_c"], draw: timeseriesChart },
  dist: { columns: ["param", "value", "state", "count", "probability"], draw: distChart },
  mu_curves: { columns: ["mu2", "mu1", "fc_mean", "fc_std"], draw: muCurvesChart },
  lambda_heatmap: { columns: ["lambda1", "lambda0", "fc_mean"], draw: lambdaHeatmapChart },
  payoff_heatmap: { columns: ["b", "r", "fc_mean"], draw: payoffHeatmapChart },
  schedule_compare: { columns: ["schedule", "t", "fc"], draw: scheduleCompareChart },
  scale_sweep: { columns: ["pair", "size", "fc_mean", "fc_std"], draw: scaleSweepChart },
};

export function kindNames(): string[] {
  return Object.keys(KINDS);
}

/** Render one CSV to an SVG file. Nothing is written unless the input validates. */
export function renderFile(kind: string, inPath: string, outPath: string): void {
  const spec = KINDS[kind];
  if (!spec) {
    throw new Error(`unknown figure kind "${kind}", expected one of: ${kindNames().join(", ")}`);
  }
  const table = readTable(inPath);
  requireColumns(table, spec.columns, inPath);
  const svg = spec.draw(table);
  writeFileSync(outPath, svg + "\n");
}
