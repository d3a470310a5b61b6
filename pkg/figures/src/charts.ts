import { Table, distinct, numbers } from "./csv";
import {
  Scale,
  divergingColor,
  extent,
  formatTick,
  linearScale,
  logScale,
  logTicks,
  seriesColor,
  ticks,
} from "./scales";
import { circle, el, line, polyline, rect, svgDoc, textEl } from "./svg";

const W = 720;
const H = 480;
const MARGIN = { left: 64, right: 110, top: 36, bottom: 52 };

interface FrameOpts {
  xDomain: [number, number];
  yDomain: [number, number];
  xLabel: string;
  yLabel: string;
  title: string;
  xLog?: boolean;
  xTicks?: number[];
  yTicks?: number[];
}

interface Frame {
  x: Scale;
  y: Scale;
  parts: string[];
  plotLeft: number;
  plotRight: number;
  plotTop: number;
  plotBottom: number;
}

function frame(opts: FrameOpts): Frame {
  const plotLeft = MARGIN.left;
  const plotRight = W - MARGIN.right;
  const plotTop = MARGIN.top;
  const plotBottom = H - MARGIN.bottom;
  const x = opts.xLog
    ? logScale(opts.xDomain, [plotLeft, plotRight])
    : linearScale(opts.xDomain, [plotLeft, plotRight]);
  const y = linearScale(opts.yDomain, [plotBottom, plotTop]);

  const xTicks =
    opts.xTicks ??
    (opts.xLog
      ? logTicks(opts.xDomain[0], opts.xDomain[1])
      : ticks(opts.xDomain[0], opts.xDomain[1], 6));
  const yTicks = opts.yTicks ?? ticks(opts.yDomain[0], opts.yDomain[1], 6);

  const axisParts: string[] = [];
  for (const t of xTicks) {
    const px = x(t);
    axisParts.push(line(px, plotBottom, px, plotBottom + 5, { stroke: "black" }));
    axisParts.push(line(px, plotTop, px, plotBottom, { stroke: "#dddddd" }));
    axisParts.push(textEl(px, plotBottom + 20, formatTick(t), { "text-anchor": "middle" }));
  }
  for (const t of yTicks) {
    const py = y(t);
    axisParts.push(line(plotLeft - 5, py, plotLeft, py, { stroke: "black" }));
    axisParts.push(line(plotLeft, py, plotRight, py, { stroke: "#dddddd" }));
    axisParts.push(
      textEl(plotLeft - 9, py + 4, formatTick(t), { "text-anchor": "end" }),
    );
  }
  axisParts.push(line(plotLeft, plotBottom, plotRight, plotBottom, { stroke: "black" }));
  axisParts.push(line(plotLeft, plotTop, plotLeft, plotBottom, { stroke: "black" }));

  const parts: string[] = [
    el("g", { "data-axis": "x", "data-scale": opts.xLog ? "log" : "linear" }, axisParts),
    textEl((plotLeft + plotRight) / 2, H - 14, opts.xLabel, { "text-anchor": "middle" }),
    textEl(18, (plotTop + plotBottom) / 2, opts.yLabel, {
      "text-anchor": "middle",
      transform: `rotate(-90 18 ${(plotTop + plotBottom) / 2})`,
    }),
    textEl((plotLeft + plotRight) / 2, 20, opts.title, {
      "text-anchor": "middle",
      "font-size": 14,
    }),
  ];
  return { x, y, parts, plotLeft, plotRight, plotTop, plotBottom };
}

function legend(f: Frame, entries: Array<[string, string]>): string[] {
  return entries.map(([label, color], i) => {
    const y = f.plotTop + 14 + i * 18;
    return el("g", {}, [
      line(f.plotRight + 8, y, f.plotRight + 28, y, { stroke: color, "stroke-width": 2 }),
      textEl(f.plotRight + 33, y + 4, label, { "font-size": 11 }),
    ]);
  });
}

function errorBar(f: Frame, px: number, mean: number, std: number, color: string): string {
  const lo = f.y(mean - std);
  const hi = f.y(mean + std);
  return el("g", {}, [
    line(px, lo, px, hi, { stroke: color }),
    line(px - 3, lo, px + 3, lo, { stroke: color }),
    line(px - 3, hi, px + 3, hi, { stroke: color }),
  ]);
}

/** Per-state occupancy over time with the time axis in log coordinates. */
export function timeseriesChart(table: Table): string {
  const countCols = table.columns.filter((c) => c.startsWith("n_"));
  if (countCols.length === 0) throw new Error('no "n_*" state-count columns to plot');
  // t=0 cannot sit on a log axis; series start at the first positive time
  const rows = table.rows.filter((r) => Number(r.t) > 0);
  if (rows.length === 0) throw new Error("no samples at positive times");
  const t = rows.map((r) => Number(r.t));
  const maxCount = Math.max(...countCols.map((c) => Math.max(...rows.map((r) => Number(r[c])))));

  const f = frame({
    xDomain: [Math.min(...t), Math.max(...t)],
    yDomain: [0, maxCount],
    xLabel: "t",
    yLabel: "agents per game state",
    title: "Game-state occupancy over time",
    xLog: true,
  });
  countCols.forEach((col, i) => {
    const pts = rows.map((r, j) => [f.x(t[j]), f.y(Number(r[col]))] as [number, number]);
    f.parts.push(polyline(pts, { stroke: seriesColor(i), "stroke-width": 1.5 }));
  });
  const fcScale = linearScale([0, 1], [f.plotBottom, f.plotTop]);
  const fcPts = rows.map((r, j) => [f.x(t[j]), fcScale(Number(r.f_c))] as [number, number]);
  f.parts.push(polyline(fcPts, { stroke: "#555555", "stroke-dasharray": "4 3" }));
  f.parts.push(
    ...legend(f, [
      ...countCols.map((c, i) => [c, seriesColor(i)] as [string, string]),
      ["f_c (0 to 1)", "#555555"],
    ]),
  );
  return svgDoc(W, H, f.parts);
}

/** Occupancy histograms, one panel per game state, one series per swept value. */
export function distChart(table: Table): string {
  const states = distinct(table, "state").sort((a, b) => Number(a) - Number(b));
  const values = distinct(table, "value");
  const param = table.rows[0].param;
  const maxProb = Math.max(...numbers(table, "probability"));

  const panelGap = 14;
  const left = 56;
  const right = 20;
  const top = 48;
  const bottom = 50;
  const panelW = (W - left - right - panelGap * (states.length - 1)) / states.length;
  const parts: string[] = [
    textEl(W / 2, 20, "Distribution of agents per game state", {
      "text-anchor": "middle",
      "font-size": 14,
    }),
    textEl(W / 2, H - 12, "agents in state", { "text-anchor": "middle" }),
    textEl(16, (top + H - bottom) / 2, "probability", {
      "text-anchor": "middle",
      transform: `rotate(-90 16 ${(top + H - bottom) / 2})`,
    }),
  ];

  states.forEach((state, s) => {
    const x0 = left + s * (panelW + panelGap);
    const inPanel = table.rows.filter((r) => r.state === state);
    const counts = inPanel.map((r) => Number(r.count));
    const [cLo, cHi] = extent(counts);
    const x = linearScale([cLo, cHi], [x0, x0 + panelW]);
    const y = linearScale([0, maxProb], [H - bottom, top]);

    parts.push(rect(x0, top, panelW, H - top - bottom, { fill: "none", stroke: "black" }));
    parts.push(textEl(x0 + panelW / 2, top - 8, `state ${state}`, { "text-anchor": "middle" }));
    for (const tick of ticks(cLo, cHi, 4)) {
      parts.push(
        textEl(x(tick), H - bottom + 16, formatTick(tick), {
          "text-anchor": "middle",
          "font-size": 10,
        }),
      );
    }
    if (s === 0) {
      for (const tick of ticks(0, maxProb, 5)) {
        parts.push(textEl(x0 - 6, y(tick) + 3, formatTick(tick), { "text-anchor": "end", "font-size": 10 }));
      }
    }
    values.forEach((value, v) => {
      const series = inPanel
        .filter((r) => r.value === value)
        .sort((a, b) => Number(a.count) - Number(b.count));
      const pts = series.map(
        (r) => [x(Number(r.count)), y(Number(r.probability))] as [number, number],
      );
      parts.push(polyline(pts, { stroke: seriesColor(v), "stroke-width": 1.2 }));
      for (const [px, py] of pts) parts.push(circle(px, py, 1.6, { fill: seriesColor(v) }));
    });
  });

  values.forEach((value, v) => {
    const lx = left + 10 + v * 150;
    parts.push(line(lx, 34, lx + 20, 34, { stroke: seriesColor(v), "stroke-width": 2 }));
    parts.push(textEl(lx + 25, 38, `${param} = ${value}`, { "font-size": 11 }));
  });
  return svgDoc(W, H, parts);
}

function sweepLines(
  table: Table,
  groupCol: string,
  xCol: string,
  title: string,
): string {
  const groups = distinct(table, groupCol);
  const xs = numbers(table, xCol);
  const f = frame({
    xDomain: extent(xs),
    yDomain: [0, 1],
    xLabel: xCol,
    yLabel: "cooperation frequency",
    title,
  });
  groups.forEach((g, i) => {
    const rows = table.rows
      .filter((r) => r[groupCol] === g)
      .sort((a, b) => Number(a[xCol]) - Number(b[xCol]));
    const color = seriesColor(i);
    const pts = rows.map(
      (r) => [f.x(Number(r[xCol])), f.y(Number(r.fc_mean))] as [number, number],
    );
    f.parts.push(polyline(pts, { stroke: color, "stroke-width": 1.5 }));
    rows.forEach((r, j) => {
      f.parts.push(circle(pts[j][0], pts[j][1], 2.5, { fill: color }));
      f.parts.push(errorBar(f, pts[j][0], Number(r.fc_mean), Number(r.fc_std), color));
    });
  });
  f.parts.push(...legend(f, groups.map((g, i) => [`${groupCol} = ${g}`, seriesColor(i)])));
  return svgDoc(W, H, f.parts);
}

export function muCurvesChart(table: Table): string {
  return sweepLines(table, "mu2", "mu1", "Cooperation vs down-rate mu1");
}

export function scaleSweepChart(table: Table): string {
  const groups = distinct(table, "pair");
  const xs = numbers(table, "size");
  const f = frame({
    xDomain: extent(xs),
    yDomain: [0, 1],
    xLabel: "population size",
    yLabel: "cooperation frequency",
    title: "Cooperation across population sizes",
    xTicks: [...new Set(xs)].sort((a, b) => a - b),
  });
  groups.forEach((g, i) => {
    const rows = table.rows
      .filter((r) => r.pair === g)
      .sort((a, b) => Number(a.size) - Number(b.size));
    const color = seriesColor(i);
    const pts = rows.map(
      (r) => [f.x(Number(r.size)), f.y(Number(r.fc_mean))] as [number, number],
    );
    f.parts.push(polyline(pts, { stroke: color, "stroke-width": 1.5 }));
    rows.forEach((r, j) => {
      f.parts.push(circle(pts[j][0], pts[j][1], 2.5, { fill: color }));
      f.parts.push(errorBar(f, pts[j][0], Number(r.fc_mean), Number(r.fc_std), color));
    });
  });
  f.parts.push(...legend(f, groups.map((g, i) => [g, seriesColor(i)])));
  return svgDoc(W, H, f.parts);
}

export function scheduleCompareChart(table: Table): string {
  const groups = distinct(table, "schedule");
  const t = numbers(table, "t");
  const f = frame({
    xDomain: extent(t),
    yDomain: [0, 1],
    xLabel: "t",
    yLabel: "cooperation frequency",
    title: "Cooperation under different revision schedules",
  });
  groups.forEach((g, i) => {
    const rows = table.rows.filter((r) => r.schedule === g);
    const pts = rows.map((r) => [f.x(Number(r.t)), f.y(Number(r.fc))] as [number, number]);
    f.parts.push(polyline(pts, { stroke: seriesColor(i), "stroke-width": 1.2 }));
  });
  f.parts.push(...legend(f, groups.map((g, i) => [g, seriesColor(i)])));
  return svgDoc(W, H, f.parts);
}

function heatmap(table: Table, xCol: string, yCol: string, title: string): string {
  const xVals = distinct(table, xCol)
    .map(Number)
    .sort((a, b) => a - b);
  const yVals = distinct(table, yCol)
    .map(Number)
    .sort((a, b) => a - b);
  const left = 70;
  const right = 90;
  const top = 42;
  const bottom = 56;
  const cellW = (W - left - right) / xVals.length;
  const cellH = (H - top - bottom) / yVals.length;

  const parts: string[] = [
    textEl(W / 2, 20, title, { "text-anchor": "middle", "font-size": 14 }),
    textEl((left + W - right) / 2, H - 14, xCol, { "text-anchor": "middle" }),
    textEl(18, (top + H - bottom) / 2, yCol, {
      "text-anchor": "middle",
      transform: `rotate(-90 18 ${(top + H - bottom) / 2})`,
    }),
  ];

  // fc is a fraction, so the color domain is fixed at [0, 1]
  for (const row of table.rows) {
    const xi = xVals.indexOf(Number(row[xCol]));
    const yi = yVals.indexOf(Number(row[yCol]));
    const fc = Number(row.fc_mean);
    const px = left + xi * cellW;
    const py = H - bottom - (yi + 1) * cellH;
    parts.push(rect(px, py, cellW, cellH, { fill: divergingColor(fc), stroke: "#888888" }));
    parts.push(
      textEl(px + cellW / 2, py + cellH / 2 + 4, fc.toFixed(3), {
        "text-anchor": "middle",
        "font-size": 10,
      }),
    );
  }
  xVals.forEach((v, i) => {
    parts.push(
      textEl(left + (i + 0.5) * cellW, H - bottom + 18, formatTick(v), {
        "text-anchor": "middle",
      }),
    );
  });
  yVals.forEach((v, i) => {
    parts.push(
      textEl(left - 8, H - bottom - (i + 0.5) * cellH + 4, formatTick(v), {
        "text-anchor": "end",
      }),
    );
  });

  const barX = W - right + 26;
  const steps = 40;
  const barH = H - top - bottom;
  for (let i = 0; i < steps; i++) {
    const t0 = i / steps;
    parts.push(
      rect(barX, H - bottom - (i + 1) * (barH / steps), 16, barH / steps + 0.5, {
        fill: divergingColor(t0 + 0.5 / steps),
      }),
    );
  }
  parts.push(rect(barX, top, 16, barH, { fill: "none", stroke: "black" }));
  for (const v of [0, 0.5, 1]) {
    parts.push(textEl(barX + 22, H - bottom - v * barH + 4, v.toFixed(1), { "font-size": 10 }));
  }
  parts.push(textEl(barX + 8, top - 8, "f_c", { "text-anchor": "middle", "font-size": 11 }));
  return svgDoc(W, H, parts);
}

export function lambdaHeatmapChart(table: Table): string {
  return heatmap(table, "lambda0", "lambda1", "Cooperation across chain up-rates");
}

export function payoffHeatmapChart(table: Table): string {
  return heatmap(table, "b", "r", "Cooperation across payoff parameters");
}
