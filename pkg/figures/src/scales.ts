export type Scale = (x: number) => number;

export function extent(xs: number[]): [number, number] {
  if (xs.length === 0) throw new Error("extent of empty array");
  let lo = xs[0];
  let hi = xs[0];
  for (const x of xs) {
    if (x < lo) lo = x;
    if (x > hi) hi = x;
  }
  return [lo, hi];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1; // degenerate domain maps to range start
  return (x) => r0 + ((x - d0) / span) * (r1 - r0);
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  const inner = linearScale([Math.log10(d0), Math.log10(d1)], range);
  return (x) => inner(Math.log10(x));
}

/** Round-numbered tick positions covering [lo, hi]. */
export function ticks(lo: number, hi: number, count = 5): number[] {
  if (lo === hi) return [lo];
  const rawStep = (hi - lo) / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= rawStep) {
      step = mag * m;
      break;
    }
  }
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Number(v.toFixed(12)));
  }
  return out;
}

/** Powers of ten spanning [lo, hi], for log axes. */
export function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    out.push(Math.pow(10, e));
  }
  return out.length > 0 ? out : [lo];
}

const COLD = [33, 102, 172]; // deep blue
const MID = [247, 247, 247];
const WARM = [178, 24, 43]; // deep red

function mix(a: number[], b: number[], t: number): string {
  const c = a.map((av, i) => Math.round(av + (b[i] - av) * t));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

/** Diverging cold-to-warm color for t in [0, 1]; warm end = high values. */
export function divergingColor(t: number): string {
  const u = Math.min(Math.max(t, 0), 1);
  return u < 0.5 ? mix(COLD, MID, u * 2) : mix(MID, WARM, (u - 0.5) * 2);
}

/** Categorical palette for line series. */
export const SERIES_COLORS = [
  "#4477aa",
  "#ee6677",
  "#228833",
  "#ccbb44",
  "#66ccee",
  "#aa3377",
  "#bbbbbb",
];

export function seriesColor(i: number): string {
  return SERIES_COLORS[i % SERIES_COLORS.length];
}

export function formatTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e5 || Math.abs(v) < 1e-3)) return v.toExponential(0);
  return Number(v.toPrecision(6)).toString();
}
