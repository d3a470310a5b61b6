/** Minimal SVG string builder; enough for static line charts and heat maps. */

export type Attrs = Record<string, string | number>;

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function el(tag: string, attrs: Attrs = {}, children: string[] | string = []): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${v}"`)
    .join("");
  const body = Array.isArray(children) ? children.join("") : children;
  return body === "" ? `<${tag}${attrText}/>` : `<${tag}${attrText}>${body}</${tag}>`;
}

export function textEl(x: number, y: number, s: string, attrs: Attrs = {}): string {
  return el(
    "text",
    { x: round(x), y: round(y), "font-family": "sans-serif", ...attrs },
    escapeText(s),
  );
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs = {}): string {
  return el("line", { x1: round(x1), y1: round(y1), x2: round(x2), y2: round(y2), ...attrs });
}

export function polyline(points: Array<[number, number]>, attrs: Attrs = {}): string {
  const pts = points.map(([x, y]) => `${round(x)},${round(y)}`).join(" ");
  return el("polyline", { points: pts, fill: "none", ...attrs });
}

export function circle(cx: number, cy: number, r: number, attrs: Attrs = {}): string {
  return el("circle", { cx: round(cx), cy: round(cy), r, ...attrs });
}

export function rect(x: number, y: number, w: number, h: number, attrs: Attrs = {}): string {
  return el("rect", { x: round(x), y: round(y), width: round(w), height: round(h), ...attrs });
}

export function svgDoc(width: number, height: number, body: string[]): string {
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width,
      height,
      viewBox: `0 0 ${width} ${height}`,
      "font-size": 12,
    },
    [rect(0, 0, width, height, { fill: "white" }), ...body],
  );
}

// 2 decimals keeps files small and output stable across platforms
function round(v: number): number {
  return Math.round(v * 100) / 100;
}
