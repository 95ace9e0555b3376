/** Minimal SVG assembly: linear scales, axes, marks. No DOM required. */

export interface Extent {
  min: number;
  max: number;
}

export function extend(values: number[], pad = 0.05): Extent {
  const finite = values.filter(Number.isFinite);
  if (finite.length === 0) return { min: 0, max: 1 };
  let min = Math.min(...finite);
  let max = Math.max(...finite);
  if (min === max) {
    min -= 1;
    max += 1;
  }
  const gap = (max - min) * pad;
  return { min: min - gap, max: max + gap };
}

export class Scale {
  constructor(
    readonly domain: Extent,
    readonly range: [number, number],
  ) {}

  at(x: number): number {
    const { min, max } = this.domain;
    const [lo, hi] = this.range;
    return lo + ((x - min) / (max - min)) * (hi - lo);
  }

  ticks(n = 5): number[] {
    const { min, max } = this.domain;
    const step = (max - min) / (n - 1);
    return Array.from({ length: n }, (_, i) => min + i * step);
  }
}

export function fmt(value: number): string {
  if (!Number.isFinite(value)) return value > 0 ? "inf" : "-inf";
  const rounded = Number(value.toPrecision(4));
  return String(rounded);
}

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
  x: Scale;
  y: Scale;
}

export function makeFrame(
  xDomain: Extent,
  yDomain: Extent,
  width = 640,
  height = 420,
): Frame {
  const margin = { top: 36, right: 20, bottom: 40, left: 56 };
  return {
    width,
    height,
    margin,
    x: new Scale(xDomain, [margin.left, width - margin.right]),
    y: new Scale(yDomain, [height - margin.bottom, margin.top]),
  };
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class Svg {
  private parts: string[] = [];

  constructor(readonly frame: Frame) {}

  line(x1: number, y1: number, x2: number, y2: number, attrs = ""): void {
    this.parts.push(
      `<line x1="${r2(x1)}" y1="${r2(y1)}" x2="${r2(x2)}" y2="${r2(y2)}" ${attrs}/>`,
    );
  }

  circle(cx: number, cy: number, radius: number, attrs = ""): void {
    this.parts.push(`<circle cx="${r2(cx)}" cy="${r2(cy)}" r="${radius}" ${attrs}/>`);
  }

  rect(x: number, y: number, w: number, h: number, attrs = ""): void {
    this.parts.push(`<rect x="${r2(x)}" y="${r2(y)}" width="${r2(w)}" height="${r2(h)}" ${attrs}/>`);
  }

  text(x: number, y: number, body: string, attrs = ""): void {
    this.parts.push(`<text x="${r2(x)}" y="${r2(y)}" ${attrs}>${esc(body)}</text>`);
  }

  path(d: string, attrs = ""): void {
    this.parts.push(`<path d="${d}" ${attrs}/>`);
  }

  raw(markup: string): void {
    this.parts.push(markup);
  }

  axes(xLabel: string, yLabel: string): void {
    const { x, y, height, width, margin } = this.frame;
    const floor = height - margin.bottom;
    this.line(margin.left, floor, width - margin.right, floor, 'stroke="#333"');
    this.line(margin.left, margin.top, margin.left, floor, 'stroke="#333"');
    for (const t of x.ticks()) {
      const px = x.at(t);
      this.line(px, floor, px, floor + 4, 'stroke="#333"');
      this.text(px, floor + 16, fmt(t), 'font-size="10" text-anchor="middle" fill="#333"');
    }
    for (const t of y.ticks()) {
      const py = y.at(t);
      this.line(margin.left - 4, py, margin.left, py, 'stroke="#333"');
      this.text(
        margin.left - 7,
        py + 3,
        fmt(t),
        'font-size="10" text-anchor="end" fill="#333"',
      );
    }
    this.text(
      (margin.left + width - margin.right) / 2,
      height - 8,
      xLabel,
      'font-size="11" text-anchor="middle" fill="#333"',
    );
    this.text(
      14,
      margin.top - 10,
      yLabel,
      'font-size="11" text-anchor="start" fill="#333"',
    );
  }

  title(body: string): void {
    const { width } = this.frame;
    this.text(width / 2, 18, body, 'font-size="13" text-anchor="middle" fill="#111"');
  }

  render(): string {
    const { width, height } = this.frame;
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n` +
      `<rect width="${width}" height="${height}" fill="white"/>\n` +
      this.parts.join("\n") +
      `\n</svg>\n`
    );
  }
}

function r2(value: number): string {
  return (Math.round(value * 100) / 100).toString();
}
