import { scaleLinear, ScaleLinear } from 'd3-scale';

/** Deterministic number formatting for SVG coordinates. */
export function fmt(x: number): string {
  if (!isFinite(x)) return '0';
  const s = x.toFixed(2);
  return s === '-0.00' ? '0.00' : s;
}

export interface PanelFrame {
  x: number;
  y: number;
  width: number;
  height: number;
  xDomain: [number, number];
  yDomain: [number, number];
  xLabel: string;
  yLabel: string;
  title?: string;
}

/** A plot panel: pixel frame, data scales, and accumulated SVG body. */
export class Panel {
  readonly xScale: ScaleLinear<number, number>;
  readonly yScale: ScaleLinear<number, number>;
  private parts: string[] = [];

  constructor(readonly frame: PanelFrame) {
    this.xScale = scaleLinear().domain(frame.xDomain).range([frame.x, frame.x + frame.width]);
    this.yScale = scaleLinear().domain(frame.yDomain).range([frame.y + frame.height, frame.y]);
  }

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.add(
      `<circle cx="${fmt(this.xScale(x))}" cy="${fmt(this.yScale(y))}" r="${r}" fill="${fill}"/>`,
    );
  }

  polyline(xs: number[], ys: number[], stroke: string, width = 1.2): void {
    const pts = xs.map((x, i) => `${fmt(this.xScale(x))},${fmt(this.yScale(ys[i]))}`).join(' ');
    this.add(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  /** Filled cell of a heat map, given data-space corner coordinates. */
  cell(x0: number, x1: number, y0: number, y1: number, fill: string): void {
    const px = this.xScale(x0);
    const py = this.yScale(y1);
    const w = this.xScale(x1) - px;
    const h = this.yScale(y0) - py;
    this.add(
      `<rect x="${fmt(px)}" y="${fmt(py)}" width="${fmt(Math.max(w, 0))}" ` +
        `height="${fmt(Math.max(h, 0))}" fill="${fill}"/>`,
    );
  }

  /** Axis box, ticks, labels, and optional title. */
  decorate(): string {
    const f = this.frame;
    const out: string[] = [];
    out.push(
      `<rect x="${fmt(f.x)}" y="${fmt(f.y)}" width="${fmt(f.width)}" height="${fmt(f.height)}" ` +
        'fill="none" stroke="#222" stroke-width="1"/>',
    );
    for (const t of this.xScale.ticks(5)) {
      const px = this.xScale(t);
      out.push(`<line x1="${fmt(px)}" y1="${fmt(f.y + f.height)}" x2="${fmt(px)}" y2="${fmt(f.y + f.height + 4)}" stroke="#222"/>`);
      out.push(
        `<text x="${fmt(px)}" y="${fmt(f.y + f.height + 16)}" font-size="10" text-anchor="middle">${tick(t)}</text>`,
      );
    }
    for (const t of this.yScale.ticks(5)) {
      const py = this.yScale(t);
      out.push(`<line x1="${fmt(f.x - 4)}" y1="${fmt(py)}" x2="${fmt(f.x)}" y2="${fmt(py)}" stroke="#222"/>`);
      out.push(
        `<text x="${fmt(f.x - 6)}" y="${fmt(py + 3)}" font-size="10" text-anchor="end">${tick(t)}</text>`,
      );
    }
    out.push(
      `<text x="${fmt(f.x + f.width / 2)}" y="${fmt(f.y + f.height + 32)}" font-size="11" text-anchor="middle">${escapeXml(f.xLabel)}</text>`,
    );
    out.push(
      `<text x="${fmt(f.x - 38)}" y="${fmt(f.y + f.height / 2)}" font-size="11" text-anchor="middle" ` +
        `transform="rotate(-90 ${fmt(f.x - 38)} ${fmt(f.y + f.height / 2)})">${escapeXml(f.yLabel)}</text>`,
    );
    if (f.title) {
      out.push(
        `<text x="${fmt(f.x + f.width / 2)}" y="${fmt(f.y - 6)}" font-size="11" text-anchor="middle" font-style="italic">${escapeXml(f.title)}</text>`,
      );
    }
    return out.join('\n');
  }

  body(): string {
    return this.parts.join('\n');
  }

  render(): string {
    return this.body() + '\n' + this.decorate();
  }
}

function tick(t: number): string {
  if (t === 0) return '0';
  const a = Math.abs(t);
  if (a >= 0.01 && a < 10000) {
    return String(parseFloat(t.toPrecision(4)));
  }
  return t.toExponential(1);
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

/** Assemble the final document; fixed pixel dimensions for reproducibility. */
export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    body +
    '\n</svg>\n'
  );
}
