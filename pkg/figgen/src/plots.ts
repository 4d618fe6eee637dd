import { interpolateViridis } from 'd3-scale-chromatic';

import { Table, numbers, requireColumns, CsvError } from './csv.js';
import { Panel, PanelFrame } from './svg.js';

export interface HeatmapOptions {
  log?: boolean;
  vmax?: number;
}

/** Map a normalized value in [0, 1] to a viridis color. */
export function colorOf(v: number): string {
  return interpolateViridis(Math.min(Math.max(v, 0), 1));
}

/**
 * Dense heat map from long-format rows (xCol, yCol, vCol).
 *
 * The grid is inferred from the sorted unique x/y values; display is linear
 * in the value by default, with an optional log compression for dynamic
 * range (floored at 1e-6 of the maximum).
 */
export function heatmapPanel(
  frame: Omit<PanelFrame, 'xDomain' | 'yDomain'>,
  table: Table,
  xCol: string,
  yCol: string,
  vCol: string,
  name: string,
  opts: HeatmapOptions = {},
): Panel {
  requireColumns(table, [xCol, yCol, vCol], name);
  const xs = uniqueSorted(numbers(table, xCol));
  const ys = uniqueSorted(numbers(table, yCol));
  if (xs.length === 0 || ys.length === 0) {
    throw new CsvError(`${name}: no data for heat map`);
  }
  const xEdges = cellEdges(xs);
  const yEdges = cellEdges(ys);
  const panel = new Panel({
    ...frame,
    xDomain: [xEdges[0], xEdges[xEdges.length - 1]],
    yDomain: [yEdges[0], yEdges[yEdges.length - 1]],
  });
  const xi = new Map(xs.map((v, i) => [v, i]));
  const yi = new Map(ys.map((v, i) => [v, i]));
  let vmax = opts.vmax ?? 0;
  if (!opts.vmax) {
    for (const r of table.rows) vmax = Math.max(vmax, Number(r[vCol]));
  }
  if (vmax <= 0) vmax = 1;
  const floor = vmax * 1e-6;
  for (const r of table.rows) {
    const i = xi.get(Number(r[xCol]));
    const j = yi.get(Number(r[yCol]));
    if (i === undefined || j === undefined) continue;
    const v = Number(r[vCol]);
    const norm = opts.log
      ? Math.log(Math.max(v, floor) / floor) / Math.log(vmax / floor)
      : v / vmax;
    panel.cell(xEdges[i], xEdges[i + 1], yEdges[j], yEdges[j + 1], colorOf(norm));
  }
  return panel;
}

/** Scatter panel from two columns. */
export function scatterPanel(
  frame: PanelFrame,
  table: Table,
  xCol: string,
  yCol: string,
  name: string,
  color = '#1f77b4',
  radius = 1.5,
): Panel {
  requireColumns(table, [xCol, yCol], name);
  const panel = new Panel(frame);
  const xs = numbers(table, xCol);
  const ys = numbers(table, yCol);
  for (let i = 0; i < xs.length; i++) {
    panel.circle(xs[i], ys[i], radius, color);
  }
  return panel;
}

/** Connected line panel (rows taken in x order). */
export function linePanel(
  frame: PanelFrame,
  table: Table,
  xCol: string,
  yCol: string,
  name: string,
  color = '#d62728',
  markers = true,
): Panel {
  requireColumns(table, [xCol, yCol], name);
  const panel = new Panel(frame);
  const order = table.rows
    .map((r, i) => [Number(r[xCol]), i] as [number, number])
    .sort((a, b) => a[0] - b[0])
    .map(([, i]) => i);
  const xs = order.map((i) => Number(table.rows[i][xCol]));
  const ys = order.map((i) => Number(table.rows[i][yCol]));
  panel.polyline(xs, ys, color);
  if (markers) {
    for (let i = 0; i < xs.length; i++) panel.circle(xs[i], ys[i], 2, color);
  }
  return panel;
}

/** Site-profile panel (|C|^2 vs n) drawn as a line with markers. */
export function profilePanel(
  frame: Omit<PanelFrame, 'yDomain'> & { yDomain?: [number, number] },
  table: Table,
  name: string,
  color = '#2ca02c',
): Panel {
  requireColumns(table, ['n', 'abs2'], name);
  const xs = numbers(table, 'n');
  const ys = numbers(table, 'abs2');
  const ymax = Math.max(...ys, 1e-12);
  const panel = new Panel({ ...frame, yDomain: frame.yDomain ?? [0, ymax * 1.1] });
  const order = xs.map((x, i) => [x, i] as [number, number]).sort((a, b) => a[0] - b[0]);
  panel.polyline(
    order.map(([x]) => x),
    order.map(([, i]) => ys[i]),
    color,
  );
  for (const [x, i] of order) panel.circle(x, ys[i], 1.6, color);
  return panel;
}

function uniqueSorted(values: number[]): number[] {
  return Array.from(new Set(values)).sort((a, b) => a - b);
}

/** Cell boundaries from sorted cell centers (midpoints, clamped ends). */
export function cellEdges(centers: number[]): number[] {
  if (centers.length === 1) {
    const c = centers[0];
    const h = c === 0 ? 0.5 : Math.abs(c) * 0.05 + 1e-12;
    return [c - h, c + h];
  }
  const edges: number[] = [centers[0] - (centers[1] - centers[0]) / 2];
  for (let i = 0; i < centers.length - 1; i++) {
    edges.push((centers[i] + centers[i + 1]) / 2);
  }
  edges.push(
    centers[centers.length - 1] + (centers[centers.length - 1] - centers[centers.length - 2]) / 2,
  );
  return edges;
}
