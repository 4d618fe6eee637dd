export { loadCsv, requireColumns, numbers, filterRows, CsvError } from './csv.js';
export type { Table } from './csv.js';
export { Panel, svgDocument, fmt, escapeXml } from './svg.js';
export type { PanelFrame } from './svg.js';
export { heatmapPanel, scatterPanel, linePanel, profilePanel, cellEdges, colorOf } from './plots.js';
export { RECIPES, render } from './recipes.js';
export type { Recipe, RenderOptions } from './recipes.js';
