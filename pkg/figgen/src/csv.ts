import { readFileSync } from 'fs';
import Papa from 'papaparse';

/** One parsed CSV: column names plus rows of numbers/strings. */
export interface Table {
  columns: string[];
  rows: Record<string, number | string>[];
}

export class CsvError extends Error {}

/** Load a CSV produced by the simulation CLI; numeric cells become numbers. */
export function loadCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, 'utf8');
  } catch (err) {
    throw new CsvError(`cannot read ${path}: ${(err as Error).message}`);
  }
  if (text.trim() === '') {
    throw new CsvError(`empty CSV: ${path}`);
  }
  const parsed = Papa.parse<Record<string, number | string>>(text.trim(), {
    header: true,
    delimiter: ',',
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new CsvError(`parse error in ${path}: ${e.message} (row ${e.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0 || parsed.data.length === 0) {
    throw new CsvError(`empty CSV: ${path}`);
  }
  return { columns, rows: parsed.data };
}

/** Assert the table carries every required column; fail loudly otherwise. */
export function requireColumns(table: Table, cols: string[], name: string): void {
  for (const c of cols) {
    if (!table.columns.includes(c)) {
      throw new CsvError(`${name} is missing column '${c}' (has: ${table.columns.join(', ')})`);
    }
  }
}

/** Numeric column as an array. */
export function numbers(table: Table, col: string): number[] {
  return table.rows.map((r) => Number(r[col]));
}

/** Rows matching a predicate, as a new table view. */
export function filterRows(
  table: Table,
  pred: (r: Record<string, number | string>) => boolean,
): Table {
  return { columns: table.columns, rows: table.rows.filter(pred) };
}
