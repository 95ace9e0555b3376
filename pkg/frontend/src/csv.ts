/**
 * Reader for jumpctl's CSV outputs: one optional '#' metadata line, a header
 * row, comma-separated cells with '.' decimal point. Numeric cells may carry
 * '-inf' / 'inf'; anything non-numeric stays a string (e.g. regime tags).
 */

import { readFileSync } from "node:fs";

export type Cell = number | string;

export interface Table {
  columns: string[];
  rows: Record<string, Cell>[];
  meta: string | null;
}

export function parseCell(cell: string): Cell {
  const trimmed = cell.trim();
  if (trimmed === "-inf" || trimmed === "-Infinity") return -Infinity;
  if (trimmed === "inf" || trimmed === "Infinity") return Infinity;
  if (trimmed !== "" && !Number.isNaN(Number(trimmed))) return Number(trimmed);
  return trimmed;
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  let meta: string | null = null;
  let start = 0;
  if (lines.length > 0 && lines[0].startsWith("#")) {
    meta = lines[0];
    start = 1;
  }
  if (lines.length <= start) {
    throw new Error("CSV has no header row");
  }
  const columns = lines[start].split(",").map((c) => c.trim());
  const rows: Record<string, Cell>[] = [];
  for (const line of lines.slice(start + 1)) {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `row has ${cells.length} cells, header has ${columns.length}: ${line}`,
      );
    }
    const row: Record<string, Cell> = {};
    columns.forEach((name, i) => {
      row[name] = parseCell(cells[i]);
    });
    rows.push(row);
  }
  return { columns, rows, meta };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Throw a descriptive error when a documented column is absent. */
export function requireColumns(table: Table, needed: string[], context: string): void {
  const missing = needed.filter((name) => !table.columns.includes(name));
  if (missing.length > 0) {
    throw new Error(
      `${context}: missing column(s) ${missing.join(", ")} ` +
        `(have: ${table.columns.join(", ")})`,
    );
  }
}

/** Numeric accessor with a descriptive failure on type surprises. */
export function num(row: Record<string, Cell>, column: string): number {
  const value = row[column];
  if (typeof value !== "number") {
    throw new Error(`column ${column} holds non-numeric cell ${String(value)}`);
  }
  return value;
}
