import { readFileSync } from "fs";
import Papa from "papaparse";

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export class MissingColumnError extends Error {
  constructor(public column: string, source: string) {
    super(`missing column "${column}" in ${source}`);
    this.name = "MissingColumnError";
  }
}

export class MissingDataError extends Error {
  constructor(source: string) {
    super(`no data rows in ${source}`);
    this.name = "MissingDataError";
  }
}

export function parseTable(text: string, source = "<string>"): Table {
  if (text.trim() === "") throw new MissingDataError(source);
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  // single-column input trips papaparse's delimiter sniffing; not an error
  const fatal = parsed.errors.filter((e) => e.code !== "UndetectableDelimiter");
  if (fatal.length > 0) {
    throw new Error(`cannot parse ${source}: ${fatal[0].message} (row ${fatal[0].row})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0 || parsed.data.length === 0) {
    throw new MissingDataError(source);
  }
  return { columns, rows: parsed.data };
}

export function readTable(path: string): Table {
  return parseTable(readFileSync(path, "utf-8"), path);
}

/** Throw MissingColumnError for the first required column not present. */
export function requireColumns(table: Table, needed: string[], source: string): void {
  for (const col of needed) {
    if (!table.columns.includes(col)) throw new MissingColumnError(col, source);
  }
}

export function numbers(table: Table, column: string): number[] {
  return table.rows.map((row) => {
    const v = Number(row[column]);
    if (Number.isNaN(v)) {
      throw new Error(`column "${column}" has non-numeric value "${row[column]}"`);
    }
    return v;
  });
}

/** Distinct values of a column, in first-seen order. */
export function distinct(table: Table, column: string): string[] {
  const seen: string[] = [];
  for (const row of table.rows) {
    if (!seen.includes(row[column])) seen.push(row[column]);
  }
  return seen;
}
