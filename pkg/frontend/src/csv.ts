/**
 * Minimal CSV reader for the simulator's outputs: plain comma-separated
 * values, one header row, no quoting. Numeric cells may carry the Python
 * spellings of non-finite floats ('inf', '-inf', 'nan').
 */

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("CSV file is empty");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `row ${i + 1} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    return cells;
  });
  return { header, rows };
}

const NONFINITE: Record<string, number> = {
  inf: Infinity,
  "+inf": Infinity,
  "-inf": -Infinity,
  infinity: Infinity,
  "-infinity": -Infinity,
  nan: NaN,
  "-nan": NaN,
};

export function toNumber(token: string): number {
  const special = NONFINITE[token.trim().toLowerCase()];
  if (special !== undefined) return special;
  const value = Number(token);
  if (token.trim() === "") return NaN;
  return value;
}

/** Typed column access; missing names throw rather than yielding NaN rows. */
export function column(table: CsvTable, name: string): number[] {
  const index = table.header.indexOf(name);
  if (index < 0) {
    throw new Error(`CSV has no column '${name}'`);
  }
  return table.rows.map((row) => toNumber(row[index]));
}

export function textColumn(table: CsvTable, name: string): string[] {
  const index = table.header.indexOf(name);
  if (index < 0) {
    throw new Error(`CSV has no column '${name}'`);
  }
  return table.rows.map((row) => row[index]);
}
