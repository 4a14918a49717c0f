/**
 * Figure models built from the simulator's CSV schemas. The model is plain
 * data (named series of x/y points); rendering happens in svg.ts. No measure
 * is ever recomputed here, with the single documented exception of the
 * analytic binomial overlay on histograms.
 */

import { binomialPmf } from "./binomial.js";
import { column, CsvTable } from "./csv.js";

export type FigureKind = "everett" | "overlap" | "histogram";

export interface PlotSpec {
  inputCsv: string;
  figureKind: FigureKind;
  outputImage: string;
  logScaleY: boolean;
}

export type SeriesStyle = "line" | "dashed" | "bars";

export interface Series {
  name: string;
  style: SeriesStyle;
  points: Array<[number, number]>;
}

export interface FigureModel {
  kind: FigureKind;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

export const SCHEMAS: Record<FigureKind, string[]> = {
  everett: [
    "n",
    "p",
    "epsilon",
    "counting_maverick_fraction",
    "born_maverick_weight",
    "log10_born_maverick_weight",
    "hoeffding_bound",
  ],
  overlap: ["n_env", "overlap", "log10_overlap"],
  histogram: ["mode", "n", "trials", "seed", "p", "k", "count"],
};

export function checkSchema(kind: FigureKind, table: CsvTable): void {
  const expected = SCHEMAS[kind];
  const actual = table.header;
  const same =
    actual.length === expected.length &&
    expected.every((name, i) => actual[i] === name);
  if (!same) {
    throw new Error(
      `CSV header does not match the '${kind}' schema: ` +
        `expected [${expected.join(",")}], got [${actual.join(",")}]`,
    );
  }
  if (table.rows.length === 0) {
    throw new Error("CSV contains a header but no data rows");
  }
}

function finitePoints(xs: number[], ys: number[]): Array<[number, number]> {
  const points: Array<[number, number]> = [];
  for (let i = 0; i < xs.length; i++) {
    if (Number.isFinite(xs[i]) && Number.isFinite(ys[i])) {
      points.push([xs[i], ys[i]]);
    }
  }
  return points;
}

function log10All(values: number[]): number[] {
  return values.map((v) => (v > 0 ? Math.log10(v) : -Infinity));
}

function everettFigure(table: CsvTable, logScaleY: boolean): FigureModel {
  const n = column(table, "n");
  let counting = column(table, "counting_maverick_fraction");
  let born = column(table, "born_maverick_weight");
  let bound = column(table, "hoeffding_bound");
  let yLabel = "maverick weight";
  if (logScaleY) {
    counting = log10All(counting);
    // the log column survives underflow of the plain weight
    born = column(table, "log10_born_maverick_weight");
    bound = log10All(bound);
    yLabel = "log10 maverick weight";
  }
  return {
    kind: "everett",
    xLabel: "spins n",
    yLabel,
    series: [
      { name: "counting measure", style: "line", points: finitePoints(n, counting) },
      { name: "Born measure", style: "line", points: finitePoints(n, born) },
      { name: "Hoeffding bound", style: "dashed", points: finitePoints(n, bound) },
    ],
  };
}

function overlapFigure(table: CsvTable, logScaleY: boolean): FigureModel {
  const nEnv = column(table, "n_env");
  const overlap = column(table, "overlap");
  const logOverlap = column(table, "log10_overlap");
  return {
    kind: "overlap",
    xLabel: "environment qubits",
    yLabel: logScaleY ? "log10 |<E+|E->|" : "|<E+|E->|",
    series: [
      {
        name: "record overlap",
        style: "line",
        points: finitePoints(nEnv, logScaleY ? logOverlap : overlap),
      },
    ],
  };
}

function histogramFigure(table: CsvTable, logScaleY: boolean): FigureModel {
  const ks = column(table, "k");
  const counts = column(table, "count");
  const n = column(table, "n")[0];
  const p = column(table, "p")[0];
  const trials = column(table, "trials")[0];
  const empirical = counts.map((c) => c / trials);
  const analytic: number[] = [];
  const analyticK: number[] = [];
  for (let k = 0; k <= n; k++) {
    analyticK.push(k);
    analytic.push(binomialPmf(n, p, k));
  }
  const transform = (values: number[]) => (logScaleY ? log10All(values) : values);
  return {
    kind: "histogram",
    xLabel: "plus count k",
    yLabel: logScaleY ? "log10 frequency" : "frequency",
    series: [
      { name: "sampled", style: "bars", points: finitePoints(ks, transform(empirical)) },
      {
        name: `binomial(n=${n}, p=${p})`,
        style: "line",
        points: finitePoints(analyticK, transform(analytic)),
      },
    ],
  };
}

export function buildFigure(
  kind: FigureKind,
  table: CsvTable,
  logScaleY: boolean,
): FigureModel {
  checkSchema(kind, table);
  switch (kind) {
    case "everett":
      return everettFigure(table, logScaleY);
    case "overlap":
      return overlapFigure(table, logScaleY);
    case "histogram":
      return histogramFigure(table, logScaleY);
  }
}
