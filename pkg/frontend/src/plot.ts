#!/usr/bin/env node
/**
 * plots --kind everett|overlap|histogram --in data.csv --out figure.svg [--log-y]
 *
 * Reads one CSV produced by the simulator CLI and writes an SVG figure.
 * Exit codes: 0 written, 1 bad input (missing file, schema mismatch, empty
 * data), 2 usage error.
 */

import { readFileSync, realpathSync, writeFileSync } from "fs";
import { fileURLToPath } from "url";

import { parseCsv } from "./csv.js";
import { buildFigure, FigureKind, FigureModel, PlotSpec, SCHEMAS } from "./figures.js";
import { renderSvg } from "./svg.js";

const USAGE =
  "usage: plots --kind everett|overlap|histogram --in data.csv --out figure.svg [--log-y]";

class UsageError extends Error {}

export function parseArgs(argv: string[]): PlotSpec {
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  let logScaleY = false;
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    switch (flag) {
      case "--kind":
        kind = argv[++i];
        break;
      case "--in":
        input = argv[++i];
        break;
      case "--out":
        output = argv[++i];
        break;
      case "--log-y":
        logScaleY = true;
        break;
      default:
        throw new UsageError(`unknown flag ${flag}`);
    }
  }
  if (!kind || !(kind in SCHEMAS)) {
    throw new UsageError(`--kind must be one of ${Object.keys(SCHEMAS).join("|")}`);
  }
  if (!input) throw new UsageError("--in is required");
  if (!output) throw new UsageError("--out is required");
  return { figureKind: kind as FigureKind, inputCsv: input, outputImage: output, logScaleY };
}

/** Build and write the figure; returns the plotted model for inspection. */
export function render(spec: PlotSpec): FigureModel {
  let text: string;
  try {
    text = readFileSync(spec.inputCsv, "utf8");
  } catch {
    throw new Error(`cannot read input CSV ${spec.inputCsv}`);
  }
  const table = parseCsv(text);
  const model = buildFigure(spec.figureKind, table, spec.logScaleY);
  writeFileSync(spec.outputImage, renderSvg(model));
  return model;
}

export function main(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  try {
    render(spec);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

function invokedDirectly(): boolean {
  if (!process.argv[1]) return false;
  try {
    return realpathSync(process.argv[1]) === fileURLToPath(import.meta.url);
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  process.exit(main(process.argv.slice(2)));
}
