/**
 * Plain-string SVG rendering of figure models: axes, ticks, line and bar
 * series, legend. Deterministic output: same model, same bytes.
 */

import { FigureModel, Series } from "./figures.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 80, right: 24, top: 48, bottom: 56 };
const COLORS = ["#1f77b4", "#d62728", "#7f7f7f", "#2ca02c"];

interface Range {
  min: number;
  max: number;
}

function dataRange(values: number[]): Range {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (!Number.isFinite(min) || !Number.isFinite(max)) {
    min = 0;
    max = 1;
  }
  if (min === max) {
    min -= 1;
    max += 1;
  }
  return { min, max };
}

function pad(range: Range, fraction: number): Range {
  const span = range.max - range.min;
  return { min: range.min - fraction * span, max: range.max + fraction * span };
}

function ticks(range: Range, count = 5): number[] {
  const out: number[] = [];
  for (let i = 0; i <= count; i++) {
    out.push(range.min + ((range.max - range.min) * i) / count);
  }
  return out;
}

function fmt(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e5 || abs < 1e-3) return value.toExponential(2);
  return String(Number(value.toPrecision(5)));
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSvg(model: FigureModel): string {
  const xs = model.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = model.series.flatMap((s) => s.points.map((p) => p[1]));
  const xRange = pad(dataRange(xs), 0.02);
  const yRange = pad(dataRange(ys), 0.05);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    MARGIN.left + ((x - xRange.min) / (xRange.max - xRange.min)) * plotW;
  const sy = (y: number) =>
    MARGIN.top + plotH - ((y - yRange.min) / (yRange.max - yRange.min)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // axes and ticks
  const axisBottom = MARGIN.top + plotH;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisBottom}" x2="${MARGIN.left + plotW}" ` +
      `y2="${axisBottom}" stroke="black"/>`,
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${axisBottom}" stroke="black"/>`,
  );
  for (const t of ticks(xRange)) {
    const x = sx(t).toFixed(2);
    parts.push(`<line x1="${x}" y1="${axisBottom}" x2="${x}" y2="${axisBottom + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${x}" y="${axisBottom + 18}" text-anchor="middle">${esc(fmt(t))}</text>`,
    );
  }
  for (const t of ticks(yRange)) {
    const y = sy(t).toFixed(2);
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="black"/>`);
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${y}" text-anchor="end" dominant-baseline="middle">` +
        `${esc(fmt(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle">` +
      `${esc(model.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(model.yLabel)}</text>`,
  );

  // series
  model.series.forEach((series: Series, index: number) => {
    const color = COLORS[index % COLORS.length];
    if (series.style === "bars") {
      const xsHere = series.points.map((p) => p[0]);
      const step = xsHere.length > 1 ? Math.abs(sx(xsHere[1]) - sx(xsHere[0])) : plotW;
      const barW = Math.max(1, 0.8 * step);
      const base = sy(Math.max(yRange.min, 0));
      for (const [x, y] of series.points) {
        const top = sy(y);
        const height = Math.abs(base - top);
        parts.push(
          `<rect x="${(sx(x) - barW / 2).toFixed(2)}" y="${Math.min(top, base).toFixed(2)}" ` +
            `width="${barW.toFixed(2)}" height="${height.toFixed(2)}" ` +
            `fill="${color}" fill-opacity="0.55" data-series="${esc(series.name)}"/>`,
        );
      }
    } else {
      const coords = series.points
        .map(([x, y]) => `${sx(x).toFixed(2)},${sy(y).toFixed(2)}`)
        .join(" ");
      const dash = series.style === "dashed" ? ' stroke-dasharray="6,4"' : "";
      parts.push(
        `<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="1.8"` +
          `${dash} data-series="${esc(series.name)}"/>`,
      );
    }
  });

  // legend
  model.series.forEach((series, index) => {
    const color = COLORS[index % COLORS.length];
    const x = MARGIN.left + 10;
    const y = MARGIN.top + 8 + 18 * index;
    parts.push(`<rect x="${x}" y="${y - 9}" width="12" height="12" fill="${color}"/>`);
    parts.push(`<text x="${x + 18}" y="${y + 2}">${esc(series.name)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
