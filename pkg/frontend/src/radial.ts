import type { RadialData, RadialLevel, RadialSeries } from "./types.js";

/**
 * Radial (spider) rendering of per-right risk levels, one axis per right
 * and one outline per assessment round.
 *
 * The numbers on the rings come from the backend's display-only projection
 * of ordinal ranks; they exist so rounds can be compared by eye. Nothing
 * here feeds back into any computation.
 */

export interface RadialRenderOptions {
  /** Square canvas edge in px. */
  size?: number;
  /** Stroke colours cycled per round series. */
  colors?: string[];
}

const DEFAULTS: Required<RadialRenderOptions> = {
  size: 360,
  colors: ["#2f6f4f", "#1f4e79", "#8a4f1f", "#6b2d5c", "#444444"],
};

// ranks project to 0..3; +1 keeps "low" off the centre point
const MAX_LEVEL = 3;

interface Point {
  x: number;
  y: number;
}

/** Angle of axis `index` out of `count`, starting at 12 o'clock. */
export function axisAngle(index: number, count: number): number {
  return -Math.PI / 2 + (2 * Math.PI * index) / count;
}

/** Position of a level on an axis, projected onto the chart radius. */
export function levelPoint(
  level: number,
  angle: number,
  cx: number,
  cy: number,
  radius: number,
): Point {
  const fraction = (Math.min(level, MAX_LEVEL) + 1) / (MAX_LEVEL + 1);
  return {
    x: round2(cx + radius * fraction * Math.cos(angle)),
    y: round2(cy + radius * fraction * Math.sin(angle)),
  };
}

/**
 * Render the chart to an SVG string.
 *
 * Degenerate inputs degrade instead of crashing: no series yields an empty
 * state message, a single axis yields one bar per round because a polygon
 * over one point says nothing.
 */
export function renderRadial(data: RadialData, options: RadialRenderOptions = {}): string {
  const opts = { ...DEFAULTS, ...options };
  const size = opts.size;
  if (data.axes.length === 0 || data.series.length === 0) {
    return svgOpen(size) + emptyState(size) + "</svg>";
  }
  if (data.axes.length === 1) {
    return svgOpen(size) + singleAxisBars(data, opts) + "</svg>";
  }
  return svgOpen(size) + spider(data, opts) + "</svg>";
}

function svgOpen(size: number): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${size} ${size}" ` +
    `class="fria-radial" role="img">`
  );
}

function emptyState(size: number): string {
  const x = size / 2;
  return (
    `<text class="radial-empty" x="${x}" y="${x}" text-anchor="middle">` +
    "no rounds computed yet</text>"
  );
}

function spider(data: RadialData, opts: Required<RadialRenderOptions>): string {
  const size = opts.size;
  const cx = size / 2;
  const cy = size / 2;
  const radius = size * 0.38;
  const n = data.axes.length;
  const parts: string[] = [];

  for (let ring = 0; ring <= MAX_LEVEL; ring += 1) {
    const r = (radius * (ring + 1)) / (MAX_LEVEL + 1);
    parts.push(`<circle class="grid-ring" cx="${cx}" cy="${cy}" r="${round2(r)}" fill="none"/>`);
  }

  data.axes.forEach((axis, i) => {
    const angle = axisAngle(i, n);
    const end = {
      x: round2(cx + radius * Math.cos(angle)),
      y: round2(cy + radius * Math.sin(angle)),
    };
    const label = {
      x: round2(cx + radius * 1.12 * Math.cos(angle)),
      y: round2(cy + radius * 1.12 * Math.sin(angle)),
    };
    parts.push(
      `<line class="axis" data-right="${esc(axis.right_id)}" ` +
        `x1="${cx}" y1="${cy}" x2="${end.x}" y2="${end.y}"/>`,
    );
    parts.push(
      `<text class="axis-label" data-right="${esc(axis.right_id)}" ` +
        `x="${label.x}" y="${label.y}" text-anchor="middle">${esc(axis.title)}</text>`,
    );
  });

  data.series.forEach((series, s) => {
    const color = opts.colors[s % opts.colors.length] ?? "#444444";
    const byRight = levelIndex(series);
    const points: string[] = [];
    const markers: string[] = [];
    data.axes.forEach((axis, i) => {
      const level = byRight.get(axis.right_id);
      if (level === undefined) return; // right not assessed in this round
      const p = levelPoint(level.level, axisAngle(i, n), cx, cy, radius);
      points.push(`${p.x},${p.y}`);
      if (level.acceptability === "blocked") {
        markers.push(
          `<circle class="blocked-marker" data-right="${esc(axis.right_id)}" ` +
            `data-round="${series.round_number}" cx="${p.x}" cy="${p.y}" r="6" ` +
            `fill="none" stroke="#b00020"><title>${esc(level.label)} (blocked)</title></circle>`,
        );
      }
    });
    parts.push(
      `<polygon class="series" data-round="${series.round_number}" points="${points.join(" ")}" ` +
        `fill="${color}" fill-opacity="0.12" stroke="${color}"/>`,
    );
    parts.push(...markers);
  });

  return parts.join("");
}

/** One bar per round: a one-right case has no polygon worth drawing. */
function singleAxisBars(data: RadialData, opts: Required<RadialRenderOptions>): string {
  const size = opts.size;
  const axis = data.axes[0];
  if (axis === undefined) return emptyState(size);
  const parts: string[] = [
    `<text class="axis-label" data-right="${esc(axis.right_id)}" x="${size / 2}" y="24" ` +
      `text-anchor="middle">${esc(axis.title)}</text>`,
  ];
  const barHeight = 22;
  const gap = 14;
  const left = size * 0.18;
  const maxWidth = size * 0.64;
  data.series.forEach((series, s) => {
    const level = levelIndex(series).get(axis.right_id);
    if (level === undefined) return;
    const color = opts.colors[s % opts.colors.length] ?? "#444444";
    const width = round2((maxWidth * (Math.min(level.level, MAX_LEVEL) + 1)) / (MAX_LEVEL + 1));
    const y = 48 + s * (barHeight + gap);
    parts.push(
      `<rect class="series-bar" data-round="${series.round_number}" ` +
        `data-right="${esc(axis.right_id)}" x="${round2(left)}" y="${y}" ` +
        `width="${width}" height="${barHeight}" fill="${color}"/>`,
    );
    const flag = level.acceptability === "blocked" ? " ⚠ blocked" : "";
    parts.push(
      `<text class="bar-label" x="${round2(left)}" y="${y - 3}">` +
        `round ${series.round_number}: ${esc(level.label)} (${esc(level.rank)})${esc(flag)}</text>`,
    );
    if (level.acceptability === "blocked") {
      parts.push(
        `<circle class="blocked-marker" data-right="${esc(axis.right_id)}" ` +
          `data-round="${series.round_number}" cx="${round2(left + width)}" ` +
          `cy="${y + barHeight / 2}" r="6" fill="none" stroke="#b00020"/>`,
      );
    }
  });
  return parts.join("");
}

function levelIndex(series: RadialSeries): Map<string, RadialLevel> {
  const map = new Map<string, RadialLevel>();
  for (const level of series.levels) {
    map.set(level.right_id, level);
  }
  return map;
}

function round2(value: number): number {
  return Math.round(value * 100) / 100;
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
