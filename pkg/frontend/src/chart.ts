/** SVG renderer for embellished chart specs.
 *
 * Renders the five marks (bar, line, area, point, arc) plus the three
 * annotation layer kinds (point highlight, pair link with arrows, trend
 * line) from a spec document and its aggregated series.  Every data mark
 * carries `class="mark"` and a `data-key` attribute so a click can be
 * resolved back to the dimension value it represents.
 *
 * Output is a deterministic string: the same (spec, series) pair always
 * yields the same SVG, which is what the visual-regression fixtures pin.
 */

import type { Annotation, ChartSpecDoc, SeriesRow } from "./types.js";

export const WIDTH = 480;
export const HEIGHT = 280;
const PAD = { top: 16, right: 16, bottom: 36, left: 48 };
const PLOT_W = WIDTH - PAD.left - PAD.right;
const PLOT_H = HEIGHT - PAD.top - PAD.bottom;

const BASE_COLOR = "#4c78a8";
const DIM_COLOR = "#c4d2e3";
const EMPHASIS_COLOR = "#e45756";

const fmt = (v: number): string => {
  const rounded = Math.round(v * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
};

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

interface Scale {
  lo: number;
  hi: number;
}

function valueScale(values: number[]): Scale {
  let lo = Math.min(0, ...values);
  let hi = Math.max(0, ...values);
  if (lo === hi) hi = lo + 1;
  return { lo, hi };
}

const ypix = (v: number, s: Scale): number =>
  PAD.top + PLOT_H - ((v - s.lo) / (s.hi - s.lo)) * PLOT_H;

/** Center x of the i-th of n positions. */
const xpix = (i: number, n: number): number =>
  PAD.left + ((i + 0.5) / n) * PLOT_W;

interface ArcSlice {
  key: string;
  startAngle: number;
  endAngle: number;
}

function arcSlices(series: SeriesRow[]): ArcSlice[] {
  const total = series.reduce((acc, [, v]) => acc + Math.max(v, 0), 0) || 1;
  let angle = -Math.PI / 2;
  return series.map(([key, value]) => {
    const span = (Math.max(value, 0) / total) * 2 * Math.PI;
    const slice = { key, startAngle: angle, endAngle: angle + span };
    angle += span;
    return slice;
  });
}

function arcCentroid(slice: ArcSlice, cx: number, cy: number, r: number): [number, number] {
  const mid = (slice.startAngle + slice.endAngle) / 2;
  return [cx + Math.cos(mid) * r * 0.6, cy + Math.sin(mid) * r * 0.6];
}

function collectHighlightTargets(annotations: Annotation[]): Set<string> {
  const targets = new Set<string>();
  for (const ann of annotations) {
    if (ann.kind === "point_highlight" || ann.kind === "pair_link_with_arrows") {
      for (const t of ann.targets) targets.add(String(t));
    }
  }
  return targets;
}

function markColor(key: string, targets: Set<string>): string {
  if (targets.size === 0) return BASE_COLOR;
  return targets.has(key) ? EMPHASIS_COLOR : DIM_COLOR;
}

function renderAxes(spec: ChartSpecDoc, keys: string[], mark: string): string[] {
  const out: string[] = [];
  const bottom = PAD.top + PLOT_H;
  out.push(
    `<line class="axis" x1="${PAD.left}" y1="${bottom}" x2="${PAD.left + PLOT_W}" y2="${bottom}" stroke="#666"/>`,
    `<line class="axis" x1="${PAD.left}" y1="${PAD.top}" x2="${PAD.left}" y2="${bottom}" stroke="#666"/>`,
  );
  const n = keys.length;
  const step = Math.max(1, Math.ceil(n / 8));
  keys.forEach((key, i) => {
    if (i % step !== 0 && i !== n - 1) return;
    out.push(
      `<text class="tick" x="${fmt(xpix(i, n))}" y="${bottom + 16}" text-anchor="middle" font-size="10">${esc(key)}</text>`,
    );
  });
  const xField = spec.encoding?.x?.field ?? "";
  const yField = spec.encoding?.y?.field ?? spec.encoding?.color?.field ?? "";
  if (mark !== "arc" && xField) {
    out.push(
      `<text class="axis-title" x="${PAD.left + PLOT_W / 2}" y="${HEIGHT - 4}" text-anchor="middle" font-size="11">${esc(xField)}</text>`,
    );
  }
  if (yField) {
    out.push(
      `<text class="axis-title" x="12" y="${PAD.top + PLOT_H / 2}" text-anchor="middle" font-size="11" transform="rotate(-90 12 ${PAD.top + PLOT_H / 2})">${esc(yField)}</text>`,
    );
  }
  return out;
}

function renderMarks(
  mark: string,
  series: SeriesRow[],
  scale: Scale,
  targets: Set<string>,
): string[] {
  const n = series.length;
  const out: string[] = [];
  const zero = ypix(Math.max(scale.lo, 0), scale);

  if (mark === "bar") {
    series.forEach(([key, value], i) => {
      const bandW = (PLOT_W / n) * 0.7;
      const x = xpix(i, n) - bandW / 2;
      const top = Math.min(ypix(value, scale), zero);
      const h = Math.abs(ypix(value, scale) - zero);
      out.push(
        `<rect class="mark" data-key="${esc(key)}" x="${fmt(x)}" y="${fmt(top)}" width="${fmt(bandW)}" height="${fmt(h)}" fill="${markColor(key, targets)}"/>`,
      );
    });
    return out;
  }

  if (mark === "arc") {
    const cx = WIDTH / 2;
    const cy = PAD.top + PLOT_H / 2;
    const r = Math.min(PLOT_W, PLOT_H) / 2 - 4;
    for (const slice of arcSlices(series)) {
      const large = slice.endAngle - slice.startAngle > Math.PI ? 1 : 0;
      const x0 = cx + Math.cos(slice.startAngle) * r;
      const y0 = cy + Math.sin(slice.startAngle) * r;
      const x1 = cx + Math.cos(slice.endAngle) * r;
      const y1 = cy + Math.sin(slice.endAngle) * r;
      out.push(
        `<path class="mark" data-key="${esc(slice.key)}" d="M ${fmt(cx)} ${fmt(cy)} L ${fmt(x0)} ${fmt(y0)} A ${fmt(r)} ${fmt(r)} 0 ${large} 1 ${fmt(x1)} ${fmt(y1)} Z" fill="${markColor(slice.key, targets)}" stroke="#fff"/>`,
      );
    }
    return out;
  }

  // line / area / point: a polyline (or filled polygon) plus point marks
  const pts = series.map(([, value], i) => [xpix(i, n), ypix(value, scale)]);
  const path = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  if (mark === "area") {
    const polygon = `${fmt(pts[0][0])},${fmt(zero)} ${path} ${fmt(pts[n - 1][0])},${fmt(zero)}`;
    out.push(`<polygon class="area-fill" points="${polygon}" fill="${BASE_COLOR}" opacity="0.35"/>`);
  }
  if (mark === "line" || mark === "area") {
    out.push(`<polyline class="series-line" points="${path}" fill="none" stroke="${BASE_COLOR}" stroke-width="2"/>`);
  }
  series.forEach(([key], i) => {
    const radius = mark === "point" ? 5 : 3.5;
    out.push(
      `<circle class="mark" data-key="${esc(key)}" cx="${fmt(pts[i][0])}" cy="${fmt(pts[i][1])}" r="${radius}" fill="${markColor(key, targets)}"/>`,
    );
  });
  return out;
}

function anchorFor(
  mark: string,
  series: SeriesRow[],
  scale: Scale,
  key: string,
): [number, number] | null {
  const i = series.findIndex(([k]) => String(k) === String(key));
  if (i < 0) return null;
  if (mark === "arc") {
    const slice = arcSlices(series)[i];
    return arcCentroid(slice, WIDTH / 2, PAD.top + PLOT_H / 2, Math.min(PLOT_W, PLOT_H) / 2 - 4);
  }
  return [xpix(i, series.length), ypix(series[i][1], scale)];
}

function renderOverlays(
  mark: string,
  annotations: Annotation[],
  series: SeriesRow[],
  scale: Scale,
): string[] {
  const out: string[] = [];
  const n = series.length;
  for (const ann of annotations) {
    const color = ann.style?.color ?? EMPHASIS_COLOR;
    if (ann.kind === "trend_line") {
      // y = slope·index + intercept over the series index domain; charts
      // without a usable fitted line get a first-to-last dashed chord.
      let a0: [number, number] | null;
      let a1: [number, number] | null;
      if (mark !== "arc" && ann.slope != null && ann.intercept != null) {
        a0 = [xpix(0, n), ypix(ann.intercept, scale)];
        a1 = [xpix(n - 1, n), ypix(ann.slope * (n - 1) + ann.intercept, scale)];
      } else {
        a0 = anchorFor(mark, series, scale, series[0][0]);
        a1 = anchorFor(mark, series, scale, series[n - 1][0]);
      }
      if (a0 && a1) {
        out.push(
          `<line class="annotation trend-line" x1="${fmt(a0[0])}" y1="${fmt(a0[1])}" x2="${fmt(a1[0])}" y2="${fmt(a1[1])}" stroke="${color}" stroke-width="2" stroke-dasharray="6 3"/>`,
        );
      }
    } else if (ann.kind === "pair_link_with_arrows") {
      const [ka, kb] = ann.targets;
      const a = anchorFor(mark, series, scale, ka);
      const b = anchorFor(mark, series, scale, kb);
      if (!a || !b) continue;
      out.push(
        `<line class="annotation pair-link" x1="${fmt(a[0])}" y1="${fmt(a[1])}" x2="${fmt(b[0])}" y2="${fmt(b[1])}" stroke="${color}" stroke-width="1.5"/>`,
      );
      for (const [x, y] of [a, b]) {
        out.push(
          `<path class="annotation pair-arrow" d="M ${fmt(x)} ${fmt(y - 14)} l -5 -8 h 10 Z" fill="${color}"/>`,
        );
      }
    } else if (ann.kind === "point_highlight") {
      for (const key of ann.targets) {
        const at = anchorFor(mark, series, scale, key);
        if (!at) continue;
        out.push(
          `<circle class="annotation point-highlight" cx="${fmt(at[0])}" cy="${fmt(at[1])}" r="8" fill="none" stroke="${color}" stroke-width="2"/>`,
        );
      }
    }
  }
  return out;
}

/** Render an embellished chart spec and its series to an SVG string. */
export function renderChartSvg(spec: ChartSpecDoc, series: SeriesRow[]): string {
  const rows: SeriesRow[] = series.map(([k, v]) => [String(k), Number(v)]);
  if (rows.length === 0) {
    return `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}"><text x="${WIDTH / 2}" y="${HEIGHT / 2}" text-anchor="middle">no data</text></svg>`;
  }
  const mark = spec.mark;
  const annotations = spec.annotations ?? [];
  const scale = valueScale(rows.map(([, v]) => v));
  const targets = collectHighlightTargets(annotations);
  const body = [
    ...(mark === "arc" ? [] : renderAxes(spec, rows.map(([k]) => k), mark)),
    ...renderMarks(mark, rows, scale, targets),
    ...renderOverlays(mark, annotations, rows, scale),
  ];
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" class="storydeck-chart" data-mark="${esc(mark)}">`,
    ...body,
    "</svg>",
  ].join("\n");
}

/** Resolve a click inside a rendered chart to the dimension value it hit. */
export function keyFromClick(target: EventTarget | null): string | null {
  if (!(target instanceof Element)) return null;
  const mark = target.closest(".mark");
  return mark?.getAttribute("data-key") ?? null;
}
