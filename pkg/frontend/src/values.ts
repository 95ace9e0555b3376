/**
 * The value curve: policy value against the detection threshold, both
 * estimators overlaid with their standard-error bars. The no-sensor row
 * (eta = inf) sits on a broken slot at the right edge.
 */

import { writeFileSync, mkdirSync } from "node:fs";
import { join } from "node:path";

import { Table, num, readCsv, requireColumns } from "./csv.js";
import { Svg, extend, fmt, makeFrame } from "./svg.js";

export const VALUE_COLUMNS = ["eta", "regime", "v_mc", "v_mc_se", "v_cf", "v_cf_se"];

export interface CurvePoint {
  eta: number;
  x: number;
  label: string;
  v: number;
  se: number;
}

export interface CurveGeometry {
  series: { name: string; points: CurvePoint[] }[];
}

export function valueGeometry(table: Table): CurveGeometry {
  requireColumns(table, VALUE_COLUMNS, "values CSV");
  const rows = [...table.rows].sort((a, b) => num(a, "eta") - num(b, "eta"));
  const finite = rows.map((r) => num(r, "eta")).filter(Number.isFinite);
  const top = finite.length > 0 ? Math.max(...finite) : 0;
  const span = finite.length > 1 ? top - Math.min(...finite) : 1;
  const infSlot = top + Math.max(span * 0.15, 0.5);
  const place = (eta: number) => (Number.isFinite(eta) ? eta : infSlot);
  const series = (column: string, seColumn: string, name: string) => ({
    name,
    points: rows.map((row) => {
      const eta = num(row, "eta");
      return {
        eta,
        x: place(eta),
        label: Number.isFinite(eta) ? fmt(eta) : "inf",
        v: num(row, column),
        se: num(row, seColumn),
      };
    }),
  });
  return {
    series: [
      series("v_mc", "v_mc_se", "pathwise integral"),
      series("v_cf", "v_cf_se", "dual form"),
    ],
  };
}

export function renderValueCurve(geom: CurveGeometry): string {
  const points = geom.series.flatMap((s) => s.points);
  const xs = points.map((p) => p.x);
  const ys = points.flatMap((p) => [p.v - 3 * p.se, p.v + 3 * p.se]);
  const frame = makeFrame(extend(xs, 0.08), extend(ys, 0.12));
  const svg = new Svg(frame);
  svg.axes("detection threshold", "value");
  svg.title("value of the optimal control by sensor threshold");

  const styles = [
    { stroke: "#1f4e79", fill: "#1f4e79", dash: "", cls: "mc" },
    { stroke: "#a33c12", fill: "white", dash: "4,3", cls: "cf" },
  ];
  geom.series.forEach((series, k) => {
    const st = styles[k % styles.length];
    const sorted = [...series.points].sort((a, b) => a.x - b.x);
    for (let i = 0; i + 1 < sorted.length; i++) {
      svg.line(
        frame.x.at(sorted[i].x),
        frame.y.at(sorted[i].v),
        frame.x.at(sorted[i + 1].x),
        frame.y.at(sorted[i + 1].v),
        `stroke="${st.stroke}" stroke-dasharray="${st.dash}" class="curve ${st.cls}"`,
      );
    }
    for (const p of sorted) {
      const px = frame.x.at(p.x) + (k === 0 ? -2 : 2); // visual offset
      svg.line(
        px,
        frame.y.at(p.v - p.se),
        px,
        frame.y.at(p.v + p.se),
        `stroke="${st.stroke}" class="errorbar ${st.cls}"`,
      );
      svg.line(px - 3, frame.y.at(p.v - p.se), px + 3, frame.y.at(p.v - p.se), `stroke="${st.stroke}"`);
      svg.line(px - 3, frame.y.at(p.v + p.se), px + 3, frame.y.at(p.v + p.se), `stroke="${st.stroke}"`);
      svg.circle(
        px,
        frame.y.at(p.v),
        3,
        `fill="${st.fill}" stroke="${st.stroke}" class="point ${st.cls}"`,
      );
      if (!Number.isFinite(p.eta) && k === 0) {
        svg.text(
          frame.x.at(p.x),
          frame.height - frame.margin.bottom + 28,
          "inf",
          'font-size="10" text-anchor="middle" fill="#333" class="inf-tick"',
        );
      }
    }
    svg.text(
      frame.width - frame.margin.right - 10,
      frame.margin.top + 16 * (k + 1),
      series.name,
      `font-size="11" text-anchor="end" fill="${st.stroke}" class="legend"`,
    );
  });
  return svg.render();
}

export function plotValueCurve(inDir: string, outDir: string): string {
  const table = readCsv(join(inDir, "values.csv"));
  const geom = valueGeometry(table);
  const svg = renderValueCurve(geom);
  mkdirSync(outDir, { recursive: true });
  const target = join(outDir, "values.svg");
  writeFileSync(target, svg);
  return target;
}
