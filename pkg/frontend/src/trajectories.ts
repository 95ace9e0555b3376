/**
 * Trajectory panels: the observable reward path (gray steps with dots at its
 * jump times), the critical level b (dotted), and the control with its
 * triple values -- the incoming level, the instant value, and the
 * just-after value -- so double jumps and one-sided continuity are visible.
 */

import { readFileSync, readdirSync, writeFileSync, mkdirSync } from "node:fs";
import { basename, join } from "node:path";

import { Table, num, readCsv, requireColumns } from "./csv.js";
import { Svg, extend, makeFrame } from "./svg.js";

export const TRAJECTORY_COLUMNS = [
  "time",
  "p_obs",
  "p_post",
  "L_at",
  "L_right",
  "C_left",
  "C_at",
  "C_right",
  "detected",
];

export interface Segment {
  t0: number;
  t1: number;
  level: number;
}

export interface ControlMark {
  t: number;
  left: number;
  at: number;
  right: number;
  /** proactive instant move and a follow-up: both one-sided jumps present */
  doubleJump: boolean;
  /** the incoming segment does not meet the instant value (a left jump) */
  gap: boolean;
}

export interface PanelGeometry {
  empty: boolean;
  horizon: number;
  b: number;
  rewardSegments: Segment[];
  rewardDots: { t: number; level: number; detected: boolean }[];
  controlSegments: Segment[];
  controlMarks: ControlMark[];
}

/** Build the drawing geometry from trajectory rows (first row is time 0). */
export function panelGeometry(table: Table, b: number): PanelGeometry {
  requireColumns(table, TRAJECTORY_COLUMNS, "trajectory CSV");
  const rows = table.rows;
  if (rows.length === 0) {
    return {
      empty: true,
      horizon: 1,
      b,
      rewardSegments: [],
      rewardDots: [],
      controlSegments: [],
      controlMarks: [],
    };
  }
  const times = rows.map((row) => num(row, "time"));
  const last = times[times.length - 1];
  const horizon = last > 0 ? last * 1.05 : 1.0;

  const rewardSegments: Segment[] = [];
  const controlSegments: Segment[] = [];
  const rewardDots: PanelGeometry["rewardDots"] = [];
  const controlMarks: ControlMark[] = [];

  for (let i = 0; i < rows.length; i++) {
    const row = rows[i];
    const t = times[i];
    const next = i + 1 < rows.length ? times[i + 1] : horizon;
    rewardSegments.push({ t0: t, t1: next, level: num(row, "p_post") });
    controlSegments.push({ t0: t, t1: next, level: num(row, "C_right") });
    if (i === 0) continue; // the time-0 row only anchors the segments
    rewardDots.push({
      t,
      level: num(row, "p_obs"),
      detected: num(row, "detected") === 1,
    });
    const left = num(row, "C_left");
    const at = num(row, "C_at");
    const right = num(row, "C_right");
    controlMarks.push({
      t,
      left,
      at,
      right,
      doubleJump: at > left && right > at,
      gap: at > left,
    });
  }
  return {
    empty: false,
    horizon,
    b,
    rewardSegments,
    rewardDots,
    controlSegments,
    controlMarks,
  };
}

export function renderPanel(geom: PanelGeometry, title: string): string {
  if (geom.empty) {
    const frame = makeFrame({ min: 0, max: 1 }, { min: -1, max: 1 });
    const svg = new Svg(frame);
    svg.axes("time", "level");
    svg.title(title);
    svg.text(
      frame.width / 2,
      frame.height / 2,
      "no events in this scenario",
      'font-size="12" text-anchor="middle" fill="#777" class="empty-note"',
    );
    return svg.render();
  }
  const levels = [
    geom.b,
    ...geom.rewardSegments.map((s) => s.level),
    ...geom.rewardDots.map((d) => d.level),
    ...geom.controlSegments.map((s) => s.level),
    ...geom.controlMarks.flatMap((m) => [m.left, m.at, m.right]),
  ];
  const frame = makeFrame({ min: 0, max: geom.horizon }, extend(levels));
  const svg = new Svg(frame);
  svg.axes("time", "level");
  svg.title(title);

  const bY = frame.y.at(geom.b);
  svg.line(
    frame.x.at(0),
    bY,
    frame.x.at(geom.horizon),
    bY,
    'stroke="#999" stroke-dasharray="2,4" class="b-line"',
  );

  for (const seg of geom.rewardSegments) {
    svg.line(
      frame.x.at(seg.t0),
      frame.y.at(seg.level),
      frame.x.at(seg.t1),
      frame.y.at(seg.level),
      'stroke="#aaa" stroke-width="1.5" class="reward"',
    );
  }
  for (const dot of geom.rewardDots) {
    svg.circle(
      frame.x.at(dot.t),
      frame.y.at(dot.level),
      2.5,
      `fill="#aaa" class="reward-dot${dot.detected ? " detected" : ""}"`,
    );
  }

  for (const seg of geom.controlSegments) {
    svg.line(
      frame.x.at(seg.t0),
      frame.y.at(seg.level),
      frame.x.at(seg.t1),
      frame.y.at(seg.level),
      'stroke="#111" stroke-width="1.8" class="control"',
    );
  }
  for (const mark of geom.controlMarks) {
    const px = frame.x.at(mark.t);
    if (mark.gap) {
      // open circle where the incoming segment ends: a visible left jump
      svg.circle(
        px,
        frame.y.at(mark.left),
        2.6,
        'fill="white" stroke="#111" class="gap"',
      );
    }
    svg.circle(
      px,
      frame.y.at(mark.at),
      2.6,
      `fill="#111" class="control-dot${mark.doubleJump ? " double-jump" : ""}"`,
    );
    if (mark.right > mark.at) {
      svg.circle(px, frame.y.at(mark.right), 2.6, 'fill="#111" class="control-dot post"');
      svg.line(
        px,
        frame.y.at(mark.at),
        px,
        frame.y.at(mark.right),
        'stroke="#111" stroke-width="0.8" stroke-dasharray="1,2" class="jump-connector"',
      );
    }
  }
  return svg.render();
}

export function readCriticalLevel(runDir: string): number {
  const doc = JSON.parse(readFileSync(join(runDir, "calibration.json"), "utf8"));
  const b = doc?.constants?.b;
  if (typeof b !== "number") {
    throw new Error(`calibration.json in ${runDir} carries no constants.b`);
  }
  return b;
}

export function etaLabel(file: string): string {
  const tag = basename(file).replace(/^trajectories_/, "").replace(/\.csv$/, "");
  return tag === "inf" ? "eta = inf (no sensor)" : `eta = ${tag.replace("p", ".")}`;
}

/** Render every trajectories_<eta>.csv in a run directory. */
export function plotTrajectories(inDir: string, outDir: string): string[] {
  const files = readdirSync(inDir)
    .filter((name) => /^trajectories_.*\.csv$/.test(name))
    .sort();
  if (files.length === 0) {
    throw new Error(`no trajectories_*.csv in ${inDir}`);
  }
  const b = readCriticalLevel(inDir);
  mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const file of files) {
    const table = readCsv(join(inDir, file));
    const geom = panelGeometry(table, b);
    const svg = renderPanel(geom, etaLabel(file));
    const target = join(outDir, file.replace(/\.csv$/, ".svg"));
    writeFileSync(target, svg);
    written.push(target);
  }
  return written;
}
