import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { parseCsv, readCsv } from "../src/csv.js";
import {
  etaLabel,
  panelGeometry,
  plotTrajectories,
  readCriticalLevel,
  renderPanel,
} from "../src/trajectories.js";

const RUN = join(__dirname, "..", "testdata", "run");
const HEADER =
  "time,p_obs,p_post,L_at,L_right,C_left,C_at,C_right,detected";

describe("panel geometry from real CLI output", () => {
  const b = readCriticalLevel(RUN);

  it("reads the critical level from calibration.json", () => {
    expect(b).toBeGreaterThan(0.5);
    expect(b).toBeLessThan(2.5);
  });

  it("predictable panel is left-continuous: no gap markers", () => {
    const table = readCsv(join(RUN, "trajectories_inf.csv"));
    const geom = panelGeometry(table, b);
    expect(geom.controlMarks.length).toBeGreaterThan(0);
    for (const mark of geom.controlMarks) {
      expect(mark.gap).toBe(false);
      expect(mark.at).toBe(mark.left);
    }
    const svg = renderPanel(geom, etaLabel("trajectories_inf.csv"));
    expect(svg).not.toContain('class="gap"');
  });

  it("perfect-sensor panel shows a double jump at the first crossing of b", () => {
    const table = readCsv(join(RUN, "trajectories_0.csv"));
    const geom = panelGeometry(table, b);
    const doubles = geom.controlMarks.filter((m) => m.doubleJump);
    expect(doubles.length).toBeGreaterThan(0);
    // the proactive move parks exactly at zero before the follow-up
    expect(doubles[0].at).toBe(0);
    expect(doubles[0].right).toBeGreaterThan(0);
    const svg = renderPanel(geom, etaLabel("trajectories_0.csv"));
    expect(svg).toContain("double-jump");
  });

  it("draws the dotted critical line and the reward dots", () => {
    const table = readCsv(join(RUN, "trajectories_3.csv"));
    const geom = panelGeometry(table, b);
    const svg = renderPanel(geom, "eta = 3");
    expect(svg).toContain('class="b-line"');
    expect((svg.match(/reward-dot/g) ?? []).length).toBe(geom.rewardDots.length);
    expect(svg).toContain('class="control"');
  });

  it("control levels are monotone along the panel", () => {
    for (const tag of ["0", "3", "6", "inf"]) {
      const table = readCsv(join(RUN, `trajectories_${tag}.csv`));
      const geom = panelGeometry(table, b);
      let level = -Infinity;
      for (const mark of geom.controlMarks) {
        expect(mark.left).toBeGreaterThanOrEqual(level);
        expect(mark.at).toBeGreaterThanOrEqual(mark.left);
        expect(mark.right).toBeGreaterThanOrEqual(mark.at);
        level = mark.right;
      }
    }
  });
});

describe("edge cases", () => {
  it("an empty CSV yields annotated empty axes", () => {
    const table = parseCsv(`# meta\n${HEADER}\n`);
    const geom = panelGeometry(table, 1.0);
    expect(geom.empty).toBe(true);
    const svg = renderPanel(geom, "eta = 3");
    expect(svg).toContain("no events in this scenario");
    expect(svg).toContain("empty-note");
  });

  it("missing columns fail with a descriptive message", () => {
    const table = parseCsv("# meta\ntime,p_obs\n0.0,1.0\n");
    expect(() => panelGeometry(table, 1.0)).toThrow(/missing column\(s\)/);
  });

  it("renders panels for every sensor in a run directory", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const written = plotTrajectories(RUN, out);
    expect(written).toHaveLength(4);
    for (const file of written) {
      expect(readFileSync(file, "utf8")).toContain("<svg");
    }
  });

  it("a run directory without trajectory files fails descriptively", () => {
    const empty = mkdtempSync(join(tmpdir(), "empty-"));
    writeFileSync(join(empty, "calibration.json"), JSON.stringify({ constants: { b: 1 } }));
    expect(() => plotTrajectories(empty, empty)).toThrow(/no trajectories_/);
  });
});
