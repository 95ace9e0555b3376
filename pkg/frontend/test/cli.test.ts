import { existsSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { run } from "../src/cli.js";

const RUN = join(__dirname, "..", "testdata", "run");

describe("cli", () => {
  it("renders everything from a run directory", () => {
    const out = mkdtempSync(join(tmpdir(), "cli-figs-"));
    expect(run(["all", "--in", RUN, "--out", out])).toBe(0);
    for (const name of [
      "trajectories_0.svg",
      "trajectories_3.svg",
      "trajectories_6.svg",
      "trajectories_inf.svg",
      "values.svg",
    ]) {
      expect(existsSync(join(out, name))).toBe(true);
    }
  });

  it("rejects unknown commands and missing flags", () => {
    expect(run(["bogus", "--in", RUN, "--out", "/tmp/x"])).toBe(2);
    expect(run(["values", "--in", RUN])).toBe(2);
  });

  it("fails cleanly on a directory without inputs", () => {
    const empty = mkdtempSync(join(tmpdir(), "cli-empty-"));
    expect(run(["values", "--in", empty, "--out", empty])).toBe(1);
  });
});
