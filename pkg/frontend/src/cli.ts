/**
 * Figure renderer for a jumpctl run directory.
 *
 *   node dist/cli.js trajectories --in runs/demo --out runs/demo/figures
 *   node dist/cli.js values       --in runs/demo --out runs/demo/figures
 *   node dist/cli.js all          --in runs/demo --out runs/demo/figures
 *
 * Pure CSV consumer: nothing is recomputed from the model.
 */

import { plotTrajectories } from "./trajectories.js";
import { plotValueCurve } from "./values.js";

function parseArgs(argv: string[]): { command: string; inDir: string; outDir: string } {
  const [command, ...rest] = argv;
  let inDir = "";
  let outDir = "";
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`flag ${flag} needs a value`);
    if (flag === "--in") inDir = value;
    else if (flag === "--out") outDir = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!command || !["trajectories", "values", "all"].includes(command)) {
    throw new Error("usage: cli.js <trajectories|values|all> --in <dir> --out <dir>");
  }
  if (!inDir || !outDir) throw new Error("--in and --out are required");
  return { command, inDir, outDir };
}

export function run(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const written: string[] = [];
    if (args.command === "trajectories" || args.command === "all") {
      written.push(...plotTrajectories(args.inDir, args.outDir));
    }
    if (args.command === "values" || args.command === "all") {
      written.push(plotValueCurve(args.inDir, args.outDir));
    }
    for (const file of written) console.log(file);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(run(process.argv.slice(2)));
}
