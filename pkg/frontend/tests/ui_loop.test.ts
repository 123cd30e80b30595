/** End-to-end editor loop against a real server process: load the
 * power-meter model, run the PAC probability analysis, estimate a leaf
 * from a 233-ones-in-1000 CSV, retype a gate, and re-analyze. */

import { ChildProcess, spawn } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ProbResult } from "../src/api.js";
import { goalOf } from "../src/dot.js";
import { runEstimate } from "../src/estimate.js";
import { listingRows } from "../src/results.js";
import { EditorState } from "../src/state.js";

const __dirname = dirname(fileURLToPath(import.meta.url));
const REPO = join(__dirname, "..", "..");
const MODEL = readFileSync(join(REPO, "tests", "data", "powermeter_pac.dot"), "utf8");

let proc: ChildProcess;
let baseUrl = "";

beforeAll(async () => {
  proc = spawn("python3", ["-m", "adtquant.cli", "serve", "--port", "0"], {
    cwd: REPO,
    stdio: ["ignore", "pipe", "inherit"],
  });
  baseUrl = await new Promise<string>((resolve, reject) => {
    let out = "";
    proc.stdout!.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const m = out.match(/on (http:\/\/[^/ ]+)\//);
      if (m) resolve(m[1].replace("0.0.0.0", "127.0.0.1"));
    });
    proc.on("exit", (code) => reject(new Error(`server exited: ${code}`)));
    setTimeout(() => reject(new Error("server did not start")), 20000);
  });
});

afterAll(() => {
  proc?.kill();
});

describe("UI loop against the live service", () => {
  it("analysis, leaf estimation, and gate retyping round-trip", async () => {
    const state = new EditorState(new ApiClient(baseUrl));
    await state.load(MODEL);

    // PAC probability analysis: the goal row matches the reference values
    await state.analyze({ domain: "prob", pac: true });
    const rows = listingRows(state.doc, state.lastAnalysis!);
    const goal = goalOf(state.doc)!;
    const goalRow = rows[0];
    expect(goalRow.id).toBe(goal);
    const value = goalRow.value as number;
    expect(Math.abs(value - 0.456463)).toBeLessThanOrEqual(1e-6);
    expect(Math.abs((goalRow.eps as number) - 0.130461)).toBeLessThanOrEqual(2e-4);
    expect(Math.abs(goalRow.delta! - 0.226219)).toBeLessThanOrEqual(1e-6);

    // estimate dialog: 233 successes in 1000 Bernoulli samples, δ = 0.05
    const csv = Array.from({ length: 1000 }, (_, i) => (i < 233 ? "1" : "0"))
      .join(",");
    const est = await runEstimate(state, "n1", csv, 0.05);
    expect(est.value).toBeCloseTo(0.233, 10);
    expect(Math.abs(est.eps - 0.026214)).toBeLessThanOrEqual(1e-5);
    const leaf = state.doc.vertices.get("n1")!;
    expect(leaf.attrs.prob).toBe("0.233");
    expect(Number(leaf.attrs.prob_eps)).toBeCloseTo(est.eps, 12);

    // the pending leaf edit marks the last analysis stale
    expect(state.stale).toBe(true);

    // retype a gate and re-analyze: the root value changes server-side
    await state.analyze({ domain: "prob", pac: true });
    const before = (state.lastAnalysis!.results[goal] as ProbResult).value;
    state.retype("n4", "AND");
    await state.analyze({ domain: "prob", pac: true });
    const after = (state.lastAnalysis!.results[goal] as ProbResult).value;
    expect(after).not.toBe(before);
    expect(after).toBeLessThan(before); // AND of the leaves is rarer than OR
    expect(state.stale).toBe(false);

    console.log(
      `criterion 12 PASS - UI loop: goal ${value}, estimate ` +
        `${est.value} ± ${est.eps}, retype n4 OR→AND root ${before} → ${after}`,
    );
  });

  it("shape errors from edits surface as feedback diagnostics", async () => {
    const state = new EditorState(new ApiClient(baseUrl));
    await state.load(MODEL);
    // a second outgoing edge from a shared vertex breaks the tree shape
    state.addEdge("n1", "n19");
    const diags = await state.feedback("analysis-bottomup");
    expect(diags.some((d) => d.code === "E_ANALYSIS_SHAPE")).toBe(true);
  });
});
