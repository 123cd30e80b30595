import { describe, expect, it } from "vitest";

import { AnalyzeResponse } from "../src/api.js";
import { parseDot } from "../src/dot.js";
import { fmt, listingRows, renderResultsHtml } from "../src/results.js";

const DOC = parseDot(
  [
    "digraph adt {",
    '  a [label="left", prob="0.2", type="BE"];',
    '  b [label="right", player="defender", prob="0.7", type="BE"];',
    '  g [goal="true", label="top", type="OR"];',
    "  a -> g;",
    "  b -> g;",
    "}",
  ].join("\n") + "\n",
);

const PAC_RESP: AnalyzeResponse = {
  results: {
    a: { value: 0.2, eps: 0.01, delta: 0.05, intervalLo: 0.19, intervalHi: 0.21 },
    b: { value: 0.7, eps: 0.02, delta: 0.05, intervalLo: 0.68, intervalHi: 0.72 },
    g: { value: 0.76, eps: 0.0314, delta: 0.0975, intervalLo: 0.7286, intervalHi: 0.7914 },
  },
  diagnostics: [],
};

describe("results panel", () => {
  it("lists vertices preorder from the goal with depths", () => {
    const rows = listingRows(DOC, PAC_RESP);
    expect(rows.map((r) => [r.id, r.depth])).toEqual([
      ["g", 0],
      ["a", 1],
      ["b", 1],
    ]);
    expect(rows[0].label).toBe("top");
    expect(rows[2].player).toBe("defender");
  });

  it("formats PAC cells: value, ε, δ, interval", () => {
    const rows = listingRows(DOC, PAC_RESP);
    expect(rows[0].cells).toEqual({
      p: "0.76",
      "ε": "0.0314",
      "δ": "0.0975",
      interval: "[0.7286, 0.7914]",
    });
  });

  it("hides ε/δ columns for exact responses", () => {
    const exact: AnalyzeResponse = {
      results: { a: { value: 0.2 }, b: { value: 0.7 }, g: { value: 0.76 } },
      diagnostics: [],
    };
    const rows = listingRows(DOC, exact);
    expect(Object.keys(rows[0].cells)).toEqual(["p"]);
    const html = renderResultsHtml(rows, false);
    expect(html).not.toContain("ε");
  });

  it("renders pair domains with succeed/fail columns", () => {
    const resp: AnalyzeResponse = {
      results: {
        a: { pair: [10, 4] },
        b: { pair: [15, 5] },
        g: { pair: [10, 9] },
      },
      diagnostics: [],
    };
    const rows = listingRows(DOC, resp);
    expect(rows[0].cells).toEqual({ s: "10", f: "9" });
  });

  it("greys the table when the model is dirty", () => {
    const rows = listingRows(DOC, PAC_RESP);
    expect(renderResultsHtml(rows, true)).toContain('class="stale"');
    expect(renderResultsHtml(rows, false)).not.toContain('class="stale"');
  });

  it("escapes labels in rendered HTML", () => {
    const doc = parseDot(
      'digraph adt {\n  a [goal="true", label="<b>&\\"x", prob="1.0", type="BE"];\n}\n',
    );
    const html = renderResultsHtml(
      listingRows(doc, { results: { a: { value: 1 } }, diagnostics: [] }),
      false,
    );
    expect(html).toContain("&lt;b&gt;&amp;&quot;x");
  });

  it("formats numbers to 10 significant digits like the CLI listing", () => {
    expect(fmt(0.45646316818459237)).toBe("0.4564631682");
    expect(fmt(1)).toBe("1");
  });
});
