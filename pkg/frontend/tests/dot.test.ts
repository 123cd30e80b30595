import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

const __dirname = dirname(fileURLToPath(import.meta.url));

import {
  DotSyntaxError,
  emitDot,
  freshId,
  goalOf,
  inputsOf,
  parseDot,
} from "../src/dot.js";

const GOLDEN = join(__dirname, "..", "..", "tests", "golden", "powermeter.dot");

describe("dot mirror", () => {
  it("round-trips the server's canonical power-meter DOT byte for byte", () => {
    const text = readFileSync(GOLDEN, "utf8");
    const doc = parseDot(text);
    expect(emitDot(doc)).toBe(text);
  });

  it("reads structure: goal, ordered inputs", () => {
    const doc = parseDot(readFileSync(GOLDEN, "utf8"));
    expect(goalOf(doc)).toBe("n10");
    expect(inputsOf(doc, "n4")).toEqual(["n1", "n2", "n3"]);
    expect(inputsOf(doc, "n10")).toEqual(["n19", "n17"]);
  });

  it("preserves foreign attributes such as pos_x/pos_y verbatim", () => {
    const text =
      'digraph adt {\n  a [pos_x="120", pos_y="40.5", type="BE", zz="keep me"];\n}\n';
    const doc = parseDot(text);
    expect(doc.vertices.get("a")!.attrs.pos_x).toBe("120");
    expect(emitDot(doc)).toBe(text);
  });

  it("handles quoted labels with escapes", () => {
    const label = 'say "hi" \\ there';
    const doc = parseDot("digraph adt { a [type=\"BE\"]; }");
    doc.vertices.get("a")!.attrs.label = label;
    const reparsed = parseDot(emitDot(doc));
    expect(reparsed.vertices.get("a")!.attrs.label).toBe(label);
  });

  it("keeps input edge order and sorts trigger/reset edges", () => {
    const text = [
      "digraph adt {",
      '  a [type="BE"];',
      '  b [type="BE"];',
      '  g [goal="true", type="SAND"];',
      '  t [type="TR"];',
      "  b -> g;",
      "  a -> g;",
      '  t -> b [kind="trigger"];',
      '  t -> a [kind="trigger"];',
      "}",
    ].join("\n") + "\n";
    const doc = parseDot(text);
    expect(inputsOf(doc, "g")).toEqual(["b", "a"]);
    const out = emitDot(doc);
    expect(out).toContain("  b -> g;\n  a -> g;");
    expect(out.indexOf('t -> a [kind="trigger"]')).toBeLessThan(
      out.indexOf('t -> b [kind="trigger"]'),
    );
    // emission is a fixed point: reparsing and re-emitting is stable
    expect(emitDot(parseDot(out))).toBe(out);
  });

  it("rejects malformed input", () => {
    expect(() => parseDot("graph { a; }")).toThrow(DotSyntaxError);
    expect(() => parseDot('digraph adt { a [label="unterminated]; }'))
      .toThrow(DotSyntaxError);
  });

  it("allocates fresh vertex ids", () => {
    const doc = parseDot("digraph adt { n1; n2; }");
    const id = freshId(doc);
    expect(doc.vertices.has(id)).toBe(false);
  });
});
