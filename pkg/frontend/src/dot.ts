/**
 * Client-side mirror of the server's DOT model format.
 *
 * The mirror is purely structural: vertices carry their attributes as
 * verbatim strings (including foreign attributes such as the layout hints
 * `pos_x`/`pos_y`), edges keep their stored order, and emission matches
 * the server's canonical form byte for byte so a save/reload round-trip
 * is lossless.  No quantities are computed here.
 */

export interface MirrorVertex {
  id: string;
  /** Attribute values exactly as written in the DOT source. */
  attrs: Record<string, string>;
}

export interface MirrorEdge {
  from: string;
  to: string;
  /** "input" (default), "trigger", or "reset". */
  kind: string;
}

export interface GraphDoc {
  vertices: Map<string, MirrorVertex>;
  edges: MirrorEdge[];
}

export class DotSyntaxError extends Error {}

const ID_RE = /^[A-Za-z_][A-Za-z0-9_]*$/;

/** Tokenize enough of the DOT grammar for node/edge statements. */
function* tokens(text: string): Generator<string> {
  let i = 0;
  const n = text.length;
  while (i < n) {
    const c = text[i];
    if (/\s/.test(c)) {
      i += 1;
    } else if (c === '"') {
      let j = i + 1;
      let out = "";
      while (j < n && text[j] !== '"') {
        if (text[j] === "\\" && j + 1 < n) {
          out += text[j + 1];
          j += 2;
        } else {
          out += text[j];
          j += 1;
        }
      }
      if (j >= n) throw new DotSyntaxError("unterminated string literal");
      yield '"' + out; // leading quote marks a string token
      i = j + 1;
    } else if (text.startsWith("->", i)) {
      yield "->";
      i += 2;
    } else if ("{}[];,=".includes(c)) {
      yield c;
      i += 1;
    } else {
      let j = i;
      while (j < n && /[A-Za-z0-9_.]/.test(text[j])) j += 1;
      if (j === i) throw new DotSyntaxError(`unexpected character ${JSON.stringify(c)}`);
      yield text.slice(i, j);
      i = j;
    }
  }
}

function attrValue(tok: string): string {
  return tok.startsWith('"') ? tok.slice(1) : tok;
}

export function parseDot(text: string): GraphDoc {
  const ts = [...tokens(text)];
  let p = 0;
  const peek = () => ts[p];
  const next = () => {
    if (p >= ts.length) throw new DotSyntaxError("unexpected end of input");
    return ts[p++];
  };
  const expect = (tok: string) => {
    const got = next();
    if (got !== tok) throw new DotSyntaxError(`expected ${tok}, got ${got}`);
  };

  expect("digraph");
  if (peek() !== "{") next(); // optional graph name
  expect("{");

  const doc: GraphDoc = { vertices: new Map(), edges: [] };

  const parseAttrList = (): Record<string, string> => {
    const attrs: Record<string, string> = {};
    expect("[");
    while (peek() !== "]") {
      const key = attrValue(next());
      expect("=");
      attrs[key] = attrValue(next());
      if (peek() === ",") next();
    }
    expect("]");
    return attrs;
  };

  while (peek() !== "}") {
    const id = attrValue(next());
    if (!ID_RE.test(id)) throw new DotSyntaxError(`bad vertex id ${id}`);
    if (peek() === "->") {
      next();
      const to = attrValue(next());
      if (!ID_RE.test(to)) throw new DotSyntaxError(`bad vertex id ${to}`);
      let kind = "input";
      if (peek() === "[") {
        const attrs = parseAttrList();
        if (attrs.kind) kind = attrs.kind;
      }
      doc.edges.push({ from: id, to, kind });
    } else {
      const attrs = peek() === "[" ? parseAttrList() : {};
      const existing = doc.vertices.get(id);
      if (existing) Object.assign(existing.attrs, attrs);
      else doc.vertices.set(id, { id, attrs });
    }
    if (peek() === ";") next();
  }
  expect("}");
  // implicit declarations from edge endpoints
  for (const e of doc.edges) {
    for (const id of [e.from, e.to]) {
      if (!doc.vertices.has(id)) doc.vertices.set(id, { id, attrs: {} });
    }
  }
  return doc;
}

function escape(s: string): string {
  return s.replace(/\\/g, "\\\\").replace(/"/g, '\\"');
}

/** Canonical emission matching the server: sorted vertices with sorted
 * attributes, input edges in stored order, trigger/reset edges sorted. */
export function emitDot(doc: GraphDoc): string {
  const lines = ["digraph adt {"];
  for (const id of [...doc.vertices.keys()].sort()) {
    const v = doc.vertices.get(id)!;
    const rendered = Object.entries(v.attrs)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, val]) => `${k}="${escape(val)}"`)
      .join(", ");
    lines.push(`  ${id} [${rendered}];`);
  }
  for (const e of doc.edges.filter((e) => e.kind === "input")) {
    lines.push(`  ${e.from} -> ${e.to};`);
  }
  for (const kind of ["trigger", "reset"]) {
    const special = doc.edges
      .filter((e) => e.kind === kind)
      .sort((a, b) => (a.from + " " + a.to < b.from + " " + b.to ? -1 : 1));
    for (const e of special) {
      lines.push(`  ${e.from} -> ${e.to} [kind="${kind}"];`);
    }
  }
  lines.push("}");
  return lines.join("\n") + "\n";
}

/** Input children of a vertex, in edge order. */
export function inputsOf(doc: GraphDoc, id: string): string[] {
  return doc.edges.filter((e) => e.kind === "input" && e.to === id)
    .map((e) => e.from);
}

export function outputsOf(doc: GraphDoc, id: string): string[] {
  return doc.edges.filter((e) => e.kind === "input" && e.from === id)
    .map((e) => e.to);
}

/** The goal vertex: explicit goal="true" attribute, else the unique sink. */
export function goalOf(doc: GraphDoc): string | null {
  for (const v of doc.vertices.values()) {
    if (v.attrs.goal === "true") return v.id;
  }
  const sinks = [...doc.vertices.keys()].filter(
    (id) => outputsOf(doc, id).length === 0,
  );
  return sinks.length === 1 ? sinks[0] : null;
}

export function isBasicEvent(v: MirrorVertex): boolean {
  return (v.attrs.type ?? "BE") === "BE";
}

export function displayLabel(v: MirrorVertex): string {
  return v.attrs.label ?? v.id;
}

export function playerOf(v: MirrorVertex): string {
  return v.attrs.player ?? "attacker";
}

/** A fresh vertex id not present in the document. */
export function freshId(doc: GraphDoc, prefix = "n"): string {
  let k = doc.vertices.size + 1;
  while (doc.vertices.has(`${prefix}${k}`)) k += 1;
  return `${prefix}${k}`;
}
