/** Results panel: an indented per-vertex listing of the last analysis.
 *
 * Rows are derived from the server's analyze response and the structural
 * mirror only; no value is computed client-side.
 */

import { AnalyzeResponse, PairResult, ProbResult } from "./api.js";
import { GraphDoc, displayLabel, goalOf, inputsOf, playerOf } from "./dot.js";

export interface ResultRow {
  id: string;
  label: string;
  depth: number;
  player: string;
  /** Pre-formatted cells, e.g. { p: "0.4564631682", "ε": "...", ... }. */
  cells: Record<string, string>;
  value: number | [number, number];
  eps?: number | [number, number];
  delta?: number;
  interval?: [number, number] | [[number, number], [number, number]];
}

/** Format a server-reported number for display (10 significant digits,
 * matching the CLI listing). */
export function fmt(x: number): string {
  return Number(x.toPrecision(10)).toString();
}

function probCells(r: ProbResult): Record<string, string> {
  const cells: Record<string, string> = { p: fmt(r.value) };
  if (r.eps !== undefined && r.delta !== undefined) {
    cells["ε"] = fmt(r.eps);
    cells["δ"] = fmt(r.delta);
    cells["interval"] = `[${fmt(r.intervalLo!)}, ${fmt(r.intervalHi!)}]`;
  }
  return cells;
}

function pairCells(r: PairResult): Record<string, string> {
  const cells: Record<string, string> = {
    s: fmt(r.pair[0]),
    f: fmt(r.pair[1]),
  };
  if (r.eps !== undefined && r.delta !== undefined) {
    cells["ε"] = `(${fmt(r.eps[0])}, ${fmt(r.eps[1])})`;
    cells["δ"] = fmt(r.delta);
  }
  return cells;
}

/** Preorder listing rows from the goal down, mirroring the CLI layout. */
export function listingRows(doc: GraphDoc, resp: AnalyzeResponse): ResultRow[] {
  const goal = goalOf(doc);
  if (!goal) return [];
  const rows: ResultRow[] = [];
  const stack: Array<[string, number]> = [[goal, 0]];
  while (stack.length > 0) {
    const [id, depth] = stack.pop()!;
    const v = doc.vertices.get(id);
    const r = resp.results[id];
    if (!v || !r) continue;
    const isProb = "value" in r;
    rows.push({
      id,
      label: displayLabel(v),
      depth,
      player: playerOf(v),
      cells: isProb ? probCells(r) : pairCells(r),
      value: isProb ? r.value : r.pair,
      eps: r.eps,
      delta: r.delta,
      interval:
        r.intervalLo !== undefined && r.intervalHi !== undefined
          ? ([r.intervalLo, r.intervalHi] as ResultRow["interval"])
          : undefined,
    });
    const children = inputsOf(doc, id);
    for (let i = children.length - 1; i >= 0; i -= 1) {
      stack.push([children[i], depth + 1]);
    }
  }
  return rows;
}

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Render rows as an HTML table body.  `stale` greys the panel until the
 * next analysis; exact-mode responses simply have no ε/δ cells. */
export function renderResultsHtml(rows: ResultRow[], stale: boolean): string {
  if (rows.length === 0) {
    return '<p class="empty">no analysis yet</p>';
  }
  const columns = [...new Set(rows.flatMap((r) => Object.keys(r.cells)))];
  const head =
    "<tr><th>vertex</th>" +
    columns.map((c) => `<th>${escapeHtml(c)}</th>`).join("") +
    "</tr>";
  const body = rows
    .map((r) => {
      const name =
        `<span class="indent" style="padding-left:${r.depth}em">` +
        `ID ${escapeHtml(r.label)}</span>`;
      const cells = columns
        .map((c) => `<td>${escapeHtml(r.cells[c] ?? "")}</td>`)
        .join("");
      return `<tr class="player-${escapeHtml(r.player)}" data-vertex="${escapeHtml(r.id)}"><td>${name}</td>${cells}</tr>`;
    })
    .join("\n");
  const cls = stale ? ' class="stale"' : "";
  return `<table${cls}><thead>${head}</thead><tbody>${body}</tbody></table>`;
}

/** Render an analysis failure as the panel body. */
export function renderErrorHtml(message: string): string {
  return `<p class="error">${escapeHtml(message)}</p>`;
}
