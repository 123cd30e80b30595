/** Estimate dialog logic: turn pasted or uploaded CSV samples into a PAC
 * leaf annotation via the server's /api/estimate endpoint. */

import { EstimateResponse } from "./api.js";
import { isBasicEvent } from "./dot.js";
import { EditorState } from "./state.js";

export class EstimateInputError extends Error {}

/** Parse CSV/whitespace-separated numeric samples.  Rejects empty input
 * and non-numeric fields; the server enforces the n >= 2 minimum. */
export function parseSamples(text: string): number[] {
  const fields = text.split(/[\s,;]+/).filter((f) => f.length > 0);
  if (fields.length === 0) {
    throw new EstimateInputError("no samples in input");
  }
  return fields.map((f) => {
    const x = Number(f);
    if (!Number.isFinite(x)) {
      throw new EstimateInputError(`not a number: ${f}`);
    }
    return x;
  });
}

/** Write a server estimate into the selected basic event's probability
 * annotation.  The numbers land in the DOT file exactly as the server
 * reported them. */
export function applyEstimate(
  state: EditorState,
  leafId: string,
  est: EstimateResponse,
): void {
  const v = state.doc.vertices.get(leafId);
  if (!v) throw new EstimateInputError(`unknown vertex ${leafId}`);
  if (!isBasicEvent(v)) {
    throw new EstimateInputError("estimates apply to basic events only");
  }
  state.setAttrs(leafId, {
    prob: String(est.value),
    prob_eps: String(est.eps),
    prob_delta: String(est.delta),
  });
}

/** Full dialog flow: parse, estimate server-side, annotate the leaf.
 * Throws before touching the model on any validation failure. */
export async function runEstimate(
  state: EditorState,
  leafId: string,
  csvText: string,
  delta: number,
): Promise<EstimateResponse> {
  const v = state.doc.vertices.get(leafId);
  if (!v || !isBasicEvent(v)) {
    throw new EstimateInputError("select a basic event first");
  }
  const samples = parseSamples(csvText);
  const est = await state.api.estimate(samples, delta);
  applyEstimate(state, leafId, est);
  return est;
}
