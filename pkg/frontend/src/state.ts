/** Editor state: the local graph mirror plus save/analyze orchestration.
 *
 * Every edit is recorded in an edit log; saving pushes the serialized
 * mirror with an optimistic revision check.  On a revision conflict the
 * state reloads the server copy and replays the log on top of it.
 */

import {
  AnalyzeRequest,
  AnalyzeResponse,
  ApiClient,
  ApiError,
  Diagnostic,
} from "./api.js";
import {
  GraphDoc,
  MirrorEdge,
  emitDot,
  freshId,
  inputsOf,
  parseDot,
} from "./dot.js";

export type Edit = (doc: GraphDoc) => void;

export const GATE_TYPES = ["AND", "OR", "NOT", "SAND", "SOR", "TR", "RE"];

export class EditorState {
  modelId: string | null = null;
  revision = 0;
  doc: GraphDoc = { vertices: new Map(), edges: [] };
  selection: string | null = null;
  /** Unsaved edits exist. */
  dirty = false;
  /** The displayed analysis no longer matches the saved model. */
  stale = false;
  lastAnalysis: (AnalyzeResponse & { request: AnalyzeRequest }) | null = null;
  lastDiagnostics: Diagnostic[] = [];
  private editLog: Edit[] = [];

  constructor(public api: ApiClient) {}

  /** Upload DOT text as a new server model and mirror it locally. */
  async load(dot: string): Promise<void> {
    const created = await this.api.createModel(dot);
    const fetched = await this.api.getModel(created.id);
    this.modelId = created.id;
    this.revision = fetched.revision;
    this.doc = parseDot(fetched.dot);
    this.selection = null;
    this.dirty = false;
    this.stale = false;
    this.lastAnalysis = null;
    this.lastDiagnostics = created.diagnostics;
    this.editLog = [];
  }

  /** Attach to an existing server model. */
  async open(id: string): Promise<void> {
    const fetched = await this.api.getModel(id);
    this.modelId = id;
    this.revision = fetched.revision;
    this.doc = parseDot(fetched.dot);
    this.selection = null;
    this.dirty = false;
    this.stale = false;
    this.lastAnalysis = null;
    this.editLog = [];
  }

  private apply(edit: Edit): void {
    edit(this.doc);
    this.editLog.push(edit);
    this.dirty = true;
    this.stale = true;
  }

  addVertex(type: string, attrs: Record<string, string> = {}): string {
    const id = freshId(this.doc);
    this.apply((doc) => {
      doc.vertices.set(id, { id, attrs: { type, ...attrs } });
    });
    return id;
  }

  removeVertex(id: string): void {
    this.apply((doc) => {
      doc.vertices.delete(id);
      doc.edges = doc.edges.filter((e) => e.from !== id && e.to !== id);
    });
    if (this.selection === id) this.selection = null;
  }

  retype(id: string, type: string): void {
    this.apply((doc) => {
      const v = doc.vertices.get(id);
      if (v) v.attrs.type = type;
    });
  }

  setAttrs(id: string, attrs: Record<string, string | null>): void {
    this.apply((doc) => {
      const v = doc.vertices.get(id);
      if (!v) return;
      for (const [k, val] of Object.entries(attrs)) {
        if (val === null) delete v.attrs[k];
        else v.attrs[k] = val;
      }
    });
  }

  setPosition(id: string, x: number, y: number): void {
    this.setAttrs(id, { pos_x: String(x), pos_y: String(y) });
  }

  addEdge(from: string, to: string, kind = "input"): void {
    this.apply((doc) => {
      doc.edges.push({ from, to, kind });
    });
  }

  removeEdge(from: string, to: string, kind = "input"): void {
    this.apply((doc) => {
      const i = doc.edges.findIndex(
        (e) => e.from === from && e.to === to && e.kind === kind,
      );
      if (i >= 0) doc.edges.splice(i, 1);
    });
  }

  /** Reorder a gate's inputs; `order` lists the child ids in their new
   * sequence.  Edge order is significant and persists in the saved DOT. */
  reorderInputs(gate: string, order: string[]): void {
    this.apply((doc) => {
      const kept: MirrorEdge[] = [];
      const mine = new Map<string, MirrorEdge>();
      for (const e of doc.edges) {
        if (e.kind === "input" && e.to === gate) mine.set(e.from, e);
        else kept.push(e);
      }
      for (const child of order) {
        const e = mine.get(child);
        if (e) {
          kept.push(e);
          mine.delete(child);
        }
      }
      kept.push(...mine.values());
      doc.edges = kept;
    });
  }

  /** Combine two root vertices under a new gate (tree merge). */
  mergeUnder(type: string, roots: string[]): string {
    const id = freshId(this.doc);
    this.apply((doc) => {
      doc.vertices.set(id, { id, attrs: { type, goal: "true" } });
      for (const v of doc.vertices.values()) {
        if (v.id !== id) delete v.attrs.goal;
      }
      for (const r of roots) doc.edges.push({ from: r, to: id, kind: "input" });
    });
    return id;
  }

  childrenOf(id: string): string[] {
    return inputsOf(this.doc, id);
  }

  /** Push the mirror to the server.  On a revision conflict, reload the
   * server copy, replay the local edit log, and retry once. */
  async save(): Promise<Diagnostic[]> {
    if (!this.modelId) throw new Error("no model loaded");
    const attempt = () =>
      this.api.putModel(this.modelId!, emitDot(this.doc), this.revision);
    try {
      const r = await attempt();
      this.revision = r.revision;
      this.dirty = false;
      this.editLog = [];
      this.lastDiagnostics = r.diagnostics;
      return r.diagnostics;
    } catch (err) {
      if (!(err instanceof ApiError) || err.status !== 409) throw err;
      const fetched = await this.api.getModel(this.modelId);
      this.doc = parseDot(fetched.dot);
      this.revision = fetched.revision;
      for (const edit of this.editLog) edit(this.doc);
      const r = await attempt();
      this.revision = r.revision;
      this.dirty = false;
      this.editLog = [];
      this.lastDiagnostics = r.diagnostics;
      return r.diagnostics;
    }
  }

  /** Save if dirty, then run a server-side analysis. */
  async analyze(request: AnalyzeRequest): Promise<AnalyzeResponse> {
    if (!this.modelId) throw new Error("no model loaded");
    if (this.dirty) await this.save();
    const resp = await this.api.analyze(this.modelId, request);
    this.lastAnalysis = { ...resp, request };
    this.stale = false;
    return resp;
  }

  async feedback(target: string): Promise<Diagnostic[]> {
    if (!this.modelId) throw new Error("no model loaded");
    if (this.dirty) await this.save();
    const resp = await this.api.feedback(this.modelId, target);
    return resp.diagnostics;
  }
}
