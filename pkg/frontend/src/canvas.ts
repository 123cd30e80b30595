/** SVG canvas: renders the graph mirror and turns pointer gestures into
 * editor-state edits.  Positions live in the model as the foreign DOT
 * attributes pos_x/pos_y so layout survives save/reload round-trips. */

import {
  GraphDoc,
  displayLabel,
  goalOf,
  isBasicEvent,
  playerOf,
} from "./dot.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_W = 96;
const NODE_H = 40;

export interface CanvasCallbacks {
  onSelect(id: string | null): void;
  onMove(id: string, x: number, y: number): void;
  onConnect(from: string, to: string): void;
}

interface Point {
  x: number;
  y: number;
}

/** Position from pos_x/pos_y attributes, else a deterministic fallback
 * grid so unplaced vertices are still visible and draggable. */
export function positionOf(doc: GraphDoc, id: string): Point {
  const v = doc.vertices.get(id);
  const x = Number(v?.attrs.pos_x);
  const y = Number(v?.attrs.pos_y);
  if (Number.isFinite(x) && Number.isFinite(y)) return { x, y };
  const index = [...doc.vertices.keys()].sort().indexOf(id);
  return { x: 60 + (index % 6) * 140, y: 60 + Math.floor(index / 6) * 90 };
}

export class Canvas {
  private dragging: { id: string; dx: number; dy: number } | null = null;
  /** When set, the next node click completes an edge from this vertex. */
  pendingEdgeFrom: string | null = null;

  constructor(
    private svg: SVGSVGElement,
    private callbacks: CanvasCallbacks,
  ) {
    svg.addEventListener("pointerup", () => {
      this.dragging = null;
    });
    svg.addEventListener("pointerleave", () => {
      this.dragging = null;
    });
    svg.addEventListener("pointerdown", (ev) => {
      if (ev.target === svg) this.callbacks.onSelect(null);
    });
  }

  private clientPoint(ev: PointerEvent): Point {
    const rect = this.svg.getBoundingClientRect();
    return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  }

  render(doc: GraphDoc, selection: string | null): void {
    this.svg.replaceChildren();
    const goal = goalOf(doc);

    for (const e of doc.edges) {
      const a = positionOf(doc, e.from);
      const b = positionOf(doc, e.to);
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(a.x + NODE_W / 2));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x + NODE_W / 2));
      line.setAttribute("y2", String(b.y + NODE_H));
      line.setAttribute("class", `edge edge-${e.kind}`);
      this.svg.appendChild(line);
    }

    for (const v of doc.vertices.values()) {
      const p = positionOf(doc, v.id);
      const g = document.createElementNS(SVG_NS, "g");
      const classes = ["node", `player-${playerOf(v)}`];
      if (v.id === selection) classes.push("selected");
      if (v.id === goal) classes.push("goal");
      if (isBasicEvent(v)) classes.push("be");
      g.setAttribute("class", classes.join(" "));
      g.setAttribute("transform", `translate(${p.x},${p.y})`);

      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("width", String(NODE_W));
      rect.setAttribute("height", String(NODE_H));
      rect.setAttribute("rx", isBasicEvent(v) ? "18" : "4");
      g.appendChild(rect);

      const title = document.createElementNS(SVG_NS, "text");
      title.setAttribute("x", String(NODE_W / 2));
      title.setAttribute("y", "17");
      title.textContent = displayLabel(v);
      g.appendChild(title);

      const sub = document.createElementNS(SVG_NS, "text");
      sub.setAttribute("x", String(NODE_W / 2));
      sub.setAttribute("y", "33");
      sub.setAttribute("class", "subtitle");
      sub.textContent = isBasicEvent(v)
        ? (v.attrs.prob !== undefined ? `BE p=${v.attrs.prob}` : "BE")
        : v.attrs.type ?? "";
      g.appendChild(sub);

      g.addEventListener("pointerdown", (ev) => {
        ev.stopPropagation();
        if (this.pendingEdgeFrom && this.pendingEdgeFrom !== v.id) {
          this.callbacks.onConnect(this.pendingEdgeFrom, v.id);
          this.pendingEdgeFrom = null;
          return;
        }
        this.callbacks.onSelect(v.id);
        const at = this.clientPoint(ev);
        this.dragging = { id: v.id, dx: at.x - p.x, dy: at.y - p.y };
      });
      this.svg.appendChild(g);
    }

    this.svg.onpointermove = (ev) => {
      if (!this.dragging) return;
      const at = this.clientPoint(ev);
      this.callbacks.onMove(
        this.dragging.id,
        Math.round(at.x - this.dragging.dx),
        Math.round(at.y - this.dragging.dy),
      );
    };
  }
}
