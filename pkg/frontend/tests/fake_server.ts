/** A minimal in-process stand-in for the adtquant service, implementing
 * just enough of the HTTP contract (including ifRevision conflicts) to
 * exercise the client without a network.  It never computes analysis
 * values; tests feed it canned responses. */

export interface FakeModel {
  dot: string;
  revision: number;
}

export class FakeServer {
  models = new Map<string, FakeModel>();
  cannedAnalyze: unknown = { results: {}, diagnostics: [] };
  cannedEstimate: unknown = { value: 0.5, eps: 0.01, delta: 0.05 };
  log: Array<{ method: string; path: string; body?: unknown }> = [];
  private nextId = 1;

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    this.log.push({ method, path, body });
    const respond = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: {
          "Content-Type": "application/json",
          "X-AdtQuant-Version": "0.1.0-fake",
        },
      });

    if (method === "POST" && path === "/api/models") {
      const id = `model-${this.nextId++}`;
      this.models.set(id, { dot: body.content, revision: 1 });
      return respond(200, { id, diagnostics: [] });
    }
    const m = path.match(/^\/api\/models\/([^/?]+)/);
    if (m) {
      const model = this.models.get(m[1]);
      if (!model) {
        return respond(404, {
          status: 404, code: "E_NOT_FOUND", message: "unknown model",
        });
      }
      if (method === "GET" && !path.includes("/feedback")) {
        return respond(200, { dot: model.dot, revision: model.revision });
      }
      if (method === "PUT") {
        if (body.ifRevision !== undefined && body.ifRevision !== model.revision) {
          return respond(409, {
            status: 409,
            code: "E_REVISION_CONFLICT",
            message: `model is at revision ${model.revision}`,
          });
        }
        model.dot = body.content;
        model.revision += 1;
        return respond(200, { revision: model.revision, diagnostics: [] });
      }
      if (path.endsWith("/analyze")) return respond(200, this.cannedAnalyze);
      if (path.includes("/feedback")) {
        return respond(200, { diagnostics: [] });
      }
    }
    if (method === "POST" && path === "/api/estimate") {
      if (!Array.isArray(body.samples) || body.samples.length < 2) {
        return respond(400, {
          status: 400, code: "E_BODY", message: "need at least 2 samples",
        });
      }
      return respond(200, this.cannedEstimate);
    }
    return respond(404, { status: 404, code: "E_NOT_FOUND", message: path });
  };
}
