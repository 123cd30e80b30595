/** Typed client for the adtquant HTTP JSON API.  All quantitative values
 * shown in the UI originate from these responses. */

export interface Diagnostic {
  code: string;
  severity: string;
  message: string;
  vertex?: string | null;
}

export interface ProbResult {
  value: number;
  eps?: number;
  delta?: number;
  intervalLo?: number;
  intervalHi?: number;
}

export interface PairResult {
  pair: [number, number];
  eps?: [number, number];
  delta?: number;
  intervalLo?: [number, number];
  intervalHi?: [number, number];
}

export type VertexResult = ProbResult | PairResult;

export interface AnalyzeResponse {
  results: Record<string, VertexResult>;
  diagnostics: Diagnostic[];
}

export interface AnalyzeRequest {
  domain: string;
  pac: boolean;
  deltaRule?: string;
}

export interface EstimateResponse {
  value: number;
  eps: number;
  delta: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public diagnostics: Diagnostic[] = [],
  ) {
    super(message);
  }
}

type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  /** Server version from the last response's X-AdtQuant-Version header. */
  serverVersion: string | null = null;

  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchFn = (...args) => fetch(...args),
  ) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const resp = await this.fetchFn(this.baseUrl + path, init);
    const version = resp.headers.get("X-AdtQuant-Version");
    if (version) this.serverVersion = version;
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(
        resp.status,
        payload.code ?? "E_UNKNOWN",
        payload.message ?? `request failed with status ${resp.status}`,
        payload.diagnostics ?? [],
      );
    }
    return payload as T;
  }

  createModel(content: string, format = "dot") {
    return this.call<{ id: string; diagnostics: Diagnostic[] }>(
      "POST", "/api/models", { format, content });
  }

  getModel(id: string) {
    return this.call<{ dot: string; revision: number }>(
      "GET", `/api/models/${id}`);
  }

  putModel(id: string, content: string, ifRevision?: number, format = "dot") {
    const body: Record<string, unknown> = { format, content };
    if (ifRevision !== undefined) body.ifRevision = ifRevision;
    return this.call<{ revision: number; diagnostics: Diagnostic[] }>(
      "PUT", `/api/models/${id}`, body);
  }

  analyze(id: string, req: AnalyzeRequest) {
    return this.call<AnalyzeResponse>(
      "POST", `/api/models/${id}/analyze`, req);
  }

  exportModel(id: string, target: string, horizon?: number) {
    const body: Record<string, unknown> = { target };
    if (horizon !== undefined) body.horizon = horizon;
    return this.call<{ files: Record<string, string>; diagnostics: Diagnostic[] }>(
      "POST", `/api/models/${id}/export`, body);
  }

  estimate(samples: number[], delta: number) {
    return this.call<EstimateResponse>(
      "POST", "/api/estimate", { samples, delta });
  }

  generate(size: number, seed: number) {
    return this.call<{ id: string }>("POST", "/api/generate", { size, seed });
  }

  feedback(id: string, target: string) {
    return this.call<{ diagnostics: Diagnostic[] }>(
      "GET", `/api/models/${id}/feedback?target=${encodeURIComponent(target)}`);
  }
}
