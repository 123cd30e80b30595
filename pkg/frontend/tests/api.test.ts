import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { FakeServer } from "./fake_server.js";

const DOT = 'digraph adt {\n  a [goal="true", prob="0.5", type="BE"];\n}\n';

describe("api client", () => {
  it("creates, fetches, and updates models", async () => {
    const srv = new FakeServer();
    const api = new ApiClient("", srv.fetch);
    const { id } = await api.createModel(DOT);
    const got = await api.getModel(id);
    expect(got.dot).toBe(DOT);
    expect(got.revision).toBe(1);
    const put = await api.putModel(id, DOT, 1);
    expect(put.revision).toBe(2);
    expect(api.serverVersion).toBe("0.1.0-fake");
  });

  it("raises typed errors with status and code", async () => {
    const srv = new FakeServer();
    const api = new ApiClient("", srv.fetch);
    const err = await api.getModel("nope").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.code).toBe("E_NOT_FOUND");
  });

  it("surfaces revision conflicts as 409", async () => {
    const srv = new FakeServer();
    const api = new ApiClient("", srv.fetch);
    const { id } = await api.createModel(DOT);
    await api.putModel(id, DOT, 1);
    const err = await api.putModel(id, DOT, 1).catch((e) => e);
    expect(err.status).toBe(409);
    expect(err.code).toBe("E_REVISION_CONFLICT");
  });

  it("passes estimate samples through and validates n >= 2 server-side", async () => {
    const srv = new FakeServer();
    srv.cannedEstimate = { value: 0.233, eps: 0.026214, delta: 0.05 };
    const api = new ApiClient("", srv.fetch);
    const est = await api.estimate([1, 0, 0], 0.05);
    expect(est.value).toBe(0.233);
    const err = await api.estimate([1], 0.05).catch((e) => e);
    expect(err.status).toBe(400);
  });
});
