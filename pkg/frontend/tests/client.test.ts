import { describe, expect, it } from "vitest";
import { ApiError, WorkbenchClient } from "../src/client.js";
import { fakeFetch, json, text } from "./helpers.js";

const BASE = "http://backend";

describe("WorkbenchClient", () => {
  it("lists cases from the listing envelope", async () => {
    const { fetch } = fakeFetch({
      "GET /cases": () =>
        json({
          cases: [
            {
              case_id: "fria-2026-0042",
              title: "Family aid scoring",
              status: "draft",
              version: 1,
              rights: ["eu-charter:art-21"],
              file: "case.json",
            },
          ],
        }),
    });
    const client = new WorkbenchClient(BASE, fetch);
    const cases = await client.listCases();
    expect(cases).toHaveLength(1);
    expect(cases[0]?.case_id).toBe("fria-2026-0042");
  });

  it("raises ApiError with the backend code and status", async () => {
    const { fetch } = fakeFetch({
      "POST /cases/c1/rounds": () =>
        json({ code: "version-conflict", message: "case is at version 4", paths: [] }, 409),
    });
    const client = new WorkbenchClient(BASE, fetch);
    const error = await client.postRounds("c1", {}).catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    const apiError = error as ApiError;
    expect(apiError.code).toBe("version-conflict");
    expect(apiError.status).toBe(409);
    expect(apiError.message).toContain("version 4");
  });

  it("survives a non-JSON error body", async () => {
    const { fetch } = fakeFetch({
      "GET /cases/c1": () => text("gateway exploded", "text/html", 502),
    });
    const client = new WorkbenchClient(BASE, fetch);
    const error = await client.getCase("c1").catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).code).toBe("unknown-error");
    expect((error as ApiError).status).toBe(502);
  });

  it("fetches the markdown report as text", async () => {
    const { fetch } = fakeFetch({
      "GET /cases/c1/report?format=markdown": () =>
        text("# Fundamental rights impact assessment\n", "text/markdown; charset=utf-8"),
    });
    const client = new WorkbenchClient(BASE, fetch);
    const report = await client.reportMarkdown("c1");
    expect(report).toContain("# Fundamental rights impact assessment");
  });

  it("passes round selection to the radial route", async () => {
    const { fetch, requests } = fakeFetch({
      "GET /cases/c1/radial?rounds=0,2": () =>
        json({ case_id: "c1", projection: "", axes: [], series: [] }),
    });
    const client = new WorkbenchClient(BASE, fetch);
    await client.radial("c1", [0, 2]);
    expect(requests[0]?.path).toBe("/cases/c1/radial?rounds=0,2");
  });

  it("escapes case ids in paths", async () => {
    const { fetch, requests } = fakeFetch({});
    const client = new WorkbenchClient(BASE, fetch);
    await client.getCase("needs space").catch(() => undefined);
    expect(requests[0]?.path).toBe("/cases/needs%20space");
  });

  it("tolerates a trailing slash in the base url", async () => {
    const { fetch, requests } = fakeFetch({
      "GET /cases": () => json({ cases: [] }),
    });
    const client = new WorkbenchClient(`${BASE}/`, fetch);
    await client.listCases();
    expect(requests[0]?.path).toBe("/cases");
  });
});
