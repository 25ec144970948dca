import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { beforeEach, describe, expect, it } from "vitest";
import { WorkbenchClient } from "../src/client.js";
import { WhatifPanel } from "../src/whatif.js";
import type { WhatifResponse } from "../src/types.js";
import { fakeFetch, json } from "./helpers.js";
import type { RecordedRequest } from "./helpers.js";

// The CLI's own answer for `whatif --measures m-audit --json` on the shared
// example case. The panel must display exactly these numbers and labels when
// the backend serves the same document over the wire.
const CLI_WHATIF_PATH = fileURLToPath(
  new URL("../../tests/data/whatif_m_audit.json", import.meta.url),
);
const CLI_WHATIF = JSON.parse(readFileSync(CLI_WHATIF_PATH, "utf-8")) as WhatifResponse;

const CASE_ID = CLI_WHATIF.case_id;
const BASE = "http://backend";

let requests: RecordedRequest[];
let panel: WhatifPanel;

function roundsPosts(): RecordedRequest[] {
  return requests.filter((r) => r.path.endsWith("/rounds"));
}

function whatifPosts(): RecordedRequest[] {
  return requests.filter((r) => r.path.endsWith("/whatif"));
}

beforeEach(() => {
  const routed = fakeFetch({
    [`POST /cases/${CASE_ID}/whatif`]: (request) => {
      const body = request.body as { measure_ids?: string[] };
      expect(body.measure_ids).toEqual(["m-audit"]);
      return json(CLI_WHATIF);
    },
    [`POST /cases/${CASE_ID}/rounds`]: () =>
      json({
        case_id: CASE_ID,
        status: "draft",
        rights: [],
        blocked_rights: [],
        errors: [],
        version: 3,
      }),
  });
  requests = routed.requests;
  panel = new WhatifPanel(new WorkbenchClient(BASE, routed.fetch), CASE_ID, () => 2);
});

describe("WhatifPanel", () => {
  it("displays exactly the deltas and labels the CLI computed for the same measures", async () => {
    await panel.toggle("m-audit");

    const rows = panel.displayRows();
    expect(rows).toHaveLength(CLI_WHATIF.rights.length);
    for (const [i, cliRight] of CLI_WHATIF.rights.entries()) {
      const row = rows[i]!;
      expect(row.rightId).toBe(cliRight.right_id);
      expect(row.deltaSteps).toBe(cliRight.risk_delta_steps);
      expect(row.changed).toBe(cliRight.changed);
      expect(row.current).toEqual(cliRight.current);
      expect(row.hypothetical).toEqual(cliRight.hypothetical);
    }

    // spelled out against the CLI table for the example case: the blocked
    // non-discrimination right improves one step and clears the gate
    const art21 = rows[0]!;
    expect(art21.deltaText).toBe("+1");
    expect(art21.current.risk.label).toBe("High/M");
    expect(art21.hypothetical.risk.label).toBe("Medium/M");
    expect(art21.current.acceptability).toBe("blocked");
    expect(art21.hypothetical.acceptability).toBe("acceptable");
    const art8 = rows[1]!;
    expect(art8.deltaText).toBe("0");
    expect(art8.changed).toBe(false);
  });

  it("only talks to the simulation route until commit", async () => {
    await panel.toggle("m-audit");
    expect(whatifPosts()).toHaveLength(1);
    expect(roundsPosts()).toHaveLength(0);
  });

  it("returns the display to current values when the last measure is untoggled", async () => {
    await panel.toggle("m-audit");
    const before = requests.length;

    await panel.toggle("m-audit");

    expect(panel.selectedMeasures).toEqual([]);
    expect(requests.length).toBe(before); // no extra round-trip to go back
    const rows = panel.displayRows();
    for (const [i, cliRight] of CLI_WHATIF.rights.entries()) {
      const row = rows[i]!;
      expect(row.current).toEqual(cliRight.current);
      expect(row.hypothetical).toEqual(cliRight.current);
      expect(row.deltaText).toBe("0");
      expect(row.changed).toBe(false);
    }
    expect(roundsPosts()).toHaveLength(0);
  });

  it("commits the toggled measures as a guarded round", async () => {
    await panel.toggle("m-audit");

    const summary = await panel.commit({ actor: "assessor", now: "2026-08-14T10:00:00Z" });

    expect(summary.version).toBe(3);
    const posted = roundsPosts();
    expect(posted).toHaveLength(1);
    const body = posted[0]?.body as Record<string, unknown>;
    expect(body.measure_ids).toEqual(["m-audit"]);
    expect(body.expected_version).toBe(2);
    expect(body.actor).toBe("assessor");
    // the exploration state is spent once the case has really moved
    expect(panel.selectedMeasures).toEqual([]);
    expect(panel.displayRows()).toEqual([]);
  });

  it("refuses to commit an empty selection without touching the network", async () => {
    await expect(panel.commit()).rejects.toThrow(/nothing to commit/);
    expect(requests).toHaveLength(0);
  });
});
