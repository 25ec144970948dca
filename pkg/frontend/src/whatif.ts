import { WorkbenchClient } from "./client.js";
import type {
  RoundsResponse,
  WhatifRight,
  WhatifResponse,
  WhatifSide,
} from "./types.js";

/** One table row of the exploration view. Every value is server-computed. */
export interface WhatifDisplayRow {
  rightId: string;
  title: string;
  changed: boolean;
  current: WhatifSide;
  hypothetical: WhatifSide;
  deltaSteps: number;
  /** Signed step count as the CLI prints it: "+1", "0", "-1". */
  deltaText: string;
}

export interface CommitOptions {
  actor?: string;
  now?: string;
}

/**
 * Measure exploration against a live case. Toggling a measure asks the
 * backend to simulate it; the panel itself never computes a rank and never
 * writes. The case changes only when commit() posts the selected measures
 * as a real round, guarded by the caller's snapshot version.
 */
export class WhatifPanel {
  private readonly client: WorkbenchClient;
  private readonly caseId: string;
  private readonly expectedVersion: () => number | null;
  private toggled = new Set<string>();
  private lastResponse: WhatifResponse | null = null;
  // current-state rows from the latest simulation, kept so that untoggling
  // back to an empty selection restores the pre-measure display
  private currentRows: WhatifRight[] | null = null;

  constructor(client: WorkbenchClient, caseId: string, expectedVersion: () => number | null) {
    this.client = client;
    this.caseId = caseId;
    this.expectedVersion = expectedVersion;
  }

  get selectedMeasures(): string[] {
    return [...this.toggled].sort();
  }

  isToggled(measureId: string): boolean {
    return this.toggled.has(measureId);
  }

  /**
   * Flip one measure and refresh the simulation. Untoggling the last
   * measure skips the round-trip: the display falls back to the current
   * values remembered from the previous answer.
   */
  async toggle(measureId: string): Promise<void> {
    if (this.toggled.has(measureId)) {
      this.toggled.delete(measureId);
    } else {
      this.toggled.add(measureId);
    }
    if (this.toggled.size === 0) {
      this.lastResponse = null;
      return;
    }
    const response = await this.client.whatif(this.caseId, {
      measure_ids: this.selectedMeasures,
    });
    this.lastResponse = response;
    this.currentRows = response.rights;
  }

  /**
   * Rows to render. With measures toggled these mirror the last simulation;
   * with none toggled they show the unmodified current state (both sides
   * equal, delta 0). Empty until a simulation has run at least once.
   */
  displayRows(): WhatifDisplayRow[] {
    if (this.lastResponse !== null) {
      return this.lastResponse.rights.map((right) => ({
        rightId: right.right_id,
        title: right.title,
        changed: right.changed,
        current: right.current,
        hypothetical: right.hypothetical,
        deltaSteps: right.risk_delta_steps,
        deltaText: right.changed ? formatSigned(right.risk_delta_steps) : "0",
      }));
    }
    if (this.currentRows !== null) {
      return this.currentRows.map((right) => ({
        rightId: right.right_id,
        title: right.title,
        changed: false,
        current: right.current,
        hypothetical: right.current,
        deltaSteps: 0,
        deltaText: "0",
      }));
    }
    return [];
  }

  /**
   * Turn the toggled selection into a real mitigation round. This is the
   * only write path out of the panel; afterwards the exploration state is
   * cleared because the case has moved on.
   */
  async commit(options: CommitOptions = {}): Promise<RoundsResponse> {
    const measureIds = this.selectedMeasures;
    if (measureIds.length === 0) {
      throw new Error("no measures toggled; nothing to commit");
    }
    const body: Parameters<WorkbenchClient["postRounds"]>[1] = {
      measure_ids: measureIds,
    };
    const version = this.expectedVersion();
    if (version !== null) {
      body.expected_version = version;
    }
    if (options.actor !== undefined) body.actor = options.actor;
    if (options.now !== undefined) body.now = options.now;
    const summary = await this.client.postRounds(this.caseId, body);
    this.toggled.clear();
    this.lastResponse = null;
    this.currentRows = null;
    return summary;
  }
}

function formatSigned(steps: number): string {
  return steps > 0 ? `+${steps}` : String(steps);
}
