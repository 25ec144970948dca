import type {
  CaseDocument,
  CaseListing,
  CaseSummary,
  ErrorEnvelope,
  LedgerVerification,
  RadialData,
  RoundsRequest,
  RoundsResponse,
  ValidationReport,
  WhatifRequest,
  WhatifResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** A backend refusal, carrying the machine-readable code from the envelope. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly paths: string[];

  constructor(status: number, envelope: ErrorEnvelope) {
    super(envelope.message);
    this.name = "ApiError";
    this.code = envelope.code;
    this.status = status;
    this.paths = envelope.paths ?? [];
  }
}

/**
 * Thin client for the fria serve protocol. All risk values arrive computed;
 * the client moves JSON and raises ApiError on refusals, nothing more.
 */
export class WorkbenchClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    // bind: bare window.fetch loses its receiver when called as a value
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  async listCases(): Promise<CaseSummary[]> {
    const listing = await this.requestJson<CaseListing>("GET", "/cases");
    return listing.cases;
  }

  getCase(caseId: string): Promise<CaseDocument> {
    return this.requestJson("GET", `/cases/${encodeURIComponent(caseId)}`);
  }

  validate(caseId: string): Promise<ValidationReport> {
    return this.requestJson("POST", `/cases/${encodeURIComponent(caseId)}/validate`, {});
  }

  postRounds(caseId: string, body: RoundsRequest): Promise<RoundsResponse> {
    return this.requestJson("POST", `/cases/${encodeURIComponent(caseId)}/rounds`, body);
  }

  whatif(caseId: string, body: WhatifRequest): Promise<WhatifResponse> {
    return this.requestJson("POST", `/cases/${encodeURIComponent(caseId)}/whatif`, body);
  }

  async reportMarkdown(caseId: string): Promise<string> {
    const response = await this.send(
      "GET",
      `/cases/${encodeURIComponent(caseId)}/report?format=markdown`,
    );
    return response.text();
  }

  radial(caseId: string, rounds?: number[]): Promise<RadialData> {
    let path = `/cases/${encodeURIComponent(caseId)}/radial`;
    if (rounds && rounds.length > 0) {
      path += `?rounds=${rounds.join(",")}`;
    }
    return this.requestJson("GET", path);
  }

  verifyLedger(caseId: string): Promise<LedgerVerification> {
    return this.requestJson("GET", `/cases/${encodeURIComponent(caseId)}/ledger/verify`);
  }

  private async requestJson<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.send(method, path, body);
    return (await response.json()) as T;
  }

  private async send(method: string, path: string, body?: unknown): Promise<Response> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await readEnvelope(response));
    }
    return response;
  }
}

async function readEnvelope(response: Response): Promise<ErrorEnvelope> {
  try {
    const doc = (await response.json()) as Partial<ErrorEnvelope>;
    return {
      code: doc.code ?? "unknown-error",
      message: doc.message ?? `request failed with status ${response.status}`,
      paths: doc.paths ?? [],
    };
  } catch {
    return {
      code: "unknown-error",
      message: `request failed with status ${response.status}`,
      paths: [],
    };
  }
}
