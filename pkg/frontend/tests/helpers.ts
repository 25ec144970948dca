import type { FetchLike } from "../src/client.js";

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
}

export type RouteHandler = (req: RecordedRequest) => Response;

/**
 * Fetch double keyed by "METHOD /path". Every call is recorded so tests can
 * prove which routes were (or were not) hit.
 */
export function fakeFetch(routes: Record<string, RouteHandler>): {
  fetch: FetchLike;
  requests: RecordedRequest[];
} {
  const requests: RecordedRequest[] = [];
  const impl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = typeof init?.body === "string" ? JSON.parse(init.body) : null;
    const request = { method, path, body };
    requests.push(request);
    const handler = routes[`${method} ${path}`];
    if (handler === undefined) {
      return json({ code: "unknown-case", message: `no such route: ${method} ${path}`, paths: [] }, 404);
    }
    return handler(request);
  };
  return { fetch: impl, requests };
}

/** A JSON response the way the backend sends one: canonical body, newline. */
export function json(doc: unknown, status = 200): Response {
  return new Response(JSON.stringify(doc) + "\n", {
    status,
    headers: { "Content-Type": "application/json; charset=utf-8" },
  });
}

export function text(body: string, contentType: string, status = 200): Response {
  return new Response(body, { status, headers: { "Content-Type": contentType } });
}
