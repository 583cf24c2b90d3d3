import { vi } from "vitest";

export interface RecordedRequest {
  url: string;
  method: string;
  body: string;
}

export interface FetchStub {
  impl: typeof fetch;
  requests: RecordedRequest[];
}

/** A fetch stub that records every request and replies with a fixed body. */
export function stubFetch(body: string, status = 200, contentType = "text/plain"): FetchStub {
  const requests: RecordedRequest[] = [];
  const impl = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    requests.push({
      url: String(input),
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? init.body : "",
    });
    return new Response(body, {
      status,
      headers: { "Content-Type": contentType },
    });
  }) as unknown as typeof fetch;
  return { impl, requests };
}

/** A fetch stub whose single response resolves only when told to. */
export function deferredFetch(body: string): FetchStub & { release(): void } {
  const requests: RecordedRequest[] = [];
  let release: () => void = () => undefined;
  const gate = new Promise<void>((resolve) => {
    release = resolve;
  });
  const impl = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    requests.push({
      url: String(input),
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? init.body : "",
    });
    await gate;
    return new Response(body, { status: 200 });
  }) as unknown as typeof fetch;
  return { impl, requests, release };
}

export const FAILURE_JSON = '{"Status": "Failure --- some error occurred"}';
