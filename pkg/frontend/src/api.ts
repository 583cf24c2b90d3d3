import type { ChatMessage, ClientConfig } from "./types.js";

/** Friendly text shown instead of the backend's raw failure payload. */
export const FAILURE_NOTICE = "The server could not process this query.";

function message(role: ChatMessage["role"], text: string): ChatMessage {
  return { role, text, timestamp: Date.now() };
}

export function endpointFor(cfg: ClientConfig): string {
  return `${cfg.backendUrl.replace(/\/+$/, "")}/docqna`;
}

/**
 * The backend signals every request-level failure as HTTP 200 with a JSON
 * object carrying a "Status" field; anything else is the answer verbatim.
 */
function isFailurePayload(body: string): boolean {
  try {
    const parsed: unknown = JSON.parse(body);
    return (
      typeof parsed === "object" &&
      parsed !== null &&
      !Array.isArray(parsed) &&
      "Status" in parsed
    );
  } catch {
    return false;
  }
}

/**
 * Send one query to the service and fold the outcome into a ChatMessage.
 *
 * Emits exactly one POST whose JSON body has a single "query" field. Never
 * throws: network failures and unexpected statuses become error-role
 * messages naming the problem.
 */
export async function sendQuery(
  text: string,
  cfg: ClientConfig,
  fetchImpl: typeof fetch = fetch,
): Promise<ChatMessage> {
  let response: Response;
  try {
    response = await fetchImpl(endpointFor(cfg), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query: text }),
    });
  } catch (err) {
    const reason = err instanceof Error ? err.message : String(err);
    return message("error", `Network error: ${reason}`);
  }

  let body: string;
  try {
    body = await response.text();
  } catch (err) {
    const reason = err instanceof Error ? err.message : String(err);
    return message("error", `Network error: ${reason}`);
  }

  if (isFailurePayload(body)) {
    return message("error", FAILURE_NOTICE);
  }
  if (!response.ok) {
    return message("error", `The server responded with HTTP ${response.status}.`);
  }
  return message("assistant", body);
}
