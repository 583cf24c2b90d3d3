import type { ChatMessage } from "./types.js";

const EMPTY_HINT = "Ask a question about the indexed documents to get started.";

function formatClock(timestamp: number): string {
  const date = new Date(timestamp);
  const hh = String(date.getHours()).padStart(2, "0");
  const mm = String(date.getMinutes()).padStart(2, "0");
  return `${hh}:${mm}`;
}

/**
 * One chat bubble. All server- and user-provided text goes through
 * textContent, so markup in a message is rendered inert.
 */
export function renderBubble(msg: ChatMessage): HTMLElement {
  const bubble = document.createElement("div");
  bubble.className = `bubble ${msg.role}`;

  const text = document.createElement("p");
  text.className = "bubble-text";
  text.textContent = msg.text;

  const time = document.createElement("time");
  time.dateTime = new Date(msg.timestamp).toISOString();
  time.textContent = formatClock(msg.timestamp);

  bubble.append(text, time);
  return bubble;
}

/**
 * Re-render the transcript: bubbles in arrival order, an animated pending
 * indicator while a request is in flight, a usage hint when empty, and
 * auto-scroll pinned to the newest message.
 */
export function renderTranscript(
  container: HTMLElement,
  messages: readonly ChatMessage[],
  pending: boolean,
): void {
  container.textContent = "";

  if (messages.length === 0 && !pending) {
    const hint = document.createElement("p");
    hint.className = "empty-hint";
    hint.textContent = EMPTY_HINT;
    container.append(hint);
    return;
  }

  for (const msg of messages) {
    container.append(renderBubble(msg));
  }

  if (pending) {
    const indicator = document.createElement("div");
    indicator.className = "bubble pending";
    indicator.setAttribute("role", "status");
    indicator.textContent = "…";
    container.append(indicator);
  }

  container.scrollTop = container.scrollHeight;
}
