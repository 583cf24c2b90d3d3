import { beforeEach, describe, expect, it } from "vitest";

import { renderBubble, renderTranscript } from "../src/transcript.js";
import type { ChatMessage } from "../src/types.js";

function msg(role: ChatMessage["role"], text: string): ChatMessage {
  return { role, text, timestamp: Date.now() };
}

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement("div");
  document.body.append(container);
});

describe("renderTranscript", () => {
  it("shows a usage hint for an empty transcript", () => {
    renderTranscript(container, [], false);
    const hint = container.querySelector(".empty-hint");
    expect(hint).not.toBeNull();
    expect(hint!.textContent).toMatch(/ask a question/i);
  });

  it("renders one bubble per message, in arrival order", () => {
    renderTranscript(container, [
      msg("user", "first question"),
      msg("assistant", "the reply"),
      msg("user", "second question"),
    ], false);
    const bubbles = [...container.querySelectorAll(".bubble")];
    expect(bubbles).toHaveLength(3);
    expect(bubbles[0]!.className).toContain("user");
    expect(bubbles[1]!.className).toContain("assistant");
    expect(bubbles[2]!.className).toContain("user");
    expect(bubbles[0]!.textContent).toContain("first question");
  });

  it("marks error messages with a distinct class", () => {
    renderTranscript(container, [msg("error", "boom")], false);
    expect(container.querySelector(".bubble.error")).not.toBeNull();
  });

  it("shows a pending indicator while a request is in flight", () => {
    renderTranscript(container, [msg("user", "q")], true);
    expect(container.querySelector(".bubble.pending")).not.toBeNull();
    renderTranscript(container, [msg("user", "q")], false);
    expect(container.querySelector(".bubble.pending")).toBeNull();
  });

  it("re-rendering replaces content instead of duplicating bubbles", () => {
    const messages = [msg("user", "q"), msg("assistant", "a")];
    renderTranscript(container, messages, false);
    renderTranscript(container, messages, false);
    expect(container.querySelectorAll(".bubble")).toHaveLength(2);
  });
});

describe("markup safety", () => {
  it("renders angle brackets as text, never as elements", () => {
    const hostile = '<img src=x onerror="alert(1)"><script>alert(2)</script>';
    renderTranscript(container, [msg("assistant", hostile)], false);
    expect(container.querySelector("img")).toBeNull();
    expect(container.querySelector("script")).toBeNull();
    expect(container.querySelector(".bubble-text")!.textContent).toBe(hostile);
  });

  it("renderBubble escapes user text too", () => {
    const bubble = renderBubble(msg("user", "<b>bold?</b>"));
    expect(bubble.querySelector("b")).toBeNull();
    expect(bubble.textContent).toContain("<b>bold?</b>");
  });
});
