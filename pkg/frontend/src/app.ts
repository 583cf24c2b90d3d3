import { sendQuery } from "./api.js";
import { renderTranscript } from "./transcript.js";
import type { ChatMessage, ClientConfig } from "./types.js";

export interface ChatAppOptions {
  fetchImpl?: typeof fetch;
}

export interface ChatApp {
  /** Validate and submit the current input; resolves when the reply landed. */
  submit(): Promise<void>;
  messages(): readonly ChatMessage[];
  isPending(): boolean;
  elements: {
    transcript: HTMLElement;
    form: HTMLFormElement;
    input: HTMLInputElement;
    send: HTMLButtonElement;
    backendUrl: HTMLInputElement;
  };
}

function buildDom(root: HTMLElement): ChatApp["elements"] {
  root.textContent = "";
  root.classList.add("chat-app");

  const settings = document.createElement("div");
  settings.className = "settings";
  const urlLabel = document.createElement("label");
  urlLabel.textContent = "Backend URL";
  const backendUrl = document.createElement("input");
  backendUrl.type = "text";
  backendUrl.name = "backend-url";
  backendUrl.placeholder = "same origin (e.g. http://localhost:8095)";
  urlLabel.append(backendUrl);
  settings.append(urlLabel);

  const transcript = document.createElement("div");
  transcript.className = "transcript";

  const form = document.createElement("form");
  form.className = "composer";
  const input = document.createElement("input");
  input.type = "text";
  input.name = "query";
  input.placeholder = "Ask about the documents…";
  input.autocomplete = "off";
  const send = document.createElement("button");
  send.type = "submit";
  send.textContent = "Send";
  form.append(input, send);

  root.append(settings, transcript, form);
  return { transcript, form, input, send, backendUrl };
}

/**
 * Wire the chat surface: one POST per submit, submission disabled while a
 * request is pending, client-side validation for empty input and a
 * malformed backend URL, append-only transcript.
 */
export function initChat(root: HTMLElement, options: ChatAppOptions = {}): ChatApp {
  const fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
  const elements = buildDom(root);
  const transcript: ChatMessage[] = [];
  let pending = false;

  const render = () => {
    renderTranscript(elements.transcript, transcript, pending);
    elements.send.disabled = pending;
  };

  const readConfig = (): ClientConfig | null => {
    const value = elements.backendUrl.value.trim();
    if (value === "") {
      return { backendUrl: "" };
    }
    try {
      new URL(value);
      return { backendUrl: value };
    } catch {
      return null;
    }
  };

  const submit = async (): Promise<void> => {
    if (pending) {
      return;
    }
    const text = elements.input.value.trim();
    if (!text) {
      elements.input.classList.add("invalid");
      return;
    }
    const cfg = readConfig();
    if (cfg === null) {
      elements.backendUrl.classList.add("invalid");
      return;
    }
    elements.input.classList.remove("invalid");
    elements.backendUrl.classList.remove("invalid");

    transcript.push({ role: "user", text, timestamp: Date.now() });
    pending = true;
    elements.input.value = "";
    render();

    const reply = await sendQuery(text, cfg, fetchImpl);
    transcript.push(reply);
    pending = false;
    render();
    elements.input.focus();
  };

  elements.form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit();
  });

  render();
  return {
    submit,
    messages: () => transcript,
    isPending: () => pending,
    elements,
  };
}
