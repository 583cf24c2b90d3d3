export type MessageRole = "user" | "assistant" | "error";

export interface ChatMessage {
  role: MessageRole;
  text: string;
  /** Client clock, milliseconds since epoch. */
  timestamp: number;
}

export interface ClientConfig {
  /** Base URL of the QA service; empty string means same-origin. */
  backendUrl: string;
}
