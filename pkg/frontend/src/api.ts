import { AnswerBundle, isAnswerBundle } from "./types.js";

// Base URL is configurable at build/deploy time via a global, falling back
// to same-origin.
declare global {
  interface Window {
    SITEQA_API_BASE?: string;
  }
}

export function apiBase(): string {
  return (typeof window !== "undefined" && window.SITEQA_API_BASE) || "";
}

export async function fetchAnswer(
  question: string,
  kb = "kg,text",
  signal?: AbortSignal,
): Promise<AnswerBundle> {
  const params = new URLSearchParams({ question, kb, lang: "en" });
  const response = await fetch(`${apiBase()}/qa?${params.toString()}`, { signal });
  if (!response.ok) {
    const detail = await response.text();
    throw new Error(`qa request failed (${response.status}): ${detail}`);
  }
  const body: unknown = await response.json();
  if (!isAnswerBundle(body)) {
    throw new Error("malformed answer bundle");
  }
  return body;
}
