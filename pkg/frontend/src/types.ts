// Shapes of the /qa response; the UI displays these verbatim.

export interface Coordinates {
  lat: number;
  lon: number;
}

export interface Enrichment {
  description?: string;
  image?: string;
  homepage?: string;
  sitelink?: string;
  summary?: string;
  coordinates?: Coordinates;
}

export interface SpanSource {
  url: string;
  para_id: string;
  start_char: number;
  end_char: number;
  deep_link: string;
  paragraph: string;
}

export interface Answer {
  type: "entity" | "span";
  value: string;
  label?: string;
  enrichment?: Enrichment;
  source?: SpanSource;
}

export interface LowConfidenceCandidate {
  branch: string;
  score: number;
  value: string;
  interpretation?: string;
  source?: SpanSource;
}

export interface AnswerBundle {
  question: string;
  branch: "kg" | "text" | "none";
  confidence: number;
  interpretation: string | null;
  answers: Answer[];
  low_confidence: LowConfidenceCandidate[];
  presentation: string;
  diagnostics?: Record<string, unknown>;
}

export function isAnswerBundle(value: unknown): value is AnswerBundle {
  if (typeof value !== "object" || value === null) return false;
  const bundle = value as Record<string, unknown>;
  return (
    typeof bundle.question === "string" &&
    typeof bundle.branch === "string" &&
    typeof bundle.confidence === "number" &&
    typeof bundle.presentation === "string" &&
    Array.isArray(bundle.answers) &&
    Array.isArray(bundle.low_confidence)
  );
}
