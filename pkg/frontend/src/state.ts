import { AnswerBundle } from "./types.js";

// One in-flight query; a stale response (tagged with its query text) must
// never replace the view of a newer submission.

export interface ViewState {
  query: string;
  loading: boolean;
  bundle: AnswerBundle | null;
  lowConfidenceVisible: boolean;
  error: string | null;
}

export function initialState(): ViewState {
  return { query: "", loading: false, bundle: null, lowConfidenceVisible: false, error: null };
}

export function beginQuery(state: ViewState, query: string): ViewState {
  return { ...state, query, loading: true, lowConfidenceVisible: false, error: null };
}

export function receiveBundle(state: ViewState, forQuery: string, bundle: AnswerBundle): ViewState {
  if (forQuery !== state.query) {
    return state; // stale response for an older submission
  }
  return { ...state, loading: false, bundle, error: null };
}

export function receiveError(state: ViewState, forQuery: string, message: string): ViewState {
  if (forQuery !== state.query) {
    return state;
  }
  // previous view is retained: bundle stays as it was
  return { ...state, loading: false, error: message };
}

export function toggleLowConfidence(state: ViewState): ViewState {
  return { ...state, lowConfidenceVisible: !state.lowConfidenceVisible };
}
